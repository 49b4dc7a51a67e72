//! Gates on the zero tables shipped in data/: counting-formula audits,
//! stated precision, anchor ordinates, and tail-completion against frozen
//! closed forms. Run after `python3 scripts/compute_zeros.py` has produced
//! the tables (or point MERTENS_BIAS_DATA at another copy).

use std::path::PathBuf;

use mertens_core::zeros::{
    gamma_square_sum, load_zeros, merge, quarter_shift_full_estimate, quarter_shift_sum,
    validate_counts, Component, ZeroSet,
};

/// Σ_{γ>0} 1/(1/4+γ²) over all zeta zeros: 1 + γ_E/2 − ln(4π)/2.
const T1_ZETA: f64 = 0.023095708966121034;
/// Σ_{γ>0} 1/γ² over all zeta zeros: T1_ZETA plus Σ 1/(4γ²(γ²+1/4)),
/// the correction summed over 300 exact zeros with an analytic tail.
const GAMMA_SQ_ZETA: f64 = 0.023104993118293946;

fn data_dir() -> PathBuf {
    let dir = std::env::var_os("MERTENS_BIAS_DATA")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"));
    assert!(
        dir.join("zeros_zeta.txt").exists(),
        "zero tables not found in {} — run `python3 scripts/compute_zeros.py` \
         from the repository root (or set MERTENS_BIAS_DATA)",
        dir.display()
    );
    dir
}

fn zeta() -> ZeroSet {
    load_zeros(&data_dir().join("zeros_zeta.txt"), Component::Zeta).unwrap()
}

fn chi(q: u64) -> ZeroSet {
    let field = mertens_core::Field::from_q(q).unwrap();
    let delta = match &field {
        mertens_core::Field::Quadratic(f) => f.discriminant(),
        mertens_core::Field::Rational => unreachable!(),
    };
    load_zeros(
        &data_dir().join(format!("zeros_chi_q{q}.txt")),
        Component::LChi(delta),
    )
    .unwrap()
}

#[test]
fn counting_formula_audit_passes_for_every_component() {
    let zeta = zeta();
    for set in [zeta.clone(), chi(5), chi(13)] {
        let t = 10_000.0f64.min(set.max_ordinate() - 1.0);
        let report = validate_counts(&set, t, 3.0).unwrap();
        assert!(
            report.passed,
            "{}: observed {} vs main term {:.2} (violations {})",
            set.component, report.observed, report.main_term, report.window_violations
        );
    }
    for q in [5u64, 13] {
        let merged = merge(&zeta, &chi(q)).unwrap();
        let t = 10_000.0f64.min(merged.max_ordinate() - 1.0);
        let report = validate_counts(&merged, t, 3.0).unwrap();
        assert!(report.passed, "merged q = {q} failed the counting audit");
    }
}

#[test]
fn tables_state_at_least_twelve_decimals() {
    for set in [zeta(), chi(5), chi(13)] {
        assert!(
            set.stated_precision >= 12,
            "{} states only {} decimals",
            set.component,
            set.stated_precision
        );
    }
}

#[test]
fn anchor_ordinates_sit_where_they_must() {
    let zeta = zeta();
    assert!(
        (zeta.ordinates()[0] - 14.134725141734694).abs() < 1e-9,
        "first zeta ordinate is {}",
        zeta.ordinates()[0]
    );
    // ζ_K for q = 5 inherits the low χ_5 zero near 6.18, below every ζ zero.
    let merged = merge(&zeta, &chi(5)).unwrap();
    assert!(
        merged.ordinates()[0] < 14.13,
        "merged q = 5 should start at a chi_5 ordinate, got {}",
        merged.ordinates()[0]
    );
    assert!(zeta.max_ordinate() >= 10_000.0, "zeta table too short");
    assert!(chi(5).max_ordinate() >= 10_000.0, "chi_5 table too short");
    assert!(chi(13).max_ordinate() >= 10_000.0, "chi_13 table too short");
}

#[test]
fn zeta_tail_completion_matches_the_closed_form() {
    let est = quarter_shift_full_estimate(&zeta());
    assert!(
        (est - T1_ZETA).abs() < 3e-10,
        "T1 estimator {est:.15} vs closed form {T1_ZETA:.15}"
    );
}

#[test]
fn gamma_square_sum_completes_to_the_classical_constant() {
    // Complete Σ1/γ² with the quarter-shift machinery: beyond the table the
    // two sums differ by Σ 1/(γ²(γ²+1/4)) < 1/(4T³) ≈ 2.5e-13, so
    //   Σ1/γ² ≈ T1_full + (Σ_partial 1/γ² − Σ_partial 1/(1/4+γ²)).
    let zeta = zeta();
    let est =
        quarter_shift_full_estimate(&zeta) + gamma_square_sum(&zeta) - quarter_shift_sum(&zeta);
    assert!(
        (est - GAMMA_SQ_ZETA).abs() < 1e-8,
        "sum of 1/gamma^2 completes to {est:.12}, expected {GAMMA_SQ_ZETA:.12}"
    );
}

#[test]
fn thinned_data_fails_the_audit() {
    let zeta = zeta();
    let ords = zeta.ordinates();
    // Delete 50 consecutive ordinates from the middle of the table: the
    // windowed audit must notice the deficit.
    let mid = ords.len() / 2;
    let mut thinned: Vec<f64> = ords[..mid].to_vec();
    thinned.extend_from_slice(&ords[mid + 50..]);
    let thinned = ZeroSet::new(Component::Zeta, thinned, zeta.stated_precision).unwrap();
    let t = 10_000.0f64.min(thinned.max_ordinate() - 1.0);
    let report = validate_counts(&thinned, t, 3.0).unwrap();
    assert!(
        !report.passed,
        "audit accepted a table missing 50 interior zeros"
    );
}
