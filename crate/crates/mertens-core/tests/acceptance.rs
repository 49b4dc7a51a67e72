//! The nine acceptance criteria, one test each, each printing a single
//! PASS/FAIL line. Run with
//!
//! ```text
//! cargo test -p mertens-core --test acceptance -- --test-threads=1 --nocapture
//! ```
//!
//! Criteria 1–4 and 6 read the zero tables from data/ (or the directory
//! named by MERTENS_BIAS_DATA); the rest are self-contained.

mod common;

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mertens_core::density::{
    delta_density, monte_carlo_density, omega_hat, raw_poisson_delta, CompensatingPolynomial,
    DensityParams,
};
use mertens_core::field::{FieldInvariants, QuadraticField};
use mertens_core::numerics::EULER_GAMMA;
use mertens_core::observables::{cramer_integral, loglog_gamma_identity_check, psi_check};
use mertens_core::sieve::{chebyshev_check, sieve, sieve_with_segment_size, CheckpointGrid};
use mertens_core::zeros::{load_zeros, merge, Component, ZeroSet};
use mertens_core::Field;

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("[criterion {n}] {verdict} — {name}: {detail}");
    assert!(pass, "criterion {n} ({name}) failed: {detail}");
}

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

fn merged_zeros(q: u64) -> ZeroSet {
    let dir = data_dir();
    let zeta = load_zeros(&dir.join("zeros_zeta.txt"), Component::Zeta).unwrap();
    let field = QuadraticField::new(q).unwrap();
    let chi = load_zeros(
        &dir.join(format!("zeros_chi_q{q}.txt")),
        Component::LChi(field.discriminant()),
    )
    .unwrap();
    merge(&zeta, &chi).unwrap()
}

#[test]
fn c1_table_1_reproduction() {
    let mut pass = true;
    let mut detail = String::new();
    for (q, target) in [(5u64, 0.9876), (13, 0.9298)] {
        let zeros = merged_zeros(q);
        let t0 = Instant::now();
        let result = delta_density(&DensityParams::default(), &zeros).unwrap();
        let secs = t0.elapsed().as_secs_f64();
        let err = (result.delta - target).abs();
        pass &= err <= 5e-4 && !result.low_confidence && secs <= 300.0;
        detail.push_str(&format!(
            "q={q}: delta={:.6} vs {target} (|err|={err:.2e}, {secs:.1}s); ",
            result.delta
        ));
    }
    report(1, "Table 1 reproduction", pass, detail.trim_end());
}

#[test]
fn c2_b1_reproduction() {
    // The paper prints both values as truncated expansions ("-0.000292143…"),
    // so six-significant-figure agreement means our b1 starts with exactly
    // those digits: truncating |b1| at the 1e-9 place must reproduce the
    // printed string.
    let mut pass = true;
    let mut detail = String::new();
    for (q, target) in [(5u64, -0.000292143), (13, -0.000307347)] {
        let zeros = merged_zeros(q);
        let result = delta_density(&DensityParams::default(), &zeros).unwrap();
        let truncated = (result.b1.abs() * 1e9).floor() as i64;
        let printed = (target.abs() * 1e9).round() as i64;
        pass &= result.b1 < 0.0 && truncated == printed;
        detail.push_str(&format!(
            "q={q}: b1={:.12} truncates to -0.000{truncated} vs printed {target}; ",
            result.b1
        ));
    }
    report(2, "b1 reproduction (X = 9999)", pass, detail.trim_end());
}

#[test]
fn c3_error_budget_reproduction() {
    let mut pass = true;
    let mut detail = String::new();
    for (q, m, trunc_limit, prod_limit) in [(5u64, 42usize, 3e-10, 7.3e-7), (13, 53, 7e-13, 2e-7)] {
        let zeros = merged_zeros(q);
        let params = DensityParams {
            m: Some(m),
            ..DensityParams::default()
        };
        let result = delta_density(&params, &zeros).unwrap();
        pass &= result.truncation_error < trunc_limit && result.product_error < prod_limit;
        detail.push_str(&format!(
            "q={q} (M={m}): truncation {:.2e} < {trunc_limit:.1e}, product {:.2e} < {prod_limit:.1e}; ",
            result.truncation_error, result.product_error
        ));
    }
    report(3, "error budgets", pass, detail.trim_end());
}

#[test]
fn c4_monte_carlo_oracle_agreement() {
    let t0 = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for q in [5u64, 13] {
        let truncated = merged_zeros(q).truncated(1_000.0).unwrap();
        let (mc, se) = monte_carlo_density(&truncated, 1_000_000, 42).unwrap();
        // The matched-cutoff analytic value: the bare Poisson sum over the
        // same truncated set with p ≡ 1 (no compensation — the tail the
        // polynomial compensates is exactly what the truncation removed).
        let analytic = raw_poisson_delta(
            1.0 / 20.0,
            25.0,
            &CompensatingPolynomial::unit(),
            truncated.ordinates(),
        );
        let err = (mc - analytic).abs();
        let bound = 3.0 * se + 1e-6;
        pass &= err <= bound;
        detail.push_str(&format!(
            "q={q}: MC {mc:.6}±{se:.1e} vs Poisson {analytic:.6} (|err|={err:.2e} ≤ {bound:.2e}); "
        ));
    }
    let secs = t0.elapsed().as_secs_f64();
    pass &= secs <= 120.0;
    detail.push_str(&format!("{secs:.1}s"));
    report(4, "Monte-Carlo vs Poisson delta", pass, &detail);
}

#[test]
fn c5_rosser_schoenfeld_positivity() {
    let t0 = Instant::now();
    let x_max = 10_000_000u64;
    let grid = CheckpointGrid::default_grid(x_max);
    let result = sieve(&Field::Rational, x_max, &grid).unwrap();
    let mut min_margin = f64::INFINITY;
    let mut argmin = 0u64;
    for (i, &x) in result.checkpoints.iter().enumerate() {
        if x < 2 {
            continue;
        }
        let margin = result.log_mertens_sum[i].exp() - EULER_GAMMA.exp() * (x as f64).ln();
        if margin < min_margin {
            min_margin = margin;
            argmin = x;
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    let pass = min_margin > 0.0 && secs <= 180.0;
    report(
        5,
        "Rosser–Schoenfeld positivity (K = Q, x ≤ 1e7)",
        pass,
        &format!(
            "min(product − e^γ·log x) = {min_margin:.6} at x = {argmin} over {} checkpoints, {secs:.1}s",
            result.checkpoints.len()
        ),
    );
}

#[test]
fn c6_explicit_formula_residuals() {
    // Average |psi residual| over a band of x around 1e4 for each decade of
    // T; the averages must fall as T grows and the implied constant in
    // O(x log^2 x / T) must stay below 10.
    let xs: Vec<u64> = (8_000..=12_000).step_by(500).collect();
    let grid = CheckpointGrid::explicit(xs.clone()).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    for q in [5u64, 13] {
        let zeros = merged_zeros(q);
        let field = Field::from_q(q).unwrap();
        let result = sieve(&field, 12_000, &grid).unwrap();
        let mut averages = Vec::new();
        let mut max_fitted = 0.0f64;
        for t in [100.0, 1_000.0, 10_000.0] {
            let mut total = 0.0;
            for &x in &xs {
                let residual = psi_check(&result, &zeros, x, t).unwrap().abs();
                total += residual;
                let xf = x as f64;
                max_fitted = max_fitted.max(residual * t / (xf * xf.ln().powi(2)));
            }
            averages.push(total / xs.len() as f64);
        }
        let decreasing = averages[0] > averages[1] && averages[1] > averages[2];
        pass &= decreasing && max_fitted < 10.0;
        detail.push_str(&format!(
            "q={q}: avg|res| T=1e2,1e3,1e4 → {:.2}, {:.2}, {:.2}; fitted const {max_fitted:.3}; ",
            averages[0], averages[1], averages[2]
        ));
    }
    report(6, "explicit-formula residuals", pass, detail.trim_end());
}

#[test]
fn c7_identity_suite() {
    // (a) quadrature identity on 10^3 random points
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut max_residual = 0.0f64;
    for _ in 0..1_000 {
        let x = (rng.gen::<f64>() * (1e6f64.ln() - 2f64.ln()) + 2f64.ln()).exp();
        max_residual = max_residual.max(loglog_gamma_identity_check(x).unwrap().abs());
    }
    let quadrature_ok = max_residual < 1e-10;

    // (b) sieve equals the naive oracle exactly across six fields
    let grid = CheckpointGrid::default_grid(10_000);
    let oracle_ok = [1u64, 2, 3, 5, 13, 229].into_iter().all(|q| {
        let field = Field::from_q(q).unwrap();
        sieve(&field, 10_000, &grid).unwrap() == common::naive_sieve(&field, 10_000, &grid)
    });

    // (c) omega-hat factorization: merged vs zeta·chi split on synthetic sets
    let gen_set = |rng: &mut ChaCha8Rng, component, n| {
        let mut g = 5.0 + rng.gen::<f64>() * 10.0;
        let mut ords = Vec::with_capacity(n);
        for _ in 0..n {
            ords.push(g);
            g += 0.05 + rng.gen::<f64>() * 3.0;
        }
        ZeroSet::new(component, ords, 12).unwrap()
    };
    let unit = CompensatingPolynomial::unit();
    let mut factorization_ok = true;
    for _ in 0..50 {
        let za = gen_set(&mut rng, Component::Zeta, 200);
        let zb = gen_set(&mut rng, Component::LChi(5), 150);
        let merged = merge(&za, &zb).unwrap();
        let t = rng.gen::<f64>() * 50.0 - 25.0;
        let lhs = omega_hat(t, merged.ordinates(), &unit);
        let rhs = omega_hat(t, za.ordinates(), &unit) * omega_hat(t, zb.ordinates(), &unit);
        factorization_ok &= (lhs - rhs).abs() <= 1e-13 * lhs.abs().max(rhs.abs()).max(1e-300);
    }

    // (d) segmented vs monolithic bit-identity
    let field = Field::from_q(13).unwrap();
    let grid = CheckpointGrid::default_grid(9_000);
    let mono = sieve_with_segment_size(&field, 9_000, &grid, 1 << 30).unwrap();
    let segmented_ok = [1u64 << 10, 1 << 12, 3_000]
        .into_iter()
        .all(|s| sieve_with_segment_size(&field, 9_000, &grid, s).unwrap() == mono);

    let pass = quadrature_ok && oracle_ok && factorization_ok && segmented_ok;
    report(
        7,
        "identity suite",
        pass,
        &format!(
            "loglog identity max residual {max_residual:.2e} on 1e3 points; \
             oracle equality {oracle_ok}; omega-hat factorization {factorization_ok}; \
             segmentation invariance {segmented_ok}"
        ),
    );
}

#[test]
fn c8_invariant_suite() {
    // (a) + (b): two-route kappa agreement and class-number rounding
    // residual across every squarefree q ≤ 500.
    let mut fields = 0u32;
    let mut max_kappa_rel = 0.0f64;
    let mut max_class_residual = 0.0f64;
    for q in 2u64..=500 {
        let Ok(field) = QuadraticField::new(q) else {
            continue; // not squarefree
        };
        let inv = FieldInvariants::compute(&field).unwrap();
        fields += 1;
        max_kappa_rel = max_kappa_rel.max(((inv.kappa - inv.l1) / inv.kappa).abs());
        let raw = inv.l1 * (field.discriminant() as f64).sqrt() / (2.0 * inv.regulator);
        max_class_residual = max_class_residual.max((raw - inv.class_number as f64).abs());
    }

    // (c) Chebyshev sandwich at every checkpoint to 1e7 (hard error inside
    // chebyshev_check on any violation).
    let grid = CheckpointGrid::default_grid(10_000_000);
    let rational = sieve(&Field::Rational, 10_000_000, &grid).unwrap();
    let mut sandwich_ok = true;
    for q in [5u64, 13] {
        let result = sieve(&Field::from_q(q).unwrap(), 10_000_000, &grid).unwrap();
        sandwich_ok &= chebyshev_check(&result, &rational).is_ok();
    }

    let pass = fields > 0 && max_kappa_rel < 1e-10 && max_class_residual < 1e-6 && sandwich_ok;
    report(
        8,
        "invariant suite",
        pass,
        &format!(
            "{fields} squarefree q ≤ 500: max kappa two-route rel diff {max_kappa_rel:.2e}, \
             max class-number residual {max_class_residual:.2e}; Chebyshev sandwich to 1e7 \
             (q = 5, 13): {sandwich_ok}"
        ),
    );
}

#[test]
fn c9_cramer_boundedness() {
    // Decade maxima of ∫_x^{2x}(ψ_K − t)² dt / x², 24 log-spaced samples per
    // decade. The integrand is almost periodic once transients decay, so a
    // later decade can re-attain (but under Thm 2.3 never exceed) an earlier
    // record: the no-growth assertion is that no decade sets a new record
    // over the running maximum of the decades before it (see ledger).
    let decade_max = |field: &Field, k_lo: u32, k_hi: u32| -> Vec<f64> {
        (k_lo..k_hi)
            .map(|k| {
                (0..24)
                    .map(|j| 10f64.powf(k as f64 + j as f64 / 24.0).round() as u64)
                    .chain((k + 1 == k_hi).then(|| 10u64.pow(k_hi)))
                    .map(|x| cramer_integral(field, x).unwrap())
                    .fold(0.0f64, f64::max)
            })
            .collect()
    };

    let mut pass = true;
    let mut detail = String::new();
    for q in [5u64, 13] {
        let maxima = decade_max(&Field::from_q(q).unwrap(), 3, 6);
        let mut record = maxima[0];
        let mut no_new_record = true;
        for &m in &maxima[1..] {
            no_new_record &= m <= record;
            record = record.max(m);
        }
        pass &= no_new_record;
        detail.push_str(&format!(
            "q={q} decade maxima (1e3..1e6): {:?}, no new record: {no_new_record}; ",
            maxima
                .iter()
                .map(|v| (v * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        ));
    }
    let rational_max = decade_max(&Field::Rational, 2, 6)
        .into_iter()
        .fold(0.0f64, f64::max);
    pass &= rational_max <= 1.0;
    detail.push_str(&format!("K=Q max over [1e2,1e6] = {rational_max:.4} ≤ 1.0"));
    report(9, "Cramér boundedness", pass, &detail);
}
