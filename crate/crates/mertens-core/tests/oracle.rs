//! Sieve-vs-oracle equivalence and exact integer identities.

mod common;

use mertens_core::numerics::floor_nth_root;
use mertens_core::sieve::{sieve, sieve_with_segment_size, CheckpointGrid, PI_UNIT_DEN};
use mertens_core::Field;

/// Criterion 7 (oracle half): the production sieve equals the naive oracle
/// exactly — every accumulator, every checkpoint, bit-for-bit — across six
/// fields including the rational baseline, even/odd discriminants, and the
/// large-discriminant q = 229.
#[test]
fn sieve_matches_naive_oracle_exactly_across_six_fields() {
    for q in [1u64, 2, 3, 5, 13, 229] {
        let field = Field::from_q(q).unwrap();
        let grid = CheckpointGrid::default_grid(10_000);
        let fast = sieve(&field, 10_000, &grid).unwrap();
        let slow = common::naive_sieve(&field, 10_000, &grid);
        assert_eq!(fast, slow, "sieve deviates from the oracle for q = {q}");
    }
}

/// The oracle agreement must be independent of segmentation: a segment size
/// that splits [2, x] many times produces the identical event stream.
#[test]
fn segmented_sieve_matches_oracle_too() {
    let field = Field::from_q(13).unwrap();
    let grid = CheckpointGrid::default_grid(9_000);
    let seg = sieve_with_segment_size(&field, 9_000, &grid, 1 << 10).unwrap();
    let slow = common::naive_sieve(&field, 9_000, &grid);
    assert_eq!(seg, slow);
}

/// LCM·Π_K(x) = Σ_{ℓ≥1} (LCM/ℓ)·π_K(⌊x^{1/ℓ}⌋) exactly, in the sieve's
/// integer units: Π counts each 𝔭^ℓ with weight 1/ℓ, and every norm
/// N(𝔭^ℓ) ≤ x corresponds to N(𝔭) ≤ x^{1/ℓ}.
#[test]
fn capital_pi_equals_weighted_prime_counts_exactly() {
    for q in [1u64, 5, 13, 229] {
        let x = 10_000u64;
        let field = Field::from_q(q).unwrap();
        let mut pts = vec![x];
        let mut l = 2u32;
        loop {
            let r = floor_nth_root(x, l);
            if r < 2 {
                break;
            }
            pts.push(r);
            l += 1;
        }
        pts.sort_unstable();
        pts.dedup();
        let grid = CheckpointGrid::explicit(pts).unwrap();
        let sv = sieve(&field, x, &grid).unwrap();

        let mut total: u128 = 0;
        let mut l = 1u32;
        loop {
            let r = floor_nth_root(x, l);
            if r < 2 {
                break;
            }
            let pi = sv.pi[sv.index_of(r).unwrap()];
            total += (PI_UNIT_DEN / l as u128) * pi as u128;
            l += 1;
        }
        let units = sv.pi_weighted_units[sv.index_of(x).unwrap()];
        assert_eq!(total, units, "Pi identity broken for q = {q}");
    }
}
