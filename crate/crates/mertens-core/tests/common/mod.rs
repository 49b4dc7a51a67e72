//! Naive reference implementations shared by the integration suites.
//!
//! The oracle re-derives the event set from first principles — trial
//! division for primality, brute-force quadratic-residue search for the
//! splitting type — and feeds it through the crate's locked per-event
//! increments and ordered accumulation.  The production sieve must agree
//! bit-for-bit.

use mertens_core::sieve::{
    accumulate_events, make_event, CheckpointGrid, Event, EventKind, SieveResult,
};
use mertens_core::Field;

/// Trial-division primality: no wheel, no sieve machinery.
pub fn is_prime_naive(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Legendre symbol (a/p) for odd prime p by scanning all residues — the
/// slowest correct method, independent of the crate's Kronecker routine.
fn legendre_brute(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    for r in 1..p {
        if (r * r) % p == a {
            return 1;
        }
    }
    -1
}

enum NaiveSplit {
    Split,
    Inert,
    Ramified,
}

/// Splitting of p in the field of discriminant Δ, from the textbook
/// criterion: p | Δ ramifies; odd p splits iff Δ is a QR mod p; p = 2
/// (necessarily with Δ odd here) splits iff Δ ≡ 1 (mod 8).
fn naive_split(p: u64, delta: u64) -> NaiveSplit {
    if delta.is_multiple_of(p) {
        return NaiveSplit::Ramified;
    }
    if p == 2 {
        return if delta % 8 == 1 {
            NaiveSplit::Split
        } else {
            NaiveSplit::Inert
        };
    }
    match legendre_brute(delta, p) {
        1 => NaiveSplit::Split,
        _ => NaiveSplit::Inert,
    }
}

/// Pushes every event of one prime: exponents e = 1, 2, ... while the norm
/// p^(e·norm_exp_factor) stays within x_max.
fn push_powers(
    events: &mut Vec<Event>,
    p: u64,
    x_max: u64,
    exp_per_step: u32,
    kind_of: impl Fn(u32) -> EventKind,
) {
    let mut e = 1u32;
    loop {
        let norm = (p as u128).pow(e * exp_per_step);
        if norm > x_max as u128 {
            break;
        }
        events.push(make_event(p, kind_of(e)));
        e += 1;
    }
}

/// The oracle: enumerate all prime-power events naively, sort by norm, and
/// run them through the shared accumulation walk.
pub fn naive_sieve(field: &Field, x_max: u64, grid: &CheckpointGrid) -> SieveResult {
    let mut events: Vec<Event> = Vec::new();
    for p in 2..=x_max {
        if !is_prime_naive(p) {
            continue;
        }
        match field {
            Field::Rational => {
                push_powers(&mut events, p, x_max, 1, |m| EventKind::Rational { m });
            }
            Field::Quadratic(f) => match naive_split(p, f.discriminant()) {
                NaiveSplit::Split => {
                    push_powers(&mut events, p, x_max, 1, |m| EventKind::Split { m });
                }
                NaiveSplit::Ramified => {
                    push_powers(&mut events, p, x_max, 1, |m| EventKind::Ramified { m });
                }
                NaiveSplit::Inert => {
                    push_powers(&mut events, p, x_max, 2, |k| EventKind::Inert { k });
                }
            },
        }
    }
    events.sort_by_key(Event::norm);
    accumulate_events(field, x_max, grid, &events).expect("oracle event list is well-formed")
}
