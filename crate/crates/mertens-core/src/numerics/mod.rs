//! Numerical kernels: compensated summation, double-double arithmetic,
//! adaptive Gauss-Kronrod quadrature, and the Bessel function J0.

pub mod bessel;
pub mod dd;
pub mod quad;
pub mod sum;

pub use bessel::bessel_j0;
pub use dd::DoubleDouble;
pub use quad::integrate;
pub use sum::NeumaierSum;

/// Euler-Mascheroni constant, 20 significant digits.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Deterministic Miller-Rabin primality test for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Floor of the k-th root of n, exact in integers.
pub fn floor_nth_root(n: u64, k: u32) -> u64 {
    if n == 0 {
        return 0;
    }
    if k == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64 + 1;
    while r > 0 && checked_pow_exceeds(r, k, n) {
        r -= 1;
    }
    r
}

/// True if r^k > n (with overflow treated as exceeding).
fn checked_pow_exceeds(r: u64, k: u32, n: u64) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(r as u128);
        if acc > n as u128 {
            return true;
        }
    }
    acc > n as u128
}
