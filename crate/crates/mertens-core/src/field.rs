//! Field invariants of real quadratic fields K = Q(√q).
//!
//! Everything downstream (sieve normalization, density constants, asymptote)
//! hangs off four numbers: the fundamental unit, the regulator R_K, the class
//! number h_K and the residue κ_K of ζ_K at s = 1.  κ_K is produced by the
//! class analytic formula and cross-checked against the independent
//! L(1, χ_Δ) closed character sum; disagreement beyond 1e-10 relative is a
//! hard error, not a warning.

use crate::error::{Error, Result};
use crate::numerics::floor_nth_root;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;

/// A real quadratic field Q(√q), q squarefree ≥ 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraticField {
    q: u64,
    delta: u64,
}

impl QuadraticField {
    /// Constructs Q(√q).  `q` must be squarefree and at least 2.
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidField(format!(
                "q = {q}: need a squarefree integer >= 2"
            )));
        }
        if !is_squarefree(q) {
            return Err(Error::InvalidField(format!("q = {q} is not squarefree")));
        }
        let delta = if q % 4 == 1 { q } else { 4 * q };
        Ok(Self { q, delta })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Field discriminant Δ_K (= q for q ≡ 1 mod 4, else 4q).
    pub fn discriminant(&self) -> u64 {
        self.delta
    }

    /// Degree n_K = r1 + 2 r2.
    pub fn degree(&self) -> u32 {
        2
    }

    /// Number of real places.
    pub fn r1(&self) -> u32 {
        2
    }

    /// Number of conjugate pairs of complex places.
    pub fn r2(&self) -> u32 {
        0
    }

    /// Number of roots of unity in O_K.
    pub fn roots_of_unity(&self) -> u32 {
        2
    }
}

/// The base field of a computation: Q itself or a real quadratic extension.
///
/// `Rational` is the control case — its "prime ideals" are the rational
/// primes, κ = 1 and the bias machinery degenerates to the classical
/// Mertens theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Rational,
    Quadratic(QuadraticField),
}

impl Field {
    /// CLI convention: q = 1 denotes K = Q, any other q a quadratic field.
    pub fn from_q(q: u64) -> Result<Self> {
        if q == 1 {
            Ok(Field::Rational)
        } else {
            Ok(Field::Quadratic(QuadraticField::new(q)?))
        }
    }

    pub fn q(&self) -> u64 {
        match self {
            Field::Rational => 1,
            Field::Quadratic(f) => f.q(),
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Field::Rational => 1,
            Field::Quadratic(_) => 2,
        }
    }

    pub fn discriminant(&self) -> u64 {
        match self {
            Field::Rational => 1,
            Field::Quadratic(f) => f.discriminant(),
        }
    }
}

fn is_squarefree(q: u64) -> bool {
    if q.is_multiple_of(4) {
        return false;
    }
    let mut d = 2u64;
    while d * d * d <= q {
        if q.is_multiple_of(d * d) {
            return false;
        }
        d += 1;
    }
    // any remaining square factor is p^2 with p > q^{1/3}, i.e. q = p^2 or
    // q = p^2 * r with r < p; both make q / largest-square a perfect square
    // detectable directly:
    let r = floor_nth_root(q, 2);
    if r * r == q && q > 1 {
        return false;
    }
    // q = p^2 * r, r < p, r > 1: p^2 | q with p > q^{1/3} means q/r is a
    // square for some divisor r < q^{1/3}; scan those
    let mut r = 2u64;
    while r * r * r <= q {
        if q.is_multiple_of(r) {
            let m = q / r;
            let s = floor_nth_root(m, 2);
            if s * s == m {
                return false;
            }
        }
        r += 1;
    }
    true
}

/// Kronecker symbol (a | n), fully general (n may be zero, negative, even).
pub fn kronecker(mut a: i64, mut n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // factor out 2s from n, each contributing (a | 2)
    let mut twos = 0u32;
    while n % 2 == 0 {
        n /= 2;
        twos += 1;
    }
    if twos % 2 == 1 {
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0, // a even
        }
    }
    // Jacobi on odd n > 0 via reciprocity
    a = a.rem_euclid(n);
    while a != 0 {
        let mut v = 0u32;
        while a % 2 == 0 {
            a /= 2;
            v += 1;
        }
        if v % 2 == 1 && matches!(n % 8, 3 | 5) {
            result = -result;
        }
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        let t = a;
        a = n % t;
        n = t;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// The fundamental unit ε₀ = (a + b√Δ)/2 of O_K, a, b ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub a: BigUint,
    pub b: BigUint,
}

impl FundamentalUnit {
    /// Both coordinates as u64 when they fit (they do for every q ≤ 500).
    pub fn as_u64_pair(&self) -> Option<(u64, u64)> {
        Some((u64::try_from(&self.a).ok()?, u64::try_from(&self.b).ok()?))
    }
}

/// Smallest unit > 1 of O_K, by the continued-fraction expansion of
/// α₀ = (P₀ + √Δ)/2 with P₀ = Δ mod 2.  Convergents p/q of α₀ yield unit
/// candidates (a, b) = (2p − P₀q, q); the first with (a² − Δb²)/4 = ±1 is
/// fundamental.  Convergents run in u128 and resume in arbitrary precision
/// on overflow (continued-fraction state P, Q never exceeds 2√Δ and is
/// unaffected by the switch).
pub fn fundamental_unit(field: &QuadraticField) -> Result<FundamentalUnit> {
    let delta = field.discriminant();
    let s = floor_nth_root(delta, 2); // floor(sqrt(Δ)), exact
    let p0 = delta % 2;
    // continued-fraction state for (P + sqrt(Δ)) / Q
    let mut pp = p0;
    let mut qq = 2u64;
    // convergent pairs (p_{k-1}, p_k), (q_{k-1}, q_k), u128 fast path
    let mut num: (u128, u128) = (1, 0); // (p_{k-1}, p_{k-2}) seeded for k = 0
    let mut den: (u128, u128) = (0, 1);
    const MAX_STEPS: u64 = 200_000;
    for step in 0..MAX_STEPS {
        // save pre-step state: the arbitrary-precision resume must replay
        // this step in full, or one partial quotient would be dropped
        let saved = (pp, qq, num, den);
        let ak = (pp + s) / qq;
        pp = ak * qq - pp;
        qq = (delta - pp * pp) / qq;
        debug_assert!(qq > 0 && pp <= s + 1);
        // advance convergents: p_k = a_k p_{k-1} + p_{k-2}
        let adv = |pair: (u128, u128)| -> Option<(u128, u128)> {
            let next = (ak as u128).checked_mul(pair.0)?.checked_add(pair.1)?;
            Some((next, pair.0))
        };
        // candidate a = 2p − P₀ q, b = q; norm*4 = a² − Δ b²
        let hit = (|| -> Option<Option<(u128, u128)>> {
            num = adv(num)?;
            den = adv(den)?;
            let a = (2u128.checked_mul(num.0)?).checked_sub((p0 as u128).checked_mul(den.0)?)?;
            let b = den.0;
            match norm4_u128(a, b, delta)? {
                4 | -4 => Some(Some((a, b))),
                _ => Some(None),
            }
        })();
        match hit {
            Some(Some((a, b))) => {
                return Ok(FundamentalUnit {
                    a: BigUint::from(a),
                    b: BigUint::from(b),
                });
            }
            Some(None) => {}
            None => {
                let (pp0, qq0, num0, den0) = saved;
                return fundamental_unit_big(field, pp0, qq0, s, num0, den0, step);
            }
        }
    }
    Err(Error::Inconsistent(format!(
        "no unit of norm ±1 within {MAX_STEPS} continued-fraction steps for q = {}",
        field.q()
    )))
}

fn norm4_u128(a: u128, b: u128, delta: u64) -> Option<i128> {
    let a2 = a.checked_mul(a)?;
    let db2 = (delta as u128).checked_mul(b.checked_mul(b)?)?;
    // magnitudes may individually exceed i128 while the difference is ±4
    if a2 >= db2 {
        i128::try_from(a2 - db2).ok()
    } else {
        Some(-i128::try_from(db2 - a2).ok()?)
    }
}

#[allow(clippy::too_many_arguments)]
fn fundamental_unit_big(
    field: &QuadraticField,
    mut pp: u64,
    mut qq: u64,
    s: u64,
    num: (u128, u128),
    den: (u128, u128),
    steps_done: u64,
) -> Result<FundamentalUnit> {
    let delta = field.discriminant();
    let p0 = delta % 2;
    let mut num = (BigUint::from(num.0), BigUint::from(num.1));
    let mut den = (BigUint::from(den.0), BigUint::from(den.1));
    let delta_big = BigInt::from(delta);
    const MAX_STEPS: u64 = 200_000;
    for _ in steps_done..MAX_STEPS {
        let ak = (pp + s) / qq;
        pp = ak * qq - pp;
        qq = (delta - pp * pp) / qq;
        let n_next = BigUint::from(ak) * &num.0 + &num.1;
        num = (n_next, num.0);
        let d_next = BigUint::from(ak) * &den.0 + &den.1;
        den = (d_next, den.0);
        let a = 2u32 * &num.0 - p0 * &den.0;
        let b = den.0.clone();
        let norm4 = BigInt::from(&a * &a) - &delta_big * BigInt::from(&b * &b);
        if norm4 == BigInt::from(4) || norm4 == BigInt::from(-4) {
            return Ok(FundamentalUnit { a, b });
        }
    }
    Err(Error::Inconsistent(format!(
        "no unit of norm ±1 within {MAX_STEPS} continued-fraction steps for q = {}",
        field.q()
    )))
}

/// Natural log of a BigUint-coefficient unit value (a + b√Δ)/2, accurate to
/// ~2 ulp regardless of coefficient size: coefficients are truncated to the
/// top 62 bits and the discarded scale re-enters as an exact multiple of
/// ln 2.
fn ln_unit(a: &BigUint, b: &BigUint, delta: u64) -> f64 {
    let bits = a.bits().max(b.bits());
    let shift = bits.saturating_sub(62);
    let reduce = |x: &BigUint| -> f64 {
        let r: BigUint = x >> shift;
        u64::try_from(&r).map(|v| v as f64).unwrap_or(f64::MAX)
    };
    let (af, bf) = (reduce(a), reduce(b));
    let val = 0.5 * (af + bf * (delta as f64).sqrt());
    val.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Regulator R_K = log ε₀, to ≥ 1e-14 relative accuracy.
pub fn regulator(unit: &FundamentalUnit, field: &QuadraticField) -> Result<f64> {
    let r = ln_unit(&unit.a, &unit.b, field.discriminant());
    if !(r > 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "({}, {}) is not a unit > 1",
            unit.a, unit.b
        )));
    }
    Ok(r)
}

/// L(1, χ_Δ) by the closed character sum for even real primitive characters:
/// −(1/√Δ) Σ_{a=1}^{Δ−1} χ(a) log sin(πa/Δ).
pub fn dirichlet_l1(field: &QuadraticField) -> f64 {
    let delta = field.discriminant();
    let mut sum = crate::numerics::NeumaierSum::new();
    for a in 1..delta {
        let chi = kronecker(delta as i64, a as i64);
        if chi != 0 {
            let x = (std::f64::consts::PI * a as f64 / delta as f64).sin().ln();
            sum.add(chi as f64 * x);
        }
    }
    -sum.value() / (delta as f64).sqrt()
}

/// Class number by the rounding identity h = √Δ · L(1,χ) / (2 R_K).  The
/// pre-rounding value must sit within 1e-6 of an integer; anything farther
/// signals a bug upstream and is an error, not a rounding choice.
pub fn class_number(field: &QuadraticField, l1: f64, reg: f64) -> Result<u64> {
    let raw = (field.discriminant() as f64).sqrt() * l1 / (2.0 * reg);
    let rounded = raw.round();
    if (raw - rounded).abs() > 1e-6 || rounded < 1.0 {
        return Err(Error::Inconsistent(format!(
            "invariant mismatch: h candidate {raw} for q = {} is not within 1e-6 of a positive integer",
            field.q()
        )));
    }
    Ok(rounded as u64)
}

/// Residue κ_K of ζ_K at s = 1 via the class analytic formula
/// 2^{r1+r2} π^{r2} h R / (w √|Δ|); for real quadratic this is 2hR/√Δ.
pub fn residue_kappa(field: &QuadraticField, class_number: u64, reg: f64) -> f64 {
    let two_pow = f64::powi(2.0, (field.r1() + field.r2()) as i32);
    let pi_pow = std::f64::consts::PI.powi(field.r2() as i32);
    two_pow * pi_pow * class_number as f64 * reg
        / (field.roots_of_unity() as f64 * (field.discriminant() as f64).sqrt())
}

/// The complete invariant pack for one field, with the κ cross-check applied.
#[derive(Debug, Clone)]
pub struct FieldInvariants {
    pub unit: FundamentalUnit,
    pub regulator: f64,
    pub class_number: u64,
    pub kappa: f64,
    pub l1: f64,
}

impl FieldInvariants {
    /// Computes all invariants and enforces the two-route consistency gate:
    /// the class-analytic κ and the character-sum L(1,χ) must agree to
    /// 1e-10 relative.
    pub fn compute(field: &QuadraticField) -> Result<Self> {
        let unit = fundamental_unit(field)?;
        let reg = regulator(&unit, field)?;
        let l1 = dirichlet_l1(field);
        let h = class_number(field, l1, reg)?;
        let kappa = residue_kappa(field, h, reg);
        if ((kappa - l1) / kappa).abs() >= 1e-10 {
            return Err(Error::Inconsistent(format!(
                "kappa = {kappa:.15e} (class analytic) vs L(1,chi) = {l1:.15e} disagree for q = {}",
                field.q()
            )));
        }
        Ok(Self {
            unit,
            regulator: reg,
            class_number: h,
            kappa,
            l1,
        })
    }
}

/// Greatest common divisor helper re-exported for callers that pair
/// invariants with modular arithmetic.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
