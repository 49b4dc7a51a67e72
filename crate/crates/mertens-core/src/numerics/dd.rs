//! Double-double arithmetic (~31 significant digits).
//!
//! A value is stored as an unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2.
//! The density engine multiplies tens of thousands of J0 factors and compares
//! the merged product against per-component products to 1e-13 relative; that
//! comparison is only meaningful when the accumulation itself carries well
//! below 1e-13 of rounding noise, hence the extended precision.  Products use
//! two-product via FMA; sums use the Knuth two-sum.

/// Unevaluated f64 pair representing `hi + lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

// Named methods (`add`, `mul`, `neg`) are kept instead of operator traits so
// every call site reads as an explicit extended-precision operation.
#[allow(clippy::should_implement_trait)]
impl DoubleDouble {
    /// Zero.
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    /// One.
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    /// Lift an f64.
    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact sum of two f64 values.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    /// Exact product of two f64 values.
    #[inline]
    pub fn from_prod(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    /// Round to nearest f64.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Add another double-double.
    #[inline]
    pub fn add(self, other: Self) -> Self {
        let (s1, e1) = two_sum(self.hi, other.hi);
        let (s2, e2) = two_sum(self.lo, other.lo);
        let (s1, e1b) = quick_two_sum(s1, e1 + s2);
        let (hi, lo) = quick_two_sum(s1, e1b + e2);
        Self { hi, lo }
    }

    /// Add an f64.
    #[inline]
    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Self { hi, lo }
    }

    /// Negate.
    #[inline]
    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    /// Multiply by another double-double.
    #[inline]
    pub fn mul(self, other: Self) -> Self {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    /// Multiply by an f64.
    #[inline]
    pub fn mul_f64(self, x: f64) -> Self {
        let (p, e) = two_prod(self.hi, x);
        let (hi, lo) = quick_two_sum(p, e + self.lo * x);
        Self { hi, lo }
    }

    /// Divide by an f64.
    #[inline]
    pub fn div_f64(self, x: f64) -> Self {
        let q1 = self.hi / x;
        // remainder computed exactly via two_prod
        let (p, e) = two_prod(q1, x);
        let r = (self.hi - p) - e + self.lo;
        let q2 = r / x;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }

    /// Absolute value.
    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }
}
