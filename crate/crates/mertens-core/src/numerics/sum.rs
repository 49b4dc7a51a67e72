//! Compensated (Neumaier) summation.
//!
//! The sieve accumulates millions of small log terms into slowly growing
//! totals; plain f64 addition would lose low bits at every step.  Neumaier's
//! variant of Kahan summation keeps the running error in a carry term and is
//! immune to the classic Kahan failure when the addend exceeds the sum.

/// Running compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    carry: f64,
}

impl NeumaierSum {
    /// Start an empty sum.
    pub fn new() -> Self {
        Self::default()
    }

    /// Add one term.
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Current compensated value.
    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation() {
        let mut s = NeumaierSum::new();
        s.add(1.0);
        s.add(1e100);
        s.add(1.0);
        s.add(-1e100);
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn tracks_many_small_terms() {
        let mut s = NeumaierSum::new();
        for _ in 0..10_000_000 {
            s.add(0.1);
        }
        assert!((s.value() - 1e6).abs() < 1e-7);
    }
}
