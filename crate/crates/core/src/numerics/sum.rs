use rug::Float;

use super::{bits_to_digits, Evaluation};

/// Running sum that also accumulates the absolute values of its terms, so
/// the digits lost to cancellation can be measured.
#[derive(Debug, Clone)]
pub struct TrackedSum {
    sum: Float,
    abs_sum: Float,
}

impl TrackedSum {
    pub fn new(prec: u32) -> Self {
        TrackedSum {
            sum: Float::new(prec),
            abs_sum: Float::new(prec),
        }
    }

    pub fn add(&mut self, term: &Float) {
        self.sum += term;
        self.abs_sum += &*term.as_abs();
    }

    pub fn sum(&self) -> &Float {
        &self.sum
    }

    pub fn abs_sum(&self) -> &Float {
        &self.abs_sum
    }

    /// log10(sum |terms| / |sum|); a vanished sum counts as total loss.
    pub fn cancellation_log10(&self) -> f64 {
        if self.abs_sum.is_zero() {
            return 0.0;
        }
        if self.sum.is_zero() {
            return f64::from(bits_to_digits(self.sum.prec()));
        }
        let ratio = Float::with_val(self.sum.prec(), &self.abs_sum / &*self.sum.as_abs());
        ratio.log10().to_f64().max(0.0)
    }

    pub fn finish(self) -> Evaluation {
        let cancellation = self.cancellation_log10();
        Evaluation {
            value: self.sum,
            cancellation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_cancellation_for_positive_terms() {
        let mut s = TrackedSum::new(128);
        for k in 1..=10 {
            s.add(&Float::with_val(128, k));
        }
        assert_eq!(*s.sum(), 55);
        assert_eq!(s.cancellation_log10(), 0.0);
    }

    #[test]
    fn measures_cancellation() {
        let mut s = TrackedSum::new(128);
        s.add(&Float::with_val(128, 1e6));
        s.add(&Float::with_val(128, -1e6 + 2.0));
        // (2e6 - 2) / 2
        assert!((s.cancellation_log10() - 6.0).abs() < 1e-6);
    }

    #[test]
    fn exact_zero_is_total_loss() {
        let mut s = TrackedSum::new(100);
        s.add(&Float::with_val(100, 3));
        s.add(&Float::with_val(100, -3));
        assert_eq!(s.cancellation_log10(), 30.0);
    }
}
