//! Arbitrary-precision numerics shared by every compute module.
//!
//! Real values are MPFR floats ([`HpReal`]); each carries its own working
//! precision in bits. MPFR rounds every operation correctly, so a computation
//! repeated with the same inputs at the same precision is bit-identical.
//!
//! Trust in a result comes from [`certify`]: the computation is run at two
//! precisions `p` and `2p` and the leading decimal digits on which the two
//! runs agree are reported as certified. Precision is tracked in bits and
//! exposed in decimal digits.

mod complex;
mod gamma;
mod quad;
mod sum;

pub use complex::HpComplex;
pub use gamma::gamma_real;
pub use quad::{tanh_sinh_integrate, tanh_sinh_integrate_many, tanh_sinh_integrate_real, Domain};
pub use sum::TrackedSum;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type HpReal = Float;

/// log2(10), used for digit/bit conversion.
pub const LOG2_10: f64 = std::f64::consts::LOG2_10;

pub fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * LOG2_10).ceil() as u32
}

pub fn bits_to_digits(bits: u32) -> u32 {
    (f64::from(bits) / LOG2_10).floor() as u32
}

/// How many digits to certify and how far to escalate precision to get them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub target_digits: u32,
    pub guard_digits: u32,
    pub max_digits: u32,
    pub escalation_factor: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            target_digits: 30,
            guard_digits: 15,
            max_digits: 2000,
            escalation_factor: 2,
        }
    }
}

impl PrecisionPolicy {
    pub fn with_target(target_digits: u32) -> Result<Self> {
        let policy = PrecisionPolicy {
            target_digits,
            ..PrecisionPolicy::default()
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        if self.target_digits < 1 {
            return Err(Error::InvalidPolicy("target_digits must be at least 1".into()));
        }
        if self.max_digits < self.target_digits + self.guard_digits {
            return Err(Error::InvalidPolicy(format!(
                "max_digits {} is below target + guard = {}",
                self.max_digits,
                self.target_digits + self.guard_digits
            )));
        }
        if self.escalation_factor < 2 {
            return Err(Error::InvalidPolicy("escalation_factor must be at least 2".into()));
        }
        Ok(())
    }

    /// Target plus guard digits.
    pub fn working_digits(&self) -> u32 {
        self.target_digits + self.guard_digits
    }

    pub fn working_bits(&self) -> u32 {
        digits_to_bits(self.working_digits())
    }

    pub fn max_bits(&self) -> u32 {
        digits_to_bits(self.max_digits)
    }
}

/// A value whose leading `certified_digits` agreed between two working
/// precisions.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedValue<T = HpReal> {
    pub value: T,
    pub certified_digits: u32,
    /// Bits of the precision at which `value` was computed.
    pub precision_used: u32,
    /// log10(sum |terms| / |result|) for summations, 0 otherwise.
    pub cancellation_magnitude: f64,
}

impl<T> CertifiedValue<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> CertifiedValue<U> {
        CertifiedValue {
            value: f(self.value),
            certified_digits: self.certified_digits,
            precision_used: self.precision_used,
            cancellation_magnitude: self.cancellation_magnitude,
        }
    }
}

impl CertifiedValue<HpReal> {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// One evaluation of a computation handed to [`certify`].
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: HpReal,
    pub cancellation: f64,
}

impl From<HpReal> for Evaluation {
    fn from(value: HpReal) -> Self {
        Evaluation {
            value,
            cancellation: 0.0,
        }
    }
}

/// Number of leading decimal digits on which `a` and `b` agree, capped by
/// what `bits` of precision can represent.
pub fn agreement_digits(a: &Float, b: &Float, bits: u32) -> u32 {
    let cap = bits_to_digits(bits);
    if a == b {
        return cap;
    }
    if !a.is_finite() || !b.is_finite() {
        return 0;
    }
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    let scale = if a.cmp_abs(b) == Some(std::cmp::Ordering::Greater) {
        Float::with_val(prec, a.abs_ref())
    } else {
        Float::with_val(prec, b.abs_ref())
    };
    let rel = diff / scale;
    let digits = -rel.log10().to_f64();
    if !digits.is_finite() || digits <= 0.0 {
        return 0;
    }
    (digits.floor() as u32).min(cap)
}

/// Evaluate `computation` at precisions `p` and `2p`, escalating `p` until
/// the two agree on `policy.target_digits` leading digits.
pub fn certify<F>(policy: &PrecisionPolicy, computation: F) -> Result<CertifiedValue>
where
    F: Fn(u32) -> Result<Evaluation>,
{
    certify_from(policy, policy.working_bits(), computation)
}

/// As [`certify`], starting from a caller-estimated precision.
pub fn certify_from<F>(policy: &PrecisionPolicy, start_bits: u32, computation: F) -> Result<CertifiedValue>
where
    F: Fn(u32) -> Result<Evaluation>,
{
    let mut out = certify_batch_from(policy, start_bits, |bits| computation(bits).map(|e| vec![e]))?;
    Ok(out.remove(0))
}

/// Certify a batch of values that share one computation; every entry must
/// reach the target before any is returned.
pub fn certify_batch_from<F>(policy: &PrecisionPolicy, start_bits: u32, computation: F) -> Result<Vec<CertifiedValue>>
where
    F: Fn(u32) -> Result<Vec<Evaluation>>,
{
    policy.validate()?;
    let max_bits = policy.max_bits();
    let mut bits = start_bits.max(policy.working_bits()).min(max_bits);
    let mut best: Option<(u32, u32, String)> = None;

    loop {
        let low = match computation(bits) {
            Ok(v) => v,
            Err(e) if e.is_precision_limited() => {
                if bits >= max_bits {
                    return Err(budget_error(policy, best, bits));
                }
                bits = bits.saturating_mul(policy.escalation_factor).min(max_bits);
                continue;
            }
            Err(e) => return Err(e),
        };

        // Cancellation visible at the low level eats working digits; raise
        // the precision before paying for the high level.
        let worst = low.iter().map(|e| e.cancellation).fold(0.0_f64, f64::max);
        if worst.is_finite() && worst > 0.0 {
            let need = digits_to_bits(worst.ceil() as u32 + policy.working_digits()).min(max_bits);
            if need > bits {
                bits = need;
                continue;
            }
        }

        let high_bits = bits.saturating_mul(2);
        let high = match computation(high_bits) {
            Ok(v) => v,
            Err(e) if e.is_precision_limited() => {
                if bits >= max_bits {
                    return Err(budget_error(policy, best, bits));
                }
                bits = bits.saturating_mul(policy.escalation_factor).min(max_bits);
                continue;
            }
            Err(e) => return Err(e),
        };
        if high.len() != low.len() {
            return Err(Error::Domain(
                "computation changed its output length with precision".into(),
            ));
        }

        let agreed: Vec<u32> = low
            .iter()
            .zip(&high)
            .map(|(l, h)| agreement_digits(&l.value, &h.value, bits))
            .collect();
        let worst_agreed = agreed.iter().copied().min().unwrap_or(bits_to_digits(bits));
        if worst_agreed >= policy.target_digits {
            return Ok(high
                .into_iter()
                .zip(agreed)
                .map(|(h, digits)| CertifiedValue {
                    value: h.value,
                    certified_digits: digits,
                    precision_used: high_bits,
                    cancellation_magnitude: h.cancellation,
                })
                .collect());
        }

        let estimate = high
            .iter()
            .zip(&agreed)
            .min_by_key(|(_, d)| **d)
            .map(|(h, _)| h.value.to_string_radix(10, Some(20)))
            .unwrap_or_default();
        best = Some((worst_agreed, high_bits, estimate));
        if bits >= max_bits {
            return Err(budget_error(policy, best, bits));
        }
        bits = bits.saturating_mul(policy.escalation_factor).min(max_bits);
    }
}

fn budget_error(policy: &PrecisionPolicy, best: Option<(u32, u32, String)>, bits: u32) -> Error {
    let (achieved_digits, precision_bits, best_estimate) = best.unwrap_or((0, bits, String::from("none")));
    Error::PrecisionBudget {
        target_digits: policy.target_digits,
        achieved_digits,
        precision_bits,
        best_estimate,
    }
}

/// π at `prec` bits.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, rug::float::Constant::Pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    #[test]
    fn digit_bit_conversion() {
        assert_eq!(digits_to_bits(1), 4);
        assert_eq!(digits_to_bits(30), 100);
        assert_eq!(bits_to_digits(100), 30);
        assert_eq!(bits_to_digits(digits_to_bits(200)), 200);
    }

    #[test]
    fn policy_validation() {
        assert!(PrecisionPolicy::default().validate().is_ok());
        assert!(PrecisionPolicy::with_target(0).is_err());
        let p = PrecisionPolicy {
            max_digits: 20,
            ..PrecisionPolicy::default()
        };
        assert!(p.validate().is_err());
        let p = PrecisionPolicy {
            escalation_factor: 1,
            ..PrecisionPolicy::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn certify_constant() {
        let policy = PrecisionPolicy::default();
        let c = certify(&policy, |bits| Ok(Float::with_val(bits, 1).into())).unwrap();
        assert_eq!(c.value, 1);
        assert!(c.certified_digits >= policy.target_digits);
    }

    /// Sum of (-1)^k x^k / k! for k <= k_max at the given precision, with the
    /// absolute-value sum tracked.
    fn alternating_exp(x: u32, k_max: u32, bits: u32) -> Evaluation {
        let mut acc = TrackedSum::new(bits);
        let mut term = Float::with_val(bits, 1);
        for k in 0..=k_max {
            if k > 0 {
                term *= x;
                term /= k;
            }
            if k % 2 == 0 {
                acc.add(&term);
            } else {
                acc.add(&Float::with_val(bits, -&term));
            }
        }
        acc.finish()
    }

    fn alternating_exp_exact(x: u32, k_max: u32) -> Rational {
        let mut acc = Rational::new();
        let mut term = Rational::from(1);
        for k in 0..=k_max {
            if k > 0 {
                term *= x;
                term /= k;
            }
            if k % 2 == 0 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        acc
    }

    #[test]
    fn certify_escalates_through_cancellation() {
        // sum |t| / |sum| = e^{46} roughly, so about 20 digits cancel.
        let policy = PrecisionPolicy::default();
        let c = certify(&policy, |bits| Ok(alternating_exp(23, 160, bits))).unwrap();
        assert!(
            (c.cancellation_magnitude - 19.98).abs() < 0.05,
            "{}",
            c.cancellation_magnitude
        );
        let naive = policy.working_bits();
        assert!(c.precision_used > 2 * naive);
        let exact = Float::with_val(c.precision_used, &alternating_exp_exact(23, 160));
        assert!(agreement_digits(&c.value, &exact, c.precision_used) >= 30);

        // Without escalation the naive precision loses the cancelled digits.
        let naive_val = alternating_exp(23, 160, naive).value;
        assert!(agreement_digits(&naive_val, &exact, naive) < policy.working_digits());
    }

    #[test]
    fn certify_reports_budget_exhaustion() {
        // A computation whose value depends on the precision never agrees.
        let policy = PrecisionPolicy {
            target_digits: 10,
            guard_digits: 5,
            max_digits: 40,
            escalation_factor: 2,
        };
        let err = certify(&policy, |bits| Ok(Float::with_val(bits, bits).into())).unwrap_err();
        assert!(matches!(err, Error::PrecisionBudget { .. }));
    }

    #[test]
    fn certify_retries_precision_limited_errors() {
        let policy = PrecisionPolicy::default();
        let c = certify(&policy, |bits| {
            if bits < 400 {
                Err(Error::PivotLoss { index: 3 })
            } else {
                Ok(Float::with_val(bits, 2).into())
            }
        })
        .unwrap();
        assert_eq!(c.value, 2);
        assert!(c.precision_used >= 800);
    }

    #[test]
    fn agreement_digits_basic() {
        let a = Float::with_val(200, 1);
        let b = Float::with_val(200, 1.000_000_1);
        assert_eq!(agreement_digits(&a, &b, 200), 7);
        assert_eq!(agreement_digits(&a, &a, 200), 60);
    }
}
