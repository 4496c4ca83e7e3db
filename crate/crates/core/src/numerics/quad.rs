//! Double-exponential quadrature on the half-line and the real line.
//!
//! The half-line uses `x = exp(π/2 sinh t)` and the real line
//! `x = sinh(π/2 sinh t)`. Both turn algebraic endpoint behaviour and
//! exponential decay into double-exponential decay in `t`, after which the
//! trapezoid rule converges geometrically in `1/h`. Step sizes are halved
//! until two successive levels agree on the target number of digits.

use rug::Float;
use serde::{Deserialize, Serialize};

use super::{bits_to_digits, pi, CertifiedValue, HpComplex, PrecisionPolicy};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    /// (0, ∞)
    HalfLine,
    /// (-∞, ∞)
    FullLine,
}

const MAX_LEVEL: u32 = 12;
const MIN_LEVEL: u32 = 3;
/// Node spacing used while locating the truncation points.
const SCAN_STEP: f64 = 0.125;
const MAX_T: f64 = 8.0;
const NEGLIGIBLE_RUN: u32 = 4;

/// ∫ f over `domain` for a complex-valued integrand.
pub fn tanh_sinh_integrate<F>(f: F, domain: Domain, policy: &PrecisionPolicy) -> Result<CertifiedValue<HpComplex>>
where
    F: Fn(&Float) -> HpComplex,
{
    let mut out = tanh_sinh_integrate_many(|x| vec![f(x)], 1, domain, policy)?;
    Ok(out.remove(0))
}

/// ∫ f over `domain` for a real-valued integrand.
pub fn tanh_sinh_integrate_real<F>(f: F, domain: Domain, policy: &PrecisionPolicy) -> Result<CertifiedValue>
where
    F: Fn(&Float) -> Float,
{
    let out = tanh_sinh_integrate(|x| HpComplex::from_real(f(x)), domain, policy)?;
    Ok(out.map(|c| c.re))
}

/// Integrate `width` integrands sharing one set of nodes; each component is
/// certified separately but refinement continues until all agree.
pub fn tanh_sinh_integrate_many<F>(
    f: F,
    width: usize,
    domain: Domain,
    policy: &PrecisionPolicy,
) -> Result<Vec<CertifiedValue<HpComplex>>>
where
    F: Fn(&Float) -> Vec<HpComplex>,
{
    policy.validate()?;
    let wp = policy.working_bits();
    let rule = Rule::new(domain, wp);
    let contribution = |t: &Float| -> Option<Vec<HpComplex>> {
        let (x, w) = rule.node(t)?;
        let values = f(&x);
        debug_assert_eq!(values.len(), width);
        Some(values.into_iter().map(|v| v.scale(&w)).collect())
    };

    let (k_neg, k_pos) = truncation(&contribution, wp, width);

    // raw[c] accumulates the un-scaled trapezoid sum for component c.
    let mut raw: Vec<HpComplex> = (0..width).map(|_| HpComplex::zero(wp)).collect();
    let accumulate = |raw: &mut Vec<HpComplex>, t: &Float| {
        if let Some(vals) = contribution(t) {
            for (acc, v) in raw.iter_mut().zip(vals) {
                *acc = &*acc + &v;
            }
        }
    };

    // Level 0: unit spacing. Scan bounds are in units of SCAN_STEP.
    let lo0 = -((k_neg as f64 * SCAN_STEP).ceil() as i64);
    let hi0 = (k_pos as f64 * SCAN_STEP).ceil() as i64;
    for k in lo0..=hi0 {
        accumulate(&mut raw, &Float::with_val(wp, k));
    }
    let mut previous: Vec<HpComplex> = raw.clone();
    let mut best_digits = 0u32;

    for level in 1..=MAX_LEVEL {
        let h = Float::with_val(wp, Float::i_exp(1, -(level as i32)));
        let scale = 1i64 << level;
        for k in (lo0 * scale)..=(hi0 * scale) {
            if k % 2 == 0 {
                continue;
            }
            let t = Float::with_val(wp, &h * k);
            accumulate(&mut raw, &t);
        }
        let current: Vec<HpComplex> = raw.iter().map(|r| r.scale(&h)).collect();
        let digits: Vec<u32> = current
            .iter()
            .zip(&previous)
            .map(|(a, b)| complex_agreement(a, b, wp))
            .collect();
        let worst = digits.iter().copied().min().unwrap_or(0);
        best_digits = best_digits.max(worst);
        if level >= MIN_LEVEL && worst >= policy.target_digits {
            return Ok(current
                .into_iter()
                .zip(digits)
                .map(|(value, d)| CertifiedValue {
                    value,
                    certified_digits: d,
                    precision_used: wp,
                    cancellation_magnitude: 0.0,
                })
                .collect());
        }
        previous = current;
    }

    Err(Error::PrecisionBudget {
        target_digits: policy.target_digits,
        achieved_digits: best_digits,
        precision_bits: wp,
        best_estimate: previous
            .first()
            .map(|v| v.re.to_string_radix(10, Some(20)))
            .unwrap_or_default(),
    })
}

struct Rule {
    domain: Domain,
    half_pi: Float,
    prec: u32,
}

impl Rule {
    fn new(domain: Domain, prec: u32) -> Self {
        Rule {
            domain,
            half_pi: pi(prec) / 2u32,
            prec,
        }
    }

    /// Abscissa and weight dx/dt at `t`, or `None` where either leaves the
    /// representable range.
    fn node(&self, t: &Float) -> Option<(Float, Float)> {
        let (sinh_t, cosh_t) = Float::with_val(self.prec, t).sinh_cosh(Float::new(self.prec));
        let u = Float::with_val(self.prec, &self.half_pi * &sinh_t);
        let du = Float::with_val(self.prec, &self.half_pi * &cosh_t);
        let (x, w) = match self.domain {
            Domain::HalfLine => {
                let x = u.exp();
                let w = Float::with_val(self.prec, &x * &du);
                (x, w)
            }
            Domain::FullLine => {
                let (x, c) = u.sinh_cosh(Float::new(self.prec));
                (x, c * du)
            }
        };
        if !x.is_finite() || !w.is_normal() {
            return None;
        }
        // Underflow to 0 on the half-line would put a node on the endpoint.
        if self.domain == Domain::HalfLine && x.is_zero() {
            return None;
        }
        Some((x, w))
    }
}

/// Number of SCAN_STEP steps to the left and right of t = 0 beyond which
/// every contribution is negligible.
fn truncation<C>(contribution: &C, wp: u32, width: usize) -> (u64, u64)
where
    C: Fn(&Float) -> Option<Vec<HpComplex>>,
{
    let eps = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    let magnitude = |vals: &Option<Vec<HpComplex>>| -> Float {
        let mut m = Float::new(wp);
        if let Some(vals) = vals {
            for v in vals.iter().take(width) {
                let a = v.abs();
                if a > m {
                    m = a;
                }
            }
        }
        m
    };

    let mut peak = magnitude(&contribution(&Float::new(wp)));
    let max_steps = (MAX_T / SCAN_STEP) as u64;
    let mut bounds = [0u64; 2];
    for (side, sign) in [(0usize, -1i64), (1, 1)] {
        let mut run = 0;
        let mut k = 0u64;
        while k < max_steps {
            k += 1;
            let t = Float::with_val(wp, sign as f64 * k as f64 * SCAN_STEP);
            let vals = contribution(&t);
            if vals.is_none() {
                // Out of range: the transformation itself has run away.
                break;
            }
            let m = magnitude(&vals);
            if m > peak {
                peak = m.clone();
            }
            let threshold = Float::with_val(wp, &eps * &peak);
            if !peak.is_zero() && m <= threshold {
                run += 1;
                if run >= NEGLIGIBLE_RUN {
                    break;
                }
            } else {
                run = 0;
            }
        }
        bounds[side] = k;
    }
    (bounds[0], bounds[1])
}

fn complex_agreement(a: &HpComplex, b: &HpComplex, bits: u32) -> u32 {
    let cap = bits_to_digits(bits);
    if a == b {
        return cap;
    }
    let diff = (a - b).abs();
    let scale = {
        let (x, y) = (a.abs(), b.abs());
        if x > y {
            x
        } else {
            y
        }
    };
    if scale.is_zero() {
        return cap;
    }
    let rel = diff / scale;
    let d = -rel.log10().to_f64();
    if !d.is_finite() || d <= 0.0 {
        0
    } else {
        (d.floor() as u32).min(cap)
    }
}
