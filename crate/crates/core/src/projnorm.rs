//! Norms of spectral projections for complex-scaled weights.
//!
//! For `z = r e^{iθ}` the norm of the `n`th projection is
//! `N_{n,θ} = ∫ |p_n(zx) σ(zx)|² dx · r`, which after expanding `p_n` in
//! monomials becomes the real bilinear form
//! `Σ_{r,s} a_r a_s cos((r-s)θ) M_{r+s}(θ)` in the rotated moments.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;
use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::numerics::{
    certify_batch_from, digits_to_bits, pi, tanh_sinh_integrate_real, CertifiedValue, Evaluation, HpComplex,
    PrecisionPolicy, TrackedSum,
};
use crate::orthopoly::{bases_for, rotated_moments, PolyBasis};
use crate::weights::{scale_constants, weight_eval, Classical, WeightSpec};
use crate::Angle;

/// `M_k(θ) = ∫ x^k |σ(e^{iθ}x)|² dx` for k = 0..=2n_max.
#[derive(Debug, Clone)]
pub struct CrossMomentTable {
    pub weight: WeightSpec,
    pub theta: Angle,
    pub entries: Vec<Float>,
}

pub fn cross_moments(
    spec: &WeightSpec,
    theta: &Angle,
    k_max: usize,
    policy: &PrecisionPolicy,
) -> Result<CrossMomentTable> {
    policy.validate()?;
    let entries = rotated_moments(spec, theta, k_max, policy.working_bits())?;
    Ok(CrossMomentTable {
        weight: spec.clone(),
        theta: theta.clone(),
        entries,
    })
}

#[derive(Debug, Clone)]
pub struct NormResult {
    pub n: usize,
    pub theta: Angle,
    pub norm: CertifiedValue,
    pub lower: Float,
    pub upper: Option<Float>,
    pub lower_ok: bool,
    pub upper_ok: Option<bool>,
}

impl NormResult {
    /// Both applicable bounds hold.
    pub fn sandwich_ok(&self) -> bool {
        self.lower_ok && self.upper_ok.unwrap_or(true)
    }
}

/// Summary of a [`NormResult`] in plain numbers.
#[derive(Debug, Clone, Serialize)]
pub struct NormSummary {
    pub n: usize,
    pub theta_rad: f64,
    pub norm: f64,
    pub lower: f64,
    pub upper: Option<f64>,
    pub certified_digits: u32,
    pub precision_bits: u32,
    pub cancellation_log10: f64,
}

impl From<&NormResult> for NormSummary {
    fn from(r: &NormResult) -> Self {
        NormSummary {
            n: r.n,
            theta_rad: r.theta.to_f64(),
            norm: r.norm.to_f64(),
            lower: r.lower.to_f64(),
            upper: r.upper.as_ref().map(Float::to_f64),
            certified_digits: r.norm.certified_digits,
            precision_bits: r.norm.precision_used,
            cancellation_log10: r.norm.cancellation_magnitude,
        }
    }
}

/// Initial working precision for degree `n`: coefficient products grow like
/// `16^n`, and faster the closer θ is to the sector edge.
pub fn required_bits(spec: &WeightSpec, n: usize, theta: &Angle, policy: &PrecisionPolicy) -> u32 {
    let ratio = theta.abs().to_f64() / spec.sector().to_f64();
    let digits = f64::from(policy.target_digits) + n as f64 * 16f64.log10() * (1.0 + ratio) + 15.0;
    digits_to_bits(digits.ceil() as u32)
}

/// `Σ a_r a_s cos((r-s)θ) M_{r+s}` with the cancellation it incurs.
pub fn bilinear_norm(coeffs: &[Float], cosines: &[Float], moments: &[Float], prec: u32) -> Evaluation {
    let mut sum = TrackedSum::new(prec);
    for (r, a) in coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let diag = Float::with_val(prec, a.square_ref()) * &moments[2 * r];
        sum.add(&diag);
        for (s, b) in coeffs.iter().enumerate().skip(r + 1) {
            if b.is_zero() {
                continue;
            }
            let mut term = Float::with_val(prec, a * b);
            term *= &cosines[s - r];
            term *= &moments[r + s];
            term <<= 1u32;
            sum.add(&term);
        }
    }
    sum.finish()
}

fn cosines(theta: &Angle, count: usize, prec: u32) -> Vec<Float> {
    let th = theta.to_float(prec + 32);
    (0..count)
        .map(|j| Float::with_val(prec, Float::with_val(prec + 32, &th * j as u32).cos_ref()))
        .collect()
}

fn evaluate(
    spec: &WeightSpec,
    degrees: &[usize],
    theta: &Angle,
    bits: u32,
    policy: &PrecisionPolicy,
) -> Result<Vec<Evaluation>> {
    let n_max = degrees.iter().copied().max().unwrap_or(0);
    let bases = bases_for(spec, degrees, bits, policy)?;
    let moments = rotated_moments(spec, theta, 2 * n_max, bits)?;
    let cos = cosines(&theta.abs(), n_max + 1, bits);
    Ok(bases
        .iter()
        .map(|b| bilinear_norm(&b.coeffs, &cos, &moments, bits))
        .collect())
}

pub fn projection_norm(spec: &WeightSpec, n: usize, theta: &Angle, policy: &PrecisionPolicy) -> Result<NormResult> {
    spec.check_in_sector(theta)?;
    let start = required_bits(spec, n, theta, policy);
    let mut certified = certify_batch_from(policy, start, |bits| evaluate(spec, &[n], theta, bits, policy))?;
    attach_bounds(spec, n, theta, certified.remove(0))
}

/// Norms for several degrees. Weights with closed-form moments evaluate
/// each degree independently and in parallel; others share one moment
/// table and one orthonormalization across the batch. Results are in the
/// order of `degrees` either way.
pub fn projection_norms(
    spec: &WeightSpec,
    degrees: &[usize],
    theta: &Angle,
    policy: &PrecisionPolicy,
) -> Result<Vec<NormResult>> {
    spec.check_in_sector(theta)?;
    if degrees.is_empty() {
        return Ok(Vec::new());
    }
    if spec.has_closed_form_moments() {
        return degrees
            .par_iter()
            .map(|&n| projection_norm(spec, n, theta, policy))
            .collect();
    }
    let n_max = degrees.iter().copied().max().unwrap_or(0);
    let start = required_bits(spec, n_max, theta, policy);
    let certified = certify_batch_from(policy, start, |bits| evaluate(spec, degrees, theta, bits, policy))?;
    degrees
        .iter()
        .zip(certified)
        .map(|(&n, c)| attach_bounds(spec, n, theta, c))
        .collect()
}

fn attach_bounds(spec: &WeightSpec, n: usize, theta: &Angle, norm: CertifiedValue) -> Result<NormResult> {
    let prec = norm.precision_used;
    let lower = lower_bound(spec, theta, n, prec)?;
    let upper = match spec.classical() {
        Some(Classical::Laguerre) => Some(upper_bound_laguerre(theta, n, prec)?),
        Some(Classical::Hermite) if n.is_multiple_of(2) => Some(upper_bound_hermite_even(theta, n, prec)?),
        _ => None,
    };
    let slack = Float::with_val(prec, 10u32).pow(-(norm.certified_digits as i32));
    let lower_ok = norm.value >= Float::with_val(prec, &lower * (Float::with_val(prec, 1) - &slack));
    let upper_ok = upper
        .as_ref()
        .map(|u| norm.value <= Float::with_val(prec, u * (Float::with_val(prec, 1) + &slack)));
    Ok(NormResult {
        n,
        theta: theta.clone(),
        norm,
        lower,
        upper,
        lower_ok,
        upper_ok,
    })
}

/// `c_θ² s_θ^{-2n-1}`.
pub fn lower_bound(spec: &WeightSpec, theta: &Angle, n: usize, prec: u32) -> Result<Float> {
    let wp = prec + 32;
    let sc = scale_constants(spec, theta, wp)?;
    let log =
        Float::with_val(wp, sc.c_theta.ln_ref()) * 2u32 - Float::with_val(wp, sc.s_theta.ln_ref()) * (2 * n as u32 + 1);
    Ok(Float::with_val(prec, log.exp_ref()))
}

/// `sec(θ)^{2n+1} 2^{4n+2}`, valid for |θ| < π/2.
pub fn upper_bound_laguerre(theta: &Angle, n: usize, prec: u32) -> Result<Float> {
    let half_pi = Angle::pi_times(1, 2);
    if theta.abs().cmp_value(&half_pi) != std::cmp::Ordering::Less {
        return Err(Error::SectorViolation {
            theta: theta.abs().to_f64(),
            alpha: half_pi.to_f64(),
        });
    }
    let wp = prec + 32;
    let c = theta.to_float(wp).cos();
    let log = -Float::with_val(wp, c.ln_ref()) * (2 * n as u32 + 1);
    let mut v = Float::with_val(prec, log.exp_ref());
    v <<= 4 * n as u32 + 2;
    Ok(v)
}

/// For even `m = 2n`: `π (n+1)^{1/2} 2^{4n+2} (cos 2θ)^{-(4n+1)/2}`, valid
/// for |θ| < π/4.
pub fn upper_bound_hermite_even(theta: &Angle, m: usize, prec: u32) -> Result<Float> {
    if m % 2 == 1 {
        return Err(Error::UnsupportedParity(m));
    }
    let quarter = Angle::pi_times(1, 4);
    if theta.abs().cmp_value(&quarter) != std::cmp::Ordering::Less {
        return Err(Error::SectorViolation {
            theta: theta.abs().to_f64(),
            alpha: quarter.to_f64(),
        });
    }
    let n = (m / 2) as u32;
    let wp = prec + 32;
    let c = Float::with_val(wp, theta.to_float(wp) * 2u32).cos();
    let log = -Float::with_val(wp, c.ln_ref()) * Float::with_val(wp, 4 * n + 1) / 2u32;
    let mut v = Float::with_val(wp, log.exp_ref());
    v *= pi(wp);
    v *= Float::with_val(wp, n + 1).sqrt();
    v <<= 4 * n + 2;
    Ok(Float::with_val(prec, v))
}

/// Direct quadrature of `r ∫ |p_n(zx) σ(zx)|² dx` at `z = r e^{iθ}`,
/// independent of the moment route. Only practical for modest `n`.
pub fn quadrature_norm_oracle(
    spec: &WeightSpec,
    n: usize,
    theta: &Angle,
    modulus: Option<&Float>,
    policy: &PrecisionPolicy,
) -> Result<CertifiedValue> {
    spec.check_in_sector(theta)?;
    let extra = bits_to_extra_digits(required_bits(spec, n, theta, policy), policy);
    let quad_policy = PrecisionPolicy {
        guard_digits: policy.guard_digits + extra,
        max_digits: policy
            .max_digits
            .max(policy.target_digits + policy.guard_digits + extra),
        ..*policy
    };
    let wp = quad_policy.working_bits();
    let basis = oracle_basis(spec, n, 2 * wp, policy)?;

    let r = modulus.map_or_else(|| Float::with_val(wp, 1), |m| Float::with_val(wp, m));
    if r <= 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    let z = HpComplex::from_polar(&r, &theta.to_float(wp));
    let coeffs: Vec<Float> = basis.coeffs.iter().map(|c| Float::with_val(wp, c)).collect();
    let basis = PolyBasis { coeffs, ..basis };
    let failure: RefCell<Option<Error>> = RefCell::new(None);

    let value = tanh_sinh_integrate_real(
        |x| {
            let zx = z.scale(x);
            let p = basis.eval_complex(&zx);
            match weight_eval(spec, &zx) {
                Ok(w) => Float::with_val(x.prec(), (&p * &w).norm_sqr() * &r),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    Float::new(x.prec())
                }
            }
        },
        spec.domain(),
        &quad_policy,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(value)
}

fn bits_to_extra_digits(bits: u32, policy: &PrecisionPolicy) -> u32 {
    crate::numerics::bits_to_digits(bits).saturating_sub(policy.target_digits + policy.guard_digits)
}

fn oracle_basis(spec: &WeightSpec, n: usize, bits: u32, policy: &PrecisionPolicy) -> Result<PolyBasis> {
    let mut bits = bits;
    loop {
        match bases_for(spec, &[n], bits, policy) {
            Ok(mut b) => return Ok(b.remove(0)),
            Err(e) if e.is_precision_limited() && bits < policy.max_bits() => bits *= 2,
            Err(e) => return Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{agreement_digits, Domain};

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn hermite_closed_forms() {
        let theta = Angle::pi_times(1, 10);
        let prec = 256;
        let c = Float::with_val(prec, theta.to_float(prec) * 2u32).cos();
        let n0 = projection_norm(&WeightSpec::hermite(), 0, &theta, &policy()).unwrap();
        let expect = Float::with_val(prec, c.recip_ref()).sqrt();
        assert!(agreement_digits(&n0.norm.value, &expect, prec) >= 30);

        let n2 = projection_norm(&WeightSpec::hermite(), 2, &theta, &policy()).unwrap();
        let a = Float::with_val(prec, (&c).pow(-2.5f64)) * 3u32;
        let b = Float::with_val(prec, (&c).pow(-0.5f64));
        let expect = (a - b) / 2u32;
        assert!(agreement_digits(&n2.norm.value, &expect, prec) >= 30);
        assert!(n2.sandwich_ok());
    }

    #[test]
    fn laguerre_ground_state_is_secant() {
        let theta = Angle::radians(0.6);
        let r = projection_norm(&WeightSpec::laguerre(), 0, &theta, &policy()).unwrap();
        let expect = Float::with_val(200, 0.6f64).cos().recip();
        assert!(agreement_digits(&r.norm.value, &expect, 150) >= 30);
        // equality case of the lower bound
        assert!(agreement_digits(&r.norm.value, &r.lower, 150) >= 30);
    }

    #[test]
    fn self_adjoint_case_is_one() {
        for spec in [WeightSpec::hermite(), WeightSpec::laguerre()] {
            let r = projection_norm(&spec, 9, &Angle::zero(), &policy()).unwrap();
            assert!(agreement_digits(&r.norm.value, &Float::with_val(64, 1), 200) >= 30);
        }
    }

    #[test]
    fn laguerre_rotated_moments() {
        let theta = Angle::radians(0.4);
        let t = cross_moments(&WeightSpec::laguerre(), &theta, 4, &policy()).unwrap();
        let p = t.entries[0].prec();
        let sec = Float::with_val(p, 0.4f64).cos().recip();
        let expect = Float::with_val(p, 6u32) * Float::with_val(p, (&sec).pow(4u32));
        assert!(agreement_digits(&t.entries[3], &expect, p) >= 30);
    }

    #[test]
    fn bound_values() {
        assert_eq!(upper_bound_laguerre(&Angle::zero(), 0, 64).unwrap(), 4);
        let four_pi = Float::with_val(64, pi(64) * 4u32);
        assert!(agreement_digits(&upper_bound_hermite_even(&Angle::zero(), 0, 64).unwrap(), &four_pi, 64) >= 15);
        assert!(matches!(
            upper_bound_hermite_even(&Angle::zero(), 3, 64),
            Err(Error::UnsupportedParity(3))
        ));
        assert!(matches!(
            upper_bound_laguerre(&Angle::pi_times(1, 2), 1, 64),
            Err(Error::SectorViolation { .. })
        ));
        let third = upper_bound_laguerre(&Angle::pi_times(1, 3), 1, 128).unwrap();
        assert!(agreement_digits(&third, &Float::with_val(128, 8 * 64), 128) >= 30);
    }

    #[test]
    fn oracle_matches_hermite_two() {
        let theta = Angle::pi_times(1, 10);
        let q = quadrature_norm_oracle(&WeightSpec::hermite(), 2, &theta, None, &policy()).unwrap();
        let m = projection_norm(&WeightSpec::hermite(), 2, &theta, &policy()).unwrap();
        assert!(agreement_digits(&q.value, &m.norm.value, 100) >= 25);
    }

    #[test]
    fn batch_route_for_polynomial_exponent() {
        let spec = WeightSpec::poly_exp(vec![1.0, 0.0, 0.0, 1.0], Domain::HalfLine).unwrap();
        let theta = Angle::pi_times(1, 20);
        let rs = projection_norms(&spec, &[0, 3], &theta, &PrecisionPolicy::with_target(20).unwrap()).unwrap();
        for r in &rs {
            assert!(r.norm.value >= 1);
            assert!(r.lower_ok);
        }
    }
}
