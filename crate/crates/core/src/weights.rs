//! Weight families, their sectors of analyticity, and the scaling constants
//! `(s_θ, c_θ)` with `|σ(e^{iθ} r)| ≥ c_θ σ(s_θ r)` for all `r > 0`.
//!
//! Two families are supported:
//!
//! * Gamma–Beta: `σ(x) = x^{γ/2} e^{-τ x^β}`. The modulus identity holds with
//!   equality, `s_θ = cos(βθ)^{1/β}`, `c_θ = s_θ^{-γ/2}`, and τ drops out.
//!   Hermite is `(γ, β, τ) = (0, 2, 1/2)` on the line, Laguerre
//!   `(0, 1, 1/2)` on the half-line.
//! * Polynomial exponent: `σ(x) = exp(-Σ c_j x^j)` with `c_n > 0`. Here
//!   `s_θ = ((1 + cos nθ)/2)^{1/n}` and `c_θ = e^{-k_θ}` where `k_θ` is the
//!   supremum over `r > 0` of `Σ c_j (cos jθ - s_θ^j) r^j`.
//!
//! On the full line a polynomial-exponent weight is evaluated as `σ(|x|)`.

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::numerics::{bits_to_digits, Domain, HpComplex};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFamily {
    GammaBeta { gamma: f64, beta: f64, tau: f64 },
    PolyExp { coeffs: Vec<f64> },
}

/// The two classical cases with closed-form orthonormal polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classical {
    Hermite,
    Laguerre,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    family: WeightFamily,
    domain: Domain,
}

impl WeightSpec {
    pub fn new(family: WeightFamily, domain: Domain) -> Result<Self> {
        match &family {
            WeightFamily::GammaBeta { gamma, beta, tau } => {
                if !(gamma.is_finite() && beta.is_finite() && tau.is_finite()) {
                    return Err(Error::InvalidWeight("parameters must be finite".into()));
                }
                if *gamma <= -1.0 {
                    return Err(Error::InvalidWeight(format!("gamma = {gamma} must exceed -1")));
                }
                if *beta <= 0.0 {
                    return Err(Error::InvalidWeight(format!("beta = {beta} must be positive")));
                }
                if *tau <= 0.0 {
                    return Err(Error::InvalidWeight(format!("tau = {tau} must be positive")));
                }
                if domain == Domain::FullLine && (*gamma != 0.0 || beta.fract() != 0.0 || beta % 2.0 != 0.0) {
                    return Err(Error::InvalidWeight(
                        "on the full line gamma must be 0 and beta an even integer".into(),
                    ));
                }
            }
            WeightFamily::PolyExp { coeffs } => {
                let Some(lead) = coeffs.last() else {
                    return Err(Error::InvalidWeight("no coefficients".into()));
                };
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidWeight("coefficients must be finite".into()));
                }
                if *lead <= 0.0 {
                    return Err(Error::InvalidWeight("leading coefficient must be positive".into()));
                }
                if domain == Domain::FullLine && coeffs.len() % 2 != 0 {
                    return Err(Error::InvalidWeight(
                        "on the full line the leading power must be even".into(),
                    ));
                }
            }
        }
        Ok(WeightSpec { family, domain })
    }

    pub fn gamma_beta(gamma: f64, beta: f64, tau: f64, domain: Domain) -> Result<Self> {
        WeightSpec::new(WeightFamily::GammaBeta { gamma, beta, tau }, domain)
    }

    /// `exp(-Σ_{j≥1} coeffs[j-1] x^j)`.
    pub fn poly_exp(coeffs: Vec<f64>, domain: Domain) -> Result<Self> {
        WeightSpec::new(WeightFamily::PolyExp { coeffs }, domain)
    }

    /// `e^{-x²/2}` on the line.
    pub fn hermite() -> Self {
        WeightSpec::gamma_beta(0.0, 2.0, 0.5, Domain::FullLine).expect("valid")
    }

    /// `e^{-x/2}` on the half-line.
    pub fn laguerre() -> Self {
        WeightSpec::gamma_beta(0.0, 1.0, 0.5, Domain::HalfLine).expect("valid")
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Hermite or Laguerre up to the decay scale τ.
    pub fn classical(&self) -> Option<Classical> {
        match (&self.family, self.domain) {
            (WeightFamily::GammaBeta { gamma, beta, .. }, Domain::FullLine) if *gamma == 0.0 && *beta == 2.0 => {
                Some(Classical::Hermite)
            }
            (WeightFamily::GammaBeta { gamma, beta, .. }, Domain::HalfLine) if *gamma == 0.0 && *beta == 1.0 => {
                Some(Classical::Laguerre)
            }
            _ => None,
        }
    }

    /// Index of the leading term of a polynomial exponent.
    pub fn leading_index(&self) -> Option<usize> {
        match &self.family {
            WeightFamily::PolyExp { coeffs } => Some(coeffs.len()),
            WeightFamily::GammaBeta { .. } => None,
        }
    }

    /// Moments are available in closed form (Gamma-Beta family).
    pub fn has_closed_form_moments(&self) -> bool {
        matches!(self.family, WeightFamily::GammaBeta { .. })
    }

    pub fn sector(&self) -> Angle {
        sector(self)
    }

    /// `Ok` iff `|theta|` is strictly inside the sector.
    pub fn check_in_sector(&self, theta: &Angle) -> Result<()> {
        let alpha = self.sector();
        if theta.abs().cmp_value(&alpha) == std::cmp::Ordering::Less {
            Ok(())
        } else {
            Err(Error::SectorViolation {
                theta: theta.abs().to_f64(),
                alpha: alpha.to_f64(),
            })
        }
    }

    pub fn label(&self) -> String {
        match (self.classical(), &self.family) {
            (Some(Classical::Hermite), WeightFamily::GammaBeta { tau, .. }) if *tau == 0.5 => "hermite".into(),
            (Some(Classical::Laguerre), WeightFamily::GammaBeta { tau, .. }) if *tau == 0.5 => "laguerre".into(),
            (_, WeightFamily::GammaBeta { gamma, beta, tau }) => format!("gammabeta({gamma},{beta},{tau})"),
            (_, WeightFamily::PolyExp { coeffs }) => {
                let c: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                format!("polyexp({})", c.join(","))
            }
        }
    }
}

/// Half-angle of the sector: π/(2β) or π/(2n).
pub fn sector(spec: &WeightSpec) -> Angle {
    match &spec.family {
        WeightFamily::GammaBeta { beta, .. } => {
            let beta = Rational::from_f64(*beta).expect("finite");
            Angle::PiTimes(Rational::from(1) / (beta * 2u32))
        }
        WeightFamily::PolyExp { coeffs } => Angle::pi_times(1, 2 * coeffs.len() as i64),
    }
}

/// Constants realizing the basic modulus inequality at angle θ.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleParams {
    pub theta: Angle,
    pub s_theta: Float,
    pub c_theta: Float,
    /// Polynomial-exponent weights only; `c_theta = e^{-k_theta}`.
    pub k_theta: Option<Float>,
}

pub fn scale_constants(spec: &WeightSpec, theta: &Angle, prec: u32) -> Result<ScaleParams> {
    spec.check_in_sector(theta)?;
    let one = Float::with_val(prec, 1);
    if theta.is_zero() {
        let k_theta = spec.leading_index().map(|_| Float::new(prec));
        return Ok(ScaleParams {
            theta: theta.clone(),
            s_theta: one.clone(),
            c_theta: one,
            k_theta,
        });
    }
    // Everything depends on θ through cos(jθ), so work with |θ|.
    let th = theta.abs();
    let wp = prec + 32;
    match &spec.family {
        WeightFamily::GammaBeta { gamma, beta, .. } => {
            let beta_f = Float::with_val(wp, *beta);
            let c = th.scale(&Rational::from_f64(*beta).expect("finite")).to_float(wp).cos();
            let s = c.pow_ref_f(&(one.clone() / &beta_f));
            let c_theta = s.pow_ref_f(&Float::with_val(wp, -*gamma / 2.0));
            Ok(ScaleParams {
                theta: theta.clone(),
                s_theta: Float::with_val(prec, &s),
                c_theta: Float::with_val(prec, &c_theta),
                k_theta: None,
            })
        }
        WeightFamily::PolyExp { coeffs } => {
            let n = coeffs.len() as u32;
            let cos_n = th.scale(&Rational::from(n)).to_float(wp).cos();
            let half = Float::with_val(wp, (cos_n + 1u32) / 2u32);
            let s = half.pow_ref_f(&Float::with_val(wp, Rational::from((1, n))));
            // g(r) = Σ_j c_j (cos jθ - s^j) r^j, ascending coefficients from r^0.
            let mut g = vec![Float::new(wp)];
            let mut s_pow = Float::with_val(wp, 1);
            for (idx, c) in coeffs.iter().enumerate() {
                let j = idx as u32 + 1;
                s_pow *= &s;
                let cos_j = th.scale(&Rational::from(j)).to_float(wp).cos();
                g.push(Float::with_val(wp, *c) * (cos_j - &s_pow));
            }
            let dg = derivative(&g);
            let mut k = Float::new(wp);
            for r in positive_real_roots(&dg, wp) {
                let v = horner(&g, &r);
                if v > k {
                    k = v;
                }
            }
            let c_theta = Float::with_val(wp, -&k).exp();
            Ok(ScaleParams {
                theta: theta.clone(),
                s_theta: Float::with_val(prec, &s),
                c_theta: Float::with_val(prec, &c_theta),
                k_theta: Some(Float::with_val(prec, &k)),
            })
        }
    }
}

trait PowF {
    fn pow_ref_f(&self, w: &Float) -> Float;
}

impl PowF for Float {
    fn pow_ref_f(&self, w: &Float) -> Float {
        Float::with_val(self.prec(), self).pow(w)
    }
}

fn derivative(p: &[Float]) -> Vec<Float> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| Float::with_val(c.prec(), c * j as u32))
        .collect()
}

/// Ascending-coefficient polynomial evaluated at `x`.
pub(crate) fn horner(p: &[Float], x: &Float) -> Float {
    let prec = x.prec();
    let mut acc = Float::new(prec);
    for c in p.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

fn trimmed(p: &[Float]) -> &[Float] {
    let mut end = p.len();
    while end > 0 && p[end - 1].is_zero() {
        end -= 1;
    }
    &p[..end]
}

/// Simple real roots of `p` in `(0, ∞)`, ascending. Roots are isolated
/// between consecutive critical points (the roots of `p'`, found the same way)
/// and refined by bisection.
pub(crate) fn positive_real_roots(p: &[Float], prec: u32) -> Vec<Float> {
    let p = trimmed(p);
    if p.len() < 2 {
        return Vec::new();
    }
    if p.len() == 2 {
        let r = -Float::with_val(prec, &p[0] / &p[1]);
        return if r > 0 { vec![r] } else { Vec::new() };
    }
    let lead = p.last().expect("nonempty");
    let mut bound = Float::new(prec);
    for c in &p[..p.len() - 1] {
        let q = Float::with_val(prec, c / lead).abs();
        if q > bound {
            bound = q;
        }
    }
    bound += 1u32;

    let mut breaks = vec![Float::new(prec)];
    breaks.extend(
        positive_real_roots(&derivative(p), prec)
            .into_iter()
            .filter(|r| *r < bound),
    );
    breaks.push(bound);

    let mut roots = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let f_lo = horner(p, lo);
        let f_hi = horner(p, hi);
        if f_hi.is_zero() {
            roots.push(hi.clone());
            continue;
        }
        if f_lo.is_sign_negative() == f_hi.is_sign_negative() || f_lo.is_zero() {
            continue;
        }
        roots.push(bisect(p, lo.clone(), hi.clone(), f_lo.is_sign_negative(), prec));
    }
    roots.dedup();
    roots
}

fn bisect(p: &[Float], mut lo: Float, mut hi: Float, lo_negative: bool, prec: u32) -> Float {
    for _ in 0..(prec + 64) {
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        let f = horner(p, &mid);
        if f.is_zero() {
            return mid;
        }
        if f.is_sign_negative() == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Float::with_val(prec, &lo + &hi) / 2u32
}

/// σ(z) on the principal branch. On the full line the weights are even, so
/// `z` with negative real part is reflected first.
pub fn weight_eval(spec: &WeightSpec, z: &HpComplex) -> Result<HpComplex> {
    let prec = z.prec();
    let z = if spec.domain == Domain::FullLine && z.re.is_sign_negative() {
        -z
    } else {
        z.clone()
    };
    let is_zero = z.re.is_zero() && z.im.is_zero();
    if !is_zero {
        let alpha = spec.sector().to_float(prec);
        let arg = z.arg().abs();
        if arg >= alpha {
            return Err(Error::SectorViolation {
                theta: arg.to_f64(),
                alpha: alpha.to_f64(),
            });
        }
    }
    match &spec.family {
        WeightFamily::GammaBeta { gamma, beta, tau } => {
            if is_zero {
                return match gamma.partial_cmp(&0.0) {
                    Some(std::cmp::Ordering::Less) => Err(Error::Domain("weight has a pole at 0".into())),
                    Some(std::cmp::Ordering::Equal) => Ok(HpComplex::from_real(Float::with_val(prec, 1))),
                    _ => Ok(HpComplex::zero(prec)),
                };
            }
            let ln_z = z.ln();
            let power = ln_z.scale(&Float::with_val(prec, *beta)).exp();
            let mut exponent = power.scale(&Float::with_val(prec, -*tau));
            if *gamma != 0.0 {
                exponent = &exponent + &ln_z.scale(&Float::with_val(prec, *gamma / 2.0));
            }
            Ok(exponent.exp())
        }
        WeightFamily::PolyExp { coeffs } => {
            let mut sum = HpComplex::zero(prec);
            let mut z_pow = HpComplex::from_real(Float::with_val(prec, 1));
            for c in coeffs {
                z_pow = &z_pow * &z;
                sum = &sum + &z_pow.scale(&Float::with_val(prec, *c));
            }
            Ok((-&sum).exp())
        }
    }
}

/// σ at a positive real point.
pub fn weight_eval_real(spec: &WeightSpec, x: &Float) -> Result<Float> {
    Ok(weight_eval(spec, &HpComplex::from_real(x.clone()))?.re)
}

/// Outcome of checking the basic modulus inequality on a grid.
#[derive(Debug, Clone)]
pub struct BasicConditionReport {
    pub min_ratio: Float,
    pub argmin_r: f64,
    /// Digits to which a ratio of 1 is accepted as meeting the inequality.
    pub tolerance_digits: u32,
    pub holds: bool,
}

/// Minimum over `r_grid` of `|σ(e^{iθ} r)| / (c_θ σ(s_θ r))`.
pub fn verify_basic_condition(
    spec: &WeightSpec,
    theta: &Angle,
    r_grid: &[f64],
    prec: u32,
) -> Result<BasicConditionReport> {
    let params = scale_constants(spec, theta, prec)?;
    let th = theta.to_float(prec);
    let mut min_ratio: Option<(Float, f64)> = None;
    for &r in r_grid {
        if r <= 0.0 || !r.is_finite() {
            return Err(Error::Domain(format!("grid point {r} is not a positive real")));
        }
        let rf = Float::with_val(prec, r);
        let z = HpComplex::from_polar(&rf, &th);
        let top = weight_eval(spec, &z)?.abs();
        let scaled = Float::with_val(prec, &rf * &params.s_theta);
        let bottom = weight_eval_real(spec, &scaled)? * &params.c_theta;
        let ratio = top / bottom;
        if min_ratio.as_ref().is_none_or(|(m, _)| ratio < *m) {
            min_ratio = Some((ratio, r));
        }
    }
    let (min_ratio, argmin_r) = min_ratio.ok_or_else(|| Error::Domain("empty grid".into()))?;
    let tolerance_digits = bits_to_digits(prec).saturating_sub(10).max(1);
    let slack = Float::with_val(prec, 1) - Float::with_val(prec, 10u32).pow(-(tolerance_digits as i32));
    let holds = min_ratio >= slack;
    Ok(BasicConditionReport {
        min_ratio,
        argmin_r,
        tolerance_digits,
        holds,
    })
}
