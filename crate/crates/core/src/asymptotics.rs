//! Growth of the projection norms in `n` and what it implies for the
//! spectral expansion of `e^{-Ht}`.

use std::cmp::Ordering;

use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{HpComplex, PrecisionPolicy};
use crate::projnorm::{projection_norm, projection_norms, NormResult};
use crate::weights::{scale_constants, Classical, WeightSpec};
use crate::Angle;

/// Slopes closer to zero than this are treated as undecided.
pub const SLOPE_DEAD_BAND: f64 = 1e-6;

const REPORT_BITS: u32 = 128;

/// `√(N_n / N_{n-2})`.
pub fn sigma_ratio(spec: &WeightSpec, n: usize, theta: &Angle, policy: &PrecisionPolicy) -> Result<Float> {
    if n < 2 {
        return Err(Error::Domain(format!("sigma ratio needs n >= 2, got {n}")));
    }
    let hi = projection_norm(spec, n, theta, policy)?;
    let lo = projection_norm(spec, n - 2, theta, policy)?;
    Ok(sigma_from(&hi, &lo))
}

pub fn sigma_from(hi: &NormResult, lo: &NormResult) -> Float {
    let prec = hi.norm.precision_used.min(lo.norm.precision_used);
    Float::with_val(prec, &hi.norm.value / &lo.norm.value).sqrt()
}

#[derive(Debug, Clone)]
pub struct GrowthEntry {
    pub result: NormResult,
    /// `log N_n / n`; undefined at n = 0.
    pub per_index: Option<f64>,
    /// Ratio to the same-parity predecessor when it is on the grid.
    pub sigma: Option<Float>,
}

#[derive(Debug, Clone)]
pub struct GrowthReport {
    pub theta: Angle,
    pub entries: Vec<GrowthEntry>,
    /// Per-index exponent of the lower bound, `-2 log s_θ`.
    pub s_lower: f64,
    /// Per-index exponent of the classical upper bound where one exists.
    pub s_upper: Option<f64>,
    /// Least-squares fit of `log N_n = s n + (c/2) log n + d` over the
    /// upper half of the grid.
    pub s_estimate: Option<f64>,
}

/// `0, stride, 2·stride, …` up to `n_max`.
pub fn index_grid(n_max: usize, stride: usize) -> Vec<usize> {
    (0..=n_max).step_by(stride.max(1)).collect()
}

pub fn growth_report(
    spec: &WeightSpec,
    theta: &Angle,
    n_max: usize,
    stride: usize,
    policy: &PrecisionPolicy,
) -> Result<GrowthReport> {
    let grid = index_grid(n_max, stride);
    let results = projection_norms(spec, &grid, theta, policy)?;
    let (s_lower, s_upper) = exponent_bracket(spec, theta)?;

    let mut entries: Vec<GrowthEntry> = Vec::with_capacity(results.len());
    for (i, result) in results.iter().enumerate() {
        let n = result.n;
        let per_index = (n > 0).then(|| ln_f64(&result.norm.value) / n as f64);
        let sigma = if n >= 2 {
            grid[..i]
                .iter()
                .position(|&m| m == n - 2)
                .map(|j| sigma_from(result, &results[j]))
        } else {
            None
        };
        entries.push(GrowthEntry {
            result: result.clone(),
            per_index,
            sigma,
        });
    }

    let s_estimate = if theta.is_zero() {
        Some(0.0)
    } else {
        fit_exponent(&entries)
    };
    Ok(GrowthReport {
        theta: theta.clone(),
        entries,
        s_lower,
        s_upper,
        s_estimate,
    })
}

fn ln_f64(x: &Float) -> f64 {
    Float::with_val(x.prec(), x.ln_ref()).to_f64()
}

/// Limits of `(1/n) log` of the lower bound and of the classical upper bound.
pub fn exponent_bracket(spec: &WeightSpec, theta: &Angle) -> Result<(f64, Option<f64>)> {
    let sc = scale_constants(spec, theta, REPORT_BITS)?;
    let s_lower = -2.0 * ln_f64(&sc.s_theta);
    let ln4 = 4f64.ln();
    let s_upper = match spec.classical() {
        Some(Classical::Hermite) => Some(s_lower + ln4),
        Some(Classical::Laguerre) => Some(s_lower + 2.0 * ln4),
        None => None,
    };
    Ok((s_lower, s_upper))
}

fn fit_exponent(entries: &[GrowthEntry]) -> Option<f64> {
    let points: Vec<(f64, f64)> = entries
        .iter()
        .filter(|e| e.result.n > 0)
        .map(|e| (e.result.n as f64, ln_f64(&e.result.norm.value)))
        .collect();
    let tail = &points[points.len() / 2..];
    if tail.len() < 3 {
        return None;
    }
    // Normal equations for the basis (n, ½ log n, 1).
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for &(n, y) in tail {
        let row = [n, 0.5 * n.ln(), 1.0];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * y;
        }
    }
    solve3(ata, atb).map(|x| x[0])
}

#[allow(clippy::needless_range_loop)]
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// `[log sec 2θ, log(4 sec 2θ)] / (2 cos 2θ)` for the Hermite expansion;
/// `[0, 0]` at θ = 0 where the expansion converges for every t > 0.
pub fn tz_bracket(theta: &Angle) -> Result<(f64, f64)> {
    let quarter = Angle::pi_times(1, 4);
    if theta.abs().cmp_value(&quarter) != Ordering::Less {
        return Err(Error::SectorViolation {
            theta: theta.abs().to_f64(),
            alpha: quarter.to_f64(),
        });
    }
    if theta.is_zero() {
        return Ok((0.0, 0.0));
    }
    let c = Float::with_val(REPORT_BITS, theta.to_float(REPORT_BITS) * 2u32)
        .cos()
        .to_f64();
    let lower = -c.ln();
    let upper = lower + 4f64.ln();
    Ok((lower / (2.0 * c), upper / (2.0 * c)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Convergent,
    Divergent,
    Indeterminate,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Convergent => "convergent",
            Verdict::Divergent => "divergent",
            Verdict::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ExpansionTerm {
    pub n: usize,
    /// `e^{-(2n+1) cos(2θ) t} N_n`.
    pub value: Float,
    pub ln_value: f64,
}

#[derive(Debug, Clone)]
pub struct ExpansionReport {
    pub theta: Angle,
    pub t: f64,
    pub terms: Vec<ExpansionTerm>,
    /// Least-squares slope of `ln term_n` against `n` over the last quarter.
    pub tail_slope: f64,
    pub verdict: Verdict,
    pub t_z_bracket: (f64, f64),
}

/// Term norms of the Hermite expansion of `e^{-Ht}` for `z = e^{iθ}`.
pub fn expansion_terms(
    theta: &Angle,
    t: f64,
    n_max: usize,
    stride: usize,
    policy: &PrecisionPolicy,
) -> Result<ExpansionReport> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be finite and non-negative, got {t}")));
    }
    let t_z_bracket = tz_bracket(theta)?;
    let spec = WeightSpec::hermite();
    let grid = index_grid(n_max, stride);
    let results = projection_norms(&spec, &grid, theta, policy)?;
    let prec = REPORT_BITS;
    let c = Float::with_val(prec, theta.to_float(prec) * 2u32).cos();
    let rate = Float::with_val(prec, &c * t);
    let terms: Vec<ExpansionTerm> = results
        .iter()
        .map(|r| {
            let decay = Float::with_val(prec, &rate * (2 * r.n as u32 + 1));
            let ln_value = Float::with_val(prec, r.norm.value.ln_ref()) - decay;
            ExpansionTerm {
                n: r.n,
                value: Float::with_val(prec, ln_value.exp_ref()),
                ln_value: ln_value.to_f64(),
            }
        })
        .collect();
    let tail_slope = tail_slope(&terms);
    let verdict = if tail_slope < -SLOPE_DEAD_BAND {
        Verdict::Convergent
    } else if tail_slope > SLOPE_DEAD_BAND {
        Verdict::Divergent
    } else {
        Verdict::Indeterminate
    };
    Ok(ExpansionReport {
        theta: theta.clone(),
        t,
        terms,
        tail_slope,
        verdict,
        t_z_bracket,
    })
}

fn tail_slope(terms: &[ExpansionTerm]) -> f64 {
    let start = terms.len() - (terms.len() / 4).max(2).min(terms.len());
    let tail = &terms[start..];
    if tail.len() < 2 {
        return 0.0;
    }
    let k = tail.len() as f64;
    let mean_n = tail.iter().map(|e| e.n as f64).sum::<f64>() / k;
    let mean_y = tail.iter().map(|e| e.ln_value).sum::<f64>() / k;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for e in tail {
        let dx = e.n as f64 - mean_n;
        sxy += dx * (e.ln_value - mean_y);
        sxx += dx * dx;
    }
    sxy / sxx
}

/// `exp(tan 2θ)`.
pub fn semiclassical_mu(theta: &Angle, prec: u32) -> Result<Float> {
    tz_bracket(theta)?;
    let wp = prec + 32;
    let t = Float::with_val(wp, theta.to_float(wp) * 2u32).tan();
    Ok(Float::with_val(prec, t.exp_ref()))
}

/// Ratio `∫|φ|² / |∫φ²|` for the full-line Gaussian
/// `φ(s) = exp(-ψ₁s - ψ₂s²/2)`, in closed form.
pub fn gaussian_ratio(psi1: &HpComplex, psi2: &HpComplex) -> Result<Float> {
    if psi2.re <= 0 {
        return Err(Error::Divergent(
            "Gaussian with non-positive real quadratic coefficient has no finite L2 norm".into(),
        ));
    }
    let prec = psi1.prec().min(psi2.prec());
    let amplitude = Float::with_val(prec, psi2.abs() / &psi2.re).sqrt();
    let re1_sq = Float::with_val(prec, psi1.re.square_ref());
    let quotient = (psi1 * psi1).div(psi2);
    let exponent = re1_sq / &psi2.re - quotient.re;
    Ok(amplitude * exponent.exp())
}

/// Parameters of the approximate eigenvector `φ(s + x₀)` at index `n`.
#[derive(Debug, Clone)]
pub struct SemiclassicalParams {
    pub theta: Angle,
    pub n: usize,
    pub eta: Float,
    pub x0: Float,
    pub psi1: HpComplex,
    pub psi2: HpComplex,
    pub lambda: HpComplex,
}

impl SemiclassicalParams {
    pub fn new(theta: &Angle, n: usize, prec: u32) -> Result<Self> {
        tz_bracket(theta)?;
        let th = theta.to_float(prec);
        let two = Float::with_val(prec, &th * 2u32);
        let four = Float::with_val(prec, &th * 4u32);
        let eta = Float::with_val(prec, n as u32) / two.cos();
        let eta = eta.sqrt();
        let one = Float::with_val(prec, 1);
        let e4 = HpComplex::from_polar(&one, &four);
        // -i e^{4iθ}
        let psi2 = HpComplex::new(e4.im.clone(), -e4.re.clone());
        let psi1 = HpComplex::new(Float::new(prec), eta.clone());
        let eta_sq = Float::with_val(prec, eta.square_ref());
        let lambda = HpComplex::new(Float::with_val(prec, &e4.re + 1u32), e4.im.clone()).scale(&eta_sq);
        Ok(SemiclassicalParams {
            theta: theta.clone(),
            n,
            x0: eta.clone(),
            eta,
            psi1,
            psi2,
            lambda,
        })
    }
}

/// Side-by-side logarithms of the semiclassical predictions and, when
/// requested, of the computed norm.
#[derive(Debug, Clone, Serialize)]
pub struct SemiclassicalComparison {
    pub n: usize,
    pub theta_rad: f64,
    /// `n tan 2θ`, the logarithm of `μ(θ)^n`.
    pub n_tan_2theta: f64,
    /// Logarithm of the generic Gaussian ratio at the semiclassical parameters.
    pub log_gaussian_ratio: f64,
    pub log_norm: Option<f64>,
}

pub fn semiclassical_comparison(
    theta: &Angle,
    n: usize,
    with_norm: Option<&PrecisionPolicy>,
) -> Result<SemiclassicalComparison> {
    let params = SemiclassicalParams::new(theta, n, REPORT_BITS)?;
    let ratio = gaussian_ratio(&params.psi1, &params.psi2)?;
    let mu = semiclassical_mu(theta, REPORT_BITS)?;
    let log_norm = match with_norm {
        Some(policy) => Some(ln_f64(
            &projection_norm(&WeightSpec::hermite(), n, theta, policy)?.norm.value,
        )),
        None => None,
    };
    Ok(SemiclassicalComparison {
        n,
        theta_rad: theta.to_f64(),
        n_tan_2theta: ln_f64(&mu) * n as f64,
        log_gaussian_ratio: ln_f64(&ratio),
        log_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::agreement_digits;

    fn c(re: f64, im: f64) -> HpComplex {
        HpComplex::new(Float::with_val(128, re), Float::with_val(128, im))
    }

    #[test]
    fn gaussian_ratio_cases() {
        let r = gaussian_ratio(&c(0.7, 0.0), &c(2.0, 0.0)).unwrap();
        assert!(agreement_digits(&r, &Float::with_val(128, 1), 128) >= 30);
        let r = gaussian_ratio(&c(0.0, 1.0), &c(1.0, -1.0)).unwrap();
        let expect = Float::with_val(128, 2).sqrt().sqrt() * Float::with_val(128, 0.5f64).exp();
        assert!(agreement_digits(&r, &expect, 128) >= 30);
        assert!(matches!(
            gaussian_ratio(&c(0.0, 1.0), &c(0.0, 1.0)),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn semiclassical_eigenvalue() {
        let theta = Angle::pi_times(1, 10);
        let p = SemiclassicalParams::new(&theta, 40, 128).unwrap();
        let two_theta = Float::with_val(128, theta.to_float(128) * 2u32);
        let expect = HpComplex::from_polar(&Float::with_val(128, 80), &two_theta);
        assert!((&p.lambda - &expect).abs() < 1e-30);
    }

    #[test]
    fn mu_values() {
        assert_eq!(semiclassical_mu(&Angle::zero(), 64).unwrap(), 1);
        let mu = semiclassical_mu(&Angle::pi_times(1, 10), 64).unwrap().to_f64();
        assert!((mu - 2.068).abs() < 5e-4);
    }

    #[test]
    fn bracket_values() {
        assert_eq!(tz_bracket(&Angle::zero()).unwrap(), (0.0, 0.0));
        let (lo, hi) = tz_bracket(&Angle::pi_times(1, 10)).unwrap();
        let c = (0.2 * std::f64::consts::PI).cos();
        assert!((lo - (1.0 / c).ln() / (2.0 * c)).abs() < 1e-12);
        assert!((hi - (4.0 / c).ln() / (2.0 * c)).abs() < 1e-12);
        assert!(tz_bracket(&Angle::pi_times(1, 4)).is_err());
    }

    #[test]
    fn least_squares_recovers_model() {
        let entries: Vec<(f64, f64)> = (1..=20)
            .map(|n| (n as f64, 0.4 * n as f64 + 0.75 * (n as f64).ln() - 1.0))
            .collect();
        let mut ata = [[0.0f64; 3]; 3];
        let mut atb = [0.0f64; 3];
        for &(n, y) in &entries {
            let row = [n, 0.5 * n.ln(), 1.0];
            for i in 0..3 {
                for j in 0..3 {
                    ata[i][j] += row[i] * row[j];
                }
                atb[i] += row[i] * y;
            }
        }
        let x = solve3(ata, atb).unwrap();
        assert!((x[0] - 0.4).abs() < 1e-9);
        assert!((x[1] - 1.5).abs() < 1e-8);
    }

    #[test]
    fn expansion_self_adjoint() {
        let r = expansion_terms(&Angle::zero(), 0.5, 12, 2, &PrecisionPolicy::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Convergent);
        assert!((r.tail_slope + 1.0).abs() < 1e-9);
    }
}
