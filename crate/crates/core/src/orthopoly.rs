//! Monomial coefficients of orthonormal polynomials.
//!
//! Hermite and Laguerre polynomials come from exact integer (or rational)
//! cores with one irrational normalizer applied at the end. Any other weight
//! goes through its moment table: the Cholesky factor `L` of the Hankel
//! matrix `[μ_{i+j}]` gives the orthonormal coefficients as the rows of
//! `L^{-1}`.

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numerics::{
    bits_to_digits, digits_to_bits, gamma_real, pi, tanh_sinh_integrate_many, Domain, HpComplex, PrecisionPolicy,
};
use crate::weights::{Classical, WeightFamily, WeightSpec};
use crate::Angle;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl Parity {
    fn of_degree(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `p_n(x) = Σ coeffs[k] x^k`, with `coeffs[n] > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyBasis {
    pub weight: Option<WeightSpec>,
    pub degree: usize,
    pub coeffs: Vec<Float>,
    pub parity: Parity,
}

impl PolyBasis {
    pub fn leading(&self) -> &Float {
        &self.coeffs[self.degree]
    }

    pub fn eval(&self, x: &Float) -> Float {
        crate::weights::horner(&self.coeffs, x)
    }

    pub fn eval_complex(&self, z: &HpComplex) -> HpComplex {
        let prec = z.prec();
        let mut acc = HpComplex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = &acc * z;
            acc.re += c;
        }
        acc
    }
}

/// Integer coefficients of the physicists' Hermite polynomial `H_n`
/// from `H_{k+1} = 2x H_k - 2k H_{k-1}`.
pub fn hermite_integer_coeffs(n: usize) -> Vec<Integer> {
    hermite_integer_table(n).pop().expect("nonempty")
}

/// `H_0 … H_{n_max}` in one recurrence pass.
pub fn hermite_integer_table(n_max: usize) -> Vec<Vec<Integer>> {
    let mut table: Vec<Vec<Integer>> = Vec::with_capacity(n_max + 1);
    table.push(vec![Integer::from(1)]);
    if n_max == 0 {
        return table;
    }
    table.push(vec![Integer::new(), Integer::from(2)]);
    for k in 1..n_max {
        let (prev, cur) = (&table[k - 1], &table[k]);
        let mut next = vec![Integer::new(); k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += Integer::from(c * 2u32);
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= Integer::from(c * (2 * k as u32));
        }
        table.push(next);
    }
    table
}

/// Rational part of the closed-form even Hermite coefficients: with
/// `p_{2m}(x) = Σ_r b_{m,r} x^{2r}` and
/// `b_{m,r} = (-1)^{m-r} 2^{2r-m} √((2m)!) / (π^{1/4} (m-r)! (2r)!)`,
/// returns `b_{m,r} π^{1/4} / √((2m)!)` for r = 0..=m.
pub fn hermite_even_closed_form(m: usize) -> Vec<Rational> {
    let m32 = m as u32;
    (0..=m32)
        .map(|r| {
            let mut q = Rational::from((
                Integer::from(1) << (2 * r),
                Integer::from(Integer::factorial(m32 - r)) * Integer::from(Integer::factorial(2 * r)),
            ));
            q >>= m32;
            if (m32 - r) % 2 == 1 {
                q = -q;
            }
            q
        })
        .collect()
}

/// The same quantity obtained from the recurrence:
/// `k_{2m} h_{2r} π^{1/4} / √((2m)!) = 2^{-m} h_{2r} / (2m)!`.
pub fn hermite_even_from_recurrence(m: usize) -> Vec<Rational> {
    let h = hermite_integer_coeffs(2 * m);
    let fact = Integer::from(Integer::factorial(2 * m as u32));
    (0..=m)
        .map(|r| {
            let mut q = Rational::from((h[2 * r].clone(), fact.clone()));
            q >>= m as u32;
            q
        })
        .collect()
}

/// Orthonormal Hermite polynomial for `e^{-x²/2}`:
/// `p_n = π^{-1/4} (2^n n!)^{-1/2} H_n`.
pub fn hermite_coeffs(n: usize, prec: u32) -> PolyBasis {
    hermite_from_integers(&hermite_integer_coeffs(n), prec)
}

fn hermite_from_integers(h: &[Integer], prec: u32) -> PolyBasis {
    let n = h.len() - 1;
    let wp = prec + 32;
    let norm = Integer::from(Integer::factorial(n as u32)) << n as u32;
    let k_n = Float::with_val(wp, pi(wp).sqrt().sqrt().recip_ref()) / Float::with_val(wp, &norm).sqrt();
    let coeffs = h.iter().map(|c| Float::with_val(prec, &k_n * c)).collect();
    PolyBasis {
        weight: Some(WeightSpec::hermite()),
        degree: n,
        coeffs,
        parity: Parity::of_degree(n),
    }
}

/// `b_{n,r} = (-1)^{n-r} n! / ((r!)² (n-r)!)`, exact.
pub fn laguerre_rational_coeffs(n: usize) -> Vec<Rational> {
    let n32 = n as u32;
    (0..=n32)
        .map(|r| {
            let rf = Integer::from(Integer::factorial(r));
            let q = Rational::from((Integer::from(Integer::binomial_u(n32, r)), rf));
            if (n32 - r) % 2 == 1 {
                -q
            } else {
                q
            }
        })
        .collect()
}

/// Orthonormal Laguerre polynomial for `e^{-x/2}` on the half-line.
pub fn laguerre_coeffs(n: usize, prec: u32) -> PolyBasis {
    let coeffs = laguerre_rational_coeffs(n)
        .iter()
        .map(|q| Float::with_val(prec, q))
        .collect();
    PolyBasis {
        weight: Some(WeightSpec::laguerre()),
        degree: n,
        coeffs,
        parity: Parity::None,
    }
}

/// Closed-form basis for a classical weight with decay scale τ.
/// With `λ = 2τ` (Laguerre) or `√(2τ)` (Hermite), `q_n(x) = √λ p_n(λx)`.
pub fn classical_basis(spec: &WeightSpec, kind: Classical, n: usize, prec: u32) -> PolyBasis {
    let mut basis = match kind {
        Classical::Hermite => hermite_coeffs(n, prec + 32),
        Classical::Laguerre => laguerre_coeffs(n, prec + 32),
    };
    rescale_classical(spec, kind, &mut basis, prec);
    basis
}

/// μ_k = ∫ x^k σ(x)² dx for k = 0..=k_max.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub weight: Option<WeightSpec>,
    pub moments: Vec<Float>,
    pub precision: u32,
}

impl MomentTable {
    /// A table not tied to a weight family (for example a weight on (0, 1)).
    pub fn from_values(moments: Vec<Float>) -> Self {
        let precision = moments.iter().map(|m| m.prec()).min().unwrap_or(64);
        MomentTable {
            weight: None,
            moments,
            precision,
        }
    }

    pub fn k_max(&self) -> usize {
        self.moments.len().saturating_sub(1)
    }
}

pub fn moments(spec: &WeightSpec, k_max: usize, policy: &PrecisionPolicy) -> Result<MomentTable> {
    let precision = policy.working_bits();
    let moments = rotated_moments(spec, &Angle::zero(), k_max, precision)?;
    Ok(MomentTable {
        weight: Some(spec.clone()),
        moments,
        precision,
    })
}

/// `M_k(θ) = ∫ x^k |σ(e^{iθ}x)|² dx` for k = 0..=k_max at `bits` precision.
pub(crate) fn rotated_moments(spec: &WeightSpec, theta: &Angle, k_max: usize, bits: u32) -> Result<Vec<Float>> {
    spec.check_in_sector(theta)?;
    let wp = bits + 32;
    let th = theta.abs();
    let half: Vec<Float> = match spec.family() {
        WeightFamily::GammaBeta { gamma, beta, tau } => {
            // (1/β) (2τ cos βθ)^{-(k+γ+1)/β} Γ((k+γ+1)/β)
            let beta_q = Rational::from_f64(*beta).expect("finite");
            let cos_bt = th.scale(&beta_q).to_float(wp).cos();
            if cos_bt <= 0 {
                return Err(Error::SectorViolation {
                    theta: theta.abs().to_f64(),
                    alpha: spec.sector().to_f64(),
                });
            }
            let rate = Float::with_val(wp, *tau * 2.0) * cos_bt;
            let ln_rate = Float::with_val(wp, rate.ln_ref());
            let gamma_q = Rational::from_f64(*gamma).expect("finite");
            (0..=k_max)
                .map(|k| {
                    let a_q = (Rational::from(k) + &gamma_q + 1u32) / &beta_q;
                    let a = Float::with_val(wp, &a_q);
                    let g = gamma_real(&a)?;
                    let scale = (-Float::with_val(wp, &a * &ln_rate)).exp();
                    Ok(Float::with_val(bits, g * scale / &Float::with_val(wp, &beta_q)))
                })
                .collect::<Result<_>>()?
        }
        WeightFamily::PolyExp { coeffs } => {
            // exponent 2 Σ c_j cos(jθ) x^j
            let cosines: Vec<Float> = (1..=coeffs.len())
                .map(|j| {
                    let c = th.scale(&Rational::from(j)).to_float(wp).cos();
                    Float::with_val(wp, coeffs[j - 1] * 2.0) * c
                })
                .collect();
            let digits = bits_to_digits(bits);
            let policy = PrecisionPolicy {
                target_digits: digits.saturating_sub(10).max(1),
                guard_digits: 12,
                max_digits: digits + 2000,
                escalation_factor: 2,
            };
            let width = k_max + 1;
            let values = tanh_sinh_integrate_many(
                |x| {
                    let prec = x.prec();
                    let mut e = Float::new(prec);
                    let mut xp = Float::with_val(prec, 1);
                    for c in &cosines {
                        xp *= x;
                        e += Float::with_val(prec, &xp * c);
                    }
                    let mut v = (-e).exp();
                    let mut out = Vec::with_capacity(width);
                    for _ in 0..width {
                        out.push(HpComplex::from_real(v.clone()));
                        v *= x;
                    }
                    out
                },
                width,
                Domain::HalfLine,
                &policy,
            )?;
            values.into_iter().map(|v| Float::with_val(bits, &v.value.re)).collect()
        }
    };
    Ok(match spec.domain() {
        Domain::HalfLine => half,
        Domain::FullLine => half
            .into_iter()
            .enumerate()
            .map(|(k, m)| if k % 2 == 0 { m * 2u32 } else { Float::new(bits) })
            .collect(),
    })
}

/// Orthonormal `p_0 … p_{n_max}` from a moment table via Cholesky of the
/// Hankel matrix. A pivot with fewer than `policy.guard_digits` significant
/// digits is reported as [`Error::PivotLoss`].
#[allow(clippy::needless_range_loop)]
pub fn gram_polys(table: &MomentTable, n_max: usize, policy: &PrecisionPolicy) -> Result<Vec<PolyBasis>> {
    if table.moments.len() < 2 * n_max + 1 {
        return Err(Error::Domain(format!(
            "moment table has {} entries, need {}",
            table.moments.len(),
            2 * n_max + 1
        )));
    }
    let prec = table.precision;
    let size = n_max + 1;
    let mu = &table.moments;
    let guard_bits = digits_to_bits(policy.guard_digits);
    let min_rel = Float::with_val(prec, Float::i_exp(1, guard_bits as i32 - prec as i32));

    // Lower-triangular L with H = L Lᵀ, stored row-major.
    let mut l: Vec<Vec<Float>> = (0..size).map(|i| vec![Float::new(prec); i + 1]).collect();
    for i in 0..size {
        for j in 0..=i {
            let mut s = Float::with_val(prec, &mu[i + j]);
            for k in 0..j {
                s -= Float::with_val(prec, &l[i][k] * &l[j][k]);
            }
            if i == j {
                let floor = Float::with_val(prec, &mu[2 * i] * &min_rel);
                if s <= floor {
                    return Err(Error::PivotLoss { index: i });
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / &l[j][j];
            }
        }
    }

    // C = L^{-1} by forward substitution; row i holds p_i.
    let mut c: Vec<Vec<Float>> = (0..size).map(|i| vec![Float::new(prec); i + 1]).collect();
    for i in 0..size {
        c[i][i] = Float::with_val(prec, l[i][i].recip_ref());
        for j in 0..i {
            let mut s = Float::new(prec);
            for k in j..i {
                s += Float::with_val(prec, &l[i][k] * &c[k][j]);
            }
            c[i][j] = -(s / &l[i][i]);
        }
    }

    let even_weight = match &table.weight {
        Some(w) => w.domain() == Domain::FullLine,
        None => mu.iter().skip(1).step_by(2).all(|m| m.is_zero()),
    };
    Ok(c.into_iter()
        .enumerate()
        .map(|(degree, coeffs)| PolyBasis {
            weight: table.weight.clone(),
            degree,
            coeffs,
            parity: if even_weight {
                Parity::of_degree(degree)
            } else {
                Parity::None
            },
        })
        .collect())
}

/// `max |⟨p_i, p_j⟩ - δ_ij|` with inner products contracted against the
/// moment table.
pub fn orthonormality_residual(bases: &[PolyBasis], table: &MomentTable) -> Float {
    let prec = table.precision;
    let mut worst = Float::new(prec);
    for (i, p) in bases.iter().enumerate() {
        for q in bases.iter().skip(i) {
            let mut s = Float::new(prec);
            for (r, a) in p.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (t, b) in q.coeffs.iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    s += Float::with_val(prec, a * b) * &table.moments[r + t];
                }
            }
            if p.degree == q.degree {
                s -= 1u32;
            }
            let dev = s.abs();
            if dev > worst {
                worst = dev;
            }
        }
    }
    worst
}

/// Orthonormal bases for the requested degrees at `bits` precision: closed
/// forms where available, the moment route otherwise.
pub fn bases_for(spec: &WeightSpec, degrees: &[usize], bits: u32, policy: &PrecisionPolicy) -> Result<Vec<PolyBasis>> {
    let Some(&n_max) = degrees.iter().max() else {
        return Ok(Vec::new());
    };
    match spec.classical() {
        Some(Classical::Hermite) => {
            let table = hermite_integer_table(n_max);
            Ok(degrees
                .iter()
                .map(|&n| {
                    let mut b = hermite_from_integers(&table[n], bits + 32);
                    rescale_classical(spec, Classical::Hermite, &mut b, bits);
                    b
                })
                .collect())
        }
        Some(kind) => Ok(degrees.iter().map(|&n| classical_basis(spec, kind, n, bits)).collect()),
        None => {
            let moments = rotated_moments(spec, &Angle::zero(), 2 * n_max, bits)?;
            let table = MomentTable {
                weight: Some(spec.clone()),
                moments,
                precision: bits,
            };
            let all = gram_polys(&table, n_max, policy)?;
            Ok(degrees.iter().map(|&n| all[n].clone()).collect())
        }
    }
}

fn rescale_classical(spec: &WeightSpec, kind: Classical, basis: &mut PolyBasis, prec: u32) {
    let tau = match spec.family() {
        WeightFamily::GammaBeta { tau, .. } => *tau,
        WeightFamily::PolyExp { .. } => unreachable!("classical weights are Gamma-Beta"),
    };
    let wp = prec + 32;
    if tau != 0.5 {
        let two_tau = Float::with_val(wp, tau * 2.0);
        let lambda = match kind {
            Classical::Hermite => two_tau.sqrt(),
            Classical::Laguerre => two_tau,
        };
        let mut scale = Float::with_val(wp, lambda.sqrt_ref());
        for c in basis.coeffs.iter_mut() {
            *c *= &scale;
            scale *= &lambda;
        }
    }
    for c in basis.coeffs.iter_mut() {
        c.set_prec(prec);
    }
    basis.weight = Some(spec.clone());
}
