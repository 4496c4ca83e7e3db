//! Gamma function for positive real arguments at arbitrary precision.
//!
//! Integer and half-integer arguments are exact factorial expressions
//! (`Γ(n) = (n-1)!`, `Γ(n+1/2) = (2n)! √π / (4^n n!)`). Everything else is
//! shifted upward past a threshold that grows linearly with the requested
//! digits and evaluated from the Stirling series for `ln Γ`, whose truncation
//! error for real `y > 0` is bounded by the first omitted term.

use std::sync::Mutex;

use rug::{Float, Integer, Rational};

use super::{bits_to_digits, pi};
use crate::error::{Error, Result};

/// Beyond this, exact factorials stop being the cheap option.
const EXACT_FACTORIAL_LIMIT: u32 = 1 << 16;

/// Γ(x) at the precision of `x`.
pub fn gamma_real(x: &Float) -> Result<Float> {
    if x.is_nan() || *x <= 0 {
        return Err(Error::Domain(format!("gamma_real needs x > 0, got {}", x.to_f64())));
    }
    let prec = x.prec();
    let twice = Float::with_val(prec, x * 2u32);
    if twice.is_integer() && twice <= EXACT_FACTORIAL_LIMIT {
        let two_x = twice.to_u32_saturating().expect("bounded above");
        return Ok(gamma_half_integer(two_x, prec));
    }
    Ok(gamma_stirling(x, prec))
}

/// Γ(k/2) for a positive integer `k`.
fn gamma_half_integer(k: u32, prec: u32) -> Float {
    if k.is_multiple_of(2) {
        let n = k / 2;
        Float::with_val(prec, &Integer::from(Integer::factorial(n - 1)))
    } else {
        // Γ(n + 1/2) = (2n)! √π / (4^n n!)
        let n = (k - 1) / 2;
        let num = Integer::from(Integer::factorial(2 * n));
        let den = Integer::from(Integer::factorial(n)) << (2 * n);
        let ratio = Rational::from((num, den));
        let wp = prec + 16;
        let root_pi = pi(wp).sqrt();
        Float::with_val(prec, root_pi * &ratio)
    }
}

fn gamma_stirling(x: &Float, prec: u32) -> Float {
    let digits = bits_to_digits(prec) + 1;
    let threshold = f64::from(digits) + 10.0;
    // ln Γ(y) ~ y ln y; its absolute error becomes the relative error of Γ.
    let magnitude_bits = (threshold * threshold.ln()).log2().ceil().max(0.0) as u32;
    let wp = prec + 32 + magnitude_bits;

    let mut y = Float::with_val(wp, x);
    let mut shift_product = Float::with_val(wp, 1);
    while y < threshold {
        shift_product *= &y;
        y += 1u32;
    }

    let ln_gamma = ln_gamma_stirling(&y, wp);
    let mut out = ln_gamma.exp();
    out /= &shift_product;
    Float::with_val(prec, out)
}

/// Stirling series for ln Γ(y), valid once `y` is past the threshold.
fn ln_gamma_stirling(y: &Float, wp: u32) -> Float {
    let ln_y = Float::with_val(wp, y.ln_ref());
    let mut acc = Float::with_val(wp, y - 0.5f64);
    acc *= &ln_y;
    acc -= y;
    let two_pi = pi(wp) * 2u32;
    acc += two_pi.ln() / 2u32;

    let tolerance = Float::with_val(wp, Float::i_exp(1, -(wp as i32)));
    let y_sq = Float::with_val(wp, y.square_ref());
    let mut y_pow = Float::with_val(wp, y); // y^{2k-1}
    let mut k = 1u32;
    loop {
        let b = bernoulli_even(k);
        let coeff = b / (2 * k * (2 * k - 1));
        let mut term = Float::with_val(wp, &coeff);
        term /= &y_pow;
        // |term| bounds the error of the series truncated before it.
        if *term.as_abs() < tolerance {
            break;
        }
        acc += &term;
        y_pow *= &y_sq;
        k += 1;
        assert!(k < 20 * wp, "Stirling series failed to reach its tolerance");
    }
    acc
}

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// B_{2k}, cached across calls.
fn bernoulli_even(k: u32) -> Rational {
    let mut table = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if table.is_empty() {
        table.push(Rational::from(1)); // B_0
    }
    // table[j] = B_{2j}; B_m = -(1/(m+1)) sum_{j<m} C(m+1, j) B_j with B_1 = -1/2.
    while table.len() <= k as usize {
        let m = 2 * table.len() as u32;
        let mut s = Rational::from((Integer::from(m + 1), -2)); // C(m+1, 1) B_1
        for (j, b) in table.iter().enumerate() {
            let c = Integer::from(Integer::binomial_u(m + 1, 2 * j as u32));
            s += b.clone() * &c;
        }
        s /= -(i64::from(m) + 1);
        table.push(s);
    }
    table[k as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::agreement_digits;

    #[test]
    fn bernoulli_numbers() {
        assert_eq!(bernoulli_even(1), Rational::from((1, 6)));
        assert_eq!(bernoulli_even(2), Rational::from((-1, 30)));
        assert_eq!(bernoulli_even(3), Rational::from((1, 42)));
        assert_eq!(bernoulli_even(6), Rational::from((691, -2730)));
    }

    #[test]
    fn half_integer_base_cases() {
        let prec = 256;
        let root_pi = pi(prec).sqrt();
        assert_eq!(gamma_real(&Float::with_val(prec, 0.5)).unwrap(), root_pi);
        let g = gamma_real(&Float::with_val(prec, 2.5)).unwrap();
        let expect = Float::with_val(prec, &root_pi * 3u32) / 4u32;
        assert!(agreement_digits(&g, &expect, prec) >= 75);
        assert_eq!(gamma_real(&Float::with_val(prec, 1)).unwrap(), 1);
        assert_eq!(gamma_real(&Float::with_val(prec, 6)).unwrap(), 120);
    }

    #[test]
    fn non_positive_is_domain_error() {
        assert!(gamma_real(&Float::with_val(64, 0)).is_err());
        assert!(gamma_real(&Float::with_val(64, -1.5)).is_err());
    }

    #[test]
    fn stirling_path_matches_mpfr() {
        for &(num, den) in &[(7i32, 3i32), (1, 3), (1, 10), (97, 7), (250, 3)] {
            for prec in [64u32, 300, 1200] {
                let x = Float::with_val(prec, Rational::from((num, den)));
                let g = gamma_real(&x).unwrap();
                let reference = Float::with_val(prec, x.gamma_ref());
                assert!(
                    agreement_digits(&g, &reference, prec) + 1 >= bits_to_digits(prec),
                    "x = {num}/{den} at {prec} bits"
                );
            }
        }
    }

    #[test]
    fn deterministic() {
        let x = Float::with_val(500, Rational::from((7, 3)));
        assert_eq!(gamma_real(&x).unwrap(), gamma_real(&x).unwrap());
    }
}
