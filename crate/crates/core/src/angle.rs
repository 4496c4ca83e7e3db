//! Exact angles: rational radians or rational multiples of π.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::{Float, Integer, Rational};

use crate::numerics::pi;

/// Bits used to order angles of mixed kinds.
const COMPARE_BITS: u32 = 512;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Angle {
    Radians(Rational),
    PiTimes(Rational),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse angle {0:?}: expected radians (0.19635), a multiple of pi (0.1pi) or a fraction of pi (pi/16)")]
pub struct ParseAngleError(pub String);

impl Angle {
    pub fn zero() -> Self {
        Angle::Radians(Rational::new())
    }

    /// The exact binary value of `x` in radians.
    pub fn radians(x: f64) -> Self {
        Angle::Radians(Rational::from_f64(x).expect("finite angle"))
    }

    /// `num/den · π`.
    pub fn pi_times(num: i64, den: i64) -> Self {
        Angle::PiTimes(Rational::from((num, den)))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Angle::Radians(q) | Angle::PiTimes(q) => *q == 0,
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Angle::Radians(q) => Angle::Radians(q.clone().abs()),
            Angle::PiTimes(q) => Angle::PiTimes(q.clone().abs()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Angle::Radians(q) => Angle::Radians(-q.clone()),
            Angle::PiTimes(q) => Angle::PiTimes(-q.clone()),
        }
    }

    /// `k · self`, exact.
    pub fn scale(&self, k: &Rational) -> Self {
        match self {
            Angle::Radians(q) => Angle::Radians(Rational::from(q * k)),
            Angle::PiTimes(q) => Angle::PiTimes(Rational::from(q * k)),
        }
    }

    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            Angle::Radians(q) => Float::with_val(prec, q),
            Angle::PiTimes(q) => pi(prec + 8) * q,
        }
        .into_prec(prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(53).to_f64()
    }

    /// The angle in units of π.
    pub fn pi_units_f64(&self) -> f64 {
        match self {
            Angle::PiTimes(q) => Float::with_val(53, q).to_f64(),
            Angle::Radians(q) => (Float::with_val(COMPARE_BITS, q) / pi(COMPARE_BITS)).to_f64(),
        }
    }

    /// Exact decimal (or fraction) text of the angle in units of π, when it
    /// was given that way.
    pub fn pi_units_text(&self) -> Option<String> {
        match self {
            Angle::PiTimes(q) => Some(rational_to_decimal(q)),
            Angle::Radians(q) if *q == 0 => Some("0".into()),
            Angle::Radians(_) => None,
        }
    }

    /// Exact ordering where both angles are of the same kind; otherwise a
    /// high-precision comparison (a nonzero rational and a nonzero rational
    /// multiple of π are never equal).
    pub fn cmp_value(&self, other: &Angle) -> Ordering {
        match (self, other) {
            (Angle::Radians(a), Angle::Radians(b)) | (Angle::PiTimes(a), Angle::PiTimes(b)) => a.cmp(b),
            _ => {
                let a = self.to_float(COMPARE_BITS);
                let b = other.to_float(COMPARE_BITS);
                a.partial_cmp(&b).unwrap_or(Ordering::Equal)
            }
        }
    }
}

trait IntoPrec {
    fn into_prec(self, prec: u32) -> Float;
}

impl IntoPrec for Float {
    fn into_prec(mut self, prec: u32) -> Float {
        self.set_prec(prec);
        self
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Radians(q) => write!(f, "{}", rational_to_decimal(q)),
            Angle::PiTimes(q) => write!(f, "{}pi", rational_to_decimal(q)),
        }
    }
}

/// Terminating decimals print exactly; anything else as `num/den`.
fn rational_to_decimal(q: &Rational) -> String {
    let mut den = q.denom().clone();
    let twos = den.find_one(0).unwrap_or(0);
    den >>= twos;
    let mut fives = 0u32;
    while den.is_divisible_u(5) {
        den /= 5u32;
        fives += 1;
    }
    if den != 1 {
        return format!("{}/{}", q.numer(), q.denom());
    }
    let places = twos.max(fives);
    let scaled = Rational::from(q * Integer::from(Integer::u_pow_u(10, places)));
    let digits = scaled.numer().clone();
    let negative = digits < 0;
    let mut s = digits.abs().to_string();
    if places > 0 {
        let places = places as usize;
        if s.len() <= places {
            s = format!("{}{}", "0".repeat(places - s.len() + 1), s);
        }
        s.insert(s.len() - places, '.');
    }
    if negative {
        s.insert(0, '-');
    }
    s
}

/// Parse a decimal literal such as `-0.025`, `3`, `1e-2` or `1/3` exactly.
fn parse_number(text: &str) -> Option<Rational> {
    if text.is_empty() {
        return None;
    }
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_number(n)?;
        let d = parse_number(d)?;
        if d == 0 {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: Integer = format!("{int_part}{frac_part}0").parse::<Integer>().ok()? / 10u32;
    let mut value = Rational::from((digits, Integer::from(Integer::u_pow_u(10, frac_part.len() as u32))));
    let scale = Rational::from(Integer::from(Integer::u_pow_u(10, exponent.unsigned_abs())));
    if exponent >= 0 {
        value *= scale;
    } else {
        value /= scale;
    }
    if negative {
        value = -value;
    }
    Some(value)
}

impl FromStr for Angle {
    type Err = ParseAngleError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || ParseAngleError(text.to_string());
        let cleaned: String = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase()
            .replace('π', "pi");
        if cleaned.is_empty() {
            return Err(err());
        }
        match cleaned.find("pi") {
            None => parse_number(&cleaned).map(Angle::Radians).ok_or_else(err),
            Some(at) => {
                let prefix = cleaned[..at].trim_end_matches('*');
                let suffix = &cleaned[at + 2..];
                let coefficient = match prefix {
                    "" | "+" => Rational::from(1),
                    "-" => Rational::from(-1),
                    p => parse_number(p).ok_or_else(err)?,
                };
                let divisor = match suffix {
                    "" => Rational::from(1),
                    s => {
                        let d = parse_number(s.strip_prefix('/').ok_or_else(err)?).ok_or_else(err)?;
                        if d == 0 {
                            return Err(err());
                        }
                        d
                    }
                };
                Ok(Angle::PiTimes(coefficient / divisor))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pi_multiples() {
        assert_eq!("0.1pi".parse::<Angle>().unwrap(), Angle::pi_times(1, 10));
        assert_eq!("pi/16".parse::<Angle>().unwrap(), Angle::pi_times(1, 16));
        assert_eq!("3*pi/16".parse::<Angle>().unwrap(), Angle::pi_times(3, 16));
        assert_eq!("-0.025 pi".parse::<Angle>().unwrap(), Angle::pi_times(-1, 40));
        assert_eq!("π/4".parse::<Angle>().unwrap(), Angle::pi_times(1, 4));
        assert_eq!("pi".parse::<Angle>().unwrap(), Angle::pi_times(1, 1));
    }

    #[test]
    fn parses_radians() {
        assert_eq!(
            "0.19635".parse::<Angle>().unwrap(),
            Angle::Radians(Rational::from((19635, 100_000)))
        );
        assert_eq!(
            "1e-2".parse::<Angle>().unwrap(),
            Angle::Radians(Rational::from((1, 100)))
        );
        assert_eq!("1/3".parse::<Angle>().unwrap(), Angle::Radians(Rational::from((1, 3))));
        assert!(("0.19635".parse::<Angle>().unwrap().to_f64() - std::f64::consts::PI / 16.0).abs() < 1e-5);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "0.1pix", "pi/0", "1..2", "pi/", "e5"] {
            assert!(bad.parse::<Angle>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_roundtrip() {
        for s in ["0.1pi", "0.025pi", "1/3pi", "0.19635", "-2.5"] {
            let a: Angle = s.parse().unwrap();
            assert_eq!(a.to_string().parse::<Angle>().unwrap(), a);
        }
        assert_eq!(Angle::pi_times(1, 10).to_string(), "0.1pi");
        assert_eq!(Angle::pi_times(0, 1).to_string(), "0pi");
        assert_eq!(Angle::pi_times(1, 10).pi_units_f64(), 0.1);
    }

    #[test]
    fn ordering_across_kinds() {
        let quarter = Angle::pi_times(1, 4);
        assert_eq!(Angle::radians(0.78).cmp_value(&quarter), Ordering::Less);
        assert_eq!(Angle::radians(0.79).cmp_value(&quarter), Ordering::Greater);
        assert_eq!(Angle::pi_times(1, 8).cmp_value(&quarter), Ordering::Less);
    }
}
