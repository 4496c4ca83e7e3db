//! The numerical building blocks: Gamma at high precision, double-exponential
//! quadrature, and certified summation with cancellation tracking.

use rug::Float;
use specnorm::numerics::{certify, gamma_real, tanh_sinh_integrate_real, Domain, PrecisionPolicy, TrackedSum};

fn main() -> specnorm::Result<()> {
    let g = gamma_real(&Float::with_val(300, 0.3))?;
    println!("Gamma(0.3) = {}", g.to_string_radix(10, Some(60)));

    let policy = PrecisionPolicy::with_target(40)?;
    let q = tanh_sinh_integrate_real(
        |x| {
            let mut v = Float::with_val(x.prec(), x.square_ref());
            v = -v;
            v.exp()
        },
        Domain::FullLine,
        &policy,
    )?;
    println!("integral of exp(-x^2) = {}", q.value.to_string_radix(10, Some(45)));

    // exp(-23) from its Taylor series: about 20 digits cancel.
    let c = certify(&PrecisionPolicy::with_target(30)?, |bits| {
        let mut sum = TrackedSum::new(bits);
        let mut term = Float::with_val(bits, 1);
        for k in 1..=160u32 {
            sum.add(&term);
            term *= -23i32;
            term /= k;
        }
        Ok(sum.finish())
    })?;
    println!(
        "exp(-23) = {}  ({} digits, {:.1} digits cancelled, {} bits)",
        c.value.to_string_radix(10, Some(30)),
        c.certified_digits,
        c.cancellation_magnitude,
        c.precision_used
    );
    Ok(())
}
