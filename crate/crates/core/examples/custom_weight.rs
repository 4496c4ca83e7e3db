//! A weight without closed-form polynomials: exp(-(x + x^4)) on the
//! half-line. The orthonormal basis comes from the moment table, and the
//! moment-sum norm is checked against direct quadrature.

use specnorm::numerics::{agreement_digits, Domain, PrecisionPolicy};
use specnorm::orthopoly::{gram_polys, moments, orthonormality_residual};
use specnorm::projnorm::{projection_norm, quadrature_norm_oracle};
use specnorm::weights::{scale_constants, verify_basic_condition, WeightSpec};
use specnorm::Angle;

fn main() -> specnorm::Result<()> {
    let spec = WeightSpec::poly_exp(vec![1.0, 0.0, 0.0, 1.0], Domain::HalfLine)?;
    let policy = PrecisionPolicy::with_target(25)?;

    let table = moments(&spec, 16, &PrecisionPolicy::with_target(60)?)?;
    let polys = gram_polys(&table, 8, &policy)?;
    println!("sector half-angle: {}", spec.sector());
    println!(
        "orthonormality residual up to degree 8: {:.3e}",
        orthonormality_residual(&polys, &table).to_f64()
    );

    let theta = Angle::pi_times(1, 20);
    let sc = scale_constants(&spec, &theta, 128)?;
    let grid: Vec<f64> = (1..=200).map(|k| k as f64 * 0.05).collect();
    let check = verify_basic_condition(&spec, &theta, &grid, 128)?;
    println!(
        "s_theta = {:.6}  c_theta = {:.6}  modulus inequality holds on grid: {}",
        sc.s_theta.to_f64(),
        sc.c_theta.to_f64(),
        check.holds
    );

    for n in [0, 4, 8] {
        let r = projection_norm(&spec, n, &theta, &policy)?;
        let q = quadrature_norm_oracle(&spec, n, &theta, None, &policy)?;
        println!(
            "n = {n}  N = {:.12}  quadrature agrees to {} digits",
            r.norm.to_f64(),
            agreement_digits(&r.norm.value, &q.value, q.precision_used)
        );
    }
    Ok(())
}
