//! Lower and upper bounds around the computed norms for the Hermite and
//! Laguerre weights.

use specnorm::numerics::PrecisionPolicy;
use specnorm::projnorm::projection_norms;
use specnorm::weights::WeightSpec;
use specnorm::Angle;

fn main() -> specnorm::Result<()> {
    let policy = PrecisionPolicy::with_target(20)?;
    let cases = [
        (WeightSpec::hermite(), Angle::pi_times(3, 20), vec![0, 10, 50, 100, 200]),
        (WeightSpec::laguerre(), Angle::radians(1.0), vec![0, 10, 50, 100]),
    ];
    for (spec, theta, degrees) in cases {
        println!("{} at theta = {theta}", spec.label());
        for r in projection_norms(&spec, &degrees, &theta, &policy)? {
            println!(
                "  n = {:>3}  {:.6e} <= {:.6e} <= {}   ok = {}",
                r.n,
                r.lower.to_f64(),
                r.norm.to_f64(),
                r.upper.as_ref().map_or("-".into(), |u| format!("{:.6e}", u.to_f64())),
                r.sandwich_ok()
            );
        }
    }
    Ok(())
}
