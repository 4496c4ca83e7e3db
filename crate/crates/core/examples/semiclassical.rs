//! The semiclassical growth factor exp(tan 2θ), the Gaussian-ratio
//! heuristic at the same parameters, and the computed norm.

use specnorm::asymptotics::{semiclassical_comparison, SemiclassicalParams};
use specnorm::numerics::PrecisionPolicy;
use specnorm::Angle;

fn main() -> specnorm::Result<()> {
    let policy = PrecisionPolicy::with_target(15)?;
    let theta = Angle::pi_times(1, 10);
    let p = SemiclassicalParams::new(&theta, 100, 128)?;
    println!(
        "eta = {:.6}  lambda = {:.6} + {:.6}i",
        p.eta.to_f64(),
        p.lambda.re.to_f64(),
        p.lambda.im.to_f64()
    );
    println!("{:>4} {:>12} {:>14} {:>10}", "n", "n tan 2t", "log gaussian", "log N");
    for n in [20, 60, 100, 140] {
        let c = semiclassical_comparison(&theta, n, Some(&policy))?;
        println!(
            "{:>4} {:>12.4} {:>14.4} {:>10.4}",
            n,
            c.n_tan_2theta,
            c.log_gaussian_ratio,
            c.log_norm.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
