//! σ_100(θ) = √(N_100 / N_98) for the Hermite weight, with the analytic
//! columns alongside.

use specnorm::asymptotics::{semiclassical_mu, sigma_ratio};
use specnorm::numerics::PrecisionPolicy;
use specnorm::weights::WeightSpec;
use specnorm::Angle;

fn main() -> specnorm::Result<()> {
    let spec = WeightSpec::hermite();
    let policy = PrecisionPolicy::with_target(20)?;
    println!(
        "{:>8} {:>8} {:>10} {:>10} {:>10}",
        "theta/pi", "sec2t", "sigma_100", "4sec2t", "mu"
    );
    for k in [0, 1, 2, 4, 6, 8] {
        let theta = Angle::pi_times(k, 40);
        let sec = 1.0 / (2.0 * theta.to_f64()).cos();
        let sigma = sigma_ratio(&spec, 100, &theta, &policy)?;
        let mu = semiclassical_mu(&theta, 64)?;
        println!(
            "{:>8.3} {:>8.3} {:>10.4} {:>10.3} {:>10.3}",
            theta.pi_units_f64(),
            sec,
            sigma.to_f64(),
            4.0 * sec,
            mu.to_f64()
        );
    }
    Ok(())
}
