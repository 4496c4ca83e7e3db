//! Per-index growth of the Hermite projection norms at θ = π/16 and the
//! fitted exponent.

use specnorm::asymptotics::growth_report;
use specnorm::numerics::PrecisionPolicy;
use specnorm::weights::WeightSpec;
use specnorm::Angle;

fn main() -> specnorm::Result<()> {
    let theta = Angle::pi_times(1, 16);
    let report = growth_report(
        &WeightSpec::hermite(),
        &theta,
        300,
        2,
        &PrecisionPolicy::with_target(20)?,
    )?;
    for e in report.entries.iter().step_by(25) {
        println!(
            "n = {:>3}  log N / n = {:.5}  sigma = {}",
            e.result.n,
            e.per_index.unwrap_or(0.0),
            e.sigma
                .as_ref()
                .map_or("-".to_string(), |s| format!("{:.5}", s.to_f64()))
        );
    }
    println!("lower exponent  {:.5}", report.s_lower);
    println!("upper exponent  {:.5}", report.s_upper.unwrap_or(f64::NAN));
    println!("fitted exponent {:.5}", report.s_estimate.unwrap_or(f64::NAN));
    Ok(())
}
