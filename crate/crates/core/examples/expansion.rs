//! Term norms of the Hermite expansion of exp(-Ht) below, inside and above
//! the bracket for the critical time.

use specnorm::asymptotics::{expansion_terms, tz_bracket};
use specnorm::numerics::PrecisionPolicy;
use specnorm::Angle;

fn main() -> specnorm::Result<()> {
    let theta = Angle::pi_times(1, 10);
    let policy = PrecisionPolicy::with_target(15)?;
    let (lo, hi) = tz_bracket(&theta)?;
    println!("t_z in [{lo:.5}, {hi:.5}]");
    for t in [0.0, 0.5 * lo, 0.5 * (lo + hi), 2.0 * hi] {
        let report = expansion_terms(&theta, t, 120, 2, &policy)?;
        println!("t = {t:.5}  tail slope = {:+.5}  {}", report.tail_slope, report.verdict);
    }
    Ok(())
}
