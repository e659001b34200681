//! Point and interval study for one censoring scheme, printed as CSV.
//!
//! cargo run --release --example monte_carlo_study [replications] [seed]
//!
//! Group sizes m = 20, n = 22, k = 20 failures with R = (7, 0 x 18, 15) and
//! truth (alpha, lambda1, lambda2) = (1, 0.5, 1).

use std::time::Instant;

use jpc_weibull::jpc::{CensoringScheme, JointParams};
use jpc_weibull::study::{run_interval_study, run_point_study, Method, StudyConfig};

fn main() -> jpc_weibull::Result<()> {
    let mut args = std::env::args().skip(1);
    let reps: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(500);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2024);

    let mut removals = vec![0; 20];
    removals[0] = 7;
    removals[19] = 15;
    let scheme = CensoringScheme::new(20, 22, removals)?;
    let truth = JointParams::new(1.0, 0.5, 1.0)?;

    let mut config = StudyConfig::new(
        scheme,
        truth,
        reps,
        vec![Method::Mle, Method::BayesIp, Method::BayesNip],
    );
    config.base_seed = seed;

    let clock = Instant::now();
    let point = run_point_study(&config)?;
    eprintln!("point study: {reps} replications, {} skipped, {:.1?}", point.skipped, clock.elapsed());
    point.write_csv(std::io::stdout())?;

    config.methods = vec![Method::Mle, Method::Bootstrap, Method::BayesIp];
    let clock = Instant::now();
    let interval = run_interval_study(&config)?;
    eprintln!("interval study: {reps} replications, {} skipped, {:.1?}", interval.skipped, clock.elapsed());
    interval.write_csv(std::io::stdout())?;
    Ok(())
}
