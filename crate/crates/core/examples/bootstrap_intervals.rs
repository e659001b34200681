//! Asymptotic and parametric bootstrap intervals side by side for the
//! censored fiber sample, at several bootstrap sizes.
//!
//! cargo run --release --example bootstrap_intervals [seed]

use jpc_weibull::data::fiber_jpc;
use jpc_weibull::mle::{asymptotic_ci, bootstrap_ci, fit_mle, IntervalEstimate};
use jpc_weibull::rng::RngStream;

fn row(label: &str, iv: &[IntervalEstimate; 3]) {
    let cells: Vec<String> = iv.iter().map(|i| format!("({:.4}, {:.4})", i.lower, i.upper)).collect();
    println!("{label:18} {}", cells.join("  "));
}

fn main() -> jpc_weibull::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let sample = fiber_jpc()?;
    let fit = fit_mle(&sample)?;
    println!("{:18} {:18}  {:18}  {:18}", "90% interval", "alpha", "lambda1", "lambda2");
    row("asymptotic", &asymptotic_ci(&sample, &fit, 0.9)?);
    let rng = RngStream::new(seed);
    for b in [200, 500, 2000] {
        let res = bootstrap_ci(&sample, 0.9, b, false, &rng)?;
        row(&format!("bootstrap B={b}"), &res.intervals);
        if res.skipped > 0 {
            println!("{:18} {} resamples skipped", "", res.skipped);
        }
    }
    let ordered = bootstrap_ci(&sample, 0.9, 500, true, &rng)?;
    row("ordered B=500", &ordered.intervals);
    Ok(())
}
