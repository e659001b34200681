//! Bayes estimates and 90% HPD intervals for the censored fiber sample,
//! with and without the order restriction lambda1 < lambda2.
//!
//! cargo run --release --example bayes_importance_sampling [draws] [seed]

use jpc_weibull::bayes::{draw_posterior, PriorSpec, ShapeHyper};
use jpc_weibull::data::fiber_jpc;
use jpc_weibull::rng::RngStream;

fn main() -> jpc_weibull::Result<()> {
    let mut args = std::env::args().skip(1);
    let draws: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);

    let sample = fiber_jpc()?;
    for ordered in [false, true] {
        // zero rate hyperparameters, GA(0, 4) on the shape
        let prior = PriorSpec {
            shape: ShapeHyper { a: 0.0, b: 4.0 },
            ..PriorSpec::non_informative(ordered)
        };
        let post = draw_posterior(&sample, &prior, draws, &mut RngStream::new(seed))?;
        let mean = post.means()?;
        let hpd = post.hpd(0.9)?;
        println!(
            "{} posterior, {draws} draws (ESS {:.0}, envelope acceptance {:.3})",
            if ordered { "order-restricted" } else { "unrestricted" },
            post.ess(),
            post.acceptance_rate.unwrap_or(f64::NAN)
        );
        for (name, m, iv) in [
            ("alpha", mean.alpha, hpd[0]),
            ("lambda1", mean.lambda1, hpd[1]),
            ("lambda2", mean.lambda2, hpd[2]),
        ] {
            println!("  {name:8} mean {m:9.5}   HPD ({:.5}, {:.5})", iv.lower, iv.upper);
        }
        if post.low_ess_warning() {
            println!("  warning: effective sample size below 1% of the draws");
        }
    }
    Ok(())
}
