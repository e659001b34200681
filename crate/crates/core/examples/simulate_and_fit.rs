//! Simulate a joint progressively censored sample, write it to disk, read it
//! back and fit the common-shape Weibull model by maximum likelihood.
//!
//! cargo run --release --example simulate_and_fit [seed]

use jpc_weibull::io::{parse_jpc_file, write_jpc_file};
use jpc_weibull::jpc::{simulate_jpc, u_stat, v_stat, CensoringScheme, JointParams};
use jpc_weibull::mle::{asymptotic_ci, fit_mle, profile_loglik};
use jpc_weibull::rng::RngStream;

fn main() -> jpc_weibull::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(11);
    let mut rng = RngStream::new(seed);

    // 20 and 22 units on test, 20 failures, withdrawals at the first and last
    let mut removals = vec![0; 20];
    removals[0] = 7;
    removals[19] = 15;
    let scheme = CensoringScheme::new(20, 22, removals)?;
    let truth = JointParams::new(2.0, 0.5, 1.0)?;
    let sample = simulate_jpc(&scheme, &truth, &mut rng)?;
    println!("simulated {} failures: {} from group 1, {} from group 2", sample.k(), sample.k1(), sample.k2());

    let path = std::env::temp_dir().join(format!("jpc_sample_{seed}.txt"));
    write_jpc_file(&path, &sample)?;
    let back = parse_jpc_file(&path)?;
    assert_eq!(back, sample);
    println!("round trip through {} ok", path.display());

    let fit = fit_mle(&back)?;
    let p = fit.params;
    println!("MLE alpha {:.4}  lambda1 {:.4}  lambda2 {:.4}  (truth 2, 0.5, 1)", p.alpha, p.lambda1, p.lambda2);
    println!("log-likelihood {:.4}, {} iterations", fit.loglik, fit.iterations);
    for (name, iv) in ["alpha", "lambda1", "lambda2"].iter().zip(asymptotic_ci(&back, &fit, 0.95)?) {
        println!("  95% CI {name:8} ({:.4}, {:.4})", iv.lower, iv.upper);
    }

    println!("profile log-likelihood and power sums around the maximum:");
    for a in [0.5, 1.0, 1.5, p.alpha, 2.5, 3.0] {
        println!(
            "  alpha {a:6.3}  p1 {:9.4}  U {:9.4}  V {:9.4}",
            profile_loglik(&back, a)?,
            u_stat(&back, a),
            v_stat(&back, a)
        );
    }
    std::fs::remove_file(path)?;
    Ok(())
}
