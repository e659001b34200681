//! Full analysis of the bundled carbon-fiber strength data: single and
//! common-shape Weibull fits of the 20 mm and 10 mm samples, then classical
//! and Bayesian inference for the censored joint sample drawn from them.
//!
//! cargo run --release --example carbon_fiber_analysis [seed]

use jpc_weibull::analysis::{analyze_complete_pair, analyze_jpc, AnalysisOptions, BayesSummary};
use jpc_weibull::data::{fiber_10mm, fiber_20mm, fiber_jpc, FIBER_SHIFT};
use jpc_weibull::mle::IntervalEstimate;
use jpc_weibull::rng::RngStream;

fn show(label: &str, iv: &[IntervalEstimate; 3]) {
    let s: Vec<String> = iv.iter().map(|i| format!("({:.4}, {:.4})", i.lower, i.upper)).collect();
    println!("  {label:22} {}", s.join("  "));
}

fn bayes(label: &str, b: &BayesSummary) {
    let m = b.means;
    println!(
        "  {label:22} alpha {:.4}  lambda1 {:.4}  lambda2 {:.4}  (ESS {:.0}{})",
        m.alpha,
        m.lambda1,
        m.lambda2,
        b.ess,
        if b.low_ess { ", low" } else { "" }
    );
    show("  HPD", &b.hpd);
}

fn main() -> jpc_weibull::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let mut rng = RngStream::new(seed);
    let opts = AnalysisOptions::default();

    let pair = analyze_complete_pair(&fiber_20mm(), &fiber_10mm(), FIBER_SHIFT, &opts, &mut rng)?;
    println!("complete samples, shifted by {}", pair.shift);
    for (name, s) in ["20 mm", "10 mm"].iter().zip(&pair.samples) {
        println!(
            "  {name}: n {}  alpha {:.3}  lambda {:.4}  K-S {:.3}  p {:.3}",
            s.n, s.fit.alpha, s.fit.lambda, s.ks, s.ks_p_value
        );
        if let Some(b) = &s.bayes {
            println!(
                "         Bayes alpha {:.3}  lambda {:.4}  E[K-S] {:.3}  p_b {:.3}",
                b.alpha, b.lambda, b.check.expected_discrepancy, b.check.p_value
            );
        }
    }
    let c = pair.common;
    println!(
        "  common shape: alpha {:.3}  lambda1 {:.4}  lambda2 {:.4}  LR p {:.3}  K-S p ({:.3}, {:.3})",
        c.alpha, c.lambda1, c.lambda2, pair.lr.p_value, pair.common_ks_p_value[0], pair.common_ks_p_value[1]
    );
    if let Some(b) = &pair.common_bayes {
        println!(
            "  common Bayes: alpha {:.3}  lambda1 {:.4}  lambda2 {:.4}  E[K-S] ({:.3}, {:.3})  p_b ({:.3}, {:.3})  ESS {:.0}",
            b.means.alpha,
            b.means.lambda1,
            b.means.lambda2,
            b.checks[0].expected_discrepancy,
            b.checks[1].expected_discrepancy,
            b.checks[0].p_value,
            b.checks[1].p_value,
            b.ess
        );
    }

    let sample = fiber_jpc()?;
    let r = analyze_jpc(&sample, &opts, &mut rng)?;
    println!("\ncensored joint sample: k1 {}  k2 {}", r.k1, r.k2);
    let p = r.mle.params;
    println!("  MLE                    alpha {:.4}  lambda1 {:.4}  lambda2 {:.4}", p.alpha, p.lambda1, p.lambda2);
    if let Some(iv) = &r.asymptotic {
        show("asymptotic CI", iv);
    }
    if let Some(iv) = &r.bootstrap {
        show("bootstrap CI", iv);
    }
    if let Some(b) = &r.bayes {
        bayes("Bayes", b);
    }
    if let Some(c) = &r.check {
        println!("  spacings check        E[K-S] {:.3}  p_b {:.3}", c.expected_discrepancy, c.p_value);
    }
    let p = r.mle_ordered.params;
    println!(
        "  ordered MLE            alpha {:.4}  lambda1 {:.4}  lambda2 {:.4}{}",
        p.alpha,
        p.lambda1,
        p.lambda2,
        if r.mle_ordered.boundary { " (on lambda1 = lambda2)" } else { "" }
    );
    if let Some(iv) = &r.bootstrap_ordered {
        show("ordered bootstrap CI", iv);
    }
    if let Some(b) = &r.bayes_ordered {
        bayes("ordered Bayes", b);
    }
    Ok(())
}
