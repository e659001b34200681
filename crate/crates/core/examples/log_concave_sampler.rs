//! The adaptive rejection sampler on its own: a gamma density, and a density
//! with a kink where log-concavity fails, handled through a breakpoint.
//!
//! cargo run --release --example log_concave_sampler

use jpc_weibull::bayes::{PriorSpec, ShapeHyper, ShapeMarginal};
use jpc_weibull::data::fiber_jpc;
use jpc_weibull::logconcave::{FnTarget, LogConcaveSampler};
use jpc_weibull::rng::RngStream;

fn summary(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

fn main() -> jpc_weibull::Result<()> {
    let mut rng = RngStream::new(17);
    let n = 50_000;

    let (shape, rate) = (3.5, 2.0);
    let gamma = FnTarget::new(
        move |x: f64| (shape - 1.0) * x.ln() - rate * x,
        move |x: f64| (shape - 1.0) / x - rate,
    );
    let mut sampler = LogConcaveSampler::new(&gamma, 0.0)?;
    let xs = (0..n).map(|_| sampler.sample(&mut rng)).collect::<jpc_weibull::Result<Vec<_>>>()?;
    let (m, v) = summary(&xs);
    println!("GA(3.5, 2): mean {m:.4} (exact 1.75)  variance {v:.4} (exact 0.875)");
    println!("  acceptance {:.3} with {} tangents", sampler.acceptance_rate(), sampler.tangent_count());

    // log f(x) = -|x - 2| is log-concave; -x + max(0, 2(x - 2)) is not, the
    // kink at 2 is convex. Both sides are linear so a breakpoint suffices.
    let kinked = FnTarget::new(
        |x: f64| -x + (2.0 * (x - 2.0)).max(0.0) - 0.5 * x * x,
        |x: f64| -1.0 + if x > 2.0 { 2.0 } else { 0.0 } - x,
    )
    .with_breakpoints(vec![2.0]);
    let mut sampler = LogConcaveSampler::new(&kinked, 0.0)?;
    let xs = (0..n).map(|_| sampler.sample(&mut rng)).collect::<jpc_weibull::Result<Vec<_>>>()?;
    let (m, _) = summary(&xs);
    println!("kinked density on (0, inf): mean {m:.4}, segment modes {:?}", sampler.segment_modes());

    // the shape marginal of the fiber sample has exactly this kind of kink
    let sample = fiber_jpc()?;
    let prior = PriorSpec {
        shape: ShapeHyper { a: 0.0, b: 4.0 },
        ..PriorSpec::non_informative(false)
    };
    let marginal = ShapeMarginal::new(&sample, &prior)?;
    println!("fiber shape marginal: U = V at alpha in {:?}", marginal.crossings());
    let mut sampler = LogConcaveSampler::new(&marginal, 0.0)?;
    let xs = (0..n).map(|_| sampler.sample(&mut rng)).collect::<jpc_weibull::Result<Vec<_>>>()?;
    let (m, v) = summary(&xs);
    println!("  draws: mean {m:.4}  sd {:.4}  acceptance {:.3}", v.sqrt(), sampler.acceptance_rate());
    Ok(())
}
