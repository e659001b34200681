#![allow(dead_code)]

use jpc_weibull::bayes::{PriorSpec, ShapeHyper};
use jpc_weibull::jpc::{u_stat, v_stat, CensoringScheme, JpcObservation, JpcSample};
use jpc_weibull::rng::BetaGammaHyper;
use statrs::distribution::{Continuous, ContinuousCDF, Gamma};
use statrs::function::gamma::ln_gamma;

pub fn ob(t: f64, g: bool, s: usize) -> JpcObservation {
    JpcObservation {
        t,
        from_group1: g,
        withdrawn_group1: s,
    }
}

/// m = n = 3, k = 4, R = (1, 0, 0, 1); U and V cross once.
pub fn tiny() -> JpcSample {
    let scheme = CensoringScheme::new(3, 3, vec![1, 0, 0, 1]).unwrap();
    JpcSample::new(
        scheme,
        vec![ob(0.4, true, 0), ob(0.7, false, 0), ob(1.1, true, 0), ob(1.6, false, 1)],
    )
    .unwrap()
}

pub fn proper_prior(ordered: bool) -> PriorSpec {
    PriorSpec::new(
        BetaGammaHyper::new(2.0, 1.0, 1.5, 2.0),
        ShapeHyper { a: 2.0, b: 1.0 },
        ordered,
    )
    .unwrap()
}

pub fn ln_bg(l1: f64, l2: f64, h: &BetaGammaHyper) -> f64 {
    ln_gamma(h.a1 + h.a2) - ln_gamma(h.a0) - ln_gamma(h.a1) - ln_gamma(h.a2) + h.a0 * h.b0.ln()
        + (h.a0 - h.a1 - h.a2) * (l1 + l2).ln()
        + (h.a1 - 1.0) * l1.ln()
        + (h.a2 - 1.0) * l2.ln()
        - h.b0 * (l1 + l2)
}

/// Log prior density of the rates; the ordered prior is the BG density
/// folded onto `l1 <= l2`.
pub fn ln_rate_prior(prior: &PriorSpec, l1: f64, l2: f64) -> f64 {
    if !prior.ordered {
        return ln_bg(l1, l2, &prior.bg);
    }
    if l1 > l2 {
        return f64::NEG_INFINITY;
    }
    let x = ln_bg(l1, l2, &prior.bg);
    let y = ln_bg(l2, l1, &prior.bg);
    let both = x.max(y) + (-(x - y).abs()).exp().ln_1p();
    // grid points on the diagonal carry half the cell
    if l1 == l2 {
        both + 0.5f64.ln()
    } else {
        both
    }
}

/// Unnormalized log joint posterior straight from prior times likelihood,
/// given `U(a)` and `V(a)`.
pub fn ln_joint_uv(sample: &JpcSample, prior: &PriorSpec, a: f64, u: f64, v: f64, l1: f64, l2: f64) -> f64 {
    let k = sample.k() as f64;
    let lik = k * a.ln() + sample.k1() as f64 * l1.ln() + sample.k2() as f64 * l2.ln()
        + (a - 1.0) * sample.sum_log_t()
        - l1 * u
        - l2 * v;
    let shape_prior = (prior.shape.a - 1.0) * a.ln() - prior.shape.b * a;
    lik + shape_prior + ln_rate_prior(prior, l1, l2)
}

pub fn ln_joint(sample: &JpcSample, prior: &PriorSpec, a: f64, l1: f64, l2: f64) -> f64 {
    ln_joint_uv(sample, prior, a, u_stat(sample, a), v_stat(sample, a), l1, l2)
}

/// Posterior means of (alpha, l1, l2) by brute-force quadrature on a
/// log-spaced 3-D grid, accumulated with a running log-sum-exp.
pub fn quadrature_means(sample: &JpcSample, prior: &PriorSpec) -> [f64; 3] {
    let grid = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    };
    let (la, ll) = (grid(-6.0, 3.5, 500), grid(-12.0, 4.0, 600));
    let (k, k1, k2) = (sample.k() as f64, sample.k1() as f64, sample.k2() as f64);
    // rate cells: (l1, l2, terms free of alpha including the log-transform Jacobian)
    let cells: Vec<(f64, f64, f64)> = ll
        .iter()
        .flat_map(|&y| ll.iter().map(move |&z| (y, z)))
        .map(|(y, z)| {
            let (l1, l2) = (y.exp(), z.exp());
            (l1, l2, ln_rate_prior(prior, l1, l2) + k1 * y + k2 * z + y + z)
        })
        .filter(|c| c.2 > f64::NEG_INFINITY)
        .collect();
    let mut max = f64::NEG_INFINITY;
    let mut acc = [0.0f64; 4];
    for &x in &la {
        let a = x.exp();
        let (u, v) = (u_stat(sample, a), v_stat(sample, a));
        let base = k * x + (a - 1.0) * sample.sum_log_t() + (prior.shape.a - 1.0) * x - prior.shape.b * a + x;
        for &(l1, l2, rest) in &cells {
            let lv = base + rest - l1 * u - l2 * v;
            if lv > max {
                let r = (max - lv).exp();
                acc.iter_mut().for_each(|c| *c *= r);
                max = lv;
            }
            let w = (lv - max).exp();
            acc[0] += w;
            acc[1] += w * a;
            acc[2] += w * l1;
            acc[3] += w * l2;
        }
    }
    [acc[1] / acc[0], acc[2] / acc[0], acc[3] / acc[0]]
}

/// Equal-density endpoints of the `level` HPD interval of GA(shape, rate),
/// by bisection on the left end.
pub fn gamma_hpd(shape: f64, rate: f64, level: f64) -> (f64, f64) {
    let g = Gamma::new(shape, rate).unwrap();
    let upper_of = |l: f64| g.inverse_cdf(g.cdf(l) + level);
    let (mut lo, mut hi) = (1e-9, g.inverse_cdf(1.0 - level) - 1e-9);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g.pdf(mid) < g.pdf(upper_of(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, upper_of(lo))
}
