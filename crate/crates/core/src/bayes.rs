//! Bayesian inference by importance sampling.
//!
//! At fixed shape the Beta-Gamma prior is conjugate up to a bounded factor.
//! With `W = min(U, V)` the joint posterior factors as
//!
//! ```text
//! pi(alpha, l1, l2 | data) ∝ BG(l1, l2 | a0+k, b0+W, a1+k1, a2+k2) * pi2(alpha) * g
//! pi2(alpha) ∝ alpha^(k+a-1) exp(-alpha (b - sum ln t)) / (b0 + W)^(a0+k)
//! g = exp(-l1 (U - W) - l2 (V - W))
//! ```
//!
//! so shapes are drawn from `pi2` by adaptive rejection, rates from the
//! Beta-Gamma, and `g` becomes the importance weight. Under the order
//! restriction `l1 < l2`, with `J = min(k1, k2)`, the rate law is
//! OBG(a0+2J, b0+W, a1+J, a2+J), the exponent in `pi2` is `a0+2J` and `g`
//! gains the factor `l1^(k1-J) l2^(k2-J)`.
//!
//! `pi2` is log-concave between the points where `U` and `V` cross; at a
//! crossing `-ln(b0 + W)` has a convex kink, so the crossings are handed to
//! the sampler as breakpoints.

use rand::RngCore;
use rayon::prelude::*;

use crate::error::{check_level, Error, Result};
use crate::gof::ks_statistic;
use crate::jpc::{simulate_jpc, JointParams, JpcSample, SufficientStats};
use crate::logconcave::{LogConcaveSampler, LogConcaveTarget};
use crate::mle::IntervalEstimate;
use crate::powersum::PowerSum;
use crate::rng::{sample_beta_gamma, sample_gamma, sample_ordered_beta_gamma, sample_weibull, BetaGammaHyper, RngStream};

const SLOPE_PROBE: f64 = 1e8;

/// Gamma prior GA(a, b) on the common shape.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ShapeHyper {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PriorSpec {
    pub bg: BetaGammaHyper,
    pub shape: ShapeHyper,
    #[serde(default)]
    pub ordered: bool,
}

impl PriorSpec {
    pub fn new(bg: BetaGammaHyper, shape: ShapeHyper, ordered: bool) -> Result<Self> {
        let p = Self { bg, shape, ordered };
        p.validate()?;
        Ok(p)
    }

    /// All hyperparameters zero.
    pub fn non_informative(ordered: bool) -> Self {
        Self {
            bg: BetaGammaHyper::new(0.0, 0.0, 0.0, 0.0),
            shape: ShapeHyper { a: 0.0, b: 0.0 },
            ordered,
        }
    }

    /// The informative setting of the simulation study: BG(1.5, 1, 2, 4)
    /// for the rates and GA(2 alpha, 2) for the shape, centred on the true
    /// shape `alpha`.
    pub fn informative(alpha: f64, ordered: bool) -> Self {
        Self {
            bg: BetaGammaHyper::new(1.5, 1.0, 2.0, 4.0),
            shape: ShapeHyper { a: 2.0 * alpha, b: 2.0 },
            ordered,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("a0", self.bg.a0),
            ("b0", self.bg.b0),
            ("a1", self.bg.a1),
            ("a2", self.bg.a2),
            ("a", self.shape.a),
            ("b", self.shape.b),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain(format!(
                    "hyperparameter {name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// The shape marginal `pi2(alpha | data)` as a sampling target.
pub struct ShapeMarginal {
    u: PowerSum,
    v: PowerSum,
    k1: usize,
    k2: usize,
    sum_log_t: f64,
    prior: PriorSpec,
    /// Power of `(b0 + W)` in the denominator.
    exponent: f64,
    /// Beta-Gamma parameters of the conditional rate law, `b0` filled per alpha.
    rate_hyper: BetaGammaHyper,
    crossings: Vec<f64>,
}

fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

impl ShapeMarginal {
    pub fn new(sample: &JpcSample, prior: &PriorSpec) -> Result<Self> {
        prior.validate()?;
        let stats = sample.stats();
        let SufficientStats {
            u,
            v,
            k1,
            k2,
            sum_log_t,
            ..
        } = stats;
        let bg = prior.bg;
        let (exponent, rate_hyper) = if prior.ordered {
            let j = k1.min(k2) as f64;
            (
                bg.a0 + 2.0 * j,
                BetaGammaHyper::new(bg.a0 + 2.0 * j, bg.b0, bg.a1 + j, bg.a2 + j),
            )
        } else {
            let k = (k1 + k2) as f64;
            (
                bg.a0 + k,
                BetaGammaHyper::new(bg.a0 + k, bg.b0, bg.a1 + k1 as f64, bg.a2 + k2 as f64),
            )
        };
        if !(rate_hyper.a0 > 0.0 && rate_hyper.a1 > 0.0 && rate_hyper.a2 > 0.0) {
            return Err(Error::ImproperPosterior(format!(
                "conditional rate posterior BG({}, ., {}, {}) needs positive shape parameters \
                 (k1 = {k1}, k2 = {k2})",
                rate_hyper.a0, rate_hyper.a1, rate_hyper.a2
            )));
        }
        let crossings = crossings(sample);
        let target = Self {
            u,
            v,
            k1,
            k2,
            sum_log_t,
            prior: *prior,
            exponent,
            rate_hyper,
            crossings,
        };
        let slope = target.log_density_derivative(SLOPE_PROBE);
        if !(slope < 0.0) {
            return Err(Error::ImproperPosterior(format!(
                "shape marginal is not decreasing at alpha = {SLOPE_PROBE:e} (slope {slope}); \
                 a larger b in the shape prior makes it integrable"
            )));
        }
        Ok(target)
    }

    fn k(&self) -> f64 {
        (self.k1 + self.k2) as f64
    }

    fn log_w(&self, alpha: f64) -> (f64, f64) {
        let (mu, mv) = (self.u.moments(alpha), self.v.moments(alpha));
        if mu.log_value <= mv.log_value {
            (mu.log_value, mu.d1)
        } else {
            (mv.log_value, mv.d1)
        }
    }

    fn log_b0_plus_w(&self, log_w: f64) -> f64 {
        if self.prior.bg.b0 > 0.0 {
            ln_add_exp(self.prior.bg.b0.ln(), log_w)
        } else {
            log_w
        }
    }

    /// Points where `U(alpha) = V(alpha)`.
    pub fn crossings(&self) -> &[f64] {
        &self.crossings
    }

    pub fn w(&self, alpha: f64) -> f64 {
        self.log_w(alpha).0.exp()
    }

    pub fn u(&self, alpha: f64) -> f64 {
        self.u.value(alpha)
    }

    pub fn v(&self, alpha: f64) -> f64 {
        self.v.value(alpha)
    }
}

impl LogConcaveTarget for ShapeMarginal {
    fn log_density(&self, alpha: f64) -> f64 {
        let (log_w, _) = self.log_w(alpha);
        (self.k() + self.prior.shape.a - 1.0) * alpha.ln() - alpha * (self.prior.shape.b - self.sum_log_t)
            - self.exponent * self.log_b0_plus_w(log_w)
    }

    fn log_density_derivative(&self, alpha: f64) -> f64 {
        let (log_w, dlog_w) = self.log_w(alpha);
        let share = (log_w - self.log_b0_plus_w(log_w)).exp();
        (self.k() + self.prior.shape.a - 1.0) / alpha - (self.prior.shape.b - self.sum_log_t)
            - self.exponent * share * dlog_w
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.crossings.clone()
    }
}

/// Roots of `U(alpha) - V(alpha) = sum_j c_j t_j^alpha` on `alpha > 0`. By
/// Descartes' rule for exponential sums there are at most as many roots as
/// sign changes in `c_j` taken in increasing `t_j`.
fn crossings(sample: &JpcSample) -> Vec<f64> {
    let coef: Vec<f64> = sample
        .observations()
        .iter()
        .enumerate()
        .map(|(j, o)| {
            let w = sample.withdrawn_group2(j);
            let (du, dv) = if o.from_group1 { (1, 0) } else { (0, 1) };
            (o.withdrawn_group1 + du) as f64 - (w + dv) as f64
        })
        .filter(|&c| c != 0.0)
        .collect();
    let changes = coef.windows(2).filter(|w| w[0].signum() != w[1].signum()).count();
    if changes == 0 {
        return Vec::new();
    }
    let stats = sample.stats();
    let diff = |a: f64| stats.u.log_value(a) - stats.v.log_value(a);
    let grid: Vec<f64> = (0..=1400).map(|i| 10f64.powf(-6.0 + 14.0 * i as f64 / 1400.0)).collect();
    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (diff(lo), diff(hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo.signum() == fhi.signum() || fhi == 0.0 {
            continue;
        }
        for _ in 0..100 {
            let mid = (lo * hi).sqrt();
            if diff(mid).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 * hi {
                break;
            }
        }
        roots.push(0.5 * (lo + hi));
        if roots.len() == changes {
            break;
        }
    }
    roots
}

/// Unnormalized log of `pi2(alpha | data)`.
pub fn log_marginal_shape(sample: &JpcSample, prior: &PriorSpec, alpha: f64) -> Result<f64> {
    crate::error::check_positive("alpha", alpha)?;
    Ok(ShapeMarginal::new(sample, prior)?.log_density(alpha))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorDraw {
    pub params: JointParams,
    /// Log of the importance weight `g`.
    pub log_g: f64,
}

impl PosteriorDraw {
    pub fn g(&self) -> f64 {
        self.log_g.exp()
    }
}

#[derive(Debug, Clone)]
pub struct WeightedPosterior {
    draws: Vec<PosteriorDraw>,
    weights: Vec<f64>,
    ess: f64,
    /// Envelope acceptance rate of the shape sampler, when one was used.
    pub acceptance_rate: Option<f64>,
}

impl WeightedPosterior {
    /// Normalizes `g` over the draws; fails when every weight vanishes.
    pub fn from_draws(draws: Vec<PosteriorDraw>) -> Result<Self> {
        let max = draws.iter().map(|d| d.log_g).fold(f64::NEG_INFINITY, f64::max);
        if draws.is_empty() || !max.is_finite() {
            return Err(Error::DegenerateWeights);
        }
        let raw: Vec<f64> = draws
            .iter()
            .map(|d| {
                let w = (d.log_g - max).exp();
                if w.is_nan() {
                    0.0
                } else {
                    w
                }
            })
            .collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let ess = 1.0 / weights.iter().map(|v| v * v).sum::<f64>();
        Ok(Self {
            draws,
            weights,
            ess,
            acceptance_rate: None,
        })
    }

    pub fn draws(&self) -> &[PosteriorDraw] {
        &self.draws
    }

    /// Normalized weights `v_i = g_i / sum g`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    /// Effective sample size `1 / sum v_i^2`.
    pub fn ess(&self) -> f64 {
        self.ess
    }

    /// Set when the effective sample size is below 1% of the draw count.
    pub fn low_ess_warning(&self) -> bool {
        self.ess < 0.01 * self.len() as f64
    }

    pub fn means(&self) -> Result<JointParams> {
        Ok(JointParams {
            alpha: bayes_estimate(self, |p| p.alpha)?,
            lambda1: bayes_estimate(self, |p| p.lambda1)?,
            lambda2: bayes_estimate(self, |p| p.lambda2)?,
        })
    }

    /// HPD intervals for alpha, lambda1 and lambda2.
    pub fn hpd(&self, level: f64) -> Result<[IntervalEstimate; 3]> {
        Ok([
            hpd_interval(self, |p| p.alpha, level)?,
            hpd_interval(self, |p| p.lambda1, level)?,
            hpd_interval(self, |p| p.lambda2, level)?,
        ])
    }
}

/// Draws `n` weighted samples from the joint posterior of a JPC sample.
pub fn draw_posterior(sample: &JpcSample, prior: &PriorSpec, n: usize, rng: &mut RngStream) -> Result<WeightedPosterior> {
    if n == 0 {
        return Err(Error::Domain("number of posterior draws must be positive".into()));
    }
    let target = ShapeMarginal::new(sample, prior)?;
    let mut sampler = LogConcaveSampler::new(&target, 0.0)?;
    let (k1, k2) = (target.k1 as f64, target.k2 as f64);
    let j = k1.min(k2);
    let mut draws = Vec::with_capacity(n);
    for _ in 0..n {
        let alpha = sampler.sample(rng)?;
        let (u, v) = (target.u(alpha), target.v(alpha));
        let w = u.min(v);
        let hyper = BetaGammaHyper {
            b0: prior.bg.b0 + w,
            ..target.rate_hyper
        };
        let (l1, l2) = if prior.ordered {
            sample_ordered_beta_gamma(&hyper, rng)?
        } else {
            sample_beta_gamma(&hyper, rng)?
        };
        let mut log_g = -l1 * (u - w) - l2 * (v - w);
        if prior.ordered {
            log_g += (k1 - j) * l1.ln() + (k2 - j) * l2.ln();
        }
        draws.push(PosteriorDraw {
            params: JointParams {
                alpha,
                lambda1: l1,
                lambda2: l2,
            },
            log_g,
        });
    }
    let mut post = WeightedPosterior::from_draws(draws)?;
    post.acceptance_rate = Some(sampler.acceptance_rate());
    Ok(post)
}

/// Posterior for one complete Weibull sample under GA(a0, b0) on the rate
/// and GA(a, b) on the shape (the `a1`, `a2` and `ordered` fields of the
/// prior are ignored). The rate is conjugate at fixed shape, so every weight
/// is 1. The rate is stored in both `lambda1` and `lambda2`.
pub fn draw_posterior_complete(
    data: &[f64],
    prior: &PriorSpec,
    n: usize,
    rng: &mut RngStream,
) -> Result<WeightedPosterior> {
    prior.validate()?;
    if n == 0 {
        return Err(Error::Domain("number of posterior draws must be positive".into()));
    }
    if data.is_empty() || data.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Validation("complete sample must be non-empty and positive".into()));
    }
    let sum = PowerSum::new(data.iter().map(|&t| (1.0, t)));
    let count = data.len() as f64;
    let sum_log_t: f64 = data.iter().map(|t| t.ln()).sum();
    let (a0, b0) = (prior.bg.a0, prior.bg.b0);
    let (a, b) = (prior.shape.a, prior.shape.b);
    let log_b0_plus = move |log_s: f64| if b0 > 0.0 { ln_add_exp(b0.ln(), log_s) } else { log_s };
    let target = crate::logconcave::FnTarget::new(
        |alpha: f64| {
            (count + a - 1.0) * alpha.ln() - alpha * (b - sum_log_t) - (a0 + count) * log_b0_plus(sum.log_value(alpha))
        },
        |alpha: f64| {
            let m = sum.moments(alpha);
            let share = (m.log_value - log_b0_plus(m.log_value)).exp();
            (count + a - 1.0) / alpha - (b - sum_log_t) - (a0 + count) * share * m.d1
        },
    );
    let slope = target.log_density_derivative(SLOPE_PROBE);
    if !(slope < 0.0) {
        return Err(Error::ImproperPosterior(format!(
            "shape marginal is not decreasing at alpha = {SLOPE_PROBE:e}"
        )));
    }
    let mut sampler = LogConcaveSampler::new(&target, 0.0)?;
    let mut draws = Vec::with_capacity(n);
    for _ in 0..n {
        let alpha = sampler.sample(rng)?;
        let lambda = sample_gamma(a0 + count, b0 + sum.value(alpha), rng)?;
        draws.push(PosteriorDraw {
            params: JointParams {
                alpha,
                lambda1: lambda,
                lambda2: lambda,
            },
            log_g: 0.0,
        });
    }
    let mut post = WeightedPosterior::from_draws(draws)?;
    post.acceptance_rate = Some(sampler.acceptance_rate());
    Ok(post)
}

/// Importance-sampling estimate `sum v_i h(theta_i)` of `E[h | data]`.
pub fn bayes_estimate(post: &WeightedPosterior, h: impl Fn(&JointParams) -> f64) -> Result<f64> {
    let first = post.draws.first().ok_or(Error::DegenerateWeights)?;
    // centring on one value keeps a constant h exact
    let h0 = h(&first.params);
    let delta: f64 = post
        .draws
        .iter()
        .zip(&post.weights)
        .map(|(d, v)| v * (h(&d.params) - h0))
        .sum();
    Ok(h0 + delta)
}

/// Weighted HPD interval for `h(theta)`.
pub fn hpd_interval(post: &WeightedPosterior, h: impl Fn(&JointParams) -> f64, level: f64) -> Result<IntervalEstimate> {
    let values: Vec<f64> = post.draws.iter().map(|d| h(&d.params)).collect();
    hpd_from_weighted(&values, &post.weights, level)
}

/// HPD interval from values and normalized weights.
///
/// With values sorted ascending, a pair `j1 < j2` qualifies when the weight
/// of `j1..=j2` is at most `level` and adding `j2 + 1` would exceed it; the
/// narrowest qualifying pair wins, ties going to the smallest `j1`. When no
/// pair qualifies (a few heavy draws), the narrowest interval holding at
/// least `level` is used instead.
pub fn hpd_from_weighted(values: &[f64], weights: &[f64], level: f64) -> Result<IntervalEstimate> {
    check_level(level)?;
    if values.is_empty() || values.len() != weights.len() {
        return Err(Error::Domain("HPD needs matching, non-empty values and weights".into()));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let h: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let mut prefix = Vec::with_capacity(h.len() + 1);
    prefix.push(0.0);
    for &i in &order {
        prefix.push(prefix.last().unwrap() + weights[i]);
    }
    let n = h.len();
    let mass = |a: usize, b: usize| prefix[b + 1] - prefix[a];

    let mut best: Option<(f64, usize, usize)> = None;
    let mut j2 = 0;
    for j1 in 0..n {
        j2 = j2.max(j1);
        while j2 + 1 < n && mass(j1, j2 + 1) <= level {
            j2 += 1;
        }
        if j2 > j1 && j2 + 1 < n && mass(j1, j2) <= level && mass(j1, j2 + 1) > level {
            let width = h[j2] - h[j1];
            if best.is_none_or(|(w, _, _)| width < w) {
                best = Some((width, j1, j2));
            }
        }
    }
    if best.is_none() {
        let mut hi = 0;
        for lo in 0..n {
            hi = hi.max(lo);
            while hi + 1 < n && mass(lo, hi) < level {
                hi += 1;
            }
            if mass(lo, hi) >= level {
                let width = h[hi] - h[lo];
                if best.is_none_or(|(w, _, _)| width < w) {
                    best = Some((width, lo, hi));
                }
            }
        }
    }
    let (_, a, b) = best.unwrap_or((0.0, 0, n - 1));
    IntervalEstimate::new(h[a], h[b], level)
}

/// Observed data for a posterior predictive check.
#[derive(Debug, Clone)]
pub enum Dataset {
    /// One complete Weibull sample.
    Complete(Vec<f64>),
    Jpc(JpcSample),
}

impl Dataset {
    pub fn posterior(&self, prior: &PriorSpec, n: usize, rng: &mut RngStream) -> Result<WeightedPosterior> {
        match self {
            Dataset::Complete(x) => draw_posterior_complete(x, prior, n, rng),
            Dataset::Jpc(s) => draw_posterior(s, prior, n, rng),
        }
    }

    /// Fresh data of the same design at `params`.
    pub fn replicate(&self, params: &JointParams, rng: &mut RngStream) -> Result<Dataset> {
        match self {
            Dataset::Complete(x) => {
                let ys = (0..x.len())
                    .map(|_| sample_weibull(params.alpha, params.lambda1, rng))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Dataset::Complete(ys))
            }
            Dataset::Jpc(s) => Ok(Dataset::Jpc(simulate_jpc(s.scheme(), params, rng)?)),
        }
    }
}

/// Default discrepancy: the K-S distance between the data and the model at
/// `params`. Complete data are compared with WE(alpha, lambda1). For JPC
/// data the transformed spacings `(t_j^a - t_(j-1)^a)(l1 M_j + l2 N_j)`, with
/// `M_j`, `N_j` the units of each group still on test, are i.i.d. standard
/// exponential under the model and are compared with Exp(1).
pub fn ks_discrepancy(data: &Dataset, params: &JointParams) -> f64 {
    match data {
        Dataset::Complete(x) => {
            let mut sorted = x.clone();
            sorted.sort_by(f64::total_cmp);
            ks_statistic(&sorted, |t| -(-params.lambda1 * t.powf(params.alpha)).exp_m1())
        }
        Dataset::Jpc(s) => {
            let mut spacings = jpc_exponential_spacings(s, params);
            spacings.sort_by(f64::total_cmp);
            ks_statistic(&spacings, |e| -(-e).exp_m1())
        }
    }
}

/// The transformed inter-failure spacings of a JPC sample.
pub fn jpc_exponential_spacings(sample: &JpcSample, params: &JointParams) -> Vec<f64> {
    let (mut at_risk1, mut at_risk2) = (sample.scheme().m() as f64, sample.scheme().n() as f64);
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(sample.k());
    for (j, o) in sample.observations().iter().enumerate() {
        let x = o.t.powf(params.alpha);
        out.push((x - prev) * (params.lambda1 * at_risk1 + params.lambda2 * at_risk2));
        prev = x;
        if o.from_group1 {
            at_risk1 -= 1.0;
        } else {
            at_risk2 -= 1.0;
        }
        at_risk1 -= o.withdrawn_group1 as f64;
        at_risk2 -= sample.withdrawn_group2(j) as f64;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PredictiveCheck {
    /// Fraction of replicates whose discrepancy is at least the observed one.
    pub p_value: f64,
    /// Posterior mean of the observed discrepancy.
    pub expected_discrepancy: f64,
}

/// Posterior predictive p-value with the default K-S discrepancy.
pub fn posterior_predictive_pvalue(
    data: &Dataset,
    prior: &PriorSpec,
    n_draws: usize,
    n_rep: usize,
    rng: &mut RngStream,
) -> Result<PredictiveCheck> {
    let post = data.posterior(prior, n_draws, rng)?;
    posterior_predictive_pvalue_from(data, &post, &ks_discrepancy, n_rep, rng)
}

/// Posterior predictive p-value for an existing posterior and any
/// discrepancy. Parameters are resampled in proportion to the weights; each
/// replicate dataset comes from its own substream.
pub fn posterior_predictive_pvalue_from<D>(
    data: &Dataset,
    post: &WeightedPosterior,
    discrepancy: &D,
    n_rep: usize,
    rng: &mut RngStream,
) -> Result<PredictiveCheck>
where
    D: Fn(&Dataset, &JointParams) -> f64 + Sync,
{
    if n_rep == 0 {
        return Err(Error::Domain("number of replicates must be positive".into()));
    }
    let expected_discrepancy = bayes_estimate(post, |p| discrepancy(data, p))?;

    let mut cumulative = Vec::with_capacity(post.len());
    let mut acc = 0.0;
    for v in post.weights() {
        acc += v;
        cumulative.push(acc);
    }
    let picks: Vec<usize> = (0..n_rep)
        .map(|_| {
            let u = rng.uniform() * acc;
            cumulative.partition_point(|&c| c < u).min(post.len() - 1)
        })
        .collect();
    let base = RngStream::new(rng.next_u64());
    let exceed = picks
        .par_iter()
        .enumerate()
        .map(|(r, &i)| {
            let params = post.draws()[i].params;
            let mut stream = base.substream(r as u64);
            let rep = data.replicate(&params, &mut stream)?;
            Ok(discrepancy(&rep, &params) >= discrepancy(data, &params))
        })
        .collect::<Result<Vec<bool>>>()?;
    let hits = exceed.iter().filter(|&&b| b).count();
    Ok(PredictiveCheck {
        p_value: hits as f64 / n_rep as f64,
        expected_discrepancy,
    })
}
