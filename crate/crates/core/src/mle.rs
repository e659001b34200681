//! Maximum likelihood: profile maximization in the shape, closed-form rates,
//! the order-restricted variant (`lambda1 <= lambda2`), observed information
//! and parametric bootstrap intervals.

use nalgebra::Matrix3;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{check_level, Error, Result};
use crate::jpc::{log_likelihood_with, simulate_jpc, JointParams, JpcSample, SufficientStats};
use crate::optimize::{unimodal_argmax, ALPHA_MAX, ALPHA_MIN};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MleFit {
    pub params: JointParams,
    pub loglik: f64,
    pub ordered: bool,
    /// Order-restricted fit whose optimum sits on `lambda1 = lambda2`.
    pub boundary: bool,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct IntervalEstimate {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

impl IntervalEstimate {
    pub fn new(lower: f64, upper: f64, level: f64) -> Result<Self> {
        check_level(level)?;
        if !(lower <= upper) {
            return Err(Error::Domain(format!("interval bounds out of order: [{lower}, {upper}]")));
        }
        Ok(Self { lower, upper, level })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// Observed information, the negative Hessian of the log-likelihood in
/// `(alpha, lambda1, lambda2)` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoMatrix {
    pub entries: Matrix3<f64>,
}

impl InfoMatrix {
    /// Inverse through a Cholesky factorization; fails unless positive definite.
    pub fn inverse(&self) -> Result<Matrix3<f64>> {
        self.entries
            .cholesky()
            .map(|c| c.inverse())
            .ok_or(Error::SingularInformation)
    }
}

fn require_both_groups(stats: &SufficientStats) -> Result<()> {
    if stats.k1 == 0 || stats.k2 == 0 {
        return Err(Error::NoMle {
            k1: stats.k1,
            k2: stats.k2,
        });
    }
    Ok(())
}

/// `(k1 / U(alpha), k2 / V(alpha))`.
pub fn lambda_hats(sample: &JpcSample, alpha: f64) -> Result<(f64, f64)> {
    let stats = sample.stats();
    require_both_groups(&stats)?;
    Ok(rates_at(&stats, alpha))
}

fn rates_at(stats: &SufficientStats, alpha: f64) -> (f64, f64) {
    (
        stats.k1 as f64 / stats.u.value(alpha),
        stats.k2 as f64 / stats.v.value(alpha),
    )
}

/// `p1(alpha) = k ln alpha - k1 ln U - k2 ln V + (alpha - 1) sum ln t`.
pub fn profile_loglik(sample: &JpcSample, alpha: f64) -> Result<f64> {
    let stats = sample.stats();
    require_both_groups(&stats)?;
    Ok(profile_with(&stats, alpha))
}

fn profile_with(s: &SufficientStats, alpha: f64) -> f64 {
    s.k() as f64 * alpha.ln() - s.k1 as f64 * s.u.log_value(alpha) - s.k2 as f64 * s.v.log_value(alpha)
        + (alpha - 1.0) * s.sum_log_t
}

fn profile_slope(s: &SufficientStats, alpha: f64) -> f64 {
    s.k() as f64 / alpha - s.k1 as f64 * s.u.moments(alpha).d1 - s.k2 as f64 * s.v.moments(alpha).d1
        + s.sum_log_t
}

/// True when the unrestricted rates violate the order, `k1/U >= k2/V`.
fn restriction_active(s: &SufficientStats, alpha: f64) -> bool {
    (s.k1 as f64).ln() + s.v.log_value(alpha) >= (s.k2 as f64).ln() + s.u.log_value(alpha)
}

fn xlnx(x: usize) -> f64 {
    if x == 0 {
        0.0
    } else {
        x as f64 * (x as f64).ln()
    }
}

/// Log-likelihood maximized over `lambda1 <= lambda2` at fixed shape. In the
/// unconstrained region this is `p1` plus `k1 ln k1 + k2 ln k2 - k`; on the
/// boundary both rates equal `k / sum (R_j + 1) t_j^alpha`.
pub fn profile_loglik_ordered(sample: &JpcSample, alpha: f64) -> Result<f64> {
    let stats = sample.stats();
    require_both_groups(&stats)?;
    Ok(ordered_profile_with(&stats, alpha))
}

fn ordered_profile_with(s: &SufficientStats, alpha: f64) -> f64 {
    let k = s.k();
    if restriction_active(s, alpha) {
        k as f64 * alpha.ln() + xlnx(k) - k as f64 * s.total.log_value(alpha) - k as f64
            + (alpha - 1.0) * s.sum_log_t
    } else {
        profile_with(s, alpha) + xlnx(s.k1) + xlnx(s.k2) - k as f64
    }
}

fn ordered_profile_slope(s: &SufficientStats, alpha: f64) -> f64 {
    if restriction_active(s, alpha) {
        s.k() as f64 / alpha - s.k() as f64 * s.total.moments(alpha).d1 + s.sum_log_t
    } else {
        profile_slope(s, alpha)
    }
}

pub fn fit_mle(sample: &JpcSample) -> Result<MleFit> {
    fit_with(&sample.stats())
}

pub(crate) fn fit_with(stats: &SufficientStats) -> Result<MleFit> {
    require_both_groups(stats)?;
    let max = unimodal_argmax(|a| profile_slope(stats, a), 1.0, ALPHA_MIN, ALPHA_MAX)?;
    let (l1, l2) = rates_at(stats, max.x);
    let params = JointParams {
        alpha: max.x,
        lambda1: l1,
        lambda2: l2,
    };
    Ok(MleFit {
        params,
        loglik: log_likelihood_with(stats, &params),
        ordered: false,
        boundary: false,
        iterations: max.iterations,
        converged: max.converged,
    })
}

pub fn fit_mle_ordered(sample: &JpcSample) -> Result<MleFit> {
    fit_ordered_with(&sample.stats())
}

pub(crate) fn fit_ordered_with(stats: &SufficientStats) -> Result<MleFit> {
    require_both_groups(stats)?;
    let max = unimodal_argmax(|a| ordered_profile_slope(stats, a), 1.0, ALPHA_MIN, ALPHA_MAX)?;
    let alpha = max.x;
    let boundary = restriction_active(stats, alpha);
    let (lambda1, lambda2) = if boundary {
        let common = stats.k() as f64 / stats.total.value(alpha);
        (common, common)
    } else {
        rates_at(stats, alpha)
    };
    let params = JointParams {
        alpha,
        lambda1,
        lambda2,
    };
    Ok(MleFit {
        params,
        loglik: log_likelihood_with(stats, &params),
        ordered: true,
        boundary,
        iterations: max.iterations,
        converged: max.converged,
    })
}

/// Negative Hessian of the log-likelihood at `params`.
pub fn fisher_info(sample: &JpcSample, params: &JointParams) -> InfoMatrix {
    let s = sample.stats();
    let a = params.alpha;
    let (mu, mv) = (s.u.moments(a), s.v.moments(a));
    let (u, v) = (mu.log_value.exp(), mv.log_value.exp());
    let (du, dv) = (u * mu.d1, v * mv.d1);
    let (d2u, d2v) = (u * mu.d2, v * mv.d2);
    let a11 = s.k() as f64 / (a * a) + params.lambda1 * d2u + params.lambda2 * d2v;
    let a22 = s.k1 as f64 / (params.lambda1 * params.lambda1);
    let a33 = s.k2 as f64 / (params.lambda2 * params.lambda2);
    InfoMatrix {
        entries: Matrix3::new(a11, du, dv, du, a22, 0.0, dv, 0.0, a33),
    }
}

/// Wald intervals `theta +- z sqrt((A^-1)_ii)` for alpha, lambda1, lambda2.
pub fn asymptotic_ci(sample: &JpcSample, fit: &MleFit, level: f64) -> Result<[IntervalEstimate; 3]> {
    check_level(level)?;
    let cov = fisher_info(sample, &fit.params).inverse()?;
    let z = standard_normal_quantile(0.5 * (1.0 + level));
    let theta = fit.params.as_array();
    let mut out = [IntervalEstimate {
        lower: 0.0,
        upper: 0.0,
        level,
    }; 3];
    for i in 0..3 {
        let half = z * cov[(i, i)].sqrt();
        if !half.is_finite() {
            return Err(Error::SingularInformation);
        }
        out[i] = IntervalEstimate::new(theta[i] - half, theta[i] + half, level)?;
    }
    Ok(out)
}

pub(crate) fn standard_normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// Sample quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be ascending and non-empty.
pub(crate) fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapResult {
    pub fit: MleFit,
    pub intervals: [IntervalEstimate; 3],
    /// Resamples dropped because one group had no failures or the refit
    /// failed.
    pub skipped: usize,
    pub replicates: Vec<JointParams>,
}

/// Parametric percentile bootstrap: `b` samples are simulated under the
/// observed scheme from the (ordered or unrestricted) MLE and refitted.
/// Replicate `i` uses `rng.substream(i)`, so the result does not depend on
/// thread scheduling.
pub fn bootstrap_ci(
    sample: &JpcSample,
    level: f64,
    b: usize,
    ordered: bool,
    rng: &RngStream,
) -> Result<BootstrapResult> {
    check_level(level)?;
    if b == 0 {
        return Err(Error::Domain("bootstrap size must be positive".into()));
    }
    let fitter = if ordered { fit_ordered_with } else { fit_with };
    let fit = fitter(&sample.stats())?;
    let scheme = sample.scheme();
    let refits: Vec<Option<JointParams>> = (0..b)
        .into_par_iter()
        .map(|i| {
            let mut stream = rng.substream(i as u64);
            let resample = simulate_jpc(scheme, &fit.params, &mut stream).ok()?;
            fitter(&resample.stats()).ok().map(|f| f.params)
        })
        .collect();
    let replicates: Vec<JointParams> = refits.into_iter().flatten().collect();
    let skipped = b - replicates.len();
    if replicates.is_empty() || 2 * skipped > b {
        return Err(Error::UnstableBootstrap { skipped, total: b });
    }
    let (plo, phi) = (0.5 * (1.0 - level), 0.5 * (1.0 + level));
    let mut intervals = [IntervalEstimate {
        lower: 0.0,
        upper: 0.0,
        level,
    }; 3];
    for (i, iv) in intervals.iter_mut().enumerate() {
        let mut col: Vec<f64> = replicates.iter().map(|p| p.as_array()[i]).collect();
        col.sort_by(f64::total_cmp);
        *iv = IntervalEstimate::new(quantile_sorted(&col, plo), quantile_sorted(&col, phi), level)?;
    }
    Ok(BootstrapResult {
        fit,
        intervals,
        skipped,
        replicates,
    })
}
