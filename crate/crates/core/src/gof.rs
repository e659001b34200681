//! Complete-sample Weibull fits, Kolmogorov-Smirnov distances and p-values,
//! and the likelihood-ratio test for a shape shared by two samples.

use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::optimize::{unimodal_argmax, ALPHA_MAX, ALPHA_MIN};
use crate::powersum::PowerSum;
use crate::rng::{sample_weibull, RngStream};

/// Positive observations after subtracting a location shift.
#[derive(Debug, Clone, PartialEq)]
pub struct CompleteSample {
    values: Vec<f64>,
    shift: f64,
}

impl CompleteSample {
    /// Subtracts `shift` from every raw value.
    pub fn new(raw: &[f64], shift: f64) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Validation("complete sample is empty".into()));
        }
        let values: Vec<f64> = raw.iter().map(|x| x - shift).collect();
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Validation(format!(
                "value {bad} is not positive after subtracting shift {shift}"
            )));
        }
        Ok(Self { values, shift })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct WeibullFit {
    pub alpha: f64,
    pub lambda: f64,
    pub loglik: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CommonShapeFit {
    pub alpha: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub loglik: f64,
}

struct Summary {
    sum: PowerSum,
    n: f64,
    sum_log: f64,
}

impl Summary {
    fn new(data: &CompleteSample) -> Result<Self> {
        let v = data.values();
        if v.len() < 2 || v.iter().all(|&x| x == v[0]) {
            return Err(Error::Degenerate(
                "a Weibull fit needs at least two distinct values".into(),
            ));
        }
        Ok(Self {
            sum: PowerSum::new(v.iter().map(|&t| (1.0, t))),
            n: v.len() as f64,
            sum_log: v.iter().map(|t| t.ln()).sum(),
        })
    }

    fn profile_slope_terms(&self, alpha: f64) -> f64 {
        -self.n * self.sum.moments(alpha).d1 + self.sum_log
    }

    fn loglik(&self, alpha: f64, lambda: f64) -> f64 {
        self.n * (alpha.ln() + lambda.ln()) + (alpha - 1.0) * self.sum_log - lambda * self.sum.value(alpha)
    }
}

/// Weibull MLE for `f(x) = a l x^(a-1) exp(-l x^a)`.
pub fn fit_weibull_complete(data: &CompleteSample) -> Result<WeibullFit> {
    let s = Summary::new(data)?;
    let max = unimodal_argmax(|a| s.n / a + s.profile_slope_terms(a), 1.0, ALPHA_MIN, ALPHA_MAX)?;
    let alpha = max.x;
    let lambda = s.n / s.sum.value(alpha);
    Ok(WeibullFit {
        alpha,
        lambda,
        loglik: s.loglik(alpha, lambda),
    })
}

/// Joint MLE of two Weibull samples sharing one shape.
pub fn fit_common_shape(data1: &CompleteSample, data2: &CompleteSample) -> Result<CommonShapeFit> {
    let (s1, s2) = (Summary::new(data1)?, Summary::new(data2)?);
    let slope = |a: f64| (s1.n + s2.n) / a + s1.profile_slope_terms(a) + s2.profile_slope_terms(a);
    let alpha = unimodal_argmax(slope, 1.0, ALPHA_MIN, ALPHA_MAX)?.x;
    let lambda1 = s1.n / s1.sum.value(alpha);
    let lambda2 = s2.n / s2.sum.value(alpha);
    Ok(CommonShapeFit {
        alpha,
        lambda1,
        lambda2,
        loglik: s1.loglik(alpha, lambda1) + s2.loglik(alpha, lambda2),
    })
}

/// `sup |F_n - F|` for ascending `sorted` data, checking both sides of every
/// jump of the empirical CDF.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// K-S distance between the data and WE(alpha, lambda).
pub fn ks_distance(data: &CompleteSample, alpha: f64, lambda: f64) -> f64 {
    ks_statistic(&data.sorted(), |t| -(-lambda * t.powf(alpha)).exp_m1())
}

/// Tail `P(K > x)` of the Kolmogorov distribution.
fn kolmogorov_tail(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.18 {
        // small-x form of the CDF converges fast here
        let c = std::f64::consts::PI.powi(2) / (8.0 * x * x);
        let s: f64 = (1..=20)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (-m * m * c).exp()
            })
            .sum();
        (1.0 - (2.0 * std::f64::consts::PI).sqrt() / x * s).clamp(0.0, 1.0)
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let kf = k as f64;
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * (-2.0 * kf * kf * x * x).exp()
            })
            .sum();
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// Asymptotic p-value `P(K > sqrt(n) d)`, valid when the parameters were not
/// estimated from the same data.
pub fn ks_pvalue_asymptotic(distance: f64, n: usize) -> f64 {
    kolmogorov_tail((n as f64).sqrt() * distance)
}

/// Monte Carlo p-value. With `estimated`, each replicate is refitted before
/// its distance is taken (Lilliefors-style); since the Weibull family is a
/// location-scale family on the log scale, that null law does not depend on
/// the parameters and replicates come from the unit exponential.
pub fn ks_pvalue_monte_carlo(distance: f64, n: usize, estimated: bool, n_mc: usize, rng: &RngStream) -> Result<f64> {
    if n == 0 || n_mc == 0 {
        return Err(Error::Domain("sample size and replicate count must be positive".into()));
    }
    let hits = (0..n_mc)
        .into_par_iter()
        .map(|i| {
            let mut stream = rng.substream(i as u64);
            let draws = (0..n)
                .map(|_| sample_weibull(1.0, 1.0, &mut stream))
                .collect::<Result<Vec<_>>>()?;
            let sample = CompleteSample::new(&draws, 0.0)?;
            let d = if estimated {
                let fit = fit_weibull_complete(&sample)?;
                ks_distance(&sample, fit.alpha, fit.lambda)
            } else {
                ks_distance(&sample, 1.0, 1.0)
            };
            Ok(d >= distance)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(hits.iter().filter(|&&h| h).count() as f64 / n_mc as f64)
}

/// Asymptotic p-value when `estimated` is false, Monte Carlo otherwise.
pub fn ks_pvalue(distance: f64, n: usize, estimated: bool, n_mc: usize, rng: &RngStream) -> Result<f64> {
    if distance <= 0.0 {
        return Ok(1.0);
    }
    if estimated {
        ks_pvalue_monte_carlo(distance, n, true, n_mc, rng)
    } else {
        Ok(ks_pvalue_asymptotic(distance, n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LrTest {
    pub statistic: f64,
    pub p_value: f64,
}

/// `-2 (l_common - l_separate)` against chi-square with one degree of freedom.
pub fn lr_test_common_shape(data1: &CompleteSample, data2: &CompleteSample) -> Result<LrTest> {
    let common = fit_common_shape(data1, data2)?;
    let separate = fit_weibull_complete(data1)?.loglik + fit_weibull_complete(data2)?.loglik;
    let statistic = (-2.0 * (common.loglik - separate)).max(0.0);
    let chi = ChiSquared::new(1.0).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(LrTest {
        statistic,
        p_value: 1.0 - chi.cdf(statistic),
    })
}
