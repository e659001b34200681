//! End-to-end analyses of real data: two complete samples checked for a
//! common Weibull shape, and one joint progressively censored sample.

use rand::RngCore;
use serde::Serialize;

use crate::bayes::{
    draw_posterior, ks_discrepancy, posterior_predictive_pvalue_from, Dataset, PosteriorDraw,
    PredictiveCheck, PriorSpec, ShapeHyper, WeightedPosterior,
};
use crate::error::Result;
use crate::gof::{
    fit_common_shape, fit_weibull_complete, ks_distance, ks_pvalue_asymptotic, lr_test_common_shape, CommonShapeFit,
    CompleteSample, LrTest, WeibullFit,
};
use crate::jpc::{JointParams, JpcSample};
use crate::mle::{asymptotic_ci, bootstrap_ci, fit_mle, fit_mle_ordered, IntervalEstimate, MleFit};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalysisOptions {
    pub level: f64,
    /// Posterior draws; 0 skips every Bayesian step.
    pub n_draws: usize,
    /// Replicates per posterior predictive check.
    pub n_rep: usize,
    /// Bootstrap resamples for the censored sample; 0 skips the bootstrap.
    pub b_bootstrap: usize,
    /// Prior for the censored sample. The complete-data analysis always uses
    /// the all-zero prior.
    pub prior: PriorSpec,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            level: 0.9,
            n_draws: 10_000,
            n_rep: 1000,
            b_bootstrap: 1000,
            prior: PriorSpec {
                shape: ShapeHyper { a: 0.0, b: 4.0 },
                ..PriorSpec::non_informative(false)
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BayesCheck {
    pub alpha: f64,
    pub lambda: f64,
    pub check: PredictiveCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleSampleReport {
    pub n: usize,
    pub fit: WeibullFit,
    pub ks: f64,
    pub ks_p_value: f64,
    pub bayes: Option<BayesCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommonShapeBayes {
    pub means: JointParams,
    pub ess: f64,
    /// Posterior mean K-S distance and predictive p-value, per sample.
    pub checks: [PredictiveCheck; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletePairReport {
    pub shift: f64,
    pub samples: [SingleSampleReport; 2],
    pub common: CommonShapeFit,
    /// K-S distance of each sample from its common-shape fit.
    pub common_ks: [f64; 2],
    pub common_ks_p_value: [f64; 2],
    pub lr: LrTest,
    pub common_bayes: Option<CommonShapeBayes>,
}

/// Keeps the draws' `lambda_i` in the `lambda1` slot so that a complete
/// sample of group `i` can be checked against it.
fn project(post: &WeightedPosterior, group: usize) -> Result<WeightedPosterior> {
    let draws = post
        .draws()
        .iter()
        .map(|d| {
            let lambda = if group == 0 { d.params.lambda1 } else { d.params.lambda2 };
            PosteriorDraw {
                params: JointParams {
                    alpha: d.params.alpha,
                    lambda1: lambda,
                    lambda2: lambda,
                },
                log_g: d.log_g,
            }
        })
        .collect();
    WeightedPosterior::from_draws(draws)
}

fn single(data: &CompleteSample, opts: &AnalysisOptions, rng: &mut RngStream) -> Result<SingleSampleReport> {
    let fit = fit_weibull_complete(data)?;
    let ks = ks_distance(data, fit.alpha, fit.lambda);
    let bayes = if opts.n_draws > 0 {
        let set = Dataset::Complete(data.values().to_vec());
        let post = set.posterior(&PriorSpec::non_informative(false), opts.n_draws, rng)?;
        let check = posterior_predictive_pvalue_from(&set, &post, &ks_discrepancy, opts.n_rep, rng)?;
        let means = post.means()?;
        Some(BayesCheck {
            alpha: means.alpha,
            lambda: means.lambda1,
            check,
        })
    } else {
        None
    };
    Ok(SingleSampleReport {
        n: data.len(),
        fit,
        ks,
        ks_p_value: ks_pvalue_asymptotic(ks, data.len()),
        bayes,
    })
}

/// Single Weibull fits with K-S tests, the common-shape fit with its
/// likelihood-ratio test, and (when `n_draws > 0`) Bayes estimates with
/// posterior predictive K-S checks. Both samples are shifted by `shift`
/// first. K-S p-values use the asymptotic Kolmogorov law.
pub fn analyze_complete_pair(
    raw1: &[f64],
    raw2: &[f64],
    shift: f64,
    opts: &AnalysisOptions,
    rng: &mut RngStream,
) -> Result<CompletePairReport> {
    let d1 = CompleteSample::new(raw1, shift)?;
    let d2 = CompleteSample::new(raw2, shift)?;
    let samples = [single(&d1, opts, rng)?, single(&d2, opts, rng)?];
    let common = fit_common_shape(&d1, &d2)?;
    let common_ks = [
        ks_distance(&d1, common.alpha, common.lambda1),
        ks_distance(&d2, common.alpha, common.lambda2),
    ];
    let common_ks_p_value = [
        ks_pvalue_asymptotic(common_ks[0], d1.len()),
        ks_pvalue_asymptotic(common_ks[1], d2.len()),
    ];
    let lr = lr_test_common_shape(&d1, &d2)?;

    let common_bayes = if opts.n_draws > 0 {
        // two complete samples form an uncensored joint sample
        let joint = JpcSample::from_complete_pair(d1.values(), d2.values())?;
        let post = draw_posterior(&joint, &PriorSpec::non_informative(false), opts.n_draws, rng)?;
        let mut checks = Vec::with_capacity(2);
        for (g, d) in [&d1, &d2].into_iter().enumerate() {
            let set = Dataset::Complete(d.values().to_vec());
            checks.push(posterior_predictive_pvalue_from(&set, &project(&post, g)?, &ks_discrepancy, opts.n_rep, rng)?);
        }
        Some(CommonShapeBayes {
            means: post.means()?,
            ess: post.ess(),
            checks: [checks[0], checks[1]],
        })
    } else {
        None
    };

    Ok(CompletePairReport {
        shift,
        samples,
        common,
        common_ks,
        common_ks_p_value,
        lr,
        common_bayes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BayesSummary {
    pub means: JointParams,
    pub hpd: [IntervalEstimate; 3],
    pub ess: f64,
    pub low_ess: bool,
}

impl BayesSummary {
    pub fn from_posterior(post: &WeightedPosterior, level: f64) -> Result<Self> {
        Ok(Self {
            means: post.means()?,
            hpd: post.hpd(level)?,
            ess: post.ess(),
            low_ess: post.low_ess_warning(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JpcReport {
    pub k1: usize,
    pub k2: usize,
    pub mle: MleFit,
    pub asymptotic: Option<[IntervalEstimate; 3]>,
    pub bootstrap: Option<[IntervalEstimate; 3]>,
    pub bayes: Option<BayesSummary>,
    pub mle_ordered: MleFit,
    pub bootstrap_ordered: Option<[IntervalEstimate; 3]>,
    pub bayes_ordered: Option<BayesSummary>,
    /// Posterior predictive check on the transformed spacings.
    pub check: Option<PredictiveCheck>,
}

/// MLE, asymptotic and bootstrap intervals, Bayes estimates with HPD
/// intervals, and the same under `lambda1 <= lambda2`. The asymptotic
/// intervals are `None` when the information matrix is not invertible.
pub fn analyze_jpc(sample: &JpcSample, opts: &AnalysisOptions, rng: &mut RngStream) -> Result<JpcReport> {
    let mle = fit_mle(sample)?;
    let mle_ordered = fit_mle_ordered(sample)?;
    let asymptotic = asymptotic_ci(sample, &mle, opts.level).ok();
    let (bootstrap, bootstrap_ordered) = if opts.b_bootstrap > 0 {
        let base = RngStream::new(rng.next_u64());
        (
            Some(bootstrap_ci(sample, opts.level, opts.b_bootstrap, false, &base.substream(0))?.intervals),
            Some(bootstrap_ci(sample, opts.level, opts.b_bootstrap, true, &base.substream(1))?.intervals),
        )
    } else {
        (None, None)
    };
    let (bayes, bayes_ordered, check) = if opts.n_draws > 0 {
        let free = PriorSpec {
            ordered: false,
            ..opts.prior
        };
        let post = draw_posterior(sample, &free, opts.n_draws, rng)?;
        let set = Dataset::Jpc(sample.clone());
        let check = posterior_predictive_pvalue_from(&set, &post, &ks_discrepancy, opts.n_rep, rng)?;
        let ordered = PriorSpec {
            ordered: true,
            ..opts.prior
        };
        let post_ordered = draw_posterior(sample, &ordered, opts.n_draws, rng)?;
        (
            Some(BayesSummary::from_posterior(&post, opts.level)?),
            Some(BayesSummary::from_posterior(&post_ordered, opts.level)?),
            Some(check),
        )
    } else {
        (None, None, None)
    };
    Ok(JpcReport {
        k1: sample.k1(),
        k2: sample.k2(),
        mle,
        asymptotic,
        bootstrap,
        bayes,
        mle_ordered,
        bootstrap_ordered,
        bayes_ordered,
        check,
    })
}
