//! Monte Carlo studies: average estimates, mean squared errors, average
//! interval lengths and coverage over simulated JPC samples.
//!
//! Replication `i` draws from `RngStream::new(base_seed ^ mix64(i))`; inside a
//! replication the sample uses substream 0 and each method its own substream,
//! so results are independent of thread scheduling and of which other methods
//! are requested. Sums are taken in replication order.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bayes::{draw_posterior, PriorSpec};
use crate::error::{check_level, Error, Result};
use crate::fmt::sig6;
use crate::jpc::{simulate_jpc, CensoringScheme, JointParams, JpcSample};
use crate::mle::{asymptotic_ci, bootstrap_ci, fit_mle, fit_mle_ordered, IntervalEstimate};
use crate::rng::{mix64, RngStream};

pub const PARAMETERS: [&str; 3] = ["alpha", "lambda1", "lambda2"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Mle,
    BayesIp,
    BayesNip,
    Bootstrap,
    MleOrdered,
    BayesOrderedIp,
    BayesOrderedNip,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Mle,
        Method::BayesIp,
        Method::BayesNip,
        Method::Bootstrap,
        Method::MleOrdered,
        Method::BayesOrderedIp,
        Method::BayesOrderedNip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Mle => "mle",
            Method::BayesIp => "bayes-ip",
            Method::BayesNip => "bayes-nip",
            Method::Bootstrap => "bootstrap",
            Method::MleOrdered => "mle-ordered",
            Method::BayesOrderedIp => "bayes-ordered-ip",
            Method::BayesOrderedNip => "bayes-ordered-nip",
        }
    }

    fn stream_index(self) -> u64 {
        1 + Method::ALL.iter().position(|&m| m == self).unwrap_or(0) as u64
    }
}

/// The six schemes of the standard study design: 20 and 22 units on test,
/// k = 20 or 25 failures, with the seven and the remaining withdrawals placed
/// early, in the middle or at the end.
pub fn standard_schemes() -> Vec<CensoringScheme> {
    let build = |k: usize, first: (usize, usize), last: usize| {
        let mut r = vec![0; k];
        r[first.0] = first.1;
        r[k - 1] += last;
        CensoringScheme::new(20, 22, r).expect("withdrawals sum to m + n - k")
    };
    let build_end = |k: usize, last: usize| {
        let mut r = vec![0; k];
        r[k - 2] = 7;
        r[k - 1] = last;
        CensoringScheme::new(20, 22, r).expect("withdrawals sum to m + n - k")
    };
    vec![
        build(20, (0, 7), 15),
        build(20, (9, 7), 15),
        build_end(20, 15),
        build(25, (0, 7), 10),
        build(25, (11, 7), 10),
        build_end(25, 10),
    ]
}

fn default_level() -> f64 {
    0.9
}

fn default_n_posterior() -> usize {
    1000
}

fn default_b_bootstrap() -> usize {
    500
}

/// Study settings. Missing priors default to the informative preset centred
/// on the true shape and to the all-zero non-informative preset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct StudyConfig {
    pub scheme: CensoringScheme,
    pub truth: JointParams,
    pub replications: usize,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub prior_ip: Option<PriorSpec>,
    #[serde(default)]
    pub prior_nip: Option<PriorSpec>,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default = "default_n_posterior", rename = "N-posterior")]
    pub n_posterior: usize,
    #[serde(default = "default_b_bootstrap", rename = "B-bootstrap")]
    pub b_bootstrap: usize,
    #[serde(default)]
    pub base_seed: u64,
}

impl StudyConfig {
    pub fn new(scheme: CensoringScheme, truth: JointParams, replications: usize, methods: Vec<Method>) -> Self {
        Self {
            scheme,
            truth,
            replications,
            methods,
            prior_ip: None,
            prior_nip: None,
            level: default_level(),
            n_posterior: default_n_posterior(),
            b_bootstrap: default_b_bootstrap(),
            base_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Domain("replications must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Domain("no methods requested".into()));
        }
        if self.n_posterior == 0 || self.b_bootstrap == 0 {
            return Err(Error::Domain("posterior and bootstrap sizes must be positive".into()));
        }
        check_level(self.level)?;
        JointParams::new(self.truth.alpha, self.truth.lambda1, self.truth.lambda2)?;
        for p in [self.prior_ip, self.prior_nip].into_iter().flatten() {
            p.validate()?;
        }
        Ok(())
    }

    fn prior(&self, method: Method) -> Option<PriorSpec> {
        let ip = self.prior_ip.unwrap_or_else(|| PriorSpec::informative(self.truth.alpha, false));
        let nip = self.prior_nip.unwrap_or_else(|| PriorSpec::non_informative(false));
        let (base, ordered) = match method {
            Method::BayesIp => (ip, false),
            Method::BayesNip => (nip, false),
            Method::BayesOrderedIp => (ip, true),
            Method::BayesOrderedNip => (nip, true),
            _ => return None,
        };
        Some(PriorSpec { ordered, ..base })
    }

    fn methods_dedup(&self) -> Vec<Method> {
        let mut m = self.methods.clone();
        m.sort();
        m.dedup();
        m
    }
}

/// One (parameter, method) cell. `al` and `cp` are only filled by interval
/// studies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McRow {
    pub parameter: &'static str,
    pub method: Method,
    pub ae: f64,
    pub mse: f64,
    pub al: Option<f64>,
    pub cp: Option<f64>,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub scheme: String,
    pub replications: usize,
    pub skipped: usize,
    pub rows: Vec<McRow>,
}

impl McReport {
    pub fn row(&self, parameter: &str, method: Method) -> Option<&McRow> {
        self.rows.iter().find(|r| r.parameter == parameter && r.method == method)
    }

    /// CSV with columns scheme, parameter, method, AE, MSE, AL, CP, skipped.
    /// Interval columns are empty for point studies.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["scheme", "parameter", "method", "AE", "MSE", "AL", "CP", "skipped"])
            .map_err(csv_err)?;
        let opt = |x: Option<f64>| x.map(sig6).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                self.scheme.clone(),
                r.parameter.to_string(),
                r.method.name().to_string(),
                sig6(r.ae),
                sig6(r.mse),
                opt(r.al),
                opt(r.cp),
                r.skipped.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

struct Outcome {
    estimate: JointParams,
    intervals: Option<[IntervalEstimate; 3]>,
}

fn run_method(sample: &JpcSample, config: &StudyConfig, method: Method, intervals: bool, rep: &RngStream) -> Result<Outcome> {
    let mut stream = rep.substream(method.stream_index());
    if let Some(prior) = config.prior(method) {
        let post = draw_posterior(sample, &prior, config.n_posterior, &mut stream)?;
        return Ok(Outcome {
            estimate: post.means()?,
            intervals: if intervals { Some(post.hpd(config.level)?) } else { None },
        });
    }
    match method {
        Method::Mle => {
            let fit = fit_mle(sample)?;
            let iv = if intervals { Some(asymptotic_ci(sample, &fit, config.level)?) } else { None };
            Ok(Outcome {
                estimate: fit.params,
                intervals: iv,
            })
        }
        Method::Bootstrap | Method::MleOrdered => {
            let ordered = method == Method::MleOrdered;
            if !intervals {
                let fit = if ordered { fit_mle_ordered(sample)? } else { fit_mle(sample)? };
                return Ok(Outcome {
                    estimate: fit.params,
                    intervals: None,
                });
            }
            let boot = bootstrap_ci(sample, config.level, config.b_bootstrap, ordered, &stream)?;
            Ok(Outcome {
                estimate: boot.fit.params,
                intervals: Some(boot.intervals),
            })
        }
        _ => unreachable!("Bayes methods are handled above"),
    }
}

/// `None` when the replication is skipped for every method.
fn replicate(config: &StudyConfig, methods: &[Method], index: u64, intervals: bool) -> Option<Vec<Outcome>> {
    let rep = RngStream::new(config.base_seed ^ mix64(index));
    let sample = simulate_jpc(&config.scheme, &config.truth, &mut rep.substream(0)).ok()?;
    if sample.k1() == 0 || sample.k2() == 0 {
        return None;
    }
    methods.iter().map(|&m| run_method(&sample, config, m, intervals, &rep).ok()).collect()
}

fn run(config: &StudyConfig, intervals: bool) -> Result<McReport> {
    config.validate()?;
    let methods = config.methods_dedup();
    let outcomes: Vec<Option<Vec<Outcome>>> = (0..config.replications as u64)
        .into_par_iter()
        .map(|i| replicate(config, &methods, i, intervals))
        .collect();
    let used: Vec<&Vec<Outcome>> = outcomes.iter().flatten().collect();
    let skipped = config.replications - used.len();
    if used.is_empty() {
        return Err(Error::StudyFailed {
            replications: config.replications,
        });
    }
    let n = used.len() as f64;
    let truth = config.truth.as_array();
    let mut rows = Vec::new();
    for (mi, &method) in methods.iter().enumerate() {
        for (pi, &parameter) in PARAMETERS.iter().enumerate() {
            let (mut sum, mut sq, mut len, mut hits) = (0.0, 0.0, 0.0, 0usize);
            for rep in &used {
                let o = &rep[mi];
                let est = o.estimate.as_array()[pi];
                sum += est;
                sq += (est - truth[pi]).powi(2);
                if let Some(iv) = &o.intervals {
                    len += iv[pi].width();
                    hits += iv[pi].contains(truth[pi]) as usize;
                }
            }
            rows.push(McRow {
                parameter,
                method,
                ae: sum / n,
                mse: sq / n,
                al: intervals.then_some(len / n),
                cp: intervals.then_some(hits as f64 / n),
                skipped,
            });
        }
    }
    Ok(McReport {
        scheme: config.scheme.label(),
        replications: config.replications,
        skipped,
        rows,
    })
}

/// AE and MSE of every requested point estimator. The bootstrap has no
/// point estimator of its own and reports the MLE it is centred on.
///
/// A replication is skipped, for all methods at once, when one group has no
/// failures or any requested estimator fails on it.
pub fn run_point_study(config: &StudyConfig) -> Result<McReport> {
    run(config, false)
}

/// AE, MSE, AL and CP. Intervals are asymptotic normal for `mle`,
/// percentile bootstrap for `bootstrap` and `mle-ordered`, and HPD for the
/// Bayes methods.
pub fn run_interval_study(config: &StudyConfig) -> Result<McReport> {
    run(config, true)
}
