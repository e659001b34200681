//! The `jpcw` command line.
//!
//! Results go to stdout as `name value ...` lines, diagnostics to stderr.
//! Exit codes: 0 success, 1 usage or I/O error, 2 MLE does not exist,
//! 3 improper posterior, 4 unreadable or invalid input file, 5 any other
//! estimation error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{analyze_complete_pair, analyze_jpc, AnalysisOptions};
use crate::bayes::{draw_posterior, PriorSpec, ShapeHyper};
use crate::error::{Error, Result};
use crate::fmt::sig6;
use crate::io::{parse_jpc_file, read_complete_file, serialize_jpc, write_jpc_file};
use crate::jpc::{simulate_jpc, CensoringScheme, JointParams, JpcSample};
use crate::mle::{asymptotic_ci, bootstrap_ci, fit_mle, fit_mle_ordered, IntervalEstimate};
use crate::rng::{BetaGammaHyper, RngStream};
use crate::study::{run_interval_study, run_point_study, StudyConfig};

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "JPC_SEED";
const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "jpcw",
    version,
    about = "Inference for two Weibull populations under joint progressive type-II censoring"
)]
struct Cli {
    /// Random seed; overrides the JPC_SEED environment variable.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate a censored sample and write it as a sample file.
    Simulate(SimulateArgs),
    /// Maximum likelihood fit with asymptotic intervals.
    Fit(FitArgs),
    /// Parametric percentile bootstrap intervals.
    Bootstrap(BootstrapArgs),
    /// Bayes estimates and HPD intervals by importance sampling.
    Bayes(BayesArgs),
    /// Complete-data pipeline for two samples: fits, K-S, LR test, Bayes checks.
    Analyze(AnalyzeArgs),
    /// Monte Carlo study from a JSON config, written as CSV.
    Study(StudyArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    /// Withdrawals, e.g. `7,0*18,15`.
    #[arg(long = "R")]
    removals: String,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    lambda1: f64,
    #[arg(long)]
    lambda2: f64,
    /// Output path; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleInput {
    /// Sample file (`m n k`, `R: ...`, then `t delta s` lines).
    file: PathBuf,
    /// Subtracted from every time before fitting.
    #[arg(long, default_value_t = 0.0)]
    shift: f64,
}

impl SampleInput {
    fn load(&self) -> Result<JpcSample> {
        let s = parse_jpc_file(&self.file)?;
        if self.shift == 0.0 {
            Ok(s)
        } else {
            s.shifted(self.shift)
        }
    }
}

#[derive(Args, Debug)]
struct FitArgs {
    #[command(flatten)]
    input: SampleInput,
    /// Impose lambda1 <= lambda2.
    #[arg(long)]
    ordered: bool,
    #[arg(long, default_value_t = 0.9)]
    level: f64,
}

#[derive(Args, Debug)]
struct BootstrapArgs {
    #[command(flatten)]
    input: SampleInput,
    #[arg(long = "B", default_value_t = 1000)]
    b: usize,
    #[arg(long, default_value_t = 0.9)]
    level: f64,
    #[arg(long)]
    ordered: bool,
}

#[derive(Args, Debug)]
struct BayesArgs {
    #[command(flatten)]
    input: SampleInput,
    #[arg(long, default_value_t = 0.0)]
    a0: f64,
    #[arg(long, default_value_t = 0.0)]
    b0: f64,
    #[arg(long, default_value_t = 0.0)]
    a1: f64,
    #[arg(long, default_value_t = 0.0)]
    a2: f64,
    /// Shape prior GA(a, b).
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    #[arg(long)]
    ordered: bool,
    #[arg(long, default_value_t = 10_000)]
    n_draws: usize,
    #[arg(long, default_value_t = 0.9)]
    level: f64,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// First complete sample (one value per line).
    file1: PathBuf,
    file2: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    shift: f64,
    /// Also analyze this censored sample file (shifted the same way).
    #[arg(long)]
    jpc: Option<PathBuf>,
    /// Posterior draws; 0 skips the Bayesian steps.
    #[arg(long, default_value_t = 10_000)]
    n_draws: usize,
    #[arg(long, default_value_t = 1000)]
    n_rep: usize,
    #[arg(long = "B", default_value_t = 1000)]
    b: usize,
}

#[derive(Args, Debug)]
struct StudyArgs {
    /// JSON study configuration.
    config: PathBuf,
    /// Also report interval lengths and coverage.
    #[arg(long)]
    intervals: bool,
    /// CSV output path; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

/// Parses `7,0*18,15` (a count followed by `*r` repeats `r`).
pub fn parse_removals(text: &str) -> Result<Vec<usize>> {
    let bad = |tok: &str| Error::Domain(format!("cannot read withdrawals from `{tok}`"));
    let mut out = Vec::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        match tok.split_once('*') {
            Some((r, times)) => {
                let r: usize = r.parse().map_err(|_| bad(tok))?;
                let times: usize = times.parse().map_err(|_| bad(tok))?;
                out.extend(std::iter::repeat_n(r, times));
            }
            None => out.push(tok.parse().map_err(|_| bad(tok))?),
        }
    }
    Ok(out)
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => 1,
        Error::NoMle { .. } => 2,
        Error::ImproperPosterior(_) => 3,
        Error::Parse { .. } | Error::Validation(_) => 4,
        _ => 5,
    }
}

fn seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn params_lines(out: &mut dyn Write, p: &JointParams) -> std::io::Result<()> {
    writeln!(out, "alpha {}", sig6(p.alpha))?;
    writeln!(out, "lambda1 {}", sig6(p.lambda1))?;
    writeln!(out, "lambda2 {}", sig6(p.lambda2))
}

fn interval_lines(out: &mut dyn Write, label: &str, iv: &[IntervalEstimate; 3]) -> std::io::Result<()> {
    for (name, i) in ["alpha", "lambda1", "lambda2"].iter().zip(iv) {
        writeln!(out, "{label} {name} {} {}", sig6(i.lower), sig6(i.upper))?;
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let seed = seed(cli.seed)?;
    let mut rng = RngStream::new(seed);
    match cli.command {
        Command::Simulate(a) => {
            let scheme = CensoringScheme::new(a.m, a.n, parse_removals(&a.removals)?)?;
            let params = JointParams::new(a.alpha, a.lambda1, a.lambda2)?;
            let sample = simulate_jpc(&scheme, &params, &mut rng)?;
            match a.output {
                Some(path) => write_jpc_file(path, &sample)?,
                None => out.write_all(serialize_jpc(&sample).as_bytes())?,
            }
        }
        Command::Fit(a) => {
            let sample = a.input.load()?;
            let fit = if a.ordered { fit_mle_ordered(&sample)? } else { fit_mle(&sample)? };
            params_lines(out, &fit.params)?;
            writeln!(out, "loglik {}", sig6(fit.loglik))?;
            if a.ordered {
                writeln!(out, "boundary {}", fit.boundary)?;
            } else {
                match asymptotic_ci(&sample, &fit, a.level) {
                    Ok(iv) => interval_lines(out, "ci", &iv)?,
                    Err(e) => writeln!(err, "warning: no asymptotic intervals: {e}")?,
                }
            }
        }
        Command::Bootstrap(a) => {
            let sample = a.input.load()?;
            let res = bootstrap_ci(&sample, a.level, a.b, a.ordered, &rng)?;
            params_lines(out, &res.fit.params)?;
            interval_lines(out, "ci", &res.intervals)?;
            writeln!(out, "skipped {}", res.skipped)?;
        }
        Command::Bayes(a) => {
            let sample = a.input.load()?;
            let prior = PriorSpec::new(
                BetaGammaHyper::new(a.a0, a.b0, a.a1, a.a2),
                ShapeHyper { a: a.a, b: a.b },
                a.ordered,
            )?;
            let post = draw_posterior(&sample, &prior, a.n_draws, &mut rng)?;
            params_lines(out, &post.means()?)?;
            interval_lines(out, "hpd", &post.hpd(a.level)?)?;
            writeln!(out, "ess {}", sig6(post.ess()))?;
            if post.low_ess_warning() {
                writeln!(err, "warning: effective sample size {} is below 1% of {} draws", sig6(post.ess()), a.n_draws)?;
            }
        }
        Command::Analyze(a) => {
            let opts = AnalysisOptions {
                n_draws: a.n_draws,
                n_rep: a.n_rep,
                b_bootstrap: a.b,
                ..AnalysisOptions::default()
            };
            let (x1, x2) = (read_complete_file(&a.file1)?, read_complete_file(&a.file2)?);
            let r = analyze_complete_pair(&x1, &x2, a.shift, &opts, &mut rng)?;
            for (i, s) in r.samples.iter().enumerate() {
                let g = i + 1;
                writeln!(out, "set{g} n {}", s.n)?;
                writeln!(out, "set{g} alpha {}", sig6(s.fit.alpha))?;
                writeln!(out, "set{g} lambda {}", sig6(s.fit.lambda))?;
                writeln!(out, "set{g} ks {}", sig6(s.ks))?;
                writeln!(out, "set{g} ks_p {}", sig6(s.ks_p_value))?;
                if let Some(b) = &s.bayes {
                    writeln!(out, "set{g} bayes_alpha {}", sig6(b.alpha))?;
                    writeln!(out, "set{g} bayes_lambda {}", sig6(b.lambda))?;
                    writeln!(out, "set{g} expected_ks {}", sig6(b.check.expected_discrepancy))?;
                    writeln!(out, "set{g} predictive_p {}", sig6(b.check.p_value))?;
                }
            }
            writeln!(out, "common alpha {}", sig6(r.common.alpha))?;
            writeln!(out, "common lambda1 {}", sig6(r.common.lambda1))?;
            writeln!(out, "common lambda2 {}", sig6(r.common.lambda2))?;
            writeln!(out, "common ks_p {} {}", sig6(r.common_ks_p_value[0]), sig6(r.common_ks_p_value[1]))?;
            writeln!(out, "common lr_statistic {}", sig6(r.lr.statistic))?;
            writeln!(out, "common lr_p {}", sig6(r.lr.p_value))?;
            if let Some(b) = &r.common_bayes {
                writeln!(out, "common bayes_alpha {}", sig6(b.means.alpha))?;
                writeln!(out, "common bayes_lambda1 {}", sig6(b.means.lambda1))?;
                writeln!(out, "common bayes_lambda2 {}", sig6(b.means.lambda2))?;
                writeln!(
                    out,
                    "common expected_ks {} {}",
                    sig6(b.checks[0].expected_discrepancy),
                    sig6(b.checks[1].expected_discrepancy)
                )?;
                writeln!(out, "common predictive_p {} {}", sig6(b.checks[0].p_value), sig6(b.checks[1].p_value))?;
                writeln!(out, "common ess {}", sig6(b.ess))?;
            }
            if let Some(path) = a.jpc {
                let sample = parse_jpc_file(path)?.shifted(a.shift)?;
                let j = analyze_jpc(&sample, &opts, &mut rng)?;
                writeln!(out, "jpc k1 {}", j.k1)?;
                writeln!(out, "jpc k2 {}", j.k2)?;
                let p = j.mle.params;
                writeln!(out, "jpc mle {} {} {}", sig6(p.alpha), sig6(p.lambda1), sig6(p.lambda2))?;
                let p = j.mle_ordered.params;
                writeln!(out, "jpc mle_ordered {} {} {}", sig6(p.alpha), sig6(p.lambda1), sig6(p.lambda2))?;
                if let Some(iv) = &j.asymptotic {
                    interval_lines(out, "jpc ci", iv)?;
                }
                if let Some(iv) = &j.bootstrap {
                    interval_lines(out, "jpc bootstrap", iv)?;
                }
                for (label, b) in [("bayes", &j.bayes), ("bayes_ordered", &j.bayes_ordered)] {
                    if let Some(b) = b {
                        let m = b.means;
                        writeln!(out, "jpc {label} {} {} {}", sig6(m.alpha), sig6(m.lambda1), sig6(m.lambda2))?;
                        interval_lines(out, &format!("jpc {label}_hpd"), &b.hpd)?;
                        writeln!(out, "jpc {label}_ess {}", sig6(b.ess))?;
                        if b.low_ess {
                            writeln!(err, "warning: {label} effective sample size {} is below 1%", sig6(b.ess))?;
                        }
                    }
                }
            }
        }
        Command::Study(a) => {
            let text = std::fs::read_to_string(&a.config)?;
            let mut config: StudyConfig = serde_json::from_str(&text).map_err(|e| Error::Parse {
                line: e.line(),
                msg: e.to_string(),
            })?;
            if cli.seed.is_some() {
                config.base_seed = seed;
            }
            let report = if a.intervals {
                run_interval_study(&config)?
            } else {
                run_point_study(&config)?
            };
            if report.skipped > 0 {
                writeln!(err, "{} of {} replications skipped", report.skipped, report.replications)?;
            }
            match a.output {
                Some(path) => report.write_csv(std::fs::File::create(path)?)?,
                None => report.write_csv(&mut *out)?,
            }
        }
    }
    Ok(())
}

/// Runs the command line `args` (program name first) and returns the exit
/// status.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
