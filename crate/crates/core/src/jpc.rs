//! Joint progressively censored samples from two Weibull groups.
//!
//! `m` units of group 1 and `n` units of group 2 go on test together. At the
//! j-th failure, `R_j` of the pooled survivors are withdrawn at random, `s_j`
//! of them from group 1. The test stops at the k-th failure, where everything
//! left is withdrawn.

use crate::error::{check_positive, Error, Result};
use crate::powersum::PowerSum;
use crate::rng::{sample_hypergeometric, sample_weibull, RngStream};

/// Group sizes and the withdrawal count at every failure.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "SchemeRepr", into = "SchemeRepr")]
pub struct CensoringScheme {
    m: usize,
    n: usize,
    removals: Vec<usize>,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct SchemeRepr {
    m: usize,
    n: usize,
    #[serde(rename = "R")]
    removals: Vec<usize>,
}

impl TryFrom<SchemeRepr> for CensoringScheme {
    type Error = Error;

    fn try_from(r: SchemeRepr) -> Result<Self> {
        CensoringScheme::new(r.m, r.n, r.removals)
    }
}

impl From<CensoringScheme> for SchemeRepr {
    fn from(s: CensoringScheme) -> Self {
        SchemeRepr {
            m: s.m,
            n: s.n,
            removals: s.removals,
        }
    }
}

impl CensoringScheme {
    pub fn new(m: usize, n: usize, removals: Vec<usize>) -> Result<Self> {
        let k = removals.len();
        if m == 0 || n == 0 {
            return Err(Error::Validation(format!(
                "group sizes must be positive (m = {m}, n = {n})"
            )));
        }
        if k == 0 || k > m + n {
            return Err(Error::Validation(format!(
                "number of failures k = {k} must lie in 1..={}",
                m + n
            )));
        }
        let withdrawn: usize = removals.iter().sum();
        if withdrawn != m + n - k {
            return Err(Error::Validation(format!(
                "withdrawals sum to {withdrawn}, expected m + n - k = {}",
                m + n - k
            )));
        }
        Ok(Self { m, n, removals })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.removals.len()
    }

    pub fn removals(&self) -> &[usize] {
        &self.removals
    }

    /// Compact label such as `k=20,R=(7,0*18,15)`.
    pub fn label(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.removals.len() {
            let r = self.removals[i];
            let mut run = 1;
            while i + run < self.removals.len() && self.removals[i + run] == r {
                run += 1;
            }
            if run > 1 {
                parts.push(format!("{r}*{run}"));
            } else {
                parts.push(r.to_string());
            }
            i += run;
        }
        format!("k={},R=({})", self.k(), parts.join(","))
    }
}

/// One recorded failure: its time, its group, and how many of the units
/// withdrawn right after it came from group 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JpcObservation {
    pub t: f64,
    pub from_group1: bool,
    pub withdrawn_group1: usize,
}

/// Common shape and the two group rates of `WE(alpha, lambda_i)`, whose
/// density is `alpha lambda x^(alpha-1) exp(-lambda x^alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct JointParams {
    pub alpha: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl JointParams {
    pub fn new(alpha: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        check_positive("alpha", alpha)?;
        check_positive("lambda1", lambda1)?;
        check_positive("lambda2", lambda2)?;
        Ok(Self {
            alpha,
            lambda1,
            lambda2,
        })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.alpha, self.lambda1, self.lambda2]
    }
}

/// A validated joint progressively censored sample.
#[derive(Debug, Clone, PartialEq)]
pub struct JpcSample {
    scheme: CensoringScheme,
    obs: Vec<JpcObservation>,
}

impl JpcSample {
    pub fn new(scheme: CensoringScheme, obs: Vec<JpcObservation>) -> Result<Self> {
        let k = scheme.k();
        if obs.len() != k {
            return Err(Error::Validation(format!(
                "scheme has k = {k} failures but {} observations were given",
                obs.len()
            )));
        }
        let (mut alive1, mut alive2) = (scheme.m as i64, scheme.n as i64);
        let mut prev = 0.0;
        for (j, (o, &r)) in obs.iter().zip(&scheme.removals).enumerate() {
            if !(o.t.is_finite() && o.t > 0.0) {
                return Err(Error::Validation(format!(
                    "failure time at stage {} must be positive and finite, got {}",
                    j + 1,
                    o.t
                )));
            }
            if j > 0 && o.t <= prev {
                return Err(Error::Validation(format!(
                    "failure times must be strictly increasing (stage {}: {} after {prev})",
                    j + 1,
                    o.t
                )));
            }
            prev = o.t;
            if o.withdrawn_group1 > r {
                return Err(Error::Validation(format!(
                    "stage {}: s = {} exceeds R = {r}",
                    j + 1,
                    o.withdrawn_group1
                )));
            }
            if o.from_group1 {
                alive1 -= 1;
            } else {
                alive2 -= 1;
            }
            alive1 -= o.withdrawn_group1 as i64;
            alive2 -= (r - o.withdrawn_group1) as i64;
            if alive1 < 0 || alive2 < 0 {
                return Err(Error::Validation(format!(
                    "stage {}: more group-{} units failed or withdrawn than were on test",
                    j + 1,
                    if alive1 < 0 { 1 } else { 2 }
                )));
            }
        }
        if alive1 != 0 || alive2 != 0 {
            return Err(Error::Validation(format!(
                "unit accounting does not close: {alive1} group-1 and {alive2} group-2 units unaccounted for"
            )));
        }
        Ok(Self { scheme, obs })
    }

    /// Two complete samples as one uncensored JPC sample (`R_j = 0`, `k = m + n`).
    /// Tied times are separated by `1e-9` steps in pooled order; the
    /// likelihood is insensitive to this but the ordering invariant needs it.
    pub fn from_complete_pair(group1: &[f64], group2: &[f64]) -> Result<Self> {
        let mut pooled: Vec<(f64, bool)> = group1
            .iter()
            .map(|&t| (t, true))
            .chain(group2.iter().map(|&t| (t, false)))
            .collect();
        pooled.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut prev = f64::NEG_INFINITY;
        let obs = pooled
            .into_iter()
            .map(|(t, from_group1)| {
                let t = if t <= prev { prev + 1e-9 } else { t };
                prev = t;
                JpcObservation {
                    t,
                    from_group1,
                    withdrawn_group1: 0,
                }
            })
            .collect::<Vec<_>>();
        let scheme = CensoringScheme::new(group1.len(), group2.len(), vec![0; obs.len()])?;
        Self::new(scheme, obs)
    }

    pub fn scheme(&self) -> &CensoringScheme {
        &self.scheme
    }

    pub fn observations(&self) -> &[JpcObservation] {
        &self.obs
    }

    pub fn k(&self) -> usize {
        self.obs.len()
    }

    /// Failures from group 1.
    pub fn k1(&self) -> usize {
        self.obs.iter().filter(|o| o.from_group1).count()
    }

    pub fn k2(&self) -> usize {
        self.k() - self.k1()
    }

    /// Units of group 2 withdrawn at stage `j` (`w_j = R_j - s_j`).
    pub fn withdrawn_group2(&self, j: usize) -> usize {
        self.scheme.removals[j] - self.obs[j].withdrawn_group1
    }

    pub fn sum_log_t(&self) -> f64 {
        self.obs.iter().map(|o| o.t.ln()).sum()
    }

    /// Exchanges the roles of the two groups.
    pub fn swap_groups(&self) -> JpcSample {
        let obs = self
            .obs
            .iter()
            .zip(&self.scheme.removals)
            .map(|(o, &r)| JpcObservation {
                t: o.t,
                from_group1: !o.from_group1,
                withdrawn_group1: r - o.withdrawn_group1,
            })
            .collect();
        JpcSample {
            scheme: CensoringScheme {
                m: self.scheme.n,
                n: self.scheme.m,
                removals: self.scheme.removals.clone(),
            },
            obs,
        }
    }

    /// Multiplies every failure time by `c > 0`.
    pub fn scale_times(&self, c: f64) -> Result<JpcSample> {
        check_positive("scale factor", c)?;
        let obs = self.obs.iter().map(|o| JpcObservation { t: o.t * c, ..*o }).collect();
        JpcSample::new(self.scheme.clone(), obs)
    }

    /// Subtracts `shift` from every failure time.
    pub fn shifted(&self, shift: f64) -> Result<JpcSample> {
        let obs = self.obs.iter().map(|o| JpcObservation { t: o.t - shift, ..*o }).collect();
        JpcSample::new(self.scheme.clone(), obs)
    }

    pub(crate) fn stats(&self) -> SufficientStats {
        SufficientStats::new(self)
    }
}

/// Power sums and counts that the likelihood depends on.
#[derive(Debug, Clone)]
pub(crate) struct SufficientStats {
    pub u: PowerSum,
    pub v: PowerSum,
    /// `sum_j (R_j + 1) t_j^alpha = U + V`
    pub total: PowerSum,
    pub k1: usize,
    pub k2: usize,
    pub sum_log_t: f64,
}

impl SufficientStats {
    fn new(sample: &JpcSample) -> Self {
        let obs = &sample.obs;
        let removals = &sample.scheme.removals;
        let u = PowerSum::new(
            obs.iter()
                .map(|o| ((o.withdrawn_group1 + usize::from(o.from_group1)) as f64, o.t)),
        );
        let v = PowerSum::new(obs.iter().zip(removals).map(|(o, &r)| {
            ((r - o.withdrawn_group1 + usize::from(!o.from_group1)) as f64, o.t)
        }));
        let total = PowerSum::new(obs.iter().zip(removals).map(|(o, &r)| ((r + 1) as f64, o.t)));
        Self {
            u,
            v,
            total,
            k1: sample.k1(),
            k2: sample.k2(),
            sum_log_t: sample.sum_log_t(),
        }
    }

    pub fn k(&self) -> usize {
        self.k1 + self.k2
    }
}

/// `U(alpha) = sum_j s_j t_j^alpha + sum_{group-1 failures} t_j^alpha`.
/// At `alpha = 0` this counts the group-1 units, `m`.
pub fn u_stat(sample: &JpcSample, alpha: f64) -> f64 {
    sample.stats().u.value(alpha)
}

/// `V(alpha) = sum_j w_j t_j^alpha + sum_{group-2 failures} t_j^alpha`.
pub fn v_stat(sample: &JpcSample, alpha: f64) -> f64 {
    sample.stats().v.value(alpha)
}

/// `W(alpha) = min(U(alpha), V(alpha))`.
pub fn w_stat(sample: &JpcSample, alpha: f64) -> f64 {
    let s = sample.stats();
    s.u.value(alpha).min(s.v.value(alpha))
}

/// Log-likelihood without its additive constant:
/// `k ln a + k1 ln l1 + k2 ln l2 + (a - 1) sum ln t - l1 U(a) - l2 V(a)`.
pub fn log_likelihood(sample: &JpcSample, params: &JointParams) -> f64 {
    log_likelihood_with(&sample.stats(), params)
}

pub(crate) fn log_likelihood_with(stats: &SufficientStats, p: &JointParams) -> f64 {
    let rate_term = |count: usize, lambda: f64| {
        if count == 0 {
            0.0
        } else {
            count as f64 * lambda.ln()
        }
    };
    stats.k() as f64 * p.alpha.ln() + rate_term(stats.k1, p.lambda1) + rate_term(stats.k2, p.lambda2)
        + (p.alpha - 1.0) * stats.sum_log_t
        - p.lambda1 * stats.u.value(p.alpha)
        - p.lambda2 * stats.v.value(p.alpha)
}

fn draw_distinct(alpha: f64, lambda: f64, taken: &[f64], rng: &mut RngStream) -> Result<f64> {
    loop {
        let t = sample_weibull(alpha, lambda, rng)?;
        if t > 0.0 && !taken.contains(&t) {
            return Ok(t);
        }
    }
}

/// Runs one joint progressive censoring experiment.
pub fn simulate_jpc(scheme: &CensoringScheme, params: &JointParams, rng: &mut RngStream) -> Result<JpcSample> {
    let mut alive1: Vec<f64> = Vec::with_capacity(scheme.m);
    for _ in 0..scheme.m {
        let t = draw_distinct(params.alpha, params.lambda1, &alive1, rng)?;
        alive1.push(t);
    }
    let mut alive2: Vec<f64> = Vec::with_capacity(scheme.n);
    for _ in 0..scheme.n {
        let t = loop {
            let t = draw_distinct(params.alpha, params.lambda2, &alive2, rng)?;
            if !alive1.contains(&t) {
                break t;
            }
        };
        alive2.push(t);
    }

    let argmin = |v: &[f64]| {
        v.iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, &t)| (i, t))
    };

    let mut obs = Vec::with_capacity(scheme.k());
    for &r in &scheme.removals {
        let (from_group1, t) = match (argmin(&alive1), argmin(&alive2)) {
            (Some((i, a)), Some((_, b))) if a < b => {
                alive1.swap_remove(i);
                (true, a)
            }
            (Some((i, a)), None) => {
                alive1.swap_remove(i);
                (true, a)
            }
            (_, Some((i, b))) => {
                alive2.swap_remove(i);
                (false, b)
            }
            (None, None) => unreachable!("scheme invariant guarantees survivors"),
        };
        let s = sample_hypergeometric(alive1.len(), alive2.len(), r, rng)?;
        withdraw_random(&mut alive1, s, rng);
        withdraw_random(&mut alive2, r - s, rng);
        obs.push(JpcObservation {
            t,
            from_group1,
            withdrawn_group1: s,
        });
    }
    JpcSample::new(scheme.clone(), obs)
}

fn withdraw_random(units: &mut Vec<f64>, count: usize, rng: &mut RngStream) {
    for _ in 0..count {
        let idx = ((rng.uniform() * units.len() as f64) as usize).min(units.len() - 1);
        units.swap_remove(idx);
    }
}
