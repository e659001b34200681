//! Seedable random generation for every distribution the estimators draw from.
//!
//! [`RngStream`] is a counter-based generator: output number `c` of a stream
//! with seed `s` is `mix64(mix64(s) + c * GOLDEN)`, where `mix64` is the
//! SplitMix64 finalizer. The state is just `(seed, counter)`, so a stream can be
//! reconstructed anywhere, and sub-streams are derived by hashing an index into
//! a fresh seed. It implements [`rand::RngCore`], so `rand_distr` samplers can
//! be driven from it directly.

use rand::RngCore;
use rand_distr::{Beta, Distribution, Gamma, Hypergeometric};

use crate::error::{check_positive, Error, Result};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Reproducible random stream identified by `(seed, counter)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    counter: u64,
    key: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self::with_counter(seed, 0)
    }

    /// Stream positioned at `counter`; the next output is number `counter`.
    pub fn with_counter(seed: u64, counter: u64) -> Self {
        Self {
            seed,
            counter,
            key: mix64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Independent child stream number `index`. Children depend only on the
    /// parent's seed, never on how far the parent has advanced.
    pub fn substream(&self, index: u64) -> RngStream {
        RngStream::new(mix64(self.key ^ mix64(index.wrapping_add(GOLDEN))))
    }

    /// Uniform draw on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let out = mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)));
        self.counter = self.counter.wrapping_add(1);
        out
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}

/// Hyperparameters `(a0, b0, a1, a2)` of the Beta-Gamma law: the total rate is
/// GA(a0, b0) and the group-1 share is Beta(a1, a2), independently.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BetaGammaHyper {
    pub a0: f64,
    pub b0: f64,
    pub a1: f64,
    pub a2: f64,
}

impl BetaGammaHyper {
    pub fn new(a0: f64, b0: f64, a1: f64, a2: f64) -> Self {
        Self { a0, b0, a1, a2 }
    }

    /// Sampling needs every hyperparameter strictly positive.
    pub fn validate(&self) -> Result<()> {
        check_positive("a0", self.a0)?;
        check_positive("b0", self.b0)?;
        check_positive("a1", self.a1)?;
        check_positive("a2", self.a2)
    }

    /// Mean of each component: `a0 a_i / (b0 (a1 + a2))`.
    pub fn mean(&self) -> (f64, f64) {
        let c = self.a0 / (self.b0 * (self.a1 + self.a2));
        (c * self.a1, c * self.a2)
    }

    /// Variance of each component.
    pub fn variance(&self) -> (f64, f64) {
        let s = self.a1 + self.a2;
        let var = |ai: f64| {
            let m = self.a0 * ai / (self.b0 * s);
            m * ((ai + 1.0) * (self.a0 + 1.0) / (self.b0 * (s + 1.0)) - self.a0 * ai / (self.b0 * s))
        };
        (var(self.a1), var(self.a2))
    }
}

/// Inverse-CDF map from `u` in (0, 1) to WE(alpha, lambda), whose CDF is
/// `1 - exp(-lambda t^alpha)`.
pub fn weibull_quantile(u: f64, alpha: f64, lambda: f64) -> f64 {
    (-(-u).ln_1p() / lambda).powf(1.0 / alpha)
}

pub fn sample_weibull(alpha: f64, lambda: f64, rng: &mut RngStream) -> Result<f64> {
    check_positive("alpha", alpha)?;
    check_positive("lambda", lambda)?;
    Ok(weibull_quantile(rng.uniform(), alpha, lambda))
}

/// GA(shape, rate). Shape 0 is reserved for improper priors and is rejected.
pub fn sample_gamma(shape: f64, rate: f64, rng: &mut RngStream) -> Result<f64> {
    check_positive("gamma shape", shape)?;
    check_positive("gamma rate", rate)?;
    let dist = Gamma::new(shape, 1.0 / rate).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(dist.sample(rng))
}

pub fn sample_beta(a: f64, b: f64, rng: &mut RngStream) -> Result<f64> {
    check_positive("beta a", a)?;
    check_positive("beta b", b)?;
    let dist = Beta::new(a, b).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(dist.sample(rng))
}

/// Draws `(p * lambda, (1 - p) * lambda)` with `lambda ~ GA(a0, b0)` and
/// `p ~ Beta(a1, a2)`.
pub fn sample_beta_gamma(hyper: &BetaGammaHyper, rng: &mut RngStream) -> Result<(f64, f64)> {
    hyper.validate()?;
    let total_dist = Gamma::new(hyper.a0, 1.0 / hyper.b0).map_err(|e| Error::Domain(e.to_string()))?;
    let share_dist = Beta::new(hyper.a1, hyper.a2).map_err(|e| Error::Domain(e.to_string()))?;
    loop {
        let total = total_dist.sample(rng);
        let p = share_dist.sample(rng);
        let pair = (p * total, (1.0 - p) * total);
        // underflow to exactly 0 is possible for extreme hyperparameters
        if pair.0 > 0.0 && pair.1 > 0.0 {
            return Ok(pair);
        }
    }
}

/// Sorted Beta-Gamma draw `(min, max)`. Exact ties are redrawn so the output
/// is strictly increasing.
pub fn sample_ordered_beta_gamma(hyper: &BetaGammaHyper, rng: &mut RngStream) -> Result<(f64, f64)> {
    loop {
        let (x, y) = sample_beta_gamma(hyper, rng)?;
        if x < y {
            return Ok((x, y));
        }
        if y < x {
            return Ok((y, x));
        }
    }
}

/// Number of population-1 items among `draws` taken without replacement from
/// `pop1 + pop2` items.
pub fn sample_hypergeometric(pop1: usize, pop2: usize, draws: usize, rng: &mut RngStream) -> Result<usize> {
    let total = pop1 + pop2;
    if draws > total {
        return Err(Error::Domain(format!(
            "cannot draw {draws} items from a population of {total}"
        )));
    }
    if draws == 0 || pop1 == 0 {
        return Ok(0);
    }
    if pop2 == 0 {
        return Ok(draws);
    }
    if draws == total {
        return Ok(pop1);
    }
    let dist = Hypergeometric::new(total as u64, pop1 as u64, draws as u64)
        .map_err(|e| Error::Domain(e.to_string()))?;
    Ok(dist.sample(rng) as usize)
}
