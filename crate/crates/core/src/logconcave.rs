//! Exact sampling from (piecewise) log-concave densities on `(support_lo, inf)`
//! by adaptive rejection from a piecewise-exponential envelope.
//!
//! The envelope is the upper hull of tangent lines to `ln f`. Tangents start at
//! the mode and at `mode * (1 -+ 0.5)`; every rejected proposal becomes a new
//! tangent until 64 points are in use. A target may declare breakpoints where
//! concavity fails (for instance a kink of a minimum of two sums); the support
//! is split there and each piece gets its own hull, so only concavity between
//! consecutive breakpoints is required.

use crate::error::{Error, Result};
use crate::rng::RngStream;

const MAX_POINTS: usize = 64;
const PROBE_LO: f64 = 1e-8;
const PROBE_HI: f64 = 1e8;
const MAX_PROPOSALS: u64 = 1_000_000;

/// Unnormalized log-density with its derivative.
pub trait LogConcaveTarget {
    fn log_density(&self, x: f64) -> f64;
    fn log_density_derivative(&self, x: f64) -> f64;

    /// Points where concavity may fail. The density must be log-concave on
    /// every interval between consecutive breakpoints.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Target assembled from closures.
pub struct FnTarget<F, D> {
    log_density: F,
    derivative: D,
    breakpoints: Vec<f64>,
}

impl<F, D> FnTarget<F, D>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    pub fn new(log_density: F, derivative: D) -> Self {
        Self {
            log_density,
            derivative,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }
}

impl<F, D> LogConcaveTarget for FnTarget<F, D>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    fn log_density(&self, x: f64) -> f64 {
        (self.log_density)(x)
    }

    fn log_density_derivative(&self, x: f64) -> f64 {
        (self.derivative)(x)
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.breakpoints.clone()
    }
}

#[derive(Debug, Clone, Copy)]
struct Tangent {
    x: f64,
    h: f64,
    slope: f64,
}

#[derive(Debug, Clone)]
struct Segment {
    lo: f64,
    hi: f64,
    tangents: Vec<Tangent>,
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    segment: usize,
    lo: f64,
    hi: f64,
    x0: f64,
    h0: f64,
    slope: f64,
}

impl Piece {
    fn envelope(&self, x: f64) -> f64 {
        self.h0 + self.slope * (x - self.x0)
    }

    fn log_mass(&self) -> f64 {
        let a = self.envelope(self.lo);
        if self.hi.is_infinite() {
            return a - (-self.slope).ln();
        }
        let width = self.hi - self.lo;
        if width <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let b = self.envelope(self.hi);
        let spread = (b - a).abs();
        if spread < 1e-12 {
            return width.ln() + 0.5 * (a + b);
        }
        a.max(b) + (-(-spread).exp_m1()).ln() - self.slope.abs().ln()
    }

    /// Inverse CDF of the normalized exponential envelope on this piece.
    fn quantile(&self, u: f64) -> f64 {
        let s = self.slope;
        if self.hi.is_infinite() {
            return self.lo + (-u).ln_1p() / s;
        }
        let width = self.hi - self.lo;
        if (s * width).abs() < 1e-12 {
            return self.lo + u * width;
        }
        let x = if s > 0.0 {
            self.hi + (u + (1.0 - u) * (-s * width).exp()).ln() / s
        } else {
            self.lo + (-u * -(s * width).exp_m1()).ln_1p() / s
        };
        x.clamp(self.lo, self.hi)
    }
}

/// Adaptive rejection sampler. Tangents added during sampling are kept, so
/// repeated draws from one sampler get cheaper.
pub struct LogConcaveSampler<'a, T: LogConcaveTarget + ?Sized> {
    target: &'a T,
    segments: Vec<Segment>,
    pieces: Vec<Piece>,
    cumulative: Vec<f64>,
    modes: Vec<f64>,
    proposals: u64,
    accepted: u64,
}

enum ModeLoc {
    Left(f64),
    Interior(f64),
    Right(f64),
}

fn nudge_up(x: f64) -> f64 {
    x + 1e-9 * x.abs().max(1e-6)
}

fn nudge_down(x: f64) -> f64 {
    x - 1e-9 * x.abs().max(1e-6)
}

impl<'a, T: LogConcaveTarget + ?Sized> LogConcaveSampler<'a, T> {
    pub fn new(target: &'a T, support_lo: f64) -> Result<Self> {
        if !(support_lo >= 0.0 && support_lo.is_finite()) {
            return Err(Error::Domain(format!(
                "support lower bound must be finite and >= 0, got {support_lo}"
            )));
        }
        let mut cuts: Vec<f64> = target
            .breakpoints()
            .into_iter()
            .filter(|&c| c.is_finite() && c > nudge_up(support_lo) && c < PROBE_HI)
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs());

        let mut bounds = Vec::with_capacity(cuts.len() + 2);
        bounds.push(support_lo);
        bounds.extend(cuts);
        bounds.push(f64::INFINITY);

        let mut sampler = Self {
            target,
            segments: Vec::new(),
            pieces: Vec::new(),
            cumulative: Vec::new(),
            modes: Vec::new(),
            proposals: 0,
            accepted: 0,
        };
        for w in bounds.windows(2) {
            let segment = sampler.init_segment(w[0], w[1])?;
            sampler.segments.push(segment);
        }
        sampler.rebuild();
        Ok(sampler)
    }

    /// Modes of the individual log-concave segments, left to right.
    pub fn segment_modes(&self) -> &[f64] {
        &self.modes
    }

    pub fn tangent_count(&self) -> usize {
        self.segments.iter().map(|s| s.tangents.len()).sum()
    }

    /// Fraction of envelope proposals accepted so far.
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            return 1.0;
        }
        self.accepted as f64 / self.proposals as f64
    }

    pub fn sample(&mut self, rng: &mut RngStream) -> Result<f64> {
        for _ in 0..MAX_PROPOSALS {
            self.proposals += 1;
            let pick = rng.uniform();
            let idx = self.cumulative.partition_point(|&c| c < pick).min(self.pieces.len() - 1);
            let piece = self.pieces[idx];
            let x = piece.quantile(rng.uniform());
            let env = piece.envelope(x);
            let h = self.target.log_density(x);
            if h.is_nan() {
                return Err(Error::Domain(format!("log-density is NaN at {x}")));
            }
            if h > env + 1e-7 * (1.0 + env.abs()) {
                return Err(Error::NotLogConcave { at: x });
            }
            if rng.uniform().ln() <= h - env {
                self.accepted += 1;
                return Ok(x);
            }
            if h.is_finite() && self.tangent_count() < MAX_POINTS {
                let slope = self.target.log_density_derivative(x);
                if slope.is_finite() {
                    let segment = &mut self.segments[piece.segment];
                    let pos = segment.tangents.partition_point(|t| t.x < x);
                    if segment.tangents.get(pos).is_none_or(|t| t.x != x) {
                        segment.tangents.insert(pos, Tangent { x, h, slope });
                        self.rebuild();
                    }
                }
            }
        }
        Err(Error::NonConvergence {
            iterations: MAX_PROPOSALS as usize,
            reason: "rejection sampler never accepted".into(),
        })
    }

    fn tangent(&self, x: f64) -> Option<Tangent> {
        let h = self.target.log_density(x);
        let slope = self.target.log_density_derivative(x);
        (h.is_finite() && slope.is_finite()).then_some(Tangent { x, h, slope })
    }

    fn locate_mode(&self, lo: f64, hi: f64) -> Result<ModeLoc> {
        let d = |x: f64| self.target.log_density_derivative(x);
        let a = nudge_up(lo).max(PROBE_LO);
        if d(a) <= 0.0 {
            return Ok(ModeLoc::Left(a));
        }
        let (mut left, mut right);
        if hi.is_finite() {
            let b = nudge_down(hi);
            if d(b) >= 0.0 {
                return Ok(ModeLoc::Right(b));
            }
            left = a;
            right = b;
        } else {
            left = a;
            let mut x = (2.0 * a).max(1.0);
            loop {
                if x > PROBE_HI {
                    return Err(Error::NonIntegrable(format!(
                        "log-density still increasing at {PROBE_HI:e}"
                    )));
                }
                if d(x) < 0.0 {
                    right = x;
                    break;
                }
                left = x;
                x *= 2.0;
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (left + right);
            if right - left < 1e-10 * mid {
                break;
            }
            if d(mid) > 0.0 {
                left = mid;
            } else {
                right = mid;
            }
        }
        Ok(ModeLoc::Interior(0.5 * (left + right)))
    }

    fn init_segment(&mut self, lo: f64, hi: f64) -> Result<Segment> {
        let d = |x: f64| self.target.log_density_derivative(x);
        let (mode, mut xs) = match self.locate_mode(lo, hi)? {
            ModeLoc::Interior(m) => {
                let below = if 0.5 * m > lo { 0.5 * m } else { 0.5 * (lo + m) };
                let above = if 1.5 * m < hi { 1.5 * m } else { 0.5 * (m + hi) };
                (m, vec![below, m, above])
            }
            ModeLoc::Left(a) => {
                let slope = d(a);
                let step = if slope < 0.0 { (1.0 / -slope).min(1e6) } else { 1.0 };
                let next = if a + step < hi { a + step } else { 0.5 * (a + hi) };
                (a, vec![a, next])
            }
            ModeLoc::Right(b) => (b, vec![0.5 * (lo + b), b]),
        };
        self.modes.push(mode);
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let mut tangents: Vec<Tangent> = xs.into_iter().filter_map(|x| self.tangent(x)).collect();

        if hi.is_infinite() {
            // the last piece needs a strictly decreasing tangent to be integrable
            loop {
                match tangents.last() {
                    Some(t) if t.slope < 0.0 => break,
                    Some(t) => {
                        let x = (2.0 * t.x).max(t.x + 1.0);
                        if x > PROBE_HI {
                            return Err(Error::NonIntegrable(format!(
                                "no decreasing tangent found below {PROBE_HI:e}"
                            )));
                        }
                        match self.tangent(x) {
                            Some(t) => tangents.push(t),
                            None => {
                                return Err(Error::NonIntegrable(format!(
                                    "log-density undefined at {x}"
                                )))
                            }
                        }
                    }
                    None => {
                        return Err(Error::NonIntegrable(
                            "log-density is not finite near the mode".into(),
                        ))
                    }
                }
            }
        }
        if tangents.is_empty() {
            return Err(Error::NonIntegrable(format!(
                "log-density is not finite anywhere probed on ({lo}, {hi})"
            )));
        }
        Ok(Segment { lo, hi, tangents })
    }

    fn rebuild(&mut self) {
        self.pieces.clear();
        for (si, segment) in self.segments.iter().enumerate() {
            let ts = &segment.tangents;
            let mut left = segment.lo;
            for i in 0..ts.len() {
                let right = if i + 1 == ts.len() {
                    segment.hi
                } else {
                    hull_intersection(&ts[i], &ts[i + 1])
                };
                self.pieces.push(Piece {
                    segment: si,
                    lo: left,
                    hi: right,
                    x0: ts[i].x,
                    h0: ts[i].h,
                    slope: ts[i].slope,
                });
                left = right;
            }
        }
        let log_masses: Vec<f64> = self.pieces.iter().map(Piece::log_mass).collect();
        let top = log_masses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut acc = 0.0;
        self.cumulative = log_masses
            .iter()
            .map(|lm| {
                acc += (lm - top).exp();
                acc
            })
            .collect();
        for c in &mut self.cumulative {
            *c /= acc;
        }
    }
}

fn hull_intersection(a: &Tangent, b: &Tangent) -> f64 {
    let denom = a.slope - b.slope;
    let z = (b.h - a.h - b.x * b.slope + a.x * a.slope) / denom;
    if denom > 0.0 && z.is_finite() {
        z.clamp(a.x, b.x)
    } else {
        0.5 * (a.x + b.x)
    }
}

/// Single exact draw; builds a fresh envelope each call.
pub fn sample_log_concave<T: LogConcaveTarget + ?Sized>(
    target: &T,
    support_lo: f64,
    rng: &mut RngStream,
) -> Result<f64> {
    LogConcaveSampler::new(target, support_lo)?.sample(rng)
}
