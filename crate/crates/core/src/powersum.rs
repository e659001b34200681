//! Weighted power sums `g(alpha) = sum_j c_j t_j^alpha` with `c_j >= 0`.
//!
//! U, V, their total and the complete-sample scale sums are all of this form.
//! Derivative-based routines work with `ln g`, `g'/g` and `g''/g`, which are
//! evaluated with a max-shift so that large shapes never overflow.

/// Exponent magnitude beyond which plain summation switches to log domain.
pub(crate) const OVERFLOW_GUARD: f64 = 700.0;

#[derive(Debug, Clone)]
pub(crate) struct PowerSum {
    coef: Vec<f64>,
    log_t: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PowerMoments {
    /// `ln g(alpha)`; `-inf` when every coefficient is zero.
    pub log_value: f64,
    /// `g'(alpha) / g(alpha)`
    pub d1: f64,
    /// `g''(alpha) / g(alpha)`
    pub d2: f64,
}

impl PowerSum {
    /// Builds from `(coefficient, t)` pairs; zero coefficients are dropped.
    pub fn new(terms: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let (coef, log_t) = terms
            .into_iter()
            .filter(|&(c, _)| c > 0.0)
            .map(|(c, t)| (c, t.ln()))
            .unzip();
        Self { coef, log_t }
    }

    pub fn value(&self, alpha: f64) -> f64 {
        let extreme = self
            .log_t
            .iter()
            .map(|lt| (alpha * lt).abs())
            .fold(0.0, f64::max);
        if extreme > OVERFLOW_GUARD {
            self.log_value(alpha).exp()
        } else {
            self.coef
                .iter()
                .zip(&self.log_t)
                .map(|(c, lt)| c * (alpha * lt).exp())
                .sum()
        }
    }

    pub fn log_value(&self, alpha: f64) -> f64 {
        self.moments(alpha).log_value
    }

    pub fn moments(&self, alpha: f64) -> PowerMoments {
        let shift = self
            .log_t
            .iter()
            .map(|lt| alpha * lt)
            .fold(f64::NEG_INFINITY, f64::max);
        if shift == f64::NEG_INFINITY {
            return PowerMoments {
                log_value: f64::NEG_INFINITY,
                d1: 0.0,
                d2: 0.0,
            };
        }
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for (c, lt) in self.coef.iter().zip(&self.log_t) {
            let e = c * (alpha * lt - shift).exp();
            s0 += e;
            s1 += e * lt;
            s2 += e * lt * lt;
        }
        PowerMoments {
            log_value: shift + s0.ln(),
            d1: s1 / s0,
            d2: s2 / s0,
        }
    }
}
