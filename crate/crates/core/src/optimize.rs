//! One-dimensional maximization of unimodal functions through the sign of
//! their derivative.

use crate::error::{Error, Result};

pub(crate) const ALPHA_MIN: f64 = 1e-8;
pub(crate) const ALPHA_MAX: f64 = 1e8;
pub(crate) const REL_TOL: f64 = 1e-10;
pub(crate) const MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Maximum {
    pub x: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Locates the stationary point of a unimodal function on `(lower, upper)`
/// given its derivative. The bracket grows by doubling (or halving) from
/// `start` until the derivative changes sign, then bisection runs until the
/// bracket is narrower than `REL_TOL` relative to its midpoint.
pub(crate) fn unimodal_argmax(
    derivative: impl Fn(f64) -> f64,
    start: f64,
    lower: f64,
    upper: f64,
) -> Result<Maximum> {
    let mut iterations = 0;
    let (mut lo, mut hi);
    let mut x = start;
    if derivative(x) > 0.0 {
        lo = x;
        loop {
            x *= 2.0;
            iterations += 1;
            if x > upper {
                return Err(Error::NonConvergence {
                    iterations,
                    reason: format!("derivative still positive at {upper:e}"),
                });
            }
            if derivative(x) <= 0.0 {
                hi = x;
                break;
            }
            lo = x;
        }
    } else {
        hi = x;
        loop {
            x *= 0.5;
            iterations += 1;
            if x < lower {
                return Err(Error::NonConvergence {
                    iterations,
                    reason: format!("derivative still negative at {lower:e}"),
                });
            }
            if derivative(x) > 0.0 {
                lo = x;
                break;
            }
            hi = x;
        }
    }

    let mut bisections = 0;
    while bisections < MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo < REL_TOL * mid {
            return Ok(Maximum {
                x: mid,
                iterations: iterations + bisections,
                converged: true,
            });
        }
        if derivative(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        bisections += 1;
    }
    Ok(Maximum {
        x: 0.5 * (lo + hi),
        iterations: iterations + bisections,
        converged: false,
    })
}
