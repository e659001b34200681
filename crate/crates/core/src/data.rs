//! Bundled carbon-fiber strength data.
//!
//! Two complete samples of single-fiber tensile strength (GPa) at gauge
//! lengths 20 mm and 10 mm, and a joint progressively censored sample built
//! from them (k = 20, R = 4 at the first 19 failures and 36 at the last).
//! The usual analysis subtracts [`FIBER_SHIFT`] from every value first.
//!
//! The first 10 mm value is 1.901; it also appears in the censored sample as
//! the first group-2 failure.

use crate::error::Result;
use crate::io::{parse_complete_str, parse_jpc_str};
use crate::jpc::JpcSample;

pub const FIBER_SHIFT: f64 = 0.75;

pub const FIBER_20MM_TEXT: &str = include_str!("../data/fiber_20mm.txt");
pub const FIBER_10MM_TEXT: &str = include_str!("../data/fiber_10mm.txt");
pub const FIBER_JPC_TEXT: &str = include_str!("../data/fiber_jpc.txt");

/// 69 strengths at gauge length 20 mm, unshifted.
pub fn fiber_20mm() -> Vec<f64> {
    parse_complete_str(FIBER_20MM_TEXT).expect("bundled data parses")
}

/// 63 strengths at gauge length 10 mm, unshifted.
pub fn fiber_10mm() -> Vec<f64> {
    parse_complete_str(FIBER_10MM_TEXT).expect("bundled data parses")
}

/// The censored sample with raw times.
pub fn fiber_jpc_raw() -> JpcSample {
    parse_jpc_str(FIBER_JPC_TEXT).expect("bundled data parses")
}

/// The censored sample with [`FIBER_SHIFT`] subtracted.
pub fn fiber_jpc() -> Result<JpcSample> {
    fiber_jpc_raw().shifted(FIBER_SHIFT)
}
