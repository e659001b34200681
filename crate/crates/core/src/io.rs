//! Plain-text sample files.
//!
//! A JPC file holds a header `m n k`, a line `R: r1 ... rk` and then `k` lines
//! `t delta s`. A complete-data file holds one value per line (commas are also
//! accepted as separators). In both, `#` starts a comment and blank lines are
//! ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::jpc::{CensoringScheme, JpcObservation, JpcSample};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty, comment-stripped lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("cannot read {what} from `{tok}`")))
}

pub fn parse_jpc_str(text: &str) -> Result<JpcSample> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty sample file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(parse_err(hl, "header must be `m n k`"));
    }
    let m: usize = parse_num(fields[0], hl, "m")?;
    let n: usize = parse_num(fields[1], hl, "n")?;
    let k: usize = parse_num(fields[2], hl, "k")?;

    let (rl, rline) = lines
        .next()
        .ok_or_else(|| parse_err(hl + 1, "missing `R:` line"))?;
    let rest = rline
        .strip_prefix("R:")
        .ok_or_else(|| parse_err(rl, "expected a line starting with `R:`"))?;
    let removals = rest
        .split_whitespace()
        .map(|tok| parse_num::<usize>(tok, rl, "a withdrawal count"))
        .collect::<Result<Vec<_>>>()?;
    if removals.len() != k {
        return Err(parse_err(
            rl,
            format!("header says k = {k} but {} withdrawal counts follow", removals.len()),
        ));
    }

    let mut obs = Vec::with_capacity(k);
    let mut last_line = rl;
    for (ln, line) in lines {
        last_line = ln;
        if obs.len() == k {
            return Err(parse_err(ln, format!("more than k = {k} observation lines")));
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(parse_err(ln, "observation line must be `t delta s`"));
        }
        let t: f64 = parse_num(f[0], ln, "failure time")?;
        let from_group1 = match f[1] {
            "1" => true,
            "0" => false,
            other => return Err(parse_err(ln, format!("delta must be 0 or 1, got `{other}`"))),
        };
        let s: usize = parse_num(f[2], ln, "s")?;
        obs.push(JpcObservation {
            t,
            from_group1,
            withdrawn_group1: s,
        });
    }
    if obs.len() != k {
        return Err(parse_err(
            last_line,
            format!("expected {k} observation lines, found {}", obs.len()),
        ));
    }
    let scheme = CensoringScheme::new(m, n, removals)?;
    JpcSample::new(scheme, obs)
}

pub fn parse_jpc_file(path: impl AsRef<Path>) -> Result<JpcSample> {
    parse_jpc_str(&std::fs::read_to_string(path)?)
}

/// Canonical text form. Times use Rust's shortest round-trip formatting, so
/// parsing the output gives back the identical sample.
pub fn serialize_jpc(sample: &JpcSample) -> String {
    let scheme = sample.scheme();
    let mut out = format!("{} {} {}\nR:", scheme.m(), scheme.n(), scheme.k());
    for r in scheme.removals() {
        let _ = write!(out, " {r}");
    }
    out.push('\n');
    for o in sample.observations() {
        let _ = writeln!(out, "{} {} {}", o.t, u8::from(o.from_group1), o.withdrawn_group1);
    }
    out
}

pub fn write_jpc_file(path: impl AsRef<Path>, sample: &JpcSample) -> Result<()> {
    std::fs::write(path, serialize_jpc(sample))?;
    Ok(())
}

pub fn parse_complete_str(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (ln, line) in content_lines(text) {
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()) {
            if !tok.is_empty() {
                values.push(parse_num(tok, ln, "a value")?);
            }
        }
    }
    if values.is_empty() {
        return Err(parse_err(1, "no values found"));
    }
    Ok(values)
}

pub fn read_complete_file(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    parse_complete_str(&std::fs::read_to_string(path)?)
}
