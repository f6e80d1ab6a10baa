//! End-to-end experiments producing CSV reports, named recipes, and config files.

mod config;
mod recipes;
mod verbs;

pub use config::{load_subshift, run_config, ExperimentConfig, ExperimentKind};
pub use recipes::{recipe, RECIPES};
pub use verbs::{
    approx_quality_report, build_approximation, certify_report, decide_report, entropy_report, gap_report,
    stirling_report, sweep_report, w_phi_experiment, ApproxKind, WPhiSummary,
};

use std::fmt::Write;

use num::rational::Ratio;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupModel};

/// Fixed 9-decimal formatting, `inf`/`-inf` for infinities.
pub fn fmt_float(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.9}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A table plus the resolved configuration that produced it.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub name: String,
    pub config: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Report {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.config.push((key.into(), value.to_string()));
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// `# key = value` header lines, then the table.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# experiment = {}", self.name).unwrap();
        for (k, v) in &self.config {
            writeln!(out, "# {k} = {v}").unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| csv_cell(c)).collect();
            writeln!(out, "{}", cells.join(",")).unwrap();
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = format!("{}\n", self.name);
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            writeln!(out, "  {mark} {}: {}", c.name, c.detail).unwrap();
        }
        out
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// `1/4`, `3`, `0.001` or `1e-3`, exactly.
pub fn parse_ratio(text: &str) -> Result<Ratio<u64>> {
    let t = text.trim();
    let bad = || Error::InvalidParameter(format!("cannot read {t:?} as a nonnegative rational"));
    if let Some((n, d)) = t.split_once('/') {
        let n: u64 = n.trim().parse().map_err(|_| bad())?;
        let d: u64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    let (mantissa, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: u64 = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let pow = |e: u32| 10u64.checked_pow(e).ok_or_else(bad);
    if scale >= 0 {
        Ok(Ratio::from_integer(digits.checked_mul(pow(scale as u32)?).ok_or_else(bad)?))
    } else {
        Ok(Ratio::new(digits, pow((-scale) as u32)?))
    }
}

/// Comma- or space-separated list of positive integers.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    text.split([',', ' '])
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::InvalidParameter(format!("{s:?} is not a positive integer")))
        })
        .collect()
}

/// Group elements separated by spaces or `;` (e.g. `-1 0 1` or `(0,0);(1,0)`).
pub fn parse_elements(model: GroupModel, text: &str) -> Result<FiniteSubset> {
    let elems = text
        .split([';', ' '])
        .filter(|s| !s.is_empty())
        .map(|s| model.parse_element(s))
        .collect::<Result<Vec<_>>>()?;
    FiniteSubset::new(model, elems)
}
