//! Line-based experiment files:
//!
//! ```text
//! # golden mean plateau
//! experiment = entropy
//! subshift = preset:golden-mean
//! d = 12, 18
//! delta = 1/1000
//! eps = 1/8
//! seed = 1
//! output = plateau.csv
//! ```
//!
//! Subshift and rule values are `preset:<name>` or a path relative to the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num::rational::Ratio;

use crate::automaton::{LocalRule, DEFAULT_RULE_BUDGET};
use crate::entropy::{CountMode, EstimateOptions};
use crate::error::{Error, Result};
use crate::experiment::{
    approx_quality_report, build_approximation, certify_report, decide_report, entropy_report, gap_report,
    parse_elements, parse_ratio, parse_sizes, recipe, stirling_report, sweep_report, ApproxKind, Report,
};
use crate::group::GroupModel;
use crate::io::{parse_rule_file, parse_subshift_file, preset};
use crate::shift::Subshift;

const KEY_VALUE: &str = "`<key> = <value>`";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Entropy,
    Gap,
    Sweep,
    Decide,
    Certify,
    Stirling,
    ApproxQuality,
    Recipe,
}

impl ExperimentKind {
    const ALL: [(&'static str, ExperimentKind); 8] = [
        ("entropy", ExperimentKind::Entropy),
        ("gap", ExperimentKind::Gap),
        ("sweep", ExperimentKind::Sweep),
        ("decide", ExperimentKind::Decide),
        ("certify", ExperimentKind::Certify),
        ("stirling", ExperimentKind::Stirling),
        ("approx-quality", ExperimentKind::ApproxQuality),
        ("recipe", ExperimentKind::Recipe),
    ];

    /// Keys accepted besides `experiment`, `seed` and `output`.
    fn keys(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Entropy => &["subshift", "d", "delta", "eps", "perturbation", "radius", "upper_n", "mode"],
            ExperimentKind::Gap => &["x", "y", "d", "delta", "eps", "margin"],
            ExperimentKind::Sweep => &["subshift", "memory", "budget"],
            ExperimentKind::Decide => &["subshift", "rule"],
            ExperimentKind::Certify => &["subshift", "delta", "budget", "margin"],
            ExperimentKind::Stirling => &["gamma", "span"],
            ExperimentKind::ApproxQuality => &["group", "construction", "d", "radius", "test"],
            ExperimentKind::Recipe => &["name"],
        }
    }

    fn required(self) -> &'static [&'static str] {
        match self {
            ExperimentKind::Entropy => &["subshift", "d"],
            ExperimentKind::Gap => &["x", "y", "d"],
            ExperimentKind::Sweep => &["subshift", "memory"],
            ExperimentKind::Decide => &["subshift", "rule"],
            ExperimentKind::Certify => &["subshift", "delta", "budget"],
            ExperimentKind::Stirling => &["gamma"],
            ExperimentKind::ApproxQuality => &["group", "construction", "d"],
            ExperimentKind::Recipe => &["name"],
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, k)| *k)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown experiment kind {s:?}")))
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = Self::ALL.iter().find(|(_, k)| k == self).unwrap().0;
        f.write_str(name)
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Parameter values with the line they came from.
    pub params: BTreeMap<String, (String, usize)>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    /// Directory relative paths resolve against.
    pub base: PathBuf,
}

impl ExperimentConfig {
    pub fn parse(text: &str, base: impl Into<PathBuf>) -> Result<Self> {
        let base = base.into();
        let mut kind = None;
        let mut raw: Vec<(usize, String, String)> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::parse(n, format!("no `=` in {line:?}"), KEY_VALUE));
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(Error::parse(n, "empty key or value", KEY_VALUE));
            }
            if raw.iter().any(|(_, key, _)| key == k) {
                return Err(Error::parse(n, format!("duplicate key {k:?}"), KEY_VALUE));
            }
            if k == "experiment" {
                kind = Some(v.parse::<ExperimentKind>().map_err(|e| Error::parse(n, e.to_string(), EXPERIMENT))?);
            }
            raw.push((n, k.to_string(), v.to_string()));
        }
        let kind = kind.ok_or_else(|| Error::parse(1, "missing `experiment` key", EXPERIMENT))?;
        let mut cfg = ExperimentConfig { kind, params: BTreeMap::new(), output: None, seed: 0, base };
        for (n, k, v) in raw {
            match k.as_str() {
                "experiment" => {}
                "seed" => cfg.seed = v.parse().map_err(|_| Error::parse(n, format!("bad seed {v:?}"), "`seed = <u64>`"))?,
                "output" => cfg.output = Some(cfg.base.join(&v)),
                _ if kind.keys().contains(&k.as_str()) => {
                    cfg.params.insert(k, (v, n));
                }
                _ => {
                    return Err(Error::parse(
                        n,
                        format!("key {k:?} does not apply to {kind} experiments"),
                        key_list(kind),
                    ))
                }
            }
        }
        if let Some(missing) = kind.required().iter().find(|k| !cfg.params.contains_key(**k)) {
            return Err(Error::InvalidParameter(format!("{kind} experiments need `{missing}`")));
        }
        // referenced files must exist and parse
        for key in ["subshift", "x", "y"] {
            if cfg.params.contains_key(key) {
                cfg.subshift(key)?;
            }
        }
        if cfg.params.contains_key("rule") {
            cfg.rule()?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.params.get(key).map(|(v, n)| (v.as_str(), *n))
    }

    /// Parses `key` with `f`, attributing failures to its line.
    fn value<T>(&self, key: &str, default: T, expected: &'static str, f: impl Fn(&str) -> Result<T>) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some((v, n)) => f(v).map_err(|e| Error::parse(n, e.to_string(), expected)),
        }
    }

    fn ratio(&self, key: &str, default: Ratio<u64>) -> Result<Ratio<u64>> {
        self.value(key, default, "a rational such as `1/4` or `1e-3`", parse_ratio)
    }

    fn int<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        self.value(key, default, "an integer", |v| {
            v.parse().map_err(|_| Error::InvalidParameter(format!("{v:?} is not an integer")))
        })
    }

    fn subshift(&self, key: &str) -> Result<(String, Subshift)> {
        let (v, n) = self.get(key).unwrap();
        let x = load_subshift(v, &self.base).map_err(|e| match e {
            e @ Error::Parse { .. } => e,
            e => Error::parse(n, e.to_string(), "`preset:<name>` or a subshift file path"),
        })?;
        Ok((v.to_string(), x))
    }

    fn rule(&self) -> Result<LocalRule> {
        let (v, n) = self.get("rule").unwrap();
        if v == "preset:weiss" {
            return Ok(LocalRule::weiss());
        }
        parse_rule_file(self.base.join(v))
            .map(|p| p.value.1)
            .map_err(|e| match e {
                e @ Error::Parse { .. } => e,
                e => Error::parse(n, e.to_string(), "`preset:weiss` or a rule file path"),
            })
    }

    fn echo(&self, report: &mut Report) {
        let mut head = vec![("seed".to_string(), self.seed.to_string())];
        for (k, (v, _)) in &self.params {
            if !report.config.iter().any(|(rk, _)| rk == k) {
                head.push((k.clone(), v.clone()));
            }
        }
        head.retain(|(k, _)| !report.config.iter().any(|(rk, _)| rk == k));
        head.append(&mut report.config);
        report.config = head;
    }
}

const EXPERIMENT: &str = "`experiment = entropy|gap|sweep|decide|certify|stirling|approx-quality|recipe`";

fn key_list(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::Entropy => "one of experiment, seed, output, subshift, d, delta, eps, perturbation, radius, upper_n, mode",
        ExperimentKind::Gap => "one of experiment, seed, output, x, y, d, delta, eps, margin",
        ExperimentKind::Sweep => "one of experiment, seed, output, subshift, memory, budget",
        ExperimentKind::Decide => "one of experiment, seed, output, subshift, rule",
        ExperimentKind::Certify => "one of experiment, seed, output, subshift, delta, budget, margin",
        ExperimentKind::Stirling => "one of experiment, seed, output, gamma, span",
        ExperimentKind::ApproxQuality => "one of experiment, seed, output, group, construction, d, radius, test",
        ExperimentKind::Recipe => "one of experiment, seed, output, name",
    }
}

/// `preset:<name>`, or a subshift file resolved against `base`.
pub fn load_subshift(source: &str, base: &Path) -> Result<Subshift> {
    match source.strip_prefix("preset:") {
        Some(name) => preset(name),
        None => parse_subshift_file(base.join(source)).map(|p| p.value),
    }
}

/// Runs the experiment and writes the CSV to `output` when set.
pub fn run_config(cfg: &ExperimentConfig) -> Result<Vec<Report>> {
    let mut reports = match cfg.kind {
        ExperimentKind::Entropy => {
            let (label, x) = cfg.subshift("subshift")?;
            let sides = cfg.value("d", vec![], "a list of sizes such as `8, 12`", parse_sizes)?;
            let per_lift: usize = cfg.int("perturbation", 0)?;
            let radius: u32 = cfg.int("radius", 0)?;
            let opts = EstimateOptions {
                perturbation: (per_lift > 0).then_some((per_lift, (radius > 0).then_some(radius))),
                upper_n: cfg.int("upper_n", 0usize).map(|n| (n > 0).then_some(n))?,
                mode: cfg.value("mode", CountMode::Greedy, "`greedy` or `exact`", |v| match v {
                    "greedy" => Ok(CountMode::Greedy),
                    "exact" => Ok(CountMode::exact()),
                    _ => Err(Error::InvalidParameter(format!("unknown mode {v:?}"))),
                })?,
            };
            let delta = cfg.ratio("delta", Ratio::new(1, 1000))?;
            let eps = cfg.ratio("eps", Ratio::new(1, 4))?;
            vec![entropy_report(&label, &x, &sides, delta, eps, &opts)?.0]
        }
        ExperimentKind::Gap => {
            let (xl, x) = cfg.subshift("x")?;
            let (yl, y) = cfg.subshift("y")?;
            let sides = cfg.value("d", vec![], "a list of sizes such as `8, 12`", parse_sizes)?;
            let margin = cfg.value("margin", 0.0, "a nonnegative number", |v| {
                v.parse::<f64>().ok().filter(|m| *m >= 0.0).ok_or_else(|| Error::InvalidParameter(format!("bad margin {v:?}")))
            })?;
            vec![gap_report(
                &xl,
                &x,
                &yl,
                &y,
                &sides,
                cfg.ratio("delta", Ratio::new(1, 1000))?,
                cfg.ratio("eps", Ratio::new(1, 4))?,
                margin,
            )?]
        }
        ExperimentKind::Sweep => {
            let (label, x) = cfg.subshift("subshift")?;
            let memory = cfg.value("memory", None, "group elements such as `-1 0`", |v| {
                parse_elements(x.group(), v).map(Some)
            })?;
            let budget: u128 = cfg.int("budget", DEFAULT_RULE_BUDGET)?;
            vec![sweep_report(&label, &x, &memory.unwrap(), budget)?]
        }
        ExperimentKind::Decide => {
            let (label, x) = cfg.subshift("subshift")?;
            vec![decide_report(&label, &x, &cfg.rule()?)?.0]
        }
        ExperimentKind::Certify => {
            let (label, x) = cfg.subshift("subshift")?;
            let delta = cfg.value("delta", None, "group elements such as `-1 0 1`", |v| {
                parse_elements(x.group(), v).map(Some)
            })?;
            vec![certify_report(
                &label,
                &x,
                &delta.unwrap(),
                cfg.int("budget", 0usize)?,
                cfg.int("margin", crate::shift::DEFAULT_MARGIN)?,
            )?]
        }
        ExperimentKind::Stirling => {
            let gamma = cfg.ratio("gamma", Ratio::new(1, 4))?;
            vec![stirling_report(gamma, cfg.int("span", 500u64)?)?]
        }
        ExperimentKind::ApproxQuality => {
            let group = cfg.value("group", GroupModel::Lattice(1), "`lattice:<r>` or `free:<k>`", GroupModel::parse)?;
            let kind = cfg.value("construction", ApproxKind::Cyclic, "`cyclic`, `torus` or `word-extension`", |v| v.parse())?;
            let d: usize = cfg.int("d", 0)?;
            let radius: u32 = cfg.int("radius", 0)?;
            let approx = build_approximation(group, kind, d, cfg.seed, (radius > 0).then_some(radius))?;
            let test = cfg.value("test", group.ball(3), "a ball radius or group elements", |v| {
                match v.parse::<u32>() {
                    Ok(n) => Ok(group.ball(n)),
                    Err(_) => parse_elements(group, v),
                }
            })?;
            vec![approx_quality_report(&approx, &test)?]
        }
        ExperimentKind::Recipe => {
            let (name, _) = cfg.get("name").unwrap();
            recipe(name, cfg.seed)?
        }
    };
    for r in &mut reports {
        cfg.echo(r);
    }
    if let Some(out) = &cfg.output {
        let csv: String = reports.iter().map(|r| r.to_csv()).collect::<Vec<_>>().join("\n");
        std::fs::write(out, csv)?;
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_carry_lines() {
        let err = ExperimentConfig::parse("experiment = entropy\nsubshift preset:golden-mean\n", ".").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = ExperimentConfig::parse("# c\nexperiment = nope\n", ".").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = ExperimentConfig::parse("experiment = sweep\nsubshift = preset:golden-mean\nmemory = 0 1\ngamma = 1/4\n", ".")
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = ExperimentConfig::parse("experiment = sweep\nsubshift = missing.sft\nmemory = 0 1\n", ".").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn bad_values_point_at_their_line() {
        let cfg = ExperimentConfig::parse(
            "experiment = entropy\nsubshift = preset:golden-mean\nd = 6\neps = quarter\n",
            ".",
        )
        .unwrap();
        let err = run_config(&cfg).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
    }

    #[test]
    fn sweep_config_echoes_seed() {
        let cfg = ExperimentConfig::parse(
            "experiment = sweep\nsubshift = preset:golden-mean\nmemory = 0 1\nseed = 42\n",
            ".",
        )
        .unwrap();
        let reports = run_config(&cfg).unwrap();
        assert_eq!(reports.len(), 1);
        let csv = reports[0].to_csv();
        assert!(csv.starts_with("# experiment = sweep\n# seed = 42\n"), "{csv}");
        assert!(reports[0].passed());
        assert_eq!(reports[0].rows.len(), 16);
    }
}
