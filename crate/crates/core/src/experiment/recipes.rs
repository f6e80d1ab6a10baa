use num::rational::Ratio;
use num::BigRational;

use crate::automaton::LocalRule;
use crate::error::{Error, Result};
use crate::experiment::{certify_report, decide_report, fmt_float, gap_report, stirling_report, sweep_report, Report};
use crate::group::FiniteSubset;
use crate::shift::builders::{forbidding_symbols, full_shift, golden_mean, hard_ball, weiss_sft};
use crate::automaton::DEFAULT_RULE_BUDGET;
use crate::shift::BoxWindow;
use crate::stirling::{binomial_subset_identity, kappa, stirling_factorial_bounds};

pub const RECIPES: &[&str] = &["gromov-weiss", "weiss-counterexample", "golden-gap", "hardball-certify", "stirling-appendix"];

/// Runs a named recipe. Every report header records `seed`, though none of the
/// recipes draws random numbers.
pub fn recipe(name: &str, seed: u64) -> Result<Vec<Report>> {
    let mut reports = match name {
        "gromov-weiss" => gromov_weiss()?,
        "weiss-counterexample" => weiss_counterexample()?,
        "golden-gap" => golden_gap()?,
        "hardball-certify" => hardball_certify()?,
        "stirling-appendix" => stirling_appendix()?,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "unknown recipe {name:?}; expected one of {}",
                RECIPES.join(", ")
            )))
        }
    };
    for r in &mut reports {
        r.config.insert(0, ("recipe".into(), name.into()));
        r.config.insert(1, ("seed".into(), seed.to_string()));
    }
    Ok(reports)
}

fn gromov_weiss() -> Result<Vec<Report>> {
    let memory = FiniteSubset::integers([0, 1]);
    Ok(vec![
        sweep_report("full:k=2", &full_shift(2), &memory, DEFAULT_RULE_BUDGET)?,
        sweep_report("golden-mean", &golden_mean(), &memory, DEFAULT_RULE_BUDGET)?,
    ])
}

fn weiss_counterexample() -> Result<Vec<Report>> {
    let x = weiss_sft();
    let (mut decided, inj, surj) = decide_report("weiss", &x, &LocalRule::weiss())?;
    decided.check("injective", inj.is_injective(), "pair graph has no off-diagonal cycle");
    let orphan = surj.orphan_pattern().map(|p| x.alphabet().decode(p.values()));
    decided.check(
        "not surjective, orphan of length <= 3",
        orphan.as_ref().is_some_and(|o| o.len() <= 3),
        format!("orphan {}", orphan.clone().unwrap_or_default()),
    );
    let mut certs = certify_report("weiss", &x, &FiniteSubset::integers(-1..=1), 8, 2)?;
    let verdict = |r: &Report, i: usize| r.rows[i][1].clone();
    let (si, sp) = (verdict(&certs, 0), verdict(&certs, 1));
    certs.check("strong irreducibility refuted", si == "refuted", si);
    certs.check("splicable", sp == "certified", sp);
    Ok(vec![decided, certs])
}

fn golden_gap() -> Result<Vec<Report>> {
    let delta = Ratio::new(1, 1000);
    let eps = Ratio::new(1, 4);
    let zero = forbidding_symbols(2, &[1]);
    Ok(vec![
        gap_report("golden-mean", &golden_mean(), "zero", &zero, &[10, 16, 24], delta, eps, 0.4)?,
        gap_report("full:k=2", &full_shift(2), "golden-mean", &golden_mean(), &[10, 16], delta, eps, 0.19)?,
    ])
}

fn hardball_certify() -> Result<Vec<Report>> {
    let mut golden = certify_report("golden-mean", &golden_mean(), &FiniteSubset::integers(-1..=1), 8, 2)?;
    for (i, name) in ["strongly irreducible", "splicable"].into_iter().enumerate() {
        let v = golden.rows[i][1].clone();
        golden.check(name, v == "certified", v);
    }
    let hb = hard_ball(2, &[vec![1, 0], vec![0, 1]])?;
    let delta = BoxWindow::centered(2, 1).to_subset();
    let mut balls = certify_report("hard-ball:d=2", &hb, &delta, 4, 2)?;
    for (i, name) in ["strongly irreducible", "splicable"].into_iter().enumerate() {
        let v = balls.rows[i][1].clone();
        balls.check(name, v == "certified", v);
    }
    Ok(vec![golden, balls])
}

fn stirling_appendix() -> Result<Vec<Report>> {
    let mut reports = Vec::new();
    for gamma in [Ratio::new(1, 20), Ratio::new(1, 10), Ratio::new(1, 4), Ratio::new(2, 5)] {
        reports.push(stirling_report(gamma, 500)?);
    }
    let mut extra = Report::new("stirling-identities", &["quantity", "argument", "value"]);
    let k = kappa(Ratio::new(1, 4))?;
    extra.row(vec!["kappa".into(), "1/4".into(), fmt_float(k)]);
    extra.check("kappa(1/4)", (k - 1.1246704).abs() <= 1e-6, fmt_float(k));
    let t = BigRational::new(2.into(), 7.into());
    let mut all = true;
    for n in 0..=30 {
        let (lhs, rhs) = binomial_subset_identity(n, &t)?;
        all &= lhs == rhs;
    }
    extra.row(vec!["binomial subset identity".into(), "n <= 30, t = 2/7".into(), all.to_string()]);
    extra.check("binomial subset identity", all, "exact for n = 0..30");
    let chain = (1..=100).map(stirling_factorial_bounds).collect::<Result<Vec<_>>>();
    extra.row(vec!["factorial chain".into(), "m = 1..100".into(), chain.is_ok().to_string()]);
    extra.check(
        "factorial chain",
        chain.is_ok(),
        chain.err().map_or("e (m/e)^m <= m! <= e m (m/e)^m".into(), |e| e.to_string()),
    );
    reports.push(extra);
    Ok(reports)
}
