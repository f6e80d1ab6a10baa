use num::rational::Ratio;
use num::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{
    decide_injective, decide_surjective, surjunctivity_sweep_with, Endomorphism, Injectivity, LocalRule, Surjectivity,
};
use crate::entropy::{
    entropy_gap_experiment, estimate_entropy_with, good_coordinate_set, is_good_map, periodic_lift,
    ConfigDictionary, EntropyEstimate, EntropyParams, EstimateOptions, Microstate,
};
use crate::error::{Error, Result};
use crate::experiment::{fmt_float, Report};
use crate::group::{FiniteSubset, GroupModel};
use crate::shift::{
    check_splicable_with, check_strong_irreducibility_with, Configuration, Subshift, Verdict,
    DEFAULT_WORK,
};
use crate::sofic::{
    cyclic_approximation, cyclic_approximation_with_radius, quality, torus_approximation_with_radius,
    word_extension_random, SoficApproximation,
};
use crate::stirling::{verify_tail_bound, d_zero};

fn ratio(q: Ratio<u64>) -> f64 {
    q.to_f64().unwrap()
}

pub fn entropy_report(
    label: &str,
    x: &Subshift,
    sides: &[usize],
    delta: Ratio<u64>,
    eps: Ratio<u64>,
    opts: &EstimateOptions,
) -> Result<(Report, EntropyEstimate)> {
    let schedule: Vec<(usize, Ratio<u64>)> = sides.iter().map(|&d| (d, delta)).collect();
    let e = estimate_entropy_with(x, &schedule, eps, opts)?;
    let mut r = Report::new(
        "entropy",
        &["d", "side", "microstates", "perturbed", "n_eps", "log_n_eps_over_d", "oracle", "upper_bound"],
    );
    r.set("subshift", label)
        .set("d", sides.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","))
        .set("eps", eps)
        .set("delta", delta)
        .set("perturbation", opts.perturbation.map_or("off".into(), |(n, r)| match r {
            Some(r) => format!("{n} per lift at radius {r}"),
            None => format!("{n} per lift"),
        }))
        .set("upper_n", e.upper_n);
    let oracle = e.exact_oracle.map_or("".into(), fmt_float);
    for t in &e.trace {
        r.row(vec![
            t.points.to_string(),
            t.side.to_string(),
            (t.lifts + t.perturbed).to_string(),
            t.perturbed.to_string(),
            t.n_eps.to_string(),
            fmt_float(t.rate),
            oracle.clone(),
            fmt_float(e.upper),
        ]);
    }
    r.check("lower <= upper", e.lower <= e.upper + 1e-6, format!("{} <= {}", fmt_float(e.lower), fmt_float(e.upper)));
    if let Some(o) = e.exact_oracle {
        // finite-d rates may overshoot the entropy, so only the upper side is a check
        r.check("oracle <= upper", o <= e.upper + 1e-9, format!("{} <= {}", fmt_float(o), fmt_float(e.upper)));
        r.check("distance to oracle", true, fmt_float((e.lower - o).abs()));
    }
    Ok((r, e))
}

#[allow(clippy::too_many_arguments)]
pub fn gap_report(
    x_label: &str,
    x: &Subshift,
    y_label: &str,
    y: &Subshift,
    sides: &[usize],
    delta: Ratio<u64>,
    eps: Ratio<u64>,
    margin: f64,
) -> Result<Report> {
    let schedule: Vec<(usize, Ratio<u64>)> = sides.iter().map(|&d| (d, delta)).collect();
    let g = entropy_gap_experiment(x, y, &schedule, eps, margin)?;
    let mut r = Report::new("gap", &["role", "subshift", "lower", "upper", "oracle"]);
    r.set("x", x_label)
        .set("y", y_label)
        .set("d", sides.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","))
        .set("eps", eps)
        .set("delta", delta)
        .set("margin", fmt_float(margin));
    for (role, label, e) in [("X", x_label, &g.x), ("Y", y_label, &g.y)] {
        r.row(vec![
            role.into(),
            label.into(),
            fmt_float(e.lower),
            fmt_float(e.upper),
            e.exact_oracle.map_or("".into(), fmt_float),
        ]);
    }
    r.check("Y is a proper subshift of X", true, format!("witness {}", g.witness.describe(x.alphabet())));
    r.check(
        "strict gap",
        g.strict(),
        format!("lower(X) - upper(Y) = {} against margin {}", fmt_float(g.gap()), fmt_float(margin)),
    );
    Ok(r)
}

pub fn sweep_report(label: &str, x: &Subshift, memory: &FiniteSubset, budget: u128) -> Result<Report> {
    let sweep = surjunctivity_sweep_with(x, memory, budget)?;
    let mut r = Report::new("sweep", &["index", "table", "preserves", "injective", "surjective", "orphan"]);
    r.set("subshift", label).set("memory", memory).set("rules", sweep.total);
    let flag = |b: Option<bool>| b.map_or("".to_string(), |v| v.to_string());
    for rec in &sweep.rules {
        r.row(vec![
            rec.index.to_string(),
            x.alphabet().decode(&rec.table),
            rec.preserves.to_string(),
            flag(rec.injective),
            flag(rec.surjective),
            rec.orphan.as_ref().map_or("".into(), |o| x.alphabet().decode(o)),
        ]);
    }
    r.check(
        "injective rules are surjective",
        sweep.violations.is_empty(),
        format!(
            "{} preserving, {} injective, {} surjective, {} violations",
            sweep.preserving,
            sweep.injective,
            sweep.surjective,
            sweep.violations.len()
        ),
    );
    Ok(r)
}

pub fn decide_report(label: &str, x: &Subshift, rule: &LocalRule) -> Result<(Report, Injectivity, Surjectivity)> {
    let f = Endomorphism::new(rule.clone(), x.clone())?;
    let inj = decide_injective(&f)?;
    let surj = decide_surjective(&f)?;
    let mut r = Report::new("decide", &["property", "verdict", "witness"]);
    r.set("subshift", label).set("memory", rule.memory()).set("rule_index", rule.index());
    let a = x.alphabet();
    r.row(match &inj {
        Injectivity::Injective => vec!["injective".into(), "true".into(), "".into()],
        Injectivity::NotInjective { x: p, y: q } => {
            vec!["injective".into(), "false".into(), format!("{} / {}", p.describe(a), q.describe(a))]
        }
    });
    r.row(match &surj {
        Surjectivity::Surjective => vec!["surjective".into(), "true".into(), "".into()],
        Surjectivity::NotSurjective { orphan } => {
            vec!["surjective".into(), "false".into(), format!("orphan {}", a.decode(orphan))]
        }
    });
    Ok((r, inj, surj))
}

pub fn certify_report(label: &str, x: &Subshift, delta: &FiniteSubset, budget: usize, margin: u32) -> Result<Report> {
    let mut r = Report::new("certify", &["property", "verdict", "exactness", "detail"]);
    r.set("subshift", label).set("delta", delta).set("budget", budget).set("margin", margin);
    let si = check_strong_irreducibility_with(x, delta, budget, margin, DEFAULT_WORK)?;
    let a = x.alphabet();
    let (ex, detail) = match &si {
        Verdict::Certified(c) => (c.exactness.to_string(), format!("{} closed pairs", c.closed_pairs)),
        Verdict::Refuted(w) => ("exact".into(), format!("{} and {} do not glue", w.p1.display(a), w.p2.display(a))),
        Verdict::Inconclusive(why) => ("".into(), why.clone()),
    };
    r.row(vec!["strong_irreducibility".into(), si.label().into(), ex, detail]);
    let sp = check_splicable_with(x, delta, budget, margin, DEFAULT_WORK)?;
    let (ex, detail) = match &sp {
        Verdict::Certified(c) => (c.exactness.to_string(), format!("{} sets, {} structural", c.sets, c.structural)),
        Verdict::Refuted(w) => (
            "exact".into(),
            format!("A = {}: splice creates {}", w.a, w.violation.display(a)),
        ),
        Verdict::Inconclusive(why) => ("".into(), why.clone()),
    };
    r.row(vec!["splicable".into(), sp.label().into(), ex, detail]);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxKind {
    Cyclic,
    Torus,
    WordExtension,
}

impl std::str::FromStr for ApproxKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(ApproxKind::Cyclic),
            "torus" => Ok(ApproxKind::Torus),
            "word-extension" | "word-extension-random" | "random" => Ok(ApproxKind::WordExtension),
            _ => Err(Error::InvalidParameter(format!("unknown approximation kind {s:?}"))),
        }
    }
}

/// `radius = None` keeps each construction's default support.
pub fn build_approximation(
    group: GroupModel,
    kind: ApproxKind,
    d: usize,
    seed: u64,
    radius: Option<u32>,
) -> Result<SoficApproximation> {
    match (kind, group) {
        (ApproxKind::Cyclic, GroupModel::Lattice(1)) => match radius {
            Some(r) => cyclic_approximation_with_radius(d, r as i64),
            None => cyclic_approximation(d),
        },
        (ApproxKind::Torus, GroupModel::Lattice(rank)) | (ApproxKind::Cyclic, GroupModel::Lattice(rank)) => {
            let r = radius.unwrap_or(d.saturating_sub(1).min(4) as u32);
            torus_approximation_with_radius(d, rank, r as i64)
        }
        (ApproxKind::WordExtension, GroupModel::Free(k)) => word_extension_random(k, d, seed, radius.unwrap_or(6)),
        (kind, group) => Err(Error::UnsupportedGroup(format!("{kind:?} approximations of {group}"))),
    }
}

pub fn approx_quality_report(approx: &SoficApproximation, test: &FiniteSubset) -> Result<Report> {
    let q = quality(approx, test)?;
    let mut r = Report::new("approx-quality", &["kind", "s", "t", "value"]);
    r.set("group", approx.model())
        .set("d", approx.d())
        .set("construction", approx.construction())
        .set("test_set", test);
    for (s, t, v) in &q.defects {
        r.row(vec!["defect".into(), s.to_string(), t.to_string(), fmt_float(ratio(*v))]);
    }
    for (s, t, v) in &q.separations {
        r.row(vec!["separation".into(), s.to_string(), t.to_string(), fmt_float(ratio(*v))]);
    }
    let max_defect = q.max_defect();
    let min_sep = q.min_separation().unwrap_or(Ratio::from_integer(1));
    r.check("max defect", true, format!("{max_defect} ({})", fmt_float(ratio(max_defect))));
    r.check("min separation", true, format!("{min_sep} ({})", fmt_float(ratio(min_sep))));
    Ok(r)
}

pub fn stirling_report(gamma: Ratio<u64>, span: u64) -> Result<Report> {
    let d0 = d_zero(gamma)?;
    let t = verify_tail_bound(gamma, d0, d0 + span)?;
    let mut r = Report::new("stirling", &["d", "j_max", "ln_sum_upper", "kappa_d_lower", "slack"]);
    r.set("gamma", gamma).set("kappa", fmt_float(t.kappa)).set("d0", d0).set("span", span);
    for row in &t.rows {
        r.row(vec![
            row.d.to_string(),
            row.j_max.to_string(),
            fmt_float(row.ln_sum),
            fmt_float(row.kappa_d),
            fmt_float(row.slack),
        ]);
    }
    r.check("tail bound on [d0, d0 + span]", true, format!("{} values of d", t.rows.len()));
    let slope = t.slack_slope();
    r.check("slack grows", slope > 0.0, format!("least-squares slope {}", fmt_float(slope)));
    Ok(r)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WPhiSummary {
    pub trials: usize,
    /// Draws rejected because they were not good maps.
    pub rejected: usize,
    pub violations: usize,
    /// Trials with `W_phi` a proper subset of `[d]`.
    pub proper: usize,
    /// Smallest `|W_phi|/d - (1 - |K| delta)` seen.
    pub min_slack: f64,
}

/// Randomized microstates in `Map(X, rho, K, delta, sigma)` for `K = Omega_2` over
/// cyclic approximations: a periodic lift of the full 2-shift or the golden mean
/// with a few coordinates replaced by nearby points of `X`.
pub fn w_phi_experiment(trials: usize, ds: &[usize], deltas: &[Ratio<u64>], seed: u64) -> Result<WPhiSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = GroupModel::Lattice(1).ball(2);
    let shifts = [crate::shift::builders::full_shift(2), crate::shift::builders::golden_mean()];
    let mut summary = WPhiSummary { trials: 0, rejected: 0, violations: 0, proper: 0, min_slack: f64::INFINITY };
    while summary.trials < trials {
        let d = *ds.choose(&mut rng).unwrap();
        let delta = *deltas.choose(&mut rng).unwrap();
        let which = rng.gen_range(0..shifts.len());
        let x = &shifts[which];
        let approx = cyclic_approximation_with_radius(d, 1)?;
        let mut dict = ConfigDictionary::new();
        // random bits with every 1 after a 1 cleared (a no-op on the full shift)
        let mut w: Vec<u8> = (0..d).map(|_| rng.gen_range(0..2)).collect();
        if which == 1 {
            for i in 0..d {
                if w[i] == 1 && w[(i + d - 1) % d] == 1 {
                    w[i] = 0;
                }
            }
        }
        let base = Configuration::periodic(&[d], w);
        let lift = periodic_lift(&mut dict, &base, &approx)?;
        let mut assignment = lift.assignment().to_vec();
        for _ in 0..rng.gen_range(0..=4) {
            let a = rng.gen_range(0..d);
            let p = rng.gen_range(-3i64..=3);
            let current = dict.get(assignment[a]).clone();
            let y = current.with_override(&[p], 1 - current.value(&[p]));
            if x.contains(&y) {
                assignment[a] = dict.intern(y);
            }
        }
        let phi = Microstate::new(assignment);
        let params = EntropyParams::new(k.clone(), delta, Ratio::new(1, 4), approx.clone())?;
        if !is_good_map(&dict, &phi, &params)? {
            summary.rejected += 1;
            continue;
        }
        summary.trials += 1;
        match good_coordinate_set(&dict, &phi, &k, delta, &approx) {
            Ok(w) => {
                let slack = w.len() as f64 / d as f64 - (1.0 - k.len() as f64 * ratio(delta));
                summary.min_slack = summary.min_slack.min(slack);
                if w.len() < d {
                    summary.proper += 1;
                }
            }
            Err(Error::CertificateViolation(_)) => summary.violations += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(summary)
}
