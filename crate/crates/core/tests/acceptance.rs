//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::rational::Ratio;
use num::{BigInt, BigRational, BigUint, One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symdyn::automaton::{
    decide_injective, decide_surjective, surjunctivity_sweep, Endomorphism, LocalRule, Surjectivity,
};
use symdyn::entropy::{
    estimate_entropy, estimate_entropy_with, good_coordinate_set, is_good_map, pattern_complexity_bound,
    periodic_lift, transfer_matrix_entropy, ConfigDictionary, EntropyParams, EstimateOptions, Microstate,
};
use symdyn::experiment::{recipe, w_phi_experiment};
use symdyn::group::{FiniteSubset, GroupModel};
use symdyn::shift::builders::{full_shift, golden_mean, hard_ball, weiss_sft};
use symdyn::shift::{check_splicable, check_splicable_with, check_strong_irreducibility, check_strong_irreducibility_with};
use symdyn::shift::{BoxWindow, Configuration, Subshift, DEFAULT_WORK};
use symdyn::sofic::{cyclic_approximation, cyclic_approximation_with_radius, quality, word_extension_random};
use symdyn::stirling::{binomial_subset_identity, d_zero, kappa, stirling_factorial_bounds, verify_tail_bound};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn in_time(start: Instant, limit: u64) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < Duration::from_secs(limit), format!("took {:.1} s, limit {limit} s", t.as_secs_f64()))
}

fn schedule(d: usize) -> Vec<(usize, Ratio<u64>)> {
    vec![(d, Ratio::new(1, 1000))]
}

fn c1() -> Outcome {
    let start = Instant::now();
    let est = estimate_entropy(&full_shift(2), &schedule(16), Ratio::new(1, 4)).map_err(e)?;
    let err = (est.lower - 2f64.ln()).abs();
    ensure(err <= 1e-9, format!("lower = {:.12}", est.lower))?;
    in_time(start, 10)?;
    Ok(format!("lower = {:.9}, |lower - log 2| = {err:.1e}", est.lower))
}

/// Binary cyclic words of length `n` with no two cyclically adjacent 1s.
fn golden_cyclic_words(n: u32) -> u64 {
    let mask = (1u64 << n) - 1;
    (0..=mask).filter(|&w| w & (((w << 1) | (w >> (n - 1))) & mask) == 0).count() as u64
}

fn c2() -> Outcome {
    let start = Instant::now();
    let per = golden_cyclic_words(24);
    ensure(per == 103682, format!("brute-force |Per_24| = {per}"))?;
    let x = golden_mean();
    let est = estimate_entropy(&x, &schedule(24), Ratio::new(1, 4)).map_err(e)?;
    let want = (per as f64).ln() / 24.0;
    ensure((est.lower - want).abs() <= 1e-12, format!("lower = {:.12}, (1/24) log 103682 = {want:.12}", est.lower))?;
    let tm = transfer_matrix_entropy(&x).map_err(e)?;
    let phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    ensure((tm - phi).abs() <= 1e-9, format!("transfer matrix {tm:.12} vs log phi {phi:.12}"))?;
    ensure((tm - 0.481211825).abs() <= 5e-10, format!("transfer matrix {tm:.12}"))?;
    ensure((est.lower - tm).abs() <= 1e-6, format!("|lower - oracle| = {:.2e}", (est.lower - tm).abs()))?;
    let upper = pattern_complexity_bound(&x, 12).map_err(e)?;
    ensure(upper >= tm, format!("pattern bound(12) = {upper:.9} below oracle"))?;
    in_time(start, 60)?;
    Ok(format!(
        "lower = {:.9}, oracle = {tm:.9}, bound(12) = {upper:.9}, {:.1} s",
        est.lower,
        start.elapsed().as_secs_f64()
    ))
}

fn float(cell: &str) -> Result<f64, String> {
    cell.parse().map_err(|_| format!("not a number: {cell:?}"))
}

fn c3() -> Outcome {
    let start = Instant::now();
    let reports = recipe("golden-gap", 0).map_err(e)?;
    ensure(reports.len() == 2 && reports.iter().all(|r| r.passed()), "recipe checks failed")?;
    let (gx, gy) = (&reports[0].rows[0], &reports[0].rows[1]);
    let lower_x = float(&gx[2])?;
    let upper_y = float(&gy[3])?;
    ensure((lower_x - 0.4812).abs() < 1e-4, format!("lower(X) = {lower_x}"))?;
    ensure(upper_y == 0.0, format!("upper(Y) = {upper_y}"))?;
    ensure(lower_x - upper_y >= 0.4, "golden margin below 0.4")?;
    let full_lower = float(&reports[1].rows[0][2])?;
    let golden_upper = float(&reports[1].rows[1][3])?;
    let gap = full_lower - golden_upper;
    ensure(gap >= 0.19, format!("full vs golden gap {gap:.9}"))?;
    in_time(start, 60)?;
    Ok(format!(
        "lower(X) = {lower_x:.9} > upper(Y) = {upper_y:.9}; full vs golden gap {gap:.9}; {:.1} s",
        start.elapsed().as_secs_f64()
    ))
}

fn c4() -> Outcome {
    let start = Instant::now();
    let r = surjunctivity_sweep(&golden_mean(), &FiniteSubset::integers([0, 1])).map_err(e)?;
    ensure(r.total == 16 && r.complete(), format!("{} of {} rules", r.scanned, r.total))?;
    ensure(r.violations.is_empty(), format!("{} violations", r.violations.len()))?;
    in_time(start, 60)?;
    Ok(format!("16 rules, {} preserving, {} injective, 0 violations", r.preserving, r.injective))
}

/// No admissible word of length `|w| + 1` maps onto `w`, by listing all words.
fn exhaustive_orphan(x: &Subshift, rule: &LocalRule, w: &[u8]) -> bool {
    let k = x.symbols() as u8;
    let n = w.len() + 1;
    let admissible = |u: &[u8]| u.windows(2).all(|p| x.allows(p));
    let mut u = vec![0u8; n];
    loop {
        if admissible(&u) {
            // memory {-1, 0}: image cell i reads u[i], u[i + 1]
            let img: Vec<u8> = (0..w.len()).map(|i| rule.eval(&[u[i], u[i + 1]])).collect();
            if img == w {
                return false;
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            u[i] += 1;
            if u[i] < k {
                break;
            }
            u[i] = 0;
        }
    }
}

fn c5() -> Outcome {
    let start = Instant::now();
    let x = weiss_sft();
    let f = Endomorphism::new(LocalRule::weiss(), x.clone()).map_err(e)?;
    ensure(decide_injective(&f).map_err(e)?.is_injective(), "not injective")?;
    let Surjectivity::NotSurjective { orphan } = decide_surjective(&f).map_err(e)? else {
        return Err("decided surjective".into());
    };
    ensure(orphan.len() <= 3, format!("orphan {:?} longer than 012", orphan))?;
    ensure(orphan.windows(2).all(|p| x.allows(p)), "orphan is not admissible")?;
    ensure(exhaustive_orphan(&x, f.rule(), &orphan), "exhaustive search found a preimage")?;
    let delta = FiniteSubset::integers(-1..=1);
    let si = check_strong_irreducibility(&x, &delta, 8).map_err(e)?;
    ensure(si.is_refuted(), format!("strong irreducibility {}", si.label()))?;
    let sp = check_splicable(&x, &delta, 8).map_err(e)?;
    ensure(sp.is_certified(), format!("splicable {}", sp.label()))?;
    in_time(start, 30)?;
    Ok(format!("injective, orphan {}, SI refuted, splicable certified", x.alphabet().decode(&orphan)))
}

fn c6() -> Outcome {
    let start = Instant::now();
    let g = golden_mean();
    let delta = FiniteSubset::integers(-1..=1);
    ensure(check_strong_irreducibility(&g, &delta, 8).map_err(e)?.is_certified(), "golden SI")?;
    ensure(check_splicable(&g, &delta, 8).map_err(e)?.is_certified(), "golden splice")?;
    let hb = hard_ball(2, &[vec![1, 0], vec![0, 1]]).map_err(e)?;
    let d2 = BoxWindow::centered(2, 1).to_subset();
    ensure(d2.len() == 9, "Delta is not the 3x3 box")?;
    let si = check_strong_irreducibility_with(&hb, &d2, 4, 2, DEFAULT_WORK).map_err(e)?;
    ensure(si.is_certified(), format!("hard-ball SI {}", si.label()))?;
    let sp = check_splicable_with(&hb, &d2, 4, 2, DEFAULT_WORK).map_err(e)?;
    ensure(sp.is_certified(), format!("hard-ball splice {}", sp.label()))?;
    in_time(start, 120)?;
    Ok(format!("golden mean and hard-ball Z^2 certified in {:.1} s", start.elapsed().as_secs_f64()))
}

fn c7() -> Outcome {
    let x = golden_mean();
    let mut plain = Vec::new();
    let mut perturbed = Vec::new();
    for eps in [Ratio::new(1, 4), Ratio::new(1, 8), Ratio::new(1, 16)] {
        plain.push(estimate_entropy(&x, &schedule(18), eps).map_err(e)?.lower);
        let opts = EstimateOptions { perturbation: Some((1, None)), ..Default::default() };
        let est = estimate_entropy_with(&x, &schedule(18), eps, &opts).map_err(e)?;
        ensure(est.trace[0].perturbed > 0, "no perturbed maps were added")?;
        perturbed.push(est.lower);
    }
    let spread = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
    ensure(spread(&plain) <= 1e-9, format!("lift rates {plain:?}"))?;
    let far = plain.iter().zip(&perturbed).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(far <= 0.01, format!("perturbed rates {perturbed:?}"))?;
    Ok(format!("rate {:.9} at all three scales; perturbed within {far:.2e}", plain[0]))
}

/// `W_phi` straight from the definition, comparing cells out to radius 40.
fn w_phi_oracle(dict: &ConfigDictionary, phi: &Microstate, d: usize, delta: Ratio<u64>) -> Vec<usize> {
    let rho_sq_below = |a: &Configuration, b: &Configuration| -> bool {
        // rho = 2^-r with r the least norm of a differing cell; rho^2 < delta
        let r = (0..=40i64).find(|&r| a.value(&[r]) != b.value(&[r]) || a.value(&[-r]) != b.value(&[-r]));
        match r {
            None => true,
            Some(r) => Ratio::new(1, 4u64.pow(r as u32)) < delta,
        }
    };
    (0..d)
        .filter(|&a| {
            (-1i64..=1).all(|s| {
                let moved = dict.get(phi.get((a as i64 + s).rem_euclid(d as i64) as usize));
                rho_sq_below(moved, &dict.get(phi.get(a)).shift(&[s]))
            })
        })
        .collect()
}

/// A random `d`-periodic point of the full 2-shift or the golden mean: random
/// bits, then each 1 following a 1 (cyclically) is cleared.
fn random_periodic(rng: &mut ChaCha8Rng, x: &Subshift, d: usize) -> Configuration {
    let mut w: Vec<u8> = (0..d).map(|_| rng.gen_range(0..2)).collect();
    if !x.contains(&Configuration::periodic(&[d], w.clone())) {
        for i in 0..d {
            if w[i] == 1 && w[(i + d - 1) % d] == 1 {
                w[i] = 0;
            }
        }
    }
    let c = Configuration::periodic(&[d], w);
    assert!(x.contains(&c));
    c
}

fn c8() -> Outcome {
    let k = GroupModel::Lattice(1).ball(2);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let shifts = [full_shift(2), golden_mean()];
    let (mut trials, mut proper, mut rejected) = (0, 0, 0);
    while trials < 1000 {
        let d = *[8usize, 16, 32].choose(&mut rng).unwrap();
        let delta = *[Ratio::new(1, 8), Ratio::new(1, 16)].choose(&mut rng).unwrap();
        let x = &shifts[rng.gen_range(0..2)];
        let approx = cyclic_approximation_with_radius(d, 1).map_err(e)?;
        let mut dict = ConfigDictionary::new();
        let base = random_periodic(&mut rng, x, d);
        let mut assignment = periodic_lift(&mut dict, &base, &approx).map_err(e)?.assignment().to_vec();
        for _ in 0..rng.gen_range(0..=4) {
            let a = rng.gen_range(0..d);
            let p = rng.gen_range(-3i64..=3);
            let c = dict.get(assignment[a]).clone();
            let y = c.with_override(&[p], 1 - c.value(&[p]));
            if x.contains(&y) {
                assignment[a] = dict.intern(y);
            }
        }
        let phi = Microstate::new(assignment);
        let params = EntropyParams::new(k.clone(), delta, Ratio::new(1, 4), approx.clone()).map_err(e)?;
        if !is_good_map(&dict, &phi, &params).map_err(e)? {
            rejected += 1;
            continue;
        }
        trials += 1;
        let oracle = w_phi_oracle(&dict, &phi, d, delta);
        let floor = (Ratio::from_integer(1) - Ratio::from_integer(3) * delta) * Ratio::from_integer(d as u64);
        ensure(
            Ratio::from_integer(oracle.len() as u64) >= floor,
            format!("|W_phi| = {} below {floor} at d = {d}", oracle.len()),
        )?;
        let w = good_coordinate_set(&dict, &phi, &k, delta, &approx).map_err(e)?;
        ensure(w == oracle, format!("W_phi differs from the oracle at d = {d}"))?;
        proper += usize::from(w.len() < d);
    }
    let s = w_phi_experiment(1000, &[8, 16, 32], &[Ratio::new(1, 8), Ratio::new(1, 16)], 7).map_err(e)?;
    ensure(s.violations == 0, format!("{} violations in the library sweep", s.violations))?;
    Ok(format!(
        "1000 compliant maps ({rejected} draws rejected), {proper} with W_phi proper, 0 violations; library sweep min slack {:.4}",
        s.min_slack
    ))
}

/// Pinned minimum separations of the seeded F_2 approximation at d = 2000.
const PINNED: [(u64, (u64, u64)); 3] = [(1, (1989, 2000)), (2, (199, 200)), (3, (499, 500))];

fn c9() -> Outcome {
    let z = GroupModel::Lattice(1);
    let q = quality(&cyclic_approximation(64).map_err(e)?, &z.ball(3)).map_err(e)?;
    ensure(q.defects.iter().all(|t| t.2 == Ratio::from_integer(0)), "cyclic defect")?;
    ensure(q.separations.iter().all(|t| t.2 == Ratio::from_integer(1)), "cyclic separation")?;
    let f2 = GroupModel::Free(2);
    let mut seps = Vec::new();
    for (seed, (n, d)) in PINNED {
        let a = word_extension_random(2, 2000, seed, 6).map_err(e)?;
        let q = quality(&a, &f2.ball(3)).map_err(e)?;
        ensure(q.max_defect() == Ratio::from_integer(0), format!("seed {seed}: defect {}", q.max_defect()))?;
        let sep = q.min_separation().ok_or("no separations")?;
        ensure(sep >= Ratio::new(9, 10), format!("seed {seed}: separation {sep}"))?;
        ensure(sep == Ratio::new(n, d), format!("seed {seed}: separation {sep}, pinned {n}/{d}"))?;
        seps.push(format!("{sep}"));
    }
    Ok(format!("cyclic(64) exact; F_2 min separations {}", seps.join(", ")))
}

fn c10() -> Outcome {
    let start = Instant::now();
    for gamma in [Ratio::new(1, 20), Ratio::new(1, 10), Ratio::new(1, 4), Ratio::new(2, 5)] {
        let d0 = d_zero(gamma).map_err(e)?;
        let t = verify_tail_bound(gamma, d0, d0 + 500).map_err(e)?;
        ensure(t.rows.len() == 501, "missing rows")?;
    }
    let k = kappa(Ratio::new(1, 4)).map_err(e)?;
    ensure((k - 1.1246704).abs() <= 1e-6, format!("kappa(1/4) = {k}"))?;
    for t in [BigRational::new(1.into(), 3.into()), BigRational::new(7.into(), 2.into()), BigRational::zero()] {
        for n in 0..=30u32 {
            let (lhs, rhs) = binomial_subset_identity(n, &t).map_err(e)?;
            // independent: sum over all subsets of [n] of t^|S|, grouped by size
            let mut brute = BigRational::zero();
            let mut choose = BigUint::one();
            for j in 0..=n {
                brute += BigRational::from_integer(BigInt::from(choose.clone())) * num::pow(t.clone(), j as usize);
                choose = choose * BigUint::from(n - j) / BigUint::from(j + 1);
            }
            ensure(lhs == rhs && lhs == brute, format!("identity at n = {n}"))?;
        }
    }
    for m in 1..=100u64 {
        let b = stirling_factorial_bounds(m).map_err(e)?;
        let ln_fact: f64 = (1..=m).map(|i| (i as f64).ln()).sum();
        let (lo, hi) = (1.0 + m as f64 * (m as f64).ln() - m as f64, 1.0 + (m as f64 + 1.0) * (m as f64).ln() - m as f64);
        ensure(lo <= ln_fact + 1e-9 && ln_fact <= hi + 1e-9, format!("floating check at m = {m}"))?;
        ensure(b.factorial.to_f64().is_some_and(|f| (f.ln() - ln_fact).abs() < 1e-6), format!("m! at m = {m}"))?;
    }
    in_time(start, 30)?;
    Ok(format!("tail bound on four gammas, kappa(1/4) = {k:.9}, identity n <= 30, chain m <= 100"))
}

fn c11() -> Outcome {
    let golden = catch_unwind(|| common::cross_check(&golden_mean(), FiniteSubset::integers([0, 1])))
        .map_err(|_| "golden mean decisions disagree with the oracle".to_string())?;
    let weiss = catch_unwind(|| common::cross_check(&weiss_sft(), FiniteSubset::integers([-1, 0])))
        .map_err(|_| "Weiss decisions disagree with the oracle".to_string())?;
    Ok(format!("{golden} golden-mean and {weiss} Weiss-preserving rules agree with the oracle"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("full-shift entropy", c1),
        ("golden-mean sandwich", c2),
        ("entropy gap", c3),
        ("surjunctivity sweep", c4),
        ("weiss counterexample", c5),
        ("certificates", c6),
        ("entropy plateau", c7),
        ("good coordinate bound", c8),
        ("sofic approximation quality", c9),
        ("binomial and factorial bounds", c10),
        ("oracle cross-checks", c11),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:2} {name}: {detail} [{secs:.2} s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:2} {name}: {why} [{secs:.2} s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
