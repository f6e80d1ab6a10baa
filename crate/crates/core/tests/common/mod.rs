//! Brute force over eventually periodic points `u^inf . w . v^inf` with
//! `|u|, |v| <= 2` and `|w| <= 8`, twelve cells in all.
//!
//! Every cell outside `[0, 8)` repeats with period at most 2, so comparing two
//! points (or images) on a window a few periods wider than the center decides
//! equality, and bad windows of `X` would already show there.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use symdyn::automaton::{
    confirm_orphan, decide_injective, decide_surjective, preserves_subshift, Endomorphism, Injectivity, LocalRule,
    Surjectivity,
};
use symdyn::group::FiniteSubset;
use symdyn::shift::{periodic_points, Configuration, Subshift};

const CENTER: i64 = 8;
fn span() -> std::ops::Range<i64> {
    -10..CENTER + 10
}

fn words(k: u8, n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| (0..k).map(move |a| [w.clone(), vec![a]].concat()))
            .collect();
    }
    out
}

fn in_shift(x: &Subshift, c: &Configuration) -> bool {
    span().all(|i| {
        let p: Vec<u8> = x.offsets().iter().map(|o| c.value(&[i + o[0]])).collect();
        x.allows(&p)
    })
}

/// Points of `X` with tails of period <= 2 and a center on `[0, CENTER)`.
pub fn points(x: &Subshift) -> Vec<Configuration> {
    let k = x.symbols() as u8;
    let tails: Vec<Vec<u8>> = (1..=2).flat_map(|n| words(k, n)).collect();
    let mut seen = BTreeSet::new();
    for w in words(k, CENTER as usize) {
        for l in &tails {
            for r in &tails {
                let c = Configuration::line(l, 0, &w, r);
                if in_shift(x, &c) {
                    seen.insert(c);
                }
            }
        }
    }
    seen.into_iter().collect()
}

pub fn image(rule: &LocalRule, c: &Configuration, range: std::ops::Range<i64>) -> Vec<u8> {
    range
        .map(|i| {
            let p: Vec<u8> = rule.offsets().iter().map(|o| c.value(&[i + o[0]])).collect();
            rule.eval(&p)
        })
        .collect()
}

struct Oracle {
    injective: bool,
    shortest_orphan: Option<usize>,
}

fn oracle(x: &Subshift, pts: &[Configuration], rule: &LocalRule) -> Oracle {
    let mut by_image: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut injective = true;
    for (i, c) in pts.iter().enumerate() {
        let img = image(rule, c, span());
        if let Some(&j) = by_image.get(&img) {
            assert_ne!(c, &pts[j]);
            injective = false;
            break;
        }
        by_image.insert(img, i);
    }
    let mut shortest_orphan = None;
    for n in 1..=5usize {
        let window = |c: &Configuration, f: &dyn Fn(&Configuration, std::ops::Range<i64>) -> Vec<u8>| {
            (-4..CENTER + 4 - n as i64).map(|s| f(c, s..s + n as i64)).collect::<Vec<_>>()
        };
        let ident = LocalRule::identity(x.symbols(), 1);
        let lang: BTreeSet<Vec<u8>> = pts.iter().flat_map(|c| window(c, &|c, r| image(&ident, c, r))).collect();
        let img: BTreeSet<Vec<u8>> = pts.iter().flat_map(|c| window(c, &|c, r| image(rule, c, r))).collect();
        if !lang.is_subset(&img) {
            shortest_orphan = Some(n);
            break;
        }
    }
    Oracle { injective, shortest_orphan }
}

pub fn cross_check(x: &Subshift, memory: FiniteSubset) -> usize {
    let pts = points(x);
    let total = LocalRule::count(x.symbols(), &memory).unwrap();
    let mut checked = 0;
    for index in 0..total {
        let rule = LocalRule::from_index(x.symbols(), memory.clone(), index).unwrap();
        if !preserves_subshift(&rule, x).unwrap() {
            continue;
        }
        checked += 1;
        let f = Endomorphism::new(rule.clone(), x.clone()).unwrap();
        let o = oracle(x, &pts, &rule);
        let inj = decide_injective(&f).unwrap();
        assert_eq!(inj.is_injective(), o.injective, "injectivity of rule {index}");
        if let Injectivity::NotInjective { x: a, y: b } = inj {
            assert_ne!(a, b);
            assert_eq!(image(&rule, &a, -40..40), image(&rule, &b, -40..40));
        }
        match decide_surjective(&f).unwrap() {
            Surjectivity::Surjective => assert_eq!(o.shortest_orphan, None, "rule {index} has an orphan"),
            Surjectivity::NotSurjective { orphan } => {
                assert_eq!(Some(orphan.len()), o.shortest_orphan, "orphan length of rule {index}");
                confirm_orphan(&f, &orphan).unwrap();
            }
        }
        // an injective map of X^(d) into itself is onto it
        if o.injective {
            for d in 1..=12 {
                let per: BTreeSet<Configuration> = periodic_points(x, d).unwrap().into_iter().collect();
                let img: BTreeSet<Configuration> = per.iter().map(|p| f.apply(p).unwrap()).collect();
                assert_eq!(img, per, "rule {index} on period {d}");
            }
        }
    }
    checked
}

