//! Semi-decisions from periodic points, usable over any `Z^r`.

use std::collections::{BTreeSet, HashMap};

use crate::automaton::{Endomorphism, LocalRule};
use crate::error::Result;
use crate::shift::csp::{Budget, MarginBox};
use crate::shift::{periodic_cells, BoxWindow, Configuration, Pattern, DEFAULT_MARGIN};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemiDecision<W> {
    /// The property fails, with a checked witness.
    Refuted(W),
    Unknown(String),
}

impl<W> SemiDecision<W> {
    pub fn is_refuted(&self) -> bool {
        matches!(self, SemiDecision::Refuted(_))
    }
}

/// Image cells of a `d`-periodic point given by its cells on `[0, d)^r`.
pub fn periodic_image(rule: &LocalRule, d: usize, cells: &[u8]) -> Vec<u8> {
    let torus = BoxWindow::cube(rule.rank(), d);
    torus
        .points()
        .map(|g| {
            rule.eval_at(&g, |q| {
                let w: Vec<i64> = q.iter().map(|v| v.rem_euclid(d as i64)).collect();
                cells[torus.index(&w).unwrap()]
            })
        })
        .collect()
}

/// Two distinct `d`-periodic points with equal images, for some `d <= max_d`.
pub fn periodic_collision(f: &Endomorphism, max_d: usize) -> Result<SemiDecision<(Configuration, Configuration)>> {
    let rank = f.domain().rank();
    for d in 1..=max_d {
        let mut seen: HashMap<Vec<u8>, Vec<u8>> = HashMap::new();
        for c in periodic_cells(f.domain(), d)? {
            let img = periodic_image(f.rule(), d, &c);
            if let Some(prev) = seen.insert(img, c.clone()) {
                let x = Configuration::periodic(&vec![d; rank], prev);
                let y = Configuration::periodic(&vec![d; rank], c);
                // a smaller period may repeat among the listed cells
                if x != y {
                    return Ok(SemiDecision::Refuted((x, y)));
                }
            }
        }
    }
    Ok(SemiDecision::Unknown(format!("no collision among points of period <= {max_d}")))
}

/// A pattern on `[0, side)^r` read off a `d`-periodic point (so admissible) with no
/// preimage that is locally admissible at the default margin (so none at all).
pub fn periodic_orphan(f: &Endomorphism, d: usize, side: usize) -> Result<SemiDecision<Pattern>> {
    let x = f.domain();
    let rule = f.rule();
    let rank = x.rank();
    let window = BoxWindow::cube(rank, side);
    let mut candidates = BTreeSet::new();
    for c in periodic_cells(x, d)? {
        let torus = BoxWindow::cube(rank, d);
        let p: Vec<u8> = window
            .points()
            .map(|g| {
                let w: Vec<i64> = g.iter().map(|v| v.rem_euclid(d as i64)).collect();
                c[torus.index(&w).unwrap()]
            })
            .collect();
        candidates.insert(p);
    }
    let sb = BoxWindow::bounding(rank, rule.offsets().iter().map(|o| o.as_slice()));
    let lo: Vec<i64> = window.lo().iter().zip(sb.lo()).map(|(a, b)| a + b).collect();
    let hi: Vec<i64> = window.hi().iter().zip(sb.hi()).map(|(a, b)| a + b - 1).collect();
    let pre = BoxWindow::new(lo, hi);
    let mb = MarginBox::new(&pre, DEFAULT_MARGIN as i64);
    let k = x.symbols();
    let n = rule.offsets().len();
    let per_symbol: Vec<Vec<bool>> = (0..k as u8)
        .map(|v| (0..k.pow(n as u32)).map(|code| rule.table()[code] == v).collect())
        .collect();
    let mut budget = Budget::new("cellular_automaton", 100_000_000);
    for p in candidates {
        let mut csp = mb.csp(x);
        let ids: Vec<usize> = per_symbol.iter().map(|t| csp.add_table(t.clone())).collect();
        for (i, g) in window.points().enumerate() {
            let cells = rule
                .offsets()
                .iter()
                .map(|o| {
                    let q: Vec<i64> = g.iter().zip(o).map(|(a, b)| a + b).collect();
                    mb.cell(&q).unwrap()
                })
                .collect();
            csp.constrain(cells, ids[p[i] as usize]);
        }
        if !csp.exists(&mut budget)? {
            return Ok(SemiDecision::Refuted(Pattern::new(window.to_subset(), p)?));
        }
    }
    Ok(SemiDecision::Unknown(format!(
        "every {side}-box pattern of a {d}-periodic point has a local preimage"
    )))
}
