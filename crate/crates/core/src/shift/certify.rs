//! Checkers for expansivity, strong irreducibility and splicability on bounded windows.
//!
//! All three work from the set of admissible patterns on a box `W = [0, b)^r`.
//! Over `Z` that set is exact, so certificates and refutations are both
//! conclusive for the window. Over `Z^r`, `r >= 2`, patterns are locally
//! admissible at a margin; certificates carry that caveat and local
//! refutations are reported as inconclusive.

use std::collections::{BTreeSet, HashMap};

use num::rational::Ratio;

use crate::error::{Error, Result};
use crate::group::FiniteSubset;
use crate::shift::{enumerate_box, BoxWindow, Dyadic, Exactness, Pattern, Subshift, DEFAULT_MARGIN};

/// Windows with more cells than this are not scanned subset by subset.
pub const MAX_WINDOW_CELLS: usize = 20;

/// Work units (pattern visits) a checker may spend before giving up.
pub const DEFAULT_WORK: u64 = 2_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<C, W> {
    Certified(C),
    Refuted(W),
    Inconclusive(String),
}

impl<C, W> Verdict<C, W> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Certified(_) => "certified",
            Verdict::Refuted(_) => "refuted",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansivityCertificate {
    pub c: Ratio<u64>,
    pub epsilon: Dyadic,
    pub k: FiniteSubset,
    /// Set when the witness was checked on patterns, with their exactness.
    pub verified: Option<Exactness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityCertificate {
    pub delta: FiniteSubset,
    pub window: BoxWindow,
    pub exactness: Exactness,
    pub closed_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingCounterexample {
    pub p1: Pattern,
    pub p2: Pattern,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplicabilityCertificate {
    pub delta: FiniteSubset,
    pub window: BoxWindow,
    pub exactness: Exactness,
    pub sets: usize,
    /// Sets settled because no memory translate leaves `A` without crossing the collar.
    pub structural: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpliceCounterexample {
    pub a: FiniteSubset,
    pub x: Pattern,
    pub y: Pattern,
    /// A memory translate of the spliced pattern that is not admissible.
    pub violation: Pattern,
}

fn exactness(x: &Subshift, margin: u32) -> Exactness {
    if x.rank() == 1 {
        Exactness::Exact
    } else {
        Exactness::AtMargin(margin)
    }
}

fn check_delta(x: &Subshift, delta: &FiniteSubset) -> Result<()> {
    if delta.model() != x.group() {
        return Err(Error::ModelMismatch(delta.model().to_string(), x.group().to_string()));
    }
    if !delta.contains_identity() {
        return Err(Error::Precondition("the gap set must contain the identity".into()));
    }
    Ok(())
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `K = Omega_{n+1}` for `epsilon = 2^-n`, with `c = 1/2`.
///
/// In verify mode every admissible pattern on the radius-`2n` box is grouped by
/// its values on `K`, and each group must agree on `Omega_{n+1}`.
pub fn uniform_expansivity_witness(x: &Subshift, epsilon: Dyadic, verify: bool) -> Result<ExpansivityCertificate> {
    let Dyadic::Pow(n) = epsilon else {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    };
    let group = x.group();
    let k = group.ball(n as u32 + 1);
    let mut verified = None;
    if verify {
        let radius = 2 * n as i64;
        let window = BoxWindow::centered(x.rank(), radius);
        let patterns = enumerate_box(x, &window, DEFAULT_MARGIN)?;
        let key_cells: Vec<usize> = k
            .iter()
            .map(|g| {
                let minus: Vec<i64> = g.coords().iter().map(|c| -c).collect();
                window.index(&minus).unwrap()
            })
            .collect();
        let target_cells: Vec<usize> = k.iter().map(|g| window.index(g.coords()).unwrap()).collect();
        let mut seen: HashMap<Vec<u8>, Vec<u8>> = HashMap::new();
        for w in &patterns.words {
            let key: Vec<u8> = key_cells.iter().map(|&i| w[i]).collect();
            let target: Vec<u8> = target_cells.iter().map(|&i| w[i]).collect();
            if let Some(prev) = seen.insert(key, target.clone()) {
                if prev != target {
                    return Err(Error::CertificateViolation(format!(
                        "patterns agree under rho_K <= 1/2 but differ on {}",
                        group.ball(n as u32 + 1)
                    )));
                }
            }
        }
        verified = Some(patterns.exactness);
    }
    Ok(ExpansivityCertificate {
        c: Ratio::new(1, 2),
        epsilon,
        k,
        verified,
    })
}

/// Cube window data shared by the two subset checkers.
struct Cells {
    window: BoxWindow,
    points: Vec<Vec<i64>>,
    k: u128,
    words: Vec<Vec<u8>>,
}

impl Cells {
    fn new(x: &Subshift, side: usize, margin: u32) -> Result<Self> {
        if side == 0 {
            return Err(Error::InvalidParameter("window budget must be positive".into()));
        }
        let window = BoxWindow::cube(x.rank(), side);
        if window.len() > MAX_WINDOW_CELLS {
            return Err(Error::InvalidParameter(format!(
                "window of {} cells exceeds the limit of {MAX_WINDOW_CELLS}",
                window.len()
            )));
        }
        let k = x.symbols() as u128;
        if k.checked_pow(window.len() as u32).is_none() {
            return Err(Error::InvalidParameter("alphabet too large for packed pattern keys".into()));
        }
        let words = enumerate_box(x, &window, margin)?.words;
        Ok(Cells {
            points: window.points().collect(),
            window,
            k,
            words,
        })
    }

    fn key(&self, w: &[u8], mask: u64) -> u128 {
        let mut acc = 0u128;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            acc = acc * self.k + w[i] as u128;
            m &= m - 1;
        }
        acc
    }

    fn subset(&self, mask: u64) -> FiniteSubset {
        let pts = (0..self.points.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.points[i].clone());
        FiniteSubset::from_coords(self.window.rank(), pts).unwrap()
    }

    fn pattern(&self, w: &[u8], mask: u64) -> Pattern {
        let vals = (0..self.points.len()).filter(|i| mask >> i & 1 == 1).map(|i| w[i]).collect();
        Pattern::new(self.subset(mask), vals).unwrap()
    }

    /// Masks `{j : j - i in set}` for each cell `i`.
    fn offsets_mask(&self, set: &[Vec<i64>], sign: i64) -> Vec<u64> {
        self.points
            .iter()
            .map(|p| {
                set.iter()
                    .filter_map(|d| {
                        let q: Vec<i64> = p.iter().zip(d).map(|(a, b)| a + sign * b).collect();
                        self.window.index(&q)
                    })
                    .fold(0u64, |m, j| m | 1 << j)
            })
            .collect()
    }
}

fn union_over(mask: u64, per_cell: &[u64]) -> u64 {
    let mut out = 0;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out |= per_cell[i];
        m &= m - 1;
    }
    out
}

pub fn check_strong_irreducibility(
    x: &Subshift,
    delta: &FiniteSubset,
    window_budget: usize,
) -> Result<Verdict<IrreducibilityCertificate, GluingCounterexample>> {
    check_strong_irreducibility_with(x, delta, window_budget, DEFAULT_MARGIN, DEFAULT_WORK)
}

/// Every pair of patterns on `A_1, A_2` inside `[0, b)^r` with `A_1 Delta` disjoint
/// from `A_2` must have a common extension.
///
/// Only pairs where each set is maximal given the other are scanned: any other
/// pair is a restriction of one of those, and restrictions of glued patterns glue.
pub fn check_strong_irreducibility_with(
    x: &Subshift,
    delta: &FiniteSubset,
    window_budget: usize,
    margin: u32,
    work: u64,
) -> Result<Verdict<IrreducibilityCertificate, GluingCounterexample>> {
    check_delta(x, delta)?;
    let cells = Cells::new(x, window_budget, margin)?;
    let exactness = exactness(x, margin);
    if cells.words.is_empty() {
        // an empty subshift has nothing to glue
        return Ok(Verdict::Certified(IrreducibilityCertificate {
            delta: delta.clone(),
            window: cells.window,
            exactness,
            closed_pairs: 0,
        }));
    }
    let n = cells.points.len();
    let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let d: Vec<Vec<i64>> = delta.iter().map(|g| g.coords().to_vec()).collect();
    let forward = cells.offsets_mask(&d, 1);
    let backward = cells.offsets_mask(&d, -1);
    let mut spent = 0u64;
    let mut closed = 0usize;
    let mut pairs: Vec<(u128, u128)> = Vec::with_capacity(cells.words.len());
    for a1 in 1..=full {
        let a2 = full & !union_over(a1, &forward);
        if a2 == 0 || full & !union_over(a2, &backward) != a1 {
            continue;
        }
        closed += 1;
        spent += cells.words.len() as u64;
        if spent > work {
            return Ok(Verdict::Inconclusive(format!(
                "work budget exhausted after {closed} closed pairs"
            )));
        }
        pairs.clear();
        pairs.extend(cells.words.iter().map(|w| (cells.key(w, a1), cells.key(w, a2))));
        pairs.sort_unstable();
        pairs.dedup();
        let all2: BTreeSet<u128> = pairs.iter().map(|p| p.1).collect();
        let mut i = 0;
        while i < pairs.len() {
            let k1 = pairs[i].0;
            let j = pairs[i..].iter().position(|p| p.0 != k1).map_or(pairs.len(), |o| i + o);
            if j - i < all2.len() {
                let have: BTreeSet<u128> = pairs[i..j].iter().map(|p| p.1).collect();
                let missing = *all2.difference(&have).next().unwrap();
                let w1 = cells.words.iter().find(|w| cells.key(w, a1) == k1).unwrap();
                let w2 = cells.words.iter().find(|w| cells.key(w, a2) == missing).unwrap();
                let (m1, m2) = minimize_gluing(&cells, w1, a1, w2, a2);
                let witness = GluingCounterexample {
                    p1: cells.pattern(w1, m1),
                    p2: cells.pattern(w2, m2),
                };
                return Ok(match exactness {
                    Exactness::Exact => Verdict::Refuted(witness),
                    Exactness::AtMargin(m) => Verdict::Inconclusive(format!(
                        "no locally admissible gluing at margin {m} for {} and {}",
                        witness.p1.display(x.alphabet()),
                        witness.p2.display(x.alphabet())
                    )),
                });
            }
            i = j;
        }
    }
    Ok(Verdict::Certified(IrreducibilityCertificate {
        delta: delta.clone(),
        window: cells.window,
        exactness,
        closed_pairs: closed,
    }))
}

fn glues(cells: &Cells, w1: &[u8], m1: u64, w2: &[u8], m2: u64) -> bool {
    let k1 = cells.key(w1, m1);
    let k2 = cells.key(w2, m2);
    cells.words.iter().any(|w| cells.key(w, m1) == k1 && cells.key(w, m2) == k2)
}

/// Drops cells from either support while the pair still fails to glue.
fn minimize_gluing(cells: &Cells, w1: &[u8], mut m1: u64, w2: &[u8], mut m2: u64) -> (u64, u64) {
    for i in 0..cells.points.len() {
        let bit = 1u64 << i;
        if m1 & bit != 0 && m1 != bit && !glues(cells, w1, m1 & !bit, w2, m2) {
            m1 &= !bit;
        }
    }
    for i in 0..cells.points.len() {
        let bit = 1u64 << i;
        if m2 & bit != 0 && m2 != bit && !glues(cells, w1, m1, w2, m2 & !bit) {
            m2 &= !bit;
        }
    }
    (m1, m2)
}

pub fn check_splicable(
    x: &Subshift,
    delta: &FiniteSubset,
    window_budget: usize,
) -> Result<Verdict<SplicabilityCertificate, SpliceCounterexample>> {
    check_splicable_with(x, delta, window_budget, DEFAULT_MARGIN, DEFAULT_WORK)
}

/// For every nonempty `A` inside `[0, b)^r` and every pair of points agreeing on
/// the collar `A Delta \ A`, the point equal to the first on `A` and to the second
/// elsewhere must lie in the subshift.
pub fn check_splicable_with(
    x: &Subshift,
    delta: &FiniteSubset,
    window_budget: usize,
    margin: u32,
    work: u64,
) -> Result<Verdict<SplicabilityCertificate, SpliceCounterexample>> {
    check_delta(x, delta)?;
    if window_budget == 0 {
        return Err(Error::InvalidParameter("window budget must be positive".into()));
    }
    let rank = x.rank();
    let window = BoxWindow::cube(rank, window_budget);
    if window.len() > MAX_WINDOW_CELLS {
        return Err(Error::InvalidParameter(format!(
            "window of {} cells exceeds the limit of {MAX_WINDOW_CELLS}",
            window.len()
        )));
    }
    let exactness = exactness(x, margin);
    let points: Vec<Vec<i64>> = window.points().collect();
    let d: Vec<Vec<i64>> = delta.iter().map(|g| g.coords().to_vec()).collect();
    let n = points.len();
    let mut structural = 0usize;
    let mut spent = 0u64;
    for mask in 1u64..(1 << n) {
        let a: BTreeSet<Vec<i64>> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| points[i].clone()).collect();
        let mut collar = BTreeSet::new();
        for p in &a {
            for g in &d {
                let q = add(p, g);
                if !a.contains(&q) {
                    collar.insert(q);
                }
            }
        }
        let mut translates = BTreeSet::new();
        for p in &a {
            for o in x.offsets() {
                translates.insert(sub(p, o));
            }
        }
        let crossing: Vec<Vec<i64>> = translates
            .into_iter()
            .filter(|t| {
                x.offsets().iter().any(|o| {
                    let q = add(t, o);
                    !a.contains(&q) && !collar.contains(&q)
                })
            })
            .collect();
        if crossing.is_empty() {
            structural += 1;
            continue;
        }
        let mut span: Vec<Vec<i64>> = a.iter().chain(&collar).cloned().collect();
        for t in &crossing {
            for o in x.offsets() {
                span.push(add(t, o));
            }
        }
        let hull = BoxWindow::bounding(rank, span.iter().map(|p| p.as_slice()));
        let words = enumerate_box(x, &hull, margin)?.words;
        spent += (words.len() as u64).pow(2);
        if spent > work {
            return Ok(Verdict::Inconclusive(format!("work budget exhausted at set {mask:#b}")));
        }
        let collar_idx: Vec<usize> = collar.iter().map(|p| hull.index(p).unwrap()).collect();
        let mut groups: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
        for (i, w) in words.iter().enumerate() {
            groups.entry(collar_idx.iter().map(|&j| w[j]).collect()).or_default().push(i);
        }
        let mut keys: Vec<&Vec<u8>> = groups.keys().collect();
        keys.sort();
        for key in keys {
            let group = &groups[key];
            for &ix in group {
                for &iy in group {
                    let (wx, wy) = (&words[ix], &words[iy]);
                    let value = |p: &[i64]| -> u8 {
                        let i = hull.index(p).unwrap();
                        if a.contains(p) {
                            wx[i]
                        } else {
                            wy[i]
                        }
                    };
                    if let Some(t) = crossing.iter().find(|t| !x.window_ok(t, value)) {
                        let support = hull.to_subset();
                        let memory: Vec<Vec<i64>> = x.offsets().iter().map(|o| add(t, o)).collect();
                        let violation = Pattern::new(
                            FiniteSubset::from_coords(rank, memory.iter().cloned()).unwrap(),
                            memory.iter().map(|p| value(p)).collect(),
                        )
                        .unwrap();
                        let witness = SpliceCounterexample {
                            a: FiniteSubset::from_coords(rank, a.iter().cloned()).unwrap(),
                            x: Pattern::new(support.clone(), wx.clone()).unwrap(),
                            y: Pattern::new(support, wy.clone()).unwrap(),
                            violation,
                        };
                        return Ok(match exactness {
                            Exactness::Exact => Verdict::Refuted(witness),
                            Exactness::AtMargin(m) => Verdict::Inconclusive(format!(
                                "local splice failure at margin {m} on {}",
                                witness.a
                            )),
                        });
                    }
                }
            }
        }
    }
    Ok(Verdict::Certified(SplicabilityCertificate {
        delta: delta.clone(),
        window,
        exactness,
        sets: (1usize << n) - 1,
        structural,
    }))
}
