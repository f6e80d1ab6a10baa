//! Exact injectivity and surjectivity decisions over `Z`.

use std::collections::{HashMap, VecDeque};

use crate::automaton::Endomorphism;
use crate::error::{Error, Result};
use crate::group::FiniteSubset;
use crate::shift::{Configuration, LineGraph, Pattern};

/// Subset-construction states explored before giving up.
pub const MAX_SUBSET_STATES: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Injectivity {
    Injective,
    /// Two distinct points with the same image.
    NotInjective { x: Configuration, y: Configuration },
}

impl Injectivity {
    pub fn is_injective(&self) -> bool {
        matches!(self, Injectivity::Injective)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Surjectivity {
    Surjective,
    /// An admissible word outside the image language.
    NotSurjective { orphan: Vec<u8> },
}

impl Surjectivity {
    pub fn is_surjective(&self) -> bool {
        matches!(self, Surjectivity::Surjective)
    }

    pub fn orphan_pattern(&self) -> Option<Pattern> {
        match self {
            Surjectivity::Surjective => None,
            Surjectivity::NotSurjective { orphan } => Some(
                Pattern::new(FiniteSubset::integers(0..orphan.len() as i64), orphan.clone()).unwrap(),
            ),
        }
    }
}

/// Transfer graph whose edges are long enough to carry one image symbol each.
struct Labelled {
    graph: LineGraph,
    /// Image symbol produced at the edge's first cell shifted by the rule offset.
    label: Vec<u8>,
}

fn labelled(f: &Endomorphism) -> Result<Labelled> {
    require_line(f)?;
    let x = f.domain();
    let rule = f.rule();
    let (min, width) = rule.line_span();
    let block = LineGraph::min_block(x).max(width);
    let graph = LineGraph::with_block(x, block)?;
    let label = graph
        .edges()
        .iter()
        .map(|e| rule.eval_at(&[-min], |p| e.word[p[0] as usize]))
        .collect();
    Ok(Labelled { graph, label })
}

fn require_line(f: &Endomorphism) -> Result<()> {
    if f.domain().rank() != 1 {
        return Err(Error::UnsupportedGroup(format!(
            "exact decisions need Z, got {}; use the periodic semi-decisions",
            f.domain().group()
        )));
    }
    Ok(())
}

/// Decides injectivity on the pair graph: pairs of transfer-graph vertices joined
/// by pairs of edges with equal image labels. After trimming, a surviving
/// off-diagonal vertex lies on a bi-infinite path, i.e. two distinct points with
/// the same image.
pub fn decide_injective(f: &Endomorphism) -> Result<Injectivity> {
    let lab = labelled(f)?;
    let g = &lab.graph;
    let n = g.vertex_count();
    if n == 0 {
        return Ok(Injectivity::Injective);
    }
    let id = |a: usize, b: usize| a * n + b;
    // pair edges: (source pair, target pair, edge of x, edge of y)
    let mut pair_edges: Vec<(usize, usize, usize, usize)> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for &ea in g.out_edges(a) {
                for &eb in g.out_edges(b) {
                    if lab.label[ea] == lab.label[eb] {
                        let (ta, tb) = (g.edges()[ea].to, g.edges()[eb].to);
                        pair_edges.push((id(a, b), id(ta, tb), ea, eb));
                    }
                }
            }
        }
    }
    let mut alive = vec![true; n * n];
    loop {
        let mut has_in = vec![false; n * n];
        let mut has_out = vec![false; n * n];
        for &(s, t, _, _) in &pair_edges {
            if alive[s] && alive[t] {
                has_out[s] = true;
                has_in[t] = true;
            }
        }
        let mut changed = false;
        for v in 0..n * n {
            if alive[v] && !(has_in[v] && has_out[v]) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let Some(start) = (0..n * n).find(|&v| alive[v] && v / n != v % n) else {
        return Ok(Injectivity::Injective);
    };
    let live: Vec<&(usize, usize, usize, usize)> =
        pair_edges.iter().filter(|e| alive[e.0] && alive[e.1]).collect();
    let forward = walk(start, |v| live.iter().find(|e| e.0 == v).map(|e| (e.1, e.2, e.3)));
    let backward = walk(start, |v| live.iter().find(|e| e.1 == v).map(|e| (e.0, e.2, e.3)));
    let x = build_point(g, &forward, &backward, |e| e.0);
    let y = build_point(g, &forward, &backward, |e| e.1);
    let dom = f.domain();
    if x == y || !dom.contains(&x) || !dom.contains(&y) || f.rule().apply(&x) != f.rule().apply(&y) {
        return Err(Error::CertificateViolation(format!(
            "pair-graph witness failed re-verification: {x} / {y}"
        )));
    }
    Ok(Injectivity::NotInjective { x, y })
}

/// Edges taken from `start` until a vertex repeats: (edges as (x edge, y edge), cycle start).
struct Walk {
    edges: Vec<(usize, usize)>,
    cycle_from: usize,
}

fn walk(start: usize, mut step: impl FnMut(usize) -> Option<(usize, usize, usize)>) -> Walk {
    let mut seen = HashMap::new();
    let mut v = start;
    let mut edges = Vec::new();
    loop {
        if let Some(&at) = seen.get(&v) {
            return Walk { edges, cycle_from: at };
        }
        seen.insert(v, edges.len());
        let (next, ea, eb) = step(v).expect("trimmed pair graph has in- and out-edges");
        edges.push((ea, eb));
        v = next;
    }
}

/// Forward edges sit at positions `0, 1, ..`, backward edges at `-1, -2, ..`;
/// each contributes the first symbol of its word.
fn build_point(
    g: &LineGraph,
    fwd: &Walk,
    bwd: &Walk,
    pick: impl Fn(&(usize, usize)) -> usize,
) -> Configuration {
    let sym = |e: usize| g.edges()[e].word[0];
    let fc = fwd.cycle_from as i64;
    let fl = (fwd.edges.len() - fwd.cycle_from) as i64;
    let bc = bwd.cycle_from as i64;
    let bl = (bwd.edges.len() - bwd.cycle_from) as i64;
    let value = |p: i64| -> u8 {
        if p >= 0 {
            let j = if p < fc { p } else { fc + (p - fc) % fl };
            sym(pick(&fwd.edges[j as usize]))
        } else {
            let q = -1 - p;
            let j = if q < bc { q } else { bc + (q - bc) % bl };
            sym(pick(&bwd.edges[j as usize]))
        }
    };
    let start = -(bc + bl);
    let end = fc + fl;
    let far_left = |q: i64| q - bl * ((q - start) / bl + 2);
    let far_right = |q: i64| q + fl * ((end - q) / fl + 2);
    let left: Vec<u8> = (0..bl).map(|q| value(far_left(q))).collect();
    let right: Vec<u8> = (0..fl).map(|q| value(far_right(q))).collect();
    let center: Vec<u8> = (start..end).map(value).collect();
    Configuration::line_absolute(&left, start, &center, &right)
}

/// Decides surjectivity by a subset construction reading a word two ways: as
/// the image labels (is it in the image language?) and as the symbols
/// themselves (is it admissible?). The first state failing the former while
/// passing the latter spells a shortest orphan.
pub fn decide_surjective(f: &Endomorphism) -> Result<Surjectivity> {
    let lab = labelled(f)?;
    let g = &lab.graph;
    let n = g.vertex_count();
    let k = f.domain().symbols() as u8;
    if n == 0 {
        return Ok(Surjectivity::Surjective);
    }
    type State = (Vec<bool>, Vec<bool>);
    let step = |set: &[bool], a: u8, by_label: bool| -> Vec<bool> {
        let mut next = vec![false; n];
        for (e, edge) in g.edges().iter().enumerate() {
            let read = if by_label { lab.label[e] } else { edge.word[0] };
            if read == a && set[edge.from] {
                next[edge.to] = true;
            }
        }
        next
    };
    let init: State = (vec![true; n], vec![true; n]);
    let mut parent: HashMap<State, Option<(State, u8)>> = HashMap::new();
    parent.insert(init.clone(), None);
    let mut queue = VecDeque::from([init]);
    while let Some(state) = queue.pop_front() {
        for a in 0..k {
            let image = step(&state.0, a, true);
            let own = step(&state.1, a, false);
            if !own.iter().any(|&b| b) {
                continue;
            }
            let next = (image, own);
            if parent.contains_key(&next) {
                continue;
            }
            let orphan_found = !next.0.iter().any(|&b| b);
            parent.insert(next.clone(), Some((state.clone(), a)));
            if orphan_found {
                let mut word = Vec::new();
                let mut cur = next;
                while let Some(Some((prev, a))) = parent.get(&cur) {
                    word.push(*a);
                    cur = prev.clone();
                }
                word.reverse();
                confirm_orphan(f, &word)?;
                return Ok(Surjectivity::NotSurjective { orphan: word });
            }
            if parent.len() > MAX_SUBSET_STATES {
                return Err(Error::budget("cellular_automaton", "subset construction grew too large"));
            }
            queue.push_back(next);
        }
    }
    Ok(Surjectivity::Surjective)
}

/// Exhaustive preimage search over admissible words, independent of the subset construction.
pub fn confirm_orphan(f: &Endomorphism, word: &[u8]) -> Result<()> {
    let x = f.domain();
    let g = LineGraph::new(x)?;
    if !g.is_admissible(word) {
        return Err(Error::CertificateViolation("orphan candidate is not admissible".into()));
    }
    let (_, width) = f.rule().line_span();
    let hit = g
        .words(word.len() + width - 1)
        .iter()
        .any(|u| f.rule().image_word(u) == word);
    if hit {
        return Err(Error::CertificateViolation("orphan candidate has a preimage".into()));
    }
    Ok(())
}
