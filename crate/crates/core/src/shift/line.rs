//! Transfer graph of a one-dimensional SFT.
//!
//! Vertices are `(N-1)`-words, edges are locally admissible `N`-words joining
//! their prefix to their suffix. After trimming to the essential part every
//! vertex lies on a bi-infinite path, so bi-infinite paths are exactly the
//! points of the subshift read as sequences of `N`-blocks.

use std::collections::{BTreeSet, HashMap};

use num::{BigUint, One, Zero};

use crate::error::{Error, Result};
use crate::shift::Subshift;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// The `N`-word read along the edge.
    pub word: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct LineGraph {
    block: usize,
    symbols: usize,
    vertices: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl LineGraph {
    /// Smallest usable block length for `x`: at least the memory width and at least 2.
    pub fn min_block(x: &Subshift) -> usize {
        x.line_span().1.max(2)
    }

    pub fn new(x: &Subshift) -> Result<Self> {
        Self::with_block(x, Self::min_block(x))
    }

    /// Higher-block presentation, edges being admissible words of length `block`.
    pub fn with_block(x: &Subshift, block: usize) -> Result<Self> {
        if x.rank() != 1 {
            return Err(Error::UnsupportedGroup(format!(
                "transfer graphs need Z, got {}",
                x.group()
            )));
        }
        let (min, width) = x.line_span();
        if block < width.max(2) {
            return Err(Error::InvalidParameter(format!(
                "block length {block} is shorter than the memory width {width}"
            )));
        }
        let k = x.symbols();
        let mut words = Vec::new();
        let mut word = Vec::with_capacity(block);
        local_words(x, min, width, block, k, &mut word, &mut words);

        let mut vset = BTreeSet::new();
        for w in &words {
            vset.insert(w[..block - 1].to_vec());
            vset.insert(w[1..].to_vec());
        }
        let all: Vec<Vec<u8>> = vset.into_iter().collect();
        let pos: HashMap<&[u8], usize> = all.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
        let raw: Vec<(usize, usize)> = words
            .iter()
            .map(|w| (pos[&w[..block - 1]], pos[&w[1..]]))
            .collect();

        // trim to the essential graph
        let mut alive = vec![true; all.len()];
        loop {
            let mut has_in = vec![false; all.len()];
            let mut has_out = vec![false; all.len()];
            for &(a, b) in &raw {
                if alive[a] && alive[b] {
                    has_out[a] = true;
                    has_in[b] = true;
                }
            }
            let mut changed = false;
            for v in 0..all.len() {
                if alive[v] && !(has_in[v] && has_out[v]) {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        let mut remap = vec![usize::MAX; all.len()];
        let mut vertices = Vec::new();
        for (v, w) in all.into_iter().enumerate() {
            if alive[v] {
                remap[v] = vertices.len();
                vertices.push(w);
            }
        }
        let index = vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut edges = Vec::new();
        let mut out = vec![Vec::new(); vertices.len()];
        let mut inc = vec![Vec::new(); vertices.len()];
        // `words` is lexicographic, so out-lists come sorted by the appended symbol.
        for (w, &(a, b)) in words.into_iter().zip(&raw) {
            if alive[a] && alive[b] {
                let id = edges.len();
                out[remap[a]].push(id);
                inc[remap[b]].push(id);
                edges.push(Edge {
                    from: remap[a],
                    to: remap[b],
                    word: w,
                });
            }
        }
        Ok(LineGraph {
            block,
            symbols: k,
            vertices,
            index,
            edges,
            out,
            inc,
        })
    }

    pub fn block(&self) -> usize {
        self.block
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    /// The subshift is empty iff its essential graph is.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vec<u8>] {
        &self.vertices
    }

    pub fn vertex(&self, word: &[u8]) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    /// Number of globally admissible words of length `n`.
    pub fn count_words(&self, n: usize) -> BigUint {
        if self.is_empty() {
            return if n == 0 { BigUint::one() } else { BigUint::zero() };
        }
        let v = self.block - 1;
        if n <= v {
            let prefixes: BTreeSet<&[u8]> = self.vertices.iter().map(|w| &w[..n]).collect();
            return BigUint::from(prefixes.len());
        }
        let mut paths = vec![BigUint::one(); self.vertices.len()];
        for _ in 0..n - v {
            let mut next = vec![BigUint::zero(); self.vertices.len()];
            for e in &self.edges {
                next[e.from] += &paths[e.to];
            }
            paths = next;
        }
        paths.into_iter().sum()
    }

    /// Globally admissible words of length `n`, in lexicographic order.
    pub fn words(&self, n: usize) -> Vec<Vec<u8>> {
        let v = self.block - 1;
        if n <= v {
            let prefixes: BTreeSet<Vec<u8>> = self.vertices.iter().map(|w| w[..n].to_vec()).collect();
            return prefixes.into_iter().collect();
        }
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            let mut word = self.vertices[start].clone();
            self.extend_words(start, n, &mut word, &mut out);
        }
        out
    }

    fn extend_words(&self, at: usize, n: usize, word: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if word.len() == n {
            out.push(word.clone());
            return;
        }
        for &e in &self.out[at] {
            let edge = &self.edges[e];
            word.push(*edge.word.last().unwrap());
            self.extend_words(edge.to, n, word, out);
            word.pop();
        }
    }

    /// Whether `word` occurs in some point of the subshift.
    pub fn is_admissible(&self, word: &[u8]) -> bool {
        let v = self.block - 1;
        if word.len() < v {
            return self.extendable(0, word.len() as i64, |i| Some(word[i as usize]));
        }
        if word.len() == v {
            return self.vertex(word).is_some();
        }
        word.windows(self.block).all(|w| {
            let Some(a) = self.vertex(&w[..v]) else { return false };
            self.out[a].iter().any(|&e| self.edges[e].word == w)
        })
    }

    /// Whether some point agrees with `known` on `[lo, hi)` wherever it returns a symbol.
    pub fn extendable(&self, lo: i64, hi: i64, known: impl Fn(i64) -> Option<u8>) -> bool {
        let v = (self.block - 1) as i64;
        let fits = |w: &[u8], at: i64| {
            w.iter()
                .enumerate()
                .all(|(j, &s)| known(at + j as i64).is_none_or(|t| t == s))
        };
        let mut current: Vec<bool> = self.vertices.iter().map(|w| fits(w, lo)).collect();
        let mut at = lo;
        while at + v < hi {
            let mut next = vec![false; self.vertices.len()];
            let cell = at + v;
            for edge in &self.edges {
                if current[edge.from] && known(cell).is_none_or(|t| t == *edge.word.last().unwrap()) {
                    next[edge.to] = true;
                }
            }
            current = next;
            at += 1;
        }
        current.into_iter().any(|b| b)
    }

    /// Words `w` of length `d` whose periodic repetition is a point of the subshift.
    pub fn periodic_words(&self, d: usize) -> Vec<Vec<u8>> {
        assert!(d >= 1);
        let mut out = BTreeSet::new();
        for start in 0..self.vertices.len() {
            let mut walk = Vec::with_capacity(d);
            self.closed_walks(start, start, d, &mut walk, &mut out);
        }
        out.into_iter().collect()
    }

    fn closed_walks(&self, start: usize, at: usize, d: usize, walk: &mut Vec<u8>, out: &mut BTreeSet<Vec<u8>>) {
        if walk.len() == d {
            if at == start {
                out.insert(walk.clone());
            }
            return;
        }
        for &e in &self.out[at] {
            let edge = &self.edges[e];
            walk.push(edge.word[0]);
            self.closed_walks(start, edge.to, d, walk, out);
            walk.pop();
        }
    }

    /// Edge-count matrix between vertices.
    pub fn adjacency(&self) -> Vec<Vec<u64>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0u64; n]; n];
        for e in &self.edges {
            m[e.from][e.to] += 1;
        }
        m
    }
}

fn local_words(
    x: &Subshift,
    min: i64,
    width: usize,
    block: usize,
    k: usize,
    word: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
) {
    if word.len() == block {
        out.push(word.clone());
        return;
    }
    for s in 0..k as u8 {
        word.push(s);
        let j = word.len() - 1;
        let ok = j + 1 < width || {
            let t = (j + 1 - width) as i64;
            x.window_ok(&[t - min], |p| word[p[0] as usize])
        };
        if ok {
            local_words(x, min, width, block, k, word, out);
        }
        word.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::builders::{full_shift, golden_mean, weiss_sft};

    fn brute_force_count(x: &Subshift, n: usize, pad: usize) -> usize {
        // words of length n that embed in some locally admissible word of length n + 2 pad
        let g = LineGraph::new(x).unwrap();
        let k = x.symbols();
        let mut count = 0;
        for code in 0..k.pow(n as u32) {
            let w = crate::shift::subshift::decode(code, k, n);
            let hit = g.words(n + 2 * pad).iter().any(|u| u[pad..pad + n] == w[..]);
            count += hit as usize;
        }
        count
    }

    #[test]
    fn golden_mean_words() {
        let g = LineGraph::new(&golden_mean()).unwrap();
        assert_eq!(g.vertex_count(), 2);
        let three: Vec<Vec<u8>> = vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0], vec![1, 0, 1]];
        assert_eq!(g.words(3), three);
        let counts: Vec<u64> = (1..=5).map(|n| g.count_words(n).try_into().unwrap()).collect();
        assert_eq!(counts, vec![2, 3, 5, 8, 13]);
    }

    #[test]
    fn counts_match_enumeration_and_brute_force() {
        for x in [golden_mean(), weiss_sft(), full_shift(2)] {
            let g = LineGraph::new(&x).unwrap();
            for n in 0..7 {
                assert_eq!(g.count_words(n), BigUint::from(g.words(n).len()));
                if n > 0 {
                    assert_eq!(g.words(n).len(), brute_force_count(&x, n, 2));
                }
            }
        }
    }

    #[test]
    fn weiss_orders_symbols() {
        let g = LineGraph::new(&weiss_sft()).unwrap();
        assert!(g.is_admissible(&[0, 0, 1, 1, 2, 2]));
        assert!(!g.is_admissible(&[2, 0]));
        assert!(!g.is_admissible(&[1, 0]));
        // 2 at 0 and 0 at 5 cannot coexist
        assert!(!g.extendable(0, 6, |i| match i {
            0 => Some(2),
            5 => Some(0),
            _ => None,
        }));
        assert!(g.extendable(0, 6, |i| match i {
            0 => Some(0),
            5 => Some(2),
            _ => None,
        }));
    }

    #[test]
    fn higher_block_presentation_keeps_the_language() {
        let x = golden_mean();
        let g2 = LineGraph::new(&x).unwrap();
        let g4 = LineGraph::with_block(&x, 4).unwrap();
        for n in 0..9 {
            assert_eq!(g2.words(n), g4.words(n));
        }
        assert_eq!(g2.periodic_words(7), g4.periodic_words(7));
    }

    #[test]
    fn periodic_words_of_the_golden_mean() {
        let g = LineGraph::new(&golden_mean()).unwrap();
        assert_eq!(g.periodic_words(5).len(), 11);
        assert_eq!(g.periodic_words(1), vec![vec![0]]);
        assert_eq!(g.periodic_words(2).len(), 3);
    }
}
