use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupModel};
use crate::shift::{enumerate_box, torus_index, torus_point, BoxWindow, Configuration, LineGraph, Subshift};

/// Local rule `mu: A^S -> A`, tabulated in the lexicographic order of `A^S`
/// (memory in sorted order, symbols in alphabet order, first cell most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalRule {
    symbols: usize,
    memory: FiniteSubset,
    offsets: Vec<Vec<i64>>,
    table: Vec<u8>,
}

impl LocalRule {
    pub fn new(symbols: usize, memory: FiniteSubset, table: Vec<u8>) -> Result<Self> {
        if memory.model().lattice_rank().is_none() {
            return Err(Error::UnsupportedGroup(format!(
                "local rules need a lattice group, got {}",
                memory.model()
            )));
        }
        if memory.is_empty() {
            return Err(Error::InvalidParameter("rule memory must be nonempty".into()));
        }
        let size = symbols
            .checked_pow(memory.len() as u32)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| Error::InvalidParameter("rule table too large".into()))?;
        if table.len() != size {
            return Err(Error::SizeMismatch(size, table.len()));
        }
        if let Some(&bad) = table.iter().find(|&&v| v as usize >= symbols) {
            return Err(Error::InvalidParameter(format!("rule output {bad} outside the alphabet")));
        }
        let offsets = memory.iter().map(|g| g.coords().to_vec()).collect();
        Ok(LocalRule {
            symbols,
            memory,
            offsets,
            table,
        })
    }

    pub fn from_fn(symbols: usize, memory: FiniteSubset, mu: impl Fn(&[u8]) -> u8) -> Result<Self> {
        let n = memory.len();
        let size = symbols.pow(n as u32);
        let table = (0..size)
            .map(|c| mu(&crate::shift::subshift::decode(c, symbols, n)))
            .collect();
        Self::new(symbols, memory, table)
    }

    /// The `index`-th rule on `memory` when tables are read as base-`|A|` numerals.
    pub fn from_index(symbols: usize, memory: FiniteSubset, mut index: u128) -> Result<Self> {
        let n = symbols.pow(memory.len() as u32);
        let mut table = vec![0u8; n];
        for slot in table.iter_mut().rev() {
            *slot = (index % symbols as u128) as u8;
            index /= symbols as u128;
        }
        Self::new(symbols, memory, table)
    }

    /// Number of rules on `memory`, if it fits.
    pub fn count(symbols: usize, memory: &FiniteSubset) -> Option<u128> {
        let n = symbols.checked_pow(memory.len() as u32)?;
        (symbols as u128).checked_pow(n as u32)
    }

    pub fn index(&self) -> u128 {
        self.table
            .iter()
            .fold(0u128, |acc, &v| acc.wrapping_mul(self.symbols as u128) + v as u128)
    }

    pub fn identity(symbols: usize, rank: usize) -> Self {
        let memory = GroupModel::Lattice(rank).ball(1);
        Self::from_fn(symbols, memory, |p| p[0]).unwrap()
    }

    /// `x -> g x` for `g = -s`, that is `f(x)(h) = x(h + s)`.
    pub fn shift_by(symbols: usize, s: Vec<i64>) -> Self {
        let memory = FiniteSubset::from_coords(s.len(), [s]).unwrap();
        Self::from_fn(symbols, memory, |p| p[0]).unwrap()
    }

    pub fn constant(symbols: usize, memory: FiniteSubset, value: u8) -> Result<Self> {
        Self::from_fn(symbols, memory, |_| value)
    }

    /// `S = {-1, 0}` on three symbols, `mu(s, t) = t` except `mu(1, 2) = 1`.
    pub fn weiss() -> Self {
        Self::from_fn(3, FiniteSubset::integers([-1, 0]), |p| if p == [1, 2] { 1 } else { p[1] }).unwrap()
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn memory(&self) -> &FiniteSubset {
        &self.memory
    }

    pub fn offsets(&self) -> &[Vec<i64>] {
        &self.offsets
    }

    pub fn rank(&self) -> usize {
        self.offsets[0].len()
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn eval(&self, pattern: &[u8]) -> u8 {
        let code = pattern.iter().fold(0usize, |acc, &v| acc * self.symbols + v as usize);
        self.table[code]
    }

    /// `f(x)(g) = mu((x(g + s))_{s in S})` for a value lookup.
    pub fn eval_at(&self, g: &[i64], mut value: impl FnMut(&[i64]) -> u8) -> u8 {
        let mut code = 0usize;
        let mut p = vec![0i64; g.len()];
        for o in &self.offsets {
            for a in 0..g.len() {
                p[a] = g[a] + o[a];
            }
            code = code * self.symbols + value(&p) as usize;
        }
        self.table[code]
    }

    /// For `Z`: (min offset, width) of the memory hull.
    pub fn line_span(&self) -> (i64, usize) {
        let min = self.offsets.iter().map(|o| o[0]).min().unwrap();
        let max = self.offsets.iter().map(|o| o[0]).max().unwrap();
        (min, (max - min + 1) as usize)
    }

    /// Image of a finite word over `Z`: entry `j` reads the cells `j - min + s`.
    pub fn image_word(&self, word: &[u8]) -> Vec<u8> {
        let (min, width) = self.line_span();
        if word.len() < width {
            return Vec::new();
        }
        (0..=word.len() - width)
            .map(|j| self.eval_at(&[j as i64 - min], |p| word[p[0] as usize]))
            .collect()
    }

    /// Pointwise image of a finitely described point.
    pub fn apply(&self, x: &Configuration) -> Configuration {
        assert_eq!(x.rank(), self.rank(), "rule and configuration ranks differ");
        match x {
            Configuration::Line(l) => {
                let (min, width) = self.line_span();
                let max = min + width as i64 - 1;
                let tail = |w: &[u8]| -> Vec<u8> {
                    let p = w.len() as i64;
                    (0..p)
                        .map(|j| self.eval_at(&[j], |q| w[q[0].rem_euclid(p) as usize]))
                        .collect()
                };
                let left = tail(l.left_tail());
                let right = tail(l.right_tail());
                let lo = l.center_start() - max;
                let hi = (l.center_end() - min).max(lo);
                let center: Vec<u8> = (lo..hi).map(|g| self.eval_at(&[g], |q| x.value(q))).collect();
                Configuration::line_absolute(&left, lo, &center, &right)
            }
            Configuration::Torus(t) => {
                let periods = t.periods();
                let cells: Vec<u8> = (0..t.cells().len())
                    .map(|i| {
                        let g = torus_point(periods, i);
                        self.eval_at(&g, |q| t.cells()[torus_index(periods, q)])
                    })
                    .collect();
                let mut overrides = BTreeMap::new();
                for pos in t.overrides().keys() {
                    for o in &self.offsets {
                        let g: Vec<i64> = pos.iter().zip(o).map(|(a, b)| a - b).collect();
                        let v = self.eval_at(&g, |q| x.value(q));
                        overrides.insert(g, v);
                    }
                }
                Configuration::torus_parts(periods, &cells, overrides)
            }
        }
    }
}

/// Whether the rule maps `x` into itself.
///
/// Over `Z` this is exact: every admissible word long enough to determine one
/// memory window of the image is mapped and checked. Over `Z^r`, `r >= 2`, the
/// check runs on patterns locally admissible at the default margin, a superset
/// of the admissible ones, so `true` is a proof and `false` may be spurious.
pub fn preserves_subshift(rule: &LocalRule, x: &Subshift) -> Result<bool> {
    if rule.rank() != x.rank() || rule.symbols() != x.symbols() {
        return Err(Error::ModelMismatch(
            format!("rule over lattice:{} with {} symbols", rule.rank(), rule.symbols()),
            x.to_string(),
        ));
    }
    if x.rank() == 1 {
        let (xmin, xw) = x.line_span();
        let (_, sw) = rule.line_span();
        let g = LineGraph::new(x)?;
        return Ok(g
            .words(xw + sw - 1)
            .iter()
            .all(|w| {
                let img = rule.image_word(w);
                x.window_ok(&[-xmin], |p| img[p[0] as usize])
            }));
    }
    let mb = x.memory_box();
    let sb = BoxWindow::bounding(rule.rank(), rule.offsets().iter().map(|o| o.as_slice()));
    let lo: Vec<i64> = mb.lo().iter().zip(sb.lo()).map(|(a, b)| a + b).collect();
    let hi: Vec<i64> = mb.hi().iter().zip(sb.hi()).map(|(a, b)| a + b - 1).collect();
    let window = BoxWindow::new(lo, hi);
    let patterns = enumerate_box(x, &window, crate::shift::DEFAULT_MARGIN)?;
    Ok(patterns.words.iter().all(|w| {
        let value = |q: &[i64]| w[window.index(q).unwrap()];
        x.window_ok(&vec![0; x.rank()], |g| rule.eval_at(g, value))
    }))
}

/// A local rule together with a subshift it preserves.
#[derive(Clone, Debug)]
pub struct Endomorphism {
    rule: LocalRule,
    domain: Subshift,
}

impl Endomorphism {
    pub fn new(rule: LocalRule, domain: Subshift) -> Result<Self> {
        if !preserves_subshift(&rule, &domain)? {
            return Err(Error::InvalidParameter("the rule does not map the subshift into itself".into()));
        }
        Ok(Endomorphism { rule, domain })
    }

    pub fn rule(&self) -> &LocalRule {
        &self.rule
    }

    pub fn domain(&self) -> &Subshift {
        &self.domain
    }

    pub fn apply(&self, x: &Configuration) -> Result<Configuration> {
        if !self.domain.contains(x) {
            return Err(Error::Domain(x.describe(self.domain.alphabet())));
        }
        Ok(self.rule.apply(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::builders::{full_shift, golden_mean, hard_square, weiss_sft};
    use proptest::prelude::*;

    #[test]
    fn weiss_rule_elongates_the_block_of_ones() {
        let f = Endomorphism::new(LocalRule::weiss(), weiss_sft()).unwrap();
        let x = Configuration::line(&[0], 0, &[1], &[2]);
        let y = f.apply(&x).unwrap();
        assert_eq!(y, Configuration::line(&[0], 0, &[1, 1], &[2]));
        assert!(f.apply(&Configuration::line(&[2], 0, &[], &[0])).is_err());
    }

    #[test]
    fn identity_and_preservation() {
        let id = LocalRule::identity(2, 1);
        let x = Configuration::line(&[0], 0, &[1, 0, 1], &[0, 0, 1]);
        assert_eq!(id.apply(&x), x);
        assert!(preserves_subshift(&id, &golden_mean()).unwrap());
        assert!(preserves_subshift(&LocalRule::weiss(), &weiss_sft()).unwrap());
        let ones = LocalRule::constant(2, FiniteSubset::integers([0]), 1).unwrap();
        assert!(!preserves_subshift(&ones, &golden_mean()).unwrap());
        assert!(preserves_subshift(&ones, &full_shift(2)).unwrap());
        assert!(preserves_subshift(&LocalRule::identity(2, 2), &hard_square()).unwrap());
    }

    #[test]
    fn table_order_is_lexicographic() {
        let mem = FiniteSubset::integers([0, 1]);
        let r = LocalRule::from_index(2, mem.clone(), 0b0110).unwrap();
        assert_eq!(r.table(), &[0, 1, 1, 0]);
        assert_eq!(r.eval(&[1, 0]), 1);
        assert_eq!(r.index(), 6);
        assert_eq!(LocalRule::count(2, &mem), Some(16));
        assert_eq!(LocalRule::count(3, &FiniteSubset::integers([-1, 0])), Some(19683));
    }

    #[test]
    fn image_word_positions() {
        let w = LocalRule::weiss();
        assert_eq!(w.image_word(&[0, 1, 2, 2]), vec![1, 1, 2]);
        let shift = LocalRule::shift_by(2, vec![1]);
        // f(x)(h) = x(h + 1)
        let x = Configuration::line(&[0], 0, &[1], &[0]);
        assert_eq!(shift.apply(&x).value(&[-1]), 1);
    }

    fn rule_and_point() -> impl Strategy<Value = (LocalRule, Configuration)> {
        (
            0u128..256,
            proptest::collection::vec(0u8..2, 1..4),
            -4i64..4,
            proptest::collection::vec(0u8..2, 0..5),
            proptest::collection::vec(0u8..2, 1..4),
        )
            .prop_map(|(idx, l, s, c, r)| {
                let rule = LocalRule::from_index(2, FiniteSubset::integers([-1, 0, 2]), idx).unwrap();
                (rule, Configuration::line(&l, s, &c, &r))
            })
    }

    proptest! {
        #[test]
        fn apply_is_pointwise_and_equivariant((rule, x) in rule_and_point(), g in -5i64..5) {
            let y = rule.apply(&x);
            for i in -15i64..15 {
                prop_assert_eq!(y.value(&[i]), rule.eval_at(&[i], |q| x.value(q)));
            }
            prop_assert_eq!(rule.apply(&x.shift(&[g])), y.shift(&[g]));
        }

        #[test]
        fn torus_apply_is_equivariant(cells in proptest::collection::vec(0u8..2, 4),
                                      g in (-3i64..3, -3i64..3), idx in 0u128..256) {
            let mem = FiniteSubset::from_coords(2, [vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap();
            let rule = LocalRule::from_index(2, mem, idx).unwrap();
            let x = Configuration::periodic(&[2, 2], cells).with_override(&[4, 1], 1);
            let y = rule.apply(&x);
            for a in -6i64..6 {
                for b in -6i64..6 {
                    prop_assert_eq!(y.value(&[a, b]), rule.eval_at(&[a, b], |q| x.value(q)));
                }
            }
            prop_assert_eq!(rule.apply(&x.shift(&[g.0, g.1])), y.shift(&[g.0, g.1]));
        }
    }
}
