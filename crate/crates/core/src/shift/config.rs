//! Points of `A^(Z^r)` with finite descriptions.
//!
//! Over `Z` a configuration is eventually periodic in both directions: a
//! periodic left tail, a finite center and a periodic right tail. Over `Z^r`
//! with `r >= 2` it is a rectangular-periodic background with a finite set of
//! overridden cells. Both forms are kept in a canonical normal form, so the
//! derived equality is equality of points.

use std::collections::BTreeMap;
use std::fmt;

use crate::group::{FiniteSubset, GroupElement};
use crate::shift::{Alphabet, Pattern, Subshift};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Configuration {
    Line(LineConfig),
    Torus(TorusConfig),
}

/// `value(i) = left[i mod |left|]` for `i < start`, `center[i - start]` on the
/// center, `right[i mod |right|]` past it. Tails are primitive words anchored at 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LineConfig {
    left: Vec<u8>,
    start: i64,
    center: Vec<u8>,
    right: Vec<u8>,
}

/// Background `cells` repeated with the per-axis `periods`, plus finite overrides.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusConfig {
    periods: Vec<usize>,
    cells: Vec<u8>,
    overrides: BTreeMap<Vec<i64>, u8>,
}

fn primitive(word: &[u8]) -> Vec<u8> {
    let p = word.len();
    for q in 1..=p {
        if p.is_multiple_of(q) && (q..p).all(|j| word[j] == word[j % q]) {
            return word[..q].to_vec();
        }
    }
    word.to_vec()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn at(word: &[u8], i: i64) -> u8 {
    word[i.rem_euclid(word.len() as i64) as usize]
}

impl LineConfig {
    fn raw_value(left: &[u8], start: i64, center: &[u8], right: &[u8], i: i64) -> u8 {
        if i < start {
            at(left, i)
        } else if i < start + center.len() as i64 {
            center[(i - start) as usize]
        } else {
            at(right, i)
        }
    }

    /// Canonical form of the described point; tails are anchored absolutely.
    fn normalize(left: &[u8], start: i64, center: &[u8], right: &[u8]) -> Self {
        assert!(!left.is_empty() && !right.is_empty(), "tails must be nonempty");
        let left = primitive(left);
        let right = primitive(right);
        let end = start + center.len() as i64;
        let span = lcm(left.len(), right.len()) as i64;
        let value = |i: i64| Self::raw_value(&left, start, center, &right, i);
        let first_diff = (start..end + span).find(|&i| value(i) != at(&left, i));
        let Some(a) = first_diff else {
            return LineConfig {
                right: left.clone(),
                left,
                start: 0,
                center: Vec::new(),
            };
        };
        let last_diff = (a - span - 1..end)
            .rev()
            .find(|&i| value(i) != at(&right, i))
            .expect("a point equal to its left tail would have been caught");
        let e = (last_diff + 1).max(a);
        let center = (a..e).map(value).collect();
        LineConfig {
            left,
            start: a,
            center,
            right,
        }
    }

    pub fn value(&self, i: i64) -> u8 {
        Self::raw_value(&self.left, self.start, &self.center, &self.right, i)
    }

    /// Left tail word anchored at 0.
    pub fn left_tail(&self) -> &[u8] {
        &self.left
    }

    pub fn right_tail(&self) -> &[u8] {
        &self.right
    }

    pub fn center_start(&self) -> i64 {
        self.start
    }

    pub fn center(&self) -> &[u8] {
        &self.center
    }

    pub fn center_end(&self) -> i64 {
        self.start + self.center.len() as i64
    }

    pub fn is_periodic(&self) -> bool {
        self.center.is_empty() && self.left == self.right
    }

    fn shifted(&self, g: i64) -> Self {
        let rot = |w: &[u8]| -> Vec<u8> { (0..w.len() as i64).map(|j| at(w, j - g)).collect() };
        LineConfig::normalize(&rot(&self.left), self.start + g, &self.center, &rot(&self.right))
    }

    fn differing_bound(&self, other: &LineConfig) -> i64 {
        let span = [self.left.len(), self.right.len(), other.left.len(), other.right.len()]
            .into_iter()
            .fold(1, lcm) as i64;
        let lo = self.start.min(other.start).abs();
        let hi = self.center_end().max(other.center_end()).abs();
        lo.max(hi) + span + 1
    }
}

impl TorusConfig {
    fn normalize(periods: &[usize], cells: &[u8], overrides: BTreeMap<Vec<i64>, u8>) -> Self {
        let rank = periods.len();
        assert!(periods.iter().all(|&p| p > 0));
        assert_eq!(cells.len(), periods.iter().product::<usize>());
        let mut periods = periods.to_vec();
        let mut cells = cells.to_vec();
        for axis in 0..rank {
            let p = periods[axis];
            let q = (1..=p)
                .find(|&q| p.is_multiple_of(q) && torus_invariant(&periods, &cells, axis, q))
                .unwrap();
            if q < p {
                let mut reduced = periods.clone();
                reduced[axis] = q;
                let total: usize = reduced.iter().product();
                cells = (0..total)
                    .map(|i| {
                        let pt = torus_point(&reduced, i);
                        cells[torus_index(&periods, &pt)]
                    })
                    .collect();
                periods = reduced;
            }
        }
        let mut out = TorusConfig {
            periods,
            cells,
            overrides: BTreeMap::new(),
        };
        for (pos, v) in overrides {
            if out.background(&pos) != v {
                out.overrides.insert(pos, v);
            }
        }
        out
    }

    pub(crate) fn background(&self, p: &[i64]) -> u8 {
        self.cells[torus_index(&self.periods, p)]
    }

    pub fn value(&self, p: &[i64]) -> u8 {
        match self.overrides.get(p) {
            Some(&v) => v,
            None => self.background(p),
        }
    }

    pub fn periods(&self) -> &[usize] {
        &self.periods
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn overrides(&self) -> &BTreeMap<Vec<i64>, u8> {
        &self.overrides
    }

    fn shifted(&self, g: &[i64]) -> Self {
        let total = self.cells.len();
        let cells = (0..total)
            .map(|i| {
                let pt = torus_point(&self.periods, i);
                let src: Vec<i64> = pt.iter().zip(g).map(|(x, y)| x - y).collect();
                self.background(&src)
            })
            .collect();
        let overrides = self
            .overrides
            .iter()
            .map(|(p, &v)| (p.iter().zip(g).map(|(x, y)| x + y).collect(), v))
            .collect();
        TorusConfig {
            periods: self.periods.clone(),
            cells,
            overrides,
        }
    }

    fn differing_bound(&self, other: &TorusConfig) -> i64 {
        let span = self
            .periods
            .iter()
            .chain(&other.periods)
            .copied()
            .fold(1, lcm) as i64;
        let reach = self
            .overrides
            .keys()
            .chain(other.overrides.keys())
            .flat_map(|p| p.iter().map(|x| x.abs()))
            .max()
            .unwrap_or(0);
        reach + span + 1
    }
}

pub(crate) fn torus_index(periods: &[usize], p: &[i64]) -> usize {
    let mut idx = 0usize;
    for (a, &per) in periods.iter().enumerate() {
        idx = idx * per + p[a].rem_euclid(per as i64) as usize;
    }
    idx
}

pub(crate) fn torus_point(periods: &[usize], mut idx: usize) -> Vec<i64> {
    let mut p = vec![0i64; periods.len()];
    for a in (0..periods.len()).rev() {
        p[a] = (idx % periods[a]) as i64;
        idx /= periods[a];
    }
    p
}

fn torus_invariant(periods: &[usize], cells: &[u8], axis: usize, q: usize) -> bool {
    (0..cells.len()).all(|i| {
        let mut pt = torus_point(periods, i);
        pt[axis] += q as i64;
        cells[torus_index(periods, &pt)] == cells[i]
    })
}

/// Points of the `l^inf` sphere of the given radius in `Z^rank`.
pub(crate) fn sphere(rank: usize, radius: i64) -> Vec<Vec<i64>> {
    if radius == 0 {
        return vec![vec![0; rank]];
    }
    let side = (2 * radius + 1) as usize;
    let total = side.pow(rank as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![0i64; rank];
            for slot in v.iter_mut().rev() {
                *slot = (idx % side) as i64 - radius;
                idx /= side;
            }
            v
        })
        .filter(|v| v.iter().any(|x| x.abs() == radius))
        .collect()
}

impl Configuration {
    pub fn constant(rank: usize, symbol: u8) -> Self {
        Self::periodic(&vec![1; rank], vec![symbol])
    }

    /// Fully periodic point: `cells` in row-major order over `[0, periods)`.
    pub fn periodic(periods: &[usize], cells: Vec<u8>) -> Self {
        assert!(!periods.is_empty(), "rank must be positive");
        if periods.len() == 1 {
            Configuration::Line(LineConfig::normalize(&cells, 0, &[], &cells))
        } else {
            Configuration::Torus(TorusConfig::normalize(periods, &cells, BTreeMap::new()))
        }
    }

    /// `... left left | center | right right ...` over `Z`, with `center` starting at
    /// `center_start`, the last symbol of `left` just before it and the first symbol of
    /// `right` just after it.
    pub fn line(left: &[u8], center_start: i64, center: &[u8], right: &[u8]) -> Self {
        assert!(!left.is_empty() && !right.is_empty(), "tails must be nonempty");
        let end = center_start + center.len() as i64;
        let pl = left.len() as i64;
        let pr = right.len() as i64;
        let left_abs: Vec<u8> = (0..pl).map(|j| left[(j - center_start).rem_euclid(pl) as usize]).collect();
        let right_abs: Vec<u8> = (0..pr).map(|j| right[(j - end).rem_euclid(pr) as usize]).collect();
        Configuration::Line(LineConfig::normalize(&left_abs, center_start, center, &right_abs))
    }

    /// Line point from tails anchored at 0 (`left[i mod |left|]` left of `start`).
    pub(crate) fn line_absolute(left: &[u8], start: i64, center: &[u8], right: &[u8]) -> Self {
        Configuration::Line(LineConfig::normalize(left, start, center, right))
    }

    pub(crate) fn torus_parts(periods: &[usize], cells: &[u8], overrides: BTreeMap<Vec<i64>, u8>) -> Self {
        Configuration::Torus(TorusConfig::normalize(periods, cells, overrides))
    }

    pub fn rank(&self) -> usize {
        match self {
            Configuration::Line(_) => 1,
            Configuration::Torus(t) => t.periods.len(),
        }
    }

    pub fn value(&self, p: &[i64]) -> u8 {
        match self {
            Configuration::Line(l) => l.value(p[0]),
            Configuration::Torus(t) => t.value(p),
        }
    }

    pub fn value_at(&self, g: &GroupElement) -> u8 {
        self.value(g.coords())
    }

    /// Same point with one cell replaced.
    pub fn with_override(&self, p: &[i64], symbol: u8) -> Self {
        match self {
            Configuration::Line(l) => {
                let i = p[0];
                let lo = l.start.min(i);
                let hi = l.center_end().max(i + 1);
                let center: Vec<u8> = (lo..hi).map(|j| if j == i { symbol } else { l.value(j) }).collect();
                Configuration::Line(LineConfig::normalize(&l.left, lo, &center, &l.right))
            }
            Configuration::Torus(t) => {
                let mut overrides = t.overrides.clone();
                overrides.insert(p.to_vec(), symbol);
                Configuration::Torus(TorusConfig::normalize(&t.periods, &t.cells, overrides))
            }
        }
    }

    /// `(g x)(h) = x(h - g)`.
    pub fn shift(&self, g: &[i64]) -> Self {
        assert_eq!(g.len(), self.rank(), "shift vector rank mismatch");
        match self {
            Configuration::Line(l) => Configuration::Line(l.shifted(g[0])),
            Configuration::Torus(t) => Configuration::Torus(t.shifted(g)),
        }
    }

    pub fn shift_by(&self, g: &GroupElement) -> Self {
        self.shift(g.coords())
    }

    /// Whether every translate by `d * e_i` fixes the point.
    pub fn is_fixed_by_lattice(&self, d: usize) -> bool {
        match self {
            Configuration::Line(l) => l.is_periodic() && d.is_multiple_of(l.left.len()),
            Configuration::Torus(t) => t.overrides.is_empty() && t.periods.iter().all(|&p| d.is_multiple_of(p)),
        }
    }

    pub fn restrict(&self, support: &FiniteSubset) -> Pattern {
        let values = support.iter().map(|g| self.value(g.coords())).collect();
        Pattern::new(support.clone(), values).expect("values match support")
    }

    /// Smallest `l^inf` norm of a cell where the two points differ.
    pub fn difference_radius(&self, other: &Configuration) -> Option<u64> {
        if self == other {
            return None;
        }
        let rank = self.rank();
        assert_eq!(rank, other.rank(), "configurations over different groups");
        let bound = match (self, other) {
            (Configuration::Line(a), Configuration::Line(b)) => a.differing_bound(b),
            (Configuration::Torus(a), Configuration::Torus(b)) => a.differing_bound(b),
            _ => unreachable!("rank decides the representation"),
        };
        for r in 0..=bound {
            if rank == 1 {
                if self.value(&[r]) != other.value(&[r]) || self.value(&[-r]) != other.value(&[-r]) {
                    return Some(r as u64);
                }
            } else if sphere(rank, r).iter().any(|p| self.value(p) != other.value(p)) {
                return Some(r as u64);
            }
        }
        unreachable!("distinct canonical configurations differ within the bound")
    }

    pub fn describe(&self, alphabet: &Alphabet) -> String {
        match self {
            Configuration::Line(l) if l.is_periodic() => {
                format!("({})^inf", alphabet.decode(&l.left))
            }
            Configuration::Line(l) => {
                // tails shown as the words adjacent to the center
                let pl = l.left.len() as i64;
                let pr = l.right.len() as i64;
                let left: Vec<u8> = (l.start - pl..l.start).map(|i| l.value(i)).collect();
                let right: Vec<u8> = (l.center_end()..l.center_end() + pr).map(|i| l.value(i)).collect();
                format!(
                    "({})^inf [{}@{}] ({})^inf",
                    alphabet.decode(&left),
                    alphabet.decode(&l.center),
                    l.start,
                    alphabet.decode(&right)
                )
            }
            Configuration::Torus(t) => {
                let mut s = format!(
                    "periodic {:?} [{}]",
                    t.periods,
                    alphabet.decode(&t.cells)
                );
                for (p, &v) in &t.overrides {
                    s.push_str(&format!(" {}@{:?}", alphabet.symbol(v), p));
                }
                s
            }
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = Alphabet::digits(36);
        write!(f, "{}", self.describe(&digits))
    }
}

impl Subshift {
    /// Membership of a finitely described point.
    pub fn contains(&self, x: &Configuration) -> bool {
        if x.rank() != self.rank() {
            return false;
        }
        let k = self.symbols() as u8;
        match x {
            Configuration::Line(l) => {
                if l.left.iter().chain(&l.center).chain(&l.right).any(|&v| v >= k) {
                    return false;
                }
                let (min, width) = self.line_span();
                let w = width as i64;
                let lo = l.start - w - l.left.len() as i64 - 1 - min;
                let hi = l.center_end() + w + l.right.len() as i64 + 1 - min;
                (lo..=hi).all(|t| self.window_ok(&[t], |p| l.value(p[0])))
            }
            Configuration::Torus(t) => {
                if t.cells.iter().chain(t.overrides.values()).any(|&v| v >= k) {
                    return false;
                }
                let total = t.cells.len();
                let background_ok = (0..total).all(|i| {
                    let pt = torus_point(&t.periods, i);
                    self.window_ok(&pt, |p| t.background(p))
                });
                if !background_ok {
                    return false;
                }
                let mut starts = std::collections::BTreeSet::new();
                for pos in t.overrides.keys() {
                    for o in self.offsets() {
                        starts.insert(pos.iter().zip(o).map(|(a, b)| a - b).collect::<Vec<_>>());
                    }
                }
                starts.iter().all(|s| self.window_ok(s, |p| t.value(p)))
            }
        }
    }
}
