//! Finitely generated groups with canonical element normal forms.
//!
//! Three families are supported: integer lattices `Z^r` (elements are integer
//! vectors), free groups `F_k` (freely reduced words) and finite cyclic groups
//! `Z/nZ` (residues). Every element has exactly one representation, so the
//! derived `Eq`, `Ord` and `Hash` implementations agree with equality in the
//! group.
//!
//! The exhausting sequence of balls is fixed per model: `ball(n)` is empty for
//! `n = 0` and otherwise holds the elements of word length at most `n - 1`
//! (the `l^inf` norm for lattices).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The family and rank of a group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupModel {
    /// `Z^r`, written additively.
    Lattice(usize),
    /// The free group on `k` generators.
    Free(usize),
    /// `Z/nZ`.
    Cyclic(u64),
}

/// An element in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Lattice(Vec<i64>),
    /// Reduced word: letter `+i` is generator `i` (1-based), `-i` its inverse.
    Free(Vec<i16>),
    Cyclic(u64),
}

impl GroupModel {
    pub fn lattice(rank: usize) -> Self {
        GroupModel::Lattice(rank)
    }

    pub fn free(rank: usize) -> Self {
        GroupModel::Free(rank)
    }

    pub fn cyclic(order: u64) -> Self {
        GroupModel::Cyclic(order)
    }

    /// Rank of a lattice model, `None` for the other families.
    pub fn lattice_rank(&self) -> Option<usize> {
        match self {
            GroupModel::Lattice(r) => Some(*r),
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupModel::Lattice(r) => GroupElement::Lattice(vec![0; *r]),
            GroupModel::Free(_) => GroupElement::Free(Vec::new()),
            GroupModel::Cyclic(_) => GroupElement::Cyclic(0),
        }
    }

    /// Symmetric generating set order: `e_1..e_r`, `a, b, ..`, or `1`.
    pub fn generators(&self) -> Vec<GroupElement> {
        match self {
            GroupModel::Lattice(r) => (0..*r)
                .map(|i| {
                    let mut v = vec![0; *r];
                    v[i] = 1;
                    GroupElement::Lattice(v)
                })
                .collect(),
            GroupModel::Free(k) => (1..=*k as i16).map(|i| GroupElement::Free(vec![i])).collect(),
            GroupModel::Cyclic(n) => {
                if *n <= 1 {
                    Vec::new()
                } else {
                    vec![GroupElement::Cyclic(1)]
                }
            }
        }
    }

    /// Generator symbols as printed in element notation.
    pub fn generator_symbols(&self) -> Vec<String> {
        match self {
            GroupModel::Lattice(r) => (1..=*r).map(|i| format!("e{i}")).collect(),
            GroupModel::Free(k) => (0..*k).map(|i| letter(i as u8).to_string()).collect(),
            GroupModel::Cyclic(n) => {
                if *n <= 1 {
                    Vec::new()
                } else {
                    vec!["1".to_string()]
                }
            }
        }
    }

    /// Whether `g` is a well-formed normal form for this model.
    pub fn owns(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (GroupModel::Lattice(r), GroupElement::Lattice(v)) => v.len() == *r,
            (GroupModel::Free(k), GroupElement::Free(w)) => {
                w.iter().all(|&l| l != 0 && (l.unsigned_abs() as usize) <= *k)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (GroupModel::Cyclic(n), GroupElement::Cyclic(x)) => x < n,
            _ => false,
        }
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (self, g, h) {
            (GroupModel::Lattice(_), GroupElement::Lattice(a), GroupElement::Lattice(b)) => {
                GroupElement::Lattice(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupModel::Free(_), GroupElement::Free(a), GroupElement::Free(b)) => {
                let mut out = a.clone();
                for &l in b {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                GroupElement::Free(out)
            }
            (GroupModel::Cyclic(n), GroupElement::Cyclic(a), GroupElement::Cyclic(b)) => {
                GroupElement::Cyclic(((*a as u128 + *b as u128) % *n as u128) as u64)
            }
            _ => panic!("multiply: element does not belong to {self}"),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        match (self, g) {
            (GroupModel::Lattice(_), GroupElement::Lattice(a)) => {
                GroupElement::Lattice(a.iter().map(|x| -x).collect())
            }
            (GroupModel::Free(_), GroupElement::Free(w)) => {
                GroupElement::Free(w.iter().rev().map(|l| -l).collect())
            }
            (GroupModel::Cyclic(n), GroupElement::Cyclic(a)) => GroupElement::Cyclic((n - a) % n),
            _ => panic!("inverse: element does not belong to {self}"),
        }
    }

    /// Word length with respect to the standard generators (`l^inf` norm on lattices).
    pub fn length(&self, g: &GroupElement) -> u64 {
        match (self, g) {
            (GroupModel::Lattice(_), GroupElement::Lattice(a)) => {
                a.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
            }
            (GroupModel::Free(_), GroupElement::Free(w)) => w.len() as u64,
            (GroupModel::Cyclic(n), GroupElement::Cyclic(a)) => (*a).min(n - a),
            _ => panic!("length: element does not belong to {self}"),
        }
    }

    /// The `n`-th set of the exhausting sequence: `{g : |g| <= n - 1}`, empty for `n = 0`.
    pub fn ball(&self, n: u32) -> FiniteSubset {
        if n == 0 {
            return FiniteSubset::empty(*self);
        }
        let radius = (n - 1) as i64;
        let elements = match self {
            GroupModel::Lattice(r) => lattice_box(*r, radius),
            GroupModel::Free(k) => free_ball(*k, radius as usize),
            GroupModel::Cyclic(order) => {
                let order = *order;
                (0..order)
                    .filter(|&x| x.min(order - x) as i64 <= radius)
                    .map(GroupElement::Cyclic)
                    .collect()
            }
        };
        FiniteSubset::from_sorted_unchecked(*self, elements)
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let text = text.trim();
        let bad = || Error::InvalidParameter(format!("cannot parse {text:?} as an element of {self}"));
        let element = match self {
            GroupModel::Lattice(r) => {
                let inner = text.trim_start_matches('(').trim_end_matches(')');
                let coords = inner
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                if coords.len() != *r {
                    return Err(bad());
                }
                GroupElement::Lattice(coords)
            }
            GroupModel::Free(_) => {
                if text == "e" {
                    GroupElement::Free(Vec::new())
                } else {
                    let letters = text
                        .chars()
                        .map(|c| {
                            if c.is_ascii_lowercase() {
                                Ok((c as u8 - b'a' + 1) as i16)
                            } else if c.is_ascii_uppercase() {
                                Ok(-((c as u8 - b'A' + 1) as i16))
                            } else {
                                Err(bad())
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let g = GroupElement::Free(letters);
                    if !self.owns(&g) {
                        // accept unreduced input by reducing it
                        let GroupElement::Free(w) = g else { unreachable!() };
                        let reduced = w.iter().fold(self.identity(), |acc, &l| {
                            self.multiply(&acc, &GroupElement::Free(vec![l]))
                        });
                        if !self.owns(&reduced) {
                            return Err(bad());
                        }
                        reduced
                    } else {
                        g
                    }
                }
            }
            GroupModel::Cyclic(n) => {
                let v: i64 = text.parse().map_err(|_| bad())?;
                GroupElement::Cyclic(v.rem_euclid(*n as i64) as u64)
            }
        };
        Ok(element)
    }

    /// Parses `lattice:2`, `free:2`, `cyclic:12`.
    pub fn parse(text: &str) -> Result<Self> {
        text.parse()
    }
}

impl FromStr for GroupModel {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown group declaration {text:?}"));
        let (kind, arg) = text.trim().split_once(':').ok_or_else(bad)?;
        let arg = arg.trim();
        match kind.trim() {
            "lattice" => Ok(GroupModel::Lattice(arg.parse().map_err(|_| bad())?)),
            "free" => Ok(GroupModel::Free(arg.parse().map_err(|_| bad())?)),
            "cyclic" => {
                let n: u64 = arg.parse().map_err(|_| bad())?;
                if n == 0 {
                    return Err(bad());
                }
                Ok(GroupModel::Cyclic(n))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupModel::Lattice(r) => write!(f, "lattice:{r}"),
            GroupModel::Free(k) => write!(f, "free:{k}"),
            GroupModel::Cyclic(n) => write!(f, "cyclic:{n}"),
        }
    }
}

fn letter(i: u8) -> char {
    (b'a' + i) as char
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Lattice(v) if v.len() == 1 => write!(f, "{}", v[0]),
            GroupElement::Lattice(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            GroupElement::Free(w) if w.is_empty() => write!(f, "e"),
            GroupElement::Free(w) => {
                for &l in w {
                    let c = letter((l.unsigned_abs() - 1) as u8);
                    if l < 0 {
                        write!(f, "{}", c.to_ascii_uppercase())?;
                    } else {
                        write!(f, "{c}")?;
                    }
                }
                Ok(())
            }
            GroupElement::Cyclic(x) => write!(f, "{x}"),
        }
    }
}

impl GroupElement {
    /// Lattice coordinates; panics for other families.
    pub fn coords(&self) -> &[i64] {
        match self {
            GroupElement::Lattice(v) => v,
            _ => panic!("coords() called on a non-lattice element"),
        }
    }
}

fn lattice_box(rank: usize, radius: i64) -> Vec<GroupElement> {
    let side = (2 * radius + 1) as usize;
    let total = side.pow(rank as u32);
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut v = vec![0i64; rank];
        for slot in v.iter_mut().rev() {
            *slot = (idx % side) as i64 - radius;
            idx /= side;
        }
        out.push(GroupElement::Lattice(v));
    }
    out
}

fn free_ball(rank: usize, radius: usize) -> Vec<GroupElement> {
    let mut out = vec![Vec::<i16>::new()];
    let mut frontier = vec![Vec::<i16>::new()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 1..=rank as i16 {
                for l in [g, -g] {
                    if w.last() != Some(&-l) {
                        let mut v = w.clone();
                        v.push(l);
                        next.push(v);
                    }
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out: Vec<GroupElement> = out.into_iter().map(GroupElement::Free).collect();
    out.sort();
    out
}

/// A deduplicated finite set of elements of one group, kept sorted by normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSubset {
    model: GroupModel,
    elements: Vec<GroupElement>,
}

impl FiniteSubset {
    pub fn empty(model: GroupModel) -> Self {
        FiniteSubset {
            model,
            elements: Vec::new(),
        }
    }

    pub fn new(model: GroupModel, elements: impl IntoIterator<Item = GroupElement>) -> Result<Self> {
        let mut elements: Vec<GroupElement> = elements.into_iter().collect();
        if let Some(g) = elements.iter().find(|g| !model.owns(g)) {
            return Err(Error::ModelMismatch(format!("{g:?}"), model.to_string()));
        }
        elements.sort();
        elements.dedup();
        Ok(FiniteSubset { model, elements })
    }

    /// Lattice subset from coordinate tuples.
    pub fn from_coords<I, V>(rank: usize, coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<i64>>,
    {
        Self::new(
            GroupModel::Lattice(rank),
            coords.into_iter().map(|c| GroupElement::Lattice(c.into())),
        )
    }

    /// Subset of `Z` from integers.
    pub fn integers(values: impl IntoIterator<Item = i64>) -> Self {
        Self::new(
            GroupModel::Lattice(1),
            values.into_iter().map(|v| GroupElement::Lattice(vec![v])),
        )
        .expect("integers always belong to Z")
    }

    pub(crate) fn from_sorted_unchecked(model: GroupModel, elements: Vec<GroupElement>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        FiniteSubset { model, elements }
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Position of `g` in the sorted order.
    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }

    fn check_model(&self, other: &FiniteSubset) -> Result<()> {
        if self.model != other.model {
            return Err(Error::ModelMismatch(self.model.to_string(), other.model.to_string()));
        }
        Ok(())
    }

    pub fn union(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        self.check_model(other)?;
        let mut elements = self.elements.clone();
        elements.extend(other.elements.iter().cloned());
        elements.sort();
        elements.dedup();
        Ok(FiniteSubset::from_sorted_unchecked(self.model, elements))
    }

    pub fn intersection(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        self.check_model(other)?;
        let elements = self.elements.iter().filter(|g| other.contains(g)).cloned().collect();
        Ok(FiniteSubset::from_sorted_unchecked(self.model, elements))
    }

    pub fn difference(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        self.check_model(other)?;
        let elements = self.elements.iter().filter(|g| !other.contains(g)).cloned().collect();
        Ok(FiniteSubset::from_sorted_unchecked(self.model, elements))
    }

    pub fn is_subset(&self, other: &FiniteSubset) -> bool {
        self.model == other.model && self.elements.iter().all(|g| other.contains(g))
    }

    /// `{f1 * f2 : f1 in self, f2 in other}`.
    pub fn product(&self, other: &FiniteSubset) -> Result<FiniteSubset> {
        self.check_model(other)?;
        let mut elements = Vec::with_capacity(self.len() * other.len());
        for a in &self.elements {
            for b in &other.elements {
                elements.push(self.model.multiply(a, b));
            }
        }
        elements.sort();
        elements.dedup();
        Ok(FiniteSubset::from_sorted_unchecked(self.model, elements))
    }

    /// Right translate `{f * g : f in self}`.
    pub fn translate(&self, g: &GroupElement) -> FiniteSubset {
        let mut elements: Vec<_> = self.elements.iter().map(|f| self.model.multiply(f, g)).collect();
        elements.sort();
        elements.dedup();
        FiniteSubset::from_sorted_unchecked(self.model, elements)
    }

    pub fn inverse(&self) -> FiniteSubset {
        let mut elements: Vec<_> = self.elements.iter().map(|g| self.model.inverse(g)).collect();
        elements.sort();
        FiniteSubset::from_sorted_unchecked(self.model, elements)
    }

    pub fn is_symmetric(&self) -> bool {
        self.elements.iter().all(|g| self.contains(&self.model.inverse(g)))
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(&self.model.identity())
    }
}

impl<'a> IntoIterator for &'a FiniteSubset {
    type Item = &'a GroupElement;
    type IntoIter = std::slice::Iter<'a, GroupElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

impl fmt::Display for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

/// `{f * s : f in F}` are pairwise disjoint for distinct `s, t` in `V`.
pub fn is_separated(f: &FiniteSubset, v: &FiniteSubset) -> Result<bool> {
    f.check_model(v)?;
    let mut seen = std::collections::HashSet::new();
    for s in v {
        for g in f {
            if !seen.insert(f.model.multiply(g, s)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `F1 * F2`.
pub fn set_product(f1: &FiniteSubset, f2: &FiniteSubset) -> Result<FiniteSubset> {
    f1.product(f2)
}
