//! Finite near-actions `sigma : G -> Sym(d)` and their quality at finite scale.

mod format;

use std::collections::BTreeMap;
use std::fmt;

use num::rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement, GroupModel};

/// A bijection of `[d] = {0, .., d - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation((0..d as u32).collect())
    }

    pub fn new(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &a in &images {
            match seen.get_mut(a as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::InvalidParameter(format!("{images:?} is not a bijection of [{}]", images.len()))),
            }
        }
        Ok(Permutation(images))
    }

    /// `a -> a + k mod d`.
    pub fn rotation(d: usize, k: i64) -> Self {
        Permutation((0..d as i64).map(|a| (a + k).rem_euclid(d as i64) as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, a: usize) -> usize {
        self.0[a] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// `self ∘ other`, i.e. `a -> self(other(a))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Permutation(other.0.iter().map(|&a| self.0[a as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.len()];
        for (a, &b) in self.0.iter().enumerate() {
            inv[b as usize] = a as u32;
        }
        Permutation(inv)
    }
}

/// Normalized Hamming distance `|{a : s(a) != t(a)}| / d`.
pub fn hamming_distance(s: &Permutation, t: &Permutation) -> Result<Ratio<u64>> {
    if s.len() != t.len() {
        return Err(Error::SizeMismatch(s.len(), t.len()));
    }
    if s.is_empty() {
        return Err(Error::InvalidParameter("permutations of the empty set".into()));
    }
    let moved = s.0.iter().zip(&t.0).filter(|(a, b)| a != b).count() as u64;
    Ok(Ratio::new(moved, s.len() as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Cyclic,
    Torus,
    WordExtensionRandom { seed: u64 },
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Construction::Cyclic => write!(f, "cyclic"),
            Construction::Torus => write!(f, "torus"),
            Construction::WordExtensionRandom { seed } => write!(f, "word-extension-random(seed={seed})"),
        }
    }
}

/// Explicit permutation tables over a declared support; queries outside it fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoficApproximation {
    model: GroupModel,
    d: usize,
    table: BTreeMap<GroupElement, Permutation>,
    construction: Construction,
}

impl SoficApproximation {
    pub fn new(
        model: GroupModel,
        d: usize,
        table: BTreeMap<GroupElement, Permutation>,
        construction: Construction,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("approximations need d >= 1".into()));
        }
        for (g, p) in &table {
            if !model.owns(g) {
                return Err(Error::ModelMismatch(g.to_string(), model.to_string()));
            }
            if p.len() != d {
                return Err(Error::SizeMismatch(p.len(), d));
            }
        }
        let e = model.identity();
        if !table.contains_key(&e) {
            return Err(Error::InvalidParameter("support must contain the identity".into()));
        }
        if let Some(g) = table.keys().find(|g| !table.contains_key(&model.inverse(g))) {
            return Err(Error::InvalidParameter(format!("support is not closed under inverses: {g}")));
        }
        Ok(SoficApproximation { model, d, table, construction })
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn support(&self) -> FiniteSubset {
        FiniteSubset::new(self.model, self.table.keys().cloned()).expect("elements belong to the model")
    }

    pub fn covers(&self, set: &FiniteSubset) -> bool {
        set.iter().all(|g| self.table.contains_key(g))
    }

    pub fn sigma(&self, g: &GroupElement) -> Result<&Permutation> {
        self.table.get(g).ok_or_else(|| Error::Support(g.to_string()))
    }

    pub fn table(&self) -> &BTreeMap<GroupElement, Permutation> {
        &self.table
    }

    /// One line per supported element; see [`SoficApproximation::parse`].
    pub fn dump(&self) -> String {
        format::dump(self)
    }

    pub fn parse(text: &str) -> Result<Self> {
        format::parse(text)
    }
}

/// `sigma(k)(a) = a + k mod d` for `|k| <= d - 1`.
pub fn cyclic_approximation(d: usize) -> Result<SoficApproximation> {
    cyclic_approximation_with_radius(d, d.saturating_sub(1) as i64)
}

pub fn cyclic_approximation_with_radius(d: usize, radius: i64) -> Result<SoficApproximation> {
    torus_with(d, 1, radius, Construction::Cyclic)
}

/// Translations of `(Z/dZ)^r`, points indexed row-major; support radius `min(d - 1, 4)`.
pub fn torus_approximation(d: usize, rank: usize) -> Result<SoficApproximation> {
    torus_approximation_with_radius(d, rank, d.saturating_sub(1).min(4) as i64)
}

pub fn torus_approximation_with_radius(d: usize, rank: usize, radius: i64) -> Result<SoficApproximation> {
    let tag = if rank == 1 { Construction::Cyclic } else { Construction::Torus };
    torus_with(d, rank, radius, tag)
}

fn torus_with(d: usize, rank: usize, radius: i64, tag: Construction) -> Result<SoficApproximation> {
    if d == 0 || rank == 0 || radius < 0 {
        return Err(Error::InvalidParameter(format!("torus approximation needs d, rank >= 1 (got d={d}, rank={rank})")));
    }
    let model = GroupModel::Lattice(rank);
    let points = d.checked_pow(rank as u32).filter(|&n| n <= u32::MAX as usize);
    let points = points.ok_or_else(|| Error::InvalidParameter(format!("torus of side {d} in rank {rank} is too large")))?;
    let table = model
        .ball(radius as u32 + 1)
        .iter()
        .map(|g| {
            let v = g.coords();
            let images = (0..points)
                .map(|a| {
                    let mut rest = a;
                    let mut out = 0usize;
                    let mut scale = 1usize;
                    for axis in (0..rank).rev() {
                        let c = (rest % d) as i64;
                        rest /= d;
                        out += (c + v[axis]).rem_euclid(d as i64) as usize * scale;
                        scale *= d;
                    }
                    out as u32
                })
                .collect();
            (g.clone(), Permutation(images))
        })
        .collect();
    SoficApproximation::new(model, points, table, tag)
}

/// Uniform random permutations for the generators of `F_k` (seeded), extended to
/// every reduced word of length `<= radius` as the product along the word.
pub fn word_extension_random(k: usize, d: usize, seed: u64, radius: u32) -> Result<SoficApproximation> {
    if d < 2 || k == 0 {
        return Err(Error::InvalidParameter(format!("word extension needs k >= 1 and d >= 2 (got k={k}, d={d})")));
    }
    let model = GroupModel::Free(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generators: Vec<Permutation> = (0..k)
        .map(|_| {
            let mut images: Vec<u32> = (0..d as u32).collect();
            images.shuffle(&mut rng);
            Permutation(images)
        })
        .collect();
    let letter = |l: i16| -> Permutation {
        let p = &generators[l.unsigned_abs() as usize - 1];
        if l > 0 {
            p.clone()
        } else {
            p.inverse()
        }
    };
    let mut table = BTreeMap::new();
    table.insert(model.identity(), Permutation::identity(d));
    let mut frontier = vec![(Vec::<i16>::new(), Permutation::identity(d))];
    for _ in 0..radius {
        let mut next = Vec::new();
        for (w, p) in &frontier {
            for l in (1..=k as i16).flat_map(|i| [i, -i]) {
                if w.last() == Some(&-l) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                let q = p.compose(&letter(l));
                table.insert(GroupElement::Free(v.clone()), q.clone());
                next.push((v, q));
            }
        }
        frontier = next;
    }
    SoficApproximation::new(model, d, table, Construction::WordExtensionRandom { seed })
}

/// Approximations with strictly increasing `d`.
#[derive(Clone, Debug, Default)]
pub struct ApproximationSequence {
    members: Vec<SoficApproximation>,
}

impl ApproximationSequence {
    pub fn new(members: Vec<SoficApproximation>) -> Result<Self> {
        let mut seq = ApproximationSequence::default();
        for m in members {
            seq.push(m)?;
        }
        Ok(seq)
    }

    pub fn push(&mut self, approx: SoficApproximation) -> Result<()> {
        if let Some(last) = self.members.last() {
            if approx.d <= last.d {
                return Err(Error::InvalidParameter(format!(
                    "sizes must increase strictly: {} after {}",
                    approx.d, last.d
                )));
            }
            if approx.model != last.model {
                return Err(Error::ModelMismatch(approx.model.to_string(), last.model.to_string()));
            }
        }
        self.members.push(approx);
        Ok(())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SoficApproximation> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QualityReport {
    pub d: usize,
    /// `eta(sigma(st), sigma(s) sigma(t))` for every ordered pair.
    pub defects: Vec<(GroupElement, GroupElement, Ratio<u64>)>,
    /// `eta(sigma(s), sigma(t))` for every unordered pair of distinct elements.
    pub separations: Vec<(GroupElement, GroupElement, Ratio<u64>)>,
}

impl QualityReport {
    pub fn max_defect(&self) -> Ratio<u64> {
        self.defects.iter().map(|t| t.2).max().unwrap_or_else(|| Ratio::from_integer(0))
    }

    pub fn min_separation(&self) -> Option<Ratio<u64>> {
        self.separations.iter().map(|t| t.2).min()
    }
}

/// Evaluates multiplicativity and freeness on `test_set`.
pub fn quality(approx: &SoficApproximation, test_set: &FiniteSubset) -> Result<QualityReport> {
    let model = approx.model;
    if test_set.model() != model {
        return Err(Error::ModelMismatch(test_set.model().to_string(), model.to_string()));
    }
    let elems = test_set.elements();
    for s in elems {
        approx.sigma(s)?;
        for t in elems {
            approx.sigma(&model.multiply(s, t))?;
        }
    }
    let defects = elems
        .par_iter()
        .flat_map_iter(|s| {
            elems.iter().map(move |t| {
                let st = approx.sigma(&model.multiply(s, t)).unwrap();
                let prod = approx.sigma(s).unwrap().compose(approx.sigma(t).unwrap());
                (s.clone(), t.clone(), hamming_distance(st, &prod).unwrap())
            })
        })
        .collect();
    let separations = (0..elems.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..elems.len()).map(move |j| {
                let eta = hamming_distance(approx.sigma(&elems[i]).unwrap(), approx.sigma(&elems[j]).unwrap()).unwrap();
                (elems[i].clone(), elems[j].clone(), eta)
            })
        })
        .collect();
    Ok(QualityReport {
        d: approx.d,
        defects,
        separations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(d: usize) -> impl Strategy<Value = Permutation> {
        Just((0..d as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(Permutation)
    }

    #[test]
    fn hamming_examples() {
        let id = Permutation::identity(3);
        let swap = Permutation::new(vec![0, 2, 1]).unwrap();
        assert_eq!(hamming_distance(&id, &id).unwrap(), Ratio::from_integer(0));
        assert_eq!(hamming_distance(&id, &swap).unwrap(), Ratio::new(2, 3));
        assert!(matches!(
            hamming_distance(&id, &Permutation::identity(4)),
            Err(Error::SizeMismatch(3, 4))
        ));
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    proptest! {
        #[test]
        fn hamming_is_a_bi_invariant_metric(
            (p, s, t, r, u) in (1usize..64).prop_flat_map(|d| (perm(d), perm(d), perm(d), perm(d), perm(d)))
        ) {
            let st = hamming_distance(&s, &t).unwrap();
            prop_assert_eq!(hamming_distance(&p.compose(&s).compose(&r), &p.compose(&t).compose(&r)).unwrap(), st);
            prop_assert!(st <= hamming_distance(&s, &u).unwrap() + hamming_distance(&u, &t).unwrap());
            prop_assert_eq!(st, hamming_distance(&t, &s).unwrap());
        }
    }

    #[test]
    fn cyclic_examples() {
        let c = cyclic_approximation(5).unwrap();
        let g = |k: i64| GroupElement::Lattice(vec![k]);
        assert_eq!(c.sigma(&g(0)).unwrap(), &Permutation::identity(5));
        let prod = c.sigma(&g(1)).unwrap().compose(c.sigma(&g(2)).unwrap());
        assert_eq!(hamming_distance(&prod, c.sigma(&g(3)).unwrap()).unwrap(), Ratio::from_integer(0));
        assert_eq!(hamming_distance(c.sigma(&g(1)).unwrap(), c.sigma(&g(3)).unwrap()).unwrap(), Ratio::from_integer(1));
        assert!(matches!(c.sigma(&g(5)), Err(Error::Support(_))));
    }

    #[test]
    fn cyclic_quality_is_exact() {
        let c = cyclic_approximation(12).unwrap();
        let q = quality(&c, &FiniteSubset::integers(-2..=2)).unwrap();
        assert_eq!(q.defects.len(), 25);
        assert_eq!(q.max_defect(), Ratio::from_integer(0));
        assert_eq!(q.min_separation(), Some(Ratio::from_integer(1)));
        let tight = cyclic_approximation_with_radius(12, 3).unwrap();
        assert!(matches!(quality(&tight, &FiniteSubset::integers(-2..=2)), Err(Error::Support(e)) if e == "-4"));
    }

    #[test]
    fn torus_quality_is_exact() {
        let t = torus_approximation(5, 2).unwrap();
        let test = GroupModel::Lattice(2).ball(2);
        let q = quality(&t, &test).unwrap();
        assert_eq!(q.max_defect(), Ratio::from_integer(0));
        // d = 5 > 2 * 1, so distinct vectors in the test set stay distinct mod d
        assert_eq!(q.min_separation(), Some(Ratio::from_integer(1)));
        assert_eq!(t.d(), 25);
    }

    #[test]
    fn word_extension_has_no_defect() {
        let w = word_extension_random(2, 50, 7, 4).unwrap();
        assert_eq!(w.sigma(&GroupModel::Free(2).identity()).unwrap(), &Permutation::identity(50));
        let q = quality(&w, &GroupModel::Free(2).ball(3)).unwrap();
        assert_eq!(q.max_defect(), Ratio::from_integer(0));
        assert_eq!(w, word_extension_random(2, 50, 7, 4).unwrap());
        assert_ne!(w, word_extension_random(2, 50, 8, 4).unwrap());
    }

    #[test]
    fn sequences_increase() {
        let a = cyclic_approximation(4).unwrap();
        let b = cyclic_approximation(8).unwrap();
        assert!(ApproximationSequence::new(vec![a.clone(), b.clone()]).is_ok());
        assert!(ApproximationSequence::new(vec![b, a]).is_err());
    }
}
