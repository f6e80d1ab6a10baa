//! Microstates `phi : [d] -> X`, the good-map condition, and separated counts.

mod estimate;
mod separated;

pub use estimate::{
    entropy_gap_experiment, estimate_entropy, estimate_entropy_with, pattern_complexity_bound,
    transfer_matrix_bracket, transfer_matrix_entropy, EntropyEstimate, EstimateOptions, GapReport, TraceRow,
};
pub use separated::{count_separated, max_separated_subset, CountMode, DEFAULT_EXACT_BUDGET};

use std::collections::HashMap;

use num::rational::Ratio;
use num::{BigInt, BigRational, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement};
use crate::shift::{config_distance, periodic_cells, Configuration, Dyadic, Subshift};
use crate::sofic::{Construction, SoficApproximation};

/// Interned configurations shared by the microstates of one space.
#[derive(Clone, Debug, Default)]
pub struct ConfigDictionary {
    configs: Vec<Configuration>,
    index: HashMap<Configuration, u32>,
}

impl ConfigDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, x: Configuration) -> u32 {
        if let Some(&i) = self.index.get(&x) {
            return i;
        }
        let i = self.configs.len() as u32;
        self.index.insert(x.clone(), i);
        self.configs.push(x);
        i
    }

    pub fn find(&self, x: &Configuration) -> Option<u32> {
        self.index.get(x).copied()
    }

    pub fn get(&self, i: u32) -> &Configuration {
        &self.configs[i as usize]
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }
}

/// `phi(a)` is entry `assignment[a]` of a [`ConfigDictionary`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Microstate {
    assignment: Vec<u32>,
}

impl Microstate {
    pub fn new(assignment: Vec<u32>) -> Self {
        Microstate { assignment }
    }

    pub fn d(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn get(&self, a: usize) -> u32 {
        self.assignment[a]
    }
}

fn same_size(phi: &Microstate, psi: &Microstate) -> Result<()> {
    if phi.d() != psi.d() {
        return Err(Error::SizeMismatch(phi.d(), psi.d()));
    }
    Ok(())
}

/// `rho_inf(phi, psi) = max_a rho(phi(a), psi(a))`, exactly.
pub fn map_distance_inf(dict: &ConfigDictionary, phi: &Microstate, psi: &Microstate) -> Result<Dyadic> {
    same_size(phi, psi)?;
    Ok(phi
        .assignment
        .iter()
        .zip(&psi.assignment)
        .map(|(&a, &b)| if a == b { Dyadic::Zero } else { config_distance(dict.get(a), dict.get(b)) })
        .max()
        .unwrap_or(Dyadic::Zero))
}

/// `rho_2(phi, psi)^2 = (1/d) sum_a rho(phi(a), psi(a))^2`, exactly.
pub fn map_distance_2_squared(dict: &ConfigDictionary, phi: &Microstate, psi: &Microstate) -> Result<BigRational> {
    same_size(phi, psi)?;
    let sum = phi
        .assignment
        .iter()
        .zip(&psi.assignment)
        .filter(|(a, b)| a != b)
        .map(|(&a, &b)| config_distance(dict.get(a), dict.get(b)).squared().to_rational())
        .fold(BigRational::zero(), |acc, t| acc + t);
    Ok(sum / BigRational::from_integer(BigInt::from(phi.d().max(1))))
}

pub fn map_distance_2(dict: &ConfigDictionary, phi: &Microstate, psi: &Microstate) -> Result<f64> {
    use num::ToPrimitive;
    Ok(map_distance_2_squared(dict, phi, psi)?.to_f64().unwrap_or(f64::NAN).sqrt())
}

/// `F`, `delta`, `eps` and the approximation defining `Map(X, rho, F, delta, sigma)`.
#[derive(Clone, Debug)]
pub struct EntropyParams {
    pub f: FiniteSubset,
    pub delta: Ratio<u64>,
    pub eps: Ratio<u64>,
    pub approximation: SoficApproximation,
}

impl EntropyParams {
    pub fn new(f: FiniteSubset, delta: Ratio<u64>, eps: Ratio<u64>, approximation: SoficApproximation) -> Result<Self> {
        if f.is_empty() {
            return Err(Error::InvalidParameter("F must be nonempty".into()));
        }
        if *delta.numer() == 0 || *eps.numer() == 0 {
            return Err(Error::InvalidParameter("delta and eps must be positive".into()));
        }
        if let Some(g) = f.iter().find(|g| approximation.sigma(g).is_err()) {
            return Err(Error::Support(g.to_string()));
        }
        Ok(EntropyParams { f, delta, eps, approximation })
    }

    pub fn d(&self) -> usize {
        self.approximation.d()
    }
}

pub(crate) fn big(q: Ratio<u64>) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

/// `rho(phi(sigma_s a), s phi(a))` for each `a`.
fn defects<'a>(
    dict: &'a ConfigDictionary,
    phi: &'a Microstate,
    s: &'a GroupElement,
    perm: &'a crate::sofic::Permutation,
) -> impl Iterator<Item = Dyadic> + 'a {
    (0..phi.d()).map(move |a| {
        let moved = dict.get(phi.get(perm.apply(a)));
        config_distance(moved, &dict.get(phi.get(a)).shift_by(s))
    })
}

fn check_f(phi: &Microstate, f: &FiniteSubset, approx: &SoficApproximation) -> Result<()> {
    if phi.d() != approx.d() {
        return Err(Error::SizeMismatch(phi.d(), approx.d()));
    }
    for s in f.iter() {
        approx.sigma(s)?;
    }
    Ok(())
}

/// `sum_a rho(phi(sigma_s a), s phi(a))^2 < d delta^2` for every `s` in `F`.
pub fn is_good_map(dict: &ConfigDictionary, phi: &Microstate, params: &EntropyParams) -> Result<bool> {
    is_good_on(dict, phi, &params.f, params.delta, &params.approximation)
}

fn is_good_on(
    dict: &ConfigDictionary,
    phi: &Microstate,
    f: &FiniteSubset,
    delta: Ratio<u64>,
    approx: &SoficApproximation,
) -> Result<bool> {
    check_f(phi, f, approx)?;
    let bound = big(delta) * big(delta) * BigRational::from_integer(BigInt::from(phi.d()));
    for s in f.iter() {
        let perm = approx.sigma(s)?;
        let sum = defects(dict, phi, s, perm)
            .filter(|r| *r != Dyadic::Zero)
            .fold(BigRational::zero(), |acc, r| acc + r.squared().to_rational());
        if sum >= bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `W_phi = {a : rho(phi(sigma_s a), s phi(a)) < delta^(1/2) for all s in K}`.
///
/// Errors unless `phi` is in `Map(X, rho, K, delta, sigma)`; the bound
/// `|W_phi| >= (1 - |K| delta) d` is then checked and a violation is an error.
pub fn good_coordinate_set(
    dict: &ConfigDictionary,
    phi: &Microstate,
    k: &FiniteSubset,
    delta: Ratio<u64>,
    approx: &SoficApproximation,
) -> Result<Vec<usize>> {
    if !is_good_on(dict, phi, k, delta, approx)? {
        return Err(Error::Precondition("the map is not in Map(X, rho, K, delta, sigma)".into()));
    }
    let d = phi.d();
    let mut good = vec![true; d];
    for s in k.iter() {
        let perm = approx.sigma(s)?;
        for (a, r) in defects(dict, phi, s, perm).enumerate() {
            // rho^2 < delta, exactly
            if !r.squared().lt_rational(&big(delta)) {
                good[a] = false;
            }
        }
    }
    let w: Vec<usize> = (0..d).filter(|&a| good[a]).collect();
    let floor = (Ratio::from_integer(1) - Ratio::from_integer(k.len() as u64) * delta) * Ratio::from_integer(d as u64);
    let have = Ratio::from_integer(w.len() as u64);
    // 1 - |K| delta may be negative, in which case the bound is vacuous
    if Ratio::from_integer(k.len() as u64) * delta <= Ratio::from_integer(1) && have < floor {
        return Err(Error::CertificateViolation(format!(
            "|W_phi| = {} below (1 - |K| delta) d = {floor}",
            w.len()
        )));
    }
    Ok(w)
}

/// Side `n` of the torus `(Z/nZ)^r` behind a cyclic or torus approximation.
pub(crate) fn torus_side(approx: &SoficApproximation) -> Result<(usize, usize)> {
    let rank = approx
        .model()
        .lattice_rank()
        .filter(|_| matches!(approx.construction(), Construction::Cyclic | Construction::Torus))
        .ok_or_else(|| Error::Precondition("periodic lifts need a cyclic or torus approximation".into()))?;
    let d = approx.d();
    let n = (1..=d).find(|n| n.pow(rank as u32) >= d).unwrap_or(1);
    if n.pow(rank as u32) != d {
        return Err(Error::Precondition(format!("{d} points is not a rank-{rank} torus")));
    }
    Ok((n, rank))
}

/// Row-major coordinates of point `a` of `(Z/nZ)^r`.
pub(crate) fn torus_coords(n: usize, rank: usize, mut a: usize) -> Vec<i64> {
    let mut v = vec![0i64; rank];
    for slot in v.iter_mut().rev() {
        *slot = (a % n) as i64;
        a /= n;
    }
    v
}

/// `phi_x(a) = a x`, exactly equivariant for a point fixed by `n Z^r`.
pub fn periodic_lift(dict: &mut ConfigDictionary, x: &Configuration, approx: &SoficApproximation) -> Result<Microstate> {
    let (n, rank) = torus_side(approx)?;
    if x.rank() != rank || !x.is_fixed_by_lattice(n) {
        return Err(Error::Precondition(format!("{x} is not fixed by {n}Z^{rank}")));
    }
    let assignment = (0..approx.d())
        .map(|a| dict.intern(x.shift(&torus_coords(n, rank, a))))
        .collect();
    Ok(Microstate::new(assignment))
}

/// A finite stand-in for `Map(X, rho, F, delta, sigma)`: every member passes [`is_good_map`].
#[derive(Clone, Debug)]
pub struct MicrostateSpace {
    params: EntropyParams,
    dict: ConfigDictionary,
    members: Vec<Microstate>,
    lifts: usize,
}

impl MicrostateSpace {
    pub fn new(params: EntropyParams) -> Self {
        MicrostateSpace {
            params,
            dict: ConfigDictionary::new(),
            members: Vec::new(),
            lifts: 0,
        }
    }

    /// All periodic lifts of points of `x` fixed by `n Z^r`.
    pub fn from_periodic_lifts(x: &Subshift, params: EntropyParams) -> Result<Self> {
        let (n, rank) = torus_side(&params.approximation)?;
        if x.rank() != rank {
            return Err(Error::ModelMismatch(x.group().to_string(), params.approximation.model().to_string()));
        }
        let periods = vec![n; rank];
        let cells = periodic_cells(x, n)?;
        let by_cells: HashMap<&[u8], u32> = cells.iter().enumerate().map(|(i, c)| (c.as_slice(), i as u32)).collect();
        let mut space = MicrostateSpace::new(params);
        for c in &cells {
            space.dict.intern(Configuration::periodic(&periods, c.clone()));
        }
        let d = space.params.d();
        // (a x)(h) = x(h - a): rotate the cells instead of shifting points
        let members: Vec<Microstate> = cells
            .par_iter()
            .map(|c| {
                let assignment = (0..d)
                    .map(|a| {
                        let shift = torus_coords(n, rank, a);
                        let rotated: Vec<u8> = (0..c.len())
                            .map(|h| {
                                let p = torus_coords(n, rank, h);
                                let q: usize = p
                                    .iter()
                                    .zip(&shift)
                                    .fold(0, |acc, (pi, si)| acc * n + (pi - si).rem_euclid(n as i64) as usize);
                                c[q]
                            })
                            .collect();
                        by_cells[rotated.as_slice()]
                    })
                    .collect();
                Microstate::new(assignment)
            })
            .collect();
        let verdicts: Vec<bool> = members
            .par_iter()
            .map(|m| is_good_map(&space.dict, m, &space.params))
            .collect::<Result<_>>()?;
        if let Some(i) = verdicts.iter().position(|ok| !ok) {
            return Err(Error::CertificateViolation(format!(
                "the lift of {} is not a good map",
                space.dict.get(i as u32)
            )));
        }
        space.lifts = members.len();
        space.members = members;
        Ok(space)
    }

    /// Adds `phi` if it is a good map; returns whether it was added.
    pub fn insert(&mut self, configs: Vec<Configuration>) -> Result<bool> {
        if configs.len() != self.params.d() {
            return Err(Error::SizeMismatch(configs.len(), self.params.d()));
        }
        let assignment = configs.into_iter().map(|c| self.dict.intern(c)).collect();
        let phi = Microstate::new(assignment);
        if !is_good_map(&self.dict, &phi, &self.params)? {
            return Ok(false);
        }
        self.members.push(phi);
        Ok(true)
    }

    /// Single-coordinate edits of the lifts: `phi(a)` gets one cell at norm
    /// `radius` changed. Edits leaving `x` or failing the good-map test are
    /// dropped; returns how many were kept.
    pub fn perturb(&mut self, x: &Subshift, radius: u32, per_lift: usize) -> Result<usize> {
        let d = self.params.d();
        let rank = x.rank();
        let k = x.symbols() as u8;
        let mut added = 0;
        for j in 0..self.lifts {
            for t in 0..per_lift.min(d) {
                let a = (j + t) % d;
                let base = self.dict.get(self.members[j].get(a)).clone();
                let mut cell = vec![0i64; rank];
                cell[0] = radius as i64;
                let candidates = [cell.clone(), cell.iter().map(|v| -v).collect()];
                let edit = candidates
                    .iter()
                    .flat_map(|p| (0..k).map(move |v| (p.clone(), v)))
                    .filter(|(p, v)| base.value(p) != *v)
                    .map(|(p, v)| base.with_override(&p, v))
                    .find(|y| x.contains(y));
                let Some(y) = edit else { continue };
                let mut configs: Vec<Configuration> =
                    self.members[j].assignment.iter().map(|&i| self.dict.get(i).clone()).collect();
                configs[a] = y;
                if self.insert(configs)? {
                    added += 1;
                }
            }
        }
        Ok(added)
    }

    pub fn params(&self) -> &EntropyParams {
        &self.params
    }

    pub fn dictionary(&self) -> &ConfigDictionary {
        &self.dict
    }

    pub fn members(&self) -> &[Microstate] {
        &self.members
    }

    /// Members that came from periodic lifts (they come first).
    pub fn lifts(&self) -> usize {
        self.lifts
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Smallest edit radius whose defect provably stays under `d delta^2` with
/// `F` inside the ball of radius `f_radius`.
pub fn perturbation_radius(d: usize, delta: Ratio<u64>, f_radius: u32) -> u32 {
    let bound = big(delta) * big(delta) * BigRational::from_integer(BigInt::from(d));
    let mut r = f_radius;
    loop {
        // two terms per s: at the edited coordinate and at its sigma_s-preimage
        let worst = Dyadic::Pow(2 * (r - f_radius) as u64).to_rational() * BigRational::from_integer(BigInt::from(2));
        if worst < bound {
            return r;
        }
        r += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupModel;
    use crate::shift::builders::{full_shift, golden_mean};
    use crate::shift::periodic_points;
    use crate::sofic::cyclic_approximation;

    fn params(d: usize, delta: Ratio<u64>) -> EntropyParams {
        EntropyParams::new(
            GroupModel::Lattice(1).ball(2),
            delta,
            Ratio::new(1, 4),
            cyclic_approximation(d).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn distance_examples() {
        let mut dict = ConfigDictionary::new();
        let zero = dict.intern(Configuration::constant(1, 0));
        let one = dict.intern(Configuration::constant(1, 1));
        let phi = Microstate::new(vec![zero, zero]);
        let psi = Microstate::new(vec![one, zero]);
        assert_eq!(map_distance_inf(&dict, &phi, &phi).unwrap(), Dyadic::Zero);
        assert_eq!(map_distance_2(&dict, &phi, &phi).unwrap(), 0.0);
        assert_eq!(map_distance_inf(&dict, &phi, &psi).unwrap(), Dyadic::ONE);
        assert!((map_distance_2(&dict, &phi, &psi).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(map_distance_inf(&dict, &phi, &Microstate::new(vec![zero])).is_err());
    }

    #[test]
    fn lifts_are_good_and_separated() {
        let p = params(5, Ratio::new(1, 1 << 40));
        let mut dict = ConfigDictionary::new();
        let lifts: Vec<Microstate> = periodic_points(&golden_mean(), 5)
            .unwrap()
            .iter()
            .map(|x| periodic_lift(&mut dict, x, &p.approximation).unwrap())
            .collect();
        assert_eq!(lifts.len(), 11);
        for (i, a) in lifts.iter().enumerate() {
            assert!(is_good_map(&dict, a, &p).unwrap());
            for b in &lifts[i + 1..] {
                assert_eq!(map_distance_inf(&dict, a, b).unwrap(), Dyadic::ONE);
            }
        }
        let zero = periodic_lift(&mut dict, &Configuration::constant(1, 0), &p.approximation).unwrap();
        assert!(zero.assignment().iter().all(|&i| i == zero.get(0)));
        let space = MicrostateSpace::from_periodic_lifts(&full_shift(2), params(3, Ratio::new(1, 1000))).unwrap();
        assert_eq!(space.len(), 8);
        let wrong = Configuration::periodic(&[2], vec![0, 1]);
        assert!(matches!(periodic_lift(&mut dict, &wrong, &p.approximation), Err(Error::Precondition(_))));
    }

    #[test]
    fn good_map_rejects_a_corrupted_coordinate() {
        let p = params(16, Ratio::new(1, 8));
        let mut dict = ConfigDictionary::new();
        let zero = Configuration::constant(1, 0);
        let lift = periodic_lift(&mut dict, &zero, &p.approximation).unwrap();
        assert!(is_good_map(&dict, &lift, &p).unwrap());
        // a 1 at the origin costs rho^2 = 1 > d delta^2 = 1/4
        let mut a = lift.assignment().to_vec();
        a[3] = dict.intern(zero.with_override(&[0], 1));
        let bad = Microstate::new(a);
        assert!(!is_good_map(&dict, &bad, &p).unwrap());
        // the same defect far out is tolerated
        let mut a = lift.assignment().to_vec();
        a[3] = dict.intern(zero.with_override(&[5], 1));
        let mild = Microstate::new(a);
        assert!(is_good_map(&dict, &mild, &p).unwrap());
        let k = GroupModel::Lattice(1).ball(2);
        let w = good_coordinate_set(&dict, &mild, &k, Ratio::new(1, 8), &p.approximation).unwrap();
        assert!(w.len() >= 14);
        assert_eq!(good_coordinate_set(&dict, &lift, &k, Ratio::new(1, 8), &p.approximation).unwrap().len(), 16);
        assert!(matches!(
            good_coordinate_set(&dict, &bad, &k, Ratio::new(1, 8), &p.approximation),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn single_cell_defect_on_one_coordinate() {
        // K = {1}: a defect at coordinate 4 only
        let approx = cyclic_approximation(16).unwrap();
        let k = FiniteSubset::integers([1]);
        let mut dict = ConfigDictionary::new();
        let zero = Configuration::constant(1, 0);
        let lift = periodic_lift(&mut dict, &zero, &approx).unwrap();
        let mut a = lift.assignment().to_vec();
        a[4] = dict.intern(zero.with_override(&[2], 1));
        let phi = Microstate::new(a);
        let w = good_coordinate_set(&dict, &phi, &k, Ratio::new(1, 8), &approx).unwrap();
        assert!(w.len() >= 14, "{w:?}");
    }

    #[test]
    fn perturbations_stay_good() {
        let delta = Ratio::new(1, 1000);
        let r = perturbation_radius(18, delta, 1);
        let mut space = MicrostateSpace::from_periodic_lifts(&golden_mean(), params(18, delta)).unwrap();
        let lifts = space.len();
        let added = space.perturb(&golden_mean(), r, 2).unwrap();
        assert!(added > 0);
        assert_eq!(space.len(), lifts + added);
        for m in space.members() {
            assert!(is_good_map(space.dictionary(), m, space.params()).unwrap());
        }
    }
}
