//! `N_eps`: the largest `(rho_inf, eps)`-separated family of microstates.

use std::collections::{HashMap, HashSet};

use num::rational::Ratio;

use crate::entropy::{big, map_distance_inf, MicrostateSpace};
use crate::error::{Error, Result};
use crate::shift::{Dyadic, BoxWindow};

/// Members compared pairwise in exact mode.
pub const DEFAULT_EXACT_BUDGET: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    /// First-fit maximal family, in member order.
    Greedy,
    /// Maximum independent set of the closeness graph, up to the given number of members.
    Exact { budget: usize },
}

impl CountMode {
    pub fn exact() -> Self {
        CountMode::Exact { budget: DEFAULT_EXACT_BUDGET }
    }
}

/// Least `m` with `2^-m < eps`: points closer than `eps` agree on `Omega_m`.
fn agreement_radius(eps: Ratio<u64>) -> u64 {
    let e = big(eps);
    (0..).find(|&m| Dyadic::Pow(m).lt_rational(&e)).unwrap()
}

pub fn count_separated(space: &MicrostateSpace, eps: Ratio<u64>, mode: CountMode) -> Result<usize> {
    if *eps.numer() == 0 {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    if space.is_empty() {
        return Ok(0);
    }
    match mode {
        CountMode::Greedy => Ok(greedy_by_windows(space, eps)),
        CountMode::Exact { budget } => {
            let n = space.len();
            if n > budget {
                return Err(Error::budget(
                    "sofic_entropy",
                    format!("{n} microstates exceed the exact budget of {budget}; use greedy mode"),
                ));
            }
            let dict = space.dictionary();
            let members = space.members();
            let e = big(eps);
            max_separated_subset(n, |i, j| {
                map_distance_inf(dict, &members[i], &members[j]).unwrap().lt_rational(&e)
            })
        }
    }
}

/// `rho_inf` is an ultrametric, so "closer than eps" is an equivalence and first-fit
/// keeps one member per class. A class is fixed by the restriction of every
/// `phi(a)` to `Omega_m`.
fn greedy_by_windows(space: &MicrostateSpace, eps: Ratio<u64>) -> usize {
    let dict = space.dictionary();
    let m = agreement_radius(eps);
    if m == 0 {
        return 1;
    }
    let rank = dict.get(space.members()[0].get(0)).rank();
    let ball = BoxWindow::centered(rank, m as i64 - 1);
    let mut classes: HashMap<Vec<u8>, u32> = HashMap::new();
    let mut class_of = vec![u32::MAX; dict.len()];
    let mut seen = HashSet::new();
    for phi in space.members() {
        let key: Vec<u32> = phi
            .assignment()
            .iter()
            .map(|&i| {
                if class_of[i as usize] == u32::MAX {
                    let x = dict.get(i);
                    let w: Vec<u8> = ball.points().map(|p| x.value(&p)).collect();
                    let next = classes.len() as u32;
                    class_of[i as usize] = *classes.entry(w).or_insert(next);
                }
                class_of[i as usize]
            })
            .collect();
        seen.insert(key);
    }
    seen.len()
}

/// Branch-and-bound search nodes allowed per connected component.
const MIS_NODES: u64 = 1 << 24;

/// Size of a largest subset of `0..n` with no two members `close`.
pub fn max_separated_subset(n: usize, close: impl Fn(usize, usize) -> bool + Sync) -> Result<usize> {
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if close(i, j) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut total = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        let mut members = Vec::new();
        comp[start] = start;
        while let Some(v) = stack.pop() {
            members.push(v);
            for &w in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = start;
                    stack.push(w);
                }
            }
        }
        let mut nodes = 0;
        total += mis(&adj, members, &mut nodes)?;
    }
    Ok(total)
}

fn mis(adj: &[Vec<usize>], alive: Vec<usize>, nodes: &mut u64) -> Result<usize> {
    *nodes += 1;
    if *nodes > MIS_NODES {
        return Err(Error::budget("sofic_entropy", "exact separated count needs too many search nodes; use greedy mode"));
    }
    let set: HashSet<usize> = alive.iter().copied().collect();
    let degree = |v: usize| adj[v].iter().filter(|w| set.contains(w)).count();
    let Some(&v) = alive.iter().max_by_key(|&&v| degree(v)) else {
        return Ok(0);
    };
    if degree(v) == 0 {
        return Ok(alive.len());
    }
    let without: Vec<usize> = alive.iter().copied().filter(|&w| w != v).collect();
    let skip = mis(adj, without, nodes)?;
    let taken: Vec<usize> = alive
        .iter()
        .copied()
        .filter(|&w| w != v && !adj[v].contains(&w))
        .collect();
    let take = 1 + mis(adj, taken, nodes)?;
    Ok(skip.max(take))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::EntropyParams;
    use crate::group::GroupModel;
    use crate::shift::builders::golden_mean;
    use crate::shift::Configuration;
    use crate::sofic::cyclic_approximation;

    #[test]
    fn radius_for_eps() {
        assert_eq!(agreement_radius(Ratio::new(1, 4)), 3);
        assert_eq!(agreement_radius(Ratio::new(1, 3)), 2);
        assert_eq!(agreement_radius(Ratio::from_integer(2)), 0);
    }

    #[test]
    fn matrix_examples() {
        let dist = [[0.0, 1.0, 1.0], [1.0, 0.0, 0.1], [1.0, 0.1, 0.0]];
        assert_eq!(max_separated_subset(3, |i, j| dist[i][j] < 0.25).unwrap(), 2);
        assert_eq!(max_separated_subset(4, |_, _| false).unwrap(), 4);
        assert_eq!(max_separated_subset(2, |_, _| true).unwrap(), 1);
        // a 5-cycle
        let cyc = |i: usize, j: usize| (i + 1) % 5 == j || (j + 1) % 5 == i;
        assert_eq!(max_separated_subset(5, cyc).unwrap(), 2);
    }

    fn space(d: usize) -> MicrostateSpace {
        let params = EntropyParams::new(
            GroupModel::Lattice(1).ball(2),
            Ratio::new(1, 1000),
            Ratio::new(1, 4),
            cyclic_approximation(d).unwrap(),
        )
        .unwrap();
        MicrostateSpace::from_periodic_lifts(&golden_mean(), params).unwrap()
    }

    #[test]
    fn lifts_are_all_separated() {
        let s = space(7);
        assert_eq!(s.len(), 29);
        for mode in [CountMode::Greedy, CountMode::exact()] {
            assert_eq!(count_separated(&s, Ratio::new(1, 4), mode).unwrap(), 29);
        }
        assert!(count_separated(&s, Ratio::new(1, 4), CountMode::Exact { budget: 10 }).is_err());
    }

    #[test]
    fn duplicates_count_once() {
        let mut s = space(4);
        let zero = Configuration::constant(1, 0);
        assert!(s.insert(vec![zero.clone(); 4]).unwrap());
        assert!(s.insert(vec![zero.with_override(&[6], 1); 4]).is_ok());
        for mode in [CountMode::Greedy, CountMode::exact()] {
            assert_eq!(count_separated(&s, Ratio::new(1, 4), mode).unwrap(), 7);
        }
    }

    #[test]
    fn greedy_matches_exact_with_perturbations() {
        for d in [5, 8] {
            let mut s = space(d);
            let r = crate::entropy::perturbation_radius(d, Ratio::new(1, 1000), 1);
            s.perturb(&golden_mean(), r, 3).unwrap();
            s.perturb(&golden_mean(), 3, 3).unwrap();
            for eps in [Ratio::new(1, 4), Ratio::new(1, 16), Ratio::new(1, 1 << 12)] {
                let g = count_separated(&s, eps, CountMode::Greedy).unwrap();
                let e = count_separated(&s, eps, CountMode::exact()).unwrap();
                assert_eq!(g, e, "d = {d}, eps = {eps}");
            }
        }
    }
}
