use crate::error::{Error, Result};
use crate::group::FiniteSubset;
use crate::shift::csp::{torus_csp, Budget, MarginBox};
use crate::shift::{BoxWindow, Configuration, LineGraph, Pattern, Subshift};

/// Margin used for `Z^r`, `r >= 2`, when none is given.
pub const DEFAULT_MARGIN: u32 = 2;

const SEARCH_NODES: u64 = 200_000_000;

/// How far a pattern set or certificate can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    /// Globally admissible, decided on the transfer graph.
    Exact,
    /// Locally admissible on the window expanded by the margin.
    AtMargin(u32),
}

impl std::fmt::Display for Exactness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exactness::Exact => write!(f, "exact"),
            Exactness::AtMargin(m) => write!(f, "locally admissible at margin {m}"),
        }
    }
}

/// Patterns on a box, each stored as its row-major values.
#[derive(Clone, Debug)]
pub struct PatternSet {
    pub window: BoxWindow,
    pub exactness: Exactness,
    pub words: Vec<Vec<u8>>,
}

impl PatternSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn patterns(&self) -> Vec<Pattern> {
        let support = self.window.to_subset();
        self.words
            .iter()
            .map(|w| Pattern::new(support.clone(), w.clone()).unwrap())
            .collect()
    }
}

/// Patterns on `window` that extend to a point of `x` (see [`Exactness`] for `Z^r`, `r >= 2`).
pub fn enumerate_patterns(x: &Subshift, window: &FiniteSubset) -> Result<PatternSet> {
    check_rank(x, window)?;
    let b = BoxWindow::from_subset(window)?;
    enumerate_box(x, &b, DEFAULT_MARGIN)
}

fn check_rank(x: &Subshift, window: &FiniteSubset) -> Result<()> {
    if window.model() != x.group() {
        return Err(Error::ModelMismatch(window.model().to_string(), x.group().to_string()));
    }
    Ok(())
}

pub fn enumerate_box(x: &Subshift, window: &BoxWindow, margin: u32) -> Result<PatternSet> {
    if window.rank() != x.rank() {
        return Err(Error::ModelMismatch(format!("lattice:{}", window.rank()), x.group().to_string()));
    }
    if x.rank() == 1 {
        let g = LineGraph::new(x)?;
        return Ok(PatternSet {
            window: window.clone(),
            exactness: Exactness::Exact,
            words: g.words(window.len()),
        });
    }
    let mb = MarginBox::new(window, margin as i64);
    let csp = mb.csp(x);
    let mut budget = Budget::new("shift_space", SEARCH_NODES);
    Ok(PatternSet {
        window: window.clone(),
        exactness: Exactness::AtMargin(margin),
        words: csp.project(window.len(), &mut budget)?,
    })
}

/// Cell values (row-major over `[0, d)^r`) of every point fixed by `d Z^r`.
pub fn periodic_cells(x: &Subshift, d: usize) -> Result<Vec<Vec<u8>>> {
    if d == 0 {
        return Err(Error::InvalidParameter("period must be positive".into()));
    }
    if x.rank() == 1 {
        return Ok(LineGraph::new(x)?.periodic_words(d));
    }
    let csp = torus_csp(x, d);
    let mut budget = Budget::new("shift_space", SEARCH_NODES);
    csp.project(csp.cells(), &mut budget)
}

/// Points fixed by the index-`d^r` lattice `d Z^r`.
pub fn periodic_points(x: &Subshift, d: usize) -> Result<Vec<Configuration>> {
    let periods = vec![d; x.rank()];
    Ok(periodic_cells(x, d)?
        .into_iter()
        .map(|c| Configuration::periodic(&periods, c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupModel;
    use crate::shift::builders::{forbidding_symbols, full_shift, golden_mean, hard_ball};
    use crate::shift::subshift::decode;

    #[test]
    fn spec_pattern_examples() {
        let w3 = FiniteSubset::integers(0..3);
        assert_eq!(enumerate_patterns(&full_shift(2), &w3).unwrap().len(), 8);
        let gm = enumerate_patterns(&golden_mean(), &w3).unwrap();
        assert_eq!(gm.exactness, Exactness::Exact);
        assert_eq!(gm.len(), 5);
        assert!(matches!(
            enumerate_patterns(&golden_mean(), &FiniteSubset::integers([0, 2])),
            Err(Error::UnsupportedWindow(_))
        ));
        assert!(enumerate_patterns(&golden_mean(), &GroupModel::Lattice(2).ball(2)).is_err());
    }

    #[test]
    fn golden_mean_counts_follow_fibonacci() {
        let x = golden_mean();
        let p: Vec<usize> = (0..=13)
            .map(|n| enumerate_box(&x, &BoxWindow::interval(0, n), 0).unwrap().len())
            .collect();
        for n in 2..=12 {
            assert_eq!(p[n + 1], p[n] + p[n - 1]);
        }
    }

    fn cyclic_brute_force(x: &Subshift, d: usize) -> usize {
        let k = x.symbols();
        (0..k.pow(d as u32))
            .filter(|&c| {
                let w = decode(c, k, d);
                (0..d as i64).all(|t| x.window_ok(&[t], |p| w[p[0].rem_euclid(d as i64) as usize]))
            })
            .count()
    }

    #[test]
    fn periodic_points_match_cyclic_brute_force() {
        let x = golden_mean();
        for d in 3..=16 {
            assert_eq!(periodic_points(&x, d).unwrap().len(), cyclic_brute_force(&x, d), "d = {d}");
        }
        assert_eq!(periodic_points(&x, 5).unwrap().len(), 11);
        assert_eq!(periodic_points(&full_shift(2), 3).unwrap().len(), 8);
        let zero = forbidding_symbols(2, &[1]);
        for d in 1..6 {
            assert_eq!(periodic_points(&zero, d).unwrap(), vec![Configuration::constant(1, 0)]);
        }
    }

    #[test]
    fn periodic_points_are_members() {
        let x = golden_mean();
        for p in periodic_points(&x, 7).unwrap() {
            assert!(x.contains(&p));
            assert!(p.is_fixed_by_lattice(7));
        }
    }

    #[test]
    fn hard_square_counts() {
        // independent sets of the 3x3 and 4x4 grid graphs
        let x = hard_ball(2, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(enumerate_box(&x, &BoxWindow::cube(2, 3), 2).unwrap().len(), 63);
        let four = enumerate_box(&x, &BoxWindow::cube(2, 4), 2);
        assert_eq!(four.as_ref().map(|p| p.len()).map_err(|e| e.to_string()), Ok(1234));
        // independent sets of the 3x3 torus grid
        let torus = periodic_points(&x, 3).unwrap();
        assert_eq!(torus.len(), torus_brute_force(&x, 3));
        assert!(torus.iter().all(|t| x.contains(t)));
    }

    fn torus_brute_force(x: &Subshift, d: usize) -> usize {
        let n = d * d;
        (0..1usize << n)
            .filter(|&mask| {
                let v = |p: &[i64]| {
                    let i = p[0].rem_euclid(d as i64) as usize * d + p[1].rem_euclid(d as i64) as usize;
                    ((mask >> i) & 1) as u8
                };
                (0..d as i64).all(|a| (0..d as i64).all(|b| x.window_ok(&[a, b], v)))
            })
            .count()
    }
}
