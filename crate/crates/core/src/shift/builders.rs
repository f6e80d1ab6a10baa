//! Standard subshifts.

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupModel};
use crate::shift::{Alphabet, Subshift};

/// `{0, .., k-1}^Z`.
pub fn full_shift(k: usize) -> Subshift {
    full_shift_on(Alphabet::digits(k), GroupModel::Lattice(1)).unwrap()
}

/// `A^G` for a lattice group, with memory `{0}`.
pub fn full_shift_on(alphabet: Alphabet, group: GroupModel) -> Result<Subshift> {
    let k = alphabet.len() as u8;
    let memory = group.ball(1);
    Subshift::new(alphabet, group, memory, (0..k).map(|s| vec![s]))
}

/// Binary sequences without two consecutive 1s.
pub fn golden_mean() -> Subshift {
    Subshift::new(
        Alphabet::digits(2),
        GroupModel::Lattice(1),
        FiniteSubset::integers([0, 1]),
        vec![vec![0, 0], vec![0, 1], vec![1, 0]],
    )
    .unwrap()
}

/// Sequences of the form `..0 0 1 1 2 2..`: symbols never decrease.
pub fn weiss_sft() -> Subshift {
    Subshift::new(
        Alphabet::digits(3),
        GroupModel::Lattice(1),
        FiniteSubset::integers([0, 1]),
        vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 2], vec![2, 2]],
    )
    .unwrap()
}

/// Hard-ball model on `Z^rank`: no two 1s at `g` and `g + s` for `s` in `f`.
pub fn hard_ball(rank: usize, f: &[Vec<i64>]) -> Result<Subshift> {
    if f.iter().any(|s| s.len() != rank) {
        return Err(Error::InvalidParameter(format!("offsets must have rank {rank}")));
    }
    if f.iter().any(|s| s.iter().all(|&c| c == 0)) {
        return Err(Error::InvalidParameter("the identity cannot be an offset".into()));
    }
    if f.is_empty() {
        return Err(Error::InvalidParameter("hard-ball offsets must be nonempty".into()));
    }
    let origin = [vec![0i64; rank]];
    let memory = FiniteSubset::from_coords(rank, origin.iter().chain(f).cloned())?;
    let zero = memory.index_of(&GroupModel::Lattice(rank).identity()).unwrap();
    let n = memory.len();
    let admissible = (0..1usize << n)
        .map(|mask| (0..n).map(|i| ((mask >> (n - 1 - i)) & 1) as u8).collect::<Vec<u8>>())
        .filter(|p| p[zero] == 0 || p.iter().filter(|&&v| v == 1).count() == 1);
    Subshift::new(
        Alphabet::digits(2),
        GroupModel::Lattice(rank),
        memory,
        admissible.collect::<Vec<_>>(),
    )
}

/// Hard squares: hard balls on `Z^2` with `f = {e_1, e_2}`.
pub fn hard_square() -> Subshift {
    hard_ball(2, &[vec![1, 0], vec![0, 1]]).unwrap()
}

/// Sequences over `{0, .., k-1}` avoiding the listed symbols.
pub fn forbidding_symbols(k: usize, forbidden: &[u8]) -> Subshift {
    Subshift::new(
        Alphabet::digits(k),
        GroupModel::Lattice(1),
        FiniteSubset::integers([0]),
        (0..k as u8).filter(|s| !forbidden.contains(s)).map(|s| vec![s]),
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::Configuration;

    #[test]
    fn hard_ball_on_z_is_the_golden_mean() {
        let hb = hard_ball(1, &[vec![1]]).unwrap();
        assert_eq!(hb.admissible(), golden_mean().admissible());
        assert_eq!(hb, golden_mean());
        assert!(matches!(hard_ball(1, &[vec![0]]), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn membership_examples() {
        let w = weiss_sft();
        assert!(w.contains(&Configuration::line(&[0], 0, &[1, 1, 1], &[2])));
        assert!(!w.contains(&Configuration::line(&[2], 0, &[], &[0])));
        let gm = golden_mean();
        assert!(!gm.contains(&Configuration::constant(1, 0).with_override(&[3], 1).with_override(&[4], 1)));
        assert!(gm.contains(&Configuration::periodic(&[2], vec![0, 1])));
        let hs = hard_square();
        assert!(hs.contains(&Configuration::periodic(&[2, 2], vec![1, 0, 0, 1])));
        assert!(!hs.contains(&Configuration::periodic(&[2, 2], vec![1, 1, 0, 0])));
        let lone = Configuration::constant(2, 0).with_override(&[3, -2], 1);
        assert!(hs.contains(&lone));
        assert!(!hs.contains(&lone.with_override(&[3, -1], 1)));
    }
}
