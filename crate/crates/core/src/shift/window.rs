use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement, GroupModel};

/// Lattice-aligned box `[lo_0, hi_0) x .. x [lo_{r-1}, hi_{r-1})`, cells in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxWindow {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl BoxWindow {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(&hi).all(|(a, b)| a <= b), "box bounds out of order");
        BoxWindow { lo, hi }
    }

    /// `[0, side)^rank`.
    pub fn cube(rank: usize, side: usize) -> Self {
        BoxWindow::new(vec![0; rank], vec![side as i64; rank])
    }

    /// `[-radius, radius]^rank`.
    pub fn centered(rank: usize, radius: i64) -> Self {
        BoxWindow::new(vec![-radius; rank], vec![radius + 1; rank])
    }

    /// Interval `[start, start + len)` of `Z`.
    pub fn interval(start: i64, len: usize) -> Self {
        BoxWindow::new(vec![start], vec![start + len as i64])
    }

    /// The box spanned by a subset, if the subset fills it completely.
    pub fn from_subset(set: &FiniteSubset) -> Result<Self> {
        let rank = set
            .model()
            .lattice_rank()
            .ok_or_else(|| Error::UnsupportedWindow(format!("windows need a lattice group, got {}", set.model())))?;
        if set.is_empty() {
            return Err(Error::UnsupportedWindow("empty window".into()));
        }
        let bbox = Self::bounding(rank, set.iter().map(|g| g.coords()));
        if bbox.len() != set.len() {
            return Err(Error::UnsupportedWindow(format!("{set} is not a box")));
        }
        Ok(bbox)
    }

    /// Smallest box containing the points.
    pub fn bounding<'a>(rank: usize, points: impl IntoIterator<Item = &'a [i64]>) -> Self {
        let mut lo = vec![i64::MAX; rank];
        let mut hi = vec![i64::MIN; rank];
        let mut any = false;
        for p in points {
            any = true;
            for i in 0..rank {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i] + 1);
            }
        }
        if !any {
            return BoxWindow::new(vec![0; rank], vec![0; rank]);
        }
        BoxWindow::new(lo, hi)
    }

    pub fn rank(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn side(&self, axis: usize) -> usize {
        (self.hi[axis] - self.lo[axis]) as usize
    }

    pub fn len(&self) -> usize {
        (0..self.rank()).map(|a| self.side(a)).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn expand(&self, margin: i64) -> Self {
        BoxWindow::new(
            self.lo.iter().map(|x| x - margin).collect(),
            self.hi.iter().map(|x| x + margin).collect(),
        )
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (a, b))| a <= x && x < b)
    }

    pub fn index(&self, p: &[i64]) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        Some(p.iter().enumerate().fold(0usize, |idx, (a, &v)| idx * self.side(a) + (v - self.lo[a]) as usize))
    }

    pub fn point(&self, mut idx: usize) -> Vec<i64> {
        let mut p = vec![0i64; self.rank()];
        for a in (0..self.rank()).rev() {
            let s = self.side(a);
            p[a] = self.lo[a] + (idx % s) as i64;
            idx /= s;
        }
        p
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    pub fn to_subset(&self) -> FiniteSubset {
        FiniteSubset::new(
            GroupModel::Lattice(self.rank()),
            self.points().map(GroupElement::Lattice),
        )
        .expect("box points are lattice elements")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_is_row_major() {
        let b = BoxWindow::new(vec![-1, 0], vec![1, 3]);
        assert_eq!(b.len(), 6);
        assert_eq!(b.point(0), vec![-1, 0]);
        assert_eq!(b.point(1), vec![-1, 1]);
        assert_eq!(b.point(3), vec![0, 0]);
        for i in 0..b.len() {
            assert_eq!(b.index(&b.point(i)), Some(i));
        }
        // row-major order agrees with the sorted order of the subset
        let pts: Vec<_> = b.to_subset().iter().map(|g| g.coords().to_vec()).collect();
        assert_eq!(pts, b.points().collect::<Vec<_>>());
    }

    #[test]
    fn from_subset_requires_a_box() {
        assert!(BoxWindow::from_subset(&FiniteSubset::integers(0..4)).is_ok());
        assert!(matches!(
            BoxWindow::from_subset(&FiniteSubset::integers([0, 2])),
            Err(Error::UnsupportedWindow(_))
        ));
    }
}
