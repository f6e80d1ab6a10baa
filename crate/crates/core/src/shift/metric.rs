use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::group::FiniteSubset;
use crate::shift::Configuration;

/// Exact values `0` and `2^-n` taken by the prodiscrete metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dyadic {
    Zero,
    Pow(u64),
}

impl Dyadic {
    pub const ONE: Dyadic = Dyadic::Pow(0);

    pub fn exponent(self) -> Option<u64> {
        match self {
            Dyadic::Zero => None,
            Dyadic::Pow(n) => Some(n),
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Dyadic::Zero => 0.0,
            Dyadic::Pow(n) => 0.5f64.powi(n.min(2000) as i32),
        }
    }

    pub fn to_rational(self) -> BigRational {
        match self {
            Dyadic::Zero => BigRational::zero(),
            Dyadic::Pow(n) => BigRational::new(BigInt::one(), BigInt::one() << n as usize),
        }
    }

    /// Square, exactly: `2^-2n`.
    pub fn squared(self) -> Dyadic {
        match self {
            Dyadic::Zero => Dyadic::Zero,
            Dyadic::Pow(n) => Dyadic::Pow(2 * n),
        }
    }

    /// `self < q` against an arbitrary positive rational.
    pub fn lt_rational(self, q: &BigRational) -> bool {
        self.to_rational() < *q
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Dyadic::Zero, Dyadic::Zero) => Ordering::Equal,
            (Dyadic::Zero, _) => Ordering::Less,
            (_, Dyadic::Zero) => Ordering::Greater,
            (Dyadic::Pow(a), Dyadic::Pow(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dyadic::Zero => write!(f, "0"),
            Dyadic::Pow(0) => write!(f, "1"),
            Dyadic::Pow(n) => write!(f, "2^-{n}"),
        }
    }
}

/// `rho(x, y) = 2^-n` with `n` the largest index such that `x` and `y` agree on `Omega_n`.
///
/// With the `l^inf` balls this is `2^-r` for `r` the smallest norm of a differing cell.
pub fn config_distance(x: &Configuration, y: &Configuration) -> Dyadic {
    match x.difference_radius(y) {
        None => Dyadic::Zero,
        Some(r) => Dyadic::Pow(r),
    }
}

/// `rho_A(x, y) = max_{g in A} rho(g x, g y)`.
pub fn orbit_distance(set: &FiniteSubset, x: &Configuration, y: &Configuration) -> Result<Dyadic> {
    if set.is_empty() {
        return Err(Error::InvalidParameter("orbit distance needs a nonempty set".into()));
    }
    if set.model().lattice_rank() != Some(x.rank()) || x.rank() != y.rank() {
        return Err(Error::ModelMismatch(set.model().to_string(), format!("lattice:{}", x.rank())));
    }
    Ok(set
        .iter()
        .map(|g| config_distance(&x.shift_by(g), &y.shift_by(g)))
        .max()
        .unwrap())
}
