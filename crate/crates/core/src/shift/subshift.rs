use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{FiniteSubset, GroupElement, GroupModel};
use crate::shift::Alphabet;

/// An assignment of symbols to a finite support; `values[i]` sits on `support.elements()[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    support: FiniteSubset,
    values: Vec<u8>,
}

impl Pattern {
    pub fn new(support: FiniteSubset, values: Vec<u8>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::SizeMismatch(support.len(), values.len()));
        }
        Ok(Pattern { support, values })
    }

    /// Single symbol at a lattice point.
    pub fn single(at: Vec<i64>, symbol: u8) -> Self {
        let rank = at.len();
        Pattern {
            support: FiniteSubset::from_coords(rank, [at]).expect("lattice point"),
            values: vec![symbol],
        }
    }

    pub fn support(&self) -> &FiniteSubset {
        &self.support
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn get(&self, g: &GroupElement) -> Option<u8> {
        self.support.index_of(g).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, u8)> {
        self.support.iter().zip(self.values.iter().copied())
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let parts: Vec<String> = self
            .iter()
            .map(|(g, v)| format!("{}@{}", alphabet.symbol(v), g))
            .collect();
        parts.join(" ")
    }
}

/// Subshift of finite type over `Z^r`: the points all of whose memory translates
/// carry an admissible pattern.
#[derive(Clone, Debug)]
pub struct Subshift {
    alphabet: Alphabet,
    rank: usize,
    memory: FiniteSubset,
    admissible: BTreeSet<Vec<u8>>,
    offsets: Vec<Vec<i64>>,
    allowed: Vec<bool>,
}

/// Dense tables are indexed by the base-|A| code of a memory pattern.
const MAX_TABLE: usize = 1 << 24;

impl Subshift {
    /// `admissible` patterns list symbols in the sorted (row-major) order of `memory`.
    pub fn new(
        alphabet: Alphabet,
        group: GroupModel,
        memory: FiniteSubset,
        admissible: impl IntoIterator<Item = Vec<u8>>,
    ) -> Result<Self> {
        let rank = match group {
            GroupModel::Lattice(r) if r >= 1 => r,
            other => {
                return Err(Error::UnsupportedGroup(format!(
                    "subshifts are supported over Z^r only, got {other}"
                )))
            }
        };
        if memory.model() != group {
            return Err(Error::ModelMismatch(memory.model().to_string(), group.to_string()));
        }
        if memory.is_empty() {
            return Err(Error::InvalidParameter("memory set must be nonempty".into()));
        }
        let k = alphabet.len();
        let size = k
            .checked_pow(memory.len() as u32)
            .filter(|&s| s <= MAX_TABLE)
            .ok_or_else(|| Error::InvalidParameter("memory set too large for a dense pattern table".into()))?;
        let mut allowed = vec![false; size];
        let mut set = BTreeSet::new();
        for p in admissible {
            if p.len() != memory.len() {
                return Err(Error::SizeMismatch(memory.len(), p.len()));
            }
            if let Some(&bad) = p.iter().find(|&&v| v as usize >= k) {
                return Err(Error::InvalidParameter(format!("symbol index {bad} outside the alphabet")));
            }
            allowed[encode(&p, k)] = true;
            set.insert(p);
        }
        let offsets = memory.iter().map(|g| g.coords().to_vec()).collect();
        Ok(Subshift {
            alphabet,
            rank,
            memory,
            admissible: set,
            offsets,
            allowed,
        })
    }

    /// Complement form: everything on `memory` except the listed patterns.
    pub fn from_forbidden(
        alphabet: Alphabet,
        group: GroupModel,
        memory: FiniteSubset,
        forbidden: impl IntoIterator<Item = Vec<u8>>,
    ) -> Result<Self> {
        let forbidden: BTreeSet<Vec<u8>> = forbidden.into_iter().collect();
        let k = alphabet.len();
        let n = memory.len();
        let total = k
            .checked_pow(n as u32)
            .filter(|&s| s <= MAX_TABLE)
            .ok_or_else(|| Error::InvalidParameter("memory set too large".into()))?;
        let admissible = (0..total).map(|c| decode(c, k, n)).filter(|p| !forbidden.contains(p));
        Self::new(alphabet, group, memory, admissible.collect::<Vec<_>>())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn group(&self) -> GroupModel {
        GroupModel::Lattice(self.rank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn memory(&self) -> &FiniteSubset {
        &self.memory
    }

    pub fn admissible(&self) -> &BTreeSet<Vec<u8>> {
        &self.admissible
    }

    /// Memory offsets as coordinate vectors, in memory order.
    pub fn offsets(&self) -> &[Vec<i64>] {
        &self.offsets
    }

    pub fn symbols(&self) -> usize {
        self.alphabet.len()
    }

    /// Whether a memory-ordered pattern is admissible.
    pub fn allows(&self, pattern: &[u8]) -> bool {
        self.allowed[encode(pattern, self.symbols())]
    }

    pub(crate) fn allowed_table(&self) -> &[bool] {
        &self.allowed
    }

    /// For `Z`: (min offset, width) of the memory interval hull.
    pub(crate) fn line_span(&self) -> (i64, usize) {
        let min = self.offsets.iter().map(|o| o[0]).min().unwrap();
        let max = self.offsets.iter().map(|o| o[0]).max().unwrap();
        (min, (max - min + 1) as usize)
    }

    /// Bounding box of the memory set.
    pub fn memory_box(&self) -> crate::shift::BoxWindow {
        crate::shift::BoxWindow::bounding(self.rank, self.offsets.iter().map(|o| o.as_slice()))
    }

    /// Checks the translate `t + memory` against a value lookup.
    pub(crate) fn window_ok(&self, t: &[i64], mut value: impl FnMut(&[i64]) -> u8) -> bool {
        let k = self.symbols();
        let mut code = 0usize;
        let mut p = vec![0i64; self.rank];
        for o in &self.offsets {
            for a in 0..self.rank {
                p[a] = t[a] + o[a];
            }
            code = code * k + value(&p) as usize;
        }
        self.allowed[code]
    }

    /// Same data up to representation.
    pub fn same_definition(&self, other: &Subshift) -> bool {
        self.alphabet == other.alphabet
            && self.rank == other.rank
            && self.memory == other.memory
            && self.admissible == other.admissible
    }
}

impl PartialEq for Subshift {
    fn eq(&self, other: &Self) -> bool {
        self.same_definition(other)
    }
}

impl Eq for Subshift {}

impl fmt::Display for Subshift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SFT over {} on {{{}}}, memory {}, {} admissible patterns",
            self.group(),
            self.alphabet,
            self.memory,
            self.admissible.len()
        )
    }
}

pub(crate) fn encode(pattern: &[u8], k: usize) -> usize {
    pattern.iter().fold(0usize, |acc, &v| acc * k + v as usize)
}

pub(crate) fn decode(mut code: usize, k: usize, len: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    for slot in out.iter_mut().rev() {
        *slot = (code % k) as u8;
        code /= k;
    }
    out
}
