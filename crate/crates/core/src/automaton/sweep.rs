use rayon::prelude::*;

use crate::automaton::{decide_injective, decide_surjective, preserves_subshift, Endomorphism, LocalRule};
use crate::error::{Error, Result};
use crate::group::FiniteSubset;
use crate::shift::Subshift;

/// Rules scanned by default before the sweep stops with a partial report.
pub const DEFAULT_RULE_BUDGET: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleRecord {
    pub index: u128,
    pub table: Vec<u8>,
    pub preserves: bool,
    pub injective: Option<bool>,
    pub surjective: Option<bool>,
    pub orphan: Option<Vec<u8>>,
}

impl RuleRecord {
    pub fn violates_surjunctivity(&self) -> bool {
        self.injective == Some(true) && self.surjective == Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub memory: FiniteSubset,
    pub total: usize,
    pub scanned: usize,
    pub preserving: usize,
    pub injective: usize,
    pub surjective: usize,
    /// Rules injective on the subshift but not onto it.
    pub violations: Vec<RuleRecord>,
    /// One record per scanned rule, in index order.
    pub rules: Vec<RuleRecord>,
}

impl SweepReport {
    pub fn complete(&self) -> bool {
        self.scanned == self.total
    }
}

pub fn surjunctivity_sweep(x: &Subshift, memory: &FiniteSubset) -> Result<SweepReport> {
    surjunctivity_sweep_with(x, memory, DEFAULT_RULE_BUDGET)
}

/// Decides every rule on `memory`; over budget, the scanned prefix comes back
/// inside [`Error::SweepBudget`].
pub fn surjunctivity_sweep_with(x: &Subshift, memory: &FiniteSubset, budget: u128) -> Result<SweepReport> {
    if x.rank() != 1 {
        return Err(Error::UnsupportedGroup("sweeps decide rules over Z only".into()));
    }
    let k = x.symbols();
    let total = LocalRule::count(k, memory)
        .filter(|&t| t <= usize::MAX as u128)
        .ok_or_else(|| Error::budget("cellular_automaton", "rule space does not fit in memory"))?;
    let scan = total.min(budget);
    let rules: Vec<RuleRecord> = (0..scan)
        .into_par_iter()
        .map(|index| classify(x, memory, index))
        .collect::<Result<_>>()?;
    let report = SweepReport {
        memory: memory.clone(),
        total: total as usize,
        scanned: scan as usize,
        preserving: rules.iter().filter(|r| r.preserves).count(),
        injective: rules.iter().filter(|r| r.injective == Some(true)).count(),
        surjective: rules.iter().filter(|r| r.surjective == Some(true)).count(),
        violations: rules.iter().filter(|r| r.violates_surjunctivity()).cloned().collect(),
        rules,
    };
    if scan < total {
        return Err(Error::SweepBudget(Box::new(report)));
    }
    Ok(report)
}

fn classify(x: &Subshift, memory: &FiniteSubset, index: u128) -> Result<RuleRecord> {
    let rule = LocalRule::from_index(x.symbols(), memory.clone(), index)?;
    let table = rule.table().to_vec();
    if !preserves_subshift(&rule, x)? {
        return Ok(RuleRecord {
            index,
            table,
            preserves: false,
            injective: None,
            surjective: None,
            orphan: None,
        });
    }
    let f = Endomorphism::new(rule, x.clone())?;
    let injective = decide_injective(&f)?.is_injective();
    let surj = decide_surjective(&f)?;
    let orphan = match &surj {
        crate::automaton::Surjectivity::NotSurjective { orphan } => Some(orphan.clone()),
        _ => None,
    };
    Ok(RuleRecord {
        index,
        table,
        preserves: true,
        injective: Some(injective),
        surjective: Some(surj.is_surjective()),
        orphan,
    })
}
