//! Backtracking search for locally admissible patterns on finite cell sets.

use std::borrow::Cow;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::shift::{BoxWindow, Subshift};

/// Cells `0..n` over `k` symbols; each constraint lists cells in memory order and
/// must read an allowed code of its table (table 0 is the subshift's).
pub(crate) struct Csp<'a> {
    k: usize,
    tables: Vec<Cow<'a, [bool]>>,
    constraints: Vec<Vec<usize>>,
    table_of: Vec<usize>,
    /// Constraints containing each cell; checked for satisfiability on assignment.
    touches: Vec<Vec<usize>>,
    cells: usize,
}

pub(crate) struct Budget {
    pub remaining: u64,
    pub module: &'static str,
}

impl Budget {
    pub fn new(module: &'static str, nodes: u64) -> Self {
        Budget { remaining: nodes, module }
    }

    fn tick(&mut self) -> Result<()> {
        if self.remaining == 0 {
            return Err(Error::budget(self.module, "search node budget exhausted"));
        }
        self.remaining -= 1;
        Ok(())
    }
}

impl<'a> Csp<'a> {
    pub fn new(x: &'a Subshift, cells: usize, constraints: Vec<Vec<usize>>) -> Self {
        let mut touches = vec![Vec::new(); cells];
        for (i, c) in constraints.iter().enumerate() {
            let mut seen: Vec<usize> = c.clone();
            seen.sort_unstable();
            seen.dedup();
            for &cell in &seen {
                touches[cell].push(i);
            }
        }
        Csp {
            k: x.symbols(),
            tables: vec![Cow::Borrowed(x.allowed_table())],
            table_of: vec![0; constraints.len()],
            constraints,
            touches,
            cells,
        }
    }

    /// Adds a table; returns its id for [`Csp::constrain`].
    pub fn add_table(&mut self, table: Vec<bool>) -> usize {
        self.tables.push(Cow::Owned(table));
        self.tables.len() - 1
    }

    pub fn constrain(&mut self, cells: Vec<usize>, table: usize) {
        let id = self.constraints.len();
        let mut seen = cells.clone();
        seen.sort_unstable();
        seen.dedup();
        for &c in &seen {
            self.touches[c].push(id);
        }
        self.constraints.push(cells);
        self.table_of.push(table);
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Cells are assigned in index order; after assigning `cell`, every constraint
    /// through it must still have an allowed completion of its later cells.
    fn ok_at(&self, cell: usize, values: &[u8]) -> bool {
        self.touches[cell]
            .iter()
            .all(|&c| self.completable(c, &self.constraints[c], cell, values, 0, 0))
    }

    fn completable(&self, id: usize, cells: &[usize], assigned: usize, values: &[u8], at: usize, code: usize) -> bool {
        if at == cells.len() {
            return self.tables[self.table_of[id]][code];
        }
        let i = cells[at];
        if i <= assigned {
            return self.completable(id, cells, assigned, values, at + 1, code * self.k + values[i] as usize);
        }
        let repeated = cells[..at].iter().position(|&j| j == i);
        if let Some(j) = repeated {
            // the same cell read twice through a wrapped constraint
            let v = code_digit(code, self.k, at - 1 - j);
            return self.completable(id, cells, assigned, values, at + 1, code * self.k + v);
        }
        self.choices()
            .any(|s| self.completable(id, cells, assigned, values, at + 1, code * self.k + s as usize))
    }

    fn choices(&self) -> std::ops::Range<u8> {
        0..self.k as u8
    }

    /// Whether a full assignment exists.
    pub fn exists(&self, budget: &mut Budget) -> Result<bool> {
        let mut values = vec![0u8; self.cells()];
        self.extend(0, &mut values, budget)
    }

    fn extend(&self, cell: usize, values: &mut [u8], budget: &mut Budget) -> Result<bool> {
        if cell == values.len() {
            return Ok(true);
        }
        budget.tick()?;
        for s in self.choices() {
            values[cell] = s;
            if self.ok_at(cell, values) && self.extend(cell + 1, values, budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Distinct assignments of cells `0..n_out` that extend to a full assignment,
    /// in lexicographic order.
    pub fn project(&self, n_out: usize, budget: &mut Budget) -> Result<Vec<Vec<u8>>> {
        let mut values = vec![0u8; self.cells()];
        let mut out = Vec::new();
        self.project_from(0, n_out, &mut values, &mut out, budget)?;
        Ok(out)
    }

    fn project_from(
        &self,
        cell: usize,
        n_out: usize,
        values: &mut [u8],
        out: &mut Vec<Vec<u8>>,
        budget: &mut Budget,
    ) -> Result<()> {
        if cell == n_out {
            if self.extend(n_out, values, budget)? {
                out.push(values[..n_out].to_vec());
            }
            return Ok(());
        }
        budget.tick()?;
        for s in self.choices() {
            values[cell] = s;
            if self.ok_at(cell, values) {
                self.project_from(cell + 1, n_out, values, out, budget)?;
            }
        }
        Ok(())
    }
}

fn code_digit(code: usize, k: usize, back: usize) -> usize {
    code / k.pow(back as u32) % k
}

/// A box with a margin: window cells come first in row-major order, then the margin.
pub(crate) struct MarginBox {
    pub outer: BoxWindow,
    /// outer row-major index -> search cell
    pub cell_of: Vec<usize>,
}

impl MarginBox {
    pub fn new(window: &BoxWindow, margin: i64) -> Self {
        let outer = window.expand(margin);
        let mut cell_of = vec![usize::MAX; outer.len()];
        let mut next = 0;
        for p in window.points() {
            cell_of[outer.index(&p).unwrap()] = next;
            next += 1;
        }
        for (i, p) in outer.points().enumerate() {
            if !window.contains(&p) {
                cell_of[i] = next;
                next += 1;
            }
        }
        MarginBox {
            outer,
            cell_of,
        }
    }

    pub fn cell(&self, p: &[i64]) -> Option<usize> {
        self.outer.index(p).map(|i| self.cell_of[i])
    }

    /// Every memory translate inside the outer box.
    pub fn csp<'a>(&self, x: &'a Subshift) -> Csp<'a> {
        let mb = x.memory_box();
        let mut constraints = Vec::new();
        let lo: Vec<i64> = self.outer.lo().iter().zip(mb.lo()).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = self
            .outer
            .hi()
            .iter()
            .zip(mb.hi())
            .map(|(a, b)| a - b + 1)
            .collect();
        if lo.iter().zip(&hi).all(|(a, b)| a < b) {
            let translates = BoxWindow::new(lo, hi);
            for t in translates.points() {
                let cells: Option<Vec<usize>> = x
                    .offsets()
                    .iter()
                    .map(|o| {
                        let p: Vec<i64> = t.iter().zip(o).map(|(a, b)| a + b).collect();
                        self.cell(&p)
                    })
                    .collect();
                if let Some(cells) = cells {
                    constraints.push(cells);
                }
            }
        }
        Csp::new(x, self.outer.len(), constraints)
    }
}

/// `d x .. x d` torus, cells row-major, constraints read cyclically.
pub(crate) fn torus_csp(x: &Subshift, d: usize) -> Csp<'_> {
    let rank = x.rank();
    let torus = BoxWindow::cube(rank, d);
    let wrap = |p: &[i64]| -> usize {
        let q: Vec<i64> = p.iter().map(|v| v.rem_euclid(d as i64)).collect();
        torus.index(&q).unwrap()
    };
    let mut seen = HashSet::new();
    let mut constraints = Vec::new();
    for t in torus.points() {
        let cells: Vec<usize> = x
            .offsets()
            .iter()
            .map(|o| {
                let p: Vec<i64> = t.iter().zip(o).map(|(a, b)| a + b).collect();
                wrap(&p)
            })
            .collect();
        if seen.insert(cells.clone()) {
            constraints.push(cells);
        }
    }
    Csp::new(x, torus.len(), constraints)
}
