//! Backtracking search for matrices that validate a set of axioms, are closed
//! under modus ponens and refute given schemes.
//!
//! The outer loop runs over designated sets in increasing bitmask order (bit
//! `i` for value `i + 1`). Inside, cells are filled in layout order (`neg`,
//! then `or`, `dand`, `dimp`, each row-major) with values tried ascending.
//!
//! Every axiom is expanded into its ground instances over `1..=n` once.
//! An instance watches the first cell its evaluation is blocked on; when that
//! cell is assigned the instance is re-evaluated and either moves to its next
//! blocking cell or is fully determined, in which case a non-designated value
//! fails the branch. Each unassigned cell keeps a domain of remaining values:
//! when an instance starts watching a cell, values that would complete it
//! with a non-designated result are removed, and an empty domain fails the
//! branch. Modus ponens restricts the `dimp` domains up front. Refutation
//! targets are checked on complete matrices.
//!
//! With pruning on, a partial matrix is abandoned as soon as some
//! designated-preserving value permutation (commuting with `neg` if `neg` is
//! fixed) maps its determined prefix to something lexicographically smaller.

mod canon;
mod partial;

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::formula::Axiom;
use crate::matrix::{check_scheme, BinaryOp, Instr, Matrix, MatrixError, Program, Value};

pub use canon::{canonicalize, naive_enumerate};
pub use partial::{cell_count, check_partial, CellRef, PartialMatrix, Rejection};

/// Largest size the search accepts.
pub const MAX_SEARCH_SIZE: usize = 6;

/// Upper bound on ground instances across all validated axioms.
pub const MAX_INSTANCES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search size must be between 1 and {MAX_SEARCH_SIZE}, got {0}")]
    InvalidSize(usize),
    #[error("naive enumeration supports sizes 1 and 2 only, got {0}")]
    NaiveTooLarge(usize),
    #[error("fixed {table} inconsistent with size {size}: {message}")]
    InconsistentFixed {
        table: &'static str,
        size: usize,
        message: String,
    },
    #[error("{count} ground instances exceed the limit of {MAX_INSTANCES}")]
    TooManyInstances { count: u128 },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Default)]
pub struct SearchConstraints {
    pub size: usize,
    pub validate: Vec<Axiom>,
    pub refute: Vec<Axiom>,
    pub designated: Option<Vec<Value>>,
    pub neg: Option<Vec<Value>>,
    pub prune_isomorphs: bool,
    /// Stop after this many matrices.
    pub limit: Option<usize>,
    pub budget: Option<Duration>,
}

impl SearchConstraints {
    pub fn new(size: usize) -> Self {
        SearchConstraints {
            size,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The whole space was searched.
    Exhausted,
    LimitReached,
    /// The time budget ran out; results are partial.
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub termination: Termination,
    pub found: usize,
    /// Cell assignments tried.
    pub nodes: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub matrices: Vec<Matrix>,
    pub stats: SearchStats,
}

/// Whether the search's propagation rules out every completion of `p`:
/// its cells are assigned in layout order, each checked against the
/// remaining domain and propagated as during the search. Isomorphism pruning
/// and refutation targets play no part.
pub fn rejects_partial(c: &SearchConstraints, p: &PartialMatrix) -> Result<bool, SearchError> {
    if p.size() != c.size {
        return Err(SearchError::InconsistentFixed {
            table: "partial matrix",
            size: c.size,
            message: format!("size {}", p.size()),
        });
    }
    let mut engine = Engine::new(c)?;
    let mask = (1..=p.size() as Value)
        .filter(|&v| p.is_designated(v))
        .fold(0u32, |m, v| m | 1 << (v - 1));
    if !engine.reset(mask) {
        return Ok(true);
    }
    for (cell, v) in p.cells().iter().enumerate() {
        let Some(v) = *v else { continue };
        if engine.domain[cell] >> (v - 1) & 1 == 0 {
            return Ok(true);
        }
        engine.cells[cell] = v;
        if !engine.propagate(cell) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Collects every matrix `search` emits.
pub fn find_matrices(c: &SearchConstraints) -> Result<SearchOutcome, SearchError> {
    let mut matrices = Vec::new();
    let stats = search(c, |m| matrices.push(m.clone()))?;
    Ok(SearchOutcome { matrices, stats })
}

/// Runs the search, handing each matrix found to `emit` as soon as it is found.
pub fn search(c: &SearchConstraints, mut emit: impl FnMut(&Matrix)) -> Result<SearchStats, SearchError> {
    let n = c.size;
    if n == 0 || n > MAX_SEARCH_SIZE {
        return Err(SearchError::InvalidSize(n));
    }
    let fixed_designated = match &c.designated {
        Some(d) => Some(designated_mask(n, d)?),
        None => None,
    };
    if let Some(neg) = &c.neg {
        if neg.len() != n {
            return Err(SearchError::InconsistentFixed {
                table: "neg",
                size: n,
                message: format!("{} entries", neg.len()),
            });
        }
        if let Some(v) = neg.iter().find(|&&v| v == 0 || v as usize > n) {
            return Err(SearchError::InconsistentFixed {
                table: "neg",
                size: n,
                message: format!("value {v} out of range"),
            });
        }
    }

    let mut engine = Engine::new(c)?;
    let deadline = c.budget.map(|b| Instant::now() + b);
    let masks: Vec<u32> = match fixed_designated {
        Some(m) => vec![m],
        None => (1..1u32 << n).collect(),
    };
    let mut found = 0usize;
    for mask in masks {
        let flow = engine.run_designated(mask, deadline, &mut |m| {
            emit(m);
            found += 1;
            c.limit.is_some_and(|l| found >= l)
        });
        if let Some(t) = flow {
            return Ok(SearchStats {
                termination: t,
                found,
                nodes: engine.nodes,
            });
        }
    }
    Ok(SearchStats {
        termination: Termination::Exhausted,
        found,
        nodes: engine.nodes,
    })
}

fn designated_mask(n: usize, d: &[Value]) -> Result<u32, SearchError> {
    let bad = |message: String| SearchError::InconsistentFixed {
        table: "designated",
        size: n,
        message,
    };
    if d.is_empty() {
        return Err(bad("empty".into()));
    }
    let mut mask = 0u32;
    for &v in d {
        if v == 0 || v as usize > n {
            return Err(bad(format!("value {v} out of range")));
        }
        if mask >> (v - 1) & 1 == 1 {
            return Err(bad(format!("value {v} repeated")));
        }
        mask |= 1 << (v - 1);
    }
    Ok(mask)
}

enum Probe {
    Value(Value),
    Blocked(usize),
}

/// Ground instance: program index and leaf values (at `vals[inst * stride..]`).
struct Engine<'c> {
    c: &'c SearchConstraints,
    n: usize,
    programs: Vec<Program>,
    inst_prog: Vec<u32>,
    inst_vals: Vec<Value>,
    stride: usize,
    /// Cell values, 0 while unassigned.
    cells: Vec<Value>,
    designated: Vec<bool>,
    watch: Vec<Vec<u32>>,
    /// Watch lists pushed to, for undoing on backtrack.
    pushed: Vec<usize>,
    /// Remaining values per unassigned cell, bit `v - 1` for value `v`.
    domain: Vec<u8>,
    /// Previous domains, for undoing on backtrack.
    narrowed: Vec<(usize, u8)>,
    /// Value permutations and, per permutation, the preimage of each cell.
    group: Vec<(Vec<usize>, Vec<usize>)>,
    stack: Vec<Value>,
    nodes: u64,
}

impl<'c> Engine<'c> {
    fn new(c: &'c SearchConstraints) -> Result<Self, SearchError> {
        let n = c.size;
        let programs: Vec<Program> = c.validate.iter().map(|a| Program::compile(&a.scheme)).collect();
        let stride = programs.iter().map(|p| p.leaves.len()).max().unwrap_or(0).max(1);
        let count: u128 = programs
            .iter()
            .map(|p| (n as u128).pow(p.leaves.len() as u32))
            .sum();
        if count > MAX_INSTANCES as u128 {
            return Err(SearchError::TooManyInstances { count });
        }
        let mut inst_prog = Vec::with_capacity(count as usize);
        let mut inst_vals = Vec::with_capacity(count as usize * stride);
        for (i, p) in programs.iter().enumerate() {
            crate::matrix::for_each_tuple(n, p.leaves.len(), |vals| {
                inst_prog.push(i as u32);
                inst_vals.extend_from_slice(vals);
                inst_vals.resize(inst_prog.len() * stride, 0);
                true
            });
        }
        let cells = cell_count(n);
        Ok(Engine {
            c,
            n,
            programs,
            inst_prog,
            inst_vals,
            stride,
            cells: vec![0; cells],
            designated: vec![false; n],
            watch: vec![Vec::new(); cells],
            pushed: Vec::new(),
            domain: vec![0; cells],
            narrowed: Vec::new(),
            group: Vec::new(),
            stack: Vec::new(),
            nodes: 0,
        })
    }

    fn cell(&self, c: CellRef) -> usize {
        c.index(self.n)
    }

    fn probe(&mut self, inst: usize) -> Probe {
        let prog = &self.programs[self.inst_prog[inst] as usize];
        let vals = &self.inst_vals[inst * self.stride..];
        self.stack.clear();
        for ins in &prog.code {
            let v = match *ins {
                Instr::Leaf(i) => vals[i],
                Instr::Neg => {
                    let x = self.stack.pop().unwrap();
                    let cell = CellRef::Neg(x).index(self.n);
                    if self.cells[cell] == 0 {
                        return Probe::Blocked(cell);
                    }
                    self.cells[cell]
                }
                Instr::Bin(op) => {
                    let y = self.stack.pop().unwrap();
                    let x = self.stack.pop().unwrap();
                    let cell = CellRef::Bin(op, x, y).index(self.n);
                    if self.cells[cell] == 0 {
                        return Probe::Blocked(cell);
                    }
                    self.cells[cell]
                }
            };
            self.stack.push(v);
        }
        Probe::Value(self.stack.pop().unwrap())
    }

    /// Searches one designated set. Returns a termination if the search must stop.
    fn run_designated(
        &mut self,
        mask: u32,
        deadline: Option<Instant>,
        emit: &mut dyn FnMut(&Matrix) -> bool,
    ) -> Option<Termination> {
        if !self.reset(mask) {
            return None;
        }
        self.dfs(0, deadline, emit)
    }

    /// Clears all cells and sets up domains and watches for the designated
    /// set `mask`. False if some instance already fails.
    fn reset(&mut self, mask: u32) -> bool {
        let n = self.n;
        self.designated = (0..n).map(|v| mask >> v & 1 == 1).collect();
        self.cells.iter_mut().for_each(|c| *c = 0);
        self.watch.iter_mut().for_each(Vec::clear);
        self.pushed.clear();
        self.narrowed.clear();
        let all = ((1u16 << n) - 1) as u8;
        for (i, d) in self.domain.iter_mut().enumerate() {
            *d = match (CellRef::from_index(i, n), &self.c.neg) {
                (CellRef::Neg(a), Some(neg)) => 1 << (neg[a as usize - 1] - 1),
                // modus ponens: a and a => b designated forces b designated
                (CellRef::Bin(BinaryOp::DImp, a, b), _)
                    if self.designated[a as usize - 1] && !self.designated[b as usize - 1] =>
                {
                    all & !(mask as u8)
                }
                _ => all,
            };
        }
        self.group = if self.c.prune_isomorphs {
            canon::automorphism_candidates(&self.designated, self.c.neg.as_deref())
                .into_iter()
                .skip(1) // identity
                .map(|p| {
                    let pre = self.preimages(&p);
                    (p, pre)
                })
                .collect()
        } else {
            Vec::new()
        };
        for inst in 0..self.inst_prog.len() {
            match self.probe(inst) {
                Probe::Value(v) => {
                    if !self.designated[v as usize - 1] {
                        return false;
                    }
                }
                Probe::Blocked(cell) => {
                    self.watch[cell].push(inst as u32);
                    if !self.narrow(inst, cell) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// For permutation `p`, the cell of the original matrix whose value
    /// determines each cell of the permuted matrix.
    fn preimages(&self, p: &[usize]) -> Vec<usize> {
        let n = self.n;
        let mut inv = vec![0 as Value; n];
        for (v, &w) in p.iter().enumerate() {
            inv[w] = v as Value + 1;
        }
        (0..cell_count(n))
            .map(|i| match CellRef::from_index(i, n) {
                CellRef::Neg(a) => self.cell(CellRef::Neg(inv[a as usize - 1])),
                CellRef::Bin(op, a, b) => {
                    self.cell(CellRef::Bin(op, inv[a as usize - 1], inv[b as usize - 1]))
                }
            })
            .collect()
    }

    /// Drops from the domain of `cell` every value that would complete `inst`
    /// with a non-designated result. False if the domain becomes empty.
    fn narrow(&mut self, inst: usize, cell: usize) -> bool {
        let before = self.domain[cell];
        let mut after = before;
        for v in 1..=self.n as Value {
            if before >> (v - 1) & 1 == 0 {
                continue;
            }
            self.cells[cell] = v;
            if let Probe::Value(x) = self.probe(inst) {
                if !self.designated[x as usize - 1] {
                    after &= !(1 << (v - 1));
                }
            }
        }
        self.cells[cell] = 0;
        if after != before {
            self.narrowed.push((cell, before));
            self.domain[cell] = after;
        }
        after != 0
    }

    fn dfs(
        &mut self,
        cell: usize,
        deadline: Option<Instant>,
        emit: &mut dyn FnMut(&Matrix) -> bool,
    ) -> Option<Termination> {
        if cell == self.cells.len() {
            let m = self.matrix();
            let refuted = self
                .c
                .refute
                .iter()
                .all(|ax| check_scheme(&m, &ax.scheme).is_ok_and(|o| !o.is_pass()));
            if refuted && emit(&m) {
                return Some(Termination::LimitReached);
            }
            return None;
        }
        let domain = self.domain[cell];
        for v in 1..=self.n as Value {
            if domain >> (v - 1) & 1 == 0 {
                continue;
            }
            self.nodes += 1;
            if self.nodes & 0x3ff == 0 && deadline.is_some_and(|d| Instant::now() >= d) {
                return Some(Termination::BudgetExhausted);
            }
            self.cells[cell] = v;
            let (pushed, narrowed) = (self.pushed.len(), self.narrowed.len());
            if self.propagate(cell) && self.is_prefix_minimal(cell) {
                if let Some(t) = self.dfs(cell + 1, deadline, emit) {
                    self.cells[cell] = 0;
                    return Some(t);
                }
            }
            while self.pushed.len() > pushed {
                let w = self.pushed.pop().unwrap();
                self.watch[w].pop();
            }
            while self.narrowed.len() > narrowed {
                let (c, d) = self.narrowed.pop().unwrap();
                self.domain[c] = d;
            }
            self.cells[cell] = 0;
        }
        None
    }

    /// Re-evaluates the instances watching `cell`. False on a violation.
    fn propagate(&mut self, cell: usize) -> bool {
        for k in 0..self.watch[cell].len() {
            let inst = self.watch[cell][k] as usize;
            match self.probe(inst) {
                Probe::Value(v) => {
                    if !self.designated[v as usize - 1] {
                        return false;
                    }
                }
                Probe::Blocked(next) => {
                    self.watch[next].push(inst as u32);
                    self.pushed.push(next);
                    if !self.narrow(inst, next) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// No permutation maps the assigned prefix `0..=cell` below itself.
    fn is_prefix_minimal(&self, cell: usize) -> bool {
        'perm: for (p, pre) in &self.group {
            for i in 0..=cell {
                let src = self.cells[pre[i]];
                if src == 0 {
                    continue 'perm;
                }
                let img = p[src as usize - 1] as Value + 1;
                match img.cmp(&self.cells[i]) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => continue 'perm,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        true
    }

    fn matrix(&self) -> Matrix {
        let n = self.n;
        let designated: Vec<Value> = (1..=n as Value).filter(|&v| self.designated[v as usize - 1]).collect();
        let table = |k: usize| self.cells[n + k * n * n..n + (k + 1) * n * n].to_vec();
        Matrix::new(n, &designated, self.cells[..n].to_vec(), table(0), table(1), table(2))
            .expect("complete assignment")
    }
}
