//! Partially filled matrices and a direct consistency check on them.

use serde::Serialize;

use crate::formula::Axiom;
use crate::matrix::{for_each_tuple, Assignment, BinaryOp, Instr, Matrix, MatrixError, Program, Value};

/// A table cell. Cells are laid out as `neg` (by argument), then the `or`,
/// `dand` and `dimp` tables, each row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellRef {
    Neg(Value),
    Bin(BinaryOp, Value, Value),
}

impl CellRef {
    pub fn index(self, n: usize) -> usize {
        match self {
            CellRef::Neg(a) => a as usize - 1,
            CellRef::Bin(op, a, b) => {
                n + op as usize * n * n + (a as usize - 1) * n + (b as usize - 1)
            }
        }
    }

    pub fn from_index(i: usize, n: usize) -> Self {
        if i < n {
            return CellRef::Neg(i as Value + 1);
        }
        let j = i - n;
        let op = BinaryOp::ALL[j / (n * n)];
        let k = j % (n * n);
        CellRef::Bin(op, (k / n) as Value + 1, (k % n) as Value + 1)
    }
}

pub fn cell_count(n: usize) -> usize {
    n + 3 * n * n
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMatrix {
    size: usize,
    designated: Vec<bool>,
    cells: Vec<Option<Value>>,
}

impl PartialMatrix {
    pub fn new(size: usize, designated: &[Value]) -> Result<Self, MatrixError> {
        if size == 0 || size > crate::matrix::MAX_SIZE {
            return Err(MatrixError::InvalidSize(size));
        }
        if designated.is_empty() {
            return Err(MatrixError::EmptyDesignated);
        }
        let mut mask = vec![false; size];
        for &d in designated {
            if d == 0 || d as usize > size {
                return Err(MatrixError::ValueOutOfRange {
                    table: "designated",
                    value: d as u64,
                    size,
                });
            }
            mask[d as usize - 1] = true;
        }
        Ok(PartialMatrix {
            size,
            designated: mask,
            cells: vec![None; cell_count(size)],
        })
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        PartialMatrix {
            size: m.size(),
            designated: m.values().map(|v| m.is_designated(v)).collect(),
            cells: m.cells().map(Some).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_designated(&self, v: Value) -> bool {
        self.designated[v as usize - 1]
    }

    pub fn get(&self, c: CellRef) -> Option<Value> {
        self.cells[c.index(self.size)]
    }

    pub fn set(&mut self, c: CellRef, v: Option<Value>) {
        assert!(v.is_none_or(|v| v >= 1 && v as usize <= self.size), "value out of range");
        self.cells[c.index(self.size)] = v;
    }

    /// Cells in layout order.
    pub fn cells(&self) -> &[Option<Value>] {
        &self.cells
    }

    pub fn complete(&self) -> Option<Matrix> {
        let n = self.size;
        let vals: Option<Vec<Value>> = self.cells.iter().copied().collect();
        let vals = vals?;
        let table = |k: usize| vals[n + k * n * n..n + (k + 1) * n * n].to_vec();
        let designated: Vec<Value> = (1..=n as Value).filter(|&v| self.is_designated(v)).collect();
        Some(
            Matrix::new(n, &designated, vals[..n].to_vec(), table(0), table(1), table(2))
                .expect("cells in range"),
        )
    }

    fn run(&self, prog: &Program, vals: &[Value], stack: &mut Vec<Value>) -> Option<Value> {
        stack.clear();
        for ins in &prog.code {
            let v = match *ins {
                Instr::Leaf(i) => vals[i],
                Instr::Neg => {
                    let x = stack.pop().expect("operand");
                    self.get(CellRef::Neg(x))?
                }
                Instr::Bin(op) => {
                    let y = stack.pop().expect("operand");
                    let x = stack.pop().expect("operand");
                    self.get(CellRef::Bin(op, x, y))?
                }
            };
            stack.push(v);
        }
        stack.pop()
    }
}

/// Why a partial matrix has no acceptable completion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rejection {
    /// A fully determined instance of `axiom` is not designated.
    Axiom {
        axiom: String,
        assignment: Assignment,
        value: Value,
    },
    /// `a` and `a => b` designated, `b` not.
    ModusPonens { antecedent: Value, consequent: Value },
}

/// Finds an axiom instance already forced to a non-designated value, or a
/// determined `dimp` cell breaking modus ponens.
pub fn check_partial(p: &PartialMatrix, validate: &[Axiom]) -> Option<Rejection> {
    let n = p.size as Value;
    for a in 1..=n {
        for b in 1..=n {
            if let Some(v) = p.get(CellRef::Bin(BinaryOp::DImp, a, b)) {
                if p.is_designated(a) && p.is_designated(v) && !p.is_designated(b) {
                    return Some(Rejection::ModusPonens {
                        antecedent: a,
                        consequent: b,
                    });
                }
            }
        }
    }
    let mut stack = Vec::new();
    for ax in validate {
        let prog = Program::compile(&ax.scheme);
        let mut found = None;
        for_each_tuple(p.size, prog.leaves.len(), |vals| {
            match p.run(&prog, vals, &mut stack) {
                Some(v) if !p.is_designated(v) => {
                    found = Some(Rejection::Axiom {
                        axiom: ax.id.clone(),
                        assignment: prog.leaves.iter().cloned().zip(vals.iter().copied()).collect(),
                        value: v,
                    });
                    false
                }
                _ => true,
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}
