//! Finite logical matrices for the discussive language.
//!
//! A [`Matrix`] has truth values `1..=n`, a nonempty designated subset, a
//! unary table for `~` and three binary tables for `|`, `^` and `=>`. A
//! scheme is valid in a matrix when every assignment of values to its leaves
//! evaluates to a designated value; a matrix witnesses unprovability in a
//! Hilbert system when it validates the axioms, is closed under modus ponens
//! and refutes the target.

mod claims;
mod fixtures;
mod format;

use std::fmt;

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::formula::{Axiom, AxiomSystem, DiscursiveFormula, Leaf};

pub use claims::{verify_paper_claims, ClaimRecord};
pub use fixtures::{fixture, paper_matrix, Fixture, PaperMatrixId};
pub use format::{read_matrix, write_matrix};

/// A truth value, `1..=n`.
pub type Value = u8;

/// Largest supported matrix size.
pub const MAX_SIZE: usize = 64;

/// Upper bound on the assignments a single scheme check may enumerate.
pub const MAX_ASSIGNMENTS: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix size must be in 1..={MAX_SIZE}, got {0}")]
    InvalidSize(usize),
    #[error("the designated set is empty")]
    EmptyDesignated,
    #[error("value {value} in {table} is outside 1..={size}")]
    ValueOutOfRange {
        table: &'static str,
        value: u64,
        size: usize,
    },
    #[error("{table} has {found} entries, expected {expected}")]
    WrongArity {
        table: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("designated value {0} is listed twice")]
    DuplicateDesignated(Value),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("missing `{0}` section")]
    MissingSection(&'static str),
    #[error("leaf {0} has no value in the assignment")]
    UncoveredLeaf(String),
    #[error("{leaves} leaves over {size} values need {count} assignments (limit {MAX_ASSIGNMENTS})")]
    TooManyAssignments { leaves: usize, size: usize, count: u128 },
    #[error("unknown fixture `{0}` (expected P1..P13)")]
    UnknownFixture(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BinaryOp {
    Or,
    DConj,
    DImp,
}

impl BinaryOp {
    pub const ALL: [BinaryOp; 3] = [BinaryOp::Or, BinaryOp::DConj, BinaryOp::DImp];

    /// Keyword used in matrix files.
    pub fn keyword(self) -> &'static str {
        match self {
            BinaryOp::Or => "or",
            BinaryOp::DConj => "dand",
            BinaryOp::DImp => "dimp",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    size: usize,
    designated: Vec<bool>,
    neg: Vec<Value>,
    tables: [Vec<Value>; 3],
}

fn check_range(table: &'static str, values: &[Value], size: usize) -> Result<(), MatrixError> {
    match values.iter().find(|&&v| v == 0 || v as usize > size) {
        Some(&v) => Err(MatrixError::ValueOutOfRange {
            table,
            value: v as u64,
            size,
        }),
        None => Ok(()),
    }
}

fn check_len(table: &'static str, values: &[Value], expected: usize) -> Result<(), MatrixError> {
    if values.len() != expected {
        return Err(MatrixError::WrongArity {
            table,
            expected,
            found: values.len(),
        });
    }
    Ok(())
}

impl Matrix {
    /// Builds a matrix. Binary tables are row-major: entry `(a-1)*n + (b-1)`
    /// is the value of `a op b`.
    pub fn new(
        size: usize,
        designated: &[Value],
        neg: Vec<Value>,
        or: Vec<Value>,
        dconj: Vec<Value>,
        dimp: Vec<Value>,
    ) -> Result<Self, MatrixError> {
        if size == 0 || size > MAX_SIZE {
            return Err(MatrixError::InvalidSize(size));
        }
        if designated.is_empty() {
            return Err(MatrixError::EmptyDesignated);
        }
        check_range("designated", designated, size)?;
        let mut mask = vec![false; size];
        for &d in designated {
            if std::mem::replace(&mut mask[d as usize - 1], true) {
                return Err(MatrixError::DuplicateDesignated(d));
            }
        }
        check_len("neg", &neg, size)?;
        check_range("neg", &neg, size)?;
        for (op, table) in BinaryOp::ALL.iter().zip([&or, &dconj, &dimp]) {
            check_len(op.keyword(), table, size * size)?;
            check_range(op.keyword(), table, size)?;
        }
        Ok(Matrix {
            size,
            designated: mask,
            neg,
            tables: [or, dconj, dimp],
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> impl Iterator<Item = Value> {
        1..=self.size as Value
    }

    /// Designated values in ascending order.
    pub fn designated(&self) -> Vec<Value> {
        self.values().filter(|&v| self.is_designated(v)).collect()
    }

    /// Designated set as a bitmask, bit `v-1` for value `v`.
    pub fn designated_mask(&self) -> u64 {
        self.designated
            .iter()
            .enumerate()
            .filter(|(_, &d)| d)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn is_designated(&self, v: Value) -> bool {
        self.designated[v as usize - 1]
    }

    pub fn neg(&self, v: Value) -> Value {
        self.neg[v as usize - 1]
    }

    pub fn apply(&self, op: BinaryOp, a: Value, b: Value) -> Value {
        self.tables[op.index()][(a as usize - 1) * self.size + (b as usize - 1)]
    }

    pub fn neg_table(&self) -> &[Value] {
        &self.neg
    }

    /// Flat row-major table for `op`.
    pub fn table(&self, op: BinaryOp) -> &[Value] {
        &self.tables[op.index()]
    }

    /// All table entries in the documented order: `neg`, `or`, `dand`, `dimp`.
    pub fn cells(&self) -> impl Iterator<Item = Value> + '_ {
        self.neg.iter().chain(self.tables.iter().flatten()).copied()
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Rows<'a>(&'a [Value], usize);
        impl Serialize for Rows<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.1))?;
                for row in self.0.chunks(self.1) {
                    seq.serialize_element(row)?;
                }
                seq.end()
            }
        }
        let mut st = s.serialize_struct("Matrix", 6)?;
        st.serialize_field("size", &self.size)?;
        st.serialize_field("designated", &self.designated())?;
        st.serialize_field("neg", &self.neg)?;
        for op in BinaryOp::ALL {
            st.serialize_field(op.keyword(), &Rows(self.table(op), self.size))?;
        }
        st.end()
    }
}

/// Values for the leaves of a formula, kept in first-occurrence order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<(Leaf, Value)>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, leaf: Leaf, value: Value) {
        match self.0.iter_mut().find(|(l, _)| *l == leaf) {
            Some(slot) => slot.1 = value,
            None => self.0.push((leaf, value)),
        }
    }

    pub fn with(mut self, leaf: Leaf, value: Value) -> Self {
        self.set(leaf, value);
        self
    }

    pub fn get(&self, leaf: &Leaf) -> Option<Value> {
        self.0.iter().find(|(l, _)| l == leaf).map(|(_, v)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Leaf, Value)> {
        self.0.iter().map(|(l, v)| (l, *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(Leaf, Value)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Leaf, Value)>>(iter: I) -> Self {
        let mut a = Assignment::new();
        for (l, v) in iter {
            a.set(l, v);
        }
        a
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (leaf, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{leaf}={v}")?;
        }
        Ok(())
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            leaf: String,
            value: Value,
        }
        s.collect_seq(self.0.iter().map(|(l, v)| Entry {
            leaf: l.name(),
            value: *v,
        }))
    }
}

/// Evaluates `f` in `m` by structural recursion.
pub fn eval(m: &Matrix, f: &DiscursiveFormula, a: &Assignment) -> Result<Value, MatrixError> {
    use DiscursiveFormula as F;
    let leaf = |leaf: Leaf| {
        let v = a
            .get(&leaf)
            .ok_or_else(|| MatrixError::UncoveredLeaf(leaf.name()))?;
        check_range("assignment", &[v], m.size)?;
        Ok(v)
    };
    Ok(match f {
        F::Atom(x) => leaf(Leaf::Atom(x.clone()))?,
        F::MetaVar(c) => leaf(Leaf::MetaVar(*c))?,
        F::Neg(x) => m.neg(eval(m, x, a)?),
        F::Or(l, r) => m.apply(BinaryOp::Or, eval(m, l, a)?, eval(m, r, a)?),
        F::DConj(l, r) => m.apply(BinaryOp::DConj, eval(m, l, a)?, eval(m, r, a)?),
        F::DImp(l, r) => m.apply(BinaryOp::DImp, eval(m, l, a)?, eval(m, r, a)?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Instr {
    Leaf(usize),
    Neg,
    Bin(BinaryOp),
}

/// Postfix form of a formula with leaves numbered in first-occurrence order.
#[derive(Debug, Clone)]
pub(crate) struct Program {
    pub(crate) code: Vec<Instr>,
    pub(crate) leaves: Vec<Leaf>,
}

impl Program {
    pub(crate) fn compile(f: &DiscursiveFormula) -> Self {
        fn emit(f: &DiscursiveFormula, leaves: &[Leaf], code: &mut Vec<Instr>) {
            use DiscursiveFormula as F;
            let bin = |op, l, r, code: &mut Vec<Instr>| {
                emit(l, leaves, code);
                emit(r, leaves, code);
                code.push(Instr::Bin(op));
            };
            match f {
                F::Atom(x) => {
                    let i = leaves.iter().position(|l| *l == Leaf::Atom(x.clone()));
                    code.push(Instr::Leaf(i.expect("leaf collected")));
                }
                F::MetaVar(c) => {
                    let i = leaves.iter().position(|l| *l == Leaf::MetaVar(*c));
                    code.push(Instr::Leaf(i.expect("leaf collected")));
                }
                F::Neg(x) => {
                    emit(x, leaves, code);
                    code.push(Instr::Neg);
                }
                F::Or(l, r) => bin(BinaryOp::Or, l, r, code),
                F::DConj(l, r) => bin(BinaryOp::DConj, l, r, code),
                F::DImp(l, r) => bin(BinaryOp::DImp, l, r, code),
            }
        }
        let leaves = f.leaves();
        let mut code = Vec::new();
        emit(f, &leaves, &mut code);
        Program { code, leaves }
    }

    pub(crate) fn run(&self, m: &Matrix, vals: &[Value], stack: &mut Vec<Value>) -> Value {
        stack.clear();
        for ins in &self.code {
            match *ins {
                Instr::Leaf(i) => stack.push(vals[i]),
                Instr::Neg => {
                    let x = stack.pop().expect("operand");
                    stack.push(m.neg(x));
                }
                Instr::Bin(op) => {
                    let y = stack.pop().expect("operand");
                    let x = stack.pop().expect("operand");
                    stack.push(m.apply(op, x, y));
                }
            }
        }
        stack.pop().expect("result")
    }
}

/// Calls `visit` with every assignment of `1..=n` to `k` leaves, first leaf
/// most significant (lexicographic order). Stops when `visit` returns false.
pub(crate) fn for_each_tuple(n: usize, k: usize, mut visit: impl FnMut(&[Value]) -> bool) {
    let mut vals = vec![1 as Value; k];
    loop {
        if !visit(&vals) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if (vals[i] as usize) < n {
                vals[i] += 1;
                break;
            }
            vals[i] = 1;
        }
    }
}

pub(crate) fn assignment_count(n: usize, k: usize) -> Result<u64, MatrixError> {
    let count = (n as u128).pow(k as u32);
    if count > MAX_ASSIGNMENTS as u128 {
        return Err(MatrixError::TooManyAssignments {
            leaves: k,
            size: n,
            count,
        });
    }
    Ok(count as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SchemeOutcome {
    Pass { assignments_checked: u64 },
    Fail { witness: Assignment, value: Value },
}

impl SchemeOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, SchemeOutcome::Pass { .. })
    }
}

/// Decides whether `scheme` takes only designated values in `m`. On failure
/// the witness is the lexicographically first counter-assignment, leaves in
/// first-occurrence order.
pub fn check_scheme(m: &Matrix, scheme: &DiscursiveFormula) -> Result<SchemeOutcome, MatrixError> {
    let prog = Program::compile(scheme);
    let k = prog.leaves.len();
    let count = assignment_count(m.size, k)?;
    let mut stack = Vec::with_capacity(prog.code.len());
    let mut failure = None;
    for_each_tuple(m.size, k, |vals| {
        let v = prog.run(m, vals, &mut stack);
        if m.is_designated(v) {
            true
        } else {
            failure = Some((vals.to_vec(), v));
            false
        }
    });
    Ok(match failure {
        None => SchemeOutcome::Pass {
            assignments_checked: count,
        },
        Some((vals, value)) => SchemeOutcome::Fail {
            witness: prog.leaves.iter().cloned().zip(vals).collect(),
            value,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum MpOutcome {
    Pass,
    /// `antecedent` and `antecedent => consequent` are designated but
    /// `consequent` is not.
    Fail { antecedent: Value, consequent: Value },
}

impl MpOutcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, MpOutcome::Pass)
    }
}

/// Checks closure of the designated set under modus ponens for `=>`.
pub fn check_mp(m: &Matrix) -> MpOutcome {
    for a in m.values().filter(|&a| m.is_designated(a)) {
        for b in m.values() {
            if m.is_designated(m.apply(BinaryOp::DImp, a, b)) && !m.is_designated(b) {
                return MpOutcome::Fail {
                    antecedent: a,
                    consequent: b,
                };
            }
        }
    }
    MpOutcome::Pass
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeResult {
    pub id: String,
    pub outcome: SchemeOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub matrix: Option<String>,
    pub axioms: Vec<SchemeResult>,
    pub mp: MpOutcome,
    pub refutations: Vec<SchemeResult>,
}

impl ValidationReport {
    pub fn all_axioms_pass(&self) -> bool {
        self.axioms.iter().all(|r| r.outcome.is_pass())
    }

    pub fn failed_axioms(&self) -> impl Iterator<Item = &SchemeResult> {
        self.axioms.iter().filter(|r| !r.outcome.is_pass())
    }

    /// Every refutation target failed.
    pub fn all_refuted(&self) -> bool {
        self.refutations.iter().all(|r| !r.outcome.is_pass())
    }

    /// The matrix validates the axioms, is MP-closed and refutes every target.
    pub fn separates(&self) -> bool {
        self.all_axioms_pass() && self.mp.is_pass() && self.all_refuted()
    }
}

/// Checks every axiom (no short-circuit), modus ponens closure, and that each
/// refutation target fails.
pub fn validate(
    m: &Matrix,
    axioms: &[Axiom],
    refute: &[Axiom],
) -> Result<ValidationReport, MatrixError> {
    let run = |list: &[Axiom]| {
        list.iter()
            .map(|ax| {
                Ok(SchemeResult {
                    id: ax.id.clone(),
                    outcome: check_scheme(m, &ax.scheme)?,
                })
            })
            .collect::<Result<Vec<_>, MatrixError>>()
    };
    Ok(ValidationReport {
        matrix: None,
        axioms: run(axioms)?,
        mp: check_mp(m),
        refutations: run(refute)?,
    })
}

pub fn check_system(m: &Matrix, sys: &AxiomSystem) -> Result<ValidationReport, MatrixError> {
    validate(m, sys.axioms(), &[])
}
