//! Translation of the discussive language into S5 and an S5 decision procedure.
//!
//! The translation leaves atoms, `~` and `|` alone and maps
//!
//! ```text
//! a => b   to   <>a -> b
//! a ^ b    to   a & <>b      (right-discussive, the default)
//!               <>a & b      (left-discussive, DConjReading::Left)
//! ```
//!
//! A discursive formula `f` is D2-valid when `<>τ(f)` is S5-valid.
//!
//! S5 validity is decided on universal models: every S5 countermodel can be
//! cut down to the cluster of its evaluation world, and worlds with equal
//! valuations can be merged, so it suffices to enumerate every nonempty set of
//! propositional valuations over the formula's atoms and every world in it.
//! With `k` atoms that is `2^(2^k) - 1` models.

mod classify;
mod kripke;

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::formula::{DiscursiveFormula, ModalFormula};

pub use classify::{
    check_c_axioms, check_equivalence_lemma, classify_d_axioms, published_mark, CAxiomRow, ClassificationRow,
    RowStatus, TableMark,
};
pub use kripke::{eval_explicit, ExplicitKripkeModel};

/// Default bound on the number of atoms `s5_valid` will enumerate over.
pub const DEFAULT_MAX_ATOMS: usize = 4;

/// Largest bound `S5Options::max_atoms` accepts (2^32 models).
pub const HARD_MAX_ATOMS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModalError {
    #[error("formula has {atoms} atoms; the decision procedure is limited to {limit}")]
    AtomLimit { atoms: usize, limit: usize },
    #[error("atom `{0}` has no valuation in the model")]
    UnknownAtom(String),
    #[error("metavariable {0} cannot be translated; use a ground instance")]
    Metavariable(char),
    #[error("modal operator in a formula that must be propositional")]
    ModalOperator,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("world {world} out of range (model has {worlds})")]
    WorldOutOfRange { world: usize, worlds: usize },
}

/// How `^` is translated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DConjReading {
    /// `a ^ b` becomes `a & <>b`.
    #[default]
    Right,
    /// `a ^ b` becomes `<>a & b`.
    Left,
}

impl DConjReading {
    pub fn other(self) -> Self {
        match self {
            DConjReading::Right => DConjReading::Left,
            DConjReading::Left => DConjReading::Right,
        }
    }
}

impl fmt::Display for DConjReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DConjReading::Right => "right",
            DConjReading::Left => "left",
        })
    }
}

/// The translation τ.
pub fn translate(f: &DiscursiveFormula, reading: DConjReading) -> Result<ModalFormula, ModalError> {
    use DiscursiveFormula as F;
    use ModalFormula as M;
    Ok(match f {
        F::Atom(a) => M::Atom(a.clone()),
        F::MetaVar(c) => return Err(ModalError::Metavariable(*c)),
        F::Neg(x) => M::neg(translate(x, reading)?),
        F::Or(l, r) => M::or(translate(l, reading)?, translate(r, reading)?),
        F::DImp(l, r) => M::imp(M::dia(translate(l, reading)?), translate(r, reading)?),
        F::DConj(l, r) => {
            let (l, r) = (translate(l, reading)?, translate(r, reading)?);
            match reading {
                DConjReading::Right => M::and(l, M::dia(r)),
                DConjReading::Left => M::and(M::dia(l), r),
            }
        }
    })
}

/// An S5 model in normal form: distinct valuations, every world sees every world.
///
/// A valuation is a bitmask over `atoms`, bit `i` for `atoms[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct S5UniversalModel {
    atoms: Vec<String>,
    worlds: Vec<u64>,
}

impl S5UniversalModel {
    pub fn new(atoms: Vec<String>, worlds: Vec<u64>) -> Result<Self, ModalError> {
        if worlds.is_empty() {
            return Err(ModalError::InvalidModel("no worlds".into()));
        }
        if atoms.len() > 63 {
            return Err(ModalError::InvalidModel("too many atoms".into()));
        }
        let limit = 1u64 << atoms.len();
        for (i, w) in worlds.iter().enumerate() {
            if *w >= limit {
                return Err(ModalError::InvalidModel(format!(
                    "world {i} assigns atoms beyond the {} declared",
                    atoms.len()
                )));
            }
            if worlds[..i].contains(w) {
                return Err(ModalError::InvalidModel(format!("world {i} duplicates a valuation")));
            }
        }
        Ok(S5UniversalModel { atoms, worlds })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn worlds(&self) -> &[u64] {
        &self.worlds
    }

    /// Truth of `atom` at world `w`.
    pub fn holds(&self, atom: &str, w: usize) -> Option<bool> {
        let i = self.atoms.iter().position(|a| a == atom)?;
        Some(self.worlds[w] >> i & 1 == 1)
    }

    /// Valuation of world `w` as a string of `0`/`1`, one character per atom.
    pub fn world_bits(&self, w: usize) -> String {
        (0..self.atoms.len())
            .map(|i| if self.worlds[w] >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn eval(&self, f: &ModalFormula, w: usize) -> Result<bool, ModalError> {
        if w >= self.worlds.len() {
            return Err(ModalError::WorldOutOfRange {
                world: w,
                worlds: self.worlds.len(),
            });
        }
        use ModalFormula as M;
        Ok(match f {
            M::Atom(a) => self.holds(a, w).ok_or_else(|| ModalError::UnknownAtom(a.clone()))?,
            M::Neg(x) => !self.eval(x, w)?,
            M::Or(l, r) => self.eval(l, w)? | self.eval(r, w)?,
            M::And(l, r) => self.eval(l, w)? & self.eval(r, w)?,
            M::Imp(l, r) => !self.eval(l, w)? | self.eval(r, w)?,
            M::Iff(l, r) => self.eval(l, w)? == self.eval(r, w)?,
            M::Dia(x) => {
                let mut any = false;
                for u in 0..self.worlds.len() {
                    any |= self.eval(x, u)?;
                }
                any
            }
            M::Box(x) => {
                let mut all = true;
                for u in 0..self.worlds.len() {
                    all &= self.eval(x, u)?;
                }
                all
            }
        })
    }

    /// The same model with the universal relation spelled out.
    pub fn to_explicit(&self) -> ExplicitKripkeModel {
        let n = self.worlds.len();
        let valuation = self
            .atoms
            .iter()
            .map(|a| {
                let ws = (0..n).filter(|&w| self.holds(a, w) == Some(true)).collect();
                (a.clone(), ws)
            })
            .collect();
        ExplicitKripkeModel::universal(n, valuation).expect("universal relation is an equivalence")
    }
}

/// A universal model together with the world at which a formula fails.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Countermodel {
    pub model: S5UniversalModel,
    pub world: usize,
}

impl Serialize for Countermodel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let worlds: Vec<String> = (0..self.model.worlds.len())
            .map(|w| self.model.world_bits(w))
            .collect();
        let mut st = s.serialize_struct("Countermodel", 3)?;
        st.serialize_field("atoms", &self.model.atoms)?;
        st.serialize_field("worlds", &worlds)?;
        st.serialize_field("world", &self.world)?;
        st.end()
    }
}

impl fmt::Display for Countermodel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "atoms {}; worlds", self.model.atoms.join(" "))?;
        for w in 0..self.model.worlds.len() {
            write!(f, " {}", self.model.world_bits(w))?;
        }
        write!(f, "; fails at world {}", self.world)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    /// Holds at every world of all `models_checked` universal models.
    Valid { models_checked: u64 },
    Invalid { countermodel: Countermodel },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }

    pub fn countermodel(&self) -> Option<&Countermodel> {
        match self {
            Verdict::Invalid { countermodel } => Some(countermodel),
            Verdict::Valid { .. } => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid { .. } => f.write_str("VALID"),
            Verdict::Invalid { .. } => f.write_str("INVALID"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct S5Options {
    pub max_atoms: usize,
}

impl Default for S5Options {
    fn default() -> Self {
        S5Options {
            max_atoms: DEFAULT_MAX_ATOMS,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Atom(usize),
    Neg,
    Or,
    And,
    Imp,
    Iff,
    Dia,
    Box,
}

fn compile(f: &ModalFormula, atoms: &[String], code: &mut Vec<Op>) {
    use ModalFormula as M;
    let bin = |l, r, op, code: &mut Vec<Op>| {
        compile(l, atoms, code);
        compile(r, atoms, code);
        code.push(op);
    };
    match f {
        M::Atom(a) => code.push(Op::Atom(
            atoms.iter().position(|x| x == a).expect("atom collected"),
        )),
        M::Neg(x) => {
            compile(x, atoms, code);
            code.push(Op::Neg);
        }
        M::Dia(x) => {
            compile(x, atoms, code);
            code.push(Op::Dia);
        }
        M::Box(x) => {
            compile(x, atoms, code);
            code.push(Op::Box);
        }
        M::Or(l, r) => bin(l, r, Op::Or, code),
        M::And(l, r) => bin(l, r, Op::And, code),
        M::Imp(l, r) => bin(l, r, Op::Imp, code),
        M::Iff(l, r) => bin(l, r, Op::Iff, code),
    }
}

/// Set of worlds (as a mask over valuation indices) where the program holds,
/// in the universal model whose worlds are `worlds`.
fn truth_set(code: &[Op], atom_sets: &[u64], worlds: u64, stack: &mut Vec<u64>) -> u64 {
    stack.clear();
    for op in code {
        let v = match *op {
            Op::Atom(i) => atom_sets[i] & worlds,
            Op::Neg => worlds & !stack.pop().unwrap(),
            Op::Dia => {
                if stack.pop().unwrap() != 0 {
                    worlds
                } else {
                    0
                }
            }
            Op::Box => {
                if stack.pop().unwrap() == worlds {
                    worlds
                } else {
                    0
                }
            }
            bin => {
                let y = stack.pop().unwrap();
                let x = stack.pop().unwrap();
                match bin {
                    Op::Or => x | y,
                    Op::And => x & y,
                    Op::Imp => worlds & (!x | y),
                    Op::Iff => worlds & !(x ^ y),
                    _ => unreachable!(),
                }
            }
        };
        stack.push(v);
    }
    stack.pop().unwrap()
}

/// Decides S5 validity by enumerating universal models over the atoms of `f`
/// in increasing order of their world-set mask. The first falsifying model
/// and its lowest falsifying world are returned as the countermodel.
pub fn s5_valid_with(f: &ModalFormula, opts: S5Options) -> Result<Verdict, ModalError> {
    let atoms = f.atoms();
    let limit = opts.max_atoms.min(HARD_MAX_ATOMS);
    if atoms.len() > limit {
        return Err(ModalError::AtomLimit {
            atoms: atoms.len(),
            limit,
        });
    }
    let mut code = Vec::new();
    compile(f, &atoms, &mut code);

    let valuations = 1usize << atoms.len();
    // atom_sets[i]: valuations in which atom i is true
    let atom_sets: Vec<u64> = (0..atoms.len())
        .map(|i| {
            (0..valuations)
                .filter(|v| v >> i & 1 == 1)
                .fold(0u64, |acc, v| acc | 1 << v)
        })
        .collect();
    let last: u64 = if valuations == 64 {
        u64::MAX
    } else {
        (1u64 << valuations) - 1
    };

    let mut stack = Vec::with_capacity(code.len());
    let mut worlds = 1u64;
    loop {
        let truth = truth_set(&code, &atom_sets, worlds, &mut stack);
        let failing = worlds & !truth;
        if failing != 0 {
            let bad = failing.trailing_zeros();
            let world = (worlds & ((1u64 << bad) - 1)).count_ones() as usize;
            let vals = (0..valuations as u64)
                .filter(|v| worlds >> v & 1 == 1)
                .collect();
            return Ok(Verdict::Invalid {
                countermodel: Countermodel {
                    model: S5UniversalModel::new(atoms, vals)?,
                    world,
                },
            });
        }
        if worlds == last {
            return Ok(Verdict::Valid {
                models_checked: last,
            });
        }
        worlds += 1;
    }
}

pub fn s5_valid(f: &ModalFormula) -> Result<Verdict, ModalError> {
    s5_valid_with(f, S5Options::default())
}

fn eval_propositional(f: &ModalFormula, atoms: &[String], bits: u64) -> bool {
    use ModalFormula as M;
    match f {
        M::Atom(a) => bits >> atoms.iter().position(|x| x == a).unwrap() & 1 == 1,
        M::Neg(x) => !eval_propositional(x, atoms, bits),
        M::Or(l, r) => eval_propositional(l, atoms, bits) || eval_propositional(r, atoms, bits),
        M::And(l, r) => eval_propositional(l, atoms, bits) && eval_propositional(r, atoms, bits),
        M::Imp(l, r) => !eval_propositional(l, atoms, bits) || eval_propositional(r, atoms, bits),
        M::Iff(l, r) => eval_propositional(l, atoms, bits) == eval_propositional(r, atoms, bits),
        M::Dia(_) | M::Box(_) => unreachable!("checked propositional"),
    }
}

/// Truth-table equivalence of two modality-free formulas.
pub fn taut_equiv(phi: &ModalFormula, psi: &ModalFormula) -> Result<bool, ModalError> {
    if !phi.is_propositional() || !psi.is_propositional() {
        return Err(ModalError::ModalOperator);
    }
    let mut atoms = phi.atoms();
    for a in psi.atoms() {
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    if atoms.len() > 24 {
        return Err(ModalError::AtomLimit {
            atoms: atoms.len(),
            limit: 24,
        });
    }
    Ok((0..1u64 << atoms.len())
        .all(|bits| eval_propositional(phi, &atoms, bits) == eval_propositional(psi, &atoms, bits)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct D2Options {
    pub reading: DConjReading,
    /// Prefix the translation with `<>` before checking S5 validity.
    pub outer_diamond: bool,
    pub s5: S5Options,
}

impl Default for D2Options {
    fn default() -> Self {
        D2Options {
            reading: DConjReading::Right,
            outer_diamond: true,
            s5: S5Options::default(),
        }
    }
}

/// The modal formula whose S5 validity decides D2 validity of `f`.
pub fn d2_obligation(f: &DiscursiveFormula, opts: D2Options) -> Result<ModalFormula, ModalError> {
    let t = translate(f, opts.reading)?;
    Ok(if opts.outer_diamond { ModalFormula::dia(t) } else { t })
}

pub fn d2_valid_with(f: &DiscursiveFormula, opts: D2Options) -> Result<Verdict, ModalError> {
    s5_valid_with(&d2_obligation(f, opts)?, opts.s5)
}

pub fn d2_valid(f: &DiscursiveFormula) -> Result<Verdict, ModalError> {
    d2_valid_with(f, D2Options::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{axiom_by_id, canonical_instance, parse_discursive, parse_modal};

    fn m(s: &str) -> ModalFormula {
        parse_modal(s).unwrap()
    }

    fn d(s: &str) -> DiscursiveFormula {
        parse_discursive(s).unwrap()
    }

    #[test]
    fn translate_examples() {
        let right = DConjReading::Right;
        assert_eq!(translate(&d("p => q"), right).unwrap(), m("<>p -> q"));
        assert_eq!(translate(&d("~(p | q)"), right).unwrap(), m("~(p | q)"));
        assert_eq!(translate(&d("p ^ q"), right).unwrap(), m("p & <>q"));
        assert_eq!(translate(&d("p ^ q"), DConjReading::Left).unwrap(), m("<>p & q"));
        assert_eq!(
            translate(&d("A => p"), right),
            Err(ModalError::Metavariable('A'))
        );
    }

    #[test]
    fn dconj_axioms_valid_under_right_reading() {
        for id in ["DDK4", "DDK5"] {
            let inst = canonical_instance(&axiom_by_id(id).unwrap().scheme).unwrap();
            assert!(d2_valid(&inst).unwrap().is_valid(), "{id}");
        }
    }

    #[test]
    fn s5_examples() {
        assert_eq!(
            s5_valid(&m("<>(<>p -> p)")).unwrap(),
            Verdict::Valid { models_checked: 3 }
        );
        let v = s5_valid(&m("<>p -> p")).unwrap();
        let cm = v.countermodel().expect("invalid");
        assert_eq!(cm.model.worlds(), &[0, 1]);
        assert_eq!(cm.world, 0);
        assert_eq!(cm.model.world_bits(0), "0");
        assert!(s5_valid(&m("p | ~p")).unwrap().is_valid());
    }

    #[test]
    fn countermodels_falsify() {
        for s in ["<>p -> p", "p -> []p", "<>p & <>q -> <>(p & q)", "[](p | q) -> []p | []q"] {
            let f = m(s);
            let v = s5_valid(&f).unwrap();
            let cm = v.countermodel().unwrap_or_else(|| panic!("{s} should be invalid"));
            assert_eq!(cm.model.eval(&f, cm.world), Ok(false), "{s}");
        }
    }

    #[test]
    fn s5_axioms_valid() {
        for s in ["[]p -> p", "<>p -> []<>p", "[](p -> q) -> ([]p -> []q)", "[]p -> [][]p", "<>[]p -> []p"] {
            assert!(s5_valid(&m(s)).unwrap().is_valid(), "{s}");
        }
    }

    #[test]
    fn atom_limit() {
        let f = m("a | b | c | d | e");
        assert_eq!(
            s5_valid(&f),
            Err(ModalError::AtomLimit { atoms: 5, limit: 4 })
        );
        let lowered = S5Options { max_atoms: 2 };
        assert!(matches!(
            s5_valid_with(&m("p | q | r"), lowered),
            Err(ModalError::AtomLimit { atoms: 3, limit: 2 })
        ));
    }

    #[test]
    fn four_atoms_enumerates_all_models() {
        let v = s5_valid(&m("a | ~a | b | c | d")).unwrap();
        assert_eq!(v, Verdict::Valid { models_checked: 65535 });
    }

    #[test]
    fn taut_equiv_examples() {
        assert_eq!(taut_equiv(&m("~~p"), &m("p")), Ok(true));
        assert_eq!(taut_equiv(&m("~(p | q)"), &m("~(q | p)")), Ok(true));
        assert_eq!(taut_equiv(&m("p"), &m("q")), Ok(false));
        assert_eq!(taut_equiv(&m("<>p"), &m("p")), Err(ModalError::ModalOperator));
    }

    #[test]
    fn d2_examples() {
        assert!(d2_valid(&d("p => ~~p")).unwrap().is_valid());
        let v = d2_valid(&d("(p ^ ~p) => q")).unwrap();
        let cm = v.countermodel().expect("explosion fails");
        assert_eq!(cm.model.worlds().len(), 2);
        for w in 0..2 {
            assert_eq!(cm.model.holds("q", w), Some(false));
        }
        let ddk19 = canonical_instance(&axiom_by_id("DDK19").unwrap().scheme).unwrap();
        assert!(!d2_valid(&ddk19).unwrap().is_valid());
    }

    #[test]
    fn outer_diamond_matters() {
        // p => p: <>p -> p is not S5-valid, <>(<>p -> p) is
        let f = d("p => p");
        assert!(d2_valid(&f).unwrap().is_valid());
        let bare = D2Options {
            outer_diamond: false,
            ..D2Options::default()
        };
        assert!(!d2_valid_with(&f, bare).unwrap().is_valid());
    }

    #[test]
    fn universal_model_rejects_bad_worlds() {
        assert!(S5UniversalModel::new(vec!["p".into()], vec![]).is_err());
        assert!(S5UniversalModel::new(vec!["p".into()], vec![1, 1]).is_err());
        assert!(S5UniversalModel::new(vec!["p".into()], vec![2]).is_err());
        let model = S5UniversalModel::new(vec!["p".into()], vec![0]).unwrap();
        assert_eq!(model.eval(&m("q"), 0), Err(ModalError::UnknownAtom("q".into())));
        assert!(matches!(model.eval(&m("p"), 1), Err(ModalError::WorldOutOfRange { .. })));
    }

    #[test]
    fn countermodel_json_shape() {
        let v = s5_valid(&m("<>p -> p")).unwrap();
        let cm = v.countermodel().unwrap();
        assert_eq!(cm.to_string(), "atoms p; worlds 0 1; fails at world 0");
    }
}
