//! Discursive and modal formula syntax.
//!
//! Two object languages live here. [`DiscursiveFormula`] is the language of
//! D2: negation `~`, disjunction `|`, discussive implication `=>` and
//! discussive conjunction `^`, over lowercase atoms and single-uppercase-letter
//! metavariables (so a formula with metavariables is an axiom *scheme*).
//! [`ModalFormula`] is the target of the translation into S5 and adds the
//! classical connectives plus `<>` and `[]`.
//!
//! Both languages share one concrete grammar; see [`parse_discursive`] and
//! [`parse_modal`] for the precedence table.

mod axioms;
mod parse;
mod render;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use axioms::{axiom_by_id, axiom_system, Axiom, AxiomSystem, SystemId};
pub use parse::{parse_discursive, parse_modal, Language, ParseError};

/// A formula of the discussive language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiscursiveFormula {
    Atom(String),
    /// Scheme letter; α, β, γ are written `A`, `B`, `C`.
    MetaVar(char),
    Neg(Box<DiscursiveFormula>),
    Or(Box<DiscursiveFormula>, Box<DiscursiveFormula>),
    /// Discussive implication `=>`.
    DImp(Box<DiscursiveFormula>, Box<DiscursiveFormula>),
    /// Discussive conjunction `^`.
    DConj(Box<DiscursiveFormula>, Box<DiscursiveFormula>),
}

/// A formula of propositional S5.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModalFormula {
    Atom(String),
    Neg(Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Imp(Box<ModalFormula>, Box<ModalFormula>),
    Iff(Box<ModalFormula>, Box<ModalFormula>),
    Dia(Box<ModalFormula>),
    Box(Box<ModalFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("metavariable {0} is not covered by the substitution")]
    MissingMetavariable(char),
    #[error("substitution image for {0} is not ground")]
    NonGroundImage(char),
    #[error("scheme has {0} metavariables; canonical instances support at most 3")]
    TooManyMetavariables(usize),
    #[error("unknown axiom system `{0}` (expected C or D)")]
    UnknownSystem(String),
    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),
}

/// A formula leaf: either an atom or a metavariable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Leaf {
    Atom(String),
    MetaVar(char),
}

impl Leaf {
    pub fn name(&self) -> String {
        match self {
            Leaf::Atom(a) => a.clone(),
            Leaf::MetaVar(c) => c.to_string(),
        }
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Atom(a) => f.write_str(a),
            Leaf::MetaVar(c) => write!(f, "{c}"),
        }
    }
}

/// Convenience constructors, mostly for tests and the built-in axiom data.
impl DiscursiveFormula {
    pub fn atom(name: &str) -> Self {
        DiscursiveFormula::Atom(name.to_string())
    }

    pub fn meta(c: char) -> Self {
        DiscursiveFormula::MetaVar(c)
    }

    pub fn neg(f: Self) -> Self {
        DiscursiveFormula::Neg(Box::new(f))
    }

    pub fn or(l: Self, r: Self) -> Self {
        DiscursiveFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn dimp(l: Self, r: Self) -> Self {
        DiscursiveFormula::DImp(Box::new(l), Box::new(r))
    }

    pub fn dconj(l: Self, r: Self) -> Self {
        DiscursiveFormula::DConj(Box::new(l), Box::new(r))
    }

    /// Leaves in first-occurrence (left-to-right) order, without repeats.
    pub fn leaves(&self) -> Vec<Leaf> {
        fn walk(f: &DiscursiveFormula, out: &mut Vec<Leaf>) {
            match f {
                DiscursiveFormula::Atom(a) => {
                    let leaf = Leaf::Atom(a.clone());
                    if !out.contains(&leaf) {
                        out.push(leaf);
                    }
                }
                DiscursiveFormula::MetaVar(c) => {
                    let leaf = Leaf::MetaVar(*c);
                    if !out.contains(&leaf) {
                        out.push(leaf);
                    }
                }
                DiscursiveFormula::Neg(x) => walk(x, out),
                DiscursiveFormula::Or(l, r)
                | DiscursiveFormula::DImp(l, r)
                | DiscursiveFormula::DConj(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Metavariables in first-occurrence order.
    pub fn metavars(&self) -> Vec<char> {
        self.leaves()
            .into_iter()
            .filter_map(|l| match l {
                Leaf::MetaVar(c) => Some(c),
                Leaf::Atom(_) => None,
            })
            .collect()
    }

    /// Atoms in first-occurrence order.
    pub fn atoms(&self) -> Vec<String> {
        self.leaves()
            .into_iter()
            .filter_map(|l| match l {
                Leaf::Atom(a) => Some(a),
                Leaf::MetaVar(_) => None,
            })
            .collect()
    }

    pub fn is_ground(&self) -> bool {
        match self {
            DiscursiveFormula::Atom(_) => true,
            DiscursiveFormula::MetaVar(_) => false,
            DiscursiveFormula::Neg(x) => x.is_ground(),
            DiscursiveFormula::Or(l, r)
            | DiscursiveFormula::DImp(l, r)
            | DiscursiveFormula::DConj(l, r) => l.is_ground() && r.is_ground(),
        }
    }

    /// True when the formula uses only atoms, metavariables, `~` and `|`.
    pub fn is_neg_or_only(&self) -> bool {
        match self {
            DiscursiveFormula::Atom(_) | DiscursiveFormula::MetaVar(_) => true,
            DiscursiveFormula::Neg(x) => x.is_neg_or_only(),
            DiscursiveFormula::Or(l, r) => l.is_neg_or_only() && r.is_neg_or_only(),
            DiscursiveFormula::DImp(..) | DiscursiveFormula::DConj(..) => false,
        }
    }

    pub fn contains_dconj(&self) -> bool {
        match self {
            DiscursiveFormula::Atom(_) | DiscursiveFormula::MetaVar(_) => false,
            DiscursiveFormula::Neg(x) => x.contains_dconj(),
            DiscursiveFormula::DConj(..) => true,
            DiscursiveFormula::Or(l, r) | DiscursiveFormula::DImp(l, r) => {
                l.contains_dconj() || r.contains_dconj()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            DiscursiveFormula::Atom(_) | DiscursiveFormula::MetaVar(_) => 0,
            DiscursiveFormula::Neg(x) => 1 + x.depth(),
            DiscursiveFormula::Or(l, r)
            | DiscursiveFormula::DImp(l, r)
            | DiscursiveFormula::DConj(l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

impl ModalFormula {
    pub fn atom(name: &str) -> Self {
        ModalFormula::Atom(name.to_string())
    }

    pub fn neg(f: Self) -> Self {
        ModalFormula::Neg(Box::new(f))
    }

    pub fn or(l: Self, r: Self) -> Self {
        ModalFormula::Or(Box::new(l), Box::new(r))
    }

    pub fn and(l: Self, r: Self) -> Self {
        ModalFormula::And(Box::new(l), Box::new(r))
    }

    pub fn imp(l: Self, r: Self) -> Self {
        ModalFormula::Imp(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Self, r: Self) -> Self {
        ModalFormula::Iff(Box::new(l), Box::new(r))
    }

    pub fn dia(f: Self) -> Self {
        ModalFormula::Dia(Box::new(f))
    }

    pub fn boxed(f: Self) -> Self {
        ModalFormula::Box(Box::new(f))
    }

    /// Atoms in first-occurrence order.
    pub fn atoms(&self) -> Vec<String> {
        fn walk(f: &ModalFormula, out: &mut Vec<String>) {
            match f {
                ModalFormula::Atom(a) => {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                }
                ModalFormula::Neg(x) | ModalFormula::Dia(x) | ModalFormula::Box(x) => walk(x, out),
                ModalFormula::Or(l, r)
                | ModalFormula::And(l, r)
                | ModalFormula::Imp(l, r)
                | ModalFormula::Iff(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// True when no `<>` or `[]` occurs.
    pub fn is_propositional(&self) -> bool {
        match self {
            ModalFormula::Atom(_) => true,
            ModalFormula::Dia(_) | ModalFormula::Box(_) => false,
            ModalFormula::Neg(x) => x.is_propositional(),
            ModalFormula::Or(l, r)
            | ModalFormula::And(l, r)
            | ModalFormula::Imp(l, r)
            | ModalFormula::Iff(l, r) => l.is_propositional() && r.is_propositional(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            ModalFormula::Atom(_) => 0,
            ModalFormula::Neg(x) | ModalFormula::Dia(x) | ModalFormula::Box(x) => 1 + x.depth(),
            ModalFormula::Or(l, r)
            | ModalFormula::And(l, r)
            | ModalFormula::Imp(l, r)
            | ModalFormula::Iff(l, r) => 1 + l.depth().max(r.depth()),
        }
    }
}

impl Serialize for DiscursiveFormula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Serialize for ModalFormula {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Metavariable-to-formula map. Images must be ground.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<char, DiscursiveFormula>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, var: char, image: DiscursiveFormula) -> Result<(), FormulaError> {
        if !image.is_ground() {
            return Err(FormulaError::NonGroundImage(var));
        }
        self.map.insert(var, image);
        Ok(())
    }

    pub fn with(mut self, var: char, image: DiscursiveFormula) -> Result<Self, FormulaError> {
        self.bind(var, image)?;
        Ok(self)
    }

    pub fn get(&self, var: char) -> Option<&DiscursiveFormula> {
        self.map.get(&var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, &DiscursiveFormula)> {
        self.map.iter().map(|(k, v)| (*k, v))
    }
}

/// Replaces every metavariable of `scheme` by its image under `sigma`.
pub fn substitute(
    scheme: &DiscursiveFormula,
    sigma: &Substitution,
) -> Result<DiscursiveFormula, FormulaError> {
    use DiscursiveFormula as F;
    Ok(match scheme {
        F::Atom(_) => scheme.clone(),
        F::MetaVar(c) => sigma
            .get(*c)
            .cloned()
            .ok_or(FormulaError::MissingMetavariable(*c))?,
        F::Neg(x) => F::neg(substitute(x, sigma)?),
        F::Or(l, r) => F::or(substitute(l, sigma)?, substitute(r, sigma)?),
        F::DImp(l, r) => F::dimp(substitute(l, sigma)?, substitute(r, sigma)?),
        F::DConj(l, r) => F::dconj(substitute(l, sigma)?, substitute(r, sigma)?),
    })
}

const CANONICAL_ATOMS: [&str; 3] = ["p", "q", "r"];

/// The substitution sending metavariables, in first-occurrence order, to
/// fresh atoms `p`, `q`, `r`. Atoms already present in `scheme` are skipped.
pub fn canonical_substitution(scheme: &DiscursiveFormula) -> Result<Substitution, FormulaError> {
    let vars = scheme.metavars();
    if vars.len() > CANONICAL_ATOMS.len() {
        return Err(FormulaError::TooManyMetavariables(vars.len()));
    }
    let taken = scheme.atoms();
    let mut fresh = CANONICAL_ATOMS
        .iter()
        .map(|s| s.to_string())
        .chain((b's'..=b'z').map(|b| (b as char).to_string()))
        .filter(|a| !taken.contains(a));
    let mut sigma = Substitution::new();
    for v in vars {
        let atom = fresh.next().expect("enough fresh atoms");
        sigma.bind(v, DiscursiveFormula::Atom(atom))?;
    }
    Ok(sigma)
}

/// Instance of `scheme` with each metavariable replaced by a distinct fresh atom.
pub fn canonical_instance(scheme: &DiscursiveFormula) -> Result<DiscursiveFormula, FormulaError> {
    let sigma = canonical_substitution(scheme)?;
    substitute(scheme, &sigma)
}
