//! The two axiomatizations of D2 as data.
//!
//! `D` is the da Costa–Dubikajtis–Kotas system (DDK1–DDK22), `C` is the
//! fifteen-axiom system C1–C15. Both use modus ponens for `=>` as their only
//! rule. Greek letters α, β, γ are written `A`, `B`, `C`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use super::{parse_discursive, DiscursiveFormula, FormulaError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SystemId {
    C,
    D,
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemId::C => "C",
            SystemId::D => "D",
        })
    }
}

impl FromStr for SystemId {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "C" | "c" => Ok(SystemId::C),
            "D" | "d" => Ok(SystemId::D),
            _ => Err(FormulaError::UnknownSystem(s.to_string())),
        }
    }
}

/// A named axiom scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Axiom {
    pub id: String,
    pub scheme: DiscursiveFormula,
}

impl Axiom {
    pub fn new(id: impl Into<String>, scheme: DiscursiveFormula) -> Self {
        Axiom {
            id: id.into(),
            scheme,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomSystem {
    id: SystemId,
    axioms: Vec<Axiom>,
}

impl AxiomSystem {
    pub fn id(&self) -> SystemId {
        self.id
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn get(&self, axiom_id: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.id == axiom_id)
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }
}

const SYSTEM_D: [(&str, &str); 22] = [
    ("DDK1", "A => (B => A)"),
    ("DDK2", "(A => (B => C)) => ((A => B) => (A => C))"),
    ("DDK3", "((A => B) => A) => A"),
    ("DDK4", "A ^ B => A"),
    ("DDK5", "A ^ B => B"),
    ("DDK6", "A => (B => A ^ B)"),
    ("DDK7", "A => A | B"),
    ("DDK8", "B => A | B"),
    ("DDK9", "(A => C) => ((B => C) => (A | B => C))"),
    ("DDK10", "A => ~~A"),
    ("DDK11", "~~A => A"),
    ("DDK12", "~(A | ~A) => B"),
    ("DDK13", "~(A | B) => ~(B | A)"),
    ("DDK14", "~(A | B) => ~B ^ ~A"),
    ("DDK15", "~(~~A | B) => ~(A | B)"),
    ("DDK16", "(~(A | B) => C) => ((~A => B) | C)"),
    ("DDK17", "~((A | B) | C) => ~(A | (B | C))"),
    ("DDK18", "~((A => B) | C) => A ^ ~(B | C)"),
    ("DDK19", "~(A ^ B | C) => (A => ~(B | C))"),
    ("DDK20", "~(~(A | B) | C) => ~(~A | C) | ~(~B | C)"),
    ("DDK21", "~(~(A => B) | C) => (A => ~(~B | C))"),
    ("DDK22", "~(~(A ^ B) | C) => A ^ ~(~B | C)"),
];

const SYSTEM_C: [(&str, &str); 15] = [
    ("C1", "A => (B => A)"),
    ("C2", "(A => (B => C)) => ((A => B) => (A => C))"),
    ("C3", "A ^ B => A"),
    ("C4", "A ^ B => B"),
    ("C5", "A => (B => A ^ B)"),
    ("C6", "A => A | B"),
    ("C7", "B => A | B"),
    ("C8", "(A => C) => ((B => C) => (A | B => C))"),
    ("C9", "A | (A => B)"),
    ("C10", "~(~A ^ (~~A ^ ~(A | ~A)))"),
    (
        "C11",
        "~(~A ^ (~B ^ ~(A | B))) => ~(~A ^ (~B ^ (~C ^ ~(A | (B | C)))))",
    ),
    (
        "C12",
        "~(~A ^ (~B ^ (~C ^ ~(A | (B | C))))) => ~(~A ^ (~C ^ (~B ^ ~(A | (C | B)))))",
    ),
    (
        "C13",
        "~(~A ^ (~B ^ (~C ^ ~(A | (B | C))))) => (A | (B | ~C) => A | B)",
    ),
    ("C14", "~(~A ^ ~B) => A | B"),
    ("C15", "A | (B | ~B) => ~(~A ^ ~(B | ~B))"),
];

fn build(id: SystemId, table: &[(&str, &str)]) -> AxiomSystem {
    let axioms = table
        .iter()
        .map(|(name, text)| {
            let scheme = parse_discursive(text)
                .unwrap_or_else(|e| panic!("built-in axiom {name} does not parse: {e}"));
            Axiom::new(*name, scheme)
        })
        .collect();
    AxiomSystem { id, axioms }
}

/// Returns one of the two built-in axiom systems.
pub fn axiom_system(id: SystemId) -> &'static AxiomSystem {
    static C: OnceLock<AxiomSystem> = OnceLock::new();
    static D: OnceLock<AxiomSystem> = OnceLock::new();
    match id {
        SystemId::C => C.get_or_init(|| build(SystemId::C, &SYSTEM_C)),
        SystemId::D => D.get_or_init(|| build(SystemId::D, &SYSTEM_D)),
    }
}

/// Looks up an axiom by its id (`DDK10`, `C13`, ...) across both systems.
pub fn axiom_by_id(id: &str) -> Result<Axiom, FormulaError> {
    [SystemId::D, SystemId::C]
        .into_iter()
        .find_map(|sys| axiom_system(sys).get(id).cloned())
        .ok_or_else(|| FormulaError::UnknownAxiom(id.to_string()))
}
