//! Adjudication toolkit for two Hilbert-style axiomatizations of Jaśkowski's
//! discussive logic D2.
//!
//! - [`formula`]: discursive and modal syntax, the axiom systems `C` and `D`.
//! - [`matrix`]: finite logical matrices, scheme validity, modus ponens
//!   closure, the built-in countermodel fixtures and their claim check.
//! - [`modal`]: translation into S5, an S5 decision procedure, D2-validity
//!   and the classification of the `D` axioms.
//! - [`search`]: backtracking search for separating matrices.

pub mod formula;
pub mod matrix;
pub mod modal;
pub mod report;
pub mod search;

pub use formula::{
    axiom_by_id, axiom_system, canonical_instance, parse_discursive, parse_modal, substitute, Axiom,
    AxiomSystem, DiscursiveFormula, FormulaError, ModalFormula, ParseError, Substitution, SystemId,
};
