//! Disagreements between computed results and published expectations.

use serde::Serialize;

use crate::matrix::{Assignment, Value};
use crate::modal::Countermodel;

/// Evidence backing a computed result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// An assignment under which a scheme takes a non-designated value.
    CounterAssignment { assignment: Assignment, value: Value },
    /// Every assignment was enumerated and each gave a designated value.
    AllAssignments { assignments_checked: u64 },
    /// `antecedent` and `antecedent => consequent` designated, `consequent` not.
    MpViolation { antecedent: Value, consequent: Value },
    /// An S5 model falsifying a formula.
    Countermodel { countermodel: Countermodel },
    /// Every universal S5 model over the formula's atoms was enumerated.
    ExhaustiveEnumeration { models_checked: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    /// What the finding is about, e.g. `P1/C1` or `DDK13`.
    pub subject: String,
    pub expected: String,
    pub computed: String,
    pub certificate: Certificate,
}
