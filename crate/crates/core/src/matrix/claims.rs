//! Re-checks what each published countermodel is claimed to show.

use serde::Serialize;

use super::{fixture, validate, Fixture, MpOutcome, PaperMatrixId, SchemeOutcome, ValidationReport};
use crate::formula::{axiom_by_id, axiom_system};
use crate::report::{Certificate, Finding};

#[derive(Debug, Clone, Serialize)]
pub struct ClaimRecord {
    pub id: PaperMatrixId,
    pub validates: crate::formula::SystemId,
    pub target: String,
    /// Full check: every axiom of the validated system, MP closure, and the
    /// target as the single refutation entry.
    pub report: ValidationReport,
    /// The matrix validates its system and is MP-closed.
    pub validation_confirmed: bool,
    /// The target scheme fails in the matrix.
    pub refutation_confirmed: bool,
    pub findings: Vec<Finding>,
}

impl ClaimRecord {
    pub fn confirmed(&self) -> bool {
        self.validation_confirmed && self.refutation_confirmed
    }
}

fn check(fx: &Fixture) -> ClaimRecord {
    let sys = axiom_system(fx.validates);
    let target = axiom_by_id(fx.refutes).expect("fixture target is a known axiom");
    let mut report = validate(&fx.matrix, sys.axioms(), std::slice::from_ref(&target))
        .expect("axiom schemes stay within the assignment limit");
    report.matrix = Some(fx.id.to_string());

    let mut findings = Vec::new();
    for failed in report.failed_axioms() {
        if let SchemeOutcome::Fail { witness, value } = &failed.outcome {
            findings.push(Finding {
                subject: format!("{}/{}", fx.id, failed.id),
                expected: format!("{} valid (matrix validates {})", failed.id, fx.validates),
                computed: format!("value {value} (not designated) at {witness}"),
                certificate: Certificate::CounterAssignment {
                    assignment: witness.clone(),
                    value: *value,
                },
            });
        }
    }
    if let MpOutcome::Fail {
        antecedent,
        consequent,
    } = report.mp
    {
        findings.push(Finding {
            subject: format!("{}/MP", fx.id),
            expected: "designated set closed under modus ponens".into(),
            computed: format!("{antecedent} and {antecedent} => {consequent} designated, {consequent} not"),
            certificate: Certificate::MpViolation {
                antecedent,
                consequent,
            },
        });
    }
    let target_outcome = &report.refutations[0].outcome;
    if let SchemeOutcome::Pass {
        assignments_checked,
    } = target_outcome
    {
        findings.push(Finding {
            subject: format!("{}/{}", fx.id, fx.refutes),
            expected: format!("{} refuted", fx.refutes),
            computed: "designated under every assignment".into(),
            certificate: Certificate::AllAssignments {
                assignments_checked: *assignments_checked,
            },
        });
    }

    ClaimRecord {
        id: fx.id,
        validates: fx.validates,
        target: fx.refutes.to_string(),
        validation_confirmed: report.all_axioms_pass() && report.mp.is_pass(),
        refutation_confirmed: !target_outcome.is_pass(),
        report,
        findings,
    }
}

/// One record per published countermodel, in order P1..P13.
pub fn verify_paper_claims() -> Vec<ClaimRecord> {
    PaperMatrixId::ALL
        .iter()
        .map(|&id| check(fixture(id)))
        .collect()
}
