//! D2-validity of the `D` axioms DDK10–DDK22 and of the `C` axioms.

use std::fmt;

use serde::Serialize;

use super::{d2_valid_with, s5_valid_with, taut_equiv, translate, D2Options, ModalError, S5Options, Verdict};
use crate::formula::{axiom_by_id, axiom_system, canonical_instance, DiscursiveFormula, ModalFormula, SystemId};
use crate::report::{Certificate, Finding};

/// A mark in the published table of S5 validities among the `D` axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableMark {
    Valid,
    Invalid,
    Unknown,
}

impl TableMark {
    pub fn symbol(self) -> char {
        match self {
            TableMark::Valid => '+',
            TableMark::Invalid => '-',
            TableMark::Unknown => '?',
        }
    }
}

impl fmt::Display for TableMark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl Serialize for TableMark {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

const PUBLISHED_MARKS: [(&str, TableMark); 12] = [
    ("DDK10", TableMark::Valid),
    ("DDK12", TableMark::Invalid),
    ("DDK13", TableMark::Invalid),
    ("DDK14", TableMark::Invalid),
    ("DDK15", TableMark::Valid),
    ("DDK16", TableMark::Invalid),
    ("DDK17", TableMark::Valid),
    ("DDK18", TableMark::Unknown),
    ("DDK19", TableMark::Invalid),
    ("DDK20", TableMark::Valid),
    ("DDK21", TableMark::Unknown),
    ("DDK22", TableMark::Invalid),
];

/// The published mark for `axiom`, if the table lists it. DDK11 is not listed.
pub fn published_mark(axiom: &str) -> Option<TableMark> {
    PUBLISHED_MARKS.iter().find(|(id, _)| *id == axiom).map(|&(_, m)| m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Agrees,
    Disagrees,
    /// The table has `?`; the verdict settles it.
    Resolved,
    /// The table has no row for this axiom.
    Unlisted,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Agrees => "agrees",
            RowStatus::Disagrees => "DISAGREES",
            RowStatus::Resolved => "resolved",
            RowStatus::Unlisted => "unlisted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationRow {
    pub axiom: String,
    pub instance: DiscursiveFormula,
    pub verdict: Verdict,
    pub mark: Option<TableMark>,
    pub status: RowStatus,
    /// Verdict under the other reading of `^`, for schemes containing it.
    pub alternate: Option<Verdict>,
}

impl ClassificationRow {
    pub fn certificate(&self) -> Certificate {
        certificate(&self.verdict)
    }

    /// A disagreement with the table, as a finding.
    pub fn finding(&self) -> Option<Finding> {
        if self.status != RowStatus::Disagrees {
            return None;
        }
        let mark = self.mark.expect("disagreement implies a mark");
        Some(Finding {
            subject: self.axiom.clone(),
            expected: format!("table mark {mark}"),
            computed: format!("{} on {}", self.verdict, self.instance),
            certificate: self.certificate(),
        })
    }

    /// Whether the two readings of `^` give different verdicts.
    pub fn readings_differ(&self) -> bool {
        self.alternate
            .as_ref()
            .is_some_and(|alt| alt.is_valid() != self.verdict.is_valid())
    }
}

fn certificate(v: &Verdict) -> Certificate {
    match v {
        Verdict::Valid { models_checked } => Certificate::ExhaustiveEnumeration {
            models_checked: *models_checked,
        },
        Verdict::Invalid { countermodel } => Certificate::Countermodel {
            countermodel: countermodel.clone(),
        },
    }
}

fn verdicts(
    scheme: &DiscursiveFormula,
    opts: D2Options,
) -> Result<(DiscursiveFormula, Verdict, Option<Verdict>), ModalError> {
    let instance = canonical_instance(scheme).expect("axiom schemes have at most three metavariables");
    let verdict = d2_valid_with(&instance, opts)?;
    let alternate = if scheme.contains_dconj() {
        let other = D2Options {
            reading: opts.reading.other(),
            ..opts
        };
        Some(d2_valid_with(&instance, other)?)
    } else {
        None
    };
    Ok((instance, verdict, alternate))
}

/// Decides DDK10–DDK22 on their canonical instances and compares with the table.
pub fn classify_d_axioms(opts: D2Options) -> Result<Vec<ClassificationRow>, ModalError> {
    (10..=22)
        .map(|n| {
            let axiom = format!("DDK{n}");
            let scheme = axiom_by_id(&axiom).expect("DDK10-DDK22 exist").scheme;
            let (instance, verdict, alternate) = verdicts(&scheme, opts)?;
            let mark = published_mark(&axiom);
            let status = match mark {
                None => RowStatus::Unlisted,
                Some(TableMark::Unknown) => RowStatus::Resolved,
                Some(m) if (m == TableMark::Valid) == verdict.is_valid() => RowStatus::Agrees,
                Some(_) => RowStatus::Disagrees,
            };
            Ok(ClassificationRow {
                axiom,
                instance,
                verdict,
                mark,
                status,
                alternate,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CAxiomRow {
    pub axiom: String,
    pub instance: DiscursiveFormula,
    pub verdict: Verdict,
    pub alternate: Option<Verdict>,
}

impl CAxiomRow {
    /// An invalid axiom of a system claimed sound, as a finding.
    pub fn finding(&self) -> Option<Finding> {
        if self.verdict.is_valid() {
            return None;
        }
        Some(Finding {
            subject: self.axiom.clone(),
            expected: "D2-valid".into(),
            computed: format!("{} on {}", self.verdict, self.instance),
            certificate: certificate(&self.verdict),
        })
    }
}

/// D2-validity of each `C` axiom's canonical instance.
pub fn check_c_axioms(opts: D2Options) -> Result<Vec<CAxiomRow>, ModalError> {
    axiom_system(SystemId::C)
        .axioms()
        .iter()
        .map(|ax| {
            let (instance, verdict, alternate) = verdicts(&ax.scheme, opts)?;
            Ok(CAxiomRow {
                axiom: ax.id.clone(),
                instance,
                verdict,
                alternate,
            })
        })
        .collect()
}

/// Checks `<>(<>τφ -> τψ)` for `~`/`|` formulas whose translations are
/// tautologically equivalent. Nothing is assumed about the validity of φ or ψ.
pub fn check_equivalence_lemma(phi: &DiscursiveFormula, psi: &DiscursiveFormula, opts: S5Options) -> Result<bool, ModalError> {
    for f in [phi, psi] {
        if !f.is_neg_or_only() {
            return Err(ModalError::Precondition(format!("{f} uses connectives other than ~ and |")));
        }
    }
    let (tphi, tpsi) = (
        translate(phi, Default::default())?,
        translate(psi, Default::default())?,
    );
    if !taut_equiv(&tphi, &tpsi)? {
        return Err(ModalError::Precondition(format!(
            "{phi} and {psi} are not tautologically equivalent"
        )));
    }
    let obligation = ModalFormula::dia(ModalFormula::imp(ModalFormula::dia(tphi), tpsi));
    Ok(s5_valid_with(&obligation, opts)?.is_valid())
}
