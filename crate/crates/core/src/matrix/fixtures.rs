//! The thirteen published countermodels, shipped as files under `fixtures/`.
//!
//! P1–P12 are claimed to validate `C` and refute one of DDK10, DDK12–DDK22;
//! P13 is claimed to validate `D` and refute C13. Tables are reproduced as
//! printed, including where they turn out not to validate their system.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use super::{read_matrix, Matrix, MatrixError};
use crate::formula::SystemId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PaperMatrixId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
    P9,
    P10,
    P11,
    P12,
    P13,
}

impl PaperMatrixId {
    pub const ALL: [PaperMatrixId; 13] = [
        PaperMatrixId::P1,
        PaperMatrixId::P2,
        PaperMatrixId::P3,
        PaperMatrixId::P4,
        PaperMatrixId::P5,
        PaperMatrixId::P6,
        PaperMatrixId::P7,
        PaperMatrixId::P8,
        PaperMatrixId::P9,
        PaperMatrixId::P10,
        PaperMatrixId::P11,
        PaperMatrixId::P12,
        PaperMatrixId::P13,
    ];

    /// 1-based number.
    pub fn number(self) -> usize {
        self as usize + 1
    }
}

impl fmt::Display for PaperMatrixId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.number())
    }
}

impl Serialize for PaperMatrixId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for PaperMatrixId {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let n: usize = s
            .strip_prefix(['P', 'p'])
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| MatrixError::UnknownFixture(s.to_string()))?;
        n.checked_sub(1)
            .and_then(|i| PaperMatrixId::ALL.get(i).copied())
            .ok_or_else(|| MatrixError::UnknownFixture(s.to_string()))
    }
}

/// A published countermodel together with what it is claimed to show.
#[derive(Debug, Clone, Serialize)]
pub struct Fixture {
    pub id: PaperMatrixId,
    /// System the matrix is claimed to validate.
    pub validates: SystemId,
    /// Axiom the matrix is claimed to refute.
    pub refutes: &'static str,
    pub matrix: Matrix,
}

const SOURCES: [(&str, SystemId, &str); 13] = [
    (include_str!("../../fixtures/p01.matrix"), SystemId::C, "DDK10"),
    (include_str!("../../fixtures/p02.matrix"), SystemId::C, "DDK12"),
    (include_str!("../../fixtures/p03.matrix"), SystemId::C, "DDK13"),
    (include_str!("../../fixtures/p04.matrix"), SystemId::C, "DDK14"),
    (include_str!("../../fixtures/p05.matrix"), SystemId::C, "DDK15"),
    (include_str!("../../fixtures/p06.matrix"), SystemId::C, "DDK16"),
    (include_str!("../../fixtures/p07.matrix"), SystemId::C, "DDK17"),
    (include_str!("../../fixtures/p08.matrix"), SystemId::C, "DDK18"),
    (include_str!("../../fixtures/p09.matrix"), SystemId::C, "DDK19"),
    (include_str!("../../fixtures/p10.matrix"), SystemId::C, "DDK20"),
    (include_str!("../../fixtures/p11.matrix"), SystemId::C, "DDK21"),
    (include_str!("../../fixtures/p12.matrix"), SystemId::C, "DDK22"),
    (include_str!("../../fixtures/p13.matrix"), SystemId::D, "C13"),
];

fn all() -> &'static [Fixture] {
    static FIXTURES: OnceLock<Vec<Fixture>> = OnceLock::new();
    FIXTURES.get_or_init(|| {
        PaperMatrixId::ALL
            .iter()
            .zip(SOURCES)
            .map(|(&id, (text, validates, refutes))| Fixture {
                id,
                validates,
                refutes,
                matrix: read_matrix(text)
                    .unwrap_or_else(|e| panic!("fixture {id} is malformed: {e}")),
            })
            .collect()
    })
}

pub fn fixture(id: PaperMatrixId) -> &'static Fixture {
    &all()[id as usize]
}

pub fn paper_matrix(id: PaperMatrixId) -> &'static Matrix {
    &fixture(id).matrix
}
