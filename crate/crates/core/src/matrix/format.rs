//! Line-oriented matrix files.
//!
//! ```text
//! # comment
//! size 3
//! designated 1 3
//! neg 3 3 2
//! or
//! 3 1 3
//! 1 2 3
//! 3 3 3
//! dand
//! ...
//! dimp
//! ...
//! ```
//!
//! Each section keyword is followed by its values, either inline or on the
//! following lines. In a binary table, row `i` lists `i op 1 .. i op n`.

use std::fmt::Write;

use super::{BinaryOp, Matrix, MatrixError, Value};

const SECTIONS: [&str; 6] = ["size", "designated", "neg", "or", "dand", "dimp"];

/// Canonical text form: one keyword per line, binary tables as `n` rows.
pub fn write_matrix(m: &Matrix) -> String {
    let join = |vals: &[Value]| {
        vals.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    writeln!(out, "size {}", m.size()).unwrap();
    writeln!(out, "designated {}", join(&m.designated())).unwrap();
    writeln!(out, "neg {}", join(m.neg_table())).unwrap();
    for op in BinaryOp::ALL {
        writeln!(out, "{}", op.keyword()).unwrap();
        for row in m.table(op).chunks(m.size()) {
            writeln!(out, "{}", join(row)).unwrap();
        }
    }
    out
}

pub fn read_matrix(text: &str) -> Result<Matrix, MatrixError> {
    // per section: (line of keyword, values)
    let mut sections: [Option<(usize, Vec<u64>)>; 6] = Default::default();
    let mut current: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        for word in content.split_whitespace() {
            if let Some(s) = SECTIONS.iter().position(|k| *k == word) {
                if sections[s].is_some() {
                    return Err(MatrixError::Format {
                        line,
                        message: format!("duplicate `{word}` section"),
                    });
                }
                sections[s] = Some((line, Vec::new()));
                current = Some(s);
                continue;
            }
            let value: u64 = word.parse().map_err(|_| MatrixError::Format {
                line,
                message: format!("unexpected token `{word}`"),
            })?;
            match current {
                Some(s) => sections[s].as_mut().expect("open section").1.push(value),
                None => {
                    return Err(MatrixError::Format {
                        line,
                        message: "value before any section keyword".into(),
                    })
                }
            }
        }
    }

    let mut take = |i: usize| {
        sections[i]
            .take()
            .ok_or(MatrixError::MissingSection(SECTIONS[i]))
    };
    let (size_line, size_vals) = take(0)?;
    let size = match size_vals.as_slice() {
        [n] => *n as usize,
        _ => {
            return Err(MatrixError::Format {
                line: size_line,
                message: "`size` takes exactly one value".into(),
            })
        }
    };
    if size == 0 || size > super::MAX_SIZE {
        return Err(MatrixError::InvalidSize(size));
    }
    let mut values = |i: usize| -> Result<Vec<Value>, MatrixError> {
        let (_, vals) = take(i)?;
        vals.into_iter()
            .map(|v| {
                if v == 0 || v > size as u64 {
                    Err(MatrixError::ValueOutOfRange {
                        table: SECTIONS[i],
                        value: v,
                        size,
                    })
                } else {
                    Ok(v as Value)
                }
            })
            .collect()
    };
    let designated = values(1)?;
    let neg = values(2)?;
    let or = values(3)?;
    let dconj = values(4)?;
    let dimp = values(5)?;
    Matrix::new(size, &designated, neg, or, dconj, dimp)
}
