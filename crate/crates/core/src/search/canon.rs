//! Isomorphism classes of matrices and a brute-force enumerator.

use crate::matrix::{BinaryOp, Matrix, Value};

use super::SearchError;

/// All permutations of `0..n` in lexicographic order. `p[i]` is the image of `i`.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

/// Value permutations (0-based) that map the designated set onto itself and,
/// when `neg` is given, commute with it.
pub(crate) fn automorphism_candidates(designated: &[bool], neg: Option<&[Value]>) -> Vec<Vec<usize>> {
    permutations(designated.len())
        .into_iter()
        .filter(|p| (0..p.len()).all(|v| designated[v] == designated[p[v]]))
        .filter(|p| {
            neg.is_none_or(|neg| {
                (0..p.len()).all(|v| p[neg[v] as usize - 1] == neg[p[v]] as usize - 1)
            })
        })
        .collect()
}

/// Cells of the image of `m` under the value permutation `p`, in layout order.
pub(crate) fn permuted_cells(m: &Matrix, p: &[usize]) -> Vec<Value> {
    let n = m.size();
    let img = |v: Value| p[v as usize - 1] as Value + 1;
    let mut inv = vec![0; n];
    for (v, &w) in p.iter().enumerate() {
        inv[w] = v as Value + 1;
    }
    let mut cells = Vec::with_capacity(n + 3 * n * n);
    for a in 0..n {
        cells.push(img(m.neg(inv[a])));
    }
    for op in BinaryOp::ALL {
        for a in 0..n {
            for b in 0..n {
                cells.push(img(m.apply(op, inv[a], inv[b])));
            }
        }
    }
    cells
}

fn from_cells(n: usize, designated: &[Value], cells: &[Value]) -> Matrix {
    let table = |k: usize| cells[n + k * n * n..n + (k + 1) * n * n].to_vec();
    Matrix::new(n, designated, cells[..n].to_vec(), table(0), table(1), table(2))
        .expect("permuted cells in range")
}

/// The lexicographically least image of `m` under value permutations that
/// preserve the designated set, comparing cells in layout order.
pub fn canonicalize(m: &Matrix) -> Matrix {
    let designated: Vec<bool> = m.values().map(|v| m.is_designated(v)).collect();
    let best = automorphism_candidates(&designated, None)
        .iter()
        .map(|p| permuted_cells(m, p))
        .min()
        .expect("identity is a candidate");
    from_cells(m.size(), &m.designated(), &best)
}

/// Every matrix of size `n <= 2`: designated sets in increasing bitmask
/// order, then cells counted up in layout order.
pub fn naive_enumerate(n: usize) -> Result<Vec<Matrix>, SearchError> {
    if n == 0 || n > 2 {
        return Err(SearchError::NaiveTooLarge(n));
    }
    let cells = n + 3 * n * n;
    let total = n.pow(cells as u32);
    let mut out = Vec::new();
    for mask in 1u32..1 << n {
        let designated: Vec<Value> = (1..=n as Value).filter(|v| mask >> (v - 1) & 1 == 1).collect();
        for k in 0..total {
            let mut vals = vec![0; cells];
            let mut rest = k;
            for c in (0..cells).rev() {
                vals[c] = (rest % n) as Value + 1;
                rest /= n;
            }
            out.push(from_cells(n, &designated, &vals));
        }
    }
    Ok(out)
}
