//! Kripke models with an explicit equivalence relation.

use std::collections::{BTreeMap, BTreeSet};

use super::ModalError;
use crate::formula::ModalFormula;

/// `(W, R, V)` with `W = 0..worlds` and `R` an equivalence relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitKripkeModel {
    worlds: usize,
    relation: Vec<Vec<bool>>,
    valuation: BTreeMap<String, BTreeSet<usize>>,
}

impl ExplicitKripkeModel {
    /// `relation[w][u]` is `w R u`.
    pub fn new(
        worlds: usize,
        relation: Vec<Vec<bool>>,
        valuation: BTreeMap<String, BTreeSet<usize>>,
    ) -> Result<Self, ModalError> {
        let bad = |msg: String| Err(ModalError::InvalidModel(msg));
        if worlds == 0 {
            return bad("no worlds".into());
        }
        if relation.len() != worlds || relation.iter().any(|row| row.len() != worlds) {
            return bad(format!("relation must be {worlds}x{worlds}"));
        }
        for w in 0..worlds {
            if !relation[w][w] {
                return bad(format!("relation not reflexive at {w}"));
            }
            for u in 0..worlds {
                if relation[w][u] != relation[u][w] {
                    return bad(format!("relation not symmetric at ({w}, {u})"));
                }
                for v in 0..worlds {
                    if relation[w][u] && relation[u][v] && !relation[w][v] {
                        return bad(format!("relation not transitive at ({w}, {u}, {v})"));
                    }
                }
            }
        }
        for (atom, ws) in &valuation {
            if let Some(w) = ws.iter().find(|&&w| w >= worlds) {
                return bad(format!("atom {atom} true at missing world {w}"));
            }
        }
        Ok(ExplicitKripkeModel {
            worlds,
            relation,
            valuation,
        })
    }

    /// Every world sees every world.
    pub fn universal(
        worlds: usize,
        valuation: BTreeMap<String, BTreeSet<usize>>,
    ) -> Result<Self, ModalError> {
        Self::new(worlds, vec![vec![true; worlds]; worlds], valuation)
    }

    /// `w R u` iff `block[w] == block[u]`.
    pub fn from_partition(
        block: &[usize],
        valuation: BTreeMap<String, BTreeSet<usize>>,
    ) -> Result<Self, ModalError> {
        let relation = block
            .iter()
            .map(|a| block.iter().map(|b| a == b).collect())
            .collect();
        Self::new(block.len(), relation, valuation)
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    pub fn sees(&self, w: usize, u: usize) -> bool {
        self.relation[w][u]
    }

    pub fn valuation(&self) -> &BTreeMap<String, BTreeSet<usize>> {
        &self.valuation
    }

    /// A copy with one more world, a clone of `w` in `w`'s class.
    pub fn with_duplicate(&self, w: usize) -> Result<Self, ModalError> {
        if w >= self.worlds {
            return Err(ModalError::WorldOutOfRange {
                world: w,
                worlds: self.worlds,
            });
        }
        let n = self.worlds;
        let mut relation: Vec<Vec<bool>> = self.relation.clone();
        for (u, row) in relation.iter_mut().enumerate() {
            row.push(self.relation[u][w]);
        }
        let mut last = self.relation[w].clone();
        last.push(true);
        relation.push(last);
        let mut valuation = self.valuation.clone();
        for ws in valuation.values_mut() {
            if ws.contains(&w) {
                ws.insert(n);
            }
        }
        Self::new(n + 1, relation, valuation)
    }
}

/// Forcing: `m, w ⊩ f`.
pub fn eval_explicit(m: &ExplicitKripkeModel, w: usize, f: &ModalFormula) -> Result<bool, ModalError> {
    if w >= m.worlds {
        return Err(ModalError::WorldOutOfRange {
            world: w,
            worlds: m.worlds,
        });
    }
    use ModalFormula as M;
    Ok(match f {
        M::Atom(a) => m
            .valuation
            .get(a)
            .ok_or_else(|| ModalError::UnknownAtom(a.clone()))?
            .contains(&w),
        M::Neg(x) => !eval_explicit(m, w, x)?,
        M::Or(l, r) => eval_explicit(m, w, l)? | eval_explicit(m, w, r)?,
        M::And(l, r) => eval_explicit(m, w, l)? & eval_explicit(m, w, r)?,
        M::Imp(l, r) => !eval_explicit(m, w, l)? | eval_explicit(m, w, r)?,
        M::Iff(l, r) => eval_explicit(m, w, l)? == eval_explicit(m, w, r)?,
        M::Dia(x) => {
            let mut any = false;
            for u in (0..m.worlds).filter(|&u| m.relation[w][u]) {
                any |= eval_explicit(m, u, x)?;
            }
            any
        }
        M::Box(x) => {
            let mut all = true;
            for u in (0..m.worlds).filter(|&u| m.relation[w][u]) {
                all &= eval_explicit(m, u, x)?;
            }
            all
        }
    })
}
