//! Reference implementations used to cross-check the library, written
//! without calling its evaluators.
#![allow(dead_code)]

use std::collections::BTreeMap;

use d2lab::formula::{DiscursiveFormula as F, ModalFormula as M};
use d2lab::matrix::{BinaryOp, Matrix};
use rand::rngs::StdRng;
use rand::Rng;

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

// ---- matrices

fn leaf_names(f: &F, out: &mut Vec<String>) {
    match f {
        F::Atom(a) => {
            if !out.contains(a) {
                out.push(a.clone())
            }
        }
        F::MetaVar(c) => {
            let s = c.to_string();
            if !out.contains(&s) {
                out.push(s)
            }
        }
        F::Neg(x) => leaf_names(x, out),
        F::Or(l, r) | F::DImp(l, r) | F::DConj(l, r) => {
            leaf_names(l, out);
            leaf_names(r, out);
        }
    }
}

pub fn oracle_eval(m: &Matrix, f: &F, env: &BTreeMap<String, u8>) -> u8 {
    let n = m.size();
    let cell = |op: BinaryOp, a: u8, b: u8| m.table(op)[(a as usize - 1) * n + (b as usize - 1)];
    match f {
        F::Atom(a) => env[a],
        F::MetaVar(c) => env[&c.to_string()],
        F::Neg(x) => m.neg_table()[oracle_eval(m, x, env) as usize - 1],
        F::Or(l, r) => cell(BinaryOp::Or, oracle_eval(m, l, env), oracle_eval(m, r, env)),
        F::DConj(l, r) => cell(BinaryOp::DConj, oracle_eval(m, l, env), oracle_eval(m, r, env)),
        F::DImp(l, r) => cell(BinaryOp::DImp, oracle_eval(m, l, env), oracle_eval(m, r, env)),
    }
}

fn designated(m: &Matrix, v: u8) -> bool {
    m.designated().contains(&v)
}

/// First failing assignment (leaf name, value) in lexicographic order with
/// leaves in first-occurrence order, and the value it produces.
pub fn oracle_check(m: &Matrix, scheme: &F) -> Option<(Vec<(String, u8)>, u8)> {
    let mut names = Vec::new();
    leaf_names(scheme, &mut names);
    let n = m.size() as u64;
    let k = names.len() as u32;
    for code in 0..n.pow(k) {
        let mut vals = vec![0u8; names.len()];
        let mut rest = code;
        for i in (0..names.len()).rev() {
            vals[i] = (rest % n) as u8 + 1;
            rest /= n;
        }
        let env: BTreeMap<String, u8> = names.iter().cloned().zip(vals.iter().copied()).collect();
        let v = oracle_eval(m, scheme, &env);
        if !designated(m, v) {
            return Some((names.into_iter().zip(vals).collect(), v));
        }
    }
    None
}

pub fn oracle_mp_closed(m: &Matrix) -> bool {
    let n = m.size() as u8;
    (1..=n).all(|a| {
        (1..=n).all(|b| {
            !(designated(m, a) && designated(m, m.apply(BinaryOp::DImp, a, b)) && !designated(m, b))
        })
    })
}

// ---- S5

pub fn oracle_translate(f: &F, left: bool) -> M {
    match f {
        F::Atom(a) => M::Atom(a.clone()),
        F::MetaVar(_) => panic!("ground formulas only"),
        F::Neg(x) => M::Neg(Box::new(oracle_translate(x, left))),
        F::Or(l, r) => M::Or(Box::new(oracle_translate(l, left)), Box::new(oracle_translate(r, left))),
        F::DImp(l, r) => M::Imp(
            Box::new(M::Dia(Box::new(oracle_translate(l, left)))),
            Box::new(oracle_translate(r, left)),
        ),
        F::DConj(l, r) => {
            let (a, b) = (oracle_translate(l, left), oracle_translate(r, left));
            if left {
                M::And(Box::new(M::Dia(Box::new(a))), Box::new(b))
            } else {
                M::And(Box::new(a), Box::new(M::Dia(Box::new(b))))
            }
        }
    }
}

/// A Kripke model: `rel[w][u]`, and the set of atoms true at each world.
#[derive(Debug, Clone)]
pub struct RefModel {
    pub rel: Vec<Vec<bool>>,
    pub truth: Vec<Vec<String>>,
}

pub fn force(m: &RefModel, w: usize, f: &M) -> bool {
    let succ = || (0..m.rel.len()).filter(move |&u| m.rel[w][u]);
    match f {
        M::Atom(a) => m.truth[w].contains(a),
        M::Neg(x) => !force(m, w, x),
        M::Or(l, r) => force(m, w, l) || force(m, w, r),
        M::And(l, r) => force(m, w, l) && force(m, w, r),
        M::Imp(l, r) => !force(m, w, l) || force(m, w, r),
        M::Iff(l, r) => force(m, w, l) == force(m, w, r),
        M::Dia(x) => succ().any(|u| force(m, u, x)),
        M::Box(x) => succ().all(|u| force(m, u, x)),
    }
}

fn modal_atoms(f: &M, out: &mut Vec<String>) {
    match f {
        M::Atom(a) => {
            if !out.contains(a) {
                out.push(a.clone())
            }
        }
        M::Neg(x) | M::Dia(x) | M::Box(x) => modal_atoms(x, out),
        M::Or(l, r) | M::And(l, r) | M::Imp(l, r) | M::Iff(l, r) => {
            modal_atoms(l, out);
            modal_atoms(r, out);
        }
    }
}

/// S5 validity by trying every nonempty set of valuations as a cluster.
pub fn oracle_s5_valid(f: &M) -> bool {
    let mut atoms = Vec::new();
    modal_atoms(f, &mut atoms);
    let vals: Vec<Vec<String>> = (0..1usize << atoms.len())
        .map(|bits| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect();
    for subset in 1u64..1 << vals.len() {
        let truth: Vec<Vec<String>> = (0..vals.len())
            .filter(|i| subset >> i & 1 == 1)
            .map(|i| vals[i].clone())
            .collect();
        let k = truth.len();
        let model = RefModel {
            rel: vec![vec![true; k]; k],
            truth,
        };
        if (0..k).any(|w| !force(&model, w, f)) {
            return false;
        }
    }
    true
}

/// Random equivalence relation on `n` worlds with a random valuation of `ATOMS`.
pub fn random_model(rng: &mut StdRng, max_worlds: usize) -> RefModel {
    let n = rng.random_range(1..=max_worlds);
    let block: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
    let rel = (0..n).map(|w| (0..n).map(|u| block[w] == block[u]).collect()).collect();
    let truth = (0..n)
        .map(|_| {
            ATOMS
                .iter()
                .filter(|_| rng.random_bool(0.5))
                .map(|a| a.to_string())
                .collect()
        })
        .collect();
    RefModel { rel, truth }
}

pub fn random_modal(rng: &mut StdRng, depth: u32) -> M {
    if depth == 0 || rng.random_bool(0.2) {
        return M::Atom(ATOMS[rng.random_range(0..ATOMS.len())].to_string());
    }
    let sub = |rng: &mut StdRng| Box::new(random_modal(rng, depth - 1));
    match rng.random_range(0..8) {
        0 => M::Neg(sub(rng)),
        1 => M::Dia(sub(rng)),
        2 => M::Box(sub(rng)),
        3 => M::Or(sub(rng), sub(rng)),
        4 => M::And(sub(rng), sub(rng)),
        5 => M::Imp(sub(rng), sub(rng)),
        6 => M::Iff(sub(rng), sub(rng)),
        _ => M::Neg(sub(rng)),
    }
}

pub fn random_discursive(rng: &mut StdRng, depth: u32, leaves: &[&str]) -> F {
    if depth == 0 || rng.random_bool(0.2) {
        let name = leaves[rng.random_range(0..leaves.len())];
        let c = name.chars().next().unwrap();
        return if c.is_ascii_uppercase() {
            F::MetaVar(c)
        } else {
            F::Atom(name.to_string())
        };
    }
    let sub = |rng: &mut StdRng| Box::new(random_discursive(rng, depth - 1, leaves));
    match rng.random_range(0..4) {
        0 => F::Neg(sub(rng)),
        1 => F::Or(sub(rng), sub(rng)),
        2 => F::DImp(sub(rng), sub(rng)),
        _ => F::DConj(sub(rng), sub(rng)),
    }
}

pub fn random_neg_or(rng: &mut StdRng, depth: u32) -> F {
    if depth == 0 || rng.random_bool(0.25) {
        return F::Atom(ATOMS[rng.random_range(0..ATOMS.len())].to_string());
    }
    if rng.random_bool(0.4) {
        F::Neg(Box::new(random_neg_or(rng, depth - 1)))
    } else {
        F::Or(
            Box::new(random_neg_or(rng, depth - 1)),
            Box::new(random_neg_or(rng, depth - 1)),
        )
    }
}

/// Applies one equivalence-preserving rewrite at a random position:
/// insert or remove a double negation, swap or reassociate a disjunction.
pub fn rewrite(rng: &mut StdRng, f: &F) -> F {
    let here = rng.random_bool(0.35);
    match f {
        F::Neg(x) if here => match &**x {
            F::Neg(y) => (**y).clone(),
            _ => F::Neg(Box::new(F::Neg(Box::new(f.clone())))),
        },
        F::Or(l, r) if here => match (&**l, rng.random_bool(0.5)) {
            (F::Or(a, b), true) => F::Or(a.clone(), Box::new(F::Or(b.clone(), r.clone()))),
            _ => F::Or(r.clone(), l.clone()),
        },
        _ if here => F::Neg(Box::new(F::Neg(Box::new(f.clone())))),
        F::Neg(x) => F::Neg(Box::new(rewrite(rng, x))),
        F::Or(l, r) => {
            if rng.random_bool(0.5) {
                F::Or(Box::new(rewrite(rng, l)), r.clone())
            } else {
                F::Or(l.clone(), Box::new(rewrite(rng, r)))
            }
        }
        _ => F::Neg(Box::new(F::Neg(Box::new(f.clone())))),
    }
}

pub fn prop_eval(f: &F, truth: &[&str]) -> bool {
    match f {
        F::Atom(a) => truth.contains(&a.as_str()),
        F::Neg(x) => !prop_eval(x, truth),
        F::Or(l, r) => prop_eval(l, truth) || prop_eval(r, truth),
        _ => panic!("~ and | only"),
    }
}
