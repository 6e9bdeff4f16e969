mod common;

use common::{oracle_check, oracle_mp_closed};
use d2lab::formula::{axiom_system, Axiom, SystemId};
use d2lab::matrix::Matrix;
use d2lab::search::{
    canonicalize, cell_count, check_partial, find_matrices, naive_enumerate, rejects_partial, CellRef, PartialMatrix,
    SearchConstraints, Termination,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn pick(rng: &mut StdRng, pool: &[Axiom], k: usize) -> Vec<Axiom> {
    let mut v = pool.to_vec();
    v.shuffle(rng);
    v.truncate(k);
    v
}

fn acceptable(m: &Matrix, validate: &[Axiom], refute: &[Axiom]) -> bool {
    oracle_mp_closed(m)
        && validate.iter().all(|a| oracle_check(m, &a.scheme).is_none())
        && refute.iter().all(|a| oracle_check(m, &a.scheme).is_some())
}

fn random_constraints(rng: &mut StdRng) -> SearchConstraints {
    let pool: Vec<Axiom> = axiom_system(SystemId::D).axioms().to_vec();
    let mut c = SearchConstraints::new(2);
    let nv = rng.random_range(0..=3);
    c.validate = pick(rng, &pool, nv);
    let nr = rng.random_range(0..=1);
    c.refute = pick(rng, &pool, nr);
    if rng.random_bool(0.3) {
        c.designated = Some(vec![rng.random_range(1..=2)]);
    }
    if rng.random_bool(0.3) {
        c.neg = Some(vec![2, 1]);
    }
    c
}

fn completions(p: &PartialMatrix, mut visit: impl FnMut(&Matrix)) {
    let free: Vec<usize> = (0..p.cells().len()).filter(|&i| p.cells()[i].is_none()).collect();
    let n = p.size() as u64;
    let mut q = p.clone();
    for code in 0..n.pow(free.len() as u32) {
        let mut rest = code;
        for &i in &free {
            q.set(CellRef::from_index(i, p.size()), Some((rest % n) as u8 + 1));
            rest /= n;
        }
        visit(&q.complete().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn search_is_sound_and_complete(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let c = random_constraints(&mut rng);
        let out = find_matrices(&c).unwrap();
        prop_assert_eq!(out.stats.termination, Termination::Exhausted);
        for m in &out.matrices {
            prop_assert!(acceptable(m, &c.validate, &c.refute));
            if let Some(d) = &c.designated {
                prop_assert_eq!(&m.designated(), d);
            }
            if let Some(neg) = &c.neg {
                prop_assert_eq!(m.neg_table(), &neg[..]);
            }
        }
        let expected: Vec<Matrix> = naive_enumerate(2)
            .unwrap()
            .into_iter()
            .filter(|m| acceptable(m, &c.validate, &c.refute))
            .filter(|m| c.designated.as_ref().is_none_or(|d| &m.designated() == d))
            .filter(|m| c.neg.as_ref().is_none_or(|n| m.neg_table() == &n[..]))
            .collect();
        prop_assert_eq!(&out.matrices, &expected);
    }

    #[test]
    fn pruning_keeps_one_per_class(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut c = random_constraints(&mut rng);
        let all = find_matrices(&c).unwrap().matrices;
        c.prune_isomorphs = true;
        let pruned = find_matrices(&c).unwrap().matrices;
        let mut classes: Vec<Matrix> = all.iter().map(canonicalize).collect();
        classes.sort_by_key(|m| m.cells().collect::<Vec<_>>());
        classes.dedup();
        let mut got: Vec<Matrix> = pruned.iter().map(canonicalize).collect();
        got.sort_by_key(|m| m.cells().collect::<Vec<_>>());
        let len = got.len();
        got.dedup();
        prop_assert_eq!(len, got.len());
        // with a fixed neg, classes are only up to maps commuting with it
        if c.neg.is_none() {
            prop_assert_eq!(got, classes);
        } else {
            prop_assert!(got.iter().all(|m| classes.contains(m)));
        }
    }

    #[test]
    fn search_is_deterministic(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let c = random_constraints(&mut rng);
        let a = find_matrices(&c).unwrap();
        let b = find_matrices(&c).unwrap();
        prop_assert_eq!(a.matrices, b.matrices);
        prop_assert_eq!(a.stats, b.stats);
    }
}

#[test]
fn rejected_partials_have_no_acceptable_completion() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let pool: Vec<Axiom> = axiom_system(SystemId::D).axioms().to_vec();
    let (mut engine_hits, mut check_hits, mut tries) = (0, 0, 0);
    while engine_hits < 100 || check_hits < 100 {
        tries += 1;
        assert!(tries < 100_000, "too few rejected partials");
        let mut c = SearchConstraints::new(2);
        let k = rng.random_range(1..=3);
        c.validate = pick(&mut rng, &pool, k);
        let d = if rng.random_bool(0.5) { vec![1] } else { vec![2] };
        let mut p = PartialMatrix::new(2, &d).unwrap();
        for i in 0..cell_count(2) {
            if rng.random_bool(0.5) {
                p.set(CellRef::from_index(i, 2), Some(rng.random_range(1..=2)));
            }
        }
        let by_engine = rejects_partial(&c, &p).unwrap();
        let by_check = check_partial(&p, &c.validate).is_some();
        if !by_engine && !by_check {
            continue;
        }
        engine_hits += by_engine as usize;
        check_hits += by_check as usize;
        completions(&p, |m| assert!(!acceptable(m, &c.validate, &[]), "{p:?}"));
    }
}

#[test]
fn full_matrices_are_rejected_exactly_when_unacceptable() {
    let mut rng = StdRng::seed_from_u64(7);
    let pool: Vec<Axiom> = axiom_system(SystemId::D).axioms().to_vec();
    for m in naive_enumerate(2).unwrap().into_iter().step_by(37) {
        let mut c = SearchConstraints::new(2);
        c.validate = pick(&mut rng, &pool, 2);
        let p = PartialMatrix::from_matrix(&m);
        let ok = acceptable(&m, &c.validate, &[]);
        assert_eq!(rejects_partial(&c, &p).unwrap(), !ok);
        assert_eq!(check_partial(&p, &c.validate).is_some(), !ok);
    }
}
