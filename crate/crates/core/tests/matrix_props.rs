mod common;

use std::collections::BTreeMap;

use common::{oracle_check, oracle_eval, oracle_mp_closed, random_discursive};
use d2lab::formula::{axiom_by_id, DiscursiveFormula};
use d2lab::matrix::{
    check_mp, check_scheme, eval, fixture, read_matrix, write_matrix, Assignment, BinaryOp, Matrix, MpOutcome,
    PaperMatrixId, SchemeOutcome,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=4).prop_flat_map(|n| {
        let v = 1..=n as u8;
        (
            Just(n),
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(v.clone(), n),
            prop::collection::vec(v.clone(), n * n),
            prop::collection::vec(v.clone(), n * n),
            prop::collection::vec(v, n * n),
        )
            .prop_map(|(n, mut d, neg, or, dand, dimp)| {
                d[0] |= !d.iter().any(|&x| x);
                let designated: Vec<u8> = (1..=n as u8).filter(|&v| d[v as usize - 1]).collect();
                Matrix::new(n, &designated, neg, or, dand, dimp).unwrap()
            })
    })
}

fn scheme(seed: u64) -> DiscursiveFormula {
    random_discursive(&mut StdRng::seed_from_u64(seed), 4, &["A", "B", "C", "p"])
}

fn as_pairs(o: &SchemeOutcome) -> Option<(Vec<(String, u8)>, u8)> {
    match o {
        SchemeOutcome::Pass { .. } => None,
        SchemeOutcome::Fail { witness, value } => {
            Some((witness.iter().map(|(l, v)| (l.name(), v)).collect(), *value))
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eval_in_range_and_matches_reference(m in matrix(), seed in any::<u64>(), vals in prop::collection::vec(1u8..=4, 4)) {
        let f = scheme(seed);
        let a: Assignment = f
            .leaves()
            .into_iter()
            .zip(vals.iter().map(|v| (v - 1) % m.size() as u8 + 1))
            .collect();
        let v = eval(&m, &f, &a).unwrap();
        prop_assert!(v >= 1 && v as usize <= m.size());
        let env: BTreeMap<String, u8> = a.iter().map(|(l, v)| (l.name(), v)).collect();
        prop_assert_eq!(v, oracle_eval(&m, &f, &env));
    }

    #[test]
    fn check_scheme_matches_reference(m in matrix(), seed in any::<u64>()) {
        let f = scheme(seed);
        let lib = check_scheme(&m, &f).unwrap();
        prop_assert_eq!(as_pairs(&lib), oracle_check(&m, &f));
        if let SchemeOutcome::Fail { witness, value } = &lib {
            prop_assert_eq!(eval(&m, &f, witness).unwrap(), *value);
            prop_assert!(!m.is_designated(*value));
        }
    }

    #[test]
    fn mp_matches_exhaustive_scan(m in matrix()) {
        let violations: Vec<(u8, u8)> = m
            .values()
            .flat_map(|a| m.values().map(move |b| (a, b)))
            .filter(|&(a, b)| m.is_designated(a) && m.is_designated(m.apply(BinaryOp::DImp, a, b)) && !m.is_designated(b))
            .collect();
        match check_mp(&m) {
            MpOutcome::Pass => prop_assert!(violations.is_empty()),
            MpOutcome::Fail { antecedent, consequent } => {
                prop_assert_eq!(violations[0], (antecedent, consequent));
            }
        }
        prop_assert_eq!(check_mp(&m).is_pass(), oracle_mp_closed(&m));
    }

    #[test]
    fn file_format_round_trip(m in matrix()) {
        let text = write_matrix(&m);
        prop_assert_eq!(read_matrix(&text).unwrap(), m);
    }
}

#[test]
fn fixture_witnesses_replay() {
    for id in PaperMatrixId::ALL {
        let fx = fixture(id);
        let target = axiom_by_id(fx.refutes).unwrap();
        match check_scheme(&fx.matrix, &target.scheme).unwrap() {
            out @ SchemeOutcome::Fail { .. } => {
                assert_eq!(as_pairs(&out), oracle_check(&fx.matrix, &target.scheme), "{id}");
                let SchemeOutcome::Fail { witness, value } = out else { unreachable!() };
                let env: BTreeMap<String, u8> = witness.iter().map(|(l, v)| (l.name(), v)).collect();
                assert_eq!(oracle_eval(&fx.matrix, &target.scheme, &env), value, "{id}");
                assert!(!fx.matrix.is_designated(value), "{id}");
            }
            SchemeOutcome::Pass { .. } => panic!("{id} does not refute {}", fx.refutes),
        }
    }
}
