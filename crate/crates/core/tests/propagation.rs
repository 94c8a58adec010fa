mod common;

use common::*;
use pcforge::families::psi_qhorn;
use pcforge::propagation::{all_literals, up_closure, Status};
use pcforge::semantics::cl_sem;
use pcforge::{CnfFormula, PartialAssignment};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn chain_of_two_steps() {
    let r = up_closure(&cnf(3, &[&[-1, 2], &[-2, 3]]), &pa(&[1]));
    assert_eq!(r.status, Status::Stable);
    assert_eq!(r.derived, lits(&[1, 2, 3]));
}

#[test]
fn guards_of_psi_qhorn_stay_stable() {
    // a_i = 3 + i
    let r = up_closure(&psi_qhorn(3).unwrap(), &pa(&[4, 5, 6]));
    assert_eq!(r.status, Status::Stable);
    assert_eq!(r.derived, lits(&[4, 5, 6]));
}

#[test]
fn immediate_conflict_derives_everything() {
    let r = up_closure(&cnf(1, &[&[1], &[-1]]), &pa(&[]));
    assert_eq!(r.status, Status::Conflict);
    assert_eq!(r.derived, all_literals(1));
}

#[test]
fn unused_variables_keep_their_value() {
    let r = up_closure(&cnf(3, &[&[-1, 2]]), &pa(&[3]));
    assert_eq!(r.derived, lits(&[3]));
}

fn shuffled(f: &CnfFormula, seed: u64) -> CnfFormula {
    let mut clauses = f.clauses().to_vec();
    clauses.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    CnfFormula::from_clauses(f.num_vars(), clauses).unwrap()
}

proptest! {
    #[test]
    fn matches_naive_fixpoint((f, alpha) in formula_with_assignment(8, 12)) {
        let r = up_closure(&f, &alpha);
        match naive_up(&f, &alpha) {
            None => prop_assert_eq!(r.status, Status::Conflict),
            Some(set) => prop_assert_eq!(r.derived, set),
        }
    }

    #[test]
    fn extensive_and_idempotent((f, alpha) in formula_with_assignment(8, 12)) {
        let r = up_closure(&f, &alpha);
        prop_assert!(alpha.iter().all(|l| r.derived.contains(&l)));
        if r.status == Status::Stable {
            let again = up_closure(&f, &PartialAssignment::new(r.derived.clone()).unwrap());
            prop_assert_eq!(again.derived, r.derived);
        }
    }

    #[test]
    fn monotone((f, alpha) in formula_with_assignment(8, 12), drop in any::<u16>()) {
        let smaller = PartialAssignment::new(
            alpha.iter().enumerate().filter(|(i, _)| drop >> i & 1 == 0).map(|(_, l)| l),
        ).unwrap();
        let big = up_closure(&f, &alpha).derived;
        prop_assert!(up_closure(&f, &smaller).derived.iter().all(|l| big.contains(l)));
    }

    #[test]
    fn order_independent((f, alpha) in formula_with_assignment(8, 12), seed in any::<u64>()) {
        let (a, b) = (up_closure(&f, &alpha), up_closure(&shuffled(&f, seed), &alpha));
        prop_assert_eq!((a.status, a.derived), (b.status, b.derived));
    }

    #[test]
    fn sound_against_semantics((f, alpha) in formula_with_assignment(10, 14)) {
        let sem = cl_sem(&f, &alpha);
        prop_assert!(up_closure(&f, &alpha).derived.iter().all(|l| sem.contains(l)));
    }
}
