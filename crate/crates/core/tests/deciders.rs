mod common;

use common::*;
use pcforge::deciders::{
    is_absorbed, is_pc, is_pc_with, is_pc_witness, is_urc, is_urc_with, is_urc_witness, reduce_pc_irredundant,
    reduce_pc_irredundant_with, reduce_urc_irredundant, reduce_urc_irredundant_with, DeciderConfig, Strategy,
    DEFAULT_LIMIT,
};
use pcforge::families::{gamma, parity_cnf, psi_horn, psi_qhorn, GammaVariant};
use pcforge::propagation::up_closure;
use pcforge::semantics::{equivalent, prime_implicates};
use pcforge::{Clause, CnfFormula, Error, PartialAssignment};
use proptest::prelude::*;

fn config(strategy: Strategy) -> DeciderConfig {
    DeciderConfig { limit: 32, strategy }
}

#[test]
fn horn_formulas_are_urc() {
    let delta = cnf(4, &[&[-1, 2], &[-1, 3], &[-2, -3, 4]]);
    assert!(is_urc(&delta).unwrap().verdict);
}

#[test]
fn psi_qhorn_fails_urc_on_the_guards() {
    let report = is_urc(&psi_qhorn(3).unwrap()).unwrap();
    assert!(!report.verdict);
    assert_eq!(report.witness, Some(pa(&[4, 5, 6])));
}

#[test]
fn gamma_variants_meet_their_classes() {
    assert!(is_urc(&gamma(3, GammaVariant::DoublePrime).unwrap()).unwrap().verdict);
    assert!(is_pc(&gamma(3, GammaVariant::Prime).unwrap()).unwrap().verdict);
}

#[test]
fn psi_horn_is_not_pc() {
    let f = psi_horn(3).unwrap();
    let report = is_pc(&f).unwrap();
    assert!(!report.verdict);
    assert!(is_pc_witness(&f, report.witness.as_ref().unwrap(), report.literal.unwrap()));
}

#[test]
fn limit_fails_closed() {
    let f = CnfFormula::new(20);
    assert_eq!(
        is_pc(&f).unwrap_err(),
        Error::LimitExceeded { vars: 20, limit: DEFAULT_LIMIT }
    );
}

#[test]
fn absorption_examples() {
    // a=1 b=2 c=3 d=4
    let delta = cnf(4, &[&[-1, 2], &[-1, 3], &[-2, -3, 4]]);
    assert!(is_absorbed(&Clause::from_ints(&[-1, 2]), &delta).unwrap());
    assert!(!is_absorbed(&Clause::from_ints(&[-1, 4]), &delta).unwrap());
    assert!(is_absorbed(&Clause::from_ints(&[-1, 2, 4]), &delta).unwrap());
    assert_eq!(is_absorbed(&Clause::from_ints(&[1]), &delta).unwrap_err(), Error::NotImplicate);
}

#[test]
fn pc_reduction_examples() {
    let primes = prime_implicates(&parity_cnf(3).unwrap()).unwrap();
    assert_eq!(primes.len(), 4);
    assert_eq!(reduce_pc_irredundant(&primes).unwrap(), primes);
    let chain = cnf(3, &[&[-1, 2], &[-2, 3], &[-1, 2, 3]]);
    assert_eq!(reduce_pc_irredundant(&chain).unwrap(), cnf(3, &[&[-1, 2], &[-2, 3]]));
    assert_eq!(reduce_pc_irredundant(&psi_horn(3).unwrap()).unwrap_err(), Error::NotPc);
}

#[test]
fn pc_reductions_of_psi_horn_primes_stay_within_factor() {
    let primes = prime_implicates(&psi_horn(3).unwrap()).unwrap();
    let wide = DeciderConfig::with_limit(16);
    let first = reduce_pc_irredundant_with(&primes, None, &wide).unwrap();
    let n2 = primes.num_vars() * primes.num_vars();
    for seed in 0..4 {
        let other = reduce_pc_irredundant_with(&primes, Some(seed), &wide).unwrap();
        assert!(other.len() <= n2 * first.len() && first.len() <= n2 * other.len());
        assert!(equivalent(&other, &primes).unwrap());
    }
}

#[test]
fn urc_reduction_examples() {
    for m in [2, 3] {
        let g = gamma(m, GammaVariant::DoublePrime).unwrap();
        assert_eq!(reduce_urc_irredundant(&g).unwrap(), g);
    }
    assert_eq!(gamma(3, GammaVariant::DoublePrime).unwrap().len(), 13);
    let with_resolvent = cnf(3, &[&[-1, 2], &[-2, 3], &[-1, 3]]);
    assert_eq!(reduce_urc_irredundant(&with_resolvent).unwrap(), cnf(3, &[&[-1, 2], &[-2, 3]]));
}

#[test]
fn gamma_dprime_needs_every_even_clause() {
    let g = gamma(4, GammaVariant::DoublePrime).unwrap();
    assert_eq!(g.len(), 20);
    let wide = DeciderConfig::with_limit(16);
    assert!(is_urc_with(&g, &wide).unwrap().verdict);
    // I = {1, 2}: d_1 ∨ d_2 ∨ a_3 ∨ a_4
    let i = g.iter().position(|c| *c == Clause::from_ints(&[4, 8, 9, 13])).unwrap();
    assert!(!is_urc_with(&g.without_clause(i), &wide).unwrap().verdict);
}

/// Least failing assignment in (size, lex) order by brute force.
fn least_failure(f: &CnfFormula, pc: bool) -> Option<(PartialAssignment, Option<pcforge::Lit>)> {
    PartialAssignment::all(f.num_vars()).find_map(|alpha| {
        let up = naive_up(f, &alpha)?;
        let sem = brute_cl_sem(f, &alpha);
        if pc {
            sem.iter().find(|l| !up.contains(l)).map(|&l| (alpha.clone(), Some(l)))
        } else {
            (sem.len() == 2 * f.num_vars()).then(|| (alpha.clone(), None))
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn strategies_agree(f in formula(7, 10)) {
        for pc in [false, true] {
            let decide = |s| if pc { is_pc_with(&f, &config(s)) } else { is_urc_with(&f, &config(s)) };
            let exhaustive = decide(Strategy::Exhaustive).unwrap();
            prop_assert_eq!(&decide(Strategy::Primes).unwrap(), &exhaustive);
            let closed = decide(Strategy::ClosedSets).unwrap();
            prop_assert_eq!(closed.verdict, exhaustive.verdict);
            if let Some(w) = &closed.witness {
                let valid = if pc { is_pc_witness(&f, w, closed.literal.unwrap()) } else { is_urc_witness(&f, w) };
                prop_assert!(valid);
            }
        }
    }

    #[test]
    fn witnesses_are_least_failures(f in formula(5, 8)) {
        let pc = is_pc(&f).unwrap();
        prop_assert_eq!(pc.witness.zip(Some(pc.literal)), least_failure(&f, true));
        let urc = is_urc(&f).unwrap();
        prop_assert_eq!(urc.witness.map(|w| (w, None)), least_failure(&f, false));
    }

    #[test]
    fn pc_implies_urc(f in formula(7, 10)) {
        if is_pc(&f).unwrap().verdict {
            prop_assert!(is_urc(&f).unwrap().verdict);
        }
    }

    #[test]
    fn pc_means_unit_and_semantic_closures_coincide(f in formula(5, 8)) {
        let agree = PartialAssignment::all(f.num_vars())
            .all(|alpha| up_closure(&f, &alpha).derived == brute_cl_sem(&f, &alpha));
        prop_assert_eq!(is_pc(&f).unwrap().verdict, agree);
    }

    #[test]
    fn reductions_are_irredundant(f in formula(6, 8), seed in any::<u64>()) {
        let primes = prime_implicates(&f).unwrap();
        if primes.has_empty_clause() {
            return Ok(());
        }
        let reduced = reduce_pc_irredundant_with(&primes, Some(seed), &DeciderConfig::default()).unwrap();
        prop_assert!(equivalent(&reduced, &primes).unwrap());
        prop_assert!(is_pc(&reduced).unwrap().verdict);
        for i in 0..reduced.len() {
            let rest = reduced.without_clause(i);
            prop_assert!(!equivalent(&rest, &primes).unwrap() || !is_pc(&rest).unwrap().verdict);
        }
        let urc = reduce_urc_irredundant_with(&primes, Some(seed), &DeciderConfig::default()).unwrap();
        prop_assert!(equivalent(&urc, &primes).unwrap());
        for i in 0..urc.len() {
            let rest = urc.without_clause(i);
            prop_assert!(!equivalent(&rest, &primes).unwrap() || !is_urc(&rest).unwrap().verdict);
        }
    }

    #[test]
    fn dropping_absorbed_clauses_keeps_pc(f in formula(6, 8)) {
        let primes = prime_implicates(&f).unwrap();
        if primes.has_empty_clause() {
            return Ok(());
        }
        for i in 0..primes.len() {
            let rest = primes.without_clause(i);
            if is_absorbed(&primes.clauses()[i], &rest) == Ok(true) {
                prop_assert!(is_pc(&rest).unwrap().verdict);
            }
        }
    }
}
