#![allow(dead_code)]

use pcforge::{Clause, CnfFormula, Lit, PartialAssignment, Var};
use proptest::prelude::*;

pub fn lit(v: i32) -> Lit {
    Lit::from_dimacs(v).unwrap()
}

pub fn lits(values: &[i32]) -> Vec<Lit> {
    values.iter().map(|&v| lit(v)).collect()
}

pub fn pa(values: &[i32]) -> PartialAssignment {
    PartialAssignment::from_ints(values)
}

pub fn cnf(n: usize, clauses: &[&[i32]]) -> CnfFormula {
    CnfFormula::from_ints(n, clauses)
}

/// Non-tautological clauses of width 1 to 3 over `1..=max_vars` variables.
pub fn formula(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = CnfFormula> {
    (1..=max_vars).prop_flat_map(move |n| {
        let clause = prop::collection::btree_map(0..n, any::<bool>(), 1..=3.min(n));
        prop::collection::vec(clause, 1..=max_clauses).prop_map(move |cs| {
            CnfFormula::from_clauses(
                n,
                cs.into_iter()
                    .map(|c| Clause::new(c.into_iter().map(|(v, s)| Lit::new(Var::from_index(v), s)))),
            )
            .unwrap()
        })
    })
}

pub fn assignment(n: usize) -> impl Strategy<Value = PartialAssignment> {
    prop::collection::vec(prop::option::of(any::<bool>()), n).prop_map(|vals| {
        PartialAssignment::new(
            vals.into_iter()
                .enumerate()
                .filter_map(|(i, v)| v.map(|s| Lit::new(Var::from_index(i), s))),
        )
        .unwrap()
    })
}

pub fn formula_with_assignment(max_vars: usize, max_clauses: usize) -> impl Strategy<Value = (CnfFormula, PartialAssignment)> {
    formula(max_vars, max_clauses).prop_flat_map(|f| {
        let n = f.num_vars();
        (Just(f), assignment(n))
    })
}

// Truth-table oracles, independent of the library's search code.

pub fn lit_true(l: Lit, bits: u64) -> bool {
    (bits >> l.var().index() & 1 == 1) == l.is_positive()
}

pub fn satisfies(f: &CnfFormula, bits: u64) -> bool {
    f.iter().all(|c| c.iter().any(|l| lit_true(l, bits)))
}

pub fn models(f: &CnfFormula) -> Vec<u64> {
    (0..1u64 << f.num_vars()).filter(|&b| satisfies(f, b)).collect()
}

pub fn models_extending(f: &CnfFormula, alpha: &[Lit]) -> Vec<u64> {
    models(f)
        .into_iter()
        .filter(|&b| alpha.iter().all(|&l| lit_true(l, b)))
        .collect()
}

pub fn all_literals(n: usize) -> Vec<Lit> {
    (0..2 * n).map(Lit::from_code).collect()
}

pub fn brute_cl_sem(f: &CnfFormula, alpha: &PartialAssignment) -> Vec<Lit> {
    let ms = models_extending(f, alpha.lits());
    let mut out: Vec<Lit> = all_literals(f.num_vars())
        .into_iter()
        .filter(|&l| ms.iter().all(|&b| lit_true(l, b)))
        .collect();
    out.sort();
    out
}

pub fn brute_entails(f: &CnfFormula, clause: &Clause) -> bool {
    models(f).iter().all(|&b| clause.iter().any(|l| lit_true(l, b)))
}

/// Every entailed clause among the `3^n` candidates with no entailed
/// proper subclause.
pub fn brute_primes(f: &CnfFormula) -> Vec<Clause> {
    let n = f.num_vars();
    let mut out = Vec::new();
    for code in 0..3u64.pow(n as u32) {
        let mut c = code;
        let mut ls = Vec::new();
        for v in 0..n {
            match c % 3 {
                1 => ls.push(Lit::new(Var::from_index(v), true)),
                2 => ls.push(Lit::new(Var::from_index(v), false)),
                _ => {}
            }
            c /= 3;
        }
        let clause = Clause::new(ls.clone());
        if brute_entails(f, &clause)
            && ls
                .iter()
                .all(|&l| !brute_entails(f, &clause.without(l)))
        {
            out.push(clause);
        }
    }
    out.sort_by(|a, b| (a.len(), a.lits()).cmp(&(b.len(), b.lits())));
    out
}

/// `cl_up` by the textbook fixpoint: repeatedly scan for unit clauses.
pub fn naive_up(f: &CnfFormula, alpha: &PartialAssignment) -> Option<Vec<Lit>> {
    let mut set: Vec<Lit> = alpha.lits().to_vec();
    loop {
        let mut changed = false;
        for c in f.iter() {
            if c.iter().any(|l| set.contains(&l)) {
                continue;
            }
            let open: Vec<Lit> = c.iter().filter(|l| !set.contains(&!*l)).collect();
            match open.len() {
                0 => return None,
                1 => {
                    set.push(open[0]);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            set.sort();
            return Some(set);
        }
    }
}
