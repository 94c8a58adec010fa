//! Seeded random formulas for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Clause, CnfFormula, Lit, Var};
use crate::qhorn::{Valuation, Weight};
use crate::semantics::{is_satisfiable, prime_implicates, FunctionTable};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_clause(rng: &mut impl Rng, num_vars: usize, width: usize) -> Clause {
    let mut vars: Vec<usize> = (0..num_vars).collect();
    vars.shuffle(rng);
    Clause::new(
        vars[..width.min(num_vars)]
            .iter()
            .map(|&v| Lit::new(Var::from_index(v), rng.gen_bool(0.5))),
    )
}

/// Clauses of width 1 to 3 over `1..=max_vars` variables.
pub fn random_formula(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    let mut f = CnfFormula::new(n);
    for _ in 0..m {
        let width = rng.gen_range(1..=3);
        f.push(random_clause(rng, n, width)).expect("in range");
    }
    f
}

/// `count` satisfiable formulas, redrawing unsatisfiable ones.
pub fn satisfiable_formulas(seed: u64, count: usize, max_vars: usize, max_clauses: usize) -> Vec<CnfFormula> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let f = random_formula(&mut rng, max_vars, max_clauses);
        if is_satisfiable(&f) {
            out.push(f);
        }
    }
    out
}

/// Horn formulas: each clause keeps at most one positive literal.
pub fn horn_formulas(seed: u64, count: usize, max_vars: usize, max_clauses: usize) -> Vec<CnfFormula> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let f = random_formula(&mut rng, max_vars, max_clauses);
            let clauses = f.iter().map(|c| {
                let keep = c.iter().filter(|l| l.is_positive()).last();
                Clause::new(c.iter().map(|l| if Some(l) == keep { l } else { l.var().negative() }))
            });
            CnfFormula::from_clauses(f.num_vars(), clauses).expect("same universe")
        })
        .collect()
}

/// A random boolean function on `1..=max_vars` variables with a
/// nonempty onset.
pub fn random_function(rng: &mut impl Rng, max_vars: usize) -> FunctionTable {
    let n = rng.gen_range(1..=max_vars);
    let vars: Vec<Var> = (0..n).map(Var::from_index).collect();
    loop {
        let onset: Vec<u64> = (0..1u64 << n).filter(|_| rng.gen_bool(0.5)).collect();
        if !onset.is_empty() {
            return FunctionTable::new(vars.clone(), onset).expect("fits");
        }
    }
}

/// The CNF with one clause per falsifying assignment.
pub fn canonical_cnf(function: &FunctionTable) -> CnfFormula {
    let n = function.input_vars().len();
    let clauses = (0..1u64 << n).filter(|&bits| !function.value(bits)).map(|bits| {
        Clause::new(
            function
                .input_vars()
                .iter()
                .enumerate()
                .map(|(i, &v)| Lit::new(v, bits >> i & 1 == 0)),
        )
    });
    CnfFormula::from_clauses(n, clauses).expect("input variables are the universe")
}

/// Prime implicate formulas of random functions.
pub fn prime_formulas(seed: u64, count: usize, max_vars: usize) -> Vec<CnfFormula> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| prime_implicates(&canonical_cnf(&random_function(&mut rng, max_vars))).expect("small"))
        .collect()
}

/// A q-Horn formula built around a planted valuation: every clause is
/// drawn at random and kept within weight 1.
pub fn planted_qhorn(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> (CnfFormula, Valuation) {
    let n = rng.gen_range(2..=max_vars);
    let weights: Vec<Weight> = (0..n)
        .map(|_| *[Weight::Zero, Weight::Half, Weight::One].choose(rng).expect("nonempty"))
        .collect();
    let valuation = Valuation::new(weights);
    let m = rng.gen_range(1..=max_clauses);
    let mut f = CnfFormula::new(n);
    for _ in 0..4 * m {
        if f.len() == m {
            break;
        }
        let mut vars: Vec<usize> = (0..n).collect();
        vars.shuffle(rng);
        let width = rng.gen_range(1..=4).min(n);
        let mut lits = Vec::new();
        let mut total = 0;
        for &v in &vars[..width] {
            let var = Var::from_index(v);
            let mut options = [var.positive(), var.negative()];
            options.shuffle(rng);
            if let Some(&l) = options.iter().find(|&&l| total + valuation.weight(l).halves() <= 2) {
                total += valuation.weight(l).halves();
                lits.push(l);
            }
        }
        if !lits.is_empty() {
            f.push(Clause::new(lits)).expect("in range");
        }
    }
    (f, valuation)
}

pub fn qhorn_formulas(seed: u64, count: usize, max_vars: usize, max_clauses: usize) -> Vec<(CnfFormula, Valuation)> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| planted_qhorn(&mut rng, max_vars, max_clauses))
        .collect()
}
