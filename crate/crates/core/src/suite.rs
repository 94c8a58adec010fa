//! The acceptance matrix: eleven exact checks over the families and seeded
//! corpora, each with a wall-clock budget.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::cnf::{CnfFormula, PartialAssignment, Var};
use crate::corpus;
use crate::deciders::{
    is_pc_witness, is_pc_with, is_urc_witness, is_urc_with, reduce_pc_irredundant_with,
    reduce_urc_irredundant_with, DeciderConfig,
};
use crate::dual_rail::{closed_assignments, dual_rail, pc_via_dual_rail};
use crate::error::Error;
use crate::families::{
    even_subsets, gamma, gamma_extra_clause, parity_cnf, parity_encoding, psi_horn, psi_horn_pc,
    psi_qhorn, psi_qhorn_pc, psi_qhorn_ubar, GammaVariant,
};
use crate::propagation::{up_closure, Status};
use crate::qhorn::{compile, compile_with_valuation, qhorn_sat, recognize_qhorn, Compilation};
use crate::semantics::{
    enumerate_models, equivalent, is_encoding_of, prime_implicates,
    FunctionTable, SemanticOracle,
};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Corpus sizes.
pub const RANDOM_FORMULAS: usize = 500;
pub const HORN_FORMULAS: usize = 200;
pub const RANDOM_FUNCTIONS: usize = 100;
pub const QHORN_FORMULAS: usize = 200;

type Check = fn(u64) -> Result<String, String>;

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub budget: Duration,
    check: Check,
}

impl Criterion {
    pub fn run(&self, seed: u64) -> CriterionOutcome {
        let start = Instant::now();
        let result = (self.check)(seed);
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match result {
            Ok(detail) => (true, detail),
            Err(detail) => (false, detail),
        };
        if passed && elapsed > self.budget {
            passed = false;
            detail = format!("over budget: {detail}");
        }
        CriterionOutcome {
            id: self.id,
            name: self.name,
            passed,
            detail,
            elapsed,
            budget: self.budget,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {} ({:.2}s of {}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

const fn criterion(id: u8, name: &'static str, secs: u64, check: Check) -> Criterion {
    Criterion {
        id,
        name,
        budget: Duration::from_secs(secs),
        check,
    }
}

pub const CRITERIA: [Criterion; 11] = [
    criterion(1, "prime counts of psi_horn", 60, prime_counts),
    criterion(2, "smallest PC formula for psi_horn", 120, smallest_pc),
    criterion(3, "q-Horn family without URC", 60, qhorn_not_urc),
    criterion(4, "PC encoding of psi_qhorn", 120, qhorn_pc_encoding),
    criterion(5, "gamma family", 300, gamma_family),
    criterion(6, "dual-rail PC agreement", 300, dual_rail_agreement),
    criterion(7, "dual-rail models and closed sets", 300, dual_rail_models),
    criterion(8, "PC-irredundant size ratio", 300, irredundant_ratio),
    criterion(9, "q-Horn compiler", 600, qhorn_compiler),
    criterion(10, "parity", 60, parity),
    criterion(11, "closure soundness", 300, closure_soundness),
];

pub fn criterion_by_id(id: u8) -> Option<&'static Criterion> {
    CRITERIA.iter().find(|c| c.id == id)
}

pub fn run_all(seed: u64) -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| c.run(seed)).collect()
}

/// Deciders run on up to a few hundred variables here; the closed-set
/// strategy takes over beyond the exhaustive range.
fn wide() -> DeciderConfig {
    DeciderConfig::with_limit(256)
}

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn prime_counts(_: u64) -> Result<String, String> {
    let mut counts = Vec::new();
    for m in 3..=6usize {
        let expected = m * ((1 << (m - 1)) + m - 1) + m * (m - 1);
        let got = prime_implicates(&psi_horn(m).map_err(err)?).map_err(err)?.len();
        ensure(got == expected, || format!("m={m}: {got} primes, expected {expected}"))?;
        counts.push(got.to_string());
    }
    Ok(format!("prime counts {}", counts.join(", ")))
}

fn smallest_pc(_: u64) -> Result<String, String> {
    for m in 3..=4usize {
        let pc = psi_horn_pc(m).map_err(err)?;
        let horn = psi_horn(m).map_err(err)?;
        let expected = (1 << (m - 1)) + 2 * m - 1;
        ensure(pc.len() == expected, || format!("m={m}: {} clauses, expected {expected}", pc.len()))?;
        ensure(equivalent(&pc, &horn).map_err(err)?, || format!("m={m}: not equivalent"))?;
        ensure(is_pc_with(&pc, &wide()).map_err(err)?.verdict, || format!("m={m}: not PC"))?;
        let report = is_pc_with(&horn, &wide()).map_err(err)?;
        ensure(!report.verdict, || format!("m={m}: psi_horn reported PC"))?;
        let (alpha, lit) = report.witness.zip(report.literal).ok_or("missing witness")?;
        ensure(is_pc_witness(&horn, &alpha, lit), || format!("m={m}: witness {alpha} / {lit} rejected"))?;
    }
    Ok("m=3,4 sizes, equivalence, PC and witnesses verified".into())
}

fn qhorn_not_urc(_: u64) -> Result<String, String> {
    for n in 2..=3usize {
        let f = psi_qhorn(n).map_err(err)?;
        let guards = PartialAssignment::new((1..=n).map(|i| Var::from_index(n + i - 1).positive())).map_err(err)?;
        let report = is_urc_with(&f, &wide()).map_err(err)?;
        ensure(!report.verdict, || format!("n={n}: reported URC"))?;
        let witness = report.witness.ok_or("missing witness")?;
        ensure(witness == guards, || format!("n={n}: witness {witness}, expected {guards}"))?;
        ensure(is_urc_witness(&f, &witness), || format!("n={n}: witness rejected"))?;
        let primes: HashSet<_> = prime_implicates(&f).map_err(err)?.clauses().iter().cloned().collect();
        let ubar = psi_qhorn_ubar(n).map_err(err)?;
        ensure(ubar.len() == 1 << n && ubar.iter().all(|c| primes.contains(c)), || {
            format!("n={n}: companion clauses are not all prime")
        })?;
        recognize_qhorn(&f).map_err(err)?;
    }
    Ok("n=2,3 witnesses are the guard conjunctions".into())
}

fn qhorn_pc_encoding(_: u64) -> Result<String, String> {
    for n in 2..=3usize {
        let enc = psi_qhorn_pc(n).map_err(err)?;
        let models = enumerate_models(&psi_qhorn(n).map_err(err)?).map_err(err)?;
        ensure(is_encoding_of(&enc, &models).map_err(err)?, || format!("n={n}: not an encoding"))?;
        ensure(is_pc_with(enc.formula(), &wide()).map_err(err)?.verdict, || format!("n={n}: not PC"))?;
    }
    Ok("n=2,3 encode psi_qhorn and are PC".into())
}

fn gamma_family(_: u64) -> Result<String, String> {
    for m in 2..=4usize {
        let base = gamma(m, GammaVariant::Base).map_err(err)?;
        let prime = gamma(m, GammaVariant::Prime).map_err(err)?;
        let dprime = gamma(m, GammaVariant::DoublePrime).map_err(err)?;
        let sizes = [base.len(), prime.len(), dprime.len()];
        let expected = [3 * m + 1, 4 * m + 1, 3 * m + (1 << (m - 1))];
        ensure(sizes == expected, || format!("m={m}: sizes {sizes:?}, expected {expected:?}"))?;
        for (l, r) in [(&base, &prime), (&base, &dprime), (&prime, &dprime)] {
            ensure(equivalent(l, r).map_err(err)?, || format!("m={m}: variants differ"))?;
        }
        ensure(is_pc_with(&prime, &wide()).map_err(err)?.verdict, || format!("m={m}: gamma' not PC"))?;
        ensure(is_urc_with(&dprime, &wide()).map_err(err)?.verdict, || format!("m={m}: gamma'' not URC"))?;
        for subset in even_subsets(m).map_err(err)? {
            let extra = gamma_extra_clause(m, &subset);
            let index = dprime.iter().position(|c| *c == extra).ok_or("missing extra clause")?;
            let without = dprime.without_clause(index);
            ensure(!is_urc_with(&without, &wide()).map_err(err)?.verdict, || {
                format!("m={m}: dropping {subset:?} keeps URC")
            })?;
        }
        let reduced = reduce_urc_irredundant_with(&dprime, None, &wide()).map_err(err)?;
        ensure(reduced == dprime, || format!("m={m}: reduction changed gamma''"))?;
    }
    Ok("m=2,3,4 verified".into())
}

fn for_each<T: Sync>(items: &[T], check: impl Fn(usize, &T) -> Result<(), String> + Sync) -> Result<(), String> {
    items.par_iter().enumerate().try_for_each(|(i, item)| check(i, item))
}

fn random_corpus(seed: u64) -> Vec<CnfFormula> {
    corpus::satisfiable_formulas(seed, RANDOM_FORMULAS, 6, 10)
}

fn dual_rail_agreement(seed: u64) -> Result<String, String> {
    let formulas = random_corpus(seed);
    for_each(&formulas, |i, f| {
        let direct = is_pc_with(f, &DeciderConfig::default()).map_err(err)?.verdict;
        let via = pc_via_dual_rail(f).map_err(err)?;
        ensure(direct == via, || format!("formula {i}: is_pc {direct}, dual rail {via}"))
    })?;
    Ok(format!("{} formulas agree", formulas.len()))
}

fn bits_of(bits: &[bool]) -> u64 {
    bits.iter().enumerate().filter(|(_, &b)| b).fold(0, |acc, (i, _)| acc | 1 << i)
}

fn dual_rail_models(seed: u64) -> Result<String, String> {
    let formulas = random_corpus(seed);
    for_each(&formulas, |i, f| {
        let dr = dual_rail(f).map_err(err)?;
        let models: HashSet<u64> = enumerate_models(&dr.horn).map_err(err)?.onset().iter().copied().collect();
        let up_closed: HashSet<u64> = PartialAssignment::all(f.num_vars())
            .filter(|alpha| {
                let r = up_closure(f, alpha);
                r.status == Status::Stable && r.derived == alpha.lits()
            })
            .map(|alpha| bits_of(&dr.map.encode(&alpha)))
            .collect();
        ensure(models == up_closed, || format!("formula {i}: DR models differ from UP-closed sets"))?;
        let closed: HashSet<u64> = closed_assignments(f)
            .map_err(err)?
            .iter()
            .map(|alpha| bits_of(&dr.map.encode(alpha)))
            .collect();
        let meet_closed = closed.iter().all(|a| closed.iter().all(|b| closed.contains(&(a & b))));
        ensure(meet_closed, || format!("formula {i}: S(f) not closed under conjunction"))?;
        let pc = is_pc_with(f, &DeciderConfig::default()).map_err(err)?.verdict;
        ensure((models == closed) == pc, || format!("formula {i}: representation {} but is_pc {pc}", models == closed))
    })?;
    Ok(format!("{} formulas verified", formulas.len()))
}

fn irredundant_ratio(seed: u64) -> Result<String, String> {
    let formulas = corpus::prime_formulas(seed, RANDOM_FUNCTIONS, 6);
    for_each(&formulas, |i, f| {
        let config = DeciderConfig::default();
        let first = reduce_pc_irredundant_with(f, Some(seed), &config).map_err(err)?;
        let second = reduce_pc_irredundant_with(f, Some(seed.wrapping_add(1)), &config).map_err(err)?;
        let n2 = f.num_vars() * f.num_vars();
        ensure(second.len() <= n2 * first.len() && first.len() <= n2 * second.len(), || {
            format!("formula {i}: sizes {} and {}", first.len(), second.len())
        })
    })?;
    Ok(format!("{} functions verified", formulas.len()))
}

fn check_compilation(label: &str, f: &CnfFormula, compiled: &Compilation) -> Result<(), String> {
    let models = enumerate_models(f).map_err(err)?;
    ensure(is_encoding_of(&compiled.encoding, &models).map_err(err)?, || format!("{label}: not an encoding"))?;
    ensure(is_urc_with(compiled.encoding.formula(), &wide()).map_err(err)?.verdict, || {
        format!("{label}: compiled encoding not URC")
    })?;
    let aux = compiled.encoding.aux_vars().len();
    ensure(aux <= compiled.aux_bound(), || format!("{label}: {aux} auxiliary variables"))?;
    let sat = qhorn_sat(&compiled.split);
    ensure(sat == !models.is_empty(), || format!("{label}: q-Horn SAT says {sat}"))
}

fn qhorn_compiler(seed: u64) -> Result<String, String> {
    let formulas = corpus::qhorn_formulas(seed, QHORN_FORMULAS, 8, 12);
    for_each(&formulas, |i, (f, planted)| {
        check_compilation(&format!("formula {i}"), f, &compile(f).map_err(err)?)?;
        check_compilation(&format!("formula {i} planted"), f, &compile_with_valuation(f, planted).map_err(err)?)
    })?;
    for n in 2..=3usize {
        let f = psi_qhorn(n).map_err(err)?;
        check_compilation(&format!("psi_qhorn({n})"), &f, &compile(&f).map_err(err)?)?;
    }
    let output = compile(&psi_qhorn(2).map_err(err)?).map_err(err)?.encoding;
    ensure(recognize_qhorn(output.formula()) == Err(Error::NotQHorn), || {
        "compiled psi_qhorn(2) is q-Horn".into()
    })?;
    Ok(format!("{} formulas and psi_qhorn(2,3) verified", formulas.len()))
}

fn parity(_: u64) -> Result<String, String> {
    for n in 3..=4usize {
        let f = parity_cnf(n).map_err(err)?;
        ensure(f.len() == 1 << (n - 1), || format!("n={n}: {} clauses", f.len()))?;
        let primes: HashSet<_> = prime_implicates(&f).map_err(err)?.clauses().iter().cloned().collect();
        let own: HashSet<_> = f.clauses().iter().cloned().collect();
        ensure(primes == own, || format!("n={n}: clauses are not exactly the primes"))?;
        let enc = parity_encoding(n).map_err(err)?;
        let odd = FunctionTable::from_predicate(enc.input_vars(), |bits| bits.count_ones() % 2 == 1).map_err(err)?;
        ensure(is_encoding_of(&enc, &odd).map_err(err)?, || format!("n={n}: chain is not an encoding"))?;
        ensure(is_pc_with(enc.formula(), &wide()).map_err(err)?.verdict, || format!("n={n}: chain not PC"))?;
    }
    Ok("n=3,4 verified".into())
}

fn closure_soundness(seed: u64) -> Result<String, String> {
    let formulas = random_corpus(seed);
    let horn = corpus::horn_formulas(seed, HORN_FORMULAS, 6, 10);
    let all: Vec<&CnfFormula> = formulas.iter().chain(&horn).collect();
    for_each(&all, |i, f| {
        let mut oracle = SemanticOracle::new(f);
        for alpha in PartialAssignment::all(f.num_vars()) {
            let up = up_closure(f, &alpha).derived;
            let sem = oracle.closure(&alpha);
            ensure(up.iter().all(|l| sem.binary_search(l).is_ok()), || {
                format!("formula {i}: unit closure of {alpha} exceeds the semantic one")
            })?;
        }
        Ok(())
    })?;
    for_each(&horn, |i, f| {
        ensure(is_urc_with(f, &DeciderConfig::default()).map_err(err)?.verdict, || {
            format!("Horn formula {i} not URC")
        })
    })?;
    Ok(format!("{} formulas, {} Horn", all.len(), horn.len()))
}
