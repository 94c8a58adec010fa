//! 2-SAT by strongly connected components of the implication graph.

use petgraph::algo::kosaraju_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::cnf::{Clause, CnfFormula};
use crate::propagation::{Outcome, UnitPropagator};

/// Satisfiability of a formula whose clauses have at most two literals.
/// Unit clauses are propagated before the graph is built.
pub fn two_sat(formula: &CnfFormula) -> bool {
    debug_assert!(formula.is_two_cnf());
    let mut up = UnitPropagator::new(formula);
    if let Outcome::Conflict(_) = up.propagate([]) {
        return false;
    }
    let n = formula.num_vars();
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(2 * n, 2 * formula.len());
    for _ in 0..2 * n {
        graph.add_node(());
    }
    let node = |code: usize| NodeIndex::new(code);
    for clause in formula.iter().filter(|c| !satisfied(&up, c)) {
        let open: Vec<_> = clause.iter().filter(|&l| !up.is_true(!l)).collect();
        if let [u, v] = open[..] {
            graph.add_edge(node((!u).code()), node(v.code()), ());
            graph.add_edge(node((!v).code()), node(u.code()), ());
        }
    }
    let mut component = vec![0usize; 2 * n];
    for (i, scc) in kosaraju_scc(&graph).into_iter().enumerate() {
        for v in scc {
            component[v.index()] = i;
        }
    }
    (0..n).all(|v| component[2 * v] != component[2 * v + 1])
}

fn satisfied(up: &UnitPropagator<'_>, clause: &Clause) -> bool {
    clause.iter().any(|l| up.is_true(l))
}
