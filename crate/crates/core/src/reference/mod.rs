//! Reference solvers over semiring instances: variable elimination,
//! recursive conditioning on a branch decomposition and AND/OR search on a
//! pseudo tree. Each has a linear-space mode and a caching mode where that
//! applies.
//!
//! For these solvers `SearchStats::decisions` counts recursive calls.

mod ao;
mod rc;
mod ve;

use thiserror::Error;

use crate::decomposition::{
    branchdec_from_order, heuristic_order, pseudo_tree_from_order, BranchDecomp, DecompError, ElimOrder, Hypergraph,
    OrderHeuristic, PrimalGraph, PseudoTree,
};
use crate::semiring::{SemiringError, SemiringInstance, Value};

pub use ao::{ao_solve, compute_ao_labels, AoLabels};
pub use rc::{rc_solve, rc_solve_audited};
pub use ve::ve_solve;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReferenceError {
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error("factor {factor} does not lie on one root-to-leaf path of the pseudo tree")]
    FactorScopeViolation { factor: usize },
}

/// Whether a search solver memoizes subproblem values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CacheMode {
    Space,
    Cache,
}

/// The hypergraph of an instance: one edge per factor with a non-empty
/// scope, plus the factor index behind each edge.
pub fn instance_hypergraph(inst: &SemiringInstance) -> (Hypergraph, Vec<usize>) {
    let mut edges = Vec::new();
    let mut owner = Vec::new();
    for (i, f) in inst.factors().iter().enumerate() {
        if !f.is_scalar() {
            edges.push(f.scope().to_vec());
            owner.push(i);
        }
    }
    let h = Hypergraph::new(inst.var_ids(), edges).expect("instance scopes are known variables");
    (h, owner)
}

pub fn instance_primal_graph(inst: &SemiringInstance) -> PrimalGraph {
    let mut g = PrimalGraph::new(inst.var_ids());
    for f in inst.factors() {
        for (i, &u) in f.scope().iter().enumerate() {
            for &v in &f.scope()[i + 1..] {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Min-fill elimination order of the instance's hypergraph.
pub fn default_order(inst: &SemiringInstance) -> ElimOrder {
    heuristic_order(&instance_hypergraph(inst).0, OrderHeuristic::MinFill, None)
}

/// Branch decomposition built from the min-fill order, or `None` when no
/// factor has a variable.
pub fn default_branchdec(inst: &SemiringInstance) -> Option<BranchDecomp> {
    let (h, _) = instance_hypergraph(inst);
    branchdec_from_order(&h, &default_order(inst)).ok()
}

/// Pseudo tree induced by the min-fill order.
pub fn default_pseudo_tree(inst: &SemiringInstance) -> PseudoTree {
    pseudo_tree_from_order(&instance_primal_graph(inst), &default_order(inst)).expect("order covers the primal graph")
}

/// `⊗` of the zero-arity factors and of `one ⊕ … ⊕ one` for each variable
/// in no factor. Solvers that walk a structure over the remaining factors
/// multiply this in at the end.
fn detached(inst: &SemiringInstance, with_free_vars: bool) -> Value {
    let s = inst.semiring();
    let mut out = s.one();
    for f in inst.factors() {
        if let Some(v) = f.scalar_value() {
            out = s.mul(&out, v);
        }
    }
    if with_free_vars {
        for &(v, d) in inst.vars() {
            if !inst.factors().iter().any(|f| f.contains(v)) {
                out = s.mul(&out, &s.one_sum(d));
            }
        }
    }
    out
}
