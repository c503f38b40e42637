//! Hypergraphs and the width structures built on them: elimination orders,
//! branch and tree decompositions, and pseudo trees.
//!
//! Induced width counts the edge created by each elimination step (the
//! merged edge with the eliminated vertex removed). Branch labels use the
//! boundary rule at every node, leaves included.

mod convert;
mod heuristic;
mod hypergraph;
mod pseudo;
mod tree;

use std::fmt;

use thiserror::Error;

pub use convert::{branchdec_from_order, order_from_treedec, static_order_from_branchdec, treedec_from_order};
pub use heuristic::{heuristic_order, OrderHeuristic};
pub use hypergraph::{hypergraph_of, induced_width, primal_graph, ElimOrder, Hypergraph, PrimalGraph, Vertex};
pub use pseudo::{pseudo_tree_from_order, validate_pseudo_tree, PseudoTree};
pub use tree::{width_of, BranchDecomp, DecompNode, Decomposition, Shape, TreeDecomp};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompError {
    #[error("invalid decomposition: {}", join(.0))]
    InvalidDecomposition(Vec<Violation>),
    #[error("invalid pseudo tree: {}", join(.0))]
    InvalidPseudoTree(Vec<Violation>),
    #[error("invalid elimination order: {0}")]
    InvalidOrder(String),
    #[error("hypergraph has no edges")]
    HypergraphTooSmall,
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// One failed invariant of a decomposition or pseudo tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyTree,
    BadRoot {
        root: usize,
    },
    BadChild {
        node: usize,
        child: usize,
    },
    NotBinary {
        node: usize,
        children: usize,
    },
    MultipleParents {
        node: usize,
    },
    Unreachable {
        node: usize,
    },
    LeafWithoutEdge {
        node: usize,
    },
    InternalWithEdge {
        node: usize,
    },
    EdgeOutOfRange {
        node: usize,
        edge: usize,
    },
    EdgeNotAtOneLeaf {
        edge: usize,
        leaves: usize,
    },
    EdgeNotCovered {
        edge: usize,
    },
    LabelMismatch {
        node: usize,
        expected: Vec<Vertex>,
        found: Vec<Vertex>,
    },
    UnknownVertex {
        vertex: Vertex,
    },
    RunningIntersection {
        vertex: Vertex,
    },
    MissingVertex {
        vertex: Vertex,
    },
    ParentCycle {
        vertex: Vertex,
    },
    EdgeNotAncestral {
        u: Vertex,
        v: Vertex,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            EmptyTree => write!(f, "tree has no nodes"),
            BadRoot { root } => write!(f, "root {root} is not a node"),
            BadChild { node, child } => write!(f, "node {node} has missing child {child}"),
            NotBinary { node, children } => write!(f, "node {node} has {children} children"),
            MultipleParents { node } => write!(f, "node {node} is reached more than once"),
            Unreachable { node } => write!(f, "node {node} is not reachable from the root"),
            LeafWithoutEdge { node } => write!(f, "leaf {node} carries no hyperedge"),
            InternalWithEdge { node } => write!(f, "internal node {node} carries a hyperedge"),
            EdgeOutOfRange { node, edge } => write!(f, "node {node} references missing edge {edge}"),
            EdgeNotAtOneLeaf { edge, leaves } => write!(f, "edge {edge} appears at {leaves} leaves"),
            EdgeNotCovered { edge } => write!(f, "edge {edge} is in no leaf label"),
            LabelMismatch { node, expected, found } => {
                write!(f, "node {node} has label {found:?}, expected {expected:?}")
            }
            UnknownVertex { vertex } => write!(f, "vertex {vertex} is not in the hypergraph"),
            RunningIntersection { vertex } => {
                write!(f, "nodes labelled with {vertex} are not connected")
            }
            MissingVertex { vertex } => write!(f, "vertex {vertex} is missing"),
            ParentCycle { vertex } => write!(f, "parent chain of {vertex} is cyclic"),
            EdgeNotAncestral { u, v } => {
                write!(f, "edge ({u},{v}) joins neither ancestor nor descendant")
            }
        }
    }
}
