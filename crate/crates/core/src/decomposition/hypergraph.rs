use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::DecompError;
use crate::formula::Formula;

pub type Vertex = u32;

/// A hypergraph over sorted vertex ids. Edges are sorted vertex lists and
/// may repeat.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    vertices: Vec<Vertex>,
    edges: Vec<Vec<Vertex>>,
}

impl Hypergraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Vec<Vertex>>) -> Result<Self, DecompError> {
        let mut vertices = vertices;
        vertices.sort_unstable();
        vertices.dedup();
        let mut out = Vec::with_capacity(edges.len());
        for (i, mut e) in edges.into_iter().enumerate() {
            e.sort_unstable();
            e.dedup();
            if e.is_empty() {
                return Err(DecompError::InvalidHypergraph(format!("edge {i} is empty")));
            }
            if let Some(v) = e.iter().find(|v| vertices.binary_search(v).is_err()) {
                return Err(DecompError::InvalidHypergraph(format!(
                    "edge {i} mentions unknown vertex {v}"
                )));
            }
            out.push(e);
        }
        Ok(Hypergraph { vertices, edges: out })
    }

    /// Vertex set is the union of the edges.
    pub fn from_edges(edges: Vec<Vec<Vertex>>) -> Result<Self, DecompError> {
        let vertices = edges.iter().flatten().copied().collect();
        Hypergraph::new(vertices, edges)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Vertices that lie in no edge.
    pub fn isolated(&self) -> Vec<Vertex> {
        let used: BTreeSet<Vertex> = self.edges.iter().flatten().copied().collect();
        self.vertices.iter().copied().filter(|v| !used.contains(v)).collect()
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// One edge per non-empty clause; vertices are `1..=num_vars`.
pub fn hypergraph_of(f: &Formula) -> Hypergraph {
    let edges = f
        .clauses()
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| c.iter().map(|l| l.var()).collect())
        .collect();
    Hypergraph::new((1..=f.num_vars()).collect(), edges).expect("clause variables are in range")
}

/// Undirected graph with an edge between every pair of vertices sharing a
/// hyperedge.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PrimalGraph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

impl PrimalGraph {
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Self {
        PrimalGraph {
            adj: vertices.into_iter().map(|v| (v, BTreeSet::new())).collect(),
        }
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        if u == v {
            return;
        }
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.adj
            .iter()
            .flat_map(|(&u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }
}

pub fn primal_graph(h: &Hypergraph) -> PrimalGraph {
    let mut g = PrimalGraph::new(h.vertices().iter().copied());
    for e in h.edges() {
        for (i, &u) in e.iter().enumerate() {
            for &v in &e[i + 1..] {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Vertices in elimination order: position 0 is eliminated first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElimOrder(Vec<Vertex>);

impl ElimOrder {
    pub fn new(order: Vec<Vertex>) -> Self {
        ElimOrder(order)
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position of each vertex in the order.
    pub fn positions(&self) -> HashMap<Vertex, usize> {
        self.0.iter().enumerate().map(|(i, &v)| (v, i)).collect()
    }

    /// Checks that the order is a permutation of `vertices`.
    pub fn check_permutation(&self, vertices: &[Vertex]) -> Result<(), DecompError> {
        let mut sorted = self.0.clone();
        sorted.sort_unstable();
        let mut expected = vertices.to_vec();
        expected.sort_unstable();
        if sorted != expected {
            return Err(DecompError::InvalidOrder(format!(
                "order {:?} is not a permutation of the vertex set {:?}",
                self.0, expected
            )));
        }
        Ok(())
    }
}

impl From<Vec<Vertex>> for ElimOrder {
    fn from(v: Vec<Vertex>) -> Self {
        ElimOrder(v)
    }
}

/// Induced width of `h` under `pi` and the hypergraph sequence `H_n .. H_1`.
///
/// Eliminating `v` merges every edge containing `v` into one edge and
/// removes `v` from it; the merged edge goes first in the next hypergraph.
/// The width is the largest edge created this way.
pub fn induced_width(h: &Hypergraph, pi: &ElimOrder) -> Result<(usize, Vec<Hypergraph>), DecompError> {
    pi.check_permutation(h.vertices())?;
    let mut width = 0;
    let mut current = h.clone();
    let mut trace = Vec::with_capacity(pi.len());
    for &v in pi.as_slice() {
        let mut merged: BTreeSet<Vertex> = BTreeSet::new();
        let mut rest = Vec::with_capacity(current.edges.len());
        for e in &current.edges {
            if e.binary_search(&v).is_ok() {
                merged.extend(e.iter().copied());
            } else {
                rest.push(e.clone());
            }
        }
        merged.remove(&v);
        width = width.max(merged.len());
        let mut edges = Vec::with_capacity(rest.len() + 1);
        if !merged.is_empty() {
            edges.push(merged.into_iter().collect());
        }
        edges.extend(rest);
        let vertices: Vec<Vertex> = current.vertices.iter().copied().filter(|&u| u != v).collect();
        let next = Hypergraph { vertices, edges };
        trace.push(std::mem::replace(&mut current, next));
    }
    Ok((width, trace))
}
