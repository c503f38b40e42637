use std::collections::{BTreeMap, BTreeSet};

use super::hypergraph::{ElimOrder, PrimalGraph, Vertex};
use super::{DecompError, Violation};

/// A rooted forest over graph vertices given by parent pointers. Every
/// graph edge must join an ancestor and a descendant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoTree {
    parent: BTreeMap<Vertex, Option<Vertex>>,
    children: BTreeMap<Vertex, Vec<Vertex>>,
}

impl PseudoTree {
    pub fn from_parents(parent: BTreeMap<Vertex, Option<Vertex>>) -> Self {
        let mut children: BTreeMap<Vertex, Vec<Vertex>> = parent.keys().map(|&v| (v, vec![])).collect();
        for (&v, p) in &parent {
            if let Some(p) = p {
                children.entry(*p).or_default().push(v);
            }
        }
        PseudoTree { parent, children }
    }

    pub fn parents(&self) -> &BTreeMap<Vertex, Option<Vertex>> {
        &self.parent
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent.get(&v).copied().flatten()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.parent.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.parent.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Roots in ascending order; more than one for a forest.
    pub fn roots(&self) -> Vec<Vertex> {
        self.parent
            .iter()
            .filter(|(_, p)| p.is_none())
            .map(|(&v, _)| v)
            .collect()
    }

    /// Children in ascending order.
    pub fn children(&self, v: Vertex) -> &[Vertex] {
        self.children.get(&v).map_or(&[], Vec::as_slice)
    }

    /// Proper ancestors, nearest first. Stops early on a cyclic chain.
    pub fn ancestors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut cur = self.parent(v);
        while let Some(p) = cur {
            if out.len() > self.parent.len() {
                break;
            }
            out.push(p);
            cur = self.parent(p);
        }
        out
    }

    pub fn is_ancestor(&self, a: Vertex, d: Vertex) -> bool {
        self.ancestors(d).contains(&a)
    }

    /// The vertex and all its descendants, preorder.
    pub fn subtree(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(x) = stack.pop() {
            if out.len() > self.parent.len() {
                break;
            }
            out.push(x);
            stack.extend(self.children(x).iter().rev());
        }
        out
    }
}

/// Parent of `v` is the earliest-eliminated vertex among those eliminated
/// after `v` and adjacent to it in the graph induced by `pi`. Vertices with
/// no such neighbour are roots.
pub fn pseudo_tree_from_order(g: &PrimalGraph, pi: &ElimOrder) -> Result<PseudoTree, DecompError> {
    let vertices: Vec<Vertex> = g.vertices().collect();
    pi.check_permutation(&vertices)?;
    let pos = pi.positions();
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = vertices.iter().map(|&v| (v, g.neighbors(v).collect())).collect();
    let mut parent = BTreeMap::new();
    for &v in pi.as_slice() {
        let later: Vec<Vertex> = adj[&v].iter().copied().filter(|u| pos[u] > pos[&v]).collect();
        for &a in &later {
            let entry = adj.get_mut(&a).expect("vertex present");
            entry.extend(later.iter().copied().filter(|&b| b != a));
        }
        parent.insert(v, later.iter().copied().min_by_key(|u| pos[u]));
    }
    Ok(PseudoTree::from_parents(parent))
}

/// Checks that `t` spans exactly the vertices of `g`, has acyclic parent
/// chains, and places every graph edge on an ancestor chain.
pub fn validate_pseudo_tree(t: &PseudoTree, g: &PrimalGraph) -> Result<(), Vec<Violation>> {
    let mut v = Vec::new();
    for x in g.vertices() {
        if !t.contains(x) {
            v.push(Violation::MissingVertex { vertex: x });
        }
    }
    for x in t.vertices() {
        if !g.contains_vertex(x) {
            v.push(Violation::UnknownVertex { vertex: x });
        }
        if let Some(p) = t.parent(x) {
            if !t.contains(p) {
                v.push(Violation::UnknownVertex { vertex: p });
            }
        }
    }
    let mut cyclic = BTreeSet::new();
    for x in t.vertices() {
        let mut seen = BTreeSet::from([x]);
        let mut cur = t.parent(x);
        while let Some(p) = cur {
            if !seen.insert(p) {
                cyclic.insert(x);
                break;
            }
            cur = t.parent(p);
        }
    }
    v.extend(cyclic.iter().map(|&vertex| Violation::ParentCycle { vertex }));
    if cyclic.is_empty() {
        for (a, b) in g.edges() {
            if t.contains(a) && t.contains(b) && !t.is_ancestor(a, b) && !t.is_ancestor(b, a) {
                v.push(Violation::EdgeNotAncestral { u: a, v: b });
            }
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}
