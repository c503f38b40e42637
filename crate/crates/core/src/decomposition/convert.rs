use std::collections::{BTreeSet, HashSet};

use super::hypergraph::{ElimOrder, Hypergraph, Vertex};
use super::tree::{BranchDecomp, DecompNode, Decomposition, Shape, TreeDecomp};
use super::DecompError;

/// An elimination order whose induced width is at most the width of `t`.
///
/// `node(x)` is the deepest common ancestor of the leaves whose label holds
/// `x`. Vertices are eliminated deepest `node(x)` first, ties by smallest id;
/// vertices in no leaf label go first.
pub fn order_from_treedec(h: &Hypergraph, t: &TreeDecomp) -> Result<ElimOrder, DecompError> {
    t.validate(h).map_err(DecompError::InvalidDecomposition)?;
    let nodes = t.nodes();
    let parent = t.parents();
    let mut depth = vec![0usize; nodes.len()];
    // parents precede children in a root-first walk
    let mut stack = vec![t.root()];
    while let Some(n) = stack.pop() {
        for &c in &nodes[n].children {
            depth[c] = depth[n] + 1;
            stack.push(c);
        }
    }
    let lca = |mut a: usize, mut b: usize| {
        while depth[a] > depth[b] {
            a = parent[a].expect("non-root has a parent");
        }
        while depth[b] > depth[a] {
            b = parent[b].expect("non-root has a parent");
        }
        while a != b {
            a = parent[a].expect("non-root has a parent");
            b = parent[b].expect("non-root has a parent");
        }
        a
    };
    let mut loose = Vec::new();
    let mut placed: Vec<(usize, Vertex)> = Vec::new();
    for &x in h.vertices() {
        let node = nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_leaf() && n.label.binary_search(&x).is_ok())
            .map(|(i, _)| i)
            .reduce(lca);
        match node {
            None => loose.push(x),
            Some(n) => placed.push((depth[n], x)),
        }
    }
    placed.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    loose.extend(placed.into_iter().map(|(_, x)| x));
    Ok(ElimOrder::new(loose))
}

/// Tree shape built by eliminating along `pi`: when a vertex is eliminated,
/// every current tree that mentions it is merged into one left-leaning
/// chain. Whatever trees remain at the end are chained together.
fn shape_from_order(h: &Hypergraph, pi: &ElimOrder) -> Result<Option<Shape>, DecompError> {
    pi.check_permutation(h.vertices())?;
    let mut trees: Vec<Option<(Shape, HashSet<Vertex>)>> = h
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| Some((Shape::Leaf(i), e.iter().copied().collect())))
        .collect();
    for &v in pi.as_slice() {
        let holding: Vec<usize> = (0..trees.len())
            .filter(|&i| trees[i].as_ref().is_some_and(|(_, vs)| vs.contains(&v)))
            .collect();
        if holding.len() < 2 {
            continue;
        }
        let mut vertices = HashSet::new();
        let parts: Vec<Shape> = holding
            .iter()
            .map(|&i| {
                let (s, vs) = trees[i].take().expect("tree is live");
                vertices.extend(vs);
                s
            })
            .collect();
        let merged = Shape::chain(parts).expect("at least two parts");
        trees[holding[0]] = Some((merged, vertices));
    }
    Ok(Shape::chain(trees.into_iter().flatten().map(|(s, _)| s)))
}

/// A tree decomposition whose width is at most the induced width of `pi`.
pub fn treedec_from_order(h: &Hypergraph, pi: &ElimOrder) -> Result<TreeDecomp, DecompError> {
    Ok(match shape_from_order(h, pi)? {
        Some(shape) => TreeDecomp::from_shape(h, &shape),
        None => TreeDecomp::from_parts(
            vec![DecompNode {
                label: vec![],
                children: vec![],
                edge: None,
            }],
            0,
        ),
    })
}

/// A branch decomposition on the same tree shape as `treedec_from_order`.
pub fn branchdec_from_order(h: &Hypergraph, pi: &ElimOrder) -> Result<BranchDecomp, DecompError> {
    match shape_from_order(h, pi)? {
        Some(shape) => Ok(BranchDecomp::from_shape(h, &shape)),
        None => Err(DecompError::HypergraphTooSmall),
    }
}

/// Variable order from a preorder walk of `b`: each node contributes the
/// vertices of its label (its hyperedge, at a leaf) not listed yet, in
/// ascending order.
pub fn static_order_from_branchdec(b: &BranchDecomp, h: &Hypergraph) -> Result<Vec<Vertex>, DecompError> {
    b.validate(h).map_err(DecompError::InvalidDecomposition)?;
    let nodes = b.nodes();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut stack = vec![b.root()];
    while let Some(n) = stack.pop() {
        let node = &nodes[n];
        let group = match node.edge {
            Some(e) if node.is_leaf() => &h.edges()[e],
            _ => &node.label,
        };
        for &x in group {
            if seen.insert(x) {
                out.push(x);
            }
        }
        stack.extend(node.children.iter().rev());
    }
    Ok(out)
}
