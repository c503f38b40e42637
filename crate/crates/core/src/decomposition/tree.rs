use std::collections::BTreeSet;

use super::hypergraph::{Hypergraph, Vertex};
use super::{DecompError, Violation};

/// A binary tree shape whose leaves name hyperedges by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf(usize),
    Node(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn node(left: Shape, right: Shape) -> Shape {
        Shape::Node(Box::new(left), Box::new(right))
    }

    /// Left-leaning chain `((s0, s1), s2) ...`; `None` when empty.
    pub fn chain(parts: impl IntoIterator<Item = Shape>) -> Option<Shape> {
        parts.into_iter().reduce(Shape::node)
    }

    pub fn leaves(&self) -> Vec<usize> {
        match self {
            Shape::Leaf(e) => vec![*e],
            Shape::Node(l, r) => {
                let mut out = l.leaves();
                out.extend(r.leaves());
                out
            }
        }
    }

    /// Nodes in preorder; the root is node 0.
    fn flatten(&self, label_of_leaf: &dyn Fn(usize) -> Vec<Vertex>) -> Vec<DecompNode> {
        fn go(s: &Shape, f: &dyn Fn(usize) -> Vec<Vertex>, out: &mut Vec<DecompNode>) -> usize {
            let id = out.len();
            match s {
                Shape::Leaf(e) => out.push(DecompNode {
                    label: f(*e),
                    children: vec![],
                    edge: Some(*e),
                }),
                Shape::Node(l, r) => {
                    out.push(DecompNode {
                        label: vec![],
                        children: vec![],
                        edge: None,
                    });
                    let a = go(l, f, out);
                    let b = go(r, f, out);
                    out[id].children = vec![a, b];
                }
            }
            id
        }
        let mut out = Vec::new();
        go(self, label_of_leaf, &mut out);
        out
    }
}

/// A node of a branch or tree decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompNode {
    pub label: Vec<Vertex>,
    pub children: Vec<usize>,
    /// Hyperedge index carried by a leaf.
    pub edge: Option<usize>,
}

impl DecompNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Structure shared by both decomposition kinds, computed once the tree
/// shape has been checked.
struct Layout {
    parent: Vec<Option<usize>>,
    preorder: Vec<usize>,
}

fn check_structure(nodes: &[DecompNode], root: usize) -> Result<Layout, Vec<Violation>> {
    let mut v = Vec::new();
    if nodes.is_empty() {
        return Err(vec![Violation::EmptyTree]);
    }
    if root >= nodes.len() {
        return Err(vec![Violation::BadRoot { root }]);
    }
    for (i, n) in nodes.iter().enumerate() {
        if !(n.children.is_empty() || n.children.len() == 2) {
            v.push(Violation::NotBinary {
                node: i,
                children: n.children.len(),
            });
        }
        for &c in &n.children {
            if c >= nodes.len() {
                v.push(Violation::BadChild { node: i, child: c });
            }
        }
    }
    if !v.is_empty() {
        return Err(v);
    }
    let mut parent = vec![None; nodes.len()];
    let mut seen = vec![false; nodes.len()];
    let mut preorder = Vec::with_capacity(nodes.len());
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(n) = stack.pop() {
        preorder.push(n);
        for &c in nodes[n].children.iter().rev() {
            if seen[c] {
                v.push(Violation::MultipleParents { node: c });
                continue;
            }
            seen[c] = true;
            parent[c] = Some(n);
            stack.push(c);
        }
    }
    for (i, s) in seen.iter().enumerate() {
        if !s {
            v.push(Violation::Unreachable { node: i });
        }
    }
    if v.is_empty() {
        Ok(Layout { parent, preorder })
    } else {
        Err(v)
    }
}

/// For every node, how many of the given leaf sets containing each vertex
/// lie below it. `leaf_sets[n]` is only read for leaves.
fn counts_below(nodes: &[DecompNode], layout: &Layout, leaf_sets: &[Vec<Vertex>], nv: usize) -> Vec<Vec<u32>> {
    let mut counts = vec![vec![0u32; nv]; nodes.len()];
    for &n in layout.preorder.iter().rev() {
        if nodes[n].is_leaf() {
            for &x in &leaf_sets[n] {
                counts[n][x as usize] += 1;
            }
        } else {
            let (a, b) = (nodes[n].children[0], nodes[n].children[1]);
            let sum: Vec<u32> = counts[a].iter().zip(&counts[b]).map(|(x, y)| x + y).collect();
            counts[n] = sum;
        }
    }
    counts
}

fn max_vertex(h: &Hypergraph, nodes: &[DecompNode]) -> usize {
    let a = h.vertices().last().copied().unwrap_or(0);
    let b = nodes.iter().flat_map(|n| n.label.iter()).copied().max().unwrap_or(0);
    a.max(b) as usize + 1
}

/// Width measure and validation shared by both decomposition kinds.
pub trait Decomposition {
    /// Every violated invariant against `h`.
    fn validate(&self, h: &Hypergraph) -> Result<(), Vec<Violation>>;
    /// Width from the stored labels, without validation.
    fn raw_width(&self) -> usize;
}

/// Validates `d` against `h` and returns its width.
pub fn width_of<D: Decomposition>(d: &D, h: &Hypergraph) -> Result<usize, DecompError> {
    d.validate(h).map_err(DecompError::InvalidDecomposition)?;
    Ok(d.raw_width())
}

/// A branch decomposition: leaves correspond one-to-one to hyperedges and
/// each node is labelled with the vertices shared between the edges below
/// it and the edges elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchDecomp {
    nodes: Vec<DecompNode>,
    root: usize,
}

impl BranchDecomp {
    /// Builds the tree and computes every label from `h`.
    pub fn from_shape(h: &Hypergraph, shape: &Shape) -> Self {
        let nodes = shape.flatten(&|_| vec![]);
        let mut b = BranchDecomp { nodes, root: 0 };
        b.relabel(h).expect("shape leaves must index the hypergraph's edges");
        b
    }

    /// Uses the given nodes and labels as they are. Call `validate` before
    /// trusting them.
    pub fn from_parts(nodes: Vec<DecompNode>, root: usize) -> Self {
        BranchDecomp { nodes, root }
    }

    pub fn nodes(&self) -> &[DecompNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Recomputes every label from `h`.
    pub fn relabel(&mut self, h: &Hypergraph) -> Result<(), DecompError> {
        let labels = self.compute_labels(h).map_err(DecompError::InvalidDecomposition)?;
        for (n, l) in self.nodes.iter_mut().zip(labels) {
            n.label = l;
        }
        Ok(())
    }

    fn compute_labels(&self, h: &Hypergraph) -> Result<Vec<Vec<Vertex>>, Vec<Violation>> {
        let layout = check_structure(&self.nodes, self.root)?;
        let mut v = Vec::new();
        let mut at_leaves = vec![0usize; h.edges().len()];
        for (i, n) in self.nodes.iter().enumerate() {
            match (n.is_leaf(), n.edge) {
                (true, None) => v.push(Violation::LeafWithoutEdge { node: i }),
                (true, Some(e)) if e >= h.edges().len() => v.push(Violation::EdgeOutOfRange { node: i, edge: e }),
                (true, Some(e)) => at_leaves[e] += 1,
                (false, Some(_)) => v.push(Violation::InternalWithEdge { node: i }),
                (false, None) => {}
            }
        }
        for (e, &c) in at_leaves.iter().enumerate() {
            if c != 1 {
                v.push(Violation::EdgeNotAtOneLeaf { edge: e, leaves: c });
            }
        }
        if !v.is_empty() {
            return Err(v);
        }
        let nv = max_vertex(h, &self.nodes);
        let leaf_sets: Vec<Vec<Vertex>> = self
            .nodes
            .iter()
            .map(|n| n.edge.map(|e| h.edges()[e].clone()).unwrap_or_default())
            .collect();
        let counts = counts_below(&self.nodes, &layout, &leaf_sets, nv);
        let total = &counts[self.root];
        Ok(counts
            .iter()
            .map(|c| {
                (0..nv)
                    .filter(|&x| c[x] > 0 && c[x] < total[x])
                    .map(|x| x as Vertex)
                    .collect()
            })
            .collect())
    }
}

impl Decomposition for BranchDecomp {
    fn validate(&self, h: &Hypergraph) -> Result<(), Vec<Violation>> {
        let labels = self.compute_labels(h)?;
        let v: Vec<Violation> = self
            .nodes
            .iter()
            .zip(labels)
            .enumerate()
            .filter(|(_, (n, l))| n.label != *l)
            .map(|(i, (n, l))| Violation::LabelMismatch {
                node: i,
                expected: l,
                found: n.label.clone(),
            })
            .collect();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    fn raw_width(&self) -> usize {
        self.nodes.iter().map(|n| n.label.len()).max().unwrap_or(0)
    }
}

/// A tree decomposition: leaf labels are given and every internal node
/// holds exactly the vertices lying on a path between two leaves that
/// contain them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomp {
    nodes: Vec<DecompNode>,
    root: usize,
}

impl TreeDecomp {
    /// Leaves are labelled with their hyperedges; internal labels derived.
    pub fn from_shape(h: &Hypergraph, shape: &Shape) -> Self {
        let nodes = shape.flatten(&|e| h.edges()[e].clone());
        let mut t = TreeDecomp { nodes, root: 0 };
        t.derive_internal_labels().expect("flattened shapes are binary trees");
        t
    }

    /// Leaves keep their labels; internal labels are recomputed.
    pub fn from_leaf_labels(nodes: Vec<DecompNode>, root: usize) -> Result<Self, DecompError> {
        let mut t = TreeDecomp { nodes, root };
        t.derive_internal_labels()?;
        Ok(t)
    }

    /// Uses the given labels as they are. Call `validate` before trusting
    /// them.
    pub fn from_parts(nodes: Vec<DecompNode>, root: usize) -> Self {
        TreeDecomp { nodes, root }
    }

    pub fn nodes(&self) -> &[DecompNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Parent of every node; `None` at the root. Panics on a malformed tree.
    pub fn parents(&self) -> Vec<Option<usize>> {
        check_structure(&self.nodes, self.root).expect("tree structure").parent
    }

    fn derive_internal_labels(&mut self) -> Result<(), DecompError> {
        let labels = self.derived_labels().map_err(DecompError::InvalidDecomposition)?;
        for (n, l) in self.nodes.iter_mut().zip(labels) {
            n.label = l;
        }
        Ok(())
    }

    fn derived_labels(&self) -> Result<Vec<Vec<Vertex>>, Vec<Violation>> {
        let layout = check_structure(&self.nodes, self.root)?;
        let nv = self
            .nodes
            .iter()
            .flat_map(|n| n.label.iter())
            .copied()
            .max()
            .unwrap_or(0) as usize
            + 1;
        let leaf_sets: Vec<Vec<Vertex>> = self
            .nodes
            .iter()
            .map(|n| if n.is_leaf() { n.label.clone() } else { vec![] })
            .collect();
        let counts = counts_below(&self.nodes, &layout, &leaf_sets, nv);
        let total = &counts[self.root];
        Ok(self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                if n.is_leaf() {
                    return n.label.clone();
                }
                let (a, b) = (n.children[0], n.children[1]);
                (0..nv)
                    .filter(|&x| {
                        let here = counts[i][x];
                        here > 0 && (here < total[x] || (counts[a][x] > 0 && counts[b][x] > 0))
                    })
                    .map(|x| x as Vertex)
                    .collect()
            })
            .collect())
    }
}

impl Decomposition for TreeDecomp {
    fn validate(&self, h: &Hypergraph) -> Result<(), Vec<Violation>> {
        let layout = check_structure(&self.nodes, self.root)?;
        let mut v = Vec::new();
        let mut unknown = BTreeSet::new();
        for (i, n) in self.nodes.iter().enumerate() {
            for &x in &n.label {
                if !h.contains_vertex(x) {
                    unknown.insert(x);
                }
            }
            if n.label.windows(2).any(|w| w[0] >= w[1]) {
                v.push(Violation::LabelMismatch {
                    node: i,
                    expected: n.label.iter().copied().collect::<BTreeSet<_>>().into_iter().collect(),
                    found: n.label.clone(),
                });
            }
        }
        v.extend(unknown.into_iter().map(|vertex| Violation::UnknownVertex { vertex }));
        for (i, n) in self.nodes.iter().enumerate() {
            if let Some(e) = n.edge {
                if e >= h.edges().len() {
                    v.push(Violation::EdgeOutOfRange { node: i, edge: e });
                }
            }
        }
        for (e, edge) in h.edges().iter().enumerate() {
            let covered = self
                .nodes
                .iter()
                .any(|n| n.is_leaf() && edge.iter().all(|x| n.label.binary_search(x).is_ok()));
            if !covered {
                v.push(Violation::EdgeNotCovered { edge: e });
            }
        }
        if let Ok(derived) = self.derived_labels() {
            for (i, (n, l)) in self.nodes.iter().zip(derived).enumerate() {
                if n.label != l {
                    v.push(Violation::LabelMismatch {
                        node: i,
                        expected: l,
                        found: n.label.clone(),
                    });
                }
            }
        }
        // Running intersection: the nodes holding x form a connected subtree
        // exactly when all but one of them have a parent that also holds x.
        let all: BTreeSet<Vertex> = self.nodes.iter().flat_map(|n| n.label.iter()).copied().collect();
        for x in all {
            let holding: Vec<usize> = (0..self.nodes.len())
                .filter(|&i| self.nodes[i].label.binary_search(&x).is_ok())
                .collect();
            let linked = holding
                .iter()
                .filter(|&&i| layout.parent[i].is_some_and(|p| self.nodes[p].label.binary_search(&x).is_ok()))
                .count();
            if linked + 1 != holding.len() {
                v.push(Violation::RunningIntersection { vertex: x });
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }

    fn raw_width(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.label.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn five_edges() -> Hypergraph {
        Hypergraph::from_edges(vec![vec![1, 2, 3], vec![1, 4], vec![2, 5], vec![3, 5], vec![4, 5]]).unwrap()
    }

    pub(crate) fn balanced_shape() -> Shape {
        use Shape::Leaf as L;
        Shape::node(Shape::node(Shape::node(L(0), L(1)), Shape::node(L(2), L(3))), L(4))
    }

    pub(crate) fn chain_shape() -> Shape {
        Shape::chain((0..5).map(Shape::Leaf)).unwrap()
    }

    #[test]
    fn balanced_branch_width() {
        let h = five_edges();
        let b = BranchDecomp::from_shape(&h, &balanced_shape());
        assert_eq!(b.validate(&h), Ok(()));
        assert_eq!(width_of(&b, &h).unwrap(), 3);
        assert!(b.nodes()[b.root()].label.is_empty());
    }

    #[test]
    fn chain_tree_width_and_labels() {
        let h = five_edges();
        let t = TreeDecomp::from_shape(&h, &chain_shape());
        assert_eq!(t.validate(&h), Ok(()));
        assert_eq!(width_of(&t, &h).unwrap(), 3);
        // internal nodes from the bottom of the chain upwards
        let internal: Vec<Vec<Vertex>> = t
            .nodes()
            .iter()
            .rev()
            .filter(|n| !n.is_leaf())
            .map(|n| n.label.clone())
            .collect();
        assert_eq!(
            internal,
            vec![vec![1, 2, 3, 4], vec![2, 3, 4, 5], vec![3, 4, 5], vec![4, 5]]
        );
    }

    #[test]
    fn disjoint_edges_branch_width_zero() {
        let h = Hypergraph::from_edges(vec![vec![1, 2], vec![3, 4]]).unwrap();
        let b = BranchDecomp::from_shape(&h, &Shape::node(Shape::Leaf(0), Shape::Leaf(1)));
        assert_eq!(width_of(&b, &h).unwrap(), 0);
    }

    #[test]
    fn branch_validation_reports_every_problem() {
        let h = five_edges();
        let mut nodes = BranchDecomp::from_shape(&h, &balanced_shape()).nodes().to_vec();
        let leaf = nodes.iter().position(|n| n.edge == Some(4)).unwrap();
        nodes[leaf].edge = Some(3);
        nodes[0].label = vec![9];
        let bad = BranchDecomp::from_parts(nodes, 0);
        let errs = bad.validate(&h).unwrap_err();
        assert!(errs.contains(&Violation::EdgeNotAtOneLeaf { edge: 3, leaves: 2 }));
        assert!(errs.contains(&Violation::EdgeNotAtOneLeaf { edge: 4, leaves: 0 }));
        assert!(matches!(width_of(&bad, &h), Err(DecompError::InvalidDecomposition(_))));
    }

    #[test]
    fn structural_problems_are_reported() {
        let leaf = |l: Vec<Vertex>| DecompNode {
            label: l,
            children: vec![],
            edge: None,
        };
        let t = TreeDecomp::from_parts(
            vec![
                DecompNode {
                    label: vec![],
                    children: vec![1, 1],
                    edge: None,
                },
                leaf(vec![1]),
                leaf(vec![2]),
            ],
            0,
        );
        let h = Hypergraph::from_edges(vec![vec![1], vec![2]]).unwrap();
        let errs = t.validate(&h).unwrap_err();
        assert!(errs.contains(&Violation::MultipleParents { node: 1 }));
        assert!(errs.contains(&Violation::Unreachable { node: 2 }));
    }

    #[test]
    fn running_intersection_violation() {
        // root(a(l{1,2}, l{3}), l{1}) with node a missing vertex 1
        let node = |label: Vec<Vertex>, children: Vec<usize>| DecompNode {
            label,
            children,
            edge: None,
        };
        let nodes = vec![
            node(vec![1], vec![1, 4]),
            node(vec![], vec![2, 3]),
            node(vec![1, 2], vec![]),
            node(vec![3], vec![]),
            node(vec![1], vec![]),
        ];
        let h = Hypergraph::from_edges(vec![vec![1, 2], vec![3], vec![1]]).unwrap();
        let t = TreeDecomp::from_parts(nodes.clone(), 0);
        let errs = t.validate(&h).unwrap_err();
        assert!(errs.contains(&Violation::RunningIntersection { vertex: 1 }));
        let fixed = TreeDecomp::from_leaf_labels(nodes, 0).unwrap();
        assert_eq!(fixed.validate(&h), Ok(()));
    }

    #[test]
    fn uncovered_edge_reported() {
        let h = Hypergraph::from_edges(vec![vec![1, 2], vec![2, 3]]).unwrap();
        let t = TreeDecomp::from_leaf_labels(
            vec![DecompNode {
                label: vec![1, 2],
                children: vec![],
                edge: None,
            }],
            0,
        )
        .unwrap();
        assert_eq!(t.validate(&h), Err(vec![Violation::EdgeNotCovered { edge: 1 }]));
    }
}
