use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{parse_err, IoError};
use crate::decomposition::{BranchDecomp, DecompNode, ElimOrder, PseudoTree, TreeDecomp, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompKind {
    Order,
    Branch,
    Tree,
    PseudoTree,
}

impl fmt::Display for DecompKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecompKind::Order => "order",
            DecompKind::Branch => "branch",
            DecompKind::Tree => "tree",
            DecompKind::PseudoTree => "pseudotree",
        })
    }
}

/// Any of the width structures, as stored in a decomposition document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompDoc {
    Order(ElimOrder),
    Branch(BranchDecomp),
    Tree(TreeDecomp),
    PseudoTree(PseudoTree),
}

impl DecompDoc {
    pub fn kind(&self) -> DecompKind {
        match self {
            DecompDoc::Order(_) => DecompKind::Order,
            DecompDoc::Branch(_) => DecompKind::Branch,
            DecompDoc::Tree(_) => DecompKind::Tree,
            DecompDoc::PseudoTree(_) => DecompKind::PseudoTree,
        }
    }

    fn mismatch(&self, expected: DecompKind) -> IoError {
        IoError::KindMismatch {
            expected,
            found: self.kind(),
        }
    }

    pub fn into_order(self) -> Result<ElimOrder, IoError> {
        match self {
            DecompDoc::Order(o) => Ok(o),
            other => Err(other.mismatch(DecompKind::Order)),
        }
    }

    pub fn into_branch(self) -> Result<BranchDecomp, IoError> {
        match self {
            DecompDoc::Branch(b) => Ok(b),
            other => Err(other.mismatch(DecompKind::Branch)),
        }
    }

    pub fn into_tree(self) -> Result<TreeDecomp, IoError> {
        match self {
            DecompDoc::Tree(t) => Ok(t),
            other => Err(other.mismatch(DecompKind::Tree)),
        }
    }

    pub fn into_pseudo_tree(self) -> Result<PseudoTree, IoError> {
        match self {
            DecompDoc::PseudoTree(t) => Ok(t),
            other => Err(other.mismatch(DecompKind::PseudoTree)),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: usize,
    label: Vec<Vertex>,
    children: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edge: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum Doc {
    Order { order: Vec<Vertex> },
    Branch { root: usize, nodes: Vec<NodeDoc> },
    Tree { root: usize, nodes: Vec<NodeDoc> },
    Pseudotree { parent: BTreeMap<String, Option<Vertex>> },
}

fn to_docs(nodes: &[DecompNode]) -> Vec<NodeDoc> {
    nodes
        .iter()
        .enumerate()
        .map(|(id, n)| NodeDoc {
            id,
            label: n.label.clone(),
            children: n.children.clone(),
            edge: n.edge,
        })
        .collect()
}

fn from_docs(docs: Vec<NodeDoc>) -> Result<Vec<DecompNode>, IoError> {
    docs.into_iter()
        .enumerate()
        .map(|(i, d)| {
            if d.id != i {
                return Err(parse_err(0, format!("node at position {i} has id {}", d.id)));
            }
            Ok(DecompNode {
                label: d.label,
                children: d.children,
                edge: d.edge,
            })
        })
        .collect()
}

/// Pretty-printed JSON with a `kind` field.
pub fn serialize_decomp(d: &DecompDoc) -> String {
    let doc = match d {
        DecompDoc::Order(o) => Doc::Order {
            order: o.as_slice().to_vec(),
        },
        DecompDoc::Branch(b) => Doc::Branch {
            root: b.root(),
            nodes: to_docs(b.nodes()),
        },
        DecompDoc::Tree(t) => Doc::Tree {
            root: t.root(),
            nodes: to_docs(t.nodes()),
        },
        DecompDoc::PseudoTree(t) => Doc::Pseudotree {
            parent: t.parents().iter().map(|(v, p)| (v.to_string(), *p)).collect(),
        },
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
    s.push('\n');
    s
}

pub fn parse_decomp(text: &str) -> Result<DecompDoc, IoError> {
    let doc: Doc = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    Ok(match doc {
        Doc::Order { order } => DecompDoc::Order(ElimOrder::new(order)),
        Doc::Branch { root, nodes } => DecompDoc::Branch(BranchDecomp::from_parts(from_docs(nodes)?, root)),
        Doc::Tree { root, nodes } => DecompDoc::Tree(TreeDecomp::from_parts(from_docs(nodes)?, root)),
        Doc::Pseudotree { parent } => {
            let parent = parent
                .into_iter()
                .map(|(k, p)| {
                    k.parse::<Vertex>()
                        .map(|v| (v, p))
                        .map_err(|_| parse_err(0, format!("bad vertex `{k}` in parent map")))
                })
                .collect::<Result<_, _>>()?;
            DecompDoc::PseudoTree(PseudoTree::from_parents(parent))
        }
    })
}
