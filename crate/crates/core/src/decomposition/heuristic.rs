use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::hypergraph::{primal_graph, ElimOrder, Hypergraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderHeuristic {
    /// Fewest fill edges added by the elimination.
    MinFill,
    /// Smallest current degree.
    MinDegree,
}

/// Greedy elimination order on the primal graph. Vertices in no edge come
/// first. Ties go to the smallest id, or to a seeded random pick among the
/// tied vertices when `seed` is given.
pub fn heuristic_order(h: &Hypergraph, method: OrderHeuristic, seed: Option<u64>) -> ElimOrder {
    let isolated = h.isolated();
    let g = primal_graph(h);
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = g
        .vertices()
        .filter(|v| isolated.binary_search(v).is_err())
        .map(|v| (v, g.neighbors(v).collect()))
        .collect();
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut order = isolated;
    while !adj.is_empty() {
        let score = |v: Vertex| -> usize {
            let ns = &adj[&v];
            match method {
                OrderHeuristic::MinDegree => ns.len(),
                OrderHeuristic::MinFill => {
                    let ns: Vec<Vertex> = ns.iter().copied().collect();
                    let mut fill = 0;
                    for (i, a) in ns.iter().enumerate() {
                        for b in &ns[i + 1..] {
                            if !adj[a].contains(b) {
                                fill += 1;
                            }
                        }
                    }
                    fill
                }
            }
        };
        let scored: Vec<(usize, Vertex)> = adj.keys().map(|&v| (score(v), v)).collect();
        let best = scored.iter().map(|s| s.0).min().expect("non-empty");
        let tied: Vec<Vertex> = scored.iter().filter(|s| s.0 == best).map(|s| s.1).collect();
        let v = match rng.as_mut() {
            Some(r) => *tied.choose(r).expect("non-empty"),
            None => tied[0],
        };
        let ns = adj.remove(&v).expect("vertex is live");
        for &a in &ns {
            let entry = adj.get_mut(&a).expect("neighbour is live");
            entry.remove(&v);
            entry.extend(ns.iter().copied().filter(|&b| b != a));
        }
        order.push(v);
    }
    ElimOrder::new(order)
}
