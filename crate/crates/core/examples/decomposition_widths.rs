//! Width toolkit: elimination orders, tree and branch decompositions and
//! pseudo trees built from the same hypergraph, with their widths.

use dpllcache::decomposition::{
    branchdec_from_order, heuristic_order, induced_width, order_from_treedec, primal_graph, pseudo_tree_from_order,
    treedec_from_order, width_of, ElimOrder, Hypergraph, OrderHeuristic,
};
use dpllcache::io::{serialize_decomp, DecompDoc};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = Hypergraph::from_edges(vec![vec![1, 2, 3], vec![1, 4], vec![2, 5], vec![3, 5], vec![4, 5]])?;

    let pi = ElimOrder::new(vec![1, 2, 3, 4, 5]);
    let (ew, trace) = induced_width(&h, &pi)?;
    println!("induced width under {:?}: {ew}", pi.as_slice());
    for (i, g) in trace.iter().enumerate() {
        println!("  H_{}: {:?}", trace.len() - i, g.edges());
    }

    let t = treedec_from_order(&h, &pi)?;
    let b = branchdec_from_order(&h, &pi)?;
    println!("tree width {} / branch width {}", width_of(&t, &h)?, width_of(&b, &h)?);
    println!(
        "order read back from the tree: {:?}",
        order_from_treedec(&h, &t)?.as_slice()
    );

    for method in [OrderHeuristic::MinFill, OrderHeuristic::MinDegree] {
        let o = heuristic_order(&h, method, None);
        println!("{method:?}: {:?} width {}", o.as_slice(), induced_width(&h, &o)?.0);
    }

    let pt = pseudo_tree_from_order(&primal_graph(&h), &pi)?;
    print!("{}", serialize_decomp(&DecompDoc::PseudoTree(pt)));
    Ok(())
}
