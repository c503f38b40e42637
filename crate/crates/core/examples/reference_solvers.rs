//! The reference solvers on a formula encoded as a counting instance:
//! variable elimination, recursive conditioning over a branch
//! decomposition, and AND/OR search over a pseudo tree, in both cache modes.

use dpllcache::generators::gen_random;
use dpllcache::reference::{
    ao_solve, compute_ao_labels, default_branchdec, default_order, default_pseudo_tree, rc_solve, ve_solve, CacheMode,
};
use dpllcache::semiring::{encode_cnf_as_instance, Semiring};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = gen_random(16, 30, 3, 11)?;
    let inst = encode_cnf_as_instance(&f, Semiring::SumProduct)?;

    let pi = default_order(&inst);
    println!("ve            {}", ve_solve(&inst, &pi)?);

    let b = default_branchdec(&inst).expect("the instance has factors");
    for mode in [CacheMode::Space, CacheMode::Cache] {
        let (v, s) = rc_solve(&inst, &b, mode)?;
        println!(
            "rc  {mode:<9?} {v}  calls {:>6}  hits {:>5}  peak {:>5}",
            s.decisions, s.cache_hits, s.cache_peak
        );
    }

    let t = default_pseudo_tree(&inst);
    for mode in [CacheMode::Space, CacheMode::Cache] {
        let (v, s) = ao_solve(&inst, &t, mode)?;
        println!(
            "ao  {mode:<9?} {v}  calls {:>6}  hits {:>5}  peak {:>5}",
            s.decisions, s.cache_hits, s.cache_peak
        );
    }

    let labels = compute_ao_labels(&inst, &t)?;
    let widest = labels.label.values().map(Vec::len).max().unwrap_or(0);
    println!("pseudo tree roots {:?}, widest context {widest}", t.roots());
    Ok(())
}
