//! Decision counts of component caching on the string-of-pearls family
//! and on disjoint blocks, for dynamic and static variable orders.
//!
//! `cargo run --release --example pearls_benchmark -- 6` extends the pearls
//! series up to the given size.

use dpllcache::dpll::{count_dpll, count_simple_cache, run_component_cache, OrderPolicy};
use dpllcache::engine::heuristic_static_order;
use dpllcache::generators::{gen_blocks, gen_pearls};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let top: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    println!("pearls SP(n,n)       count  dynamic   static");
    for n in 3..=top {
        let f = gen_pearls(n, n)?;
        let d = run_component_cache(&f, &OrderPolicy::dynamic(), false, false)?;
        let s = run_component_cache(&f, &OrderPolicy::static_list(heuristic_static_order(&f)), false, false)?;
        assert_eq!(d.value, s.value);
        println!(
            "n={n:<18} {:>5} {:>8} {:>8}",
            d.value, d.stats.decisions, s.stats.decisions
        );
    }

    println!("\nblocks k   dpll  simple  comp  peak(cache)  peak(space)");
    for k in 2..=10 {
        let f = gen_blocks(k)?;
        let p = OrderPolicy::dynamic();
        let plain = count_dpll(&f, &p)?.1;
        let simple = count_simple_cache(&f, &p)?.1;
        let cache = run_component_cache(&f, &p, false, false)?.stats;
        let space = run_component_cache(&f, &p, true, false)?.stats;
        println!(
            "{k:<8} {:>6} {:>7} {:>5} {:>12} {:>12}",
            plain.decisions, simple.decisions, cache.decisions, cache.cache_peak, space.cache_peak
        );
    }
    Ok(())
}
