//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Runs without the libtest harness so the lines always reach stdout:
//! `cargo test --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use dpllcache::decomposition::{
    induced_width, order_from_treedec, treedec_from_order, width_of, BranchDecomp, Decomposition, ElimOrder,
    Hypergraph, Shape, TreeDecomp, Vertex,
};
use dpllcache::dpll::{count_dpll, count_simple_cache, run_component_cache, OrderPolicy};
use dpllcache::engine::{count_formula, heuristic_static_order, Algorithm};
use dpllcache::formula::{Assignment, Formula, Var};
use dpllcache::generators::{gen_blocks, gen_pearls};
use dpllcache::reference::{
    ao_solve, default_branchdec, default_order, default_pseudo_tree, rc_solve, ve_solve, CacheMode,
};
use dpllcache::semiring::{
    brute_force_sumprod, make_instance_maxsum, make_instance_mpe, sumprod_dpll_cache, Semiring, SemiringInstance, Value,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn corpus() -> Vec<(String, Formula)> {
    let mut r = rng(0xacce);
    let mut out: Vec<(String, Formula)> = (0..200)
        .map(|i| (format!("random#{i}"), random_cnf(&mut r, 1, 14, 40)))
        .collect();
    for k in 1..=6 {
        out.push((format!("blocks({k})"), gen_blocks(k).unwrap()));
    }
    for n in [2, 3] {
        out.push((format!("pearls({n},{n})"), gen_pearls(n, n).unwrap()));
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let corpus = corpus();
    let policy = OrderPolicy::dynamic();
    for (name, f) in &corpus {
        let want = Value::Finite(BigRational::from_integer(brute_count(f)));
        for algo in Algorithm::COUNTING {
            let got = count_formula(f, algo, &policy, None).map_err(|e| format!("{name} {algo}: {e}"))?;
            ensure!(got.value == want, "{name} {algo}: {} != {want}", got.value);
        }
    }
    Ok(format!(
        "{} instances x {} algorithms",
        corpus.len(),
        Algorithm::COUNTING.len()
    ))
}

fn five_edges() -> Hypergraph {
    Hypergraph::from_edges(vec![vec![1, 2, 3], vec![1, 4], vec![2, 5], vec![3, 5], vec![4, 5]]).unwrap()
}

fn worked_examples() -> Outcome {
    use Shape::Leaf as L;
    let h = five_edges();
    let fig1 = Shape::node(Shape::node(Shape::node(L(0), L(1)), Shape::node(L(2), L(3))), L(4));
    let b = BranchDecomp::from_shape(&h, &fig1);
    ensure!(b.validate(&h).is_ok(), "balanced branch tree invalid");
    let bw = width_of(&b, &h).unwrap();
    ensure!(bw == 3, "balanced branch width {bw}");

    let pi = ElimOrder::new(vec![1, 2, 3, 4, 5]);
    let (ew, trace) = induced_width(&h, &pi).unwrap();
    ensure!(ew == 3, "induced width {ew}");
    let want: [&[Vec<Vertex>]; 5] = [
        h.edges(),
        &[vec![2, 3, 4], vec![2, 5], vec![3, 5], vec![4, 5]],
        &[vec![3, 4, 5], vec![3, 5], vec![4, 5]],
        &[vec![4, 5], vec![4, 5]],
        &[vec![5]],
    ];
    for (i, (got, want)) in trace.iter().zip(want).enumerate() {
        ensure!(got.edges() == want, "H_{} edges {:?}", 5 - i, got.edges());
    }

    let t = TreeDecomp::from_shape(&h, &Shape::chain((0..5).map(L)).unwrap());
    ensure!(t.validate(&h).is_ok(), "chain tree invalid");
    let tw = width_of(&t, &h).unwrap();
    ensure!(tw == 3, "chain tree width {tw}");

    let back = order_from_treedec(&h, &t).unwrap();
    ensure!(
        back.as_slice() == [1, 2, 3, 4, 5],
        "order from chain tree: {:?}",
        back.as_slice()
    );
    let ew_back = induced_width(&h, &back).unwrap().0;
    ensure!(ew_back <= tw && ew_back == 3, "order from tree has width {ew_back}");
    let t_back = treedec_from_order(&h, &pi).unwrap();
    let tw_back = width_of(&t_back, &h).unwrap();
    ensure!(tw_back <= ew && tw_back == 3, "tree from order has width {tw_back}");
    ensure!(bw - 1 <= tw && tw <= 2 * bw, "bw {bw} tw {tw}");
    Ok(format!("bw={bw} ew={ew} tw={tw}, trace H_5..H_1 exact"))
}

fn random_shape(r: &mut rand_chacha::ChaCha8Rng, leaves: usize) -> Shape {
    let mut parts: Vec<Shape> = (0..leaves).map(Shape::Leaf).collect();
    while parts.len() > 1 {
        let a = parts.swap_remove(r.gen_range(0..parts.len()));
        let b = parts.swap_remove(r.gen_range(0..parts.len()));
        parts.push(Shape::node(a, b));
    }
    parts.pop().unwrap()
}

fn random_hypergraph(r: &mut rand_chacha::ChaCha8Rng) -> Hypergraph {
    let nv = r.gen_range(1..=10u32);
    let ne = r.gen_range(1..=12);
    let edges = (0..ne)
        .map(|_| {
            let size = r.gen_range(1..=4.min(nv));
            let mut e: Vec<Vertex> = Vec::new();
            while e.len() < size as usize {
                let v = r.gen_range(1..=nv);
                if !e.contains(&v) {
                    e.push(v);
                }
            }
            e
        })
        .collect();
    Hypergraph::from_edges(edges).unwrap()
}

fn width_round_trip() -> Outcome {
    let mut r = rng(0x1e44a);
    for i in 0..100 {
        let h = random_hypergraph(&mut r);
        let t = TreeDecomp::from_shape(&h, &random_shape(&mut r, h.edges().len()));
        ensure!(t.validate(&h).is_ok(), "#{i}: random tree invalid");
        let tw = width_of(&t, &h).unwrap();
        let ew = induced_width(&h, &order_from_treedec(&h, &t).unwrap()).unwrap().0;
        ensure!(ew <= tw, "#{i}: order from tree has width {ew} > {tw}");

        let mut vs = h.vertices().to_vec();
        for j in (1..vs.len()).rev() {
            vs.swap(j, r.gen_range(0..=j));
        }
        let pi = ElimOrder::new(vs);
        let ew = induced_width(&h, &pi).unwrap().0;
        let td = treedec_from_order(&h, &pi).unwrap();
        ensure!(td.validate(&h).is_ok(), "#{i}: tree from order invalid");
        let tw = width_of(&td, &h).unwrap();
        ensure!(tw <= ew, "#{i}: tree from order has width {tw} > {ew}");
    }
    Ok("100 hypergraphs, both directions".into())
}

fn caching_separation() -> Outcome {
    let p = OrderPolicy::dynamic();
    let mut rows = Vec::new();
    for k in 2..=10u32 {
        let f = gen_blocks(k).unwrap();
        let (_, plain) = count_dpll(&f, &p).unwrap();
        let (_, simple) = count_simple_cache(&f, &p).unwrap();
        let (_, comp) = run_component_cache(&f, &p, false, false)
            .map(|o| (o.value, o.stats))
            .unwrap();
        ensure!(plain.decisions >= 1 << k, "k={k}: dpll decisions {}", plain.decisions);
        ensure!(
            comp.decisions <= 20 * k as u64,
            "k={k}: component decisions {}",
            comp.decisions
        );
        if k >= 3 {
            ensure!(
                simple.decisions < plain.decisions,
                "k={k}: simple {} vs dpll {}",
                simple.decisions,
                plain.decisions
            );
        }
        rows.push(format!(
            "{k}:{}/{}/{}",
            plain.decisions, simple.decisions, comp.decisions
        ));
    }
    Ok(format!("k:dpll/simple/comp {}", rows.join(" ")))
}

fn space_discipline() -> Outcome {
    let p = OrderPolicy::dynamic();
    let mut instances = corpus();
    for k in 7..=10 {
        instances.push((format!("blocks({k})"), gen_blocks(k).unwrap()));
    }
    let mut strict = Vec::new();
    for (name, f) in &instances {
        let cache = run_component_cache(f, &p, false, false).unwrap();
        let space = run_component_cache(f, &p, true, false).unwrap();
        ensure!(space.value == cache.value, "{name}: {} != {}", space.value, cache.value);
        for key in &space.final_cache_keys {
            ensure!(
                space.top_level_keys.contains(key),
                "{name}: non-top-level key left in the cache"
            );
        }
        ensure!(
            space.stats.cache_peak <= cache.stats.cache_peak,
            "{name}: peak {} > {}",
            space.stats.cache_peak,
            cache.stats.cache_peak
        );
        if let Some(k) = name
            .strip_prefix("blocks(")
            .and_then(|s| s.trim_end_matches(')').parse::<u32>().ok())
        {
            if k >= 4 {
                ensure!(
                    space.stats.cache_peak < cache.stats.cache_peak,
                    "{name}: peak {} not below {}",
                    space.stats.cache_peak,
                    cache.stats.cache_peak
                );
                strict.push(format!("{k}:{}<{}", space.stats.cache_peak, cache.stats.cache_peak));
            }
        }
    }
    Ok(format!(
        "{} instances; blocks peaks {}",
        instances.len(),
        strict.join(" ")
    ))
}

fn pearls_ordering() -> Outcome {
    let mut dynamic = Vec::new();
    let mut fixed = Vec::new();
    for n in 3..=6u32 {
        let f = gen_pearls(n, n).unwrap();
        let d = run_component_cache(&f, &OrderPolicy::dynamic(), false, false).unwrap();
        let s = run_component_cache(&f, &OrderPolicy::static_list(heuristic_static_order(&f)), false, false).unwrap();
        ensure!(
            d.value == BigRational::from_integer(0.into()),
            "SP({n},{n}) dynamic count {}",
            d.value
        );
        ensure!(
            s.value == BigRational::from_integer(0.into()),
            "SP({n},{n}) static count {}",
            s.value
        );
        dynamic.push(d.stats.decisions);
        fixed.push(s.stats.decisions);
    }
    let trend = dynamic[2] <= fixed[2] && dynamic[3] <= fixed[3];
    Ok(format!(
        "counts 0; decisions n=3..6 dynamic {dynamic:?} static {fixed:?}; trend on n=5,6 {}",
        if trend { "holds" } else { "NOT observed" }
    ))
}

fn weighted_consistency() -> Outcome {
    let mut r = rng(0x3e16);
    for i in 0..50 {
        let mut f = random_cnf(&mut r, 1, 12, 30);
        random_weights(&mut f, &mut r);
        let got = run_component_cache(&f, &OrderPolicy::dynamic(), false, false)
            .unwrap()
            .value;
        let want = brute_weighted(&f);
        ensure!(got == want, "#{i}: {got} != {want}");
        f.clear_weights();
        let p = run_component_cache(&f, &OrderPolicy::dynamic(), false, false)
            .unwrap()
            .value;
        let scaled = p * BigRational::from_integer(BigInt::from(2u8).pow(f.num_vars()));
        ensure!(
            scaled == BigRational::from_integer(brute_count(&f)),
            "#{i}: unweighted {scaled}"
        );
    }
    Ok("50 weighted instances".into())
}

fn all_solvers(inst: &SemiringInstance) -> Result<Vec<(&'static str, Value)>, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    let b = default_branchdec(inst).unwrap_or_else(|| BranchDecomp::from_parts(vec![], 0));
    let t = default_pseudo_tree(inst);
    Ok(vec![
        ("ve", ve_solve(inst, &default_order(inst)).map_err(|e| err(&e))?),
        ("rc-space", rc_solve(inst, &b, CacheMode::Space).map_err(|e| err(&e))?.0),
        ("rc-cache", rc_solve(inst, &b, CacheMode::Cache).map_err(|e| err(&e))?.0),
        ("ao-space", ao_solve(inst, &t, CacheMode::Space).map_err(|e| err(&e))?.0),
        ("ao-cache", ao_solve(inst, &t, CacheMode::Cache).map_err(|e| err(&e))?.0),
        (
            "dpll-cache",
            sumprod_dpll_cache(inst, &OrderPolicy::dynamic())
                .map_err(|e| err(&e))?
                .0,
        ),
    ])
}

fn evidence(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> (Assignment, Vec<(Var, usize)>) {
    let mut a = Assignment::new(n as u32);
    let mut pairs = Vec::new();
    for v in 1..=n as Var {
        if r.gen_bool(0.25) {
            let x = r.gen_bool(0.5);
            a.assign(v, x).unwrap();
            pairs.push((v, x as usize));
        }
    }
    (a, pairs)
}

fn semiring_consensus() -> Outcome {
    let mut r = rng(0x5e41);
    for s in [Semiring::SumProduct, Semiring::Boolean] {
        for i in 0..100 {
            let inst = random_instance(&mut r, 10, s);
            let want = brute_force_sumprod(&inst).map_err(|e| e.to_string())?;
            if s == Semiring::SumProduct {
                ensure!(
                    want == Value::Finite(exhaustive_sum_product(&inst)),
                    "{s} #{i}: brute force disagrees"
                );
            }
            for (name, got) in all_solvers(&inst).map_err(|e| format!("{s} #{i}: {e}"))? {
                ensure!(got == want, "{s} #{i} {name}: {got} != {want}");
            }
        }
    }
    for i in 0..20 {
        for s in [Semiring::MaxProduct, Semiring::MaxSum] {
            let base = random_instance(&mut r, 10, s);
            let n = base.num_vars();
            let (a, pairs) = evidence(&mut r, n);
            let domains = vec![2; n];
            let factors = base.factors().to_vec();
            let (inst, want) = if s == Semiring::MaxProduct {
                let want = Value::Finite(exhaustive_max_product(&base, &pairs));
                (
                    make_instance_mpe(&domains, factors, &a).map_err(|e| e.to_string())?,
                    want,
                )
            } else {
                let want = exhaustive_max_sum(&base, &pairs);
                (
                    make_instance_maxsum(&domains, factors, &a).map_err(|e| e.to_string())?,
                    want,
                )
            };
            let brute = brute_force_sumprod(&inst).map_err(|e| e.to_string())?;
            ensure!(brute == want, "{s} #{i}: brute {brute} != {want}");
            for (name, got) in all_solvers(&inst).map_err(|e| format!("{s} #{i}: {e}"))? {
                ensure!(got == want, "{s} #{i} {name}: {got} != {want}");
            }
        }
    }
    Ok("200 count/bool instances x 7 solvers, 20 MPE + 20 max-sum".into())
}

fn semiring_laws() -> Outcome {
    let mut r = rng(0x1a75);
    for s in Semiring::ALL {
        let (zero, one) = (s.zero(), s.one());
        for i in 0..1000 {
            let [a, b, c] = [0; 3].map(|_| random_entry(&mut r, s));
            let ok = [
                ("add commutes", s.add(&a, &b) == s.add(&b, &a)),
                ("mul commutes", s.mul(&a, &b) == s.mul(&b, &a)),
                ("add associates", s.add(&s.add(&a, &b), &c) == s.add(&a, &s.add(&b, &c))),
                ("mul associates", s.mul(&s.mul(&a, &b), &c) == s.mul(&a, &s.mul(&b, &c))),
                (
                    "distributes",
                    s.mul(&a, &s.add(&b, &c)) == s.add(&s.mul(&a, &b), &s.mul(&a, &c)),
                ),
                ("zero is identity", s.add(&a, &zero) == a),
                ("one is identity", s.mul(&a, &one) == a),
                ("zero annihilates", s.mul(&a, &zero) == zero),
            ];
            for (law, holds) in ok {
                ensure!(holds, "{s} sample {i}: {law} fails for {a}, {b}, {c}");
            }
        }
    }
    Ok(format!("{} semirings x 1000 samples", Semiring::ALL.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("worked examples", worked_examples),
        ("width round trip", width_round_trip),
        ("caching separation", caching_separation),
        ("space-mode discipline", space_discipline),
        ("pearls ordering benchmark", pearls_ordering),
        ("weighted consistency", weighted_consistency),
        ("semiring consensus", semiring_consensus),
        ("semiring laws", semiring_laws),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS [{}] {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
