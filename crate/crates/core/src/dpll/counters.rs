use std::rc::Rc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{CacheStore, Chooser, DpllError, OrderPolicy, SearchStats};
use crate::formula::{
    propagate, to_components, Component, Formula, Lit, ObviousStatus, PropagationStatus, Residual, Var,
};

/// Cache hits re-solved from scratch in audit mode.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub checked: u64,
    pub mismatches: u64,
}

/// Full result of a caching run.
#[derive(Clone, Debug)]
pub struct CountOutcome {
    pub value: BigRational,
    pub stats: SearchStats,
    pub audit: AuditReport,
    /// Keys left in the cache when the run ended.
    pub final_cache_keys: Vec<Vec<u8>>,
    /// Keys of the components present before the first decision.
    pub top_level_keys: Vec<Vec<u8>>,
    /// Branch variables in the order they were chosen.
    pub decision_trace: Vec<Var>,
}

struct Ctx<'a> {
    weights: Vec<[BigRational; 2]>,
    chooser: Chooser,
    up: bool,
    stats: SearchStats,
    trace: Vec<Var>,
    audit: Option<AuditReport>,
    _f: &'a Formula,
}

/// A branch outcome: the weight of literals forced by propagation and the
/// reduced formula, or `None` on a conflict.
type Branch = Option<(BigRational, Residual)>;

impl<'a> Ctx<'a> {
    fn new(f: &'a Formula, policy: &OrderPolicy, audit: bool) -> Result<Self, DpllError> {
        let weights = (0..=f.num_vars())
            .map(|v| {
                if v == 0 {
                    [BigRational::one(), BigRational::one()]
                } else {
                    [f.weight_of(v, false), f.weight_of(v, true)]
                }
            })
            .collect();
        Ok(Ctx {
            weights,
            chooser: Chooser::new(policy, f.num_vars())?,
            up: policy.unit_propagation,
            stats: SearchStats::default(),
            trace: Vec::new(),
            audit: audit.then(AuditReport::default),
            _f: f,
        })
    }

    fn weight(&self, lit: Lit) -> &BigRational {
        &self.weights[lit.var() as usize][lit.is_positive() as usize]
    }

    fn choose(&mut self, parts: &[&Residual]) -> Result<(Var, usize), DpllError> {
        let out = self.chooser.choose(parts)?;
        self.stats.decisions += 1;
        self.trace.push(out.0);
        Ok(out)
    }

    /// Applies unit propagation (when enabled) to `r`.
    fn settle(&mut self, r: Residual) -> Branch {
        if r.status() == ObviousStatus::HasEmptyClause {
            self.stats.conflicts += 1;
            return None;
        }
        if !self.up {
            return Some((BigRational::one(), r));
        }
        let p = propagate(&r);
        self.stats.up_propagations += p.forced.len() as u64;
        if p.status == PropagationStatus::Conflict {
            self.stats.conflicts += 1;
            return None;
        }
        let mut w = BigRational::one();
        for lit in &p.forced {
            w *= self.weight(*lit);
        }
        Some((w, p.residual))
    }

    fn branch(&mut self, r: &Residual, lit: Lit) -> Branch {
        self.settle(r.condition(lit))
    }

    fn split(&mut self, r: &Residual) -> Vec<Rc<Component>> {
        let comps = to_components(r);
        self.stats.components_created += comps.len() as u64;
        comps.into_iter().map(Rc::new).collect()
    }

    fn dpll(&mut self, r: &Residual) -> Result<BigRational, DpllError> {
        match r.status() {
            ObviousStatus::EmptyFormula => return Ok(BigRational::one()),
            ObviousStatus::HasEmptyClause => return Ok(BigRational::zero()),
            ObviousStatus::NotObvious => {}
        }
        let (x, _) = self.choose(&[r])?;
        let mut total = BigRational::zero();
        for value in [false, true] {
            let lit = Lit::new(x, value);
            let w = self.weight(lit).clone();
            if w.is_zero() {
                continue;
            }
            if let Some((forced, sub)) = self.branch(r, lit) {
                total += w * forced * self.dpll(&sub)?;
            }
        }
        Ok(total)
    }

    fn sat(&mut self, r: &Residual) -> Result<bool, DpllError> {
        match r.status() {
            ObviousStatus::EmptyFormula => return Ok(true),
            ObviousStatus::HasEmptyClause => return Ok(false),
            ObviousStatus::NotObvious => {}
        }
        let (x, _) = self.choose(&[r])?;
        for value in [false, true] {
            if let Some((_, sub)) = self.branch(r, Lit::new(x, value)) {
                if self.sat(&sub)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Re-solves `r` with plain search and compares against `cached`.
    fn audit(&mut self, r: &Residual, cached: &BigRational) {
        if self.audit.is_none() {
            return;
        }
        let mut fresh = Ctx {
            weights: self.weights.clone(),
            chooser: Chooser::new(&OrderPolicy::dynamic(), 0).expect("dynamic chooser"),
            up: true,
            stats: SearchStats::default(),
            trace: Vec::new(),
            audit: None,
            _f: self._f,
        };
        let value = fresh.dpll(r).expect("non-obvious residual has a variable");
        let report = self.audit.as_mut().expect("audit enabled");
        report.checked += 1;
        if &value != cached {
            report.mismatches += 1;
        }
    }

    fn simple(&mut self, r: &Residual, cache: &mut CacheStore<BigRational>) -> Result<BigRational, DpllError> {
        match r.status() {
            ObviousStatus::EmptyFormula => return Ok(BigRational::one()),
            ObviousStatus::HasEmptyClause => return Ok(BigRational::zero()),
            ObviousStatus::NotObvious => {}
        }
        let key = r.key();
        if let Some(v) = cache.lookup(&key) {
            let v = v.clone();
            self.audit(r, &v);
            return Ok(v);
        }
        let (x, _) = self.choose(&[r])?;
        let mut total = BigRational::zero();
        for value in [false, true] {
            let lit = Lit::new(x, value);
            let w = self.weight(lit).clone();
            if w.is_zero() {
                continue;
            }
            if let Some((forced, sub)) = self.branch(r, lit) {
                total += w * forced * self.simple(&sub, cache)?;
            }
        }
        cache.insert(key, total.clone());
        Ok(total)
    }

    /// Value of a set of disjoint components, caching each component's
    /// value once both of its branches are solved.
    fn components(
        &mut self,
        phi: &[Rc<Component>],
        cache: &mut CacheStore<BigRational>,
        space_mode: bool,
    ) -> Result<BigRational, DpllError> {
        // InCache(Φ): known when every member is known or one is known zero.
        let mut known = BigRational::one();
        let mut open: Vec<Rc<Component>> = Vec::new();
        for c in phi {
            match cache.lookup(c.key()) {
                Some(v) if v.is_zero() => {
                    let v = v.clone();
                    self.audit(c.residual(), &v);
                    return Ok(BigRational::zero());
                }
                Some(v) => {
                    let v = v.clone();
                    self.audit(c.residual(), &v);
                    known *= v;
                }
                None => open.push(c.clone()),
            }
        }
        if open.is_empty() {
            return Ok(known);
        }

        let parts: Vec<&Residual> = open.iter().map(|c| c.residual()).collect();
        let (x, idx) = self.choose(&parts)?;
        let target = open.remove(idx);
        let rest = open;

        let mut p = BigRational::zero();
        let mut children: Vec<Rc<Component>> = Vec::new();
        let mut sibling_zero = false;
        for value in [false, true] {
            let lit = Lit::new(x, value);
            let w = self.weight(lit).clone();
            if w.is_zero() {
                continue;
            }
            let Some((forced, sub)) = self.branch(target.residual(), lit) else {
                continue;
            };
            let psi = self.split(&sub);
            let mut next = rest.clone();
            next.extend(psi.iter().cloned());
            self.components(&next, cache, space_mode)?;
            // read this branch's value before the other branch can evict it
            match set_value(&psi, cache) {
                Some(v) => p += w * forced * v,
                None => sibling_zero = true,
            }
            children.extend(psi);
        }
        if !sibling_zero {
            cache.insert(target.key().to_vec(), p.clone());
        }
        if space_mode {
            for c in &children {
                cache.remove(c.key());
            }
        }
        if sibling_zero || p.is_zero() {
            // A sibling known to be zero, or this component is zero.
            return Ok(BigRational::zero());
        }
        match set_value(&rest, cache) {
            Some(v) => Ok(known * p * v),
            None => Ok(known * p * self.components(&rest, cache, space_mode)?),
        }
    }
}

/// Product of cached values, `Some(0)` if any member is known zero, `None`
/// if some member is unknown and none is zero.
fn set_value(set: &[Rc<Component>], cache: &CacheStore<BigRational>) -> Option<BigRational> {
    let mut out = BigRational::one();
    let mut missing = false;
    for c in set {
        match cache.peek(c.key()) {
            Some(v) if v.is_zero() => return Some(BigRational::zero()),
            Some(v) => out *= v,
            None => missing = true,
        }
    }
    (!missing).then_some(out)
}

fn finish_stats<V: Clone + PartialEq + std::fmt::Debug>(mut stats: SearchStats, cache: &CacheStore<V>) -> SearchStats {
    stats.cache_hits = cache.hits();
    stats.cache_stores = cache.stores();
    stats.cache_peak = cache.peak() as u64;
    stats
}

/// Satisfiability by backtracking; stops at the first satisfying path.
pub fn sat_dpll(f: &Formula, policy: &OrderPolicy) -> Result<(bool, SearchStats), DpllError> {
    let mut ctx = Ctx::new(f, policy, false)?;
    let sat = match ctx.settle(f.residual()) {
        None => false,
        Some((_, r)) => ctx.sat(&r)?,
    };
    Ok((sat, ctx.stats))
}

/// Probability of `f` by plain backtracking, no caching.
pub fn count_dpll(f: &Formula, policy: &OrderPolicy) -> Result<(BigRational, SearchStats), DpllError> {
    let mut ctx = Ctx::new(f, policy, false)?;
    let value = match ctx.settle(f.residual()) {
        None => BigRational::zero(),
        Some((w, r)) => w * ctx.dpll(&r)?,
    };
    Ok((value, ctx.stats))
}

/// Probability of `f`, caching every residual formula by its key.
pub fn count_simple_cache(f: &Formula, policy: &OrderPolicy) -> Result<(BigRational, SearchStats), DpllError> {
    run_simple_cache(f, policy, false).map(|o| (o.value, o.stats))
}

pub fn run_simple_cache(f: &Formula, policy: &OrderPolicy, audit: bool) -> Result<CountOutcome, DpllError> {
    let mut ctx = Ctx::new(f, policy, audit)?;
    let mut cache = CacheStore::new();
    let (value, top) = match ctx.settle(f.residual()) {
        None => (BigRational::zero(), vec![]),
        Some((w, r)) => {
            let key = r.key();
            (w * ctx.simple(&r, &mut cache)?, vec![key])
        }
    };
    Ok(CountOutcome {
        value,
        stats: finish_stats(ctx.stats, &cache),
        audit: ctx.audit.unwrap_or_default(),
        final_cache_keys: sorted_keys(&cache),
        top_level_keys: top,
        decision_trace: ctx.trace,
    })
}

/// Probability of `f` with component caching. In space mode the entries of
/// a component's sub-components are dropped once the component is solved.
pub fn count_component_cache(
    f: &Formula,
    policy: &OrderPolicy,
    space_mode: bool,
) -> Result<(BigRational, SearchStats), DpllError> {
    run_component_cache(f, policy, space_mode, false).map(|o| (o.value, o.stats))
}

pub fn run_component_cache(
    f: &Formula,
    policy: &OrderPolicy,
    space_mode: bool,
    audit: bool,
) -> Result<CountOutcome, DpllError> {
    let mut ctx = Ctx::new(f, policy, audit)?;
    let mut cache = CacheStore::new();
    let (value, top) = match ctx.settle(f.residual()) {
        None => (BigRational::zero(), vec![]),
        Some((w, r)) => {
            let phi = ctx.split(&r);
            let keys = phi.iter().map(|c| c.key().to_vec()).collect();
            (w * ctx.components(&phi, &mut cache, space_mode)?, keys)
        }
    };
    Ok(CountOutcome {
        value,
        stats: finish_stats(ctx.stats, &cache),
        audit: ctx.audit.unwrap_or_default(),
        final_cache_keys: sorted_keys(&cache),
        top_level_keys: top,
        decision_trace: ctx.trace,
    })
}

fn sorted_keys(cache: &CacheStore<BigRational>) -> Vec<Vec<u8>> {
    let mut keys: Vec<Vec<u8>> = cache.keys().cloned().collect();
    keys.sort();
    keys
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpll::OrderVariant;
    use crate::formula::probability_to_count;
    use crate::generators::{gen_blocks, gen_pearls};
    use num_bigint::BigInt;

    fn f(n: u32, clauses: &[&[i32]]) -> Formula {
        let cs: Vec<Vec<i32>> = clauses.iter().map(|c| c.to_vec()).collect();
        Formula::from_dimacs_clauses(n, &cs).unwrap()
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn ladder() -> Formula {
        f(
            7,
            &[
                &[1, 2, 3, 7],
                &[-1, 2, 3],
                &[1, -2, 3],
                &[4, 5, 6, 7],
                &[-4, 5, 6],
                &[4, -5, 6],
            ],
        )
    }

    fn policies() -> Vec<OrderPolicy> {
        let mut out = Vec::new();
        for up in [true, false] {
            out.push(OrderPolicy::dynamic().with_unit_propagation(up));
            out.push(OrderPolicy::random(3).with_unit_propagation(up));
        }
        out
    }

    fn all_counts(g: &Formula, p: &OrderPolicy) -> Vec<BigRational> {
        vec![
            count_dpll(g, p).unwrap().0,
            count_simple_cache(g, p).unwrap().0,
            count_component_cache(g, p, false).unwrap().0,
            count_component_cache(g, p, true).unwrap().0,
        ]
    }

    #[test]
    fn empty_and_contradictory() {
        let empty = f(3, &[]);
        let (sat, stats) = sat_dpll(&empty, &OrderPolicy::dynamic()).unwrap();
        assert!(sat);
        assert_eq!(stats.decisions, 0);
        for p in policies() {
            assert!(all_counts(&empty, &p).iter().all(|v| v.is_one()));
        }
        let contra = f(1, &[&[1], &[-1]]);
        assert!(!sat_dpll(&contra, &OrderPolicy::dynamic()).unwrap().0);
        for p in policies() {
            assert!(all_counts(&contra, &p).iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn empty_clause_has_no_decisions() {
        let g = Formula::new(1, vec![vec![]]).unwrap();
        let (v, stats) = count_simple_cache(&g, &OrderPolicy::dynamic()).unwrap();
        assert!(v.is_zero());
        assert_eq!(stats.decisions, 0);
    }

    #[test]
    fn two_disjoint_clauses() {
        let g = f(4, &[&[1, 2], &[3, 4]]);
        for p in policies() {
            assert!(all_counts(&g, &p).iter().all(|v| *v == q(9, 16)));
        }
    }

    #[test]
    fn weighted_unit() {
        let g = f(1, &[&[1]]).with_weight(1, q(1, 3)).unwrap();
        for p in policies() {
            assert!(all_counts(&g, &p).iter().all(|v| *v == q(1, 3)));
        }
    }

    #[test]
    fn simple_cache_reuses_repeated_residual() {
        let g = f(4, &[&[1, 2], &[3, 4]]);
        for up in [true, false] {
            let p = OrderPolicy::static_list(vec![1, 2, 3, 4]).with_unit_propagation(up);
            let (v, stats) = count_simple_cache(&g, &p).unwrap();
            assert_eq!(v, q(9, 16));
            assert!(stats.cache_hits >= 1);
        }
    }

    #[test]
    fn ladder_component_cache() {
        let g = ladder();
        let (v, stats) = count_component_cache(&g, &OrderPolicy::dynamic(), false).unwrap();
        assert_eq!(probability_to_count(&v, 7).unwrap(), BigInt::from(61));
        assert!(stats.cache_hits >= 2, "hits = {}", stats.cache_hits);
        let (v, _) = count_component_cache(&g, &OrderPolicy::dynamic(), true).unwrap();
        assert_eq!(v, q(61, 128));
    }

    #[test]
    fn blocks_scale_linearly_with_components() {
        for k in 2..=8u32 {
            let g = gen_blocks(k).unwrap();
            let (v, comp) = count_component_cache(&g, &OrderPolicy::dynamic(), false).unwrap();
            assert_eq!(probability_to_count(&v, 3 * k).unwrap(), BigInt::from(7u64.pow(k)));
            let (_, plain) = count_dpll(&g, &OrderPolicy::dynamic()).unwrap();
            assert!(comp.decisions <= 3 * k as u64);
            assert!(plain.decisions >= 1 << k);
        }
    }

    #[test]
    fn space_mode_keeps_only_top_level() {
        for g in [ladder(), gen_blocks(5).unwrap(), f(4, &[&[1, 2], &[-2, 3], &[3, 4]])] {
            let cache = run_component_cache(&g, &OrderPolicy::dynamic(), false, false).unwrap();
            let space = run_component_cache(&g, &OrderPolicy::dynamic(), true, false).unwrap();
            assert_eq!(cache.value, space.value);
            assert!(space.final_cache_keys.iter().all(|k| space.top_level_keys.contains(k)));
            assert!(space.stats.cache_peak <= cache.stats.cache_peak);
        }
    }

    #[test]
    fn audit_finds_no_mismatch() {
        for g in [ladder(), gen_blocks(4).unwrap(), gen_pearls(2, 2).unwrap()] {
            for space in [false, true] {
                let o = run_component_cache(&g, &OrderPolicy::dynamic(), space, true).unwrap();
                assert_eq!(o.audit.mismatches, 0);
            }
            let o = run_simple_cache(&g, &OrderPolicy::dynamic(), true).unwrap();
            assert_eq!(o.audit.mismatches, 0);
        }
        let o = run_component_cache(&ladder(), &OrderPolicy::dynamic(), false, true).unwrap();
        assert!(o.audit.checked >= 2);
    }

    #[test]
    fn pearls_unsat() {
        let g = gen_pearls(3, 3).unwrap();
        assert!(!sat_dpll(&g, &OrderPolicy::dynamic()).unwrap().0);
        for p in policies() {
            assert!(all_counts(&g, &p).iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn static_trace_follows_list() {
        let g = gen_pearls(4, 4).unwrap();
        let order: Vec<Var> = (1..=g.num_vars()).rev().collect();
        let p = OrderPolicy::static_list(order.clone());
        let o = run_component_cache(&g, &p, false, false).unwrap();
        assert!(o.value.is_zero());
        assert!(matches!(p.variant, OrderVariant::StaticList(_)));
        // every branch variable is the first listed variable still open,
        // so along any path the trace only moves forward in the list
        assert!(!o.decision_trace.is_empty());
        assert!(o.decision_trace.iter().all(|v| order.contains(v)));
    }

    #[test]
    fn runs_are_deterministic() {
        let g = gen_pearls(3, 3).unwrap();
        for p in [OrderPolicy::dynamic(), OrderPolicy::random(11)] {
            let a = count_component_cache(&g, &p, false).unwrap();
            let b = count_component_cache(&g, &p, false).unwrap();
            assert_eq!(a.1, b.1);
        }
    }
}
