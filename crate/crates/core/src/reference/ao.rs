use std::collections::{BTreeMap, BTreeSet};

use super::{detached, instance_primal_graph, CacheMode, ReferenceError};
use crate::decomposition::{validate_pseudo_tree, DecompError, PseudoTree};
use crate::dpll::{CacheStore, SearchStats};
use crate::formula::Var;
use crate::semiring::{early_zero_cutoff, Semiring, SemiringInstance, Value};

/// Context labels and factor placement for AND/OR search on a pseudo tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AoLabels {
    /// Ancestors of each node sharing a factor with the node or one of its
    /// descendants.
    pub label: BTreeMap<Var, Vec<Var>>,
    /// Factors placed at each node: those whose deepest scope variable is
    /// the node.
    pub fns: BTreeMap<Var, Vec<usize>>,
    /// Zero-arity factors, which no node owns.
    pub scalars: Vec<usize>,
}

/// Places every factor at its deepest scope variable and derives the node
/// labels. Fails when a scope does not lie on one ancestor chain.
pub fn compute_ao_labels(inst: &SemiringInstance, t: &PseudoTree) -> Result<AoLabels, ReferenceError> {
    let mut label: BTreeMap<Var, BTreeSet<Var>> = t.vertices().map(|v| (v, BTreeSet::new())).collect();
    let mut fns: BTreeMap<Var, Vec<usize>> = t.vertices().map(|v| (v, vec![])).collect();
    let mut scalars = Vec::new();
    for (i, f) in inst.factors().iter().enumerate() {
        if f.is_scalar() {
            scalars.push(i);
            continue;
        }
        let violation = ReferenceError::FactorScopeViolation { factor: i };
        if f.scope().iter().any(|&v| !t.contains(v)) {
            return Err(violation);
        }
        let deepest = f
            .scope()
            .iter()
            .copied()
            .find(|&m| f.scope().iter().all(|&o| o == m || t.is_ancestor(o, m)))
            .ok_or(violation)?;
        fns.get_mut(&deepest).expect("tree vertex").push(i);
        let chain: Vec<Var> = std::iter::once(deepest).chain(t.ancestors(deepest)).collect();
        for (depth, &n) in chain.iter().enumerate() {
            let above = &chain[depth + 1..];
            let entry = label.get_mut(&n).expect("tree vertex");
            entry.extend(f.scope().iter().copied().filter(|s| above.contains(s)));
        }
    }
    Ok(AoLabels {
        label: label.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect(),
        fns,
        scalars,
    })
}

struct Ao<'a> {
    t: &'a PseudoTree,
    labels: &'a AoLabels,
    inst: &'a SemiringInstance,
    s: Semiring,
    rho: Vec<Option<usize>>,
    mode: CacheMode,
    cache: CacheStore<Value>,
    stats: SearchStats,
}

impl Ao<'_> {
    fn key(&self, n: Var) -> Vec<u8> {
        let mut key = format!("{n}|");
        for &v in &self.labels.label[&n] {
            key.push_str(&format!(
                "{},",
                self.rho[v as usize].expect("label variables are ancestors")
            ));
        }
        key.into_bytes()
    }

    fn solve(&mut self, n: Var) -> Value {
        self.stats.decisions += 1;
        let key = (self.mode == CacheMode::Cache).then(|| self.key(n));
        if let Some(k) = &key {
            if let Some(v) = self.cache.lookup(k) {
                return v.clone();
            }
        }
        let s = self.s;
        let mut total = s.zero();
        for d in 0..self.inst.domain(n).expect("tree vertex is a variable") {
            self.rho[n as usize] = Some(d);
            let mut alpha = s.one();
            for &i in &self.labels.fns[&n] {
                alpha = s.mul(&alpha, self.inst.factors()[i].eval_partial(&self.rho));
            }
            for &c in self.t.children(n) {
                if early_zero_cutoff(&alpha, s) {
                    break;
                }
                let v = self.solve(c);
                alpha = s.mul(&alpha, &v);
            }
            if early_zero_cutoff(&alpha, s) {
                self.stats.conflicts += 1;
            }
            total = s.add(&total, &alpha);
        }
        self.rho[n as usize] = None;
        if let Some(k) = key {
            self.cache.insert(k, total.clone());
        }
        total
    }
}

/// AND/OR search: each variable is enumerated in turn, multiplying the
/// factors it completes with the independent subproblems of its children.
/// Cache mode memoizes each node on the instantiation of its label.
pub fn ao_solve(
    inst: &SemiringInstance,
    t: &PseudoTree,
    mode: CacheMode,
) -> Result<(Value, SearchStats), ReferenceError> {
    validate_pseudo_tree(t, &instance_primal_graph(inst)).map_err(DecompError::InvalidPseudoTree)?;
    let labels = compute_ao_labels(inst, t)?;
    let s = inst.semiring();
    let max_var = inst.vars().last().map_or(0, |v| v.0) as usize;
    let mut ao = Ao {
        t,
        labels: &labels,
        inst,
        s,
        rho: vec![None; max_var + 1],
        mode,
        cache: CacheStore::new(),
        stats: SearchStats::default(),
    };
    let mut value = detached(inst, false);
    for r in t.roots() {
        if early_zero_cutoff(&value, s) {
            break;
        }
        let v = ao.solve(r);
        value = s.mul(&value, &v);
    }
    let mut stats = ao.stats;
    stats.cache_hits = ao.cache.hits();
    stats.cache_stores = ao.cache.stores();
    stats.cache_peak = ao.cache.peak() as u64;
    Ok((value, stats))
}
