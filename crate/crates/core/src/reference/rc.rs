use super::{detached, instance_hypergraph, CacheMode, ReferenceError};
use crate::decomposition::{BranchDecomp, DecompError, Decomposition};
use crate::dpll::{AuditReport, CacheStore, SearchStats};
use crate::formula::Var;
use crate::semiring::{early_zero_cutoff, Factor, Semiring, SemiringInstance, Value};

struct Rc<'a> {
    b: &'a BranchDecomp,
    leaf_factor: Vec<Option<&'a Factor>>,
    /// Per internal node, the variables shared by both children.
    cutset: Vec<Vec<Var>>,
    inst: &'a SemiringInstance,
    s: Semiring,
    rho: Vec<Option<usize>>,
    mode: CacheMode,
    cache: CacheStore<Value>,
    stats: SearchStats,
    audit: Option<AuditReport>,
}

impl<'a> Rc<'a> {
    fn key(&self, node: usize) -> Vec<u8> {
        let mut key = format!("{node}|");
        for &v in &self.b.nodes()[node].label {
            key.push_str(&format!("{},", self.rho[v as usize].map_or(-1, |x| x as i64)));
        }
        key.into_bytes()
    }

    fn leaf(&mut self, f: &Factor) -> Value {
        let free: Vec<(Var, usize)> = f
            .scope()
            .iter()
            .zip(f.dims())
            .filter(|(v, _)| self.rho[**v as usize].is_none())
            .map(|(&v, &d)| (v, d))
            .collect();
        let mut total = self.s.zero();
        self.enumerate(&free, &mut |rc| {
            let v = f.eval_partial(&rc.rho).clone();
            total = rc.s.add(&total, &v);
        });
        total
    }

    /// Calls `body` once per instantiation of `vars`, last variable
    /// fastest, with the instantiation written into `rho`.
    fn enumerate(&mut self, vars: &[(Var, usize)], body: &mut dyn FnMut(&mut Self)) {
        for &(v, _) in vars {
            self.rho[v as usize] = Some(0);
        }
        'outer: loop {
            body(self);
            let mut i = vars.len();
            loop {
                if i == 0 {
                    break 'outer;
                }
                i -= 1;
                let (v, d) = vars[i];
                let x = self.rho[v as usize].expect("set above") + 1;
                if x < d {
                    self.rho[v as usize] = Some(x);
                    break;
                }
                self.rho[v as usize] = Some(0);
            }
        }
        for &(v, _) in vars {
            self.rho[v as usize] = None;
        }
    }

    fn solve(&mut self, node: usize) -> Value {
        self.stats.decisions += 1;
        if let Some(f) = self.leaf_factor[node] {
            return self.leaf(f);
        }
        let key = (self.mode == CacheMode::Cache).then(|| self.key(node));
        if let Some(k) = &key {
            if let Some(v) = self.cache.lookup(k).cloned() {
                self.check_hit(node, &v);
                return v;
            }
        }
        let (left, right) = {
            let c = &self.b.nodes()[node].children;
            (c[0], c[1])
        };
        let xs: Vec<(Var, usize)> = self.cutset[node]
            .iter()
            .filter(|&&v| self.rho[v as usize].is_none())
            .map(|&v| (v, self.inst.domain(v).expect("label variable")))
            .collect();
        let mut total = self.s.zero();
        self.enumerate(&xs, &mut |rc| {
            let l = rc.solve(left);
            if early_zero_cutoff(&l, rc.s) {
                return;
            }
            let r = rc.solve(right);
            total = rc.s.add(&total, &rc.s.mul(&l, &r));
        });
        if let Some(k) = key {
            self.cache.insert(k, total.clone());
        }
        total
    }

    fn check_hit(&mut self, node: usize, cached: &Value) {
        if self.audit.is_none() {
            return;
        }
        let mut fresh = Rc {
            b: self.b,
            leaf_factor: self.leaf_factor.clone(),
            cutset: self.cutset.clone(),
            inst: self.inst,
            s: self.s,
            rho: self.rho.clone(),
            mode: CacheMode::Space,
            cache: CacheStore::new(),
            stats: SearchStats::default(),
            audit: None,
        };
        let value = fresh.solve(node);
        let report = self.audit.as_mut().expect("audit enabled");
        report.checked += 1;
        if &value != cached {
            report.mismatches += 1;
        }
    }
}

/// Recursive conditioning over `b`, whose leaves carry the instance's
/// factors with a non-empty scope (edge `i` is the `i`-th such factor).
/// Each internal node enumerates the instantiations of the variables its
/// children share; in cache mode the value of a node is memoized on the
/// instantiation of its label.
pub fn rc_solve(
    inst: &SemiringInstance,
    b: &BranchDecomp,
    mode: CacheMode,
) -> Result<(Value, SearchStats), ReferenceError> {
    run(inst, b, mode, false).map(|(v, s, _)| (v, s))
}

/// As [`rc_solve`], re-solving every cache hit from scratch and counting
/// disagreements.
pub fn rc_solve_audited(
    inst: &SemiringInstance,
    b: &BranchDecomp,
    mode: CacheMode,
) -> Result<(Value, SearchStats, AuditReport), ReferenceError> {
    run(inst, b, mode, true)
}

fn run(
    inst: &SemiringInstance,
    b: &BranchDecomp,
    mode: CacheMode,
    audit: bool,
) -> Result<(Value, SearchStats, AuditReport), ReferenceError> {
    let s = inst.semiring();
    let (h, owner) = instance_hypergraph(inst);
    let outside = detached(inst, true);
    if h.edges().is_empty() {
        return Ok((outside, SearchStats::default(), AuditReport::default()));
    }
    b.validate(&h).map_err(DecompError::InvalidDecomposition)?;
    let nodes = b.nodes();
    let leaf_factor = nodes
        .iter()
        .map(|n| n.edge.map(|e| &inst.factors()[owner[e]]))
        .collect();
    let cutset = nodes
        .iter()
        .map(|n| match n.children.as_slice() {
            [l, r] => {
                let right = &nodes[*r].label;
                nodes[*l]
                    .label
                    .iter()
                    .copied()
                    .filter(|v| right.binary_search(v).is_ok())
                    .collect()
            }
            _ => vec![],
        })
        .collect();
    let max_var = inst.vars().last().map_or(0, |v| v.0) as usize;
    let mut rc = Rc {
        b,
        leaf_factor,
        cutset,
        inst,
        s,
        rho: vec![None; max_var + 1],
        mode,
        cache: CacheStore::new(),
        stats: SearchStats::default(),
        audit: audit.then(AuditReport::default),
    };
    let value = s.mul(&outside, &rc.solve(b.root()));
    let mut stats = rc.stats;
    stats.cache_hits = rc.cache.hits();
    stats.cache_stores = rc.cache.stores();
    stats.cache_peak = rc.cache.peak() as u64;
    Ok((value, stats, rc.audit.unwrap_or_default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{branchdec_from_order, ElimOrder, Shape};
    use crate::generators::gen_blocks;
    use crate::reference::tests::{cnf, ladder};
    use crate::reference::{default_branchdec, instance_hypergraph};
    use crate::semiring::{brute_force_sumprod, encode_cnf_as_instance};

    #[test]
    fn two_leaves() {
        let inst = cnf(4, &[&[1, 2], &[3, 4]], Semiring::SumProduct);
        let (h, _) = instance_hypergraph(&inst);
        let b = BranchDecomp::from_shape(&h, &Shape::node(Shape::Leaf(0), Shape::Leaf(1)));
        assert!(b.nodes()[b.root()].label.is_empty());
        for mode in [CacheMode::Space, CacheMode::Cache] {
            let (v, stats) = rc_solve(&inst, &b, mode).unwrap();
            assert_eq!(v, Value::int(9));
            assert_eq!(stats.decisions, 3);
        }
    }

    #[test]
    fn ladder_any_decomposition() {
        let inst = ladder(Semiring::SumProduct);
        let (h, _) = instance_hypergraph(&inst);
        for order in [
            vec![1, 2, 3, 4, 5, 6, 7],
            vec![7, 6, 5, 4, 3, 2, 1],
            vec![3, 7, 1, 5, 2, 6, 4],
        ] {
            let b = branchdec_from_order(&h, &ElimOrder::new(order)).unwrap();
            for mode in [CacheMode::Space, CacheMode::Cache] {
                let (v, _, audit) = rc_solve_audited(&inst, &b, mode).unwrap();
                assert_eq!(v, Value::int(61));
                assert_eq!(audit.mismatches, 0);
            }
        }
    }

    #[test]
    fn cache_never_calls_more() {
        let inst = encode_cnf_as_instance(&gen_blocks(4).unwrap(), Semiring::SumProduct).unwrap();
        let b = default_branchdec(&inst).unwrap();
        let (vs, space) = rc_solve(&inst, &b, CacheMode::Space).unwrap();
        let (vc, cache) = rc_solve(&inst, &b, CacheMode::Cache).unwrap();
        assert_eq!(vs, vc);
        assert_eq!(vs, brute_force_sumprod(&inst).unwrap());
        assert!(cache.decisions <= space.decisions);
    }

    #[test]
    fn broken_leaf_correspondence() {
        let inst = cnf(4, &[&[1, 2], &[3, 4]], Semiring::SumProduct);
        let (h, _) = instance_hypergraph(&inst);
        let good = BranchDecomp::from_shape(&h, &Shape::node(Shape::Leaf(0), Shape::Leaf(1)));
        let mut nodes = good.nodes().to_vec();
        for n in &mut nodes {
            if n.edge.is_some() {
                n.edge = Some(0);
            }
        }
        let b = BranchDecomp::from_parts(nodes, good.root());
        assert!(matches!(
            rc_solve(&inst, &b, CacheMode::Space),
            Err(ReferenceError::Decomp(DecompError::InvalidDecomposition(_)))
        ));
    }
}
