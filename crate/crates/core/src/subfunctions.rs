//! Subfunctions by constant substitution, dominants and separable sets.
//!
//! A simple subfunction fixes one *essential* variable to a constant and
//! drops it from the argument list. Subfunctions are compared as mappings on
//! their essential variables (the "core"): `f(x1=0, x2=1)` and `f(x1=0, x3=1)`
//! are the same subfunction when both are `x^3` of the remaining variable, and
//! all constant subfunctions with the same value coincide whatever their arity.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{stride, FiniteFunction};
use crate::minors::{essential_mask, essential_vars, identify};
use crate::symmetric::is_symmetric;
use crate::util::binomial;

/// `f(x_i = c)`, arity `n - 1`, remaining positions in their original order.
pub fn restrict(f: &FiniteFunction, i: usize, c: u8) -> Result<FiniteFunction> {
    let (k, n) = (f.k(), f.arity());
    if i >= n {
        return Err(Error::Domain(format!("position {i} out of range for arity {n}")));
    }
    if c as usize >= k {
        return Err(Error::Domain(format!("constant {c} is not below k={k}")));
    }
    Ok(FiniteFunction::from_raw(k, n - 1, restrict_table(f.table(), k, n, i, c)))
}

pub(crate) fn restrict_table(table: &[u8], k: usize, n: usize, i: usize, c: u8) -> Vec<u8> {
    let s = stride(k, n, i);
    let block = s * k;
    let offset = c as usize * s;
    let mut out = Vec::with_capacity(table.len() / k);
    for hi in (0..table.len()).step_by(block) {
        out.extend_from_slice(&table[hi + offset..hi + offset + s]);
    }
    out
}

/// Drops every fictive position. Returns the kept (essential) positions and the reduced function.
pub fn essential_core(f: &FiniteFunction) -> (Vec<usize>, FiniteFunction) {
    let (k, n) = (f.k(), f.arity());
    let mask = essential_mask(f.table(), k, n);
    if mask.count_ones() as usize == n {
        return ((0..n).collect(), f.clone());
    }
    let mut table = f.table().to_vec();
    let mut arity = n;
    for i in (0..n).rev() {
        if mask >> i & 1 == 0 {
            table = restrict_table(&table, k, arity, i, 0);
            arity -= 1;
        }
    }
    let kept = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    (kept, FiniteFunction::from_raw(k, arity, table))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubfunctionRecord {
    /// The subfunction at its largest order, fixed positions removed.
    pub function: FiniteFunction,
    /// Original (0-based) positions of the arguments of `function`.
    pub remaining_vars: Vec<usize>,
    /// `ord(g)`: the longest restriction chain reaching this subfunction.
    pub max_order: usize,
}

impl SubfunctionRecord {
    pub fn core(&self) -> FiniteFunction {
        essential_core(&self.function).1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparabilityReport {
    /// Separable sets as sorted 0-based positions, always including the empty set.
    pub separable_sets: Vec<Vec<usize>>,
    pub sep_count: usize,
    /// `sub(f)`: distinct subfunctions as mappings.
    pub sub_count: usize,
    /// Distinct subfunctions when the variables they depend on are also told apart.
    pub positional_sub_count: usize,
}

struct Closure {
    records: Vec<SubfunctionRecord>,
    /// `Ess(f)` and `Ess(g)` for every `g` in `Sub(f)`, in original positions.
    ess_sets: BTreeSet<Vec<usize>>,
    positional_count: usize,
}

/// Breadth-first over partial assignments; each step fixes one essential variable.
fn closure(f: &FiniteFunction) -> Closure {
    let (k, n) = (f.k(), f.arity());
    let start = ((0..n).collect::<Vec<usize>>(), f.clone());
    let mut seen: HashSet<(Vec<usize>, FiniteFunction)> = HashSet::new();
    let mut queue = vec![start];
    let mut cursor = 0;
    let mut by_core: HashMap<FiniteFunction, usize> = HashMap::new();
    let mut records: Vec<SubfunctionRecord> = Vec::new();
    let mut positional: HashSet<(Vec<usize>, FiniteFunction)> = HashSet::new();
    let mut ess_sets = BTreeSet::new();

    while cursor < queue.len() {
        let (vars, g) = queue[cursor].clone();
        cursor += 1;
        let (local_ess, core) = essential_core(&g);
        let ess_set: Vec<usize> = local_ess.iter().map(|&p| vars[p]).collect();
        ess_sets.insert(ess_set.clone());
        if cursor > 1 {
            let order = n - g.arity();
            match by_core.get(&core) {
                Some(&r) if records[r].max_order >= order => {}
                Some(&r) => {
                    records[r] =
                        SubfunctionRecord { function: g.clone(), remaining_vars: vars.clone(), max_order: order }
                }
                None => {
                    by_core.insert(core.clone(), records.len());
                    records.push(SubfunctionRecord {
                        function: g.clone(),
                        remaining_vars: vars.clone(),
                        max_order: order,
                    });
                }
            }
            positional.insert((ess_set, core));
        }
        for &p in &local_ess {
            let mut child_vars = vars.clone();
            child_vars.remove(p);
            for c in 0..k {
                let child =
                    FiniteFunction::from_raw(k, g.arity() - 1, restrict_table(g.table(), k, g.arity(), p, c as u8));
                let node = (child_vars.clone(), child);
                if seen.insert(node.clone()) {
                    queue.push(node);
                }
            }
        }
    }
    records.sort_by(|a, b| a.max_order.cmp(&b.max_order).then_with(|| a.function.cmp(&b.function)));
    Closure { records, ess_sets, positional_count: positional.len() }
}

/// `Sub(f)` with the order of each subfunction.
pub fn all_subfunctions(f: &FiniteFunction) -> Vec<SubfunctionRecord> {
    closure(f).records
}

/// `sub(f)`.
pub fn sub_count(f: &FiniteFunction) -> usize {
    closure(f).records.len()
}

/// `Sep(f)`: the essential-variable sets realised by subfunctions, with `f`
/// itself counted as its own order-0 subfunction and the empty set always present.
pub fn separable_sets(f: &FiniteFunction) -> SeparabilityReport {
    let mut c = closure(f);
    c.ess_sets.insert(Vec::new());
    let separable_sets: Vec<Vec<usize>> = c.ess_sets.into_iter().collect();
    SeparabilityReport {
        sep_count: separable_sets.len(),
        separable_sets,
        sub_count: c.records.len(),
        positional_sub_count: c.positional_count,
    }
}

/// `sub_k^n = C(k,1) + ... + C(k,n-1)`.
pub fn sub_bound(n: usize, k: usize) -> u128 {
    (1..n).map(|i| binomial(k as u64, i as u64)).sum()
}

/// Constants `c` for which fixing the last variable to `c` leaves a constant.
fn positional_dominants(f: &FiniteFunction) -> BTreeSet<u8> {
    let (k, n) = (f.k(), f.arity());
    (0..k as u8).filter(|&c| n <= 1 || restrict(f, n - 1, c).map(|g| g.is_constant()).unwrap_or(false)).collect()
}

/// `Dom(f)` of a symmetric function. Every constant dominates when `n <= 1`.
pub fn dominants(f: &FiniteFunction) -> Result<BTreeSet<u8>> {
    if !is_symmetric(f) {
        return Err(Error::NotSymmetric);
    }
    Ok(positional_dominants(f))
}

/// `Wdom(f)`: dominants of the identification minor `f(x, x, x_3, ..., x_n)`
/// taken on its essential variables.
pub fn weak_dominants(f: &FiniteFunction) -> Result<BTreeSet<u8>> {
    if !is_symmetric(f) {
        return Err(Error::NotSymmetric);
    }
    let pos = essential_vars(f);
    if pos.len() < 2 {
        return Err(Error::UndefinedGap { ess: pos.len() });
    }
    let minor = identify(f, pos[1], pos[0])?;
    let (_, core) = essential_core(&minor);
    if !is_symmetric(&core) {
        return Err(Error::Precondition("identification minor is not symmetric".into()));
    }
    Ok(positional_dominants(&core))
}

/// Core-level subfunction closure memoised across calls.
///
/// Works on cores only, so it yields `Sub(f)` as mappings with their orders
/// but not the positions they depend on. Safe to share between threads.
#[derive(Default)]
pub struct SubfunctionCache {
    memo: DashMap<FiniteFunction, Arc<Vec<(FiniteFunction, usize)>>>,
}

impl SubfunctionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// Every subfunction core of `f` with its order, sorted. `f` itself is not memoised.
    pub fn subfunction_orders(&self, f: &FiniteFunction) -> Vec<(FiniteFunction, usize)> {
        let (_, core) = essential_core(f);
        self.compute(&core)
    }

    fn memoized(&self, core: &FiniteFunction) -> Arc<Vec<(FiniteFunction, usize)>> {
        if let Some(hit) = self.memo.get(core) {
            return hit.clone();
        }
        let v = Arc::new(self.compute(core));
        self.memo.insert(core.clone(), v.clone());
        v
    }

    fn compute(&self, core: &FiniteFunction) -> Vec<(FiniteFunction, usize)> {
        let (k, n) = (core.k(), core.arity());
        let mut children = Vec::with_capacity(n * k);
        for p in 0..n {
            for c in 0..k as u8 {
                let child = FiniteFunction::from_raw(k, n - 1, restrict_table(core.table(), k, n, p, c));
                let (_, child_core) = essential_core(&child);
                if !children.contains(&child_core) {
                    children.push(child_core);
                }
            }
        }
        let subs: Vec<_> = children.iter().map(|c| self.memoized(c)).collect();
        let mut orders: HashMap<&FiniteFunction, usize> = HashMap::new();
        for (child, below) in children.iter().zip(&subs) {
            let e = orders.entry(child).or_insert(1);
            *e = (*e).max(1);
            for (g, o) in below.iter() {
                let e = orders.entry(g).or_insert(0);
                *e = (*e).max(o + 1);
            }
        }
        let mut out: Vec<(FiniteFunction, usize)> = orders.into_iter().map(|(g, o)| (g.clone(), o)).collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric::orbit_sum;

    fn orbit012() -> FiniteFunction {
        orbit_sum(3, &[0, 1, 2], 3).unwrap()
    }

    fn remark_fixture() -> FiniteFunction {
        orbit_sum(3, &[0, 1, 3], 4).unwrap().add(&orbit_sum(3, &[0, 2, 3], 4).unwrap()).unwrap()
    }

    fn unary_indicator(k: usize, c: u8) -> FiniteFunction {
        FiniteFunction::from_fn(k, 1, |p| (p[0] == c) as usize).unwrap()
    }

    #[test]
    fn restrict_examples() {
        let g = restrict(&orbit012(), 0, 0).unwrap();
        assert_eq!(g.arity(), 2);
        for p in crate::function::points(3, 2) {
            let expect = (p == [1, 2] || p == [2, 1]) as u8;
            assert_eq!(g.eval(&p).unwrap(), expect);
        }

        let f = remark_fixture();
        let twice = |c1: u8, c2: u8| restrict(&restrict(&f, 0, c1).unwrap(), 0, c2).unwrap();
        assert_eq!(twice(0, 1), unary_indicator(4, 3));
        assert_eq!(twice(0, 2), unary_indicator(4, 3));
        assert_eq!(twice(1, 3), unary_indicator(4, 0));
        assert_eq!(twice(2, 3), unary_indicator(4, 0));
        assert_eq!(twice(1, 2), FiniteFunction::constant(4, 1, 0).unwrap());

        assert!(restrict(&f, 3, 0).is_err());
        assert!(restrict(&f, 0, 4).is_err());
    }

    #[test]
    fn essential_core_drops_fictive() {
        let f = FiniteFunction::from_fn(3, 3, |p| p[1] as usize).unwrap();
        let (kept, core) = essential_core(&f);
        assert_eq!(kept, vec![1]);
        assert_eq!(core, FiniteFunction::projection(3, 1, 0).unwrap());
    }

    #[test]
    fn subfunctions_of_orbit() {
        let subs = all_subfunctions(&orbit012());
        assert_eq!(subs.len(), 8);
        let by_order = |o| subs.iter().filter(|r| r.max_order == o).count();
        assert_eq!(by_order(1), 3);
        // three non-constant unary plus the constants 0 and 1
        assert_eq!(by_order(2), 3);
        assert_eq!(by_order(3), 2);
        for r in &subs {
            assert_eq!(r.max_order, 3 - r.function.arity());
            assert_eq!(r.remaining_vars.len(), r.function.arity());
        }
    }

    #[test]
    fn subfunctions_of_constant() {
        assert!(all_subfunctions(&FiniteFunction::constant(3, 2, 1).unwrap()).is_empty());
        assert!(all_subfunctions(&FiniteFunction::constant(3, 0, 1).unwrap()).is_empty());
    }

    #[test]
    fn sub_bound_examples() {
        assert_eq!(sub_bound(3, 4), 10);
        assert_eq!(sub_bound(3, 3), 6);
        assert_eq!(sub_bound(1, 5), 0);
    }

    #[test]
    fn dominant_examples() {
        assert!(dominants(&orbit012()).unwrap().is_empty());
        let f4 = orbit_sum(3, &[0, 1, 2], 4).unwrap();
        assert_eq!(dominants(&f4).unwrap(), BTreeSet::from([3]));
        let all4: BTreeSet<u8> = (0..4).collect();
        assert_eq!(dominants(&FiniteFunction::constant(4, 2, 1).unwrap()).unwrap(), all4);
        let point = FiniteFunction::new(2, 2, vec![0, 1, 0, 0]).unwrap();
        assert_eq!(dominants(&point), Err(Error::NotSymmetric));
    }

    #[test]
    fn weak_dominant_examples() {
        let twice_sum = FiniteFunction::from_fn(4, 4, |p| 2 * p.iter().map(|&c| c as usize).sum::<usize>()).unwrap();
        assert!(weak_dominants(&twice_sum).unwrap().is_empty());
        let all3: BTreeSet<u8> = (0..3).collect();
        assert_eq!(weak_dominants(&orbit012()).unwrap(), all3);
        assert!(matches!(
            weak_dominants(&FiniteFunction::projection(3, 2, 0).unwrap()),
            Err(Error::UndefinedGap { .. })
        ));
    }

    #[test]
    fn separable_examples() {
        let r = separable_sets(&orbit012());
        assert_eq!(r.sep_count, 8);
        assert_eq!(r.sub_count, 8);

        let proj = FiniteFunction::new(2, 2, vec![0, 0, 1, 1]).unwrap();
        assert_eq!(separable_sets(&proj).separable_sets, vec![vec![], vec![0]]);

        let xor = FiniteFunction::new(2, 2, vec![0, 1, 1, 0]).unwrap();
        assert_eq!(separable_sets(&xor).separable_sets, vec![vec![], vec![0], vec![0, 1], vec![1]]);

        let c = separable_sets(&FiniteFunction::constant(3, 2, 0).unwrap());
        assert_eq!((c.sep_count, c.sub_count), (1, 0));
    }

    #[test]
    fn cache_agrees_with_breadth_first_closure() {
        let cache = SubfunctionCache::new();
        for f in [orbit012(), remark_fixture()] {
            let mut direct: Vec<_> = all_subfunctions(&f).into_iter().map(|r| (r.core(), r.max_order)).collect();
            direct.sort();
            assert_eq!(cache.subfunction_orders(&f), direct);
        }
    }
}
