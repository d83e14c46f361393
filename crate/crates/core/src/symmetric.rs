//! Symmetric functions: symmetry test, multiset representation, orbit sums,
//! the normal-form constructors and the pairwise decomposition of gap-2 functions.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{classify_tuple, embeds, index_of, points, stride, table_len, FiniteFunction, TupleClass};
use crate::minors::{essential_mask, gap, gap_index, in_class};
use crate::util::multisets;

fn swap_invariant(table: &[u8], k: usize, n: usize, i: usize, j: usize) -> bool {
    let (si, sj) = (stride(k, n, i), stride(k, n, j));
    (0..table.len()).all(|m| {
        let di = (m / si) % k;
        let dj = (m / sj) % k;
        di >= dj || table[m] == table[m - di * si + dj * si - dj * sj + di * sj]
    })
}

/// Invariance under every permutation of the essential positions.
///
/// Adjacent transpositions of the sorted essential positions generate that group.
pub fn is_symmetric(f: &FiniteFunction) -> bool {
    let (k, n) = (f.k(), f.arity());
    let mask = essential_mask(f.table(), k, n);
    let pos: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
    pos.windows(2).all(|w| swap_invariant(f.table(), k, n, w[0], w[1]))
}

/// Invariance under every permutation of all positions.
pub(crate) fn is_fully_symmetric(f: &FiniteFunction) -> bool {
    let (k, n) = (f.k(), f.arity());
    (1..n).all(|i| swap_invariant(f.table(), k, n, i - 1, i))
}

/// Maps each point of `K^n` to the rank of its sorted multiset.
#[derive(Debug, Clone)]
pub struct MultisetIndex {
    k: usize,
    n: usize,
    classes: Vec<Vec<u8>>,
    point_class: Vec<u32>,
}

impl MultisetIndex {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        let len = table_len(k, n)?;
        let classes = multisets(k, n);
        let rank: HashMap<&[u8], u32> = classes.iter().enumerate().map(|(r, m)| (m.as_slice(), r as u32)).collect();
        let mut point_class = Vec::with_capacity(len);
        for mut p in points(k, n) {
            p.sort_unstable();
            point_class.push(rank[p.as_slice()]);
        }
        Ok(Self { k, n, classes, point_class })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Multisets in lexicographic order of their sorted tuples.
    pub fn classes(&self) -> &[Vec<u8>] {
        &self.classes
    }

    pub fn rank(&self, multiset: &[u8]) -> Option<usize> {
        self.classes.binary_search_by(|m| m.as_slice().cmp(multiset)).ok()
    }

    /// Writes the table for per-multiset `values` into `out`.
    pub fn expand_into(&self, values: &[u8], out: &mut Vec<u8>) {
        out.clear();
        out.extend(self.point_class.iter().map(|&c| values[c as usize]));
    }
}

/// A symmetric function given by one value per size-n multiset, in [`MultisetIndex`] order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SymmetricSpecDocument", into = "SymmetricSpecDocument")]
pub struct SymmetricSpec {
    pub k: usize,
    pub n: usize,
    pub values: Vec<u8>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultisetValue {
    pub multiset: Vec<u8>,
    pub value: u8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetricSpecDocument {
    pub k: usize,
    pub n: usize,
    pub values: Vec<MultisetValue>,
}

impl TryFrom<SymmetricSpecDocument> for SymmetricSpec {
    type Error = Error;

    fn try_from(doc: SymmetricSpecDocument) -> Result<Self> {
        let classes = multisets(doc.k, doc.n);
        if doc.values.len() != classes.len() {
            return Err(Error::InvalidSpec(format!(
                "expected {} multiset values for k={}, n={}, got {}",
                classes.len(),
                doc.k,
                doc.n,
                doc.values.len()
            )));
        }
        let mut values = vec![None; classes.len()];
        for mv in doc.values {
            let mut m = mv.multiset.clone();
            m.sort_unstable();
            let r = classes.binary_search(&m).map_err(|_| {
                Error::InvalidSpec(format!("{:?} is not a size-{} multiset over K", mv.multiset, doc.n))
            })?;
            if mv.value as usize >= doc.k {
                return Err(Error::InvalidSpec(format!("value {} is not below k={}", mv.value, doc.k)));
            }
            if values[r].replace(mv.value).is_some() {
                return Err(Error::InvalidSpec(format!("multiset {m:?} listed twice")));
            }
        }
        Ok(SymmetricSpec { k: doc.k, n: doc.n, values: values.into_iter().map(|v| v.unwrap()).collect() })
    }
}

impl From<SymmetricSpec> for SymmetricSpecDocument {
    fn from(spec: SymmetricSpec) -> Self {
        let values = multisets(spec.k, spec.n)
            .into_iter()
            .zip(spec.values)
            .map(|(multiset, value)| MultisetValue { multiset, value })
            .collect();
        Self { k: spec.k, n: spec.n, values }
    }
}

pub fn expand(spec: &SymmetricSpec) -> Result<FiniteFunction> {
    let index = MultisetIndex::new(spec.k, spec.n)?;
    if spec.values.len() != index.classes.len() {
        return Err(Error::InvalidSpec(format!("expected {} values, got {}", index.classes.len(), spec.values.len())));
    }
    if spec.values.iter().any(|&v| v as usize >= spec.k) {
        return Err(Error::InvalidSpec(format!("spec value not below k={}", spec.k)));
    }
    let mut table = Vec::new();
    index.expand_into(&spec.values, &mut table);
    Ok(FiniteFunction::from_raw(spec.k, spec.n, table))
}

/// Inverse of [`expand`]; `f` must be invariant under all permutations of its positions.
pub fn compress(f: &FiniteFunction) -> Result<SymmetricSpec> {
    if !is_fully_symmetric(f) {
        return Err(Error::NotSymmetric);
    }
    let values = multisets(f.k(), f.arity())
        .iter()
        .map(|m| f.table()[index_of(m, f.k()).expect("multiset entries are below k")])
        .collect();
    Ok(SymmetricSpec { k: f.k(), n: f.arity(), values })
}

/// `S(n, alpha)`: the sum modulo k of the point indicators of all `n!` rearrangements of `alpha`.
pub fn orbit_sum(n: usize, alpha: &[u8], k: usize) -> Result<FiniteFunction> {
    if alpha.len() != n {
        return Err(Error::Domain(format!("alpha has {} entries, expected {n}", alpha.len())));
    }
    if n > 10 {
        return Err(Error::Domain(format!("orbit sums are limited to n <= 10, got {n}")));
    }
    let mut table = vec![0u8; table_len(k, n)?];
    let mut permuted = vec![0u8; n];
    for perm in (0..n).permutations(n) {
        for (slot, &p) in permuted.iter_mut().zip(&perm) {
            *slot = alpha[p];
        }
        let m = index_of(&permuted, k)?;
        table[m] = ((table[m] as usize + 1) % k) as u8;
    }
    Ok(FiniteFunction::from_raw(k, n, table))
}

/// Coefficients indexed by subsets of K, written as strictly increasing tuples.
pub type SetCoefficients = BTreeMap<Vec<u8>, u8>;

mod set_coefficients {
    use super::SetCoefficients;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        set: Vec<u8>,
        value: u8,
    }

    pub fn serialize<S: Serializer>(map: &SetCoefficients, s: S) -> Result<S::Ok, S::Error> {
        map.iter().map(|(set, &value)| Entry { set: set.clone(), value }).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<SetCoefficients, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        let mut map = SetCoefficients::new();
        for mut e in entries {
            e.set.sort_unstable();
            if map.insert(e.set.clone(), e.value).is_some() {
                return Err(serde::de::Error::custom(format!("set {:?} listed twice", e.set)));
            }
        }
        Ok(map)
    }
}

/// `f = a0 * [Eq indicator] + sum_beta b_beta * S(n, beta)`; absent sets have coefficient 0.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapNSpec {
    pub a0: u8,
    #[serde(with = "set_coefficients", default)]
    pub b: SetCoefficients,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gap2Family {
    /// `f(c, c, d) = a_d`: the lone value picks the coefficient.
    Minority,
    /// `f(c, c, d) = a_c`: the doubled value picks the coefficient.
    Majority,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TernaryGap2Spec {
    pub family: Gap2Family,
    pub a: Vec<u8>,
    #[serde(with = "set_coefficients", default)]
    pub b: SetCoefficients,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSpec {
    pub coefficients: Vec<u8>,
    #[serde(default)]
    pub constant: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionPair {
    /// Arity `n - 2`.
    pub g: FiniteFunction,
    /// Arity `n`, zero on every Eq point.
    pub h: FiniteFunction,
}

fn check_value(v: u8, k: usize, what: &str) -> Result<()> {
    if (v as usize) < k {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{what} = {v} is not below k={k}")))
    }
}

fn check_sets(b: &SetCoefficients, k: usize, size: usize) -> Result<()> {
    for (set, &v) in b {
        let increasing = set.windows(2).all(|w| w[0] < w[1]);
        if set.len() != size || !increasing || set.iter().any(|&c| c as usize >= k) {
            return Err(Error::InvalidSpec(format!("{set:?} is not a {size}-element subset of K")));
        }
        check_value(v, k, &format!("b{set:?}"))?;
    }
    Ok(())
}

/// `sum_beta b_beta * S(n, beta)` over the listed sets.
fn orbit_part(k: usize, n: usize, b: &SetCoefficients) -> Result<FiniteFunction> {
    let mut f = FiniteFunction::constant(k, n, 0)?;
    for (set, &v) in b {
        if v != 0 {
            f = f.add(&orbit_sum(n, set, k)?.scale(v))?;
        }
    }
    Ok(f)
}

/// Indicator of a set of points, scaled by `c`.
fn point_sum(k: usize, n: usize, c: u8, mut pred: impl FnMut(&[u8]) -> bool) -> Result<FiniteFunction> {
    FiniteFunction::from_fn(k, n, |p| if pred(p) { c as usize } else { 0 })
}

/// Symmetric function of arity `n` with gap `n`: constant `a0` on Eq points, `b[set]` on Dis points.
pub fn construct_gap_n(k: usize, n: usize, spec: &GapNSpec) -> Result<FiniteFunction> {
    if n < 2 || n > k {
        return Err(Error::InvalidSpec(format!("need 2 <= n <= k, got n={n}, k={k}")));
    }
    check_value(spec.a0, k, "a0")?;
    check_sets(&spec.b, k, n)?;
    // coefficients of unlisted sets are 0
    let listed_all = spec.b.len() as u128 == crate::util::binomial(k as u64, n as u64);
    let mut coeffs: Vec<u8> = spec.b.values().copied().collect();
    coeffs.push(spec.a0);
    if !listed_all {
        coeffs.push(0);
    }
    if coeffs.iter().all_equal() {
        return Err(Error::InvalidSpec("at least two of the coefficients a0, b_beta must be distinct".into()));
    }
    let eq_part = point_sum(k, n, spec.a0, |p| classify_tuple(p) == TupleClass::Eq)?;
    eq_part.add(&orbit_part(k, n, &spec.b)?)
}

/// The two ternary gap-2 families.
///
/// `f(i,i,i) = a_i`; on `{c,c,d}` patterns the minority family takes `a_d` and
/// the majority family `a_c`; Dis points take `b[set]`.
pub fn construct_gap2_ternary(k: usize, spec: &TernaryGap2Spec) -> Result<FiniteFunction> {
    if k < 3 {
        return Err(Error::InvalidSpec(format!("need k >= 3, got {k}")));
    }
    if spec.a.len() != k {
        return Err(Error::InvalidSpec(format!("a must have k={k} entries, got {}", spec.a.len())));
    }
    for (i, &a) in spec.a.iter().enumerate() {
        check_value(a, k, &format!("a{i}"))?;
    }
    if spec.a.iter().all_equal() {
        return Err(Error::InvalidSpec("at least two of the coefficients a_i must be distinct".into()));
    }
    check_sets(&spec.b, k, 3)?;
    let mut f = orbit_part(k, 3, &spec.b)?;
    for (i, &a) in spec.a.iter().enumerate() {
        let i = i as u8;
        let pattern: &[u8] = match spec.family {
            Gap2Family::Minority => &[i],
            Gap2Family::Majority => &[i, i],
        };
        let term =
            point_sum(k, 3, a, |p| p == [i, i, i] || (classify_tuple(p) == TupleClass::Eq && embeds(pattern, p)))?;
        f = f.add(&term)?;
    }
    Ok(f)
}

/// `a_1 x_1 + ... + a_n x_n + c` modulo k.
pub fn construct_linear(k: usize, spec: &LinearSpec) -> Result<FiniteFunction> {
    for (i, &a) in spec.coefficients.iter().enumerate() {
        check_value(a, k, &format!("a{}", i + 1))?;
    }
    check_value(spec.constant, k, "c")?;
    FiniteFunction::from_fn(k, spec.coefficients.len(), |p| {
        spec.constant as usize + p.iter().zip(&spec.coefficients).map(|(&x, &a)| x as usize * a as usize).sum::<usize>()
    })
}

/// `f(gamma) = sum over pairs i<j with gamma_i = gamma_j of g(gamma without i, j) + h(gamma)`.
pub fn recompose(g: &FiniteFunction, h: &FiniteFunction) -> Result<FiniteFunction> {
    let (k, n) = (h.k(), h.arity());
    if g.k() != k {
        return Err(Error::Domain(format!("radix mismatch: g has k={}, h has k={k}", g.k())));
    }
    if n < 2 || g.arity() != n - 2 {
        return Err(Error::Domain(format!("need arity(g) = arity(h) - 2, got {} and {n}", g.arity())));
    }
    let mut rest = Vec::with_capacity(n - 2);
    let mut table = Vec::with_capacity(h.table().len());
    for (m, p) in points(k, n).enumerate() {
        let hv = h.table()[m];
        let mut sum = hv as usize;
        let mut eq = false;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] == p[j] {
                    eq = true;
                    rest.clear();
                    rest.extend(p.iter().enumerate().filter(|&(t, _)| t != i && t != j).map(|(_, &c)| c));
                    sum += g.table()[index_of(&rest, k)?] as usize;
                }
            }
        }
        if eq && hv != 0 {
            return Err(Error::Precondition(format!("h is nonzero on the Eq point {p:?}")));
        }
        table.push((sum % k) as u8);
    }
    Ok(FiniteFunction::from_raw(k, n, table))
}

/// Linear congruence `sum coeff * g[unknown] = rhs (mod k)` over symmetric g values.
struct Congruence {
    terms: Vec<(usize, usize)>,
    rhs: usize,
}

struct Solver<'a> {
    k: usize,
    eqs: &'a [Congruence],
    by_unknown: Vec<Vec<usize>>,
    assign: Vec<Option<u8>>,
}

impl Solver<'_> {
    /// Values of `u` compatible with every congruence in which `u` is the only unassigned unknown.
    fn candidates(&self, u: usize) -> Vec<u8> {
        let mut allowed = vec![true; self.k];
        for &e in &self.by_unknown[u] {
            let eq = &self.eqs[e];
            let mut coeff = 0;
            let mut partial = 0;
            let mut free = 0;
            for &(v, c) in &eq.terms {
                match self.assign[v] {
                    Some(x) => partial += c * x as usize,
                    None if v == u => coeff += c,
                    None => free += 1,
                }
            }
            if free > 0 {
                continue;
            }
            let target = (eq.rhs + self.k - partial % self.k) % self.k;
            for (x, ok) in allowed.iter_mut().enumerate() {
                *ok &= (coeff * x) % self.k == target;
            }
        }
        (0..self.k as u8).filter(|&x| allowed[x as usize]).collect()
    }

    /// Depth-first over assignments; `visit` returns true to stop.
    fn search(&mut self, visit: &mut dyn FnMut(&[u8]) -> bool) -> bool {
        let mut best: Option<(usize, Vec<u8>)> = None;
        for u in 0..self.assign.len() {
            if self.assign[u].is_none() {
                let c = self.candidates(u);
                if best.as_ref().is_none_or(|(_, b)| c.len() < b.len()) {
                    let empty = c.is_empty();
                    best = Some((u, c));
                    if empty {
                        break;
                    }
                }
            }
        }
        let Some((u, cands)) = best else {
            let full: Vec<u8> = self.assign.iter().map(|v| v.unwrap()).collect();
            let ok = self
                .eqs
                .iter()
                .all(|e| e.terms.iter().map(|&(v, c)| c * full[v] as usize).sum::<usize>() % self.k == e.rhs);
            return ok && visit(&full);
        };
        for x in cands {
            self.assign[u] = Some(x);
            if self.search(visit) {
                self.assign[u] = None;
                return true;
            }
        }
        self.assign[u] = None;
        false
    }
}

/// Upper bound on complete solutions examined while looking for one of the expected class.
const MAX_SOLUTIONS: usize = 4096;

/// Recovers `(g, h)` with `recompose(g, h) = f` for symmetric `f` in `G^n_{2,k}`, `3 < min(n, k)`.
///
/// `h` is `f` on Dis points. `g` is taken symmetric and its multiset values solve
/// the congruences the Eq points impose. Among the solutions, one whose class
/// matches the gap index of `f` is preferred.
pub fn extract_decomposition(f: &FiniteFunction) -> Result<DecompositionPair> {
    let (k, n) = (f.k(), f.arity());
    if n.min(k) <= 3 {
        return Err(Error::Precondition(format!("need 3 < min(n, k), got n={n}, k={k}")));
    }
    if !is_symmetric(f) {
        return Err(Error::NotSymmetric);
    }
    if !in_class(f, n, 2) {
        return Err(Error::Precondition("f must depend on all variables and have arity gap 2".into()));
    }
    let h = FiniteFunction::from_fn(k, n, |p| match classify_tuple(p) {
        TupleClass::Dis => f.table()[index_of(p, k).unwrap()] as usize,
        TupleClass::Eq => 0,
    })?;

    let g_index = MultisetIndex::new(k, n - 2)?;
    let mut eqs = Vec::new();
    for m in multisets(k, n) {
        if classify_tuple(&m) == TupleClass::Dis {
            continue;
        }
        let mut terms: Vec<(usize, usize)> = Vec::new();
        for (v, run) in &m.iter().chunk_by(|&&c| c) {
            let mult = run.count();
            if mult >= 2 {
                let mut rest = m.clone();
                let at = rest.iter().position(|&c| c == v).unwrap();
                rest.drain(at..at + 2);
                let u = g_index.rank(&rest).expect("sub-multiset of a multiset");
                let c = (mult * (mult - 1) / 2) % k;
                if c != 0 {
                    terms.push((u, c));
                }
            }
        }
        let rhs = f.table()[index_of(&m, k)?] as usize;
        eqs.push(Congruence { terms, rhs });
    }
    let unknowns = g_index.classes().len();
    let mut by_unknown = vec![Vec::new(); unknowns];
    for (e, eq) in eqs.iter().enumerate() {
        for &(u, _) in &eq.terms {
            by_unknown[u].push(e);
        }
    }

    let ind = gap_index(f)?;
    let wanted_gap = match ind {
        i if i > 2 => Some(2),
        2 => Some(n - 2),
        _ => None,
    };
    let mut first: Option<FiniteFunction> = None;
    let mut chosen: Option<FiniteFunction> = None;
    let mut seen = 0usize;
    let mut solver = Solver { k, eqs: &eqs, by_unknown, assign: vec![None; unknowns] };
    solver.search(&mut |values| {
        seen += 1;
        let mut table = Vec::new();
        g_index.expand_into(values, &mut table);
        let g = FiniteFunction::from_raw(k, n - 2, table);
        let matches = match wanted_gap {
            Some(p) if n - 2 >= 2 => gap(&g).ok() == Some(p) && crate::minors::ess(&g) == n - 2,
            _ => true,
        };
        if matches {
            chosen = Some(g);
            return true;
        }
        if first.is_none() {
            first = Some(g);
        }
        seen >= MAX_SOLUTIONS
    });
    let g = chosen
        .or(first)
        .ok_or_else(|| Error::NoSolution("the Eq-point congruences have no symmetric solution".into()))?;
    if recompose(&g, &h)? != *f {
        return Err(Error::NoSolution("recomposition does not reproduce f".into()));
    }
    Ok(DecompositionPair { g, h })
}

/// `f(c, ..., c)` for `c = 0..k-1`.
pub fn diagonal_values(f: &FiniteFunction) -> Vec<u8> {
    f.diagonal_values()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::{ess, essential_vars, identify};

    fn set(entries: &[(&[u8], u8)]) -> SetCoefficients {
        entries.iter().map(|(s, v)| (s.to_vec(), *v)).collect()
    }

    #[test]
    fn symmetry_examples() {
        let xor = FiniteFunction::new(2, 2, vec![0, 1, 1, 0]).unwrap();
        assert!(is_symmetric(&xor));
        assert!(is_symmetric(&FiniteFunction::new(2, 2, vec![0, 0, 1, 1]).unwrap()));
        assert!(!is_symmetric(&FiniteFunction::new(2, 2, vec![0, 1, 0, 0]).unwrap()));
    }

    #[test]
    fn expand_compress_examples() {
        let zero = SymmetricSpec { k: 3, n: 3, values: vec![0; 10] };
        assert_eq!(expand(&zero).unwrap(), FiniteFunction::constant(3, 3, 0).unwrap());

        let index = MultisetIndex::new(3, 3).unwrap();
        let mut values = vec![0; 10];
        values[index.rank(&[0, 1, 2]).unwrap()] = 1;
        let spec = SymmetricSpec { k: 3, n: 3, values };
        assert_eq!(expand(&spec).unwrap(), orbit_sum(3, &[0, 1, 2], 3).unwrap());
        assert_eq!(compress(&expand(&spec).unwrap()).unwrap(), spec);

        let point = FiniteFunction::new(2, 2, vec![0, 1, 0, 0]).unwrap();
        assert_eq!(compress(&point), Err(Error::NotSymmetric));
    }

    #[test]
    fn spec_document_round_trip() {
        let spec = SymmetricSpec { k: 2, n: 2, values: vec![1, 0, 1] };
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            text,
            r#"{"k":2,"n":2,"values":[{"multiset":[0,0],"value":1},{"multiset":[0,1],"value":0},{"multiset":[1,1],"value":1}]}"#
        );
        assert_eq!(serde_json::from_str::<SymmetricSpec>(&text).unwrap(), spec);
        assert!(serde_json::from_str::<SymmetricSpec>(r#"{"k":2,"n":2,"values":[]}"#).is_err());
    }

    #[test]
    fn orbit_sum_examples() {
        let f = orbit_sum(3, &[1, 2, 4], 5).unwrap();
        let terms = f.sc_terms();
        assert_eq!(terms.len(), 6);
        for t in &terms {
            assert_eq!(t.coefficient, 1);
            let mut e = t.exponents.clone();
            e.sort();
            assert_eq!(e, vec![1, 2, 4]);
        }
        let f = orbit_sum(2, &[0, 0], 5).unwrap();
        assert_eq!(f.sc_terms(), vec![crate::function::ScTerm { coefficient: 2, exponents: vec![0, 0] }]);
        assert_eq!(orbit_sum(3, &[0, 1, 2], 3).unwrap().eval(&[2, 1, 0]).unwrap(), 1);
    }

    #[test]
    fn gap_n_examples() {
        let spec = GapNSpec { a0: 0, b: set(&[(&[0, 1, 2], 1)]) };
        let f = construct_gap_n(3, 3, &spec).unwrap();
        assert_eq!(f, orbit_sum(3, &[0, 1, 2], 3).unwrap());
        assert_eq!(gap(&f).unwrap(), 3);

        let f4 = construct_gap_n(4, 3, &spec).unwrap();
        assert_eq!(crate::subfunctions::dominants(&f4).unwrap(), [3].into());

        let constant = GapNSpec { a0: 2, b: set(&[(&[0, 1, 2], 2)]) };
        assert!(matches!(construct_gap_n(3, 3, &constant), Err(Error::InvalidSpec(_))));
        // an unlisted set keeps coefficient 0, which differs from a0 = 2
        assert!(construct_gap_n(4, 3, &constant).is_ok());
        assert!(construct_gap_n(3, 4, &spec).is_err());
    }

    #[test]
    fn gap2_ternary_examples() {
        let minority = TernaryGap2Spec { family: Gap2Family::Minority, a: vec![0, 1, 2], b: SetCoefficients::new() };
        let f = construct_gap2_ternary(3, &minority).unwrap();
        let h = identify(&f, 1, 0).unwrap();
        for p in points(3, 3) {
            assert_eq!(h.eval(&p).unwrap(), p[2]);
        }
        assert_eq!(gap(&f).unwrap(), 2);
        assert!(is_symmetric(&f));

        let majority = TernaryGap2Spec { family: Gap2Family::Majority, ..minority.clone() };
        let f = construct_gap2_ternary(3, &majority).unwrap();
        assert_eq!(essential_vars(&identify(&f, 1, 0).unwrap()), vec![0]);
        assert_eq!(gap(&f).unwrap(), 2);

        let flat = TernaryGap2Spec { a: vec![1, 1, 1], ..minority };
        assert!(matches!(construct_gap2_ternary(3, &flat), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn linear_examples() {
        let xor = construct_linear(2, &LinearSpec { coefficients: vec![1, 1], constant: 0 }).unwrap();
        assert_eq!(gap(&xor).unwrap(), 2);
        let twos = construct_linear(4, &LinearSpec { coefficients: vec![2, 2, 2], constant: 0 }).unwrap();
        assert_eq!(twos.table().len(), 64);
        assert_eq!(gap(&twos).unwrap(), 2);
        let ones = construct_linear(3, &LinearSpec { coefficients: vec![1, 1, 1], constant: 0 }).unwrap();
        assert_eq!(gap(&ones).unwrap(), 1);
    }

    #[test]
    fn recompose_examples() {
        let g0 = FiniteFunction::constant(4, 2, 0).unwrap();
        let h0 = FiniteFunction::constant(4, 4, 0).unwrap();
        assert!(recompose(&g0, &h0).unwrap().is_constant());

        let g1 = FiniteFunction::constant(4, 2, 1).unwrap();
        let f = recompose(&g1, &h0).unwrap();
        assert_eq!(f.eval(&[0, 0, 1, 1]).unwrap(), 2);

        let bad_h = FiniteFunction::constant(4, 4, 1).unwrap();
        assert!(matches!(recompose(&g1, &bad_h), Err(Error::Precondition(_))));
    }

    #[test]
    fn extract_round_trip_fixture() {
        // g: constant diagonal 1, off-diagonal values in {0, 2}
        let g = FiniteFunction::from_fn(4, 2, |p| {
            if p[0] == p[1] {
                1
            } else if (p[0] + p[1]) % 3 == 0 {
                2
            } else {
                0
            }
        })
        .unwrap();
        let h = FiniteFunction::from_fn(4, 4, |p| (classify_tuple(p) == TupleClass::Dis) as usize * 3).unwrap();
        let f = recompose(&g, &h).unwrap();
        assert!(is_symmetric(&f));
        assert_eq!((ess(&f), gap(&f).unwrap()), (4, 2));
        let pair = extract_decomposition(&f).unwrap();
        assert_eq!(recompose(&pair.g, &pair.h).unwrap(), f);
        assert_eq!(pair.h, h);
    }

    #[test]
    fn extract_preconditions() {
        let f = orbit_sum(3, &[0, 1, 2], 3).unwrap();
        assert!(matches!(extract_decomposition(&f), Err(Error::Precondition(_))));
        let asym = FiniteFunction::from_fn(4, 4, |p| p[0] as usize).unwrap();
        let asym = asym.add(&FiniteFunction::from_fn(4, 4, |p| (p[1] * p[2] + p[3]) as usize).unwrap()).unwrap();
        assert!(matches!(extract_decomposition(&asym), Err(Error::NotSymmetric)));
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(diagonal_values(&orbit_sum(3, &[0, 1, 2], 3).unwrap()), vec![0, 0, 0]);
        let minority = TernaryGap2Spec { family: Gap2Family::Minority, a: vec![0, 1, 2], b: SetCoefficients::new() };
        assert_eq!(diagonal_values(&construct_gap2_ternary(3, &minority).unwrap()), vec![0, 1, 2]);
        let twice_sum = construct_linear(4, &LinearSpec { coefficients: vec![2; 4], constant: 0 }).unwrap();
        assert!(diagonal_values(&twice_sum).iter().all_equal());
    }
}
