//! Essential variables, identification minors, arity gap and gap index.
//!
//! A minor keeps the arity of its parent; the identified variable simply
//! becomes fictive. Two minors are the same when their tables are equal.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{stride, FiniteFunction};

/// Bit `i` is set iff position `i` is essential. Only positions in `candidates` are examined.
pub(crate) fn essential_mask_within(table: &[u8], k: usize, n: usize, candidates: u64) -> u64 {
    let mut mask = 0;
    for i in 0..n {
        if candidates >> i & 1 == 1 && is_essential_at(table, k, n, i) {
            mask |= 1 << i;
        }
    }
    mask
}

pub(crate) fn essential_mask(table: &[u8], k: usize, n: usize) -> u64 {
    essential_mask_within(table, k, n, all_positions(n))
}

#[inline]
pub(crate) fn all_positions(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn is_essential_at(table: &[u8], k: usize, n: usize, i: usize) -> bool {
    let s = stride(k, n, i);
    let block = s * k;
    for base_hi in (0..table.len()).step_by(block) {
        for base in base_hi..base_hi + s {
            let v0 = table[base];
            for c in 1..k {
                if table[base + c * s] != v0 {
                    return true;
                }
            }
        }
    }
    false
}

/// Writes the table of `f_{i<-j}` into `out`.
pub(crate) fn identify_into(table: &[u8], k: usize, n: usize, i: usize, j: usize, out: &mut Vec<u8>) {
    let si = stride(k, n, i);
    let sj = stride(k, n, j);
    out.clear();
    out.extend((0..table.len()).map(|m| {
        let di = (m / si) % k;
        let dj = (m / sj) % k;
        table[m - di * si + dj * si]
    }));
}

fn positions_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// `Ess(f)` as sorted 0-based positions.
pub fn essential_vars(f: &FiniteFunction) -> Vec<usize> {
    positions_of(essential_mask(f.table(), f.k(), f.arity()))
}

pub fn ess(f: &FiniteFunction) -> usize {
    essential_mask(f.table(), f.k(), f.arity()).count_ones() as usize
}

pub fn is_essential(f: &FiniteFunction, i: usize) -> bool {
    i < f.arity() && is_essential_at(f.table(), f.k(), f.arity(), i)
}

/// The identification minor `f_{i<-j}`: `x_i` is replaced by `x_j`.
///
/// Both variables must be essential in `f`.
pub fn identify(f: &FiniteFunction, i: usize, j: usize) -> Result<FiniteFunction> {
    let n = f.arity();
    if i == j {
        return Err(Error::Domain(format!("cannot identify x{} with itself", i + 1)));
    }
    if i >= n || j >= n {
        return Err(Error::Domain(format!("positions ({i}, {j}) out of range for arity {n}")));
    }
    for p in [i, j] {
        if !is_essential(f, p) {
            return Err(Error::Precondition(format!("x{} is not essential", p + 1)));
        }
    }
    let mut out = Vec::new();
    identify_into(f.table(), f.k(), n, i, j, &mut out);
    Ok(FiniteFunction::from_raw(f.k(), n, out))
}

/// Gap computation on a raw table, reusing `scratch`. Returns `(ess mask, gap)`.
pub(crate) fn gap_of_table(table: &[u8], k: usize, n: usize, scratch: &mut Vec<u8>) -> (u64, Option<usize>) {
    let mask = essential_mask(table, k, n);
    let ess = mask.count_ones() as usize;
    if ess < 2 {
        return (mask, None);
    }
    let pos = positions_of(mask);
    let mut best = 0usize;
    // f_{i<-j} and f_{j<-i} differ only by renaming the surviving variable.
    'pairs: for (a, &i) in pos.iter().enumerate() {
        for &j in &pos[a + 1..] {
            identify_into(table, k, n, i, j, scratch);
            let h = essential_mask_within(scratch, k, n, mask & !(1 << i)).count_ones() as usize;
            best = best.max(h);
            if best == ess - 1 {
                break 'pairs;
            }
        }
    }
    (mask, Some(ess - best))
}

/// `gap(f) = ess(f) - max ess(h)` over the one-step identification minors.
pub fn gap(f: &FiniteFunction) -> Result<usize> {
    let mut scratch = Vec::new();
    let (mask, gap) = gap_of_table(f.table(), f.k(), f.arity(), &mut scratch);
    gap.ok_or(Error::UndefinedGap { ess: mask.count_ones() as usize })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorRecord {
    pub function: FiniteFunction,
    /// Length of the longest identification chain from the parent to this table.
    pub depth: usize,
    pub ess: usize,
}

/// `Min(f)` as a DAG: records plus the one-step identification edges between them.
#[derive(Debug, Clone, Default)]
pub struct MinorSet {
    pub records: Vec<MinorRecord>,
    /// Indices of the one-step minors of the parent.
    pub roots: Vec<usize>,
    /// `successors[r]`: indices of the one-step minors of record `r`.
    pub successors: Vec<Vec<usize>>,
}

impl MinorSet {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn max_depth(&self) -> Option<usize> {
        self.records.iter().map(|r| r.depth).max()
    }

    pub fn max_ess(&self) -> Option<usize> {
        self.records.iter().map(|r| r.ess).max()
    }

    /// Every identification chain `f |- h_1 |- ... |- h_len`, as record indices.
    pub fn chains(&self, len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(len);
        for &r in &self.roots {
            self.extend_chain(r, len, &mut path, &mut out);
        }
        out
    }

    fn extend_chain(&self, node: usize, len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        path.push(node);
        if path.len() == len {
            out.push(path.clone());
        } else {
            for &s in &self.successors[node] {
                self.extend_chain(s, len, path, out);
            }
        }
        path.pop();
    }
}

fn one_step_minors(f: &FiniteFunction) -> Vec<FiniteFunction> {
    let (k, n) = (f.k(), f.arity());
    let pos = essential_vars(f);
    let mut out = Vec::new();
    for &i in &pos {
        for &j in &pos {
            if i != j {
                let mut t = Vec::new();
                identify_into(f.table(), k, n, i, j, &mut t);
                out.push(FiniteFunction::from_raw(k, n, t));
            }
        }
    }
    out
}

/// Breadth-first closure of identification over essential pairs.
pub fn all_minors(f: &FiniteFunction) -> MinorSet {
    let mut set = MinorSet::default();
    let mut index: HashMap<FiniteFunction, usize> = HashMap::new();
    let mut intern = |g: FiniteFunction, set: &mut MinorSet| -> usize {
        *index.entry(g).or_insert_with_key(|g| {
            set.records.push(MinorRecord { function: g.clone(), depth: 0, ess: ess(g) });
            set.successors.push(Vec::new());
            set.records.len() - 1
        })
    };

    for g in one_step_minors(f) {
        let r = intern(g, &mut set);
        if !set.roots.contains(&r) {
            set.roots.push(r);
        }
    }
    let mut cursor = 0;
    while cursor < set.records.len() {
        let children = one_step_minors(&set.records[cursor].function);
        for g in children {
            let r = intern(g, &mut set);
            if !set.successors[cursor].contains(&r) {
                set.successors[cursor].push(r);
            }
        }
        cursor += 1;
    }

    // Each edge loses at least one essential variable, so descending ess is a topological order.
    let mut order: Vec<usize> = (0..set.records.len()).collect();
    order.sort_by_key(|&r| std::cmp::Reverse(set.records[r].ess));
    for &r in &set.roots {
        set.records[r].depth = 1;
    }
    for &r in &order {
        let d = set.records[r].depth;
        for s in set.successors[r].clone() {
            let child = &mut set.records[s];
            child.depth = child.depth.max(d + 1);
        }
    }
    set
}

/// `ind(f)`: the largest depth over `Min(f)`.
pub fn gap_index(f: &FiniteFunction) -> Result<usize> {
    let e = ess(f);
    if e < 2 {
        return Err(Error::UndefinedGap { ess: e });
    }
    Ok(all_minors(f).max_depth().expect("ess >= 2 yields at least one minor"))
}

/// `G^m_{p,k}`: exactly `m` essential variables and arity gap `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassLabel {
    pub m: usize,
    pub p: usize,
    pub k: usize,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G^{}_{{{},{}}}", self.m, self.p, self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapProfile {
    pub ess: usize,
    /// 0-based essential positions.
    pub essential: Vec<usize>,
    pub gap: Option<usize>,
    pub index: Option<usize>,
    pub class_label: Option<ClassLabel>,
}

impl GapProfile {
    pub fn has_nontrivial_gap(&self) -> bool {
        self.gap.is_some_and(|g| g >= 2)
    }

    pub fn in_class(&self, m: usize, p: usize) -> bool {
        self.ess == m && self.gap == Some(p)
    }
}

pub fn gap_profile(f: &FiniteFunction) -> GapProfile {
    let essential = essential_vars(f);
    let ess = essential.len();
    let gap = gap(f).ok();
    let index = gap.and_then(|_| gap_index(f).ok());
    let class_label = gap.filter(|&p| p >= 2).map(|p| ClassLabel { m: ess, p, k: f.k() });
    GapProfile { ess, essential, gap, index, class_label }
}

/// True when `f` has exactly `m` essential variables and gap `p`.
pub fn in_class(f: &FiniteFunction, m: usize, p: usize) -> bool {
    ess(f) == m && gap(f).ok() == Some(p)
}
