//! Enumeration of symmetric functions through their multiset specs, and the
//! gap-class census over that population.
//!
//! Work is split over indices of the spec space, so results do not depend on
//! the worker count. Sampled runs draw item `i` from its own ChaCha stream
//! keyed by `(seed, i)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::FiniteFunction;
use crate::minors::{all_minors, gap_of_table};
use crate::symmetric::MultisetIndex;
use crate::util::{binomial, checked_pow};

/// Exhaustive runs beyond this many candidates need an explicit override.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Mode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub mode: Mode,
    pub workers: usize,
    pub budget: u128,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { mode: Mode::Exhaustive, workers: 1, budget: DEFAULT_BUDGET }
    }
}

impl RunOptions {
    pub fn exhaustive() -> Self {
        Self::default()
    }

    pub fn sampled(count: u64, seed: u64) -> Self {
        Self { mode: Mode::Sample { count, seed }, ..Self::default() }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    /// Number of items a population of `size` candidates yields under this mode.
    pub(crate) fn item_count(&self, size: Option<u128>) -> Result<u64> {
        match self.mode {
            Mode::Sample { count, .. } => Ok(count),
            Mode::Exhaustive => {
                let required = size.unwrap_or(u128::MAX);
                if required > self.budget {
                    return Err(Error::OverBudget { required, budget: self.budget });
                }
                u64::try_from(required).map_err(|_| Error::OverBudget { required, budget: self.budget })
            }
        }
    }

    pub(crate) fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers.max(1))
            .build()
            .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))
    }
}

/// RNG for sampled item `i`; independent of how items are split across workers.
pub(crate) fn item_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

/// Number of symmetric n-ary functions over K: `k^C(k+n-1, n)`.
pub fn symmetric_space_size(k: usize, n: usize) -> Option<u128> {
    checked_pow(k as u128, binomial((k + n - 1) as u64, n as u64))
}

/// Vectors of `len` digits below `k`: all `k^len` of them in base-k order, or a seeded sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DigitSpace {
    k: usize,
    len: usize,
    mode: Mode,
    count: u64,
}

impl DigitSpace {
    pub fn new(k: usize, len: usize, opts: &RunOptions) -> Result<Self> {
        let size = checked_pow(k as u128, len as u128);
        Ok(Self { k, len, mode: opts.mode, count: opts.item_count(size)? })
    }

    /// Items this space yields.
    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Item `i`: the base-k digits of `i` (least significant first) when exhaustive, seeded draws when sampling.
    pub fn digits_at(&self, i: u64, out: &mut Vec<u8>) {
        let k = self.k as u64;
        out.clear();
        match self.mode {
            Mode::Exhaustive => {
                let mut rest = i;
                for _ in 0..self.len {
                    out.push((rest % k) as u8);
                    rest /= k;
                }
            }
            Mode::Sample { seed, .. } => {
                let mut rng = item_rng(seed, i);
                out.extend((0..self.len).map(|_| rng.gen_range(0..k) as u8));
            }
        }
    }
}

/// Parallel fold over item indices `0..count`. `visit` gets a per-worker accumulator
/// and scratch value; `merge` must be order-independent for the result to be deterministic.
pub(crate) fn par_scan<A, S>(
    count: u64,
    opts: &RunOptions,
    init: impl Fn() -> A + Sync + Send,
    scratch: impl Fn() -> S + Sync + Send,
    visit: impl Fn(&mut A, &mut S, u64) + Sync + Send,
    merge: impl Fn(A, A) -> A + Sync + Send,
) -> Result<A>
where
    A: Send,
    S: Send,
{
    let count =
        usize::try_from(count).map_err(|_| Error::Domain(format!("{count} items do not fit in memory indices")))?;
    let pool = opts.pool()?;
    Ok(pool.install(|| {
        (0..count)
            .into_par_iter()
            .with_min_len(1 << 10)
            .fold(
                || (init(), scratch()),
                |(mut acc, mut s), i| {
                    visit(&mut acc, &mut s, i as u64);
                    (acc, s)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(&init, &merge)
    }))
}

/// The symmetric functions of arity `n` over K, one per multiset spec.
#[derive(Debug, Clone)]
pub struct SymmetricEnumeration {
    index: Arc<MultisetIndex>,
    specs: DigitSpace,
}

impl SymmetricEnumeration {
    pub fn k(&self) -> usize {
        self.index.k()
    }

    pub fn n(&self) -> usize {
        self.index.n()
    }

    pub fn mode(&self) -> Mode {
        self.specs.mode
    }

    /// Items this enumeration yields.
    pub fn len(&self) -> u64 {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn multiset_index(&self) -> &MultisetIndex {
        &self.index
    }

    /// Spec values of item `i`, in [`MultisetIndex`] order.
    pub fn values_at(&self, i: u64, values: &mut Vec<u8>) {
        self.specs.digits_at(i, values);
    }

    /// Writes the table of item `i`, reusing `values` as scratch.
    pub fn table_at(&self, i: u64, values: &mut Vec<u8>, table: &mut Vec<u8>) {
        self.values_at(i, values);
        self.index.expand_into(values, table);
    }

    pub fn function_at(&self, i: u64) -> FiniteFunction {
        let (mut values, mut table) = (Vec::new(), Vec::new());
        self.table_at(i, &mut values, &mut table);
        FiniteFunction::from_raw(self.k(), self.n(), table)
    }

    pub fn iter(&self) -> impl Iterator<Item = FiniteFunction> + '_ {
        (0..self.len()).map(|i| self.function_at(i))
    }
}

/// Every symmetric function of arity `n` over K exactly once, or a seeded sample of them.
pub fn enumerate_symmetric(k: usize, n: usize, opts: &RunOptions) -> Result<SymmetricEnumeration> {
    let index = MultisetIndex::new(k, n)?;
    let count = opts.item_count(symmetric_space_size(k, n))?;
    let specs = DigitSpace { k, len: index.classes().len(), mode: opts.mode, count };
    Ok(SymmetricEnumeration { index: Arc::new(index), specs })
}

/// Essential-variable count and gap of one enumerated function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapInfo {
    pub ess: usize,
    pub gap: Option<usize>,
}

#[derive(Default)]
pub(crate) struct TableScratch {
    values: Vec<u8>,
    table: Vec<u8>,
    minor: Vec<u8>,
}

/// Parallel scan of a symmetric enumeration; `visit` sees every item with its table and gap data.
pub(crate) fn scan_symmetric<A: Send>(
    population: &SymmetricEnumeration,
    opts: &RunOptions,
    init: impl Fn() -> A + Sync + Send,
    visit: impl Fn(&mut A, u64, &[u8], GapInfo) + Sync + Send,
    merge: impl Fn(A, A) -> A + Sync + Send,
) -> Result<A> {
    let (k, n) = (population.k(), population.n());
    par_scan(
        population.len(),
        opts,
        init,
        TableScratch::default,
        |acc, s, i| {
            population.table_at(i, &mut s.values, &mut s.table);
            let (mask, gap) = gap_of_table(&s.table, k, n, &mut s.minor);
            visit(acc, i, &s.table, GapInfo { ess: mask.count_ones() as usize, gap });
        },
        merge,
    )
}

/// Symmetric functions satisfying `keep`, in enumeration order.
pub fn select_symmetric(
    k: usize,
    n: usize,
    opts: &RunOptions,
    keep: impl Fn(&[u8], GapInfo) -> bool + Sync + Send,
) -> Result<Vec<FiniteFunction>> {
    let population = enumerate_symmetric(k, n, opts)?;
    let mut hits = scan_symmetric(
        &population,
        opts,
        Vec::new,
        |acc: &mut Vec<(u64, Vec<u8>)>, i, table, info| {
            if keep(table, info) {
                acc.push((i, table.to_vec()));
            }
        },
        |mut a, mut b| {
            a.append(&mut b);
            a
        },
    )?;
    hits.sort_by_key(|(i, _)| *i);
    Ok(hits.into_iter().map(|(_, t)| FiniteFunction::from_raw(k, n, t)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusBucket {
    pub ess: usize,
    /// `None` when fewer than two variables are essential.
    pub gap: Option<usize>,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexBucket {
    pub ind: usize,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub k: usize,
    pub n: usize,
    pub mode: Mode,
    pub total: u64,
    pub counts: Vec<CensusBucket>,
    /// Gap index among the functions with gap at least 2.
    pub ind_distribution: Vec<IndexBucket>,
}

impl Census {
    pub fn count(&self, ess: usize, gap: Option<usize>) -> u64 {
        self.counts.iter().find(|b| b.ess == ess && b.gap == gap).map_or(0, |b| b.count)
    }
}

#[derive(Clone)]
struct Tally {
    /// `counts[ess][gap + 1]`, slot 0 for undefined gap.
    counts: Vec<Vec<u64>>,
    ind: BTreeMap<usize, u64>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Self { counts: vec![vec![0; n + 2]; n + 1], ind: BTreeMap::new() }
    }

    fn merge(mut self, other: Self) -> Self {
        for (row, orow) in self.counts.iter_mut().zip(other.counts) {
            for (c, o) in row.iter_mut().zip(orow) {
                *c += o;
            }
        }
        for (i, c) in other.ind {
            *self.ind.entry(i).or_default() += c;
        }
        self
    }
}

/// Gap profile of every enumerated symmetric function, aggregated by `(ess, gap)`.
pub fn census(k: usize, n: usize, opts: &RunOptions) -> Result<Census> {
    let population = enumerate_symmetric(k, n, opts)?;
    let tally = scan_symmetric(
        &population,
        opts,
        || Tally::new(n),
        |acc, _, table, info| {
            acc.counts[info.ess][info.gap.map_or(0, |g| g + 1)] += 1;
            if info.gap.is_some_and(|g| g >= 2) {
                let f = FiniteFunction::from_raw(k, n, table.to_vec());
                let ind = all_minors(&f).max_depth().unwrap_or(0);
                *acc.ind.entry(ind).or_default() += 1;
            }
        },
        Tally::merge,
    )?;
    let mut counts = Vec::new();
    for (ess, row) in tally.counts.iter().enumerate() {
        for (slot, &count) in row.iter().enumerate() {
            if count > 0 {
                counts.push(CensusBucket { ess, gap: slot.checked_sub(1), count });
            }
        }
    }
    Ok(Census {
        k,
        n,
        mode: opts.mode,
        total: population.len(),
        counts,
        ind_distribution: tally.ind.into_iter().map(|(ind, count)| IndexBucket { ind, count }).collect(),
    })
}

/// `|G^n_{n,k}|` among symmetric functions: `k^(C(k,n)+1) - k`.
pub fn gap_n_class_size(k: usize, n: usize) -> Option<u128> {
    checked_pow(k as u128, binomial(k as u64, n as u64) + 1).map(|p| p - k as u128)
}
