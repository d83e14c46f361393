//! Executable checks of the structural claims about symmetric functions with
//! non-trivial arity gap.
//!
//! A suite filters a population (symmetric functions, constructor specs,
//! linear specs or raw tables) by a hypothesis and evaluates one or more named
//! assertions on every instance that passes. Each assertion keeps its own
//! tally, so a part whose hypothesis never holds shows up as vacuous.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::census::{enumerate_symmetric, par_scan, scan_symmetric, DigitSpace, GapInfo, Mode, RunOptions};
use crate::document::FunctionDocument;
use crate::error::{Error, Result};
use crate::function::{classify_tuple, index_of, points, FiniteFunction, TupleClass};
use crate::minors::{all_minors, ess, gap, gap_index, gap_of_table, identify, in_class, is_essential, MinorSet};
use crate::subfunctions::{
    dominants, restrict, separable_sets, sub_bound, sub_count, weak_dominants, SubfunctionCache,
};
use crate::symmetric::{
    construct_gap2_ternary, construct_gap_n, construct_linear, extract_decomposition, is_symmetric, recompose,
    Gap2Family, GapNSpec, LinearSpec, MultisetIndex, TernaryGap2Spec,
};
use crate::util::binomial;

/// Witnesses kept in full per report.
pub const MAX_WITNESSES: usize = 100;

/// Registered suites with a one-line summary of what each checks.
pub const SUITES: &[(&str, &str)] = &[
    ("lemma2_1", "subfunctions of a symmetric f with ess = n are symmetric with ess = n - ord"),
    ("lemma2_2", "a symmetric f with ess = n and gap >= 2 has gap 2 or n"),
    ("lemma2_3", "gap-2 functions with n > 3 have a pair u, v whose identification kills both"),
    ("lemma2_4", "in a symmetric gap-2 f with n > 3, x_v is fictive in every f_{u<-v}"),
    ("lemma2_5", "symmetric gap-2 f has 1 <= ind <= n/2, with ess n - 2i along maximal chains"),
    ("remark2_1", "identification minors of a symmetric f with non-trivial gap are symmetric"),
    ("remark2_2", "minor classes of a symmetric gap-2 f follow from depth and ind"),
    ("thm2_2", "symmetric gap-n functions are exactly the gap-n normal forms"),
    ("cor2_1", "number of symmetric functions with ess = gap = n"),
    ("thm2_3", "symmetric ternary gap-2 functions are exactly the minority and majority families"),
    ("thm2_4", "diagonal values of symmetric functions with non-trivial gap"),
    ("thm2_5", "symmetric gap-2 functions decompose into pairwise g terms plus h on Dis points"),
    ("thm2_6", "a linear function with non-trivial gap exists iff k is even"),
    ("thm3_1", "non-dominant restrictions of a symmetric gap-n f stay in the gap-(n-1) class"),
    ("lemma3_1", "sub(f) <= sub_k^n + range(f) for symmetric gap-n f"),
    ("thm3_2", "restrictions of symmetric gap-2 functions by weak and non-weak dominants"),
    ("cor3_1", "non-dominant restrictions of symmetric f with non-trivial gap keep a non-trivial gap"),
    ("thm4_1", "every set of essential variables is separable"),
    ("cor4_1", "sep(f) = 2^n for symmetric f with non-trivial gap"),
    ("cor4_2", "sub(f) >= 2^n for symmetric f with non-trivial gap"),
    ("willard", "gap(f) <= 2 when k < n, and gap(f) <= min(n, k), on raw tables"),
];

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|(name, _)| *name)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParameters {
    pub k: usize,
    pub n: usize,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertionTally {
    pub id: String,
    pub checked: u64,
    pub violations: u64,
    /// No instance met this assertion's hypothesis.
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub assertion: String,
    /// Absent for population-level assertions.
    pub function: Option<FunctionDocument>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub parameters: SuiteParameters,
    pub instances_checked: u64,
    pub vacuous: bool,
    pub passed: bool,
    pub violation_count: u64,
    /// The first [`MAX_WITNESSES`] violations in population order.
    pub violations: Vec<Violation>,
    pub assertions: Vec<AssertionTally>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn assertion(&self, id: &str) -> Option<&AssertionTally> {
        self.assertions.iter().find(|a| a.id == id)
    }
}

struct Witness {
    key: (u8, u64, u32),
    slot: usize,
    function: Option<FiniteFunction>,
    detail: Option<String>,
}

/// Per-worker results of one population pass.
struct Findings {
    instances: u64,
    /// `(checked, violations)` per assertion slot.
    checks: Vec<(u64, u64)>,
    witnesses: Vec<Witness>,
    violation_count: u64,
    /// `(phase, index, function)` of instances kept for population-level checks.
    collected: Vec<(u8, u64, FiniteFunction)>,
}

impl Findings {
    fn new(slots: usize) -> Self {
        Self {
            instances: 0,
            checks: vec![(0, 0); slots],
            witnesses: Vec::new(),
            violation_count: 0,
            collected: Vec::new(),
        }
    }

    fn trim(&mut self) {
        self.witnesses.sort_by_key(|w| w.key);
        self.witnesses.truncate(MAX_WITNESSES);
    }

    fn record(&mut self, slot: usize, ok: bool, witness: impl FnOnce() -> Witness) {
        self.checks[slot].0 += 1;
        if !ok {
            self.checks[slot].1 += 1;
            self.violation_count += 1;
            self.witnesses.push(witness());
            if self.witnesses.len() >= 2 * MAX_WITNESSES {
                self.trim();
            }
        }
    }

    /// A population-level assertion with no single witness function.
    fn check_global(&mut self, slot: usize, ok: bool, detail: impl FnOnce() -> String) {
        let seq = self.checks[slot].0 as u32;
        self.record(slot, ok, || Witness {
            key: (u8::MAX, slot as u64, seq),
            slot,
            function: None,
            detail: Some(detail()),
        });
    }

    fn merge(mut self, other: Self) -> Self {
        self.instances += other.instances;
        for (a, b) in self.checks.iter_mut().zip(other.checks) {
            a.0 += b.0;
            a.1 += b.1;
        }
        self.violation_count += other.violation_count;
        self.witnesses.extend(other.witnesses);
        self.trim();
        self.collected.extend(other.collected);
        self
    }
}

/// Assertion sink for one instance.
struct Probe<'a> {
    out: &'a mut Findings,
    f: &'a FiniteFunction,
    phase: u8,
    index: u64,
    seq: u32,
}

impl Probe<'_> {
    fn check(&mut self, slot: usize, ok: bool, detail: impl FnOnce() -> String) {
        let key = (self.phase, self.index, self.seq);
        self.seq += 1;
        let f = self.f;
        self.out.record(slot, ok, || Witness { key, slot, function: Some(f.clone()), detail: Some(detail()) });
    }
}

struct Ctx<'a> {
    k: usize,
    n: usize,
    opts: &'a RunOptions,
    slots: usize,
}

impl Ctx<'_> {
    fn empty(&self) -> Findings {
        Findings::new(self.slots)
    }

    /// One pass over the symmetric functions of arity `n`.
    fn symmetric_phase(
        &self,
        phase: u8,
        collect: bool,
        keep: impl Fn(GapInfo) -> bool + Sync + Send,
        check: impl Fn(&FiniteFunction, GapInfo, &mut Probe) + Sync + Send,
    ) -> Result<Findings> {
        let (k, n) = (self.k, self.n);
        let population = enumerate_symmetric(k, n, self.opts)?;
        let mut found = scan_symmetric(
            &population,
            self.opts,
            || self.empty(),
            |acc, i, table, info| {
                if keep(info) {
                    let f = FiniteFunction::from_raw(k, n, table.to_vec());
                    visit(acc, phase, i, f, info, collect, &check);
                }
            },
            Findings::merge,
        )?;
        found.trim();
        Ok(found)
    }

    /// Like [`Ctx::symmetric_phase`] for hypotheses that imply `ess = n` and gap >= 2.
    ///
    /// When the full symmetric space is over budget and `n = 3`, runs over a
    /// smaller population that still contains every such function: `f(x, x, y)`
    /// then depends on at most one variable, so the Eq part of `f` is a constant,
    /// a function of the doubled value or a function of the lone value.
    fn nontrivial_phase(
        &self,
        phase: u8,
        collect: bool,
        notes: &mut Vec<String>,
        keep: impl Fn(GapInfo) -> bool + Sync + Send,
        check: impl Fn(&FiniteFunction, GapInfo, &mut Probe) + Sync + Send,
    ) -> Result<Findings> {
        let (k, n) = (self.k, self.n);
        let over_budget = crate::census::symmetric_space_size(k, n).is_none_or(|size| size > self.opts.budget);
        if !(over_budget && n == 3) {
            return self.symmetric_phase(phase, collect, keep, check);
        }
        let note =
            "population: symmetric ternary functions whose identification minor has at most one essential variable";
        if !notes.iter().any(|x| x == note) {
            notes.push(note.into());
        }
        let index = MultisetIndex::new(k, 3)?;
        let sets = subsets(k, 3);
        self.digit_phase(
            phase,
            k + sets.len() + 1,
            collect,
            |d| {
                let (u, rest) = d.split_at(k);
                let (dis, kind) = (&rest[..sets.len()], rest[sets.len()]);
                if kind > 1 || (kind == 1 && all_equal(u)) {
                    return None;
                }
                let values: Vec<u8> = index
                    .classes()
                    .iter()
                    .map(|m| match (m[0] == m[1], m[1] == m[2]) {
                        (false, false) => dis[sets.binary_search(m).expect("set")],
                        (true, true) => u[m[0] as usize],
                        (true, false) => u[if kind == 0 { m[0] } else { m[2] } as usize],
                        (false, true) => u[if kind == 0 { m[2] } else { m[0] } as usize],
                    })
                    .collect();
                let mut table = Vec::new();
                index.expand_into(&values, &mut table);
                Some(FiniteFunction::from_raw(k, 3, table))
            },
            move |_, info| keep(info),
            check,
        )
    }

    /// One pass over digit vectors of length `len`; `build` maps a vector to an instance candidate.
    fn digit_phase(
        &self,
        phase: u8,
        len: usize,
        collect: bool,
        build: impl Fn(&[u8]) -> Option<FiniteFunction> + Sync + Send,
        keep: impl Fn(&FiniteFunction, GapInfo) -> bool + Sync + Send,
        check: impl Fn(&FiniteFunction, GapInfo, &mut Probe) + Sync + Send,
    ) -> Result<Findings> {
        let space = DigitSpace::new(self.k, len, self.opts)?;
        let mut found = par_scan(
            space.len(),
            self.opts,
            || self.empty(),
            || (Vec::new(), Vec::new()),
            |acc, (digits, scratch): &mut (Vec<u8>, Vec<u8>), i| {
                space.digits_at(i, digits);
                let Some(f) = build(digits) else { return };
                let (mask, gap) = gap_of_table(f.table(), f.k(), f.arity(), scratch);
                let info = GapInfo { ess: mask.count_ones() as usize, gap };
                if keep(&f, info) {
                    visit(acc, phase, i, f, info, collect, &check);
                }
            },
            Findings::merge,
        )?;
        found.trim();
        Ok(found)
    }
}

fn visit(
    acc: &mut Findings,
    phase: u8,
    index: u64,
    f: FiniteFunction,
    info: GapInfo,
    collect: bool,
    check: &impl Fn(&FiniteFunction, GapInfo, &mut Probe),
) {
    acc.instances += 1;
    let mut probe = Probe { out: acc, f: &f, phase, index, seq: 0 };
    check(&f, info, &mut probe);
    if collect {
        acc.collected.push((phase, index, f));
    }
}

fn full_gap(n: usize, p: usize) -> impl Fn(GapInfo) -> bool {
    move |info| info.ess == n && info.gap == Some(p)
}

fn nontrivial(n: usize) -> impl Fn(GapInfo) -> bool {
    move |info| info.ess == n && info.gap.is_some_and(|g| g >= 2)
}

fn ind(minors: &MinorSet) -> usize {
    minors.max_depth().unwrap_or(0)
}

fn all_equal(values: &[u8]) -> bool {
    values.iter().all_equal()
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
}

fn describe(g: &FiniteFunction) -> String {
    let e = ess(g);
    match gap(g) {
        Ok(p) => format!("ess {e}, gap {p}"),
        Err(_) => format!("ess {e}, gap undefined"),
    }
}

/// Value of `f` on the increasing tuple `set`.
fn value_on(f: &FiniteFunction, set: &[u8]) -> u8 {
    f.table()[index_of(set, f.k()).expect("set entries are below k")]
}

fn subsets(k: usize, size: usize) -> Vec<Vec<u8>> {
    (0..k as u8).combinations(size).collect()
}

struct Suite {
    assertions: &'static [&'static str],
    run: fn(&Ctx, &mut Vec<String>) -> Result<Findings>,
}

fn lookup(name: &str) -> Option<Suite> {
    let suite = |assertions, run| Some(Suite { assertions, run });
    match name {
        "lemma2_1" => suite(&["subfunction_symmetric", "ess_is_n_minus_ord"], lemma2_1),
        "lemma2_2" => suite(&["gap_is_2_or_n"], lemma2_2),
        "lemma2_3" => suite(&["killing_pair_exists", "pair_neighbours_lose_two"], lemma2_3),
        "lemma2_4" => suite(&["surviving_variable_fictive"], lemma2_4),
        "lemma2_5" => suite(&["ind_bounds", "chain_ess", "chains_extend_to_ind"], lemma2_5),
        "remark2_1" => suite(&["minor_symmetric"], remark2_1),
        "remark2_2" => suite(&["minor_class"], remark2_2),
        "thm2_2" => suite(&["normal_form", "normal_form_in_class", "image_equals_class"], thm2_2),
        "cor2_1" => suite(&["class_size"], cor2_1),
        "thm2_3" => suite(&["ternary_form", "family_in_class", "image_equals_class"], thm2_3),
        "thm2_4" => suite(&["diagonal_constant", "diagonal_varies"], thm2_4),
        "thm2_5" => suite(&["decomposes", "parts_symmetric", "h_vanishes_on_eq", "g_class"], thm2_5),
        "thm2_6" => suite(&["even_witness", "odd_no_gap", "even_gap_only_at_half"], thm2_6),
        "thm3_1" => suite(&["restriction_in_class"], thm3_1),
        "lemma3_1" => suite(&["sub_bound", "equality_case"], lemma3_1),
        "thm3_2" => suite(
            &["i_pair_restriction_gap_2", "ii_pair_restriction_full_gap", "iii_weak_dominant", "iv_not_weak_dominant"],
            thm3_2,
        ),
        "cor3_1" => suite(&["restriction_nontrivial_gap"], cor3_1),
        "thm4_1" => suite(&["every_subset_separable"], thm4_1),
        "cor4_1" => suite(&["sep_is_2_pow_n"], cor4_1),
        "cor4_2" => suite(&["sub_at_least_2_pow_n"], cor4_2),
        "willard" => suite(&["gap_at_most_2", "gap_at_most_min"], willard),
        _ => None,
    }
}

/// Runs a registered suite at `(k, n)` over its population in the given mode.
pub fn run_suite(name: &str, k: usize, n: usize, opts: &RunOptions) -> Result<SuiteReport> {
    let suite = lookup(name).ok_or_else(|| Error::UnknownSuite(name.to_string()))?;
    crate::function::table_len(k, n)?;
    let ctx = Ctx { k, n, opts, slots: suite.assertions.len() };
    let mut notes = Vec::new();
    let mut found = (suite.run)(&ctx, &mut notes)?;
    found.trim();

    let assertions: Vec<AssertionTally> = suite
        .assertions
        .iter()
        .zip(&found.checks)
        .map(|(id, &(checked, violations))| AssertionTally {
            id: id.to_string(),
            checked,
            violations,
            vacuous: checked == 0,
        })
        .collect();
    for a in assertions.iter().filter(|a| a.vacuous) {
        notes.push(format!("{}: vacuous, no instance meets its hypothesis", a.id));
    }
    let violations = found
        .witnesses
        .iter()
        .map(|w| Violation {
            assertion: suite.assertions[w.slot].to_string(),
            function: w.function.as_ref().map(FunctionDocument::from),
            detail: w.detail.clone(),
        })
        .collect();
    Ok(SuiteReport {
        suite: name.to_string(),
        parameters: SuiteParameters { k, n, mode: opts.mode },
        instances_checked: found.instances,
        vacuous: found.instances == 0,
        passed: found.violation_count == 0,
        violation_count: found.violation_count,
        violations,
        assertions,
        notes,
    })
}

fn lemma2_1(ctx: &Ctx, _: &mut Vec<String>) -> Result<Findings> {
    let n = ctx.n;
    let cache = SubfunctionCache::new();
    ctx.symmetric_phase(
        0,
        false,
        |info| info.ess == n,
        |f, _, probe| {
            for (g, order) in cache.subfunction_orders(f) {
                probe.check(0, is_symmetric(&g), || format!("order-{order} subfunction {g} is not symmetric"));
                if g.arity() > 0 {
                    probe.check(1, g.arity() + order == n, || {
                        format!("order-{order} subfunction {g} has ess {}", g.arity())
                    });
                }
            }
        },
    )
}

fn lemma2_2(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let n = ctx.n;
    ctx.nontrivial_phase(0, false, notes, nontrivial(n), |_, info, probe| {
        let p = info.gap.unwrap_or(0);
        probe.check(0, p == 2 || p == n, || format!("gap {p}"));
    })
}

fn lemma2_3(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let n = ctx.n;
    if n <= 3 {
        notes.push(format!("needs n > 3, got n = {n}"));
        return Ok(ctx.empty());
    }
    ctx.symmetric_phase(0, false, full_gap(n, 2), |f, _, probe| {
        let lose_two = |u: usize, v: usize| ess(&identify(f, u, v).expect("essential pair")) == n - 2;
        let killing: Vec<(usize, usize)> = pairs(n)
            .filter(|&(u, v)| {
                let h = identify(f, u, v).expect("essential pair");
                ess(&h) == n - 2 && !is_essential(&h, v)
            })
            .collect();
        probe.check(0, !killing.is_empty(), || "no pair u, v with x_v fictive in f_{u<-v}".into());
        if !killing.is_empty() {
            let ok = killing
                .iter()
                .any(|&(u, v)| (0..n).filter(|m| *m != u && *m != v).all(|m| lose_two(u, m) && lose_two(v, m)));
            probe.check(1, ok, || format!("killing pairs {killing:?} have neighbours keeping more than n - 2"));
        }
    })
}

fn lemma2_4(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let (k, n) = (ctx.k, ctx.n);
    if n <= 3 {
        notes.push(format!("needs n > 3, got n = {n}"));
        return Ok(ctx.empty());
    }
    if n > k {
        notes.push(format!("extended check: n = {n} > k = {k}, beyond the range n <= k"));
    }
    ctx.symmetric_phase(0, false, full_gap(n, 2), |f, _, probe| {
        for (u, v) in pairs(n) {
            let h = identify(f, u, v).expect("essential pair");
            probe.check(0, !is_essential(&h, v), || format!("x{} is essential in f_{{{}<-{}}}", v + 1, u + 1, v + 1));
        }
    })
}

/// True when some record at depth `target` is reachable from `start`.
fn reaches_depth(minors: &MinorSet, start: usize, target: usize) -> bool {
    let mut stack = vec![start];
    let mut seen = vec![false; minors.len()];
    while let Some(r) = stack.pop() {
        if minors.records[r].depth == target {
            return true;
        }
        for &s in &minors.successors[r] {
            if !std::mem::replace(&mut seen[s], true) {
                stack.push(s);
            }
        }
    }
    false
}

fn lemma2_5(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let n = ctx.n;
    ctx.nontrivial_phase(0, false, notes, full_gap(n, 2), |f, _, probe| {
        let minors = all_minors(f);
        let m = ind(&minors);
        probe.check(0, m >= 1 && 2 * m <= n, || format!("ind {m}"));
        for chain in minors.chains(m) {
            let ok = chain.iter().enumerate().all(|(i, &r)| minors.records[r].ess + 2 * (i + 1) == n);
            probe.check(1, ok, || {
                let e: Vec<usize> = chain.iter().map(|&r| minors.records[r].ess).collect();
                format!("chain of length {m} has ess {e:?}")
            });
        }
        if n > 2 && 2 * m < n {
            for (r, rec) in minors.records.iter().enumerate() {
                if rec.depth < m {
                    probe.check(2, reaches_depth(&minors, r, m), || {
                        format!("minor {} at depth {} reaches no minor of depth {m}", rec.function, rec.depth)
                    });
                }
            }
        }
    })
}

fn remark2_1(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let n = ctx.n;
    ctx.nontrivial_phase(0, false, notes, nontrivial(n), |f, _, probe| {
        for (u, v) in pairs(n) {
            let h = identify(f, u, v).expect("essential pair");
            probe.check(0, is_symmetric(&h), || format!("f_{{{}<-{}}} = {h} is not symmetric", u + 1, v + 1));
        }
    })
}

fn remark2_2(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let n = ctx.n;
    if n <= 2 {
        notes.push(format!("needs n > 2, got n = {n}"));
        return Ok(ctx.empty());
    }
    ctx.nontrivial_phase(0, false, notes, full_gap(n, 2), |f, _, probe| {
        let minors = all_minors(f);
        let m = ind(&minors);
        for rec in &minors.records {
            let l = rec.depth;
            let Some(e) = n.checked_sub(2 * l) else {
                probe.check(0, false, || format!("minor {} at depth {l} exceeds n/2", rec.function));
                continue;
            };
            let p = if l < m { 2 } else { e };
            let ok = rec.ess == e && (e < 2 || gap(&rec.function).ok() == Some(p));
            probe.check(0, ok, || {
                format!(
                    "minor {} at depth {l} (ind {m}) has {}, expected ess {e}, gap {p}",
                    rec.function,
                    describe(&rec.function)
                )
            });
        }
    })
}

/// Gap-n normal-form coefficients read off a symmetric `f`.
fn normal_form_of(f: &FiniteFunction, sets: &[Vec<u8>]) -> GapNSpec {
    let a0 = f.table()[0];
    GapNSpec { a0, b: sets.iter().map(|s| (s.clone(), value_on(f, s))).collect() }
}

fn thm2_2(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let (k, n) = (ctx.k, ctx.n);
    if !(3..=k).contains(&n) {
        notes.push(format!("needs 3 <= n <= k, got n = {n}, k = {k}"));
        return Ok(ctx.empty());
    }
    let sets = subsets(k, n);
    let class = ctx.nontrivial_phase(0, true, notes, full_gap(n, n), |f, _, probe| {
        let rebuilt = construct_gap_n(k, n, &normal_form_of(f, &sets));
        probe.check(0, rebuilt.as_ref() == Ok(f), || format!("normal form gives {rebuilt:?}"));
    })?;
    let image = ctx.digit_phase(
        1,
        sets.len() + 1,
        true,
        |d| {
            if all_equal(d) {
                return None;
            }
            let spec = GapNSpec { a0: d[0], b: sets.iter().cloned().zip(d[1..].iter().copied()).collect() };
            construct_gap_n(k, n, &spec).ok()
        },
        |_, _| true,
        |f, info, probe| {
            let ok = is_symmetric(f) && info.ess == n && info.gap == Some(n);
            probe.check(1, ok, || format!("constructed function has {}", describe(f)));
        },
    )?;
    let mut found = class.merge(image);
    if ctx.opts.mode == Mode::Exhaustive {
        check_image(&mut found, 2);
    }
    found.collected.clear();
    Ok(found)
}

fn cor2_1(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let (k, n) = (ctx.k, ctx.n);
    if ctx.opts.mode != Mode::Exhaustive {
        notes.push("class size needs an exhaustive run".into());
        return Ok(ctx.empty());
    }
    if !(2..=k).contains(&n) {
        notes.push(format!("needs 2 <= n <= k, got n = {n}, k = {k}"));
        return Ok(ctx.empty());
    }
    let mut found = ctx.nontrivial_phase(0, false, notes, full_gap(n, n), |_, _, _| {})?;
    let expected = crate::census::gap_n_class_size(k, n);
    let c = binomial(k as u64, n as u64);
    notes.push(format!(
        "k^(C(k,n)+1) - k = {}; k*C(k,n) + 1 - k = {}",
        expected.map_or("overflow".into(), |v| v.to_string()),
        k as u128 * c + 1 - k as u128
    ));
    let count = found.instances;
    found.check_global(0, expected == Some(count as u128), || format!("counted {count}, expected {expected:?}"));
    Ok(found)
}

fn thm2_3(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let (k, n) = (ctx.k, ctx.n);
    if n != 3 || k < 3 {
        notes.push(format!("needs n = 3 and k >= 3, got n = {n}, k = {k}"));
        return Ok(ctx.empty());
    }
    let sets = subsets(k, 3);
    let family_spec = |family, a: &[u8], b: &[u8]| TernaryGap2Spec {
        family,
        a: a.to_vec(),
        b: sets.iter().cloned().zip(b.iter().copied()).collect(),
    };
    let class = ctx.nontrivial_phase(0, true, notes, full_gap(3, 2), |f, _, probe| {
        let a: Vec<u8> = (0..k as u8).map(|i| value_on(f, &[i, i, i])).collect();
        let b: Vec<u8> = sets.iter().map(|s| value_on(f, s)).collect();
        let ok = [Gap2Family::Minority, Gap2Family::Majority]
            .into_iter()
            .any(|fam| construct_gap2_ternary(k, &family_spec(fam, &a, &b)).as_ref() == Ok(f));
        probe.check(0, ok, || "matches neither ternary family".into());
    })?;
    let mut found = class;
    for (phase, family) in [(1u8, Gap2Family::Minority), (2, Gap2Family::Majority)] {
        let image = ctx.digit_phase(
            phase,
            k + sets.len(),
            true,
            |d| {
                if all_equal(&d[..k]) {
                    return None;
                }
                construct_gap2_ternary(k, &family_spec(family, &d[..k], &d[k..])).ok()
            },
            |_, _| true,
            |f, info, probe| {
                let ok = is_symmetric(f) && info.ess == 3 && info.gap == Some(2);
                probe.check(1, ok, || format!("{family:?} family member has {}", describe(f)));
            },
        )?;
        found = found.merge(image);
    }
    if ctx.opts.mode == Mode::Exhaustive {
        check_image(&mut found, 2);
    }
    found.collected.clear();
    Ok(found)
}

/// Compares the class collected in phase 0 with the deduplicated constructor image of later phases.
fn check_image(found: &mut Findings, slot: usize) {
    let class: BTreeSet<&FiniteFunction> = found.collected.iter().filter(|c| c.0 == 0).map(|c| &c.2).collect();
    let image: BTreeSet<&FiniteFunction> = found.collected.iter().filter(|c| c.0 != 0).map(|c| &c.2).collect();
    let only_class = class.difference(&image).count();
    let only_image = image.difference(&class).count();
    let (a, b) = (class.len(), image.len());
    found.check_global(slot, only_class == 0 && only_image == 0, || {
        format!("class has {a} functions, image {b}; {only_class} only in the class, {only_image} only in the image")
    });
}

fn thm2_4(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let (k, n) = (ctx.k, ctx.n);
    ctx.nontrivial_phase(0, false, notes, nontrivial(n), |f, info, probe| {
        let p = info.gap.unwrap_or(0);
        let m = gap_index(f).unwrap_or(0);
        let diagonal = f.diagonal_values();
        if p == n || n % 2 == 0 || 2 * m + 1 < n {
            probe.check(0, all_equal(&diagonal), || format!("gap {p}, ind {m}, diagonal {diagonal:?}"));
        }
        if n % 2 == 1 && (3..=k).contains(&n) && p == 2 && 2 * m + 1 == n {
            probe.check(1, !all_equal(&diagonal), || format!("ind {m}, constant diagonal {diagonal:?}"));
        }
    })
}

fn check_decomposition(f: &FiniteFunction, probe: &mut Probe) {
    let n = f.arity();
    let pair = match extract_decomposition(f) {
        Ok(pair) => pair,
        Err(e) => {
            probe.check(0, false, || format!("no decomposition: {e}"));
            return;
        }
    };
    let back = recompose(&pair.g, &pair.h);
    probe.check(0, back.as_ref() == Ok(f), || format!("recomposition gives {back:?}"));
    probe.check(1, is_symmetric(&pair.g) && is_symmetric(&pair.h), || format!("g = {}, h = {}", pair.g, pair.h));
    let vanishes = points(f.k(), n).zip(pair.h.table()).all(|(p, &v)| v == 0 || classify_tuple(&p) == TupleClass::Dis);
    probe.check(2, vanishes, || format!("h = {} is nonzero on an Eq point", pair.h));
    let m = gap_index(f).unwrap_or(0);
    let expected = match m {
        0..=1 => None,
        2 => Some(n - 2),
        _ => Some(2),
    };
    if let Some(p) = expected {
        probe.check(3, in_class(&pair.g, n - 2, p), || format!("ind {m}, g = {} has {}", pair.g, describe(&pair.g)));
    }
}

/// Multiset-level recomposition: per class of arity `n`, either the rank of its
/// set among the n-subsets or the `(g rank, C(mult, 2))` terms of its Eq value.
enum ClassRule {
    Dis(usize),
    Eq(Vec<(usize, usize)>),
}

fn recomposition_rules(k: usize, n: usize) -> Result<(MultisetIndex, MultisetIndex, Vec<ClassRule>)> {
    let f_index = MultisetIndex::new(k, n)?;
    let g_index = MultisetIndex::new(k, n - 2)?;
    let sets = subsets(k, n);
    let rules = f_index
        .classes()
        .iter()
        .map(|m| {
            if m.windows(2).all(|w| w[0] != w[1]) {
                return ClassRule::Dis(sets.binary_search(m).expect("distinct multiset is a set"));
            }
            let mut terms = Vec::new();
            for (v, run) in &m.iter().chunk_by(|&&c| c) {
                let mult = run.count();
                if mult >= 2 {
                    let mut rest = m.clone();
                    let at = rest.iter().position(|&c| c == v).expect("present");
                    rest.drain(at..at + 2);
                    terms.push((g_index.rank(&rest).expect("sorted"), (mult * (mult - 1) / 2) % k));
                }
            }
            ClassRule::Eq(terms)
        })
        .collect();
    Ok((f_index, g_index, rules))
}

fn thm2_5(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let (k, n) = (ctx.k, ctx.n);
    if n.min(k) <= 3 {
        notes.push(format!("needs 3 < min(n, k), got n = {n}, k = {k}"));
        return Ok(ctx.empty());
    }
    let symmetric = match ctx.symmetric_phase(0, false, full_gap(n, 2), |f, _, probe| check_decomposition(f, probe)) {
        Ok(found) => found,
        Err(Error::OverBudget { required, .. }) => {
            notes.push(format!("symmetric population skipped: {required} candidates exceed the budget"));
            ctx.empty()
        }
        Err(e) => return Err(e),
    };
    let (f_index, g_index, rules) = recomposition_rules(k, n)?;
    let g_len = g_index.classes().len();
    let recomposed = ctx.digit_phase(
        1,
        g_len + binomial(k as u64, n as u64) as usize,
        false,
        |d| {
            let (g, h) = d.split_at(g_len);
            let values: Vec<u8> = rules
                .iter()
                .map(|rule| match rule {
                    ClassRule::Dis(s) => h[*s],
                    ClassRule::Eq(terms) => (terms.iter().map(|&(r, c)| c * g[r] as usize).sum::<usize>() % k) as u8,
                })
                .collect();
            let mut table = Vec::new();
            f_index.expand_into(&values, &mut table);
            Some(FiniteFunction::from_raw(k, n, table))
        },
        |_, info| info.ess == n && info.gap == Some(2),
        |f, _, probe| check_decomposition(f, probe),
    )?;
    notes.push(format!("{} gap-2 functions from recomposed (g, h) pairs", recomposed.instances));
    Ok(symmetric.merge(recomposed))
}

/// Coefficients and constant of a linear function, read off its table.
fn linear_coefficients(f: &FiniteFunction) -> (Vec<u8>, u8) {
    let (k, n) = (f.k(), f.arity());
    let c = f.table()[0];
    let coefficients = (0..n)
        .map(|i| {
            let mut unit = vec![0u8; n];
            unit[i] = 1;
            ((f.table()[index_of(&unit, k).expect("unit point")] as usize + k - c as usize) % k) as u8
        })
        .collect();
    (coefficients, c)
}

fn thm2_6(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let (k, n) = (ctx.k, ctx.n);
    if n < 2 {
        notes.push(format!("needs n >= 2, got n = {n}"));
        return Ok(ctx.empty());
    }
    let even = k % 2 == 0;
    let half = vec![(k / 2) as u8; n];
    let build = |d: &[u8]| construct_linear(k, &LinearSpec { coefficients: d[..n].to_vec(), constant: d[n] }).ok();
    let found = ctx.digit_phase(
        0,
        n + 1,
        false,
        build,
        |_, info| info.ess == n,
        |f, info, probe| {
            let p = info.gap.unwrap_or(0);
            let (a, _) = linear_coefficients(f);
            if !even {
                probe.check(1, p <= 1, || format!("coefficients {a:?}, gap {p}"));
            } else if a == half {
                probe.check(0, p == 2, || format!("(k/2)(x1 + ... + xn) + c has gap {p}"));
            } else if n >= 3 {
                probe.check(2, p <= 1, || format!("coefficients {a:?}, gap {p}"));
            }
        },
    )?;
    let lower = ctx.digit_phase(
        1,
        n + 1,
        false,
        build,
        |_, info| info.ess < n && info.gap.is_some_and(|p| p >= 2),
        |_, _, _| {},
    )?;
    let nonzero = (k as u128 - 1).pow(n as u32) * k as u128;
    notes.push(format!("{} linear specs, {nonzero} with every coefficient nonzero", (k as u128).pow(n as u32 + 1)));
    notes.push(format!("linear functions with gap >= 2 and fewer than n essential variables: {}", lower.instances));
    Ok(found)
}

fn thm3_1(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let n = ctx.n;
    if n <= 2 {
        notes.push(format!("needs n > 2, got n = {n}"));
        return Ok(ctx.empty());
    }
    ctx.nontrivial_phase(0, false, notes, full_gap(n, n), |f, _, probe| {
        let dom = dominants(f).expect("symmetric population");
        for i in 0..n {
            for c in (0..f.k() as u8).filter(|c| !dom.contains(c)) {
                let g = restrict(f, i, c).expect("in range");
                let ok = is_symmetric(&g) && in_class(&g, n - 1, n - 1);
                probe.check(0, ok, || format!("f(x{}={c}) = {g} has {}", i + 1, describe(&g)));
            }
        }
    })
}

fn lemma3_1(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let (k, n) = (ctx.k, ctx.n);
    if n > k {
        notes.push(format!("needs n <= k, got n = {n}, k = {k}"));
        return Ok(ctx.empty());
    }
    let bound = sub_bound(n, k);
    let sets = subsets(k, n);
    ctx.nontrivial_phase(0, false, notes, full_gap(n, n), |f, _, probe| {
        let sub = sub_count(f) as u128;
        let range = f.range().len() as u128;
        probe.check(0, sub <= bound + range, || format!("sub {sub} > {bound} + {range}"));
        if f.table()[0] == 0 && sets.iter().all(|s| value_on(f, s) != 0) {
            probe.check(1, sub == bound + range, || format!("sub {sub} != {bound} + {range}"));
        }
    })
}

fn thm3_2(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let (k, n) = (ctx.k, ctx.n);
    if n.min(k) < 3 {
        notes.push(format!("needs 3 <= min(n, k), got n = {n}, k = {k}"));
        return Ok(ctx.empty());
    }
    if n < 6 {
        notes.push(format!("part (i) needs ind > 2, impossible for n = {n} < 6"));
    }
    ctx.nontrivial_phase(0, false, notes, full_gap(n, 2), |f, _, probe| {
        let m = gap_index(f).unwrap_or(0);
        let (k, n) = (f.k(), f.arity());
        if m >= 2 {
            let (slot, p) = if m > 2 { (0, 2) } else { (1, n - 2) };
            for i in 0..n {
                for j in i + 1..n {
                    for c in 0..k as u8 {
                        let t = restrict(&restrict(f, j, c).expect("in range"), i, c).expect("in range");
                        probe.check(slot, in_class(&t, n - 2, p), || {
                            format!("ind {m}: f(x{}={c}, x{}={c}) = {t} has {}", i + 1, j + 1, describe(&t))
                        });
                    }
                }
            }
        }
        let wdom = match weak_dominants(f) {
            Ok(w) => w,
            Err(e) => {
                probe.check(2, false, || format!("weak dominants undefined: {e}"));
                return;
            }
        };
        for i in 0..n {
            for c in 0..k as u8 {
                let t = restrict(f, i, c).expect("in range");
                let (slot, p) = if wdom.contains(&c) { (2, n - 1) } else { (3, 2) };
                probe.check(slot, in_class(&t, n - 1, p), || {
                    format!("Wdom {wdom:?}: f(x{}={c}) = {t} has {}", i + 1, describe(&t))
                });
            }
        }
    })
}

fn cor3_1(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let n = ctx.n;
    if n < 3 {
        notes.push(format!("restrictions of arity {} have no gap", n.saturating_sub(1)));
        return Ok(ctx.empty());
    }
    ctx.nontrivial_phase(0, false, notes, nontrivial(n), |f, _, probe| {
        let dom = dominants(f).expect("symmetric population");
        for c in (0..f.k() as u8).filter(|c| !dom.contains(c)) {
            let g = restrict(f, n - 1, c).expect("in range");
            probe.check(0, gap(&g).is_ok_and(|p| p >= 2), || format!("f(x{n}={c}) = {g} has {}", describe(&g)));
        }
    })
}

fn thm4_1(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let n = ctx.n;
    ctx.nontrivial_phase(0, false, notes, nontrivial(n), |f, _, probe| {
        let report = separable_sets(f);
        let all: BTreeSet<Vec<usize>> = (0..n).powerset().collect();
        let found: BTreeSet<Vec<usize>> = report.separable_sets.into_iter().collect();
        let missing: Vec<_> = all.difference(&found).collect();
        probe.check(0, missing.is_empty(), || format!("sets not separable: {missing:?}"));
    })
}

fn cor4_1(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let n = ctx.n;
    ctx.nontrivial_phase(0, false, notes, nontrivial(n), |f, _, probe| {
        let sep = separable_sets(f).sep_count;
        probe.check(0, sep == 1 << n, || format!("sep {sep}"));
    })
}

fn cor4_2(ctx: &Ctx, notes: &mut Vec<String>) -> Result<Findings> {
    let n = ctx.n;
    ctx.nontrivial_phase(0, false, notes, nontrivial(n), |f, _, probe| {
        let sub = sub_count(f);
        probe.check(0, sub >= 1 << n, || format!("sub {sub}"));
    })
}

fn willard(ctx: &Ctx, _: &mut Vec<String>) -> Result<Findings> {
    let (k, n) = (ctx.k, ctx.n);
    let len = crate::function::table_len(k, n)?;
    ctx.digit_phase(
        0,
        len,
        false,
        |d| Some(FiniteFunction::from_raw(k, n, d.to_vec())),
        |_, info| n >= 2 && info.ess == n,
        |_, info, probe| {
            let p = info.gap.unwrap_or(0);
            if k < n {
                probe.check(0, p <= 2, || format!("gap {p}"));
            }
            probe.check(1, p <= n.min(k), || format!("gap {p}"));
        },
    )
}
