//! Reports and their human-readable renderings. Variables are numbered from 1.

use std::fmt::Write;

use serde::Serialize;
use symgap::census::Census;
use symgap::function::tuple_of;
use symgap::suites::SuiteReport;
use symgap::{dominants, gap_profile, is_symmetric, separable_sets, weak_dominants, FiniteFunction};

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub k: usize,
    pub n: usize,
    pub ess: usize,
    pub essential: Vec<usize>,
    pub gap: Option<usize>,
    pub ind: Option<usize>,
    pub class_label: Option<String>,
    pub symmetric: bool,
    pub dominants: Option<Vec<u8>>,
    pub weak_dominants: Option<Vec<u8>>,
    pub range: Vec<u8>,
    pub sub: usize,
    pub positional_sub: usize,
    pub sep: usize,
    pub separable_sets: Vec<Vec<usize>>,
    pub diagonal: Vec<u8>,
}

impl AnalyzeReport {
    pub fn of(f: &FiniteFunction) -> Self {
        let profile = gap_profile(f);
        let symmetric = is_symmetric(f);
        let sep = separable_sets(f);
        Self {
            k: f.k(),
            n: f.arity(),
            ess: profile.ess,
            essential: one_based(&profile.essential),
            gap: profile.gap,
            ind: profile.index,
            class_label: profile.class_label.map(|c| c.to_string()),
            symmetric,
            dominants: dominants(f).ok().map(|s| s.into_iter().collect()),
            weak_dominants: weak_dominants(f).ok().map(|s| s.into_iter().collect()),
            range: f.range().into_iter().collect(),
            sub: sep.sub_count,
            positional_sub: sep.positional_sub_count,
            sep: sep.sep_count,
            separable_sets: sep.separable_sets.iter().map(|s| one_based(s)).collect(),
            diagonal: f.diagonal_values(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteEntry<'a> {
    pub name: &'a str,
    pub summary: &'a str,
}

fn one_based(positions: &[usize]) -> Vec<usize> {
    positions.iter().map(|p| p + 1).collect()
}

fn vars(positions: &[usize]) -> String {
    let names: Vec<String> = positions.iter().map(|p| format!("x{p}")).collect();
    format!("{{{}}}", names.join(", "))
}

fn values(vs: &[u8]) -> String {
    let items: Vec<String> = vs.iter().map(u8::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn or_undefined<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "undefined".to_string(), |v| v.to_string())
}

pub fn analyze_text(r: &AnalyzeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "k: {}  n: {}", r.k, r.n);
    let _ = writeln!(s, "ess: {} {}", r.ess, vars(&r.essential));
    let _ = writeln!(s, "gap: {}", or_undefined(r.gap));
    let _ = writeln!(s, "ind: {}", or_undefined(r.ind));
    let _ = writeln!(s, "class: {}", r.class_label.as_deref().unwrap_or("none"));
    let _ = writeln!(s, "symmetric: {}", if r.symmetric { "yes" } else { "no" });
    if r.symmetric {
        let _ = writeln!(s, "Dom: {}", r.dominants.as_deref().map_or("undefined".into(), values));
        let _ = writeln!(s, "Wdom: {}", r.weak_dominants.as_deref().map_or("undefined".into(), values));
    }
    let _ = writeln!(s, "range: {}", values(&r.range));
    let _ = writeln!(s, "sub: {} (positional {})", r.sub, r.positional_sub);
    let sets: Vec<String> = r.separable_sets.iter().map(|set| vars(set)).collect();
    let _ = writeln!(s, "sep: {} {}", r.sep, sets.join(" "));
    let _ = writeln!(s, "diagonal: {}", values(&r.diagonal));
    s
}

/// One line per point: `c1 c2 ... cn -> f(c)`.
pub fn function_text(f: &FiniteFunction) -> String {
    let (k, n) = (f.k(), f.arity());
    let mut s = format!("k: {k}  n: {n}\n");
    for (m, v) in f.table().iter().enumerate() {
        let point = tuple_of(m, k, n);
        let coords: Vec<String> = point.iter().map(u8::to_string).collect();
        let _ = writeln!(s, "{} -> {v}", coords.join(" "));
    }
    s
}

pub fn census_text(c: &Census) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "census k={} n={} ({}), {} functions", c.k, c.n, mode_text(&c.mode), c.total);
    for b in &c.counts {
        let _ = writeln!(s, "  ess={} gap={}: {}", b.ess, or_undefined(b.gap), b.count);
    }
    if !c.ind_distribution.is_empty() {
        let _ = writeln!(s, "gap index among gap >= 2:");
        for b in &c.ind_distribution {
            let _ = writeln!(s, "  ind={}: {}", b.ind, b.count);
        }
    }
    s
}

fn mode_text(mode: &symgap::Mode) -> String {
    match mode {
        symgap::Mode::Exhaustive => "exhaustive".into(),
        symgap::Mode::Sample { count, seed } => format!("sample of {count}, seed {seed}"),
    }
}

pub fn suite_text(r: &SuiteReport) -> String {
    let mut s = String::new();
    let verdict = match (r.passed, r.vacuous) {
        (true, true) => "PASS (vacuous)",
        (true, false) => "PASS",
        (false, _) => "FAIL",
    };
    let p = &r.parameters;
    let _ = writeln!(s, "{} k={} n={} ({}): {verdict}", r.suite, p.k, p.n, mode_text(&p.mode));
    let _ = writeln!(s, "instances checked: {}", r.instances_checked);
    for a in &r.assertions {
        let flag = if a.vacuous { " (vacuous)" } else { "" };
        let _ = writeln!(s, "  {}: {} checked, {} violations{flag}", a.id, a.checked, a.violations);
    }
    for note in &r.notes {
        let _ = writeln!(s, "note: {note}");
    }
    if r.violation_count > 0 {
        let _ = writeln!(s, "violations: {} (showing {})", r.violation_count, r.violations.len());
        for v in &r.violations {
            let table = v.function.as_ref().map(|d| {
                let entries: Vec<String> = d.table.iter().map(u64::to_string).collect();
                format!(" [{}]", entries.join(" "))
            });
            let detail = v.detail.as_deref().map(|d| format!(": {d}")).unwrap_or_default();
            let _ = writeln!(s, "  {}{}{detail}", v.assertion, table.unwrap_or_default());
        }
    }
    s
}

pub fn suites_text(entries: &[SuiteEntry<'_>]) -> String {
    let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
    entries.iter().map(|e| format!("{:width$}  {}\n", e.name, e.summary)).collect()
}
