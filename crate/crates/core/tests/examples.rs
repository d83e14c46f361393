mod common;

use std::collections::BTreeSet;

use symgap::census::select_symmetric;
use symgap::{
    census, construct_gap_n, construct_linear, enumerate_symmetric, run_suite, FiniteFunction, GapNSpec, LinearSpec,
    RunOptions,
};

#[test]
fn enumeration_sizes() {
    let opts = RunOptions::exhaustive();
    assert_eq!(enumerate_symmetric(2, 2, &opts).unwrap().len(), 8);
    assert_eq!(enumerate_symmetric(3, 3, &opts).unwrap().len(), 59_049);
    assert_eq!(enumerate_symmetric(3, 4, &opts).unwrap().len(), 14_348_907);
}

#[test]
fn census_at_3_3_matches_oracle_gaps() {
    let (k, n) = (3, 3);
    let c = census(k, n, &RunOptions::exhaustive()).unwrap();
    let population = enumerate_symmetric(k, n, &RunOptions::exhaustive()).unwrap();
    let mut expected = std::collections::BTreeMap::new();
    for f in population.iter() {
        let key = (common::essential(f.table(), k, n).len(), common::gap(f.table(), k, n));
        *expected.entry(key).or_insert(0u64) += 1;
    }
    let got: std::collections::BTreeMap<_, _> = c.counts.iter().map(|b| ((b.ess, b.gap), b.count)).collect();
    assert_eq!(got, expected);
    assert_eq!(c.count(3, Some(3)), 6);
}

#[test]
fn full_gap_constructor_image_is_the_census_bucket() {
    let (k, n) = (3, 3);
    let mut image = BTreeSet::new();
    for a0 in 0..3 {
        for b in 0..3 {
            let spec = GapNSpec { a0, b: [(vec![0, 1, 2], b)].into_iter().collect() };
            if let Ok(f) = construct_gap_n(k, n, &spec) {
                image.insert(f);
            }
        }
    }
    let bucket: BTreeSet<FiniteFunction> =
        select_symmetric(k, n, &RunOptions::exhaustive(), |_, info| info.ess == n && info.gap == Some(n))
            .unwrap()
            .into_iter()
            .collect();
    assert_eq!(image.len(), 6);
    assert_eq!(image, bucket);
}

/// All `k^4` specs `a1 x1 + a2 x2 + a3 x3 + c`, classified by the oracle.
fn linear_gap_two_witnesses(k: usize) -> (usize, Vec<Vec<u8>>) {
    let mut full_arity = 0;
    let mut witnesses = Vec::new();
    for code in 0..k.pow(4) {
        let digits: Vec<u8> = (0..4).map(|i| (code / k.pow(i) % k) as u8).collect();
        let spec = LinearSpec { coefficients: digits[..3].to_vec(), constant: digits[3] };
        let f = construct_linear(k, &spec).unwrap();
        if common::essential(f.table(), k, 3).len() == 3 {
            full_arity += 1;
            if common::gap(f.table(), k, 3).is_some_and(|p| p >= 2) {
                witnesses.push(spec.coefficients);
            }
        }
    }
    (full_arity, witnesses)
}

#[test]
fn linear_gap_needs_even_radix_and_half_coefficients() {
    for k in 2..=5 {
        let (_, witnesses) = linear_gap_two_witnesses(k);
        if k % 2 == 0 {
            let half = (k / 2) as u8;
            assert!(!witnesses.is_empty(), "k={k}");
            assert!(witnesses.iter().all(|c| c.iter().all(|&a| a == half)), "k={k}: {witnesses:?}");
        } else {
            assert!(witnesses.is_empty(), "k={k}: {witnesses:?}");
        }
    }
}

#[test]
fn linear_suite_at_5_3_covers_every_full_arity_spec() {
    let (full_arity, _) = linear_gap_two_witnesses(5);
    let report = run_suite("thm2_6", 5, 3, &RunOptions::exhaustive()).unwrap();
    assert!(report.passed, "{report:?}");
    assert_eq!(full_arity, 4 * 4 * 4 * 5);
    assert_eq!(report.assertion("odd_no_gap").unwrap().checked, full_arity as u64);
}

#[test]
fn two_variable_linear_function_over_odd_radix_can_have_gap_two() {
    let f = construct_linear(3, &LinearSpec { coefficients: vec![1, 2], constant: 0 }).unwrap();
    assert_eq!(common::gap(f.table(), 3, 2), Some(2));
    assert_eq!(symgap::gap(&f).unwrap(), 2);
}

#[test]
fn separability_suite_at_3_3() {
    let report = run_suite("cor4_1", 3, 3, &RunOptions::exhaustive()).unwrap();
    assert!(report.passed);
    assert_eq!(report.instances_checked, 150);
    let gap_functions =
        select_symmetric(3, 3, &RunOptions::exhaustive(), |_, info| info.gap.is_some_and(|p| p >= 2)).unwrap();
    assert_eq!(gap_functions.len(), 150);
    for f in gap_functions {
        assert_eq!(common::separable(f.table(), 3, 3).len(), 8);
    }
}

#[test]
fn gap_dichotomy_suite_at_3_4() {
    let report = run_suite("lemma2_2", 3, 4, &RunOptions::exhaustive().with_workers(4)).unwrap();
    assert!(report.passed);
    assert_eq!(report.violation_count, 0);
    assert_eq!(report.instances_checked, 78);
}

#[test]
fn unknown_suite_is_an_error() {
    assert!(matches!(run_suite("no_such_suite", 3, 3, &RunOptions::exhaustive()), Err(symgap::Error::UnknownSuite(_))));
}
