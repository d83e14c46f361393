//! Brute-force reference implementations, written against raw `u8` tables
//! without using the library's own algorithms.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

/// Every point of `K^n`, first coordinate most significant.
pub fn all_points(k: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..k as u8).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn index(point: &[u8], k: usize) -> usize {
    point.iter().fold(0, |acc, &c| acc * k + c as usize)
}

pub fn tabulate(k: usize, n: usize, f: impl Fn(&[u8]) -> u8) -> Vec<u8> {
    all_points(k, n).iter().map(|p| f(p)).collect()
}

pub fn essential(table: &[u8], k: usize, n: usize) -> Vec<usize> {
    (0..n)
        .filter(|&i| {
            all_points(k, n).iter().any(|p| {
                (0..k as u8).any(|c| {
                    let mut q = p.clone();
                    q[i] = c;
                    table[index(p, k)] != table[index(&q, k)]
                })
            })
        })
        .collect()
}

/// `x_i := x_j`, keeping all `n` positions (x_i becomes fictive).
pub fn identified(table: &[u8], k: usize, n: usize, i: usize, j: usize) -> Vec<u8> {
    tabulate(k, n, |p| {
        let mut q = p.to_vec();
        q[i] = q[j];
        table[index(&q, k)]
    })
}

/// Essential arity gap, `None` below two essential variables.
pub fn gap(table: &[u8], k: usize, n: usize) -> Option<usize> {
    let ess = essential(table, k, n);
    if ess.len() < 2 {
        return None;
    }
    let mut best = 0;
    for &i in &ess {
        for &j in &ess {
            if i != j {
                best = best.max(essential(&identified(table, k, n, i, j), k, n).len());
            }
        }
    }
    Some(ess.len() - best)
}

/// Invariance under swapping any two essential positions; fictive positions are ignored.
pub fn is_symmetric(table: &[u8], k: usize, n: usize) -> bool {
    let ess = essential(table, k, n);
    all_points(k, n).iter().all(|p| {
        ess.iter().all(|&i| {
            ess.iter().all(|&j| {
                let mut q = p.clone();
                q.swap(i, j);
                table[index(p, k)] == table[index(&q, k)]
            })
        })
    })
}

/// The function read on its essential variables only: `(arity, table)`.
pub fn core(table: &[u8], k: usize, n: usize) -> (usize, Vec<u8>) {
    let ess = essential(table, k, n);
    let t = tabulate(k, ess.len(), |p| {
        let mut full = vec![0u8; n];
        for (&pos, &c) in ess.iter().zip(p) {
            full[pos] = c;
        }
        table[index(&full, k)]
    });
    (ess.len(), t)
}

fn fixed(table: &[u8], k: usize, n: usize, i: usize, c: u8) -> Vec<u8> {
    tabulate(k, n, |p| {
        let mut q = p.to_vec();
        q[i] = c;
        table[index(&q, k)]
    })
}

/// Everything reachable by repeatedly fixing an essential variable to a constant.
/// Each entry keeps all `n` positions; fixed positions are fictive.
pub fn restrictions(table: &[u8], k: usize, n: usize) -> Vec<Vec<u8>> {
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::from([table.to_vec()]);
    let mut out = Vec::new();
    while let Some(g) = queue.pop_front() {
        for i in essential(&g, k, n) {
            for c in 0..k as u8 {
                let h = fixed(&g, k, n, i, c);
                if seen.insert(h.clone()) {
                    out.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
    }
    out
}

/// `sub(f)` with subfunctions told apart as mappings on their essential variables.
pub fn sub(table: &[u8], k: usize, n: usize) -> usize {
    restrictions(table, k, n).iter().map(|g| core(g, k, n)).collect::<BTreeSet<_>>().len()
}

/// Essential sets of `f` and of every restriction, plus the empty set.
pub fn separable(table: &[u8], k: usize, n: usize) -> BTreeSet<Vec<usize>> {
    let mut sets: BTreeSet<Vec<usize>> = restrictions(table, k, n).iter().map(|g| essential(g, k, n)).collect();
    sets.insert(essential(table, k, n));
    sets.insert(Vec::new());
    sets
}

/// `S(n, alpha)` as an orbit count: the number of permutations `s` with `alpha∘s = x`, mod k.
pub fn orbit_count(k: usize, n: usize, alpha: &[u8]) -> Vec<u8> {
    let mut sorted_alpha = alpha.to_vec();
    sorted_alpha.sort_unstable();
    let factorial = |m: usize| (1..=m).product::<usize>();
    tabulate(k, n, |p| {
        let mut q = p.to_vec();
        q.sort_unstable();
        if q != sorted_alpha {
            return 0;
        }
        let stabiliser: usize = (0..k as u8).map(|c| factorial(p.iter().filter(|&&x| x == c).count())).product();
        (stabiliser % k) as u8
    })
}

pub fn all_distinct(p: &[u8]) -> bool {
    (0..p.len()).all(|i| (0..i).all(|j| p[i] != p[j]))
}
