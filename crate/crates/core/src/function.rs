//! Value-table representation of functions `K^n -> K` with `K = {0, ..., k-1}`.
//!
//! A table is laid out in the order of the sum-of-conjunctions listing: the
//! point `(c_1, ..., c_n)` sits at index `c_1*k^(n-1) + ... + c_n`, so the
//! first coordinate is the most significant digit. Positions are 0-based in
//! the API; reports print them 1-based as `x1 ... xn`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::document::FunctionDocument;
use crate::error::{Error, Result};

/// Largest table the library will allocate.
pub const MAX_TABLE_LEN: usize = 1 << 24;

/// An n-ary k-valued function stored as its full value table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FunctionDocument", into = "FunctionDocument")]
pub struct FiniteFunction {
    k: usize,
    n: usize,
    table: Vec<u8>,
}

/// Number of points of `K^n`, or an error when it exceeds [`MAX_TABLE_LEN`].
pub fn table_len(k: usize, n: usize) -> Result<usize> {
    check_radix(k)?;
    let mut len = 1usize;
    for _ in 0..n {
        len = len
            .checked_mul(k)
            .filter(|&l| l <= MAX_TABLE_LEN)
            .ok_or_else(|| Error::Domain(format!("table for k={k}, n={n} is too large")))?;
    }
    Ok(len)
}

pub(crate) fn check_radix(k: usize) -> Result<()> {
    if (2..=256).contains(&k) {
        Ok(())
    } else {
        Err(Error::Domain(format!("radix must lie in 2..=256, got {k}")))
    }
}

/// `k^(n-1-i)`: the index distance between points that differ by one in coordinate `i`.
#[inline]
pub(crate) fn stride(k: usize, n: usize, i: usize) -> usize {
    k.pow((n - 1 - i) as u32)
}

/// Table index of a point: `sum c_i * k^(n-i)`.
pub fn index_of(point: &[u8], k: usize) -> Result<usize> {
    check_radix(k)?;
    let mut m = 0usize;
    for &c in point {
        if c as usize >= k {
            return Err(Error::Domain(format!("coordinate {c} is not below k={k}")));
        }
        m = m
            .checked_mul(k)
            .and_then(|m| m.checked_add(c as usize))
            .ok_or_else(|| Error::Domain("point index overflows".into()))?;
    }
    Ok(m)
}

/// Inverse of [`index_of`] for a fixed arity.
pub fn tuple_of(mut index: usize, k: usize, n: usize) -> Vec<u8> {
    let mut point = vec![0u8; n];
    for slot in point.iter_mut().rev() {
        *slot = (index % k) as u8;
        index /= k;
    }
    point
}

/// All points of `K^n` in table order.
pub fn points(k: usize, n: usize) -> impl Iterator<Item = Vec<u8>> {
    let len = k.pow(n as u32);
    (0..len).map(move |m| tuple_of(m, k, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TupleClass {
    /// Some two coordinates coincide.
    Eq,
    /// All coordinates are pairwise distinct.
    Dis,
}

pub fn classify_tuple(point: &[u8]) -> TupleClass {
    let mut seen = [false; 256];
    for &c in point {
        if std::mem::replace(&mut seen[c as usize], true) {
            return TupleClass::Eq;
        }
    }
    TupleClass::Dis
}

/// `|Dis_k^n| = k (k-1) ... (k-n+1)`, zero when `n > k`.
pub fn dis_count(k: usize, n: usize) -> u128 {
    if n > k {
        return 0;
    }
    (0..n).map(|i| (k - i) as u128).product()
}

/// The embedding relation `beta <= alpha`.
///
/// Holds when every value of `beta` occurs in `alpha` exactly as often as in
/// `beta`. Matching positions must be distinct and no other coordinate of
/// `alpha` may repeat a matched value, which is the same condition.
pub fn embeds(beta: &[u8], alpha: &[u8]) -> bool {
    if beta.len() > alpha.len() {
        return false;
    }
    let mut mult_beta = [0usize; 256];
    let mut mult_alpha = [0usize; 256];
    for &d in beta {
        mult_beta[d as usize] += 1;
    }
    for &c in alpha {
        mult_alpha[c as usize] += 1;
    }
    beta.iter().all(|&d| mult_beta[d as usize] == mult_alpha[d as usize])
}

/// One conjunction `coefficient * x_1^{c_1} ... x_n^{c_n}` of a sum-of-conjunctions form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScTerm {
    pub coefficient: u8,
    pub exponents: Vec<u8>,
}

impl FiniteFunction {
    pub fn new(k: usize, n: usize, table: Vec<u8>) -> Result<Self> {
        let len = table_len(k, n)?;
        if table.len() != len {
            return Err(Error::Domain(format!("table for k={k}, n={n} needs {len} entries, got {}", table.len())));
        }
        if let Some(&v) = table.iter().find(|&&v| v as usize >= k) {
            return Err(Error::Domain(format!("table value {v} is not below k={k}")));
        }
        Ok(Self { k, n, table })
    }

    /// Skips validation; callers guarantee length and value range.
    pub(crate) fn from_raw(k: usize, n: usize, table: Vec<u8>) -> Self {
        debug_assert_eq!(table.len(), k.pow(n as u32));
        debug_assert!(table.iter().all(|&v| (v as usize) < k));
        Self { k, n, table }
    }

    /// Tabulates `f` over every point. Values are reduced modulo `k`.
    pub fn from_fn(k: usize, n: usize, mut f: impl FnMut(&[u8]) -> usize) -> Result<Self> {
        let len = table_len(k, n)?;
        let mut table = Vec::with_capacity(len);
        let mut point = vec![0u8; n];
        for _ in 0..len {
            table.push((f(&point) % k) as u8);
            // odometer increment, last coordinate fastest
            for slot in point.iter_mut().rev() {
                *slot += 1;
                if (*slot as usize) < k {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(Self { k, n, table })
    }

    pub fn constant(k: usize, n: usize, c: u8) -> Result<Self> {
        if c as usize >= k {
            return Err(Error::Domain(format!("constant {c} is not below k={k}")));
        }
        Ok(Self { k, n, table: vec![c; table_len(k, n)?] })
    }

    /// The projection `x_i`.
    pub fn projection(k: usize, n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::Domain(format!("position {i} out of range for arity {n}")));
        }
        Self::from_fn(k, n, |p| p[i] as usize)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn into_table(self) -> Vec<u8> {
        self.table
    }

    pub fn eval(&self, point: &[u8]) -> Result<u8> {
        if point.len() != self.n {
            return Err(Error::Domain(format!("point has {} coordinates, function arity is {}", point.len(), self.n)));
        }
        Ok(self.table[index_of(point, self.k)?])
    }

    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|&v| v == self.table[0])
    }

    /// Pointwise sum modulo k.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.k != other.k || self.n != other.n {
            return Err(Error::Domain("sum of functions with different radix or arity".into()));
        }
        let k = self.k as u16;
        let table = self.table.iter().zip(&other.table).map(|(&a, &b)| ((a as u16 + b as u16) % k) as u8).collect();
        Ok(Self::from_raw(self.k, self.n, table))
    }

    /// Multiplies every value by `c` modulo k.
    pub fn scale(&self, c: u8) -> Self {
        let k = self.k as u16;
        let table = self.table.iter().map(|&v| ((v as u16 * c as u16) % k) as u8).collect();
        Self::from_raw(self.k, self.n, table)
    }

    /// Nonzero terms of the sum-of-conjunctions form, in table order.
    ///
    /// The conjunctions are indicators of single points, so each coefficient
    /// is just the table value at its exponent tuple.
    pub fn sc_terms(&self) -> Vec<ScTerm> {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(m, &v)| ScTerm { coefficient: v, exponents: tuple_of(m, self.k, self.n) })
            .collect()
    }

    /// Sums `coefficient * indicator(exponents)` modulo k.
    pub fn from_sc(terms: &[ScTerm], n: usize, k: usize) -> Result<Self> {
        let mut table = vec![0u8; table_len(k, n)?];
        for term in terms {
            if term.exponents.len() != n {
                return Err(Error::Domain(format!("exponent tuple {:?} does not have arity {n}", term.exponents)));
            }
            if term.coefficient as usize >= k {
                return Err(Error::Domain(format!("coefficient {} is not below k={k}", term.coefficient)));
            }
            let m = index_of(&term.exponents, k)?;
            table[m] = ((table[m] as usize + term.coefficient as usize) % k) as u8;
        }
        Ok(Self::from_raw(k, n, table))
    }

    /// The set of values taken; `range(f)` is its size.
    pub fn range(&self) -> BTreeSet<u8> {
        self.table.iter().copied().collect()
    }

    /// `f(c, ..., c)` for every `c` in K.
    pub fn diagonal_values(&self) -> Vec<u8> {
        let diag_step: usize = (0..self.n).map(|i| stride(self.k, self.n, i)).sum();
        (0..self.k).map(|c| self.table[c * diag_step]).collect()
    }
}

impl fmt::Debug for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteFunction(k={}, n={}, {:?})", self.k, self.n, self.table)
    }
}

impl fmt::Display for FiniteFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} n={} [", self.k, self.n)?;
        for (m, v) in self.table.iter().enumerate() {
            if m > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("]")
    }
}
