use itertools::Itertools;

pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Size-`n` multisets over `{0..k-1}` as non-decreasing tuples, lexicographic.
pub fn multisets(k: usize, n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    (0..k as u8).combinations_with_replacement(n).collect()
}

/// `base^exp`, or `None` on overflow.
pub fn checked_pow(base: u128, exp: u128) -> Option<u128> {
    let exp = u32::try_from(exp).ok()?;
    base.checked_pow(exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(6, 4), 15);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(7, 0), 1);
    }

    #[test]
    fn multiset_counts() {
        for k in 1..=5 {
            for n in 0..=4 {
                assert_eq!(multisets(k, n).len() as u128, binomial((k + n - 1) as u64, n as u64), "k={k} n={n}");
            }
        }
        assert_eq!(multisets(3, 2)[..3], [vec![0, 0], vec![0, 1], vec![0, 2]]);
    }
}
