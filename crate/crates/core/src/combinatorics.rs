//! Binomial coefficients and lexicographic ranking of `k`-subsets of `{0, …, m-1}`.
//!
//! The canonical simplex order used throughout the crate is dimension-major and
//! lexicographic within a dimension; the rank of an `i`-simplex on `{0, …, n}` is
//! its position among all `(i+1)`-subsets of `n+1` vertices in that order.

/// Exact binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        // acc * (n - j) is divisible by (j + 1) after the multiplication
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

/// Floating point binomial coefficient for asymptotic comparisons.
pub fn binomial_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

pub fn factorial_f64(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, j| acc * j as f64)
}

/// Lexicographic rank of the strictly increasing subset `subset` of `{0, …, m-1}`.
pub fn rank_lex(subset: &[u32], m: u32) -> u128 {
    let k = subset.len() as u64;
    let total = binomial(m as u64, k);
    // lex order on c is reverse colex order on m-1-c
    let colex: u128 = subset
        .iter()
        .enumerate()
        .map(|(j, &c)| binomial((m - 1 - c) as u64, k - j as u64))
        .sum();
    total - 1 - colex
}

/// Inverse of [`rank_lex`]: writes the subset of size `k` with the given rank into `out`.
pub fn unrank_lex(rank: u128, k: usize, m: u32, out: &mut Vec<u32>) {
    debug_assert!(rank < binomial(m as u64, k as u64));
    out.clear();
    let mut rest = binomial(m as u64, k as u64) - 1 - rank;
    let mut hi = m; // exclusive upper bound for the next colex element
    for j in (1..=k as u64).rev() {
        // largest d < hi with C(d, j) <= rest
        let (mut lo, mut up) = (j as u32 - 1, hi - 1);
        while lo < up {
            let mid = lo + (up - lo + 1) / 2;
            if binomial(mid as u64, j) <= rest {
                lo = mid;
            } else {
                up = mid - 1;
            }
        }
        rest -= binomial(lo as u64, j);
        out.push(m - 1 - lo);
        hi = lo;
    }
}

/// Streams all `k`-subsets of `{0, …, m-1}` in lexicographic order without allocating
/// per item.
#[derive(Debug, Clone)]
pub struct LexSubsets {
    current: Vec<u32>,
    m: u32,
    started: bool,
    done: bool,
}

impl LexSubsets {
    pub fn new(k: usize, m: u32) -> Self {
        LexSubsets {
            current: (0..k as u32).collect(),
            m,
            started: false,
            done: k as u64 > m as u64 || k == 0,
        }
    }

    /// Returns the next subset, or `None` when exhausted.
    pub fn next_subset(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let k = self.current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.current[i] < self.m - (k - i) as u32 {
                break;
            }
        }
        self.current[i] += 1;
        for j in i + 1..k {
            self.current[j] = self.current[j - 1] + 1;
        }
        Some(&self.current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(61, 3), 35990);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(401, 2), 80200);
        assert!((binomial_f64(61, 3) - 35990.0).abs() < 1e-6);
    }

    #[test]
    fn enumeration_matches_rank_and_unrank() {
        for m in 0..9u32 {
            for k in 1..=4usize {
                let mut it = LexSubsets::new(k, m);
                let mut expected_rank = 0u128;
                let mut prev: Option<Vec<u32>> = None;
                let mut buf = Vec::new();
                while let Some(s) = it.next_subset() {
                    assert_eq!(rank_lex(s, m), expected_rank);
                    unrank_lex(expected_rank, k, m, &mut buf);
                    assert_eq!(buf, s);
                    if let Some(p) = &prev {
                        assert!(p.as_slice() < s);
                    }
                    prev = Some(s.to_vec());
                    expected_rank += 1;
                }
                assert_eq!(expected_rank, binomial(m as u64, k as u64));
            }
        }
    }

    #[test]
    fn pair_counting_identity() {
        // C(i+1,k+1) C(n+1,i+1) = C(n+1,k+1) C(n-k,i-k): both count pairs sigma ⊆ tau
        for n in 0..=30u64 {
            for i in 0..=n {
                for k in 0..=i {
                    assert_eq!(
                        binomial(i + 1, k + 1) * binomial(n + 1, i + 1),
                        binomial(n + 1, k + 1) * binomial(n - k, i - k),
                        "n={n} i={i} k={k}"
                    );
                }
            }
        }
    }
}
