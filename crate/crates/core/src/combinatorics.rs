//! Exact cluster-arrangement counts.
//!
//! Units: a chain segment of `n` counts `n - 2` matter sites plus one
//! two-site vacuum gap, so that a charged cluster with its gap costs 3, a
//! neutral one 4, and each inflated pair (two extra sites) costs 2. With
//! `n = 3 N_q + 4 N_0 + 2 k` and `c = N_q + N_0`:
//!
//! * `A(n, c)` counts arrangements of `c` clusters pinned at both ends of
//!   `n - 2` sites: `Σ C(c, N_q) C(k + 2c - 2, k)`.
//! * `G(n, c) = Σ_{g even} A(n - g, c)` additionally lets one end carry an
//!   arbitrarily long even vacuum: `Σ C(c, N_q) C(k + 2c - 1, k)`.
//!
//! The whole padded chain has `n = N_a + 5`. Tables are filled by the
//! recursion `A(n, 1) = [n ≥ 3]`, `A(n, c) = S(n - 3, c - 1)` with `S` the
//! prefix sum of `G` over `n`; the closed forms are kept as an independent
//! check.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Memoised binomial coefficients.
#[derive(Debug, Default)]
pub struct Binomials {
    memo: HashMap<(u64, u64), BigUint>,
}

impl Binomials {
    pub fn new() -> Self {
        Self::default()
    }

    /// `C(n, k)`, zero when `k > n`.
    pub fn get(&mut self, n: u64, k: u64) -> BigUint {
        if k > n {
            return BigUint::zero();
        }
        let k = k.min(n - k);
        if let Some(v) = self.memo.get(&(n, k)) {
            return v.clone();
        }
        let v = binomial(n, k);
        self.memo.insert((n, k), v.clone());
        v
    }
}

/// `C(n, k)` by the multiplicative formula; every partial product is exact.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` with the conventions `C(-1, 0) = 1` and zero for other
/// negative tops.
fn binomial_signed(n: i64, k: i64) -> BigUint {
    if k < 0 {
        return BigUint::zero();
    }
    if n < 0 {
        return if k == 0 { BigUint::one() } else { BigUint::zero() };
    }
    binomial(n as u64, k as u64)
}

/// Splits `c = N_q + N_0` with `n = 3 N_q + 4 N_0 + 2 k`, `k ≥ 0`.
pub fn splits(n: usize, c: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..=c).filter_map(move |nq| {
        let n0 = c - nq;
        let used = 3 * nq + 4 * n0;
        (used <= n && (n - used).is_multiple_of(2)).then(|| (nq, n0, (n - used) / 2))
    })
}

/// Closed form of `A(n, c)`.
pub fn a_closed(n: usize, c: usize) -> BigUint {
    if c == 0 {
        return if n == 0 { BigUint::one() } else { BigUint::zero() };
    }
    splits(n, c)
        .map(|(nq, _, k)| binomial(c as u64, nq as u64) * binomial((k + 2 * c - 2) as u64, k as u64))
        .sum()
}

/// Closed form of `G(n, c)`.
pub fn g_closed(n: usize, c: usize) -> BigUint {
    if c == 0 {
        return if n == 0 { BigUint::one() } else { BigUint::zero() };
    }
    splits(n, c)
        .map(|(nq, _, k)| {
            binomial(c as u64, nq as u64) * binomial_signed((k + 2 * c) as i64 - 1, k as i64)
        })
        .sum()
}

/// Tables of `A` and `G` for `n ≤ n_max`, `c ≤ c_max`.
#[derive(Debug, Clone)]
pub struct ClusterTables {
    n_max: usize,
    c_max: usize,
    a: Vec<Vec<BigUint>>,
    g: Vec<Vec<BigUint>>,
    /// `Σ_c G(n, c)`.
    rg: Vec<BigUint>,
}

impl ClusterTables {
    /// Tables large enough for a padded chain of `n_atoms`.
    pub fn for_atoms(n_atoms: usize) -> Self {
        let n_max = n_atoms + 6;
        Self::new(n_max, n_max / 3 + 1)
    }

    pub fn new(n_max: usize, c_max: usize) -> Self {
        let zero_row = || vec![BigUint::zero(); c_max + 1];
        let mut a = vec![zero_row(); n_max + 1];
        let mut g = vec![zero_row(); n_max + 1];
        let mut s = vec![zero_row(); n_max + 1];
        a[0][0] = BigUint::one();
        g[0][0] = BigUint::one();
        for n in 0..=n_max {
            for c in 0..=c_max {
                if c >= 1 {
                    if n >= 3 {
                        a[n][c] = s[n - 3][c - 1].clone();
                    }
                    g[n][c] = if n >= 2 {
                        &a[n][c] + &g[n - 2][c]
                    } else {
                        a[n][c].clone()
                    };
                }
                s[n][c] = if n >= 1 {
                    &g[n][c] + &s[n - 1][c]
                } else {
                    g[n][c].clone()
                };
            }
        }
        let rg = g.iter().map(|row| row.iter().sum()).collect();
        Self {
            n_max,
            c_max,
            a,
            g,
            rg,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn c_max(&self) -> usize {
        self.c_max
    }

    pub fn a(&self, n: usize, c: usize) -> &BigUint {
        &self.a[n][c]
    }

    pub fn g(&self, n: usize, c: usize) -> &BigUint {
        &self.g[n][c]
    }

    pub fn g_or_zero(&self, n: usize, c: usize) -> BigUint {
        if n > self.n_max || c > self.c_max {
            BigUint::zero()
        } else {
            self.g[n][c].clone()
        }
    }

    pub fn rg(&self, n: usize) -> &BigUint {
        &self.rg[n]
    }

    /// Blockaded configurations of `n_atoms` with exactly `n_c` clusters.
    pub fn sector_dim(&self, n_atoms: usize, n_c: usize) -> BigUint {
        if n_c > self.c_max {
            return BigUint::zero();
        }
        self.a[n_atoms + 5][n_c].clone()
    }

    /// All blockaded configurations of `n_atoms`.
    pub fn total_dim(&self, n_atoms: usize) -> BigUint {
        self.a[n_atoms + 5].iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(11, 3), BigUint::from(165u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        let mut memo = Binomials::new();
        assert_eq!(memo.get(60, 30), binomial(60, 30));
        assert_eq!(memo.get(60, 30), BigUint::from(118264581564861424u64));
    }

    #[test]
    fn dp_matches_closed_forms() {
        let t = ClusterTables::new(60, 21);
        for n in 0..=60 {
            for c in 0..=21 {
                assert_eq!(t.a(n, c), &a_closed(n, c), "A({n},{c})");
                assert_eq!(t.g(n, c), &g_closed(n, c), "G({n},{c})");
            }
        }
    }

    #[test]
    fn totals_are_fibonacci() {
        let t = ClusterTables::for_atoms(40);
        for na in 1..=40 {
            let want = crate::basis::fibonacci(na + 2);
            assert_eq!(t.total_dim(na), BigUint::from(want));
        }
    }
}
