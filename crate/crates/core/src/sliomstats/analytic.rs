//! Closed-form cluster-centre distributions from sub-chain counts.
//!
//! Cluster `k` on sites `l..=r` splits the chain into a left part of
//! `l - 1` sites holding `k - 1` clusters followed by a vacuum gap of any
//! even length, and a right part of `L - r` sites (with `L = N_a + 3`)
//! opened by such a gap. The left count is `G(l - 1, k - 1)`; the right one
//! is `Σ_c G(L - r, c)` over the whole chain, or `G(L - r, N_c - k)` inside
//! the sector `N_c`. `r = L` is the case of `k` being the last cluster,
//! where the right part is empty and contributes exactly 1.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ratio, SliomDistribution};
use crate::combinatorics::ClusterTables;
use crate::error::{FraglabError, Result};

/// What may follow the cluster on its right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RightBoundary {
    /// Any number of further clusters, including none.
    Any,
    /// At least one further cluster (the cluster is not the last one).
    NotLast,
    /// Exactly `N_c - k` further clusters.
    Sector(usize),
}

/// Counting tables bound to one chain length.
#[derive(Debug, Clone)]
pub struct AnalyticTables {
    n_a: usize,
    tables: ClusterTables,
}

impl AnalyticTables {
    pub fn new(n_a: usize) -> Self {
        Self {
            n_a,
            tables: ClusterTables::for_atoms(n_a),
        }
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn tables(&self) -> &ClusterTables {
        &self.tables
    }

    fn n_sites(&self) -> usize {
        self.n_a + 3
    }

    fn right_count(&self, len: usize, rb: RightBoundary, k: usize) -> BigUint {
        match rb {
            RightBoundary::Any => self.tables.rg(len).clone(),
            RightBoundary::NotLast => {
                let all = self.tables.rg(len);
                if len == 0 {
                    all - BigUint::one()
                } else {
                    all.clone()
                }
            }
            RightBoundary::Sector(n_c) => {
                if k > n_c {
                    BigUint::zero()
                } else {
                    self.tables.g_or_zero(len, n_c - k)
                }
            }
        }
    }

    /// Numerator of the weight at doubled position `x`.
    pub fn numerator(&self, k: usize, x: usize, rb: RightBoundary) -> BigUint {
        let n = self.n_sites();
        let mut acc = BigUint::zero();
        if k == 0 || k > self.tables.c_max() {
            return acc;
        }
        for l in 1..=n.min(x / 2) {
            let r = x - l;
            if r > n || r < l {
                continue;
            }
            let left = self.tables.g_or_zero(l - 1, k - 1);
            if left.is_zero() {
                continue;
            }
            acc += left * self.right_count(n - r, rb, k);
        }
        acc
    }

    /// Normalisation: all states, or the states of the sector.
    pub fn denominator(&self, rb: RightBoundary) -> BigUint {
        match rb {
            RightBoundary::Sector(n_c) => self.tables.sector_dim(self.n_a, n_c),
            _ => self.tables.total_dim(self.n_a),
        }
    }

    /// Whole distribution of cluster `k`.
    pub fn distribution(&self, k: usize, rb: RightBoundary) -> SliomDistribution {
        let n = self.n_sites();
        let mut numer: BTreeMap<usize, BigUint> = BTreeMap::new();
        if k >= 1 && k <= self.tables.c_max() {
            for l in 1..=n {
                let left = self.tables.g_or_zero(l - 1, k - 1);
                if left.is_zero() {
                    continue;
                }
                for r in l..=n {
                    let right = self.right_count(n - r, rb, k);
                    if right.is_zero() {
                        continue;
                    }
                    *numer.entry(l + r).or_insert_with(BigUint::zero) += &left * right;
                }
            }
        }
        SliomDistribution {
            k,
            numer,
            denom: self.denominator(rb),
        }
    }
}

/// Weight of the leftmost cluster at doubled position `x`.
pub fn analytic_q1(n_a: usize, x: usize) -> Result<BigRational> {
    check_chain(n_a)?;
    let t = AnalyticTables::new(n_a);
    Ok(ratio(&t.numerator(1, x, RightBoundary::Any), &t.denominator(RightBoundary::Any)))
}

/// Weight of cluster `k ≥ 2` at doubled position `x`.
pub fn analytic_qk(n_a: usize, k: usize, x: usize) -> Result<BigRational> {
    check_chain(n_a)?;
    if k < 2 {
        return Err(FraglabError::InvalidInput(format!("analytic_qk needs k >= 2, got {k}")));
    }
    let t = AnalyticTables::new(n_a);
    Ok(ratio(&t.numerator(k, x, RightBoundary::Any), &t.denominator(RightBoundary::Any)))
}

fn check_chain(n_a: usize) -> Result<()> {
    if n_a == 0 {
        return Err(FraglabError::InvalidInput("N_a must be at least 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn q1_sums_to_one() {
        let t = AnalyticTables::new(30);
        let d = t.distribution(1, RightBoundary::Any);
        assert!(d.total().is_one());
    }

    #[test]
    fn pointwise_matches_whole() {
        let t = AnalyticTables::new(12);
        let d = t.distribution(3, RightBoundary::Any);
        for (&x, v) in &d.numer {
            assert_eq!(&t.numerator(3, x, RightBoundary::Any), v);
        }
        assert_eq!(
            analytic_qk(12, 3, 20).unwrap(),
            d.weight(20)
        );
    }

    #[test]
    fn beyond_max_clusters_is_zero() {
        let t = AnalyticTables::new(10);
        let d = t.distribution(6, RightBoundary::Any);
        assert!(d.numer.values().all(|v| v.is_zero()));
        assert!(analytic_qk(10, 1, 4).is_err());
    }
}
