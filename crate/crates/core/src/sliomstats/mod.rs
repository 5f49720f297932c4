//! Infinite-temperature distributions of cluster centres, their widths and
//! finite-size scaling.
//!
//! Positions are doubled centres `X = left + right` of a cluster, so even
//! `X` are integer sites (charged clusters) and odd `X` half-integer sites
//! (neutral clusters).

mod analytic;
mod fit;
mod scaling;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::{enumerate_blockaded, ChainSpec};
use crate::error::Result;
use crate::lgtmap::{decompose, default_k_max};

pub use analytic::{analytic_q1, analytic_qk, AnalyticTables, RightBoundary};
pub use fit::{fwhm, fwhm_points, gaussian_fit, FitMethod, SublatticeFit, WidthFit};
pub use scaling::{
    center_width, peak_ratio, scaling_collapse, scaling_exponent, width_at, CollapseCurve, CollapseResult,
    PeakRatio, ScalingKind, ScalingResult,
};

/// Exact distribution of the centre of cluster `k`: weights are
/// `numer[X] / denom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliomDistribution {
    pub k: usize,
    pub numer: BTreeMap<usize, BigUint>,
    pub denom: BigUint,
}

impl SliomDistribution {
    pub fn weight(&self, doubled: usize) -> BigRational {
        let n = self.numer.get(&doubled).cloned().unwrap_or_default();
        ratio(&n, &self.denom)
    }

    /// Total weight: the fraction of states holding at least `k` clusters.
    pub fn total(&self) -> BigRational {
        let s: BigUint = self.numer.values().sum();
        ratio(&s, &self.denom)
    }

    /// `(X, weight)` pairs in increasing `X`.
    pub fn points(&self) -> Vec<(usize, f64)> {
        let d = big_to_f64(&self.denom);
        self.numer
            .iter()
            .map(|(&x, n)| (x, big_to_f64(n) / d))
            .collect()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.numer.iter().filter(|(_, v)| !v.is_zero()).map(|(&x, _)| x)
    }

    /// Rational weights as decimal strings `p/q`, for export.
    pub fn exact_strings(&self) -> Vec<(usize, String)> {
        self.numer
            .keys()
            .map(|&x| (x, self.weight(x).to_string()))
            .collect()
    }
}

pub(crate) fn ratio(n: &BigUint, d: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(n.clone()), BigInt::from(d.clone()))
}

pub(crate) fn big_to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

/// Cluster-centre histograms over every blockaded state of `n_a` atoms, or
/// over one sector, for `k = 1..=k_max`.
pub fn brute_force_distributions(n_a: usize, sector: Option<usize>) -> Result<Vec<SliomDistribution>> {
    let spec = ChainSpec::new(n_a)?;
    let basis = enumerate_blockaded(spec)?;
    let k_max = default_k_max(spec.n_sites());
    let mut numer = vec![BTreeMap::<usize, u64>::new(); k_max];
    let mut count = 0u64;
    for c in basis.iter() {
        let d = decompose(&c)?;
        if sector.is_some_and(|s| s != d.n_clusters()) {
            continue;
        }
        count += 1;
        for cl in &d.clusters {
            *numer[cl.k - 1].entry(cl.doubled_center).or_insert(0) += 1;
        }
    }
    let denom = BigUint::from(count);
    Ok(numer
        .into_iter()
        .enumerate()
        .map(|(i, m)| SliomDistribution {
            k: i + 1,
            numer: m.into_iter().map(|(x, v)| (x, BigUint::from(v))).collect(),
            denom: denom.clone(),
        })
        .collect())
}

/// Empirical distribution, normalised to unit weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    pub k: usize,
    pub weights: BTreeMap<usize, f64>,
}

impl EmpiricalDistribution {
    pub fn total(&self) -> f64 {
        self.weights.values().sum()
    }
}

/// `½ Σ_X |p(X) - q(X)|` after normalising both to unit weight.
pub fn total_variation(p: &EmpiricalDistribution, q: &SliomDistribution) -> f64 {
    let qp = q.points();
    let qt: f64 = qp.iter().map(|x| x.1).sum();
    let pt = p.total();
    let mut keys: Vec<usize> = p.weights.keys().copied().chain(qp.iter().map(|x| x.0)).collect();
    keys.sort_unstable();
    keys.dedup();
    let qmap: BTreeMap<usize, f64> = qp.into_iter().collect();
    0.5 * keys
        .iter()
        .map(|x| {
            let a = p.weights.get(x).copied().unwrap_or(0.0) / pt;
            let b = qmap.get(x).copied().unwrap_or(0.0) / qt;
            (a - b).abs()
        })
        .sum::<f64>()
}
