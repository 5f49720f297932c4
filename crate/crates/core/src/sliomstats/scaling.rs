//! Width scaling with chain length, collapse of centre distributions and
//! the sublattice peak ratio.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::analytic::{AnalyticTables, RightBoundary};
use super::fit::fwhm;
use super::big_to_f64;
use crate::error::{FraglabError, Result};
use crate::fragments::largest_sector_with;
use crate::lgtmap::default_k_max;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingKind {
    /// Interior clusters: every `k ≥ 2` that is not the last cluster, with
    /// each width weighted by the fraction of states holding `≥ k`
    /// clusters.
    Bulk,
    /// The leftmost cluster.
    Boundary,
    /// Cluster `⌈N_c/2⌉` of the largest sector.
    Center,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub n: usize,
    /// FWHM in sites.
    pub sigma: f64,
    pub sigma_over_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingResult {
    pub which: ScalingKind,
    pub points: Vec<ScalingPoint>,
    /// `σ/N ∝ N^{-α}`.
    pub alpha: f64,
    pub stderr: f64,
    pub fit_range: (usize, usize),
}

/// Centre cluster of the largest sector: `(N_c, k)`.
fn center_cluster(t: &AnalyticTables) -> Result<(usize, usize)> {
    let n_c = largest_sector_with(t.tables(), t.n_a())?.n_c;
    Ok((n_c, n_c.div_ceil(2)))
}

/// FWHM of the centre cluster of the largest sector.
pub fn center_width(n_a: usize) -> Result<f64> {
    width_at(n_a, ScalingKind::Center)
}

/// Width measure of one kind at one chain length.
pub fn width_at(n_a: usize, which: ScalingKind) -> Result<f64> {
    if n_a == 0 {
        return Err(FraglabError::InvalidInput("N_a must be at least 1".into()));
    }
    let t = AnalyticTables::new(n_a);
    match which {
        ScalingKind::Boundary => Ok(fwhm(&t.distribution(1, RightBoundary::Any)).fwhm),
        ScalingKind::Center => {
            let (n_c, k) = center_cluster(&t)?;
            Ok(fwhm(&t.distribution(k, RightBoundary::Sector(n_c))).fwhm)
        }
        ScalingKind::Bulk => {
            let k_max = default_k_max(n_a + 3);
            let parts: Vec<(f64, f64)> = (2..=k_max)
                .into_par_iter()
                .filter_map(|k| {
                    let interior = t.distribution(k, RightBoundary::NotLast);
                    if interior.numer.is_empty() {
                        return None;
                    }
                    let f = fwhm(&interior);
                    if f.degenerate {
                        return None;
                    }
                    let w = t.distribution(k, RightBoundary::Any).total().to_f64()?;
                    Some((w, f.fwhm))
                })
                .collect();
            let wsum: f64 = parts.iter().map(|p| p.0).sum();
            if wsum == 0.0 {
                return Err(FraglabError::InsufficientPoints(format!(
                    "no interior cluster has a width at N_a={n_a}"
                )));
            }
            Ok(parts.iter().map(|(w, f)| w * f).sum::<f64>() / wsum)
        }
    }
}

/// Log-log least squares of `σ/N` against `N`.
pub fn scaling_exponent(n_list: &[usize], which: ScalingKind) -> Result<ScalingResult> {
    if n_list.len() < 3 {
        return Err(FraglabError::InsufficientPoints(format!(
            "exponent fit needs at least 3 sizes, got {}",
            n_list.len()
        )));
    }
    let points: Vec<ScalingPoint> = n_list
        .par_iter()
        .map(|&n| {
            let sigma = width_at(n, which)?;
            Ok(ScalingPoint {
                n,
                sigma,
                sigma_over_n: sigma / n as f64,
            })
        })
        .collect::<Result<_>>()?;
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|p| ((p.n as f64).ln(), p.sigma_over_n.ln()))
        .collect();
    let (slope, stderr) = slope_with_error(&xy);
    Ok(ScalingResult {
        which,
        alpha: -slope,
        stderr,
        fit_range: (
            *n_list.iter().min().expect("nonempty"),
            *n_list.iter().max().expect("nonempty"),
        ),
        points,
    })
}

fn slope_with_error(pts: &[(f64, f64)]) -> (f64, f64) {
    let (a, b) = crate::fragments::linear_fit(pts);
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let ssr: f64 = pts.iter().map(|p| (p.1 - a * p.0 - b).powi(2)).sum();
    (a, (ssr / (n - 2.0) / sxx).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseCurve {
    pub n: usize,
    pub n_c: usize,
    pub k: usize,
    /// `(parity, (x - x_mid)/√N, weight·√N)` with `x` in sites.
    pub points: Vec<(usize, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseResult {
    pub curves: Vec<CollapseCurve>,
    /// Largest pairwise sup-distance per sublattice, `[integer, half]`.
    pub metric_by_parity: [f64; 2],
    pub metric: f64,
}

fn interpolate(curve: &[(f64, f64)], x: f64) -> Option<f64> {
    let i = curve.partition_point(|p| p.0 < x);
    if i == 0 {
        return (curve.first()?.0 == x).then(|| curve[0].1);
    }
    if i == curve.len() {
        return None;
    }
    let (a, b) = (curve[i - 1], curve[i]);
    Some(a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0))
}

/// Rescales centre-cluster distributions of the largest sector by `√N` and
/// measures how far the curves lie from one another.
pub fn scaling_collapse(n_list: &[usize]) -> Result<CollapseResult> {
    if n_list.len() < 2 {
        return Err(FraglabError::InsufficientPoints("collapse needs two sizes".into()));
    }
    let curves: Vec<CollapseCurve> = n_list
        .par_iter()
        .map(|&n| {
            let t = AnalyticTables::new(n);
            let (n_c, k) = center_cluster(&t)?;
            let d = t.distribution(k, RightBoundary::Sector(n_c));
            let root = (n as f64).sqrt();
            let mid = (n as f64 + 4.0) / 2.0;
            let points = d
                .points()
                .into_iter()
                .map(|(xd, w)| (xd % 2, (xd as f64 / 2.0 - mid) / root, w * root))
                .collect();
            Ok(CollapseCurve { n, n_c, k, points })
        })
        .collect::<Result<_>>()?;
    let mut metric_by_parity = [0.0f64; 2];
    for (parity, m) in metric_by_parity.iter_mut().enumerate() {
        let per: Vec<Vec<(f64, f64)>> = curves
            .iter()
            .map(|c| {
                c.points
                    .iter()
                    .filter(|p| p.0 == parity)
                    .map(|p| (p.1, p.2))
                    .collect()
            })
            .collect();
        for a in &per {
            for b in &per {
                for &(x, y) in a {
                    if let Some(yb) = interpolate(b, x) {
                        *m = m.max((y - yb).abs());
                    }
                }
            }
        }
    }
    Ok(CollapseResult {
        metric: metric_by_parity[0].max(metric_by_parity[1]),
        metric_by_parity,
        curves,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakRatio {
    pub n: usize,
    pub n_c: usize,
    pub k: usize,
    pub integer_peak: f64,
    pub half_integer_peak: f64,
    pub ratio: f64,
    /// `D_total(N + 1) / D_total(N)`.
    pub dimension_ratio: f64,
}

/// Ratio of the integer- to half-integer-sublattice peak heights of the
/// centre cluster of the largest sector.
pub fn peak_ratio(n_a: usize) -> Result<PeakRatio> {
    if n_a == 0 {
        return Err(FraglabError::InvalidInput("N_a must be at least 1".into()));
    }
    let t = AnalyticTables::new(n_a);
    let (n_c, k) = center_cluster(&t)?;
    let d = t.distribution(k, RightBoundary::Sector(n_c));
    let peak = |parity: usize| {
        d.numer
            .iter()
            .filter(|(x, _)| *x % 2 == parity)
            .map(|(_, v)| v)
            .max()
            .cloned()
            .unwrap_or_default()
    };
    let (pe, po) = (peak(0), peak(1));
    if po == Default::default() {
        return Err(FraglabError::InsufficientPoints(
            "no half-integer weight in the centre distribution".into(),
        ));
    }
    let denom = big_to_f64(&d.denom);
    let next = AnalyticTables::new(n_a + 1);
    Ok(PeakRatio {
        n: n_a,
        n_c,
        k,
        integer_peak: big_to_f64(&pe) / denom,
        half_integer_peak: big_to_f64(&po) / denom,
        ratio: super::ratio(&pe, &po).to_f64().unwrap_or(f64::NAN),
        dimension_ratio: super::ratio(&next.tables().total_dim(n_a + 1), &t.tables().total_dim(n_a))
            .to_f64()
            .unwrap_or(f64::NAN),
    })
}
