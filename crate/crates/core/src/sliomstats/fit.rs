//! Gaussian widths of cluster-centre distributions.
//!
//! Each sublattice (integer and half-integer centres) is fitted separately
//! by least squares to `A exp(-(x-μ)²/(2σ₀²))` in site units, with the
//! data scaled to unit maximum. The combined FWHM is the mean of the
//! sublattice FWHMs weighted by each sublattice's total weight.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::SliomDistribution;

/// `2√(2 ln 2)`.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_3;

/// Sublattices with fewer points use the discrete half-maximum width.
pub const MIN_FIT_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    Gaussian,
    /// Interpolated half-maximum crossings.
    Discrete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SublatticeFit {
    /// 0 for integer centres (even doubled), 1 for half-integer.
    pub parity: usize,
    pub amplitude: f64,
    pub center: f64,
    pub sigma0: f64,
    pub fwhm: f64,
    /// Total weight on this sublattice.
    pub weight: f64,
    pub n_points: usize,
    pub method: FitMethod,
    /// Root-mean-square residual of the normalised data.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidthFit {
    pub sublattices: Vec<SublatticeFit>,
    pub fwhm: f64,
    /// Weighted RMS residual of the Gaussian sublattices.
    pub residual: f64,
    /// Set when no sublattice supports a width (empty or delta-like).
    pub degenerate: bool,
}

impl WidthFit {
    /// True when every nonempty sublattice had enough points for a fit.
    pub fn fully_fitted(&self) -> bool {
        !self.sublattices.is_empty() && self.sublattices.iter().all(|s| s.method == FitMethod::Gaussian)
    }
}

/// Least-squares Gaussian through `(x, y)`; returns `(A, μ, σ₀, rms)`.
///
/// Levenberg-Marquardt with the centre kept inside the data range and
/// `σ₀ ≥ 1e-3`.
pub fn gaussian_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    let (xmin, xmax) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let w: f64 = y.iter().sum();
    let m0 = x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / w;
    let s0 = (x.iter().zip(y).map(|(a, b)| (a - m0).powi(2) * b).sum::<f64>() / w).sqrt();
    let amp0 = y.iter().cloned().fold(0.0, f64::max);
    let mut p = Vector3::new(amp0, m0, s0.max(0.5));
    let clamp = |mut p: Vector3<f64>| {
        p[0] = p[0].max(0.0);
        p[1] = p[1].clamp(xmin, xmax);
        p[2] = p[2].max(1e-3);
        p
    };
    let cost = |p: &Vector3<f64>| -> f64 {
        x.iter()
            .zip(y)
            .map(|(&xi, &yi)| {
                let g = p[0] * (-(xi - p[1]).powi(2) / (2.0 * p[2] * p[2])).exp();
                (g - yi).powi(2)
            })
            .sum()
    };
    let mut c = cost(&p);
    let mut lambda = 1e-3;
    for _ in 0..2000 {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (&xi, &yi) in x.iter().zip(y) {
            let d = xi - p[1];
            let e = (-d * d / (2.0 * p[2] * p[2])).exp();
            let g = p[0] * e;
            let j = Vector3::new(e, g * d / (p[2] * p[2]), g * d * d / p[2].powi(3));
            jtj += j * j.transpose();
            jtr += j * (g - yi);
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj;
            for i in 0..3 {
                a[(i, i)] += lambda * jtj[(i, i)].max(1e-12);
            }
            let Some(step) = a.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let trial = clamp(p - step);
            let ct = cost(&trial);
            if ct < c {
                let rel = (c - ct) / c.max(1e-300);
                p = trial;
                c = ct;
                lambda = (lambda / 10.0).max(1e-15);
                improved = rel > 1e-15;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    let rms = (c / x.len() as f64).sqrt();
    (p[0], p[1], p[2], rms)
}

/// Width between interpolated half-maximum crossings of unit-spaced data.
fn discrete_fwhm(x: &[f64], y: &[f64]) -> f64 {
    let (imax, &ymax) = y
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    let half = ymax / 2.0;
    let mut lo = x[0];
    for i in (0..imax).rev() {
        if y[i] < half {
            lo = x[i] + (x[i + 1] - x[i]) * (half - y[i]) / (y[i + 1] - y[i]);
            break;
        }
        lo = x[i];
    }
    if imax == 0 {
        lo = x[0];
    }
    let mut hi = x[x.len() - 1];
    for i in imax + 1..x.len() {
        if y[i] < half {
            hi = x[i - 1] + (x[i] - x[i - 1]) * (y[i - 1] - half) / (y[i - 1] - y[i]);
            break;
        }
        hi = x[i];
    }
    if imax == x.len() - 1 {
        hi = x[imax];
    }
    hi - lo
}

/// Width of a distribution given as `(doubled position, weight)` pairs.
pub fn fwhm_points(points: &[(usize, f64)]) -> WidthFit {
    let mut subs = Vec::new();
    for parity in 0..2 {
        let pts: Vec<(f64, f64)> = points
            .iter()
            .filter(|(xd, v)| xd % 2 == parity && *v > 0.0)
            .map(|&(xd, v)| (xd as f64 / 2.0, v))
            .collect();
        if pts.is_empty() {
            continue;
        }
        let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let scale = pts.iter().map(|p| p.1).fold(0.0, f64::max);
        let y: Vec<f64> = pts.iter().map(|p| p.1 / scale).collect();
        let weight: f64 = pts.iter().map(|p| p.1).sum();
        let fit = if pts.len() >= MIN_FIT_POINTS {
            let (a, mu, s, rms) = gaussian_fit(&x, &y);
            SublatticeFit {
                parity,
                amplitude: a * scale,
                center: mu,
                sigma0: s,
                fwhm: FWHM_PER_SIGMA * s,
                weight,
                n_points: pts.len(),
                method: FitMethod::Gaussian,
                residual: rms,
            }
        } else {
            let width = discrete_fwhm(&x, &y);
            let imax = y.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|p| p.0).unwrap_or(0);
            SublatticeFit {
                parity,
                amplitude: scale,
                center: x[imax],
                sigma0: width / FWHM_PER_SIGMA,
                fwhm: width,
                weight,
                n_points: pts.len(),
                method: FitMethod::Discrete,
                residual: 0.0,
            }
        };
        subs.push(fit);
    }
    let wsum: f64 = subs.iter().map(|s| s.weight).sum();
    let fwhm = if wsum > 0.0 {
        subs.iter().map(|s| s.weight * s.fwhm).sum::<f64>() / wsum
    } else {
        0.0
    };
    let gw: f64 = subs.iter().filter(|s| s.method == FitMethod::Gaussian).map(|s| s.weight).sum();
    let residual = if gw > 0.0 {
        subs.iter()
            .filter(|s| s.method == FitMethod::Gaussian)
            .map(|s| s.weight * s.residual)
            .sum::<f64>()
            / gw
    } else {
        0.0
    };
    WidthFit {
        degenerate: fwhm == 0.0,
        sublattices: subs,
        fwhm,
        residual,
    }
}

pub fn fwhm(dist: &SliomDistribution) -> WidthFit {
    fwhm_points(&dist.points())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_gaussian() {
        let x: Vec<f64> = (0..40).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 0.7 * (-(v - 17.3f64).powi(2) / (2.0 * 4.2f64.powi(2))).exp()).collect();
        let (a, mu, s, rms) = gaussian_fit(&x, &y);
        assert!((s - 4.2).abs() < 1e-6, "{s}");
        assert!((mu - 17.3).abs() < 1e-6 && (a - 0.7).abs() < 1e-6 && rms < 1e-8);
    }

    #[test]
    fn delta_is_degenerate() {
        let f = fwhm_points(&[(10, 1.0)]);
        assert!(f.degenerate);
        assert_eq!(f.fwhm, 0.0);
    }

    #[test]
    fn discrete_fallback_width() {
        // Three points on one sublattice: 0.5, 1, 0.5 at x = 1, 2, 3.
        let f = fwhm_points(&[(2, 0.5), (4, 1.0), (6, 0.5)]);
        assert_eq!(f.sublattices[0].method, FitMethod::Discrete);
        assert!((f.fwhm - 2.0).abs() < 1e-12);
    }
}
