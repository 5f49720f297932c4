//! Observables of a quench: site autocorrelators and time-averaged
//! microstate projections.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::basis::{Basis, BitConfig};
use crate::error::{FraglabError, Result};
use crate::operator::SparseOperator;

use super::propagate::{evolve, EvolutionPlan, InitialState};

/// Uniform grid of dimensionless times `Ωt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub omega_t_start: f64,
    pub omega_t_end: f64,
    pub n_steps: usize,
}

impl Default for TimeWindow {
    fn default() -> Self {
        Self {
            omega_t_start: 0.56,
            omega_t_end: 5.60,
            n_steps: 19,
        }
    }
}

impl TimeWindow {
    pub fn new(omega_t_start: f64, omega_t_end: f64, n_steps: usize) -> Result<Self> {
        let w = Self {
            omega_t_start,
            omega_t_end,
            n_steps,
        };
        w.validate()?;
        Ok(w)
    }

    fn validate(&self) -> Result<()> {
        let ok = self.n_steps >= 1
            && self.omega_t_start >= 0.0
            && self.omega_t_end.is_finite()
            && (self.n_steps == 1 || self.omega_t_end > self.omega_t_start);
        if !ok {
            return Err(FraglabError::InvalidInput(format!("bad time window {self:?}")));
        }
        Ok(())
    }

    /// Grid points in units of `Ωt`.
    pub fn omega_times(&self) -> Vec<f64> {
        if self.n_steps == 1 {
            return vec![self.omega_t_start];
        }
        let step = (self.omega_t_end - self.omega_t_start) / (self.n_steps - 1) as f64;
        (0..self.n_steps)
            .map(|i| self.omega_t_start + step * i as f64)
            .collect()
    }

    /// Grid points in µs for a Rabi frequency `omega` in rad/µs.
    pub fn times(&self, omega: f64) -> Vec<f64> {
        self.omega_times().into_iter().map(|x| x / omega).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Averaging {
    /// Plain mean over the grid.
    #[default]
    Uniform,
    /// Trapezoidal weights over the grid.
    Trapezoid,
}

impl Averaging {
    pub fn weights(&self, n: usize) -> Vec<f64> {
        match (self, n) {
            (_, 0) => Vec::new(),
            (_, 1) | (Averaging::Uniform, _) => vec![1.0 / n as f64; n],
            (Averaging::Trapezoid, _) => {
                let mut w = vec![1.0; n];
                w[0] = 0.5;
                w[n - 1] = 0.5;
                let s: f64 = w.iter().sum();
                w.iter().map(|x| x / s).collect()
            }
        }
    }
}

/// `⟨ψ(t)|Z_i|ψ(t)⟩ z_i(0)` with `Z = 2Q - 1`, indexed `[site][time]` over
/// physical atoms.
pub fn z_autocorrelator(basis: &Basis, states: &[Vec<C64>], initial: &BitConfig) -> Vec<Vec<f64>> {
    let z = |c: &BitConfig, i: usize| if c.is_r(i) { 1.0 } else { -1.0 };
    let sites: Vec<usize> = basis.spec().physical().collect();
    let mut out = vec![vec![0.0; states.len()]; sites.len()];
    for (ti, psi) in states.iter().enumerate() {
        for (k, amp) in psi.iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let c = basis.state(k);
            for (si, &i) in sites.iter().enumerate() {
                out[si][ti] += p * z(&c, i);
            }
        }
    }
    for (si, &i) in sites.iter().enumerate() {
        let z0 = z(initial, i);
        out[si].iter_mut().for_each(|v| *v *= z0);
    }
    out
}

/// Rydberg population of each physical atom, `[site][time]`.
pub fn site_populations(basis: &Basis, states: &[Vec<C64>]) -> Vec<Vec<f64>> {
    let sites: Vec<usize> = basis.spec().physical().collect();
    let mut out = vec![vec![0.0; states.len()]; sites.len()];
    for (ti, psi) in states.iter().enumerate() {
        for (k, amp) in psi.iter().enumerate() {
            let c = basis.state(k);
            for (si, &i) in sites.iter().enumerate() {
                if c.is_r(i) {
                    out[si][ti] += amp.norm_sqr();
                }
            }
        }
    }
    out
}

/// Weighted average of `|⟨e_k|ψ(t)⟩|²` over the supplied states.
pub fn average_projections(states: &[Vec<C64>], averaging: Averaging) -> Vec<f64> {
    let w = averaging.weights(states.len());
    let dim = states.first().map_or(0, |s| s.len());
    let mut out = vec![0.0; dim];
    for (psi, wt) in states.iter().zip(w) {
        for (o, a) in out.iter_mut().zip(psi) {
            *o += wt * a.norm_sqr();
        }
    }
    out
}

/// `P̄_k` over the window, evolving from a basis state.
pub fn microstate_projections(
    h: &SparseOperator,
    initial: usize,
    window: &TimeWindow,
    omega: f64,
    averaging: Averaging,
) -> Result<Vec<f64>> {
    window.validate()?;
    let plan = EvolutionPlan::new(h, InitialState::Ordinal(initial), window.times(omega));
    let states = evolve(&plan)?;
    Ok(average_projections(&states, averaging))
}

/// Total probability on a set of ordinals.
pub fn weight_on(psi: &[C64], members: &[usize]) -> f64 {
    members.iter().map(|&m| psi[m].norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_window_grid() {
        let w = TimeWindow::default();
        let x = w.omega_times();
        assert_eq!(x.len(), 19);
        assert!((x[0] - 0.56).abs() < 1e-15 && (x[18] - 5.60).abs() < 1e-12);
        assert!((x[1] - x[0] - 0.28).abs() < 1e-12);
        assert!(TimeWindow::new(1.0, 0.5, 3).is_err());
    }

    #[test]
    fn averaging_weights_sum_to_one() {
        for a in [Averaging::Uniform, Averaging::Trapezoid] {
            let w = a.weights(19);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        }
        assert_eq!(Averaging::Trapezoid.weights(3), vec![0.25, 0.5, 0.25]);
    }
}
