//! `exp(-iHt)|ψ⟩` by block-wise dense diagonalisation or by a Lanczos
//! propagator with an a-posteriori step error bound.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{FraglabError, Result};
use crate::operator::SparseOperator;

/// Largest block dense diagonalisation accepts.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Largest block `Method::Auto` hands to the dense path. Beyond this the
/// O(n³) eigensolve costs far more than Lanczos stepping.
pub const DEFAULT_AUTO_DENSE_MAX: usize = 1024;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Dense when every touched block is at most `auto_dense_max`, else
    /// iterative.
    Auto,
    DenseSpectral,
    IterativeKrylov,
}

/// Initial state of a quench.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// A Z-basis product state given by its basis ordinal.
    Ordinal(usize),
    Vector(Vec<C64>),
}

impl InitialState {
    pub fn to_vector(&self, dim: usize) -> Result<Vec<C64>> {
        match self {
            InitialState::Ordinal(k) => {
                if *k >= dim {
                    return Err(FraglabError::InvalidInput(format!(
                        "ordinal {k} outside basis of {dim}"
                    )));
                }
                let mut v = vec![ZERO; dim];
                v[*k] = C64::new(1.0, 0.0);
                Ok(v)
            }
            InitialState::Vector(v) => {
                if v.len() != dim {
                    return Err(FraglabError::InvalidInput(format!(
                        "state of length {} for basis of {dim}",
                        v.len()
                    )));
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionPlan<'a> {
    pub hamiltonian: &'a SparseOperator,
    pub initial: InitialState,
    /// Non-negative, strictly increasing, µs.
    pub times: Vec<f64>,
    pub method: Method,
    /// Per-step error target of the iterative propagator.
    pub tolerance: f64,
    pub dense_cap: usize,
    pub auto_dense_max: usize,
}

impl<'a> EvolutionPlan<'a> {
    pub fn new(hamiltonian: &'a SparseOperator, initial: InitialState, times: Vec<f64>) -> Self {
        Self {
            hamiltonian,
            initial,
            times,
            method: Method::Auto,
            tolerance: 1e-12,
            dense_cap: DEFAULT_DENSE_CAP,
            auto_dense_max: DEFAULT_AUTO_DENSE_MAX,
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(FraglabError::InvalidInput("times must be finite and non-negative".into()));
        }
        if self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FraglabError::InvalidInput("times must be strictly increasing".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(FraglabError::InvalidInput("tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Anything that maps `ψ` to `exp(-iHt) ψ`; `t` may be negative.
pub trait Propagator {
    fn propagate(&self, psi: &[C64], t: f64) -> Result<Vec<C64>>;
}

struct Block {
    members: Vec<usize>,
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

/// Exact propagator from eigendecompositions of the connected blocks of
/// `H` that the states of interest touch.
pub struct SpectralPropagator {
    dim: usize,
    blocks: Vec<Block>,
    /// Block index per basis ordinal, `usize::MAX` when not built.
    block_of: Vec<usize>,
}

impl SpectralPropagator {
    /// Diagonalises every block of `h`.
    pub fn new(h: &SparseOperator, cap: usize) -> Result<Self> {
        let all: Vec<usize> = (0..h.dim()).collect();
        Self::for_support(h, &all, cap)
    }

    /// Diagonalises only the blocks containing an ordinal of `support`.
    pub fn for_support(h: &SparseOperator, support: &[usize], cap: usize) -> Result<Self> {
        if !h.is_hermitian() {
            return Err(FraglabError::InvalidInput("Hamiltonian is not Hermitian".into()));
        }
        let comps = h.components();
        let mut comp_of = vec![0; h.dim()];
        for (ci, c) in comps.iter().enumerate() {
            for &m in c {
                comp_of[m] = ci;
            }
        }
        let mut wanted: Vec<usize> = support.iter().map(|&s| comp_of[s]).collect();
        wanted.sort_unstable();
        wanted.dedup();
        let mut block_of = vec![usize::MAX; h.dim()];
        let mut blocks = Vec::with_capacity(wanted.len());
        for ci in wanted {
            let members = comps[ci].clone();
            if members.len() > cap {
                return Err(FraglabError::Capacity {
                    what: "dense block".into(),
                    needed: members.len() as u128,
                    limit: cap as u128,
                });
            }
            let eig = SymmetricEigen::new(h.restrict_dense(&members));
            for &m in &members {
                block_of[m] = blocks.len();
            }
            blocks.push(Block {
                members,
                energies: eig.eigenvalues.iter().copied().collect(),
                vectors: eig.eigenvectors,
            });
        }
        Ok(Self {
            dim: h.dim(),
            blocks,
            block_of,
        })
    }

    pub fn largest_block(&self) -> usize {
        self.blocks.iter().map(|b| b.members.len()).max().unwrap_or(0)
    }

    /// Eigen-coefficients of `psi` per block, for repeated evaluation.
    fn coefficients(&self, psi: &[C64]) -> Result<Vec<(DVector<f64>, DVector<f64>)>> {
        for (k, z) in psi.iter().enumerate() {
            if z.norm_sqr() > 0.0 && self.block_of[k] == usize::MAX {
                return Err(FraglabError::InvalidInput(format!(
                    "state has weight on ordinal {k} outside the prepared blocks"
                )));
            }
        }
        Ok(self
            .blocks
            .iter()
            .map(|b| {
                let re = DVector::from_iterator(b.members.len(), b.members.iter().map(|&m| psi[m].re));
                let im = DVector::from_iterator(b.members.len(), b.members.iter().map(|&m| psi[m].im));
                (b.vectors.tr_mul(&re), b.vectors.tr_mul(&im))
            })
            .collect())
    }

    /// States at each of `times`, sharing one projection onto eigenvectors.
    pub fn evolve_many(&self, psi: &[C64], times: &[f64]) -> Result<Vec<Vec<C64>>> {
        if psi.len() != self.dim {
            return Err(FraglabError::InvalidInput("state length mismatch".into()));
        }
        let coeffs = self.coefficients(psi)?;
        Ok(times
            .iter()
            .map(|&t| {
                let mut out = vec![ZERO; self.dim];
                for (b, (cr, ci)) in self.blocks.iter().zip(&coeffs) {
                    let n = b.members.len();
                    let mut pr = DVector::zeros(n);
                    let mut pi = DVector::zeros(n);
                    for j in 0..n {
                        let (s, c) = (-b.energies[j] * t).sin_cos();
                        // (cr + i ci)(c + i s)
                        pr[j] = cr[j] * c - ci[j] * s;
                        pi[j] = cr[j] * s + ci[j] * c;
                    }
                    let xr = &b.vectors * pr;
                    let xi = &b.vectors * pi;
                    for (j, &m) in b.members.iter().enumerate() {
                        out[m] = C64::new(xr[j], xi[j]);
                    }
                }
                out
            })
            .collect())
    }
}

impl Propagator for SpectralPropagator {
    fn propagate(&self, psi: &[C64], t: f64) -> Result<Vec<C64>> {
        Ok(self.evolve_many(psi, &[t])?.pop().expect("one time"))
    }
}

/// Lanczos propagator with full reorthogonalisation.
///
/// Each substep builds an `m`-dimensional Krylov space and picks the
/// longest step whose residual bound `β_m |[exp(-iTτ) e_1]_m|` stays below
/// `tolerance`.
pub struct KrylovPropagator<'a> {
    h: &'a SparseOperator,
    pub krylov_dim: usize,
    pub tolerance: f64,
}

impl<'a> KrylovPropagator<'a> {
    pub fn new(h: &'a SparseOperator, tolerance: f64) -> Self {
        Self {
            h,
            krylov_dim: 30,
            tolerance,
        }
    }

    fn substep(&self, psi: &[C64], remaining: f64) -> Result<(Vec<C64>, f64)> {
        let n = psi.len();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok((psi.to_vec(), remaining));
        }
        let mut basis: Vec<Vec<C64>> = vec![psi.iter().map(|z| z / norm).collect()];
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        let mut w = vec![ZERO; n];
        let mut exact = false;
        let scale = self.h.max_abs().max(1.0);
        for j in 0..self.krylov_dim.min(n) {
            self.h.apply(&basis[j], &mut w);
            let a: f64 = basis[j].iter().zip(&w).map(|(v, x)| (v.conj() * x).re).sum();
            alpha.push(a);
            for v in &basis {
                let ov: C64 = v.iter().zip(&w).map(|(p, x)| p.conj() * x).sum();
                w.iter_mut().zip(v).for_each(|(x, p)| *x -= ov * p);
            }
            let b = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            beta.push(b);
            if b < 1e-13 * scale {
                exact = true;
                break;
            }
            if j + 1 < self.krylov_dim.min(n) {
                basis.push(w.iter().map(|z| z / b).collect());
            }
        }
        let m = alpha.len();
        if m == n {
            exact = true;
        }
        let t = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let coeffs = |tau: f64| -> Vec<C64> {
            (0..m)
                .map(|r| {
                    (0..m)
                        .map(|k| {
                            let u = eig.eigenvectors[(r, k)] * eig.eigenvectors[(0, k)];
                            C64::from_polar(u, -eig.eigenvalues[k] * tau)
                        })
                        .sum()
                })
                .collect()
        };
        let mut tau = remaining;
        let c = loop {
            let c = coeffs(tau);
            let err = if exact { 0.0 } else { beta[m - 1] * c[m - 1].norm() };
            if err <= self.tolerance {
                break c;
            }
            tau /= 2.0;
            if tau.abs() < 1e-14 * remaining.abs().max(1.0) {
                return Err(FraglabError::NonConvergence(format!(
                    "Krylov step shrank below resolution (bound {err:e})"
                )));
            }
        };
        let mut out = vec![ZERO; n];
        for (cj, v) in c.iter().zip(&basis) {
            let s = cj * norm;
            out.iter_mut().zip(v).for_each(|(o, x)| *o += s * x);
        }
        Ok((out, tau))
    }
}

impl Propagator for KrylovPropagator<'_> {
    fn propagate(&self, psi: &[C64], t: f64) -> Result<Vec<C64>> {
        let mut state = psi.to_vec();
        let mut done = 0.0;
        let mut guard = 0usize;
        while (t - done).abs() > 1e-15 * t.abs().max(1.0) {
            let (next, tau) = self.substep(&state, t - done)?;
            state = next;
            done += tau;
            guard += 1;
            if guard > 1_000_000 {
                return Err(FraglabError::NonConvergence("too many Krylov substeps".into()));
            }
        }
        Ok(state)
    }
}

fn support(psi: &[C64]) -> Vec<usize> {
    psi.iter()
        .enumerate()
        .filter(|(_, z)| z.norm_sqr() > 0.0)
        .map(|(k, _)| k)
        .collect()
}

/// States `exp(-iHt)|ψ_0⟩` at every time of the plan.
pub fn evolve(plan: &EvolutionPlan) -> Result<Vec<Vec<C64>>> {
    plan.validate()?;
    let h = plan.hamiltonian;
    if !h.is_hermitian() {
        return Err(FraglabError::InvalidInput("Hamiltonian is not Hermitian".into()));
    }
    let psi0 = plan.initial.to_vector(h.dim())?;
    let dense = match plan.method {
        Method::DenseSpectral => true,
        Method::IterativeKrylov => false,
        Method::Auto => {
            let sup = support(&psi0);
            let comps = h.components();
            let mut comp_of = vec![0; h.dim()];
            for (ci, c) in comps.iter().enumerate() {
                c.iter().for_each(|&m| comp_of[m] = ci);
            }
            sup.iter().all(|&s| comps[comp_of[s]].len() <= plan.auto_dense_max.min(plan.dense_cap))
        }
    };
    if dense {
        let prop = SpectralPropagator::for_support(h, &support(&psi0), plan.dense_cap)?;
        prop.evolve_many(&psi0, &plan.times)
    } else {
        let prop = KrylovPropagator::new(h, plan.tolerance);
        let mut out = Vec::with_capacity(plan.times.len());
        let mut state = psi0;
        let mut now = 0.0;
        for &t in &plan.times {
            state = prop.propagate(&state, t - now)?;
            now = t;
            out.push(state.clone());
        }
        Ok(out)
    }
}

pub fn norm(psi: &[C64]) -> f64 {
    psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Squared moduli.
pub fn probabilities(psi: &[C64]) -> Vec<f64> {
    psi.iter().map(|z| z.norm_sqr()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> SparseOperator {
        let mut t = Vec::new();
        for i in 0..n - 1 {
            t.push((i, i + 1, 1.0));
            t.push((i + 1, i, 1.0));
        }
        for i in 0..n {
            t.push((i, i, 0.1 * i as f64));
        }
        SparseOperator::from_triplets(n, t)
    }

    #[test]
    fn two_level_rabi() {
        let h = SparseOperator::from_triplets(2, vec![(0, 1, 1.0), (1, 0, 1.0)]);
        let plan = EvolutionPlan::new(&h, InitialState::Ordinal(0), vec![0.0, 0.5]);
        let s = evolve(&plan).unwrap();
        assert!((s[0][0] - C64::new(1.0, 0.0)).norm() < 1e-14 && s[0][1].norm() < 1e-14);
        assert!((s[1][1].norm_sqr() - 0.5f64.sin().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn dense_and_krylov_agree() {
        let h = chain(60);
        let times = vec![0.3, 1.0, 4.0];
        let d = evolve(&EvolutionPlan::new(&h, InitialState::Ordinal(7), times.clone()).with_method(Method::DenseSpectral)).unwrap();
        let k = evolve(&EvolutionPlan::new(&h, InitialState::Ordinal(7), times).with_method(Method::IterativeKrylov)).unwrap();
        for (a, b) in d.iter().zip(&k) {
            assert!(distance(a, b) < 1e-10);
            assert!((norm(b) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn backwards_returns() {
        let h = chain(40);
        let p = KrylovPropagator::new(&h, 1e-13);
        let psi0 = InitialState::Ordinal(3).to_vector(40).unwrap();
        let fwd = p.propagate(&psi0, 2.5).unwrap();
        let back = p.propagate(&fwd, -2.5).unwrap();
        assert!(distance(&back, &psi0) < 1e-10);
    }

    #[test]
    fn rejects_bad_times() {
        let h = chain(3);
        let plan = EvolutionPlan::new(&h, InitialState::Ordinal(0), vec![1.0, 1.0]);
        assert!(evolve(&plan).is_err());
        let plan = EvolutionPlan::new(&h, InitialState::Ordinal(0), vec![-1.0]);
        assert!(evolve(&plan).is_err());
    }

    #[test]
    fn dense_cap_guard() {
        let h = chain(10);
        assert!(matches!(
            SpectralPropagator::new(&h, 5),
            Err(FraglabError::Capacity { .. })
        ));
    }
}
