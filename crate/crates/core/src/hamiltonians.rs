//! Model operators on a [`Basis`].
//!
//! Energies are angular frequencies in rad/µs (`2π × MHz`) and times are in
//! µs, so `exp(-iHt)` needs no conversion. Flip terms act only on physical
//! atoms `3..=N-2`; the padding atoms stay in `g` and supply the boundary
//! projectors of the constrained terms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::basis::{Basis, BasisKind, BitConfig};
use crate::error::{FraglabError, Result};
use crate::lgtmap::cluster_count;
use crate::operator::SparseOperator;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Parameters of the Rydberg chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RydbergParams {
    /// Rabi frequency, rad/µs.
    pub omega: f64,
    /// Detuning, rad/µs.
    pub delta: f64,
    /// Lattice spacing, µm.
    pub spacing_a: f64,
    /// Van der Waals coefficient, rad/µs · µm⁶.
    pub c6: f64,
}

/// `x⁶` by explicit products; `powi` may round differently when folded.
#[inline]
fn pow6(x: f64) -> f64 {
    let x2 = x * x;
    x2 * x2 * x2
}

impl Default for RydbergParams {
    /// Experimental values with `Δ = V_1`.
    fn default() -> Self {
        let spacing_a: f64 = 3.37;
        let v1 = TWO_PI * 9.2;
        let c6 = v1 * pow6(2.0 * spacing_a);
        Self {
            omega: TWO_PI * 1.39,
            delta: v1,
            spacing_a,
            c6,
        }
    }
}

impl RydbergParams {
    /// Coupling at separation `(j + 1)·a`, `j = 0..=3`.
    pub fn v(&self, j: usize) -> f64 {
        self.c6 / pow6((j + 1) as f64 * self.spacing_a)
    }

    pub fn couplings(&self) -> [f64; 4] {
        [self.v(0), self.v(1), self.v(2), self.v(3)]
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }

    pub fn with_omega(self, omega: f64) -> Self {
        Self { omega, ..self }
    }

    /// `Ω² / (4 V_1)`, the scale of second-order processes.
    pub fn second_order_scale(&self) -> f64 {
        self.omega * self.omega / (4.0 * self.v(1))
    }
}

/// Assembles an operator from a diagonal function and a per-site flip rule.
///
/// `flip(config, i)` returns the amplitude for toggling atom `i`; targets
/// outside the basis are dropped, which projects onto the basis.
fn assemble<D, F>(basis: &Basis, diag: D, flip: F) -> SparseOperator
where
    D: Fn(&BitConfig) -> f64,
    F: Fn(&BitConfig, usize) -> Option<f64>,
{
    let spec = basis.spec();
    let mut t = Vec::new();
    for (k, c) in basis.iter().enumerate() {
        let d = diag(&c);
        if d != 0.0 {
            t.push((k, k, d));
        }
        for i in spec.physical() {
            if let Some(amp) = flip(&c, i) {
                if let Some(j) = basis.find(&c.flip(i)) {
                    t.push((j, k, amp));
                }
            }
        }
    }
    SparseOperator::from_triplets(basis.len(), t)
}

fn check_range(max_range: usize) -> Result<()> {
    if !(1..=3).contains(&max_range) {
        return Err(FraglabError::InvalidInput(format!(
            "max_range must be 1..=3, got {max_range}"
        )));
    }
    Ok(())
}

/// Shared Rydberg builder; `pair(i, d)` is the coupling between atoms `i`
/// and `i + d`.
fn rydberg_with<P>(basis: &Basis, omega: f64, delta: f64, max_range: usize, pair: P) -> SparseOperator
where
    P: Fn(usize, usize) -> f64,
{
    let phys = basis.spec().physical();
    let (lo, hi) = (*phys.start(), *phys.end());
    let half = omega / 2.0;
    assemble(
        basis,
        |c| {
            let mut e = -delta * c.rydberg_count() as f64;
            for i in lo..=hi {
                if c.is_g(i) {
                    continue;
                }
                for d in 1..=max_range {
                    if i + d <= hi && c.is_r(i + d) {
                        e += pair(i, d);
                    }
                }
            }
            e
        },
        |_, _| (half != 0.0).then_some(half),
    )
}

/// Full Rydberg Hamiltonian with interactions up to `max_range` sites.
///
/// On a blockaded basis the flips that would create `rr` are projected out
/// and the nearest-neighbour term vanishes identically.
pub fn build_h_ryd(basis: &Basis, params: &RydbergParams, max_range: usize) -> Result<SparseOperator> {
    check_range(max_range)?;
    let v = params.couplings();
    Ok(rydberg_with(basis, params.omega, params.delta, max_range, |_, d| v[d - 1]))
}

/// `PPXPQ + QPXPP` with coupling `w`.
pub fn build_h_lgt(basis: &Basis, w: f64) -> SparseOperator {
    assemble(basis, |_| 0.0, |c, i| lgt_flip_allowed(c, i).then_some(w))
}

/// Whether `H_LGT` may toggle atom `i` of `c`.
#[inline]
pub fn lgt_flip_allowed(c: &BitConfig, i: usize) -> bool {
    c.is_g(i - 1) && c.is_g(i + 1) && (c.is_r(i - 2) != c.is_r(i + 2))
}

/// Facilitated `PXQ + QXP` model with amplitude `Ω/2`, on the full space.
pub fn build_h_pxq(basis: &Basis, omega: f64) -> Result<SparseOperator> {
    if basis.kind() != BasisKind::Full {
        return Err(FraglabError::InvalidInput(
            "PXQ+QXP needs the unconstrained basis".into(),
        ));
    }
    let half = omega / 2.0;
    Ok(assemble(
        basis,
        |_| 0.0,
        |c, i| (c.is_r(i - 1) != c.is_r(i + 1)).then_some(half),
    ))
}

/// Diagonal cluster-number operator `N_c = 1 + Σ Q_i P_{i+2}`.
pub fn build_nc_operator(basis: &Basis) -> SparseOperator {
    let d: Vec<f64> = basis.iter().map(|c| cluster_count(&c) as f64).collect();
    SparseOperator::diagonal(&d)
}

/// `H_0 = V_0 Σ Q_i Q_{i+1}`.
pub fn build_h0(basis: &Basis, v0: f64) -> SparseOperator {
    let n = basis.spec().n_padded();
    assemble(
        basis,
        |c| v0 * (1..n).filter(|&i| c.is_r(i) && c.is_r(i + 1)).count() as f64,
        |_, _| None,
    )
}

/// `H_1 = -V_1 Σ Q_i P_{i+2}`.
pub fn build_h1(basis: &Basis, v1: f64) -> SparseOperator {
    let n = basis.spec().n_padded();
    assemble(
        basis,
        |c| -v1 * (1..=n - 2).filter(|&i| c.is_r(i) && c.is_g(i + 2)).count() as f64,
        |_, _| None,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LadderScale {
    /// Blockade scale; built on the full space.
    V0,
    /// Next-nearest-neighbour scale; built on the blockaded space.
    V1,
}

/// Fourier component of the drive: `[H_s, T_m] = m V_s T_m`.
#[derive(Debug, Clone)]
pub struct LadderOp {
    pub m: i32,
    pub op: SparseOperator,
}

/// Ladder decomposition of the drive `Ω/2 Σ X_i` at the requested scale.
///
/// The `V0` set returns `m = -2..=2` and needs a full basis. The `V1` set
/// returns `m = -1..=1` and needs a blockaded basis; its `m = 0` member is
/// `H_LGT` with `w = Ω/2`.
pub fn build_ladder_ops(basis: &Basis, params: &RydbergParams, scale: LadderScale) -> Result<Vec<LadderOp>> {
    let half = params.omega / 2.0;
    match scale {
        LadderScale::V0 => {
            if basis.kind() != BasisKind::Full {
                return Err(FraglabError::InvalidInput(
                    "the V0 ladder set needs the unconstrained basis".into(),
                ));
            }
            Ok((-2..=2)
                .map(|m| {
                    let op = assemble(basis, |_| 0.0, |c, i| {
                        let nbrs = c.is_r(i - 1) as i32 + c.is_r(i + 1) as i32;
                        let dm = if c.is_g(i) { nbrs } else { -nbrs };
                        (dm == m).then_some(half)
                    });
                    LadderOp { m, op }
                })
                .collect())
        }
        LadderScale::V1 => {
            if basis.kind() != BasisKind::Blockaded {
                return Err(FraglabError::InvalidInput(
                    "the V1 ladder set needs the blockaded basis".into(),
                ));
            }
            Ok((-1..=1)
                .map(|m| {
                    let op = assemble(basis, |_| 0.0, |c, i| {
                        (v1_ladder_index(c, i) == Some(m)).then_some(half)
                    });
                    LadderOp { m, op }
                })
                .collect())
        }
    }
}

/// Energy change of `H_1` in units of `V_1` when atom `i` is toggled, for
/// flips allowed by the blockade.
fn v1_ladder_index(c: &BitConfig, i: usize) -> Option<i32> {
    if c.is_r(i - 1) || c.is_r(i + 1) {
        return None;
    }
    let (ql, qr) = (c.is_r(i - 2), c.is_r(i + 2));
    let up = c.is_g(i);
    Some(match (ql, qr) {
        (true, false) | (false, true) => 0,
        // An isolated excitation opens one Q P bond, lowering H_1.
        (false, false) => {
            if up {
                -1
            } else {
                1
            }
        }
        // Between two excitations it closes the left neighbour's Q P bond.
        (true, true) => {
            if up {
                1
            } else {
                -1
            }
        }
    })
}

/// Second-order effective Hamiltonian with prefactor `J = Ω²/(4V_1)`.
///
/// Diagonal: `J Σ P_{i-1} Z_i P_{i+1} (P_{i-2}P_{i+2} - Q_{i-2}Q_{i+2})` with
/// `Z = +1` on `g`. Exchange: an excitation hops by two sites, `i-1 ↔ i+1`,
/// across ground atoms at `i-2, i, i+2` when the atoms at `i∓3` are both
/// ground or both Rydberg, with amplitude `-J`. The sign is the one
/// `[T_{0,+1}, T_{0,-1}]/V_1` produces on these processes.
pub fn build_h_eff2(basis: &Basis, omega: f64, v1: f64) -> Result<SparseOperator> {
    if basis.kind() != BasisKind::Blockaded {
        return Err(FraglabError::InvalidInput(
            "the effective Hamiltonian lives on the blockaded basis".into(),
        ));
    }
    let j = omega * omega / (4.0 * v1);
    let n = basis.spec().n_padded();
    let mut t = Vec::new();
    for (k, c) in basis.iter().enumerate() {
        let mut d = 0.0;
        for i in 3..=n - 2 {
            if c.is_r(i - 1) || c.is_r(i + 1) {
                continue;
            }
            let z = if c.is_g(i) { 1.0 } else { -1.0 };
            let outer = match (c.is_r(i - 2), c.is_r(i + 2)) {
                (false, false) => 1.0,
                (true, true) => -1.0,
                _ => 0.0,
            };
            d += j * z * outer;
        }
        if d != 0.0 {
            t.push((k, k, d));
        }
        for i in 4..=n - 3 {
            let gates = c.is_g(i - 2) && c.is_g(i) && c.is_g(i + 2);
            let ends = c.is_r(i - 3) == c.is_r(i + 3);
            if !(gates && ends) || c.is_r(i - 1) == c.is_r(i + 1) {
                continue;
            }
            let target = c.flip(i - 1).flip(i + 1);
            if let Some(m) = basis.find(&target) {
                t.push((m, k, -j));
            }
        }
    }
    Ok(SparseOperator::from_triplets(basis.len(), t))
}

/// One draw of atomic position disorder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisorderRealization {
    pub sigma_r: f64,
    pub seed: u64,
    /// In-plane offsets `(axial, transverse)` per physical atom, µm.
    pub displacements: Vec<[f64; 2]>,
    /// `pair_couplings[p][d-1]` couples physical atom `p` to `p + d`; zero
    /// past the chain end.
    pub pair_couplings: Vec<[f64; 3]>,
}

impl DisorderRealization {
    /// Coupling between padded positions `i` and `i + d`.
    pub fn coupling(&self, i: usize, d: usize) -> f64 {
        self.pair_couplings[i - 3][d - 1]
    }
}

/// First-order estimate `6 V_1 σ_r / (2a)`.
pub fn delta_v1_estimate(params: &RydbergParams, sigma_r: f64) -> f64 {
    6.0 * params.v(1) * sigma_r / (2.0 * params.spacing_a)
}

/// Draws Gaussian in-plane displacements for every physical atom.
///
/// Each Cartesian component has standard deviation `σ_r/√2`, so the
/// separation of a pair fluctuates with standard deviation `σ_r` along the
/// chain axis at first order.
pub fn sample_disorder(params: &RydbergParams, n_atoms: usize, sigma_r: f64, seed: u64) -> Result<DisorderRealization> {
    if !(sigma_r >= 0.0 && sigma_r.is_finite()) {
        return Err(FraglabError::InvalidInput(format!(
            "sigma_r must be finite and non-negative, got {sigma_r}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = sigma_r / std::f64::consts::SQRT_2;
    let displacements: Vec<[f64; 2]> = (0..n_atoms)
        .map(|_| {
            let x: f64 = StandardNormal.sample(&mut rng);
            let y: f64 = StandardNormal.sample(&mut rng);
            [s * x, s * y]
        })
        .collect();
    let pair_couplings = (0..n_atoms)
        .map(|p| {
            let mut row = [0.0; 3];
            for d in 1..=3 {
                if p + d < n_atoms {
                    let dx = displacements[p + d][0] - displacements[p][0];
                    let dy = displacements[p + d][1] - displacements[p][1];
                    let nominal = d as f64 * params.spacing_a;
                    let axial = nominal + dx;
                    let r = if dy == 0.0 { axial.abs() } else { axial.hypot(dy) };
                    // Relative to the clean coupling so σ_r = 0 reproduces it bit for bit.
                    row[d - 1] = params.v(d - 1) * pow6(nominal / r);
                }
            }
            row
        })
        .collect();
    Ok(DisorderRealization {
        sigma_r,
        seed,
        displacements,
        pair_couplings,
    })
}

/// Rydberg Hamiltonian with per-pair couplings and `Δ = V_1` of the clean
/// chain.
pub fn build_h_disordered(
    basis: &Basis,
    params: &RydbergParams,
    realization: &DisorderRealization,
    max_range: usize,
) -> Result<SparseOperator> {
    check_range(max_range)?;
    if realization.pair_couplings.len() != basis.spec().n_atoms() {
        return Err(FraglabError::InvalidInput(format!(
            "realization covers {} atoms, basis has {}",
            realization.pair_couplings.len(),
            basis.spec().n_atoms()
        )));
    }
    Ok(rydberg_with(basis, params.omega, params.v(1), max_range, |i, d| {
        realization.coupling(i, d)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{enumerate_blockaded, enumerate_full, pad, ChainSpec};

    fn blockaded(n: usize) -> Basis {
        enumerate_blockaded(ChainSpec::new(n).unwrap()).unwrap()
    }

    #[test]
    fn default_couplings() {
        let p = RydbergParams::default();
        assert!((p.v(1) - TWO_PI * 9.2).abs() < 1e-12);
        let v = p.couplings();
        assert!(v[0] > v[1] && v[1] > v[2] && v[2] > v[3] && v[3] > 0.0);
        assert!((p.second_order_scale() / TWO_PI - 0.0525).abs() < 1e-3);
    }

    #[test]
    fn two_atom_full_space_entries() {
        let b = enumerate_full(ChainSpec::new(2).unwrap()).unwrap();
        let p = RydbergParams::default();
        let h = build_h_ryd(&b, &p, 2).unwrap();
        assert!((h.get(3, 3) - (-2.0 * p.delta + p.v(0))).abs() < 1e-9);
        assert_eq!(h.get(0, 1), p.omega / 2.0);
    }

    #[test]
    fn omega_zero_is_diagonal() {
        let b = blockaded(6);
        let p = RydbergParams::default().with_omega(0.0);
        let h = build_h_ryd(&b, &p, 3).unwrap();
        assert!(h.triplets().all(|(r, c, _)| r == c));
        assert!(build_h_ryd(&b, &p, 4).is_err());
    }

    #[test]
    fn lgt_rows() {
        let b = blockaded(16);
        let h = build_h_lgt(&b, 1.0);
        let z3 = b.index_of(&pad("rggrggrggrggrggr").unwrap()).unwrap();
        assert_eq!(h.row_nnz(z3), 0);
        let f3a = b.index_of(&pad("ggggggrggrgggggg").unwrap()).unwrap();
        assert!(h.row_nnz(f3a) > 0);
        assert!(h.is_hermitian());
    }

    #[test]
    fn pxq_rows() {
        let b = enumerate_full(ChainSpec::new(5).unwrap()).unwrap();
        let h = build_h_pxq(&b, 2.0).unwrap();
        assert_eq!(h.row_nnz(b.index_of(&pad("ggggg").unwrap()).unwrap()), 0);
        assert_eq!(h.row_nnz(b.index_of(&pad("ggrgg").unwrap()).unwrap()), 2);
        assert!(build_h_pxq(&blockaded(5), 2.0).is_err());
    }

    #[test]
    fn nc_diagonal() {
        let b = blockaded(16);
        let nc = build_nc_operator(&b);
        let at = |s: &str| nc.get(b.index_of(&pad(s).unwrap()).unwrap(), b.index_of(&pad(s).unwrap()).unwrap());
        assert_eq!(at("rggggrggggrggggr"), 5.0);
        assert_eq!(at("gggggggggggggggg"), 1.0);
        assert_eq!(at("rggrggrggrggrggr"), 7.0);
    }

    #[test]
    fn t00_is_h_lgt() {
        let b = blockaded(9);
        let p = RydbergParams::default();
        let ops = build_ladder_ops(&b, &p, LadderScale::V1).unwrap();
        let t00 = &ops.iter().find(|o| o.m == 0).unwrap().op;
        assert_eq!(t00.sub(&build_h_lgt(&b, p.omega / 2.0)).max_abs(), 0.0);
    }

    #[test]
    fn disorder_zero_is_clean() {
        let p = RydbergParams::default();
        let r = sample_disorder(&p, 8, 0.0, 7).unwrap();
        assert_eq!(r.pair_couplings[0], [p.v(0), p.v(1), p.v(2)]);
        let b = blockaded(8);
        let clean = build_h_ryd(&b, &p.with_delta(p.v(1)), 3).unwrap();
        let dis = build_h_disordered(&b, &p, &r, 3).unwrap();
        assert_eq!(clean, dis);
    }

    #[test]
    fn disorder_is_seeded() {
        let p = RydbergParams::default();
        let a = sample_disorder(&p, 10, 0.083, 11).unwrap();
        let b = sample_disorder(&p, 10, 0.083, 11).unwrap();
        let c = sample_disorder(&p, 10, 0.083, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(sample_disorder(&p, 10, -1.0, 0).is_err());
    }

    #[test]
    fn delta_v1_default() {
        let p = RydbergParams::default();
        let dv = delta_v1_estimate(&p, 0.083) / TWO_PI;
        assert!((dv - 0.68).abs() < 0.01, "{dv}");
    }
}
