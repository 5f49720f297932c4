//! Temporal-ensemble reconstruction of sector-averaged SLIOM distributions.
//!
//! Snapshots from each fragment give per-cluster histograms of cluster
//! centres; these are averaged over fragments with weights proportional to
//! fragment dimension. Fragments whose pattern is the mirror image of a
//! sampled one are filled in by spatially inverting that fragment's
//! snapshots.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{Basis, BitConfig};
use crate::error::{FraglabError, Result};
use crate::fragments::{Fragment, FragmentTable};
use crate::lgtmap::{decompose, invert, SliomPattern};
use crate::operator::SparseOperator;
use crate::sliomstats::EmpiricalDistribution;

use super::observables::{average_projections, Averaging, TimeWindow};
use super::propagate::{evolve, EvolutionPlan, InitialState};
use super::sampling::{derive_seed, postselect, sample_snapshots, PostselectStats, SamplingConfig, Snapshot};

/// Snapshots attributed to one fragment.
#[derive(Debug, Clone)]
pub struct FragmentSamples {
    pub pattern: SliomPattern,
    /// Fragment dimension, the averaging weight.
    pub weight: f64,
    pub snapshots: Vec<Snapshot>,
    /// True when filled in from the mirror-image fragment.
    pub mirrored: bool,
}

#[derive(Debug, Clone)]
pub struct TemporalEnsemble {
    pub n_c: usize,
    pub window: TimeWindow,
    /// Every pattern the sector contains.
    pub expected: Vec<SliomPattern>,
    pub entries: Vec<FragmentSamples>,
}

impl TemporalEnsemble {
    /// Adds mirrored entries for expected patterns whose mirror image was
    /// sampled but which were not sampled themselves.
    pub fn with_inversion_partners(mut self) -> Self {
        let have: BTreeSet<SliomPattern> = self.entries.iter().map(|e| e.pattern.clone()).collect();
        let mut extra = Vec::new();
        for p in &self.expected {
            if have.contains(p) {
                continue;
            }
            let mirror = p.reversed();
            if let Some(src) = self.entries.iter().find(|e| e.pattern == mirror && !e.mirrored) {
                extra.push(FragmentSamples {
                    pattern: p.clone(),
                    weight: src.weight,
                    snapshots: src
                        .snapshots
                        .iter()
                        .map(|s| Snapshot {
                            bits: invert(&s.bits),
                            ..*s
                        })
                        .collect(),
                    mirrored: true,
                });
            }
        }
        self.entries.extend(extra);
        self.entries.sort_by(|a, b| a.pattern.cmp(&b.pattern));
        self
    }

    pub fn missing(&self) -> Vec<SliomPattern> {
        let have: BTreeSet<&SliomPattern> = self.entries.iter().map(|e| &e.pattern).collect();
        self.expected.iter().filter(|p| !have.contains(p)).cloned().collect()
    }
}

/// Histogram of cluster centres of one set of snapshots, per cluster index
/// `1..=k_max`, each normalised by the snapshot count.
fn histograms(snapshots: &[Snapshot], k_max: usize) -> Vec<BTreeMap<usize, f64>> {
    let mut h = vec![BTreeMap::new(); k_max];
    let mut used = 0usize;
    for s in snapshots {
        let Ok(d) = decompose(&s.bits) else { continue };
        used += 1;
        for c in d.clusters.iter().take(k_max) {
            *h[c.k - 1].entry(c.doubled_center).or_insert(0.0) += 1.0;
        }
    }
    if used > 0 {
        for m in &mut h {
            m.values_mut().for_each(|v| *v /= used as f64);
        }
    }
    h
}

/// Dimension-weighted average of per-fragment histograms, normalised per
/// cluster index, for `k = 1..=N_c`.
pub fn ensemble_distribution(ensemble: &TemporalEnsemble) -> Result<Vec<EmpiricalDistribution>> {
    let missing = ensemble.missing();
    if !missing.is_empty() {
        return Err(FraglabError::MissingFragments(
            missing.iter().map(|p| p.labels()).collect(),
        ));
    }
    let k_max = ensemble.n_c;
    let mut acc = vec![BTreeMap::<usize, f64>::new(); k_max];
    for e in &ensemble.entries {
        for (k, h) in histograms(&e.snapshots, k_max).into_iter().enumerate() {
            for (x, v) in h {
                *acc[k].entry(x).or_insert(0.0) += e.weight * v;
            }
        }
    }
    Ok(acc
        .into_iter()
        .enumerate()
        .map(|(k, mut weights)| {
            let total: f64 = weights.values().sum();
            if total > 0.0 {
                weights.values_mut().for_each(|v| *v /= total);
            }
            EmpiricalDistribution { k: k + 1, weights }
        })
        .collect())
}

/// Initial state of a fragment: fewest Rydberg atoms, then lowest ordinal.
pub fn representative(basis: &Basis, fragment: &Fragment) -> BitConfig {
    fragment
        .members
        .iter()
        .map(|&m| basis.state(m))
        .min_by_key(|c| (c.rydberg_count(), c.bits()))
        .expect("fragments are nonempty")
}

/// Post-selection applied to each fragment's snapshots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Postselection {
    pub blockade: bool,
    /// Keep only snapshots with the sector's cluster count.
    pub cluster_number: bool,
}

#[derive(Debug, Clone)]
pub struct ProtocolOutput {
    pub ensemble: TemporalEnsemble,
    pub distributions: Vec<EmpiricalDistribution>,
    /// Per sampled fragment: pattern labels and post-selection counts.
    pub stats: Vec<(String, PostselectStats)>,
}

/// Samples one initial state per listed fragment, post-selects, fills in
/// mirror partners and averages.
///
/// `initials` picks the probed fragments; fragments of the sector that are
/// neither probed nor mirror images of probed ones make the average fail.
#[allow(clippy::too_many_arguments)]
pub fn run_sector_protocol(
    basis: &Basis,
    table: &FragmentTable,
    h: &SparseOperator,
    n_c: usize,
    initials: &[BitConfig],
    window: &TimeWindow,
    omega: f64,
    sampling: &SamplingConfig,
    post: Postselection,
) -> Result<ProtocolOutput> {
    let times = window.times(omega);
    let expected: Vec<SliomPattern> = table.in_sector(n_c).map(|f| f.pattern.clone()).collect();
    let sampled: Vec<(FragmentSamples, (String, PostselectStats))> = initials
        .par_iter()
        .enumerate()
        .map(|(i, init)| {
            let ord = basis.index_of(init)?;
            let frag = &table.fragments[table.fragment_of(ord)];
            if frag.n_c != n_c {
                return Err(FraglabError::InvalidInput(format!(
                    "initial state {init} lies in sector {} not {n_c}",
                    frag.n_c
                )));
            }
            let cfg = SamplingConfig {
                seed: derive_seed(sampling.seed, &[i as u64]),
                ..*sampling
            };
            let snaps = sample_snapshots(basis, h, init, &times, &cfg)?;
            let (kept, stats) = postselect(&snaps, post.blockade, post.cluster_number.then_some(n_c));
            Ok((
                FragmentSamples {
                    pattern: frag.pattern.clone(),
                    weight: frag.dim() as f64,
                    snapshots: kept,
                    mirrored: false,
                },
                (frag.pattern.labels(), stats),
            ))
        })
        .collect::<Result<_>>()?;
    let (entries, stats): (Vec<_>, Vec<_>) = sampled.into_iter().unzip();
    let ensemble = TemporalEnsemble {
        n_c,
        window: *window,
        expected,
        entries,
    }
    .with_inversion_partners();
    let distributions = ensemble_distribution(&ensemble)?;
    Ok(ProtocolOutput {
        ensemble,
        distributions,
        stats,
    })
}

/// Infinite-shot limit of the protocol without readout noise: exact
/// window-averaged projections of every fragment's quench.
pub fn exact_window_distribution(
    basis: &Basis,
    table: &FragmentTable,
    h: &SparseOperator,
    n_c: usize,
    initials: &[BitConfig],
    window: &TimeWindow,
    omega: f64,
) -> Result<Vec<EmpiricalDistribution>> {
    let times = window.times(omega);
    let mut acc = vec![BTreeMap::<usize, f64>::new(); n_c];
    let mut covered = BTreeSet::new();
    let mut add = |pattern: &SliomPattern, weight: f64, probs: &[f64], mirror: bool| -> Result<()> {
        covered.insert(pattern.clone());
        for (m, &p) in probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut c = basis.state(m);
            if mirror {
                c = invert(&c);
            }
            let d = decompose(&c)?;
            for cl in d.clusters.iter().take(n_c) {
                *acc[cl.k - 1].entry(cl.doubled_center).or_insert(0.0) += weight * p;
            }
        }
        Ok(())
    };
    for init in initials {
        let ord = basis.index_of(init)?;
        let frag = &table.fragments[table.fragment_of(ord)];
        let states = evolve(&EvolutionPlan::new(h, InitialState::Ordinal(ord), times.clone()))?;
        let probs = average_projections(&states, Averaging::Uniform);
        add(&frag.pattern, frag.dim() as f64, &probs, false)?;
        let mirror = frag.pattern.reversed();
        if mirror != frag.pattern && !initials.iter().any(|i| {
            basis
                .find(i)
                .map(|o| table.fragments[table.fragment_of(o)].pattern == mirror)
                .unwrap_or(false)
        }) {
            add(&mirror, frag.dim() as f64, &probs, true)?;
        }
    }
    let missing: Vec<String> = table
        .in_sector(n_c)
        .filter(|f| !covered.contains(&f.pattern))
        .map(|f| f.pattern.labels())
        .collect();
    if !missing.is_empty() {
        return Err(FraglabError::MissingFragments(missing));
    }
    Ok(acc
        .into_iter()
        .enumerate()
        .map(|(k, mut weights)| {
            let t: f64 = weights.values().sum();
            weights.values_mut().for_each(|v| *v /= t);
            EmpiricalDistribution { k: k + 1, weights }
        })
        .collect())
}
