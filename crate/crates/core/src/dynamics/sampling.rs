//! Projective Z-basis snapshots with asymmetric readout noise and
//! post-selection.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basis::{is_blockaded, Basis, BitConfig};
use crate::error::{FraglabError, Result};
use crate::lgtmap::cluster_count;
use crate::operator::SparseOperator;

use super::propagate::{evolve, probabilities, EvolutionPlan, InitialState};

/// Per-atom bit-flip channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpamModel {
    /// Probability that a ground atom reads as Rydberg.
    pub p_g_error: f64,
    /// Probability that a Rydberg atom reads as ground.
    pub p_r_error: f64,
}

impl Default for SpamModel {
    fn default() -> Self {
        Self {
            p_g_error: 0.01,
            p_r_error: 0.05,
        }
    }
}

impl SpamModel {
    fn validate(&self) -> Result<()> {
        let ok = |p: f64| (0.0..=1.0).contains(&p);
        if !(ok(self.p_g_error) && ok(self.p_r_error)) {
            return Err(FraglabError::InvalidInput(format!("bad SPAM rates {self:?}")));
        }
        Ok(())
    }

    /// Passes the physical atoms of `c` through the channel.
    pub fn apply<R: Rng>(&self, c: &BitConfig, rng: &mut R) -> BitConfig {
        let mut out = *c;
        for i in 3..=c.len() - 2 {
            let p = if c.is_r(i) { self.p_r_error } else { self.p_g_error };
            if rng.random::<f64>() < p {
                out = out.flip(i);
            }
        }
        out
    }
}

/// Derives an independent stream seed from a root seed and a key path.
pub fn derive_seed(root: u64, key: &[u64]) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    key.iter().fold(splitmix(root), |acc, &k| splitmix(acc ^ splitmix(k)))
}

/// One measured bitstring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    /// µs.
    pub time: f64,
    pub time_index: usize,
    pub shot: usize,
    /// Padded readout; padding is never measured and stays `g`.
    pub bits: BitConfig,
    /// Seed of the stream that produced this snapshot.
    pub stream_seed: u64,
}

/// Streamed form of a snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub t: f64,
    pub shot: usize,
    pub bits: String,
}

impl From<&Snapshot> for SnapshotRecord {
    fn from(s: &Snapshot) -> Self {
        Self {
            t: s.time,
            shot: s.shot,
            bits: s.bits.physical_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub shots_per_time: usize,
    /// Readout channel; `None` for perfect readout.
    pub spam: Option<SpamModel>,
    /// Also pass the initial product state through the channel, shot by
    /// shot. Flips that would leave the basis are suppressed.
    pub prep_errors: bool,
    pub seed: u64,
}

/// Draws `shots_per_time` snapshots at each time from the quench of
/// `initial` under `h`.
pub fn sample_snapshots(
    basis: &Basis,
    h: &SparseOperator,
    initial: &BitConfig,
    times: &[f64],
    cfg: &SamplingConfig,
) -> Result<Vec<Snapshot>> {
    if cfg.shots_per_time == 0 {
        return Err(FraglabError::InvalidInput("shots_per_time must be at least 1".into()));
    }
    if let Some(s) = &cfg.spam {
        s.validate()?;
    }
    let i0 = basis.index_of(initial)?;
    // Cumulative distributions over the time grid, one set per prepared
    // initial ordinal.
    let mut cdfs: BTreeMap<usize, Vec<Vec<f64>>> = BTreeMap::new();
    let cdf_of = |ord: usize| -> Result<Vec<Vec<f64>>> {
        let states = evolve(&EvolutionPlan::new(h, InitialState::Ordinal(ord), times.to_vec()))?;
        Ok(states
            .iter()
            .map(|psi| {
                let mut acc = 0.0;
                probabilities(psi)
                    .into_iter()
                    .map(|p| {
                        acc += p;
                        acc
                    })
                    .collect()
            })
            .collect())
    };
    let stream_seed = derive_seed(cfg.seed, &[i0 as u64]);
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed);
    let mut out = Vec::with_capacity(times.len() * cfg.shots_per_time);
    for (ti, &t) in times.iter().enumerate() {
        for shot in 0..cfg.shots_per_time {
            let ord = match (&cfg.spam, cfg.prep_errors) {
                (Some(s), true) => {
                    let prepared = s.apply(initial, &mut rng);
                    basis.find(&prepared).unwrap_or(i0)
                }
                _ => i0,
            };
            if let std::collections::btree_map::Entry::Vacant(e) = cdfs.entry(ord) {
                e.insert(cdf_of(ord)?);
            }
            let cdf = &cdfs[&ord][ti];
            let total = *cdf.last().expect("nonempty basis");
            let u = rng.random::<f64>() * total;
            let k = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            let mut bits = basis.state(k);
            if let Some(s) = &cfg.spam {
                bits = s.apply(&bits, &mut rng);
            }
            out.push(Snapshot {
                time: t,
                time_index: ti,
                shot,
                bits,
                stream_seed,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostselectStats {
    pub total: usize,
    pub rejected_blockade: usize,
    pub rejected_nc: usize,
    pub kept: usize,
}

impl PostselectStats {
    pub fn survival(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.kept as f64 / self.total as f64
        }
    }
}

/// Keeps snapshots that satisfy the blockade and, optionally, a cluster
/// count. The blockade filter runs first.
pub fn postselect(
    snapshots: &[Snapshot],
    require_blockade: bool,
    require_nc: Option<usize>,
) -> (Vec<Snapshot>, PostselectStats) {
    let mut stats = PostselectStats {
        total: snapshots.len(),
        rejected_blockade: 0,
        rejected_nc: 0,
        kept: 0,
    };
    let kept: Vec<Snapshot> = snapshots
        .iter()
        .filter(|s| {
            if require_blockade && !is_blockaded(&s.bits) {
                stats.rejected_blockade += 1;
                return false;
            }
            if let Some(nc) = require_nc {
                if cluster_count(&s.bits) != nc {
                    stats.rejected_nc += 1;
                    return false;
                }
            }
            true
        })
        .copied()
        .collect();
    stats.kept = kept.len();
    (kept, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::pad;

    #[test]
    fn spam_channel_rates() {
        let c = pad("rgrgrgrgrg").unwrap();
        let s = SpamModel::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (mut gr, mut rg) = (0usize, 0usize);
        let n = 20_000;
        for _ in 0..n {
            let o = s.apply(&c, &mut rng);
            for i in 3..=12 {
                match (c.is_r(i), o.is_r(i)) {
                    (false, true) => gr += 1,
                    (true, false) => rg += 1,
                    _ => {}
                }
            }
            assert!(o.has_padding());
        }
        let trials = (5 * n) as f64;
        assert!((gr as f64 / trials - 0.01).abs() < 5.0 * (0.01 * 0.99 / trials).sqrt());
        assert!((rg as f64 / trials - 0.05).abs() < 5.0 * (0.05 * 0.95 / trials).sqrt());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, &[0]), derive_seed(1, &[1]));
        assert_ne!(derive_seed(1, &[0]), derive_seed(2, &[0]));
        assert_eq!(derive_seed(5, &[3, 4]), derive_seed(5, &[3, 4]));
    }

    #[test]
    fn postselect_filters() {
        let mk = |s: &str| Snapshot {
            time: 0.0,
            time_index: 0,
            shot: 0,
            bits: pad(s).unwrap(),
            stream_seed: 0,
        };
        let snaps = [mk("rgrg"), mk("rrgg"), mk("gggg")];
        let (kept, st) = postselect(&snaps, true, Some(1));
        assert_eq!(kept.len(), 1);
        assert_eq!((st.rejected_blockade, st.rejected_nc), (1, 1));
    }
}
