//! Quantum-link picture of a padded bitstring.
//!
//! Matter site `j` (`1..=N-1`) sits between atoms `j` and `j + 1`. A maximal
//! block of `m >= 2` ground atoms starting at atom `i` is a charge cluster on
//! sites `i..=i+m-2`; everything between clusters is vacuum. Cluster centres
//! are kept doubled (`left + right`) so half-integer positions stay exact.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::basis::{is_blockaded, BitConfig};
use crate::error::{FraglabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterKind {
    Charged,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cluster {
    /// 1-based ordinal from the left.
    pub k: usize,
    pub left_site: usize,
    pub right_site: usize,
    pub site_length: usize,
    /// `left_site + right_site`, twice the centre of mass.
    pub doubled_center: usize,
    pub kind: ClusterKind,
    pub net_charge: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VacuumRun {
    pub start: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClusterDecomposition {
    pub n_sites: usize,
    pub clusters: Vec<Cluster>,
    pub vacuum_runs: Vec<VacuumRun>,
}

impl ClusterDecomposition {
    /// `N_c`.
    pub fn n_clusters(&self) -> usize {
        self.clusters.len()
    }

    pub fn n_charged(&self) -> usize {
        self.clusters
            .iter()
            .filter(|c| c.kind == ClusterKind::Charged)
            .count()
    }

    /// Rebuilds the padded bitstring this decomposition came from.
    pub fn reconstruct(&self) -> BitConfig {
        let n = self.n_sites + 1;
        let mut c = BitConfig::all_g(n);
        for run in &self.vacuum_runs {
            // A run of 2m sites hides 2m-1 separator atoms r g r ... r,
            // starting one atom after the run's first site.
            for (off, atom) in (run.start + 1..run.start + run.length).enumerate() {
                if off % 2 == 0 {
                    c = c.flip(atom);
                }
            }
        }
        c
    }
}

/// Maximum possible number of clusters, the default SLIOM pattern length.
pub fn default_k_max(n_sites: usize) -> usize {
    n_sites.div_ceil(3)
}

fn require_valid(config: &BitConfig) -> Result<()> {
    if !config.has_padding() {
        return Err(FraglabError::ConstraintViolation(format!(
            "{config} lacks g-padding"
        )));
    }
    if !is_blockaded(config) {
        return Err(FraglabError::ConstraintViolation(format!(
            "{config} has adjacent Rydberg atoms"
        )));
    }
    Ok(())
}

/// Splits a padded blockaded configuration into clusters and vacuum runs.
pub fn decompose(config: &BitConfig) -> Result<ClusterDecomposition> {
    require_valid(config)?;
    let n = config.len();
    let mut clusters = Vec::new();
    let mut vacuum_runs = Vec::new();
    let mut i = 1;
    while i <= n {
        if config.is_r(i) {
            i += 1;
            continue;
        }
        let start = i;
        while i <= n && config.is_g(i) {
            i += 1;
        }
        let m = i - start;
        if m < 2 {
            continue;
        }
        let (left, right) = (start, start + m - 2);
        if let Some(prev) = clusters.last().map(|c: &Cluster| c.right_site) {
            vacuum_runs.push(VacuumRun {
                start: prev + 1,
                length: left - prev - 1,
            });
        }
        let site_length = right - left + 1;
        let charged = site_length % 2 == 1;
        clusters.push(Cluster {
            k: clusters.len() + 1,
            left_site: left,
            right_site: right,
            site_length,
            doubled_center: left + right,
            kind: if charged {
                ClusterKind::Charged
            } else {
                ClusterKind::Neutral
            },
            net_charge: match (charged, left % 2) {
                (false, _) => 0,
                (true, 1) => -1,
                (true, _) => 1,
            },
        });
    }
    Ok(ClusterDecomposition {
        n_sites: n - 1,
        clusters,
        vacuum_runs,
    })
}

/// `N_c = 1 + sum_i Q_i P_{i+2}`, valid for any padded configuration.
pub fn cluster_count(config: &BitConfig) -> usize {
    let n = config.len();
    1 + (1..=n - 2)
        .filter(|&i| config.is_r(i) && config.is_g(i + 2))
        .count()
}

/// Labels `q_k`: `+1` charged, `-1` neutral, `0` beyond the last cluster.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SliomPattern {
    pub q: Vec<i8>,
}

impl SliomPattern {
    pub fn n_clusters(&self) -> usize {
        self.q.iter().take_while(|&&v| v != 0).count()
    }

    pub fn nonzero(&self) -> &[i8] {
        &self.q[..self.n_clusters()]
    }

    /// Number of charged clusters, `N_q`.
    pub fn n_charged(&self) -> usize {
        self.q.iter().filter(|&&v| v == 1).count()
    }

    /// Number of neutral clusters, `N_0`.
    pub fn n_neutral(&self) -> usize {
        self.q.iter().filter(|&&v| v == -1).count()
    }

    /// Pattern of the spatially inverted chain, same length.
    pub fn reversed(&self) -> Self {
        let mut q: Vec<i8> = self.nonzero().iter().rev().copied().collect();
        q.resize(self.q.len(), 0);
        Self { q }
    }

    /// Space-separated `c`/`n` labels of the nonzero prefix.
    pub fn labels(&self) -> String {
        self.nonzero()
            .iter()
            .map(|&v| if v == 1 { "c" } else { "n" })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for SliomPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.q.iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn sliom_pattern(decomp: &ClusterDecomposition, k_max: usize) -> Result<SliomPattern> {
    if k_max < decomp.n_clusters() {
        return Err(FraglabError::InvalidInput(format!(
            "k_max={k_max} below cluster count {}",
            decomp.n_clusters()
        )));
    }
    let mut q = vec![0i8; k_max];
    for c in &decomp.clusters {
        q[c.k - 1] = match c.kind {
            ClusterKind::Charged => 1,
            ClusterKind::Neutral => -1,
        };
    }
    Ok(SliomPattern { q })
}

/// Pattern with the default `k_max` for the configuration's length.
pub fn pattern_of(config: &BitConfig) -> Result<SliomPattern> {
    let d = decompose(config)?;
    let k_max = default_k_max(d.n_sites);
    sliom_pattern(&d, k_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Link {
    Left,
    Right,
}

impl Link {
    /// `S^z` in units where the link spin is 1/2: left is `+1/2`.
    pub fn doubled_sz(self) -> i32 {
        match self {
            Link::Left => 1,
            Link::Right => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ElectricStringConfig {
    /// Bond `b` (1-based) at index `b - 1`.
    pub bonds: Vec<Link>,
}

impl ElectricStringConfig {
    /// `rho_j = S^z_j - S^z_{j+1}` on each matter site `j`.
    pub fn charges(&self) -> Vec<i32> {
        self.bonds
            .windows(2)
            .map(|w| (w[0].doubled_sz() - w[1].doubled_sz()) / 2)
            .collect()
    }
}

/// Staggered atom-to-link map: odd bonds send `g` right, even bonds left.
pub fn electric_strings(config: &BitConfig) -> ElectricStringConfig {
    let bonds = (1..=config.len())
        .map(|b| match (b % 2 == 1, config.is_g(b)) {
            (true, true) | (false, false) => Link::Right,
            _ => Link::Left,
        })
        .collect();
    ElectricStringConfig { bonds }
}

/// Every site carries a charge allowed by the staggered matter convention:
/// odd sites host `0` or `-1`, even sites `0` or `+1`.
pub fn gauss_check(config: &BitConfig) -> bool {
    electric_strings(config)
        .charges()
        .iter()
        .enumerate()
        .all(|(idx, &rho)| {
            let site = idx + 1;
            if site % 2 == 1 {
                rho == 0 || rho == -1
            } else {
                rho == 0 || rho == 1
            }
        })
}

pub fn invert(config: &BitConfig) -> BitConfig {
    config.reversed()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterRecord {
    pub k: usize,
    pub left: usize,
    pub right: usize,
    pub charge: i8,
}

/// Serialisable form of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub config: String,
    pub clusters: Vec<ClusterRecord>,
    pub pattern: Vec<i8>,
}

impl DecompositionRecord {
    pub fn new(config: &BitConfig, decomp: &ClusterDecomposition, pattern: &SliomPattern) -> Self {
        Self {
            config: config.to_string(),
            clusters: decomp
                .clusters
                .iter()
                .map(|c| ClusterRecord {
                    k: c.k,
                    left: c.left_site,
                    right: c.right_site,
                    charge: c.net_charge,
                })
                .collect(),
            pattern: pattern.q.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::pad;

    fn pat(raw: &str) -> Vec<i8> {
        pattern_of(&pad(raw).unwrap()).unwrap().nonzero().to_vec()
    }

    #[test]
    fn table_patterns() {
        assert_eq!(pat("rggggrggggrggggr"), [1, 1, 1, 1, 1]);
        assert_eq!(pat("grgggrggggrggggr"), [-1, -1, 1, 1, 1]);
        assert_eq!(pat("rgggggrggrgggggr"), [1, -1, 1, -1, 1]);
    }

    #[test]
    fn z3_has_seven_unit_clusters() {
        let d = decompose(&pad("rggrggrggrggrggr").unwrap()).unwrap();
        assert_eq!(d.n_clusters(), 7);
        assert!(d.clusters.iter().all(|c| c.site_length == 1));
    }

    #[test]
    fn boundary_clusters_of_seven() {
        let d = decompose(&pad("ggggggrggrgggggg").unwrap()).unwrap();
        let lens: Vec<_> = d.clusters.iter().map(|c| c.site_length).collect();
        assert_eq!(lens, [7, 1, 7]);
        assert_eq!(pat("ggggggrggrgggggg"), [1, 1, 1]);
    }

    #[test]
    fn first_charged_cluster_is_negative() {
        let d = decompose(&pad("rggggrggggrggggr").unwrap()).unwrap();
        let q: Vec<_> = d.clusters.iter().map(|c| c.net_charge).collect();
        assert_eq!(q, [-1, 1, -1, 1, -1]);
    }

    #[test]
    fn vacuum_between_clusters() {
        let d = decompose(&pad("rgr").unwrap()).unwrap();
        assert_eq!(d.n_clusters(), 2);
        assert_eq!(d.vacuum_runs, [VacuumRun { start: 2, length: 4 }]);
    }

    #[test]
    fn rejects_rr() {
        assert!(decompose(&pad("grrg").unwrap()).is_err());
        assert!(!gauss_check(&pad("grrg").unwrap()));
    }

    #[test]
    fn strings_of_all_g_alternate() {
        let s = electric_strings(&pad("gggg").unwrap());
        for (i, l) in s.bonds.iter().enumerate() {
            let want = if i % 2 == 0 { Link::Right } else { Link::Left };
            assert_eq!(*l, want);
        }
        let one = electric_strings(&pad("r").unwrap());
        assert_eq!(one.bonds[2], Link::Left);
    }

    #[test]
    fn k_max_guard() {
        let d = decompose(&pad("rggrggrggrggrggr").unwrap()).unwrap();
        assert!(sliom_pattern(&d, 6).is_err());
        assert_eq!(sliom_pattern(&d, 9).unwrap().q[7..], [0, 0]);
    }

    #[test]
    fn inversion_pairs() {
        let c = pad("grgggrggggrggggr").unwrap();
        assert_eq!(pattern_of(&invert(&c)).unwrap().nonzero(), [1, 1, 1, -1, -1]);
    }

    #[test]
    fn nc_formula_matches() {
        for raw in ["rggggrggggrggggr", "gggg", "rggrggrggrggrggr", "grgrgrg"] {
            let c = pad(raw).unwrap();
            assert_eq!(cluster_count(&c), decompose(&c).unwrap().n_clusters());
        }
    }
}
