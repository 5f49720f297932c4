//! Krylov fragments of `H_LGT`: live discovery and exact census.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{Basis, BasisKind};
use crate::combinatorics::{binomial, ClusterTables};
use crate::error::{FraglabError, Result};
use crate::hamiltonians::lgt_flip_allowed;
use crate::lgtmap::{decompose, default_k_max, sliom_pattern, SliomPattern};
use crate::operator::SparseOperator;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    /// Smallest member ordinal.
    pub id: usize,
    /// Sorted basis ordinals.
    pub members: Vec<usize>,
    pub pattern: SliomPattern,
    pub n_c: usize,
}

impl Fragment {
    pub fn dim(&self) -> usize {
        self.members.len()
    }
}

/// Partition of a blockaded basis into fragments, ordered by id.
#[derive(Debug, Clone)]
pub struct FragmentTable {
    pub fragments: Vec<Fragment>,
    fragment_of: Vec<usize>,
}

impl FragmentTable {
    fn from_components(basis: &Basis, comps: Vec<Vec<usize>>) -> Result<Self> {
        if basis.kind() != BasisKind::Blockaded {
            return Err(FraglabError::InvalidInput(
                "fragments are defined on the blockaded basis".into(),
            ));
        }
        let k_max = default_k_max(basis.spec().n_sites());
        let mut fragments = comps
            .into_par_iter()
            .map(|members| {
                let d = decompose(&basis.state(members[0]))?;
                let pattern = sliom_pattern(&d, k_max)?;
                Ok(Fragment {
                    id: members[0],
                    n_c: d.n_clusters(),
                    members,
                    pattern,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        fragments.sort_by_key(|f| f.id);
        let mut fragment_of = vec![0; basis.len()];
        for (f, frag) in fragments.iter().enumerate() {
            for &m in &frag.members {
                fragment_of[m] = f;
            }
        }
        Ok(Self {
            fragments,
            fragment_of,
        })
    }

    pub fn len(&self) -> usize {
        self.fragments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    /// Position in `fragments` of the fragment holding `ordinal`.
    pub fn fragment_of(&self, ordinal: usize) -> usize {
        self.fragment_of[ordinal]
    }

    pub fn pattern_of(&self, fragment: usize) -> &SliomPattern {
        &self.fragments[fragment].pattern
    }

    pub fn sector_of(&self, fragment: usize) -> usize {
        self.fragments[fragment].n_c
    }

    pub fn in_sector(&self, n_c: usize) -> impl Iterator<Item = &Fragment> {
        self.fragments.iter().filter(move |f| f.n_c == n_c)
    }

    pub fn find_pattern(&self, pattern: &SliomPattern) -> Option<&Fragment> {
        self.fragments.iter().find(|f| &f.pattern == pattern)
    }
}

/// Connected components of the off-diagonal graph of `h_lgt`.
pub fn find_fragments(basis: &Basis, h_lgt: &SparseOperator) -> Result<FragmentTable> {
    if h_lgt.dim() != basis.len() {
        return Err(FraglabError::InvalidInput(format!(
            "operator dim {} does not match basis size {}",
            h_lgt.dim(),
            basis.len()
        )));
    }
    FragmentTable::from_components(basis, h_lgt.components())
}

/// Same partition without materialising the matrix; neighbours are
/// generated from the `PPXPQ + QPXPP` rule.
pub fn discover_fragments(basis: &Basis) -> Result<FragmentTable> {
    let n = basis.len();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut members = vec![s];
        stack.push(s);
        while let Some(u) = stack.pop() {
            let c = basis.state(u);
            for i in basis.spec().physical() {
                if !lgt_flip_allowed(&c, i) {
                    continue;
                }
                let v = basis.index_of(&c.flip(i))?;
                if !seen[v] {
                    seen[v] = true;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    FragmentTable::from_components(basis, comps)
}

/// `C((N_a + N_q + 1)/2, (N_a + 5 - 3N_q - 4N_0)/2)`.
pub fn fragment_dim(n_a: usize, n_q: usize, n_0: usize) -> Result<BigUint> {
    let used = 3 * n_q + 4 * n_0;
    if n_q + n_0 == 0 {
        return Err(FraglabError::Admissibility("a chain has at least one cluster".into()));
    }
    if used > n_a + 5 || !(n_a + 5 - used).is_multiple_of(2) {
        return Err(FraglabError::Admissibility(format!(
            "N_a={n_a} cannot hold N_q={n_q}, N_0={n_0}"
        )));
    }
    let k = (n_a + 5 - used) / 2;
    Ok(binomial((n_a + n_q).div_ceil(2) as u64, k as u64))
}

/// One admissible `(N_q, N_0)` class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorRow {
    pub n_q: usize,
    pub n_0: usize,
    /// Inflated pairs, `(N_a + 5 - 3N_q - 4N_0)/2`.
    pub k: usize,
    pub dim: BigUint,
    /// Number of patterns, `C(N_q + N_0, N_q)`.
    pub multiplicity: BigUint,
}

impl SectorRow {
    pub fn n_c(&self) -> usize {
        self.n_q + self.n_0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorCensus {
    pub n_a: usize,
    pub rows: Vec<SectorRow>,
    pub n_krylov: BigUint,
    pub d_total: BigUint,
    pub d_max: BigUint,
    pub frozen_count: BigUint,
}

impl SectorCensus {
    pub fn new(n_a: usize) -> Result<Self> {
        if n_a == 0 {
            return Err(FraglabError::InvalidInput("N_a must be at least 1".into()));
        }
        let n = n_a + 5;
        let rows: Vec<SectorRow> = (0..=n / 3)
            .into_par_iter()
            .flat_map_iter(|n_q| {
                (0..=(n - 3 * n_q) / 4).filter_map(move |n_0| {
                    let dim = fragment_dim(n_a, n_q, n_0).ok()?;
                    Some(SectorRow {
                        n_q,
                        n_0,
                        k: (n - 3 * n_q - 4 * n_0) / 2,
                        dim,
                        multiplicity: binomial((n_q + n_0) as u64, n_q as u64),
                    })
                })
            })
            .collect();
        let n_krylov = rows.iter().map(|r| &r.multiplicity).sum();
        let d_total = rows.iter().map(|r| &r.dim * &r.multiplicity).sum();
        let d_max = rows.iter().map(|r| r.dim.clone()).max().unwrap_or_default();
        let frozen_count = rows
            .iter()
            .filter(|r| r.dim.is_one())
            .map(|r| &r.multiplicity)
            .sum();
        Ok(Self {
            n_a,
            rows,
            n_krylov,
            d_total,
            d_max,
            frozen_count,
        })
    }

    /// Rows of one sector.
    pub fn sector(&self, n_c: usize) -> impl Iterator<Item = &SectorRow> {
        self.rows.iter().filter(move |r| r.n_c() == n_c)
    }

    pub fn sector_dim(&self, n_c: usize) -> BigUint {
        self.sector(n_c).map(|r| &r.dim * &r.multiplicity).sum()
    }

    /// Sector dimensions keyed by `N_c`.
    pub fn sector_dims(&self) -> BTreeMap<usize, BigUint> {
        let mut out = BTreeMap::new();
        for r in &self.rows {
            *out.entry(r.n_c()).or_insert_with(BigUint::zero) += &r.dim * &r.multiplicity;
        }
        out
    }

    pub fn frozen_fraction(&self) -> BigRational {
        BigRational::new(
            self.frozen_count.clone().into(),
            self.n_krylov.clone().into(),
        )
    }
}

pub fn count_krylov(n_a: usize) -> Result<BigUint> {
    Ok(SectorCensus::new(n_a)?.n_krylov)
}

pub fn total_dim(n_a: usize) -> Result<BigUint> {
    Ok(SectorCensus::new(n_a)?.d_total)
}

/// Fraction of fragments that contain a single state.
pub fn frozen_fraction(n_a: usize) -> Result<BigRational> {
    Ok(SectorCensus::new(n_a)?.frozen_fraction())
}

/// Fragment count of one sector from the census, and the `2^{N_c - 1}`
/// value when every `N_q` of the allowed parity is realisable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorCount {
    pub n_c: usize,
    pub census: BigUint,
    pub formula: Option<BigUint>,
}

pub fn sector_fragment_count(n_a: usize, n_c: usize) -> Result<SectorCount> {
    if n_c == 0 {
        return Err(FraglabError::Admissibility("N_c must be at least 1".into()));
    }
    let census = SectorCensus::new(n_a)?;
    let rows: Vec<&SectorRow> = census.sector(n_c).collect();
    if rows.is_empty() {
        return Err(FraglabError::Admissibility(format!(
            "N_a={n_a} has no sector with N_c={n_c}"
        )));
    }
    let count = rows.iter().map(|r| &r.multiplicity).sum();
    // N_q has the parity of N_a + 1; the formula needs every such N_q.
    let parity = (n_a + 1) % 2;
    let all_realised = (0..=n_c)
        .filter(|nq| nq % 2 == parity)
        .all(|nq| rows.iter().any(|r| r.n_q == nq));
    Ok(SectorCount {
        n_c,
        census: count,
        formula: all_realised.then(|| BigUint::one() << (n_c - 1)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargestSector {
    pub n_c: usize,
    pub dim: BigUint,
    /// `⌊(N_a + 3)/6⌋`.
    pub estimate: usize,
}

pub fn largest_sector(n_a: usize) -> Result<LargestSector> {
    largest_sector_with(&ClusterTables::for_atoms(n_a), n_a)
}

/// As [`largest_sector`] with caller-supplied tables.
pub fn largest_sector_with(tables: &ClusterTables, n_a: usize) -> Result<LargestSector> {
    if n_a == 0 || n_a + 5 > tables.n_max() {
        return Err(FraglabError::InvalidInput(format!(
            "tables do not cover N_a={n_a}"
        )));
    }
    let (n_c, dim) = (1..=tables.c_max())
        .map(|c| (c, tables.sector_dim(n_a, c)))
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .expect("c_max >= 1");
    Ok(LargestSector {
        n_c,
        dim,
        estimate: (n_a + 3) / 6,
    })
}

/// Least-squares growth rate `λ` of `N_Krylov ≈ C λ^{N_a}` over a range.
pub fn krylov_growth_rate(n_list: &[usize]) -> Result<f64> {
    if n_list.len() < 2 {
        return Err(FraglabError::InsufficientPoints(
            "growth fit needs two sizes".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = n_list
        .iter()
        .map(|&n| {
            let c = count_krylov(n)?;
            Ok((n as f64, c.to_f64().unwrap_or(f64::INFINITY).ln()))
        })
        .collect::<Result<_>>()?;
    let (slope, _) = linear_fit(&pts);
    Ok(slope.exp())
}

/// Ordinary least squares `y = a x + b`, returning `(a, b)`.
pub(crate) fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let a = sxy / sxx;
    (a, my - a * mx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{enumerate_blockaded, ChainSpec};
    use crate::hamiltonians::build_h_lgt;

    #[test]
    fn table_dims() {
        assert_eq!(fragment_dim(16, 5, 0).unwrap(), BigUint::from(165u32));
        assert_eq!(fragment_dim(16, 3, 2).unwrap(), BigUint::from(45u32));
        assert_eq!(fragment_dim(16, 1, 4).unwrap(), BigUint::from(9u32));
        assert!(matches!(
            fragment_dim(16, 4, 0),
            Err(FraglabError::Admissibility(_))
        ));
        assert!(fragment_dim(16, 0, 0).is_err());
    }

    #[test]
    fn census_totals() {
        let c = SectorCensus::new(16).unwrap();
        assert_eq!(c.d_total, BigUint::from(2584u32));
        assert_eq!(total_dim(30).unwrap(), BigUint::from(2178309u32));
    }

    #[test]
    fn census_matches_bfs_small() {
        for na in 1..=12 {
            let b = enumerate_blockaded(ChainSpec::new(na).unwrap()).unwrap();
            let t = find_fragments(&b, &build_h_lgt(&b, 1.0)).unwrap();
            assert_eq!(BigUint::from(t.len()), count_krylov(na).unwrap(), "N_a={na}");
        }
        assert_eq!(count_krylov(1).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn sector_counts() {
        assert_eq!(sector_fragment_count(16, 5).unwrap().census, BigUint::from(16u32));
        assert_eq!(
            sector_fragment_count(16, 5).unwrap().formula,
            Some(BigUint::from(16u32))
        );
        assert_eq!(sector_fragment_count(16, 1).unwrap().census, BigUint::one());
        assert_eq!(sector_fragment_count(16, 3).unwrap().census, BigUint::from(4u32));
    }

    #[test]
    fn largest_sector_estimate() {
        let l = largest_sector(16).unwrap();
        assert_eq!(l.estimate, 3);
        assert_eq!(largest_sector(200).unwrap().n_c, 35);
    }

    #[test]
    fn on_the_fly_equals_matrix_components() {
        let b = enumerate_blockaded(ChainSpec::new(11).unwrap()).unwrap();
        let a = find_fragments(&b, &build_h_lgt(&b, 0.5)).unwrap();
        let d = discover_fragments(&b).unwrap();
        assert_eq!(a.fragments, d.fragments);
    }
}
