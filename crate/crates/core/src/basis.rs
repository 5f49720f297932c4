//! Z-basis microstates of the g-padded chain and the blockaded basis.
//!
//! A chain of `N_a` physical atoms is padded with two ground-state atoms on
//! each side, giving `N = N_a + 4` positions labelled `1..=N`. Configurations
//! are packed into a `u64` with position 1 in the most significant used bit,
//! so numeric order of the packed word is lexicographic order with `g < r`.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{FraglabError, Result};

/// Largest physical chain the packed representation supports.
pub const MAX_ATOMS: usize = 60;

/// Largest chain for which the unconstrained `2^N_a` space may be built.
pub const FULL_SPACE_MAX_ATOMS: usize = 16;

/// Default cap on the number of stored basis states (8 bytes each).
pub const DEFAULT_STATE_BUDGET: u128 = 1 << 25;

/// Chain geometry: physical atoms, padded positions and matter sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainSpec {
    n_atoms: usize,
}

impl ChainSpec {
    pub fn new(n_atoms: usize) -> Result<Self> {
        if n_atoms == 0 {
            return Err(FraglabError::InvalidInput(
                "a chain needs at least one physical atom".into(),
            ));
        }
        if n_atoms > MAX_ATOMS {
            return Err(FraglabError::Capacity {
                what: "physical atoms".into(),
                needed: n_atoms as u128,
                limit: MAX_ATOMS as u128,
            });
        }
        Ok(Self { n_atoms })
    }

    /// Physical atom count `N_a`.
    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    /// Padded atom (and bond) count `N = N_a + 4`.
    pub fn n_padded(&self) -> usize {
        self.n_atoms + 4
    }

    /// Matter sites of the gauge picture, `N_a + 3`.
    pub fn n_sites(&self) -> usize {
        self.n_atoms + 3
    }

    /// Positions of the physical atoms, `3..=N-2`.
    pub fn physical(&self) -> std::ops::RangeInclusive<usize> {
        3..=self.n_atoms + 2
    }
}

/// Ground/Rydberg occupation string over padded positions `1..=len`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitConfig {
    bits: u64,
    len: u8,
}

impl BitConfig {
    /// Wraps a packed word. Bits above `len` must be clear.
    pub fn from_bits(bits: u64, len: usize) -> Self {
        debug_assert!(len <= 64 && (len == 64 || bits >> len == 0));
        Self {
            bits,
            len: len as u8,
        }
    }

    /// All-ground configuration of the given length.
    pub fn all_g(len: usize) -> Self {
        Self::from_bits(0, len)
    }

    /// Parses a full (already padded) string over `{g, r}`.
    pub fn parse(s: &str) -> Result<Self> {
        if s.is_empty() || s.len() > 64 {
            return Err(FraglabError::InvalidInput(format!(
                "configuration length {} outside 1..=64",
                s.len()
            )));
        }
        let mut bits = 0u64;
        for ch in s.chars() {
            bits <<= 1;
            match ch {
                'g' => {}
                'r' => bits |= 1,
                other => {
                    return Err(FraglabError::InvalidInput(format!(
                        "invalid symbol {other:?} in {s:?}"
                    )))
                }
            }
        }
        Ok(Self::from_bits(bits, s.len()))
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn mask(&self, i: usize) -> u64 {
        debug_assert!((1..=self.len()).contains(&i));
        1u64 << (self.len() - i)
    }

    /// True when position `i` (1-based) holds a Rydberg atom.
    #[inline]
    pub fn is_r(&self, i: usize) -> bool {
        self.bits & self.mask(i) != 0
    }

    #[inline]
    pub fn is_g(&self, i: usize) -> bool {
        !self.is_r(i)
    }

    /// Copy with position `i` toggled.
    #[inline]
    pub fn flip(&self, i: usize) -> Self {
        Self {
            bits: self.bits ^ self.mask(i),
            len: self.len,
        }
    }

    pub fn rydberg_count(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// The two outermost positions on each side are ground atoms.
    pub fn has_padding(&self) -> bool {
        let n = self.len();
        n >= 5 && self.is_g(1) && self.is_g(2) && self.is_g(n - 1) && self.is_g(n)
    }

    /// Spatial reversal.
    pub fn reversed(&self) -> Self {
        let n = self.len();
        let bits = if n == 0 {
            0
        } else {
            self.bits.reverse_bits() >> (64 - n)
        };
        Self::from_bits(bits, n)
    }

    /// The physical part, with the two padding atoms on each side removed.
    pub fn physical_string(&self) -> String {
        let s = self.to_string();
        s[2..s.len() - 2].to_string()
    }
}

impl fmt::Display for BitConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len() {
            f.write_str(if self.is_r(i) { "r" } else { "g" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitConfig({self})")
    }
}

/// No two adjacent Rydberg atoms.
pub fn is_blockaded(config: &BitConfig) -> bool {
    config.bits & (config.bits >> 1) == 0
}

/// Adds the `gg` padding to a physical occupation string.
pub fn pad(raw: &str) -> Result<BitConfig> {
    if raw.is_empty() {
        return Err(FraglabError::InvalidInput(
            "physical string must hold at least one atom".into(),
        ));
    }
    if raw.len() > MAX_ATOMS {
        return Err(FraglabError::Capacity {
            what: "physical atoms".into(),
            needed: raw.len() as u128,
            limit: MAX_ATOMS as u128,
        });
    }
    BitConfig::parse(&format!("gg{raw}gg"))
}

/// Fibonacci number with `F_1 = F_2 = 1`, saturating on overflow.
pub fn fibonacci(n: usize) -> u128 {
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 0..n {
        let next = a.saturating_add(b);
        a = b;
        b = next;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    /// Nearest-neighbour blockaded subspace.
    Blockaded,
    /// All `2^N_a` physical configurations, for small validation runs.
    Full,
}

/// Ordered list of padded configurations with an exact inverse index.
///
/// States are sorted by packed value, so `index_of` is a binary search.
#[derive(Debug, Clone)]
pub struct Basis {
    spec: ChainSpec,
    kind: BasisKind,
    states: Vec<u64>,
}

/// Header written in front of a basis dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisHeader {
    pub n_atoms: usize,
    pub count: usize,
    pub checksum: String,
}

impl Basis {
    pub fn spec(&self) -> ChainSpec {
        self.spec
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, k: usize) -> BitConfig {
        BitConfig::from_bits(self.states[k], self.spec.n_padded())
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = BitConfig> + '_ {
        let n = self.spec.n_padded();
        self.states.iter().map(move |&b| BitConfig::from_bits(b, n))
    }

    /// Ordinal of a configuration, if present.
    pub fn find(&self, config: &BitConfig) -> Option<usize> {
        if config.len() != self.spec.n_padded() {
            return None;
        }
        self.states.binary_search(&config.bits()).ok()
    }

    /// Ordinal of a configuration; errors when it is not a basis member.
    pub fn index_of(&self, config: &BitConfig) -> Result<usize> {
        self.find(config).ok_or_else(|| {
            let why = if config.len() != self.spec.n_padded() {
                "wrong length"
            } else if !config.has_padding() {
                "missing g-padding"
            } else if self.kind == BasisKind::Blockaded && !is_blockaded(config) {
                "adjacent Rydberg pair"
            } else {
                "absent"
            };
            FraglabError::NotFound(format!("{config} ({why})"))
        })
    }

    /// SHA-256 over the newline-terminated state strings.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        for c in self.iter() {
            h.update(c.to_string().as_bytes());
            h.update(b"\n");
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn header(&self) -> BasisHeader {
        BasisHeader {
            n_atoms: self.spec.n_atoms(),
            count: self.len(),
            checksum: self.checksum(),
        }
    }

    /// Writes the JSON header line followed by one configuration per line.
    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer(&mut out, &self.header())?;
        out.write_all(b"\n")?;
        for c in self.iter() {
            writeln!(out, "{c}")?;
        }
        Ok(())
    }
}

/// Blockaded basis with the default state budget.
pub fn enumerate_blockaded(spec: ChainSpec) -> Result<Basis> {
    enumerate_blockaded_with_budget(spec, DEFAULT_STATE_BUDGET)
}

/// Blockaded basis by backtracking; errors if `F_{N_a+2}` exceeds `budget`.
pub fn enumerate_blockaded_with_budget(spec: ChainSpec, budget: u128) -> Result<Basis> {
    let count = fibonacci(spec.n_atoms() + 2);
    if count > budget {
        return Err(FraglabError::Capacity {
            what: format!("blockaded basis for N_a={}", spec.n_atoms()),
            needed: count,
            limit: budget,
        });
    }
    let mut states = Vec::with_capacity(count as usize);
    // Physical atoms occupy bits N_a+1 ..= 2 (position 3 is the highest).
    fn rec(pos: usize, n_atoms: usize, prev_r: bool, acc: u64, out: &mut Vec<u64>) {
        if pos == n_atoms {
            out.push(acc << 2);
            return;
        }
        rec(pos + 1, n_atoms, false, acc << 1, out);
        if !prev_r {
            rec(pos + 1, n_atoms, true, (acc << 1) | 1, out);
        }
    }
    rec(0, spec.n_atoms(), false, 0, &mut states);
    debug_assert!(states.windows(2).all(|w| w[0] < w[1]));
    Ok(Basis {
        spec,
        kind: BasisKind::Blockaded,
        states,
    })
}

/// Unconstrained basis of all physical configurations, `N_a <= 16`.
pub fn enumerate_full(spec: ChainSpec) -> Result<Basis> {
    if spec.n_atoms() > FULL_SPACE_MAX_ATOMS {
        return Err(FraglabError::Capacity {
            what: "full-space basis".into(),
            needed: 1u128 << spec.n_atoms(),
            limit: 1u128 << FULL_SPACE_MAX_ATOMS,
        });
    }
    let states = (0..1u64 << spec.n_atoms()).map(|b| b << 2).collect();
    Ok(Basis {
        spec,
        kind: BasisKind::Full,
        states,
    })
}
