#![allow(dead_code)]

use fraglab::basis::{enumerate_blockaded, pad, Basis, BitConfig, ChainSpec};
use proptest::prelude::*;

/// Physical g/r string with no adjacent `r`, of length `1..=max_len`.
pub fn blockaded_string(max_len: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(any::<bool>(), 1..=max_len).prop_map(|bits| {
        let mut out = String::with_capacity(bits.len());
        let mut prev = false;
        for b in bits {
            let r = b && !prev;
            out.push(if r { 'r' } else { 'g' });
            prev = r;
        }
        out
    })
}

pub fn blockaded_config(max_len: usize) -> impl Strategy<Value = BitConfig> {
    blockaded_string(max_len).prop_map(|s| pad(&s).expect("nonempty"))
}

pub fn basis(n: usize) -> Basis {
    enumerate_blockaded(ChainSpec::new(n).unwrap()).unwrap()
}

/// Initial states of the Krylov fragments probed in the `N_c = 5` sector of
/// a 16-atom chain, keyed by fragment number.
pub const TABLE1_STATES: [(usize, &str); 10] = [
    (1, "rggggrggggrggggr"),
    (6, "rgggggrggrgggggr"),
    (7, "rgggggrgggrggggr"),
    (8, "grggggrggrggggrg"),
    (9, "grggggrggggrgggr"),
    (10, "grggggrgggrggggr"),
    (11, "grgggrggggrggggr"),
    (14, "grgggrggggrgggrg"),
    (15, "grgggrgggggrggrg"),
    (16, "grgggrgggggrgggr"),
];

/// The sixteen `N_c = 5` patterns in table order.
pub const TABLE1_PATTERNS: [&str; 16] = [
    "c c c c c",
    "c c c n n",
    "c c n c n",
    "c c n n c",
    "c n c c n",
    "c n c n c",
    "c n n c c",
    "n c c c n",
    "n c c n c",
    "n c n c c",
    "n n c c c",
    "c n n n n",
    "n c n n n",
    "n n c n n",
    "n n n c n",
    "n n n n c",
];

pub const Z3: &str = "rggrggrggrggrggr";
