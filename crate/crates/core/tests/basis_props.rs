mod common;

use common::{basis, blockaded_string};
use fraglab::basis::{
    enumerate_blockaded, enumerate_blockaded_with_budget, enumerate_full, fibonacci, is_blockaded, pad, BitConfig,
    ChainSpec,
};
use fraglab::FraglabError;
use proptest::prelude::*;

fn fib_recursion(n: usize) -> u128 {
    let (mut a, mut b) = (1u128, 1u128);
    for _ in 2..n {
        (a, b) = (b, a + b);
    }
    b
}

#[test]
fn counts_follow_independent_recursion() {
    for n in 1..=24 {
        assert_eq!(basis(n).len() as u128, fib_recursion(n + 2), "N_a={n}");
    }
    assert_eq!(fibonacci(32), 2_178_309);
}

#[test]
fn small_bases_spelled_out() {
    let one: Vec<String> = basis(1).iter().map(|c| c.physical_string()).collect();
    assert_eq!(one, ["g", "r"]);
    let two: Vec<String> = basis(2).iter().map(|c| c.physical_string()).collect();
    assert_eq!(two, ["gg", "gr", "rg"]);
}

#[test]
fn padding_examples() {
    assert_eq!(pad("r").unwrap().to_string(), "ggrgg");
    assert_eq!(pad("rggggrggggrggggr").unwrap().to_string(), "ggrggggrggggrggggrgg");
    assert!(pad("").is_err());
    assert!(is_blockaded(&pad("rgggggrggrgggggr").unwrap()));
    assert!(!is_blockaded(&pad("grrg").unwrap()));
}

#[test]
fn every_state_is_legal_and_sorted() {
    for n in 1..=14 {
        let b = basis(n);
        assert_eq!(b.state(0), BitConfig::all_g(n + 4));
        for (k, c) in b.iter().enumerate() {
            assert!(is_blockaded(&c) && c.has_padding());
            assert_eq!(b.index_of(&c).unwrap(), k);
        }
        assert!(b.iter().zip(b.iter().skip(1)).all(|(a, c)| a.bits() < c.bits()));
    }
}

#[test]
fn rr_lookup_is_an_error() {
    let b = basis(6);
    let bad = pad("grrggg").unwrap();
    assert!(matches!(b.index_of(&bad), Err(FraglabError::NotFound(_))));
}

#[test]
fn capacity_guard() {
    let spec = ChainSpec::new(30).unwrap();
    let err = enumerate_blockaded_with_budget(spec, 1000).unwrap_err();
    assert!(matches!(err, FraglabError::Capacity { .. }));
    assert!(ChainSpec::new(0).is_err());
    assert!(enumerate_full(ChainSpec::new(17).unwrap()).is_err());
}

#[test]
fn full_space_contains_blockaded() {
    let spec = ChainSpec::new(8).unwrap();
    let full = enumerate_full(spec).unwrap();
    assert_eq!(full.len(), 256);
    let blk = enumerate_blockaded(spec).unwrap();
    assert!(blk.iter().all(|c| full.find(&c).is_some()));
}

#[test]
fn dump_and_checksum_are_stable() {
    let b = basis(5);
    let mut out = Vec::new();
    b.write_dump(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    let header: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["count"], 13);
    assert_eq!(lines.count(), 13);
    assert_eq!(b.checksum(), basis(5).checksum());
    assert_ne!(b.checksum(), basis(6).checksum());
    let h = b.header();
    assert_eq!((h.n_atoms, h.count), (5, 13));
}

proptest! {
    #[test]
    fn fibonacci_recursion_holds(n in 3usize..24) {
        prop_assert_eq!(
            basis(n).len(),
            basis(n - 1).len() + basis(n - 2).len()
        );
    }

    #[test]
    fn parse_display_round_trip(s in blockaded_string(40)) {
        let c = pad(&s).unwrap();
        prop_assert_eq!(c.physical_string(), s.clone());
        prop_assert_eq!(BitConfig::parse(&c.to_string()).unwrap(), c);
        prop_assert_eq!(c.reversed().reversed(), c);
    }

    #[test]
    fn lookup_round_trip(s in blockaded_string(18)) {
        let c = pad(&s).unwrap();
        let b = basis(s.len());
        let k = b.index_of(&c).unwrap();
        prop_assert_eq!(b.state(k), c);
    }
}
