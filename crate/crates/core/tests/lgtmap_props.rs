mod common;

use common::{basis, blockaded_config, TABLE1_STATES, Z3};
use fraglab::basis::{pad, BitConfig};
use fraglab::lgtmap::{
    cluster_count, decompose, default_k_max, electric_strings, gauss_check, invert, pattern_of, ClusterKind, Link,
};
use proptest::prelude::*;

fn q(s: &str) -> Vec<i8> {
    pattern_of(&pad(s).unwrap()).unwrap().nonzero().to_vec()
}

#[test]
fn table_patterns_of_initial_states() {
    assert_eq!(q("rggggrggggrggggr"), [1, 1, 1, 1, 1]);
    assert_eq!(q("grgggrggggrggggr"), [-1, -1, 1, 1, 1]);
    assert_eq!(q("rgggggrggrgggggr"), [1, -1, 1, -1, 1]);
    assert_eq!(q("grgggrgggggrgggr"), [-1, -1, -1, -1, 1]);
    for (_, s) in TABLE1_STATES {
        assert_eq!(cluster_count(&pad(s).unwrap()), 5, "{s}");
    }
}

#[test]
fn z3_has_seven_unit_clusters() {
    let d = decompose(&pad(Z3).unwrap()).unwrap();
    assert_eq!(d.n_clusters(), 7);
    assert!(d.clusters.iter().all(|c| c.site_length == 1 && c.kind == ClusterKind::Charged));
    assert_eq!(cluster_count(&pad(Z3).unwrap()), 7);
}

#[test]
fn boundary_clusters_of_seven() {
    let d = decompose(&pad("ggggggrggrgggggg").unwrap()).unwrap();
    assert_eq!(d.n_clusters(), 3);
    assert_eq!(d.clusters[0].site_length, 7);
    assert_eq!(d.clusters[2].site_length, 7);
    assert_eq!(q("ggggggrggrgggggg"), [1, 1, 1]);
    let full = pattern_of(&pad("ggggggrggrgggggg").unwrap()).unwrap();
    assert!(full.q[3..].iter().all(|&v| v == 0));
}

#[test]
fn all_g_is_one_cluster() {
    let c = BitConfig::all_g(12);
    assert_eq!(cluster_count(&c), 1);
    assert_eq!(decompose(&c).unwrap().n_clusters(), 1);
    let s = electric_strings(&c);
    for (i, b) in s.bonds.iter().enumerate() {
        let want = if i % 2 == 0 { Link::Right } else { Link::Left };
        assert_eq!(*b, want);
    }
}

#[test]
fn inversion_reverses_pattern() {
    let k11 = pad("grgggrggggrggggr").unwrap();
    assert_eq!(q(&invert(&k11).physical_string()), [1, 1, 1, -1, -1]);
    let pal = pad("grgggrg").unwrap();
    assert_eq!(invert(&pal), pal);
}

#[test]
fn gauss_law_exhaustive_to_14() {
    for n in 1..=14 {
        assert!(basis(n).iter().all(|c| gauss_check(&c)), "N_a={n}");
    }
    assert!(!gauss_check(&pad("ggrrgg").unwrap()));
}

#[test]
fn gauss_charges_locate_clusters() {
    let c = pad("rggggrggggrggggr").unwrap();
    let rho = electric_strings(&c).charges();
    let d = decompose(&c).unwrap();
    for cl in &d.clusters {
        let sum: i32 = rho[cl.left_site - 1..cl.right_site].iter().sum();
        assert_eq!(sum, cl.net_charge as i32);
        assert!(rho[cl.left_site - 1..cl.right_site].iter().all(|&r| r != 0));
    }
    let inside = |j: usize| d.clusters.iter().any(|cl| (cl.left_site..=cl.right_site).contains(&j));
    for (idx, &r) in rho.iter().enumerate() {
        if !inside(idx + 1) {
            assert_eq!(r, 0, "vacuum site {}", idx + 1);
        }
    }
}

proptest! {
    #[test]
    fn decomposition_reconstructs(c in blockaded_config(50)) {
        let d = decompose(&c).unwrap();
        prop_assert_eq!(d.reconstruct(), c);
    }

    #[test]
    fn site_lengths_tile_the_chain(c in blockaded_config(50)) {
        let d = decompose(&c).unwrap();
        let total: usize = d.clusters.iter().map(|x| x.site_length).sum::<usize>()
            + d.vacuum_runs.iter().map(|v| v.length).sum::<usize>();
        prop_assert_eq!(total, d.n_sites);
        prop_assert_eq!(d.clusters[0].left_site, 1);
        prop_assert_eq!(d.clusters.last().unwrap().right_site, d.n_sites);
        for v in &d.vacuum_runs {
            prop_assert!(v.length >= 2 && v.length % 2 == 0);
        }
    }

    #[test]
    fn cluster_kind_invariants(c in blockaded_config(50)) {
        let d = decompose(&c).unwrap();
        let mut expected = -1i8;
        for cl in &d.clusters {
            prop_assert_eq!(cl.site_length, cl.right_site - cl.left_site + 1);
            prop_assert_eq!(cl.doubled_center, cl.left_site + cl.right_site);
            let charged = cl.kind == ClusterKind::Charged;
            prop_assert_eq!(charged, cl.site_length % 2 == 1);
            prop_assert_eq!(charged, cl.doubled_center % 2 == 0);
            prop_assert_eq!(charged, cl.net_charge != 0);
            if charged {
                prop_assert_eq!(cl.net_charge, expected);
                expected = -expected;
            }
        }
        prop_assert_eq!(d.n_charged() % 2, d.n_sites % 2);
        prop_assert_eq!(cluster_count(&c), d.n_clusters());
    }

    #[test]
    fn pattern_parity_and_suffix(c in blockaded_config(50)) {
        let p = pattern_of(&c).unwrap();
        prop_assert_eq!(p.q.len(), default_k_max(c.len() - 1));
        prop_assert_eq!(p.n_charged() % 2, (c.len() - 1) % 2);
        let nc = p.n_clusters();
        prop_assert!(p.q[nc..].iter().all(|&v| v == 0));
        prop_assert!(p.q[..nc].iter().all(|&v| v != 0));
    }

    #[test]
    fn inversion_commutes_with_pattern(c in blockaded_config(50)) {
        let p = pattern_of(&c).unwrap();
        prop_assert_eq!(pattern_of(&invert(&c)).unwrap(), p.reversed());
        prop_assert_eq!(invert(&invert(&c)), c);
    }

    #[test]
    fn gauss_law_holds(c in blockaded_config(50)) {
        prop_assert!(gauss_check(&c));
    }
}
