//! Property tests for the lattice combinatorics: round trips, symmetries,
//! and agreement with a breadth-first-search distance oracle.

mod common;

use latticefem::lattice::*;
use proptest::prelude::*;

/// A random (n, k) pair at desk scale together with a lattice node index.
fn small_instance() -> impl Strategy<Value = (usize, u32)> {
    (1usize..=4, 1u32..=10)
}

fn node_of(n: usize, k: u32, pick: usize) -> MultiIndex {
    let all = enumerate_lattice(n, k).unwrap();
    all.nodes()[pick % all.len()].clone()
}

fn face_of(n: usize, pick: usize) -> SubSimplex {
    let faces: Vec<SubSimplex> = (0..n).flat_map(|ell| delta(ell, n)).collect();
    faces[pick % faces.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_extend_round_trip((n, k) in small_instance(), pick in any::<usize>(), fpick in any::<usize>()) {
        let alpha = node_of(n, k, pick);
        let f = face_of(n, fpick);
        let (on, off) = split(&alpha, &f);
        let back_on = extend(&on, &f).unwrap();
        let back_off = extend(&off, &f.complement()).unwrap();
        let sum: Vec<u32> = back_on.entries().iter().zip(back_off.entries()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(MultiIndex::new(sum), alpha);
        prop_assert_eq!(on.iter().sum::<u32>() + off.iter().sum::<u32>(), k);
    }

    #[test]
    fn plane_symmetry((n, k) in small_instance(), fpick in any::<usize>(), s in 0u32..=10) {
        let f = face_of(n, fpick);
        let s = s.min(k);
        prop_assert_eq!(plane(&f, s, k).unwrap(), plane(&f.complement(), k - s, k).unwrap());
    }

    #[test]
    fn tube_is_union_of_planes((n, k) in small_instance(), fpick in any::<usize>(), r in 0u32..=10) {
        let f = face_of(n, fpick);
        let t = tube(&f, r, k).unwrap();
        let mut count = 0usize;
        for s in 0..=r.min(k) {
            let p = plane(&f, s, k).unwrap();
            count += p.len();
            for a in p.iter() {
                prop_assert!(t.contains(a));
            }
        }
        prop_assert_eq!(t.len(), count);
    }

    #[test]
    fn tube_membership_equivalences((n, k) in small_instance(), fpick in any::<usize>(), r in 0u32..=10, pick in any::<usize>()) {
        // |α_{f*}| ≤ r ⟺ α ∈ D(f, r) ⟺ |α_f| ≥ k − r
        let f = face_of(n, fpick);
        let alpha = node_of(n, k, pick);
        let t = tube(&f, r, k).unwrap();
        let (on, off) = split(&alpha, &f);
        let on_sum: u32 = on.iter().sum();
        let off_sum: u32 = off.iter().sum();
        prop_assert_eq!(t.contains(&alpha), off_sum <= r);
        prop_assert_eq!(t.contains(&alpha), on_sum + r >= k);
    }

    #[test]
    fn graph_distance_is_metric_and_matches_bfs((n, k) in (1usize..=3, 1u32..=6), pa in any::<usize>(), pb in any::<usize>(), pc in any::<usize>()) {
        let a = node_of(n, k, pa);
        let b = node_of(n, k, pb);
        let c = node_of(n, k, pc);
        let dab = graph_distance(&a, &b).unwrap();
        let dba = graph_distance(&b, &a).unwrap();
        let dac = graph_distance(&a, &c).unwrap();
        let dcb = graph_distance(&c, &b).unwrap();
        prop_assert_eq!(dab, dba);
        prop_assert_eq!(dab == 0, a == b);
        prop_assert!(dab <= dac + dcb);
        prop_assert_eq!(dab, common::bfs_distance(&a, &b));
    }

    #[test]
    fn vertex_tube_cardinality((n, k) in small_instance(), r in 0u32..=6) {
        // D(v, r) is a copy of the degree-r lattice when r ≤ k
        let r = r.min(k);
        let v = SubSimplex::vertex(0, n);
        let expected = enumerate_lattice(n, r).unwrap().len();
        prop_assert_eq!(tube(&v, r, k).unwrap().len(), expected);
    }
}
