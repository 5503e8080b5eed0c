//! Randomized invariants, including n = 6, beyond the exhaustive checks.

use mixsub::json::{
    subdivision_from_json, subdivision_to_json, system_from_json, system_to_json, tiling_from_json, tiling_to_json,
};
use mixsub::lozenge::{
    positions_from_system, realize, realize_via_routing, routing_to_tiling, tiling_to_routing, uv_from_positions,
};
use mixsub::verify::realize_n3;
use mixsub::{LozengeTiling, Permutation, SystemOfPermutations};
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|w| Permutation::from_word(w).unwrap())
}

/// Any system, acyclic or not.
fn system(max_n: usize, max_d: usize) -> impl Strategy<Value = SystemOfPermutations> {
    (1..=max_n, 1..=max_d).prop_flat_map(|(n, d)| {
        prop::collection::vec(perm(n), d * (d - 1) / 2)
            .prop_map(move |perms| SystemOfPermutations::new(n, d, perms).unwrap())
    })
}

/// An acyclic system with `d = 3`: random triangle positions `(p, q)`
/// determine `u` and `v` with `w = n…1`, kept when acyclic, then recolored.
fn acyclic_planar(max_n: usize) -> impl Strategy<Value = SystemOfPermutations> {
    (1..=max_n).prop_flat_map(|n| {
        let picks = prop::collection::vec(any::<prop::sample::Index>(), n);
        (picks.clone(), picks, perm(n)).prop_filter_map("cyclic system", move |(ps, qs, colors)| {
            let p: Vec<usize> = (1..=n).map(|i| i + ps[i - 1].index(n - i + 1)).collect();
            let q: Vec<usize> = (1..=n).map(|i| 1 + qs[i - 1].index(i)).collect();
            let (u, v, w) = uv_from_positions(&p, &q).ok()?;
            let s = SystemOfPermutations::from_uvw(u, v, w).ok()?;
            s.is_acyclic().then(|| s.relabel_colors(colors.word()))
        })
    })
}

/// A realization of a random acyclic system moved by random hexagon flips.
fn tiling(max_n: usize) -> impl Strategy<Value = LozengeTiling> {
    (
        acyclic_planar(max_n),
        prop::collection::vec(any::<prop::sample::Index>(), 0..30),
    )
        .prop_map(|(s, steps)| {
            let mut t = realize(&s).unwrap();
            for i in steps {
                let next = t.flips();
                if next.is_empty() {
                    break;
                }
                t = next[i.index(next.len())].clone();
            }
            t
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn acyclicity_tests_agree(s in system(5, 5)) {
        prop_assert_eq!(s.is_acyclic(), s.is_acyclic_by_degrees());
        prop_assert_eq!(s.is_acyclic(), s.acyclicity_witness().is_none());
        if let Some(w) = s.acyclicity_witness() {
            prop_assert!(!s.g_graph(w.i, w.j).unwrap().is_acyclic());
        }
    }

    #[test]
    fn relabeling_preserves_acyclicity((s, c, l) in system(5, 5).prop_flat_map(|s| {
        let (n, d) = (s.n(), s.d());
        (Just(s), perm(n), perm(d))
    })) {
        prop_assert_eq!(s.relabel_colors(c.word()).is_acyclic(), s.is_acyclic());
        prop_assert_eq!(s.relabel_letters(l.word()).is_acyclic(), s.is_acyclic());
    }

    #[test]
    fn reversed_orientation_is_the_reverse_word(s in system(5, 5)) {
        for a in 1..=s.d() {
            for b in (1..=s.d()).filter(|&b| b != a) {
                prop_assert_eq!(s.perm(b, a), s.perm(a, b).reversed());
            }
        }
    }

    #[test]
    fn system_json_round_trips(s in system(6, 5)) {
        prop_assert_eq!(system_from_json(&system_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn tiling_systems_are_acyclic_and_spread_out(t in tiling(6)) {
        let s = t.system().unwrap();
        prop_assert!(s.is_acyclic());
        let positions = s.simplex_positions().unwrap();
        prop_assert!(positions.is_spread_out());
        let placed: Vec<Vec<usize>> = t.triangles().iter().map(|x| x.to_vec()).collect();
        prop_assert_eq!(positions.positions, placed);
    }

    #[test]
    fn realizations_read_back_the_system(s in acyclic_planar(6)) {
        prop_assert_eq!(realize(&s).unwrap().system().unwrap(), s.clone());
        prop_assert_eq!(realize_via_routing(&s).unwrap().system().unwrap(), s.clone());
        let pos = positions_from_system(&s).unwrap();
        let simplices = s.simplex_positions().unwrap();
        for c in 1..=s.n() {
            prop_assert_eq!(pos.point_of_color(c).to_vec(), simplices.positions[c - 1].clone());
        }
    }

    #[test]
    fn flips_keep_system_and_triangles(t in tiling(6)) {
        let s = t.system().unwrap();
        for f in t.flips() {
            prop_assert_eq!(f.system().unwrap(), s.clone());
            prop_assert_eq!(f.triangles(), t.triangles());
        }
    }

    #[test]
    fn tiling_conversions_are_lossless(t in tiling(6)) {
        prop_assert_eq!(tiling_from_json(&tiling_to_json(&t)).unwrap(), t.clone());
        let numbered = t.routing_numbered().unwrap();
        prop_assert_eq!(routing_to_tiling(&tiling_to_routing(&numbered).unwrap()).unwrap(), numbered);
        let sub = t.to_subdivision().unwrap();
        prop_assert_eq!(LozengeTiling::from_subdivision(&sub).unwrap(), t.clone());
        prop_assert_eq!(subdivision_from_json(&subdivision_to_json(&sub)).unwrap(), sub);
    }

    #[test]
    fn duality_commutes_with_minors(s in acyclic_planar(6)) {
        let dual = s.dual().unwrap();
        prop_assert!(dual.is_acyclic());
        prop_assert_eq!(dual.dual().unwrap(), s.clone());
        for i in 1..=s.n() {
            if s.n() >= 2 {
                prop_assert_eq!(s.delete(i).unwrap().inner.dual().unwrap(), dual.contract(i).unwrap().inner);
            }
        }
        for a in 1..=3 {
            prop_assert_eq!(s.contract(a).unwrap().inner.dual().unwrap(), dual.delete(a).unwrap().inner);
        }
    }

    #[test]
    fn subdivision_duality_matches_system_duality(t in tiling(5)) {
        let sub = t.to_subdivision().unwrap();
        let dual = sub.dual().unwrap();
        prop_assert_eq!(dual.system_of_permutations().unwrap(), sub.system_of_permutations().unwrap().dual().unwrap());
        prop_assert_eq!(dual.dual().unwrap(), sub);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    /// Three-color systems in dimension up to 6, obtained as duals of
    /// planar systems.
    #[test]
    fn three_color_systems_are_realized(t in tiling(6)) {
        let s = t.system().unwrap().dual().unwrap();
        let out = realize_n3(&s).unwrap();
        prop_assert_eq!(out.system_of_permutations().unwrap(), s.clone());
        // With one letter all simplices sit at the same point.
        if s.d() >= 2 {
            prop_assert!(out.simplices().unwrap().positions.is_spread_out());
        }
    }
}
