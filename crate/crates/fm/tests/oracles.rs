use std::collections::BTreeSet;

use proptest::prelude::*;
use tropfm_fm::*;
use tropfm_grid::{build_pi, TropFan};

/// Laminar families of subsets of size ≥ 2, by brute force over all families.
fn laminar_count_brute(n: usize, max_sets: usize) -> usize {
    let cands: Vec<u32> = (1u32..1 << n).filter(|m| m.count_ones() >= 2).collect();
    let mut count = 0;
    for fam in 0u64..1 << cands.len() {
        if fam.count_ones() as usize > max_sets {
            continue;
        }
        let sets: Vec<u32> = (0..cands.len()).filter(|i| fam >> i & 1 == 1).map(|i| cands[i]).collect();
        let ok = sets.iter().all(|&a| sets.iter().all(|&b| a & b == 0 || a & b == a || a & b == b));
        count += ok as usize;
    }
    count
}

#[test]
fn stable_trees_match_brute_force() {
    for n in 1..=4 {
        for max in 0..=3 {
            let legs: Vec<usize> = (1..=n).collect();
            let trees = stable_trees(&legs, max);
            assert_eq!(trees.len(), laminar_count_brute(n, max), "n={n} max={max}");
            let codes: BTreeSet<String> = trees.iter().map(|t| t.code()).collect();
            assert_eq!(codes.len(), trees.len());
            assert!(trees.iter().all(|t| t.is_stable()));
        }
    }
}

#[test]
fn codim_one_counts_over_disjoint_rays() {
    for r in 1..=3 {
        for n in 2..=4 {
            let m = build_pi(&TropFan::disjoint(r), n).unwrap();
            let all = enumerate_grid_fm_types(&m, 1, 1_000_000).unwrap();
            let got = all.iter().filter(|f| fm_codim(f).unwrap() == 1).count();
            assert_eq!(got, r * ((1 << n) - 1) + ((1 << n) - n - 1), "r={r} n={n}");
        }
    }
}

#[test]
fn faces_of_enumerated_cones_are_enumerated() {
    let m = build_pi(&TropFan::disjoint(2), 3).unwrap();
    let all = enumerate_grid_fm_types(&m, 3, 1_000_000).unwrap();
    let codes: BTreeSet<String> = all.iter().map(|f| f.code()).collect();
    for f in &all {
        let c = fm_cone(f).unwrap();
        assert_eq!(c.dim, fm_codim(f).unwrap());
        for face in &c.faces {
            assert!(face.stable);
            assert!(codes.contains(face.code.as_ref().unwrap()), "{}", face.code.as_ref().unwrap());
        }
    }
}

fn relabel(t: &RootedTree, perm: &[usize]) -> RootedTree {
    // node v becomes perm[v]; root stays first
    let n = t.len();
    let mut order: Vec<usize> = vec![0];
    order.extend(perm.iter().copied().filter(|&v| v != 0 && v < n));
    let pos: Vec<usize> = (0..n).map(|v| order.iter().position(|&w| w == v).unwrap()).collect();
    let mut parent = vec![None; n];
    let mut legs = vec![Vec::new(); n];
    for v in 0..n {
        parent[pos[v]] = t.parent[v].map(|p| pos[p]);
        let mut l = t.legs[v].clone();
        l.reverse();
        legs[pos[v]] = l;
    }
    RootedTree { parent, legs }
}

proptest! {
    #[test]
    fn canonical_form_is_invariant(idx in 0usize..200, perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle()) {
        let trees = stable_trees(&[1, 2, 3, 4, 5], 3);
        let t = &trees[idx % trees.len()];
        let u = relabel(t, &perm);
        prop_assert_eq!(u.code(), t.code());
        prop_assert_eq!(u.canonical(), t.canonical());
        prop_assert_eq!(t.canonical().canonical(), t.canonical());
    }
}
