//! Brute-force oracles for the grid moduli.

use std::collections::BTreeSet;

use tropfm_core::rat::rat;
use tropfm_grid::verify::{mutate_drop_section_cell, mutate_scaled_lattice, mutate_unsubdivided};
use tropfm_grid::*;

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Types of generic configurations on two disjoint rays: each point on one
/// ray, coordinates in `1..=n`, pairwise distinct on each ray.
fn generic_types(n: usize) -> BTreeSet<GridCombType> {
    let mut out = BTreeSet::new();
    let choices: Vec<(usize, i64)> = (0..2).flat_map(|j| (1..=n as i64).map(move |v| (j, v))).collect();
    let mut idx = vec![0usize; n];
    loop {
        let pts: Vec<(usize, i64)> = idx.iter().map(|&i| choices[i]).collect();
        let distinct = (0..n).all(|a| (a + 1..n).all(|b| pts[a] != pts[b]));
        if distinct {
            let points = pts.iter().map(|&(j, v)| (0..2).map(|k| if k == j { rat(v, 1) } else { rat(0, 1) }).collect()).collect();
            out.insert(grid_comb_type(&TropPointTuple { r: 2, points }));
        }
        let mut p = 0;
        while p < n && idx[p] == choices.len() - 1 {
            idx[p] = 0;
            p += 1;
        }
        if p == n {
            return out;
        }
        idx[p] += 1;
    }
}

#[test]
fn permutohedral_counts() {
    for n in 2..=4 {
        let m = build_pi(&TropFan::disjoint(2), n).unwrap();
        let maximal: Vec<usize> = m.pi.maximal_cells();
        assert!(maximal.iter().all(|&c| m.pi.cells[c].dim == n));
        let oracle = generic_types(n);
        assert_eq!(oracle.len(), factorial(n + 1));
        let ours: BTreeSet<GridCombType> = maximal.iter().map(|&c| m.types[c].clone()).collect();
        assert_eq!(ours, oracle);
    }
}

#[test]
fn one_point_is_the_fan() {
    for r in 1..=4 {
        for fan in TropFan::all(r) {
            let m = build_pi(&fan, 1).unwrap();
            assert!(m.pi.structurally_equal(&fan.to_complex()), "{fan:?}");
        }
    }
}

#[test]
fn codimension_is_cone_dimension() {
    for r in 1..=3 {
        for fan in TropFan::all(r) {
            for n in 1..=3 {
                let m = build_pi(&fan, n).unwrap();
                for (c, t) in m.types.iter().enumerate() {
                    assert_eq!(grid_codim(t), m.pi.cells[c].dim);
                }
            }
        }
    }
}

#[test]
fn mutations_are_caught() {
    let m = build_pi(&TropFan::full(2), 2).unwrap();
    assert!(verify_weak_ss(&m).passed());
    let budget = default_budget();
    let u = verify_weak_ss(&mutate_unsubdivided(&m));
    let s = verify_weak_ss(&mutate_scaled_lattice(&m, budget).unwrap());
    let d = verify_weak_ss(&mutate_drop_section_cell(&m, budget).unwrap());
    for rep in [&u, &s, &d] {
        assert!(!rep.passed());
        assert!(!rep.witnesses.is_empty());
    }
}
