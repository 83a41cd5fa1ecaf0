//! Enumeration of stable planted-forest types up to a codimension.

use std::collections::{BTreeMap, BTreeSet};

use tropfm_grid::{GridCombType, GridModuli};

use crate::error::FmError;
use crate::forest::{ForestBase, PlantedForestType};
use crate::tree::{stable_trees, RootedTree};

/// Every stable type over the given base types with codimension at most
/// `max_codim`, sorted by codimension then code.
pub fn enumerate_fm_types<B: ForestBase>(bases: &[B], max_codim: usize, budget: u64) -> Result<Vec<PlantedForestType<B>>, FmError> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out: Vec<(usize, String, PlantedForestType<B>)> = Vec::new();
    for base in bases {
        let c0 = base.base_codim();
        if c0 > max_codim {
            continue;
        }
        let rem = max_codim - c0;
        // per vertex, the stable trees with few enough edges
        let choices: Vec<(usize, Vec<RootedTree>)> = base
            .vertex_groups()
            .into_iter()
            .filter(|g| g.len() >= 2)
            .map(|g| (g[0], stable_trees(&g, rem)))
            .collect();
        let mut partial: Vec<(usize, BTreeMap<usize, RootedTree>)> = vec![(0, BTreeMap::new())];
        for (key, trees) in &choices {
            let mut next = Vec::new();
            for (e, m) in &partial {
                for t in trees.iter().filter(|t| e + t.edges() <= rem) {
                    let mut m = m.clone();
                    if !t.is_trivial() {
                        m.insert(*key, t.clone());
                    }
                    next.push((e + t.edges(), m));
                }
            }
            partial = next;
        }
        for (e, trees) in partial {
            let f = PlantedForestType { base: base.clone(), trees }.canonical();
            let code = f.code();
            if seen.insert(code.clone()) {
                if out.len() as u64 >= budget {
                    return Err(FmError::SizeLimit { count: out.len() as u64 + 1, budget });
                }
                out.push((c0 + e, code, f));
            }
        }
    }
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(out.into_iter().map(|(_, _, f)| f).collect())
}

/// Types over the cells of `Π_n(Σ)`.
pub fn enumerate_grid_fm_types(m: &GridModuli, max_codim: usize, budget: u64) -> Result<Vec<PlantedForestType<GridCombType>>, FmError> {
    enumerate_fm_types(&m.types, max_codim, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{fm_codim, fm_cone};
    use tropfm_grid::{build_pi, TropFan};

    #[test]
    fn boundary_divisors_over_three_rays() {
        let fan = TropFan::disjoint(3);
        for (n, want) in [(2, 10), (3, 25)] {
            let m = build_pi(&fan, n).unwrap();
            let all = enumerate_grid_fm_types(&m, 1, 1_000_000).unwrap();
            assert_eq!(all.iter().filter(|f| fm_codim(f).unwrap() == 1).count(), want);
        }
    }

    #[test]
    fn one_point_has_no_trees() {
        for fan in TropFan::all(3) {
            let m = build_pi(&fan, 1).unwrap();
            let all = enumerate_grid_fm_types(&m, 3, 1_000).unwrap();
            assert_eq!(all.len(), m.pi.len());
        }
    }

    #[test]
    fn cone_dimension_is_codim() {
        let m = build_pi(&TropFan::full(2), 3).unwrap();
        for f in enumerate_grid_fm_types(&m, 3, 1_000_000).unwrap() {
            let c = fm_cone(&f).unwrap();
            assert_eq!(c.dim, fm_codim(&f).unwrap());
            assert_eq!(tropfm_core::cone::rank(&c.generators, c.ambient_dim), c.dim);
        }
    }

    #[test]
    fn budget() {
        let m = build_pi(&TropFan::full(2), 3).unwrap();
        assert!(matches!(enumerate_grid_fm_types(&m, 3, 5), Err(FmError::SizeLimit { budget: 5, .. })));
    }
}
