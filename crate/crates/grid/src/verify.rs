//! Transversality, combinatorial flatness and reducedness of
//! `p: Π_n⁺(Σ) → Π_n(Σ)` and its sections.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;
use tropfm_core::cone::extreme_rays;
use tropfm_core::intmat;
use tropfm_core::rat::{is_zero_vec, primitive_int};
use tropfm_core::{ComplexBuilder, ConeComplex, IntVec};

use crate::error::GridError;
use crate::moduli::{GridModuli, PiPlus};
use crate::types::{for_each_type, GridCombType, GridRay};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The image of a cell of `Π_n` under `σ_i` is not a cell of `Π_n⁺`.
    Section { section: usize, cell: String },
    /// A cell of `Π_n⁺` whose image is not a cell of `Π_n`.
    Flatness { cell: String },
    /// A cell of `Π_n⁺` whose lattice does not map onto the image lattice.
    Reducedness { cell: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakSsReport {
    pub transversality: bool,
    pub flatness: bool,
    pub reducedness: bool,
    /// First failure found for each property.
    pub witnesses: Vec<Witness>,
    pub pi_cells: u64,
    pub pi_plus_cells: u64,
}

impl WeakSsReport {
    pub fn passed(&self) -> bool {
        self.transversality && self.flatness && self.reducedness
    }
}

pub fn verify_weak_ss(m: &GridModuli) -> WeakSsReport {
    match &m.pi_plus {
        PiPlus::Lazy => verify_streaming(m),
        PiPlus::Explicit(plus) => verify_explicit(m, plus),
    }
}

fn sorted(mut g: Vec<GridRay>) -> Vec<GridRay> {
    g.sort();
    g.dedup();
    g
}

/// The valid type of `npts` points whose generators are exactly `gens`.
fn lookup_type(m: &GridModuli, npts: usize, gens: &[GridRay]) -> Option<GridCombType> {
    let t = GridCombType::from_generators(m.r(), npts, gens)?;
    (t.is_valid(&m.fan) && sorted(t.generators()) == sorted(gens.to_vec())).then_some(t)
}

fn as_grid_ray(v: &[BigInt], r: usize) -> Option<GridRay> {
    let one = BigInt::from(1);
    let mut ray = None;
    let mut mask = 0u32;
    for (k, x) in v.iter().enumerate() {
        if *x == one {
            if *ray.get_or_insert(k % r) != k % r {
                return None;
            }
            mask |= 1 << (k / r);
        } else if *x != BigInt::from(0) {
            return None;
        }
    }
    ray.map(|ray| GridRay { ray, mask })
}

/// Lattice condition for one coordinate block: the generators of a cone in
/// `ℤ^{n+1}` (first coordinate `x`), saturated, then projected.
fn block_reduced(masks: &[u32], npts_plus: usize) -> bool {
    let vecs: Vec<Vec<i64>> = masks.iter().map(|&mk| (0..npts_plus).map(|k| (mk >> k & 1) as i64).collect()).collect();
    let lat = if vecs.is_empty() { Vec::new() } else { intmat::saturate(&vecs, npts_plus) };
    let img: Vec<Vec<i64>> = lat.iter().map(|v| v[1..].to_vec()).collect();
    let img_h = intmat::hnf(&img, npts_plus - 1);
    let proj: Vec<Vec<i64>> = vecs.iter().map(|v| v[1..].to_vec()).filter(|v| v.iter().any(|&x| x != 0)).collect();
    let expect = if proj.is_empty() { Vec::new() } else { intmat::saturate(&proj, npts_plus - 1) };
    img_h == intmat::hnf(&expect, npts_plus - 1)
}

fn verify_streaming(m: &GridModuli) -> WeakSsReport {
    let (r, n) = (m.r(), m.n);
    let mut rep = WeakSsReport {
        transversality: true,
        flatness: true,
        reducedness: true,
        witnesses: Vec::new(),
        pi_cells: m.pi.len() as u64,
        pi_plus_cells: 0,
    };

    for i in 1..=n {
        for (c, t) in m.types.iter().enumerate() {
            let img: Vec<GridRay> = t
                .generators()
                .into_iter()
                .map(|g| {
                    let x = (g.mask >> (i - 1)) & 1;
                    GridRay { ray: g.ray, mask: g.mask << 1 | x }
                })
                .collect();
            if lookup_type(m, n + 1, &img).is_none() && rep.transversality {
                rep.transversality = false;
                rep.witnesses.push(Witness::Section { section: i, cell: m.pi.cells[c].label.clone() });
            }
        }
    }

    let mut memo: HashMap<Vec<u32>, bool> = HashMap::new();
    let mut count = 0u64;
    for_each_type(&m.fan, n + 1, |tp| {
        count += 1;
        let gens = tp.generators();
        let proj: Vec<GridRay> =
            sorted(gens.iter().filter(|g| g.mask >> 1 != 0).map(|g| GridRay { ray: g.ray, mask: g.mask >> 1 }).collect());
        let mut image = lookup_type(m, n, &proj);
        if image.is_none() {
            // the deduplicated images may include non-extreme rays
            let vecs: Vec<IntVec> = proj.iter().map(|g| g.to_vec(r, n)).collect();
            let ext: Option<Vec<GridRay>> = extreme_rays(r * n, &vecs).iter().map(|v| as_grid_ray(v, r)).collect();
            image = ext.and_then(|e| lookup_type(m, n, &e));
        }
        let flat = image.as_ref().is_some_and(|t| m.cell_of_type(t).is_some());
        if !flat && rep.flatness {
            rep.flatness = false;
            rep.witnesses.push(Witness::Flatness { cell: tp.to_string() });
        }
        if flat {
            let reduced = (0..r).all(|j| {
                let mut key: Vec<u32> = gens.iter().filter(|g| g.ray == j).map(|g| g.mask).collect();
                key.sort();
                *memo.entry(key.clone()).or_insert_with(|| block_reduced(&key, n + 1))
            });
            if !reduced && rep.reducedness {
                rep.reducedness = false;
                rep.witnesses.push(Witness::Reducedness { cell: tp.to_string() });
            }
        }
    });
    rep.pi_plus_cells = count;
    rep
}

fn verify_explicit(m: &GridModuli, plus: &ConeComplex) -> WeakSsReport {
    let mut rep = WeakSsReport {
        transversality: true,
        flatness: true,
        reducedness: true,
        witnesses: Vec::new(),
        pi_cells: m.pi.len() as u64,
        pi_plus_cells: plus.len() as u64,
    };
    for i in 1..=m.n {
        for c in 0..m.pi.len() {
            let img: Vec<IntVec> = m.pi.ray_vectors(c).iter().map(|v| primitive_int(&intmat::mat_vec(&m.sections[i - 1], v))).collect();
            if plus.cell_by_vectors(&img).is_none() && rep.transversality {
                rep.transversality = false;
                rep.witnesses.push(Witness::Section { section: i, cell: m.pi.cells[c].label.clone() });
            }
        }
    }
    let d = m.pi.dim();
    for c in 0..plus.len() {
        let imgs: Vec<IntVec> = plus
            .ray_vectors(c)
            .iter()
            .map(|v| intmat::mat_vec(&m.p, v))
            .filter(|v| !is_zero_vec(v))
            .map(|v| primitive_int(&v))
            .collect();
        let target = m.pi.cell_by_vectors(&imgs).or_else(|| m.pi.cell_by_vectors(&extreme_rays(d, &imgs)));
        let Some(t) = target else {
            if rep.flatness {
                rep.flatness = false;
                rep.witnesses.push(Witness::Flatness { cell: plus.cells[c].label.clone() });
            }
            continue;
        };
        let reduced = plus.cell_lattice(c).image(&m.p, d).is_ok_and(|l| l == m.pi.cell_lattice(t));
        if !reduced && rep.reducedness {
            rep.reducedness = false;
            rep.witnesses.push(Witness::Reducedness { cell: plus.cells[c].label.clone() });
        }
    }
    rep
}

/// `Π_n⁺` replaced by the unsubdivided `Σ × Σ^n`.
pub fn mutate_unsubdivided(m: &GridModuli) -> GridModuli {
    m.clone().with_pi_plus(m.fan.power(m.n + 1))
}

/// Every cell lattice of `Π_n⁺` replaced by twice itself.
pub fn mutate_scaled_lattice(m: &GridModuli, budget: u64) -> Result<GridModuli, GridError> {
    let plus = m.materialize_pi_plus(budget)?;
    let mut b = ComplexBuilder::new(plus.ambient.clone());
    for c in 0..plus.len() {
        b.add_cell_with(&plus.ray_vectors(c), plus.cells[c].label.clone(), Some(plus.cell_lattice(c).scaled(2)));
    }
    Ok(m.clone().with_pi_plus(b.build()))
}

/// `Π_n⁺` with the image of a top-dimensional cell under `σ_1` removed.
pub fn mutate_drop_section_cell(m: &GridModuli, budget: u64) -> Result<GridModuli, GridError> {
    let plus = m.materialize_pi_plus(budget)?;
    let top = *m.pi.maximal_cells().last().expect("nonempty");
    let drop: Vec<IntVec> = m.pi.ray_vectors(top).iter().map(|v| primitive_int(&intmat::mat_vec(&m.sections[0], v))).collect();
    let dropped = plus.cell_by_vectors(&drop).expect("σ_1 image is a cell");
    let mut b = ComplexBuilder::new(plus.ambient.clone());
    for c in (0..plus.len()).filter(|&c| c != dropped) {
        b.add_cell(&plus.ray_vectors(c), plus.cells[c].label.clone());
    }
    Ok(m.clone().with_pi_plus(b.build()))
}

/// Explicit `Π_n⁺` with default lattices, for the dual check.
pub fn explicit(m: &GridModuli, budget: u64) -> Result<GridModuli, GridError> {
    Ok(m.clone().with_pi_plus(m.materialize_pi_plus(budget)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::TropFan;
    use crate::moduli::build_pi;

    #[test]
    fn streaming_and_explicit_agree() {
        for fan in [TropFan::full(2), TropFan::disjoint(2), TropFan::full(1)] {
            for n in 1..=2 {
                let m = build_pi(&fan, n).unwrap();
                let a = verify_weak_ss(&m);
                let b = verify_weak_ss(&explicit(&m, 1_000_000).unwrap());
                assert!(a.passed(), "{fan:?} {n}");
                assert!(b.passed(), "{fan:?} {n}");
                assert_eq!(a.pi_plus_cells, b.pi_plus_cells);
            }
        }
    }

    #[test]
    fn mutations_fail() {
        let m = build_pi(&TropFan::full(2), 2).unwrap();
        let u = verify_weak_ss(&mutate_unsubdivided(&m));
        assert!(!u.transversality);
        assert!(matches!(u.witnesses[0], Witness::Section { section: 1, .. }));
        let s = verify_weak_ss(&mutate_scaled_lattice(&m, 1_000_000).unwrap());
        assert!(s.transversality && s.flatness && !s.reducedness);
        let d = verify_weak_ss(&mutate_drop_section_cell(&m, 1_000_000).unwrap());
        assert!(!d.transversality);
        assert!(matches!(d.witnesses[0], Witness::Section { section: 1, .. }));
    }
}
