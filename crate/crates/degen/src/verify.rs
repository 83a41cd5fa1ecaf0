//! Transversality of the sections, flatness and reducedness of `p` and of
//! the height map `h`.

use serde::Serialize;
use tropfm_core::cone::extreme_rays;
use tropfm_core::intmat;
use tropfm_core::rat::{is_zero_vec, primitive_int};
use tropfm_core::{IntLattice, IntVec};

use crate::moduli::DegenModuli;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DegenWitness {
    Section { section: usize, cell: String },
    PFlatness { cell: String },
    PReducedness { cell: String },
    /// A ray of height zero.
    HFlatness { cell: String },
    /// A cell whose lattice maps onto `g·ℤ` with `g` not the base.
    HReducedness { cell: String, image: u64, base: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenSsReport {
    pub transversality: bool,
    pub p_flat: bool,
    pub p_reduced: bool,
    pub h_flat: bool,
    pub h_reduced: bool,
    pub witnesses: Vec<DegenWitness>,
    pub pi_cells: usize,
    pub pi_plus_cells: usize,
    pub base: u64,
}

impl DegenSsReport {
    pub fn passed(&self) -> bool {
        self.transversality && self.p_flat && self.p_reduced && self.h_flat && self.h_reduced
    }
}

/// Generator of `h(L)` for a lattice `L` of configurations.
pub fn height_image(m: &DegenModuli, l: &IntLattice) -> u64 {
    let img = l.image(&m.h, 1).expect("h has the ambient width");
    match img.basis().first() {
        Some(row) => u64::try_from(row[0].magnitude()).expect("small height"),
        None => 0,
    }
}

fn first(flag: &mut bool, out: &mut Vec<DegenWitness>, w: impl FnOnce() -> DegenWitness) {
    if *flag {
        *flag = false;
        out.push(w());
    }
}

pub fn verify_degen_ss(m: &DegenModuli) -> DegenSsReport {
    let (pi, plus) = (&m.pi, &m.pi_plus);
    let mut rep = DegenSsReport {
        transversality: true,
        p_flat: true,
        p_reduced: true,
        h_flat: true,
        h_reduced: true,
        witnesses: Vec::new(),
        pi_cells: pi.len(),
        pi_plus_cells: plus.len(),
        base: m.base,
    };
    let d = m.dim();
    let dp = d + m.r;

    for (i, sec) in m.sections.iter().enumerate() {
        for c in 0..pi.len() {
            let img: Vec<IntVec> = pi.ray_vectors(c).iter().map(|v| primitive_int(&intmat::mat_vec(sec, v))).collect();
            let ok = plus.cell_by_vectors(&img).or_else(|| plus.cell_by_vectors(&extreme_rays(dp, &img))).is_some();
            if !ok {
                first(&mut rep.transversality, &mut rep.witnesses, || DegenWitness::Section {
                    section: i + 1,
                    cell: pi.cells[c].label.clone(),
                });
            }
        }
    }

    for c in 0..plus.len() {
        let imgs: Vec<IntVec> = plus
            .ray_vectors(c)
            .iter()
            .map(|v| intmat::mat_vec(&m.p, v))
            .filter(|v| !is_zero_vec(v))
            .map(|v| primitive_int(&v))
            .collect();
        let target = pi.cell_by_vectors(&imgs).or_else(|| pi.cell_by_vectors(&extreme_rays(d, &imgs)));
        let Some(t) = target else {
            first(&mut rep.p_flat, &mut rep.witnesses, || DegenWitness::PFlatness { cell: plus.cells[c].label.clone() });
            continue;
        };
        let reduced = plus.cell_lattice(c).image(&m.p, d).is_ok_and(|l| l == pi.cell_lattice(t));
        if !reduced {
            first(&mut rep.p_reduced, &mut rep.witnesses, || DegenWitness::PReducedness { cell: plus.cells[c].label.clone() });
        }
    }

    for c in 0..pi.len() {
        if m.is_origin(c) {
            continue;
        }
        if pi.ray_vectors(c).iter().any(|v| m.height(v) <= 0.into()) {
            first(&mut rep.h_flat, &mut rep.witnesses, || DegenWitness::HFlatness { cell: pi.cells[c].label.clone() });
        }
        let g = height_image(m, &pi.cell_lattice(c));
        if g != m.base {
            first(&mut rep.h_reduced, &mut rep.witnesses, || DegenWitness::HReducedness {
                cell: pi.cells[c].label.clone(),
                image: g,
                base: m.base,
            });
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::{base_changed, h_tot, refine_lattices};
    use crate::moduli::build_pi_delta;

    #[test]
    fn segment_before_and_after() {
        let m = build_pi_delta(2, 1).unwrap();
        assert!(verify_degen_ss(&m).passed());
        let h = h_tot(&m);
        let before = verify_degen_ss(&base_changed(&m, h));
        assert!(!before.h_reduced);
        assert!(before.witnesses.iter().any(|w| matches!(w, DegenWitness::HReducedness { image: 1, base: 2, .. })));
        assert!(verify_degen_ss(&refine_lattices(&m, h)).passed());
    }

    #[test]
    fn square_refined() {
        let m = build_pi_delta(2, 2).unwrap();
        let h = h_tot(&m);
        let rep = verify_degen_ss(&refine_lattices(&m, h));
        assert!(rep.passed(), "{:?}", rep.witnesses);
    }
}
