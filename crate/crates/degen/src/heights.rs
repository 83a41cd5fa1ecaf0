//! Minimal heights of integral configurations and the lattice refinement by
//! their least common multiple.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use tropfm_core::rat::lcm_denoms;
use tropfm_core::{IntLattice, IntVec};

use crate::moduli::{equal_sum_lattice, DegenModuli};
use crate::types::{signs_int, Form};

/// Which integral points of a cone count towards its minimal height.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeightReading {
    /// Points in the relative interior of the cone.
    #[default]
    RelativeInterior,
    /// Points anywhere in the closed cone other than the origin.
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Heights {
    pub reading: HeightReading,
    /// `None` for the origin.
    pub per_cell: Vec<Option<u64>>,
    pub h_tot: u64,
    /// Largest height swept.
    pub swept_to: u64,
}

/// Compositions of `t` into `r` non-negative parts.
pub fn compositions(t: i64, r: usize) -> Vec<Vec<i64>> {
    if r == 1 {
        return vec![vec![t]];
    }
    let mut out = Vec::new();
    for a in (0..=t).rev() {
        for mut rest in compositions(t - a, r - 1) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

/// Calls `f` on every integral configuration of `npts` points of height `t`.
pub fn for_each_config(r: usize, npts: usize, t: i64, mut f: impl FnMut(&[i64])) {
    let comps = compositions(t, r);
    let mut idx = vec![0usize; npts];
    let mut u = vec![0i64; r * npts];
    loop {
        for (i, &k) in idx.iter().enumerate() {
            u[i * r..(i + 1) * r].copy_from_slice(&comps[k]);
        }
        f(&u);
        let mut p = 0;
        loop {
            if p == npts {
                return;
            }
            idx[p] += 1;
            if idx[p] < comps.len() {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
    }
}

/// Height at which the relative interior of `cell` is guaranteed an
/// integral point: the common denominator of its barycenter.
pub fn relint_bound(m: &DegenModuli, cell: usize) -> u64 {
    if m.is_origin(cell) {
        return 1;
    }
    lcm_denoms(&m.barycenter(cell)).to_u64().expect("small denominator")
}

/// Relative-interior minimal heights of all cells by a sweep over heights.
fn relint_heights(m: &DegenModuli) -> (Vec<Option<u64>>, u64) {
    let mut out: Vec<Option<u64>> = vec![None; m.pi.len()];
    let bound = (1..m.pi.len()).map(|c| relint_bound(m, c)).max().unwrap_or(1);
    let mut missing = m.pi.len() - 1;
    let mut t = 0;
    while missing > 0 && t < bound {
        t += 1;
        for_each_config(m.r, m.n, t as i64, |u| {
            if let Some(c) = m.cell_of_int(u, t as i64) {
                if out[c].is_none() {
                    out[c] = Some(t);
                    missing -= 1;
                }
            }
        });
    }
    assert_eq!(missing, 0, "every cell has an interior point by height {bound}");
    (out, t)
}

pub fn min_heights(m: &DegenModuli, reading: HeightReading) -> Heights {
    let (relint, swept_to) = relint_heights(m);
    let per_cell: Vec<Option<u64>> = match reading {
        HeightReading::RelativeInterior => relint,
        HeightReading::Closed => (0..m.pi.len())
            .map(|c| {
                if m.is_origin(c) {
                    return None;
                }
                m.pi.faces_of(c).into_iter().filter_map(|f| relint[f]).min()
            })
            .collect(),
    };
    let h_tot = per_cell.iter().flatten().fold(1u64, |a, &h| a.lcm(&h));
    Heights { reading, per_cell, h_tot, swept_to }
}

pub fn min_height(m: &DegenModuli, cell: usize, reading: HeightReading) -> Option<u64> {
    min_heights(m, reading).per_cell[cell]
}

pub fn h_tot(m: &DegenModuli) -> u64 {
    min_heights(m, HeightReading::default()).h_tot
}

/// Smallest `t ≤ bound` with an integral configuration of height `t` whose
/// sign vector against `forms` is `signs`.
pub fn sign_vector_height(r: usize, npts: usize, forms: &[Form], signs: &[i8], bound: u64) -> Option<u64> {
    (1..=bound).find(|&t| {
        let mut hit = false;
        for_each_config(r, npts, t as i64, |u| {
            hit = hit || signs_int(forms, u, t as i64) == signs;
        });
        hit
    })
}

/// Height of the primitive integral vector on a ray.
pub fn ray_height(v: &IntVec, r: usize) -> BigInt {
    v[..r].iter().sum()
}

/// Configurations of `npts` points whose coordinate sums are all divisible
/// by `h`: index `h^npts` in `(ℤ^r)^npts`.
pub fn kernel_lattice(r: usize, npts: usize, h: u64) -> IntLattice {
    let d = r * npts;
    let mut gens = Vec::new();
    for i in 0..npts {
        for j in 1..r {
            let mut v = vec![BigInt::zero(); d];
            v[i * r + j] = BigInt::from(1);
            v[i * r] = BigInt::from(-1);
            gens.push(v);
        }
        let mut v = vec![BigInt::zero(); d];
        v[i * r] = BigInt::from(h);
        gens.push(v);
    }
    IntLattice::from_generators(d, &gens)
}

/// `N = kernel ∩ {equal sums}`, and the same for `Π_n⁺`; the base lattice
/// becomes `h_tot·ℤ`.
pub fn refine_lattices(m: &DegenModuli, h_tot: u64) -> DegenModuli {
    let refine = |npts: usize| {
        let eq = equal_sum_lattice(m.r, npts);
        kernel_lattice(m.r, npts, h_tot).intersect_span(eq.basis())
    };
    m.with_lattices(refine(m.n), refine(m.n + 1), h_tot, Some(h_tot))
}

/// The unrefined lattices over the base `h·ℤ`: the state before refinement
/// once the base has been changed.
pub fn base_changed(m: &DegenModuli, h: u64) -> DegenModuli {
    m.with_lattices(m.pi.ambient.clone(), m.pi_plus.ambient.clone(), h, None)
}
