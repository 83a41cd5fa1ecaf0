//! `Π_n(Δ)` and `Π_n⁺(Δ)`: cones over the cells of the threshold
//! arrangements on `Δ^n` and `Δ^{n+1}`, with `p`, `h` and the sections.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use tropfm_core::rat::primitive;
use tropfm_core::{arrangement_cells, ComplexBuilder, ConeComplex, IntLattice, IntVec, Rat, RatVec};
use tropfm_grid::moduli::{projection_matrix, section_matrix};

use crate::error::DegenError;
use crate::types::{plus_forms, signs, signs_int, simplex_power, threshold_forms, DeltaCombType, Form};

#[derive(Clone, Debug)]
pub struct DegenModuli {
    pub r: usize,
    pub n: usize,
    pub forms: Vec<Form>,
    /// Cell `0` is the origin; every other cell is the cone over a cell of
    /// `P_n(Δ)`, labelled by its sign vector.
    pub pi: ConeComplex,
    /// Type of each cell of `pi`; `None` for the origin.
    pub types: Vec<Option<DeltaCombType>>,
    index: HashMap<Vec<i8>, usize>,
    pub plus_forms: Vec<Form>,
    /// The same over `Δ^{n+1}`, point `x` first.
    pub pi_plus: ConeComplex,
    plus_index: HashMap<Vec<i8>, usize>,
    /// `(x, u) ↦ u`.
    pub p: Vec<IntVec>,
    /// Height: the coordinate sum of the first point.
    pub h: Vec<IntVec>,
    /// `σ_i: u ↦ (u_i, u)` at index `i − 1`.
    pub sections: Vec<Vec<IntVec>>,
    /// The base lattice is `base·ℤ`.
    pub base: u64,
    /// `h_tot` the lattices were refined by.
    pub refined: Option<u64>,
}

/// Vectors of `(ℤ^r)^npts` whose points all have the same coordinate sum.
pub fn equal_sum_lattice(r: usize, npts: usize) -> IntLattice {
    let d = r * npts;
    let mut gens = Vec::new();
    for i in 0..npts {
        for j in 1..r {
            let mut v = vec![BigInt::zero(); d];
            v[i * r + j] = BigInt::from(1);
            v[i * r] = BigInt::from(-1);
            gens.push(v);
        }
    }
    gens.push((0..d).map(|k| BigInt::from((k % r == 0) as i64)).collect());
    IntLattice::saturated(d, &gens)
}

fn is_facet(f: &Form) -> bool {
    f.c == 0 && f.a.iter().filter(|&&x| x != 0).count() == 1
}

struct Built {
    complex: ConeComplex,
    signs: Vec<Option<Vec<i8>>>,
}

fn build_complex(r: usize, npts: usize, forms: &[Form], budget: u64) -> Result<Built, DegenError> {
    let hyper: Vec<_> = forms.iter().filter(|f| !is_facet(f)).map(|f| f.halfspace()).collect();
    let arr = arrangement_cells(&simplex_power(r, npts), &hyper);
    let count = arr.cells.len() as u64 + 1;
    if count > budget {
        return Err(DegenError::SizeLimit { count, budget });
    }
    let one = Rat::from_integer(BigInt::from(1));
    let mut b = ComplexBuilder::new(equal_sum_lattice(r, npts));
    b.add_cell(&[], "0".into());
    let mut out_signs = vec![None];
    for c in &arr.cells {
        let gens: Vec<IntVec> = c.vertices.iter().map(|&v| primitive(&arr.vertices[v])).collect();
        let k = Rat::from_integer(BigInt::from(c.vertices.len()));
        let bary: RatVec = (0..r * npts).map(|i| c.vertices.iter().map(|&v| &arr.vertices[v][i]).sum::<Rat>() / &k).collect();
        let s = signs(forms, &bary, &one);
        let label: String = s.iter().map(|&x| match x { 1 => '+', 0 => '0', _ => '-' }).collect();
        let id = b.add_cell(&gens, label);
        debug_assert_eq!(id, out_signs.len());
        out_signs.push(Some(s));
    }
    Ok(Built { complex: b.build(), signs: out_signs })
}

/// `Π_n(Δ)` alone, without `Π_n⁺(Δ)`.
pub fn pi_delta_complex(r: usize, n: usize, budget: u64) -> Result<ConeComplex, DegenError> {
    if r < 2 || n == 0 {
        return Err(DegenError::BadShape { r, n });
    }
    Ok(build_complex(r, n, &threshold_forms(r, n), budget)?.complex)
}

pub fn build_pi_delta(r: usize, n: usize) -> Result<DegenModuli, DegenError> {
    build_pi_delta_with_budget(r, n, tropfm_grid::default_budget())
}

pub fn build_pi_delta_with_budget(r: usize, n: usize, budget: u64) -> Result<DegenModuli, DegenError> {
    if r < 2 || n == 0 {
        return Err(DegenError::BadShape { r, n });
    }
    let forms = threshold_forms(r, n);
    let pi = build_complex(r, n, &forms, budget)?;
    let pforms = plus_forms(r, n);
    let plus = build_complex(r, n + 1, &pforms, budget)?;
    let types: Vec<Option<DeltaCombType>> = pi.signs.iter().map(|s| s.clone().map(|signs| DeltaCombType { r, n, signs })).collect();
    let index = pi.signs.iter().enumerate().filter_map(|(c, s)| s.clone().map(|s| (s, c))).collect();
    let plus_index = plus.signs.iter().enumerate().filter_map(|(c, s)| s.clone().map(|s| (s, c))).collect();
    let mut h = vec![vec![BigInt::zero(); r * n]];
    for j in 0..r {
        h[0][j] = BigInt::from(1);
    }
    Ok(DegenModuli {
        r,
        n,
        forms,
        pi: pi.complex,
        types,
        index,
        plus_forms: pforms,
        pi_plus: plus.complex,
        plus_index,
        p: projection_matrix(r, n),
        h,
        sections: (1..=n).map(|i| section_matrix(r, n, i)).collect(),
        base: 1,
        refined: None,
    })
}

impl DegenModuli {
    pub fn dim(&self) -> usize {
        self.r * self.n
    }

    /// Cell whose relative interior contains the integral configuration `u`
    /// of height `t > 0`.
    pub fn cell_of_int(&self, u: &[i64], t: i64) -> Option<usize> {
        self.index.get(&signs_int(&self.forms, u, t)).copied()
    }

    pub fn cell_of_point(&self, u: &[Rat], t: &Rat) -> Option<usize> {
        self.index.get(&signs(&self.forms, u, t)).copied()
    }

    pub fn plus_cell_of_point(&self, xu: &[Rat], t: &Rat) -> Option<usize> {
        self.plus_index.get(&signs(&self.plus_forms, xu, t)).copied()
    }

    pub fn cell_of_type(&self, t: &DeltaCombType) -> Option<usize> {
        self.index.get(&t.signs).copied()
    }

    /// Configuration at height one in the relative interior of `cell`.
    pub fn barycenter(&self, cell: usize) -> RatVec {
        let rays = self.pi.ray_vectors(cell);
        let k = Rat::from_integer(BigInt::from(rays.len()));
        let mut acc = vec![Rat::zero(); self.dim()];
        for v in &rays {
            let pts = at_height_one(v, self.r);
            for (a, x) in acc.iter_mut().zip(pts) {
                *a += x;
            }
        }
        acc.into_iter().map(|x| x / &k).collect()
    }

    /// Points of the configuration on ray `v` of `pi`, at height one.
    pub fn ray_configuration(&self, v: &[BigInt]) -> Vec<RatVec> {
        at_height_one(v, self.r).chunks(self.r).map(|c| c.to_vec()).collect()
    }

    pub fn is_origin(&self, cell: usize) -> bool {
        self.types[cell].is_none()
    }

    /// Cells that are rays: the vertices of `P_n(Δ)`.
    pub fn ray_cells(&self) -> Vec<usize> {
        (0..self.pi.len()).filter(|&c| self.pi.cells[c].dim == 1).collect()
    }

    /// Same complexes with the given ambient lattices and base lattice.
    pub fn with_lattices(&self, pi: IntLattice, plus: IntLattice, base: u64, refined: Option<u64>) -> DegenModuli {
        let mut m = self.clone();
        m.pi = ConeComplex::from_parts(pi, self.pi.rays.clone(), self.pi.cells.clone());
        m.pi_plus = ConeComplex::from_parts(plus, self.pi_plus.rays.clone(), self.pi_plus.cells.clone());
        m.base = base;
        m.refined = refined;
        m
    }

    pub fn height(&self, v: &[BigInt]) -> BigInt {
        v[..self.r].iter().sum()
    }
}

/// `v` scaled to coordinate sums one.
pub fn at_height_one(v: &[BigInt], r: usize) -> RatVec {
    let t: BigInt = v[..r].iter().sum();
    v.iter().map(|x| Rat::new(x.clone(), t.clone())).collect()
}
