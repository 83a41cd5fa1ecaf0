//! Star fans: cells containing a fixed cell, modulo its span.

use num_bigint::BigInt;

use crate::complex::{ComplexBuilder, ConeComplex};
use crate::cone::extreme_rays;
use crate::error::CoreError;
use crate::intmat::{self, Mat};
use crate::lattice::IntLattice;
use crate::rat::{primitive, rat_int, to_rat_vec, IntVec, Rat, RatVec};
use crate::ratmat;

/// Quotient `L → L/(L ∩ span S)` in coordinates, with a lattice section.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// Rows: quotient coordinates as functionals on the ambient space
    /// (valid on the span of `L`).
    pub matrix: Vec<RatVec>,
    /// Rows: ambient coordinates as functionals on the quotient; maps
    /// quotient lattice points to lattice points of `L`.
    pub section: Vec<IntVec>,
    pub rank: usize,
}

impl Quotient {
    /// `L/(L ∩ span(sub))`.
    pub fn new(l: &IntLattice, sub: &[IntVec]) -> Quotient {
        let d = l.ambient();
        let m = l.rank();
        let b: Vec<RatVec> = l.basis().iter().map(|r| to_rat_vec(r)).collect();
        // coordinates of L ∩ span(sub) in the basis of L
        let s_lat = l.intersect_span(sub);
        let s: Mat<BigInt> = s_lat
            .basis()
            .iter()
            .map(|v| l.coordinates(&to_rat_vec(v)).unwrap().iter().map(|x| x.to_integer()).collect())
            .collect();
        let k = s.len();
        let sm = intmat::smith(&s, m);
        // x ↦ coords(x)·V, keep the last m−k entries
        let p = right_inverse(&b, d);
        let vq: Vec<RatVec> = sm.v.iter().map(|row| row[k..].iter().map(rat_int).collect()).collect();
        let pv = ratmat::mat_mul(&p, &vq, m - k);
        let matrix = ratmat::transpose(&pv, m - k);
        // q ↦ (0, q)·V⁻¹·B
        let sec_rows: Mat<BigInt> = intmat::mat_mul(&sm.v_inv[k..], l.basis(), d);
        let section = intmat::transpose(&sec_rows, d);
        Quotient { matrix, section, rank: m - k }
    }

    pub fn apply(&self, v: &[BigInt]) -> RatVec {
        ratmat::mat_vec(&self.matrix, &to_rat_vec(v))
    }

    pub fn apply_int(&self, v: &[BigInt]) -> IntVec {
        self.apply(v).iter().map(|x| x.to_integer()).collect()
    }

    pub fn lift(&self, q: &[BigInt]) -> IntVec {
        intmat::mat_vec(&self.section, q)
    }
}

/// `d × m` matrix `P` with `B·P = I` for a full-row-rank `m × d` matrix `B`.
fn right_inverse(b: &[RatVec], d: usize) -> Vec<RatVec> {
    let m = b.len();
    if m == 0 {
        return vec![Vec::new(); d];
    }
    let bt = ratmat::transpose(b, d);
    let gram = ratmat::mat_mul(b, &bt, m);
    let gi = ratmat::inverse(&gram).expect("basis rows are independent");
    ratmat::mat_mul(&bt, &gi, m)
}

#[derive(Clone, Debug)]
pub struct StarFan {
    pub fan: ConeComplex,
    pub quotient: Quotient,
    /// Original cell of each star cell.
    pub source_cells: Vec<usize>,
}

/// The fan of cells containing `sigma`, projected to `L/(L ∩ span sigma)`.
pub fn star_fan(c: &ConeComplex, sigma: usize) -> Result<StarFan, CoreError> {
    if sigma >= c.len() {
        return Err(CoreError::NotACell(sigma));
    }
    let q = Quotient::new(&c.ambient, &c.ray_vectors(sigma));
    let mut b = ComplexBuilder::new(IntLattice::standard(q.rank));
    let explicit = c.cells.iter().any(|x| x.lattice.is_some());
    let mut cofaces = c.cofaces(sigma);
    cofaces.sort_by_key(|&t| (c.cells[t].dim, t));
    let mut source_cells = Vec::new();
    for t in cofaces {
        let imgs: Vec<IntVec> = c.ray_vectors(t).iter().map(|r| primitive(&q.apply(r))).collect();
        let gens = extreme_rays(q.rank, &imgs);
        let lattice = if explicit {
            let gens_img: Vec<IntVec> = c.cell_lattice(t).basis().iter().map(|v| q.apply_int(v)).collect();
            Some(IntLattice::from_generators(q.rank, &gens_img))
        } else {
            None
        };
        let id = b.add_cell_with(&gens, c.cells[t].label.clone(), lattice);
        if id == source_cells.len() {
            source_cells.push(t);
        }
    }
    Ok(StarFan { fan: b.build(), quotient: q, source_cells })
}

/// Point in the relative interior of `cell`: the sum of its rays.
pub fn interior_point(c: &ConeComplex, cell: usize) -> IntVec {
    let d = c.dim();
    c.ray_vectors(cell).iter().fold(vec![BigInt::from(0); d], |acc, r| acc.iter().zip(r).map(|(a, b)| a + b).collect())
}

/// Rational matrix applied to a rational vector.
pub fn apply(m: &[RatVec], v: &[Rat]) -> RatVec {
    ratmat::mat_vec(m, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int_vec;

    fn orthant2() -> ConeComplex {
        let mut b = ComplexBuilder::new(IntLattice::standard(2));
        b.add_cell(&[], "0".into());
        b.add_cell(&[int_vec(&[1, 0])], "x".into());
        b.add_cell(&[int_vec(&[0, 1])], "y".into());
        b.add_cell(&[int_vec(&[1, 0]), int_vec(&[0, 1])], "xy".into());
        b.build()
    }

    #[test]
    fn star_of_origin_is_the_complex() {
        let c = orthant2();
        let s = star_fan(&c, 0).unwrap();
        assert!(s.fan.structurally_equal(&c));
    }

    #[test]
    fn star_of_axis_is_a_ray() {
        let c = orthant2();
        let s = star_fan(&c, 1).unwrap();
        assert_eq!(s.fan.len(), 2);
        assert_eq!(s.fan.dim(), 1);
        assert_eq!(s.fan.rays, vec![int_vec(&[1])]);
        assert_eq!(s.source_cells, vec![1, 3]);
    }

    #[test]
    fn star_of_maximal_cell_is_a_point() {
        let c = orthant2();
        let s = star_fan(&c, 3).unwrap();
        assert_eq!(s.fan.len(), 1);
        assert_eq!(s.fan.dim(), 0);
        assert_eq!(star_fan(&c, 9).unwrap_err(), CoreError::NotACell(9));
    }

    #[test]
    fn quotient_section_round_trip() {
        let l = IntLattice::from_generators(3, &[int_vec(&[1, 1, 0]), int_vec(&[0, 1, 1]), int_vec(&[0, 0, 2])]);
        let q = Quotient::new(&l, &[int_vec(&[1, 1, 0])]);
        assert_eq!(q.rank, 2);
        for v in [int_vec(&[0, 1, 1]), int_vec(&[0, 0, 2]), int_vec(&[3, 3, 0])] {
            let c = q.apply(&v);
            assert!(c.iter().all(|x| x.is_integer()));
        }
        for qv in [int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[-2, 5])] {
            let lifted = q.lift(&qv);
            assert!(l.contains(&lifted));
            assert_eq!(q.apply_int(&lifted), qv);
        }
    }
}
