//! Pointed rational polyhedral cones given by generators.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::dd::cone_dd;
use crate::intmat;
use crate::lattice::{lattice_primitive, IntLattice};
use crate::rat::{dot, is_zero_vec, primitive_int, IntVec};

/// Facet description `{x : facets·x ≥ 0, eqs·x = 0}` of a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeHRep {
    pub facets: Vec<IntVec>,
    pub eqs: Vec<IntVec>,
}

impl ConeHRep {
    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.eqs.iter().all(|e| dot(e, x).is_zero()) && self.facets.iter().all(|f| !dot(f, x).is_negative())
    }
}

pub fn hrep(dim: usize, gens: &[IntVec]) -> ConeHRep {
    let res = cone_dd(dim, gens, &[]);
    ConeHRep { facets: res.rays, eqs: res.lines }
}

/// Rank of a set of integer vectors.
pub fn rank(gens: &[IntVec], dim: usize) -> usize {
    intmat::rank(gens, dim)
}

/// Extreme rays (primitive in ℤ^d, sorted) of the cone generated by `gens`.
pub fn extreme_rays(dim: usize, gens: &[IntVec]) -> Vec<IntVec> {
    let mut cand: Vec<IntVec> = gens.iter().filter(|g| !is_zero_vec(g)).map(|g| primitive_int(g)).collect();
    cand.sort();
    cand.dedup();
    if cand.len() <= 1 {
        return cand;
    }
    if rank(&cand, dim) == 1 {
        return cand;
    }
    let h = hrep(dim, &cand);
    let mut out: Vec<IntVec> = cand
        .into_iter()
        .filter(|g| {
            // extreme iff the tight facets cut the span down to a line
            let mut rows: Vec<IntVec> = h.eqs.clone();
            rows.extend(h.facets.iter().filter(|f| dot(f, g).is_zero()).cloned());
            rank(&rows, dim) + 1 == dim
        })
        .collect();
    out.sort();
    out
}

/// A cone with its lattice. Generators are primitive in `lattice`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub generators: Vec<IntVec>,
    pub lattice: IntLattice,
    pub dim: usize,
}

impl Cone {
    /// Cone spanned by `rays` (directions) with lattice `ambient ∩ span`.
    pub fn new(ambient: &IntLattice, rays: &[IntVec]) -> Cone {
        let lattice = ambient.intersect_span(rays);
        Self::with_lattice(lattice, rays)
    }

    pub fn with_lattice(lattice: IntLattice, rays: &[IntVec]) -> Cone {
        let mut generators: Vec<IntVec> = rays
            .iter()
            .map(|r| lattice_primitive(&lattice, r).unwrap_or_else(|| r.clone()))
            .collect();
        generators.sort();
        let dim = lattice.rank();
        Cone { generators, lattice, dim }
    }

    pub fn is_simplicial(&self) -> bool {
        self.generators.len() == self.dim
    }

    pub fn hrep(&self) -> ConeHRep {
        hrep(self.lattice.ambient(), &self.generators)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.hrep().contains(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int_vec;

    #[test]
    fn extreme_rays_drop_interior_generators() {
        let g = vec![int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[1, 1]), int_vec(&[2, 0])];
        assert_eq!(extreme_rays(2, &g), vec![int_vec(&[0, 1]), int_vec(&[1, 0])]);
        let flat = vec![int_vec(&[1, 1, 0]), int_vec(&[2, 2, 0])];
        assert_eq!(extreme_rays(3, &flat), vec![int_vec(&[1, 1, 0])]);
        let pyr = vec![int_vec(&[0, 0, 1]), int_vec(&[1, 0, 1]), int_vec(&[0, 1, 1]), int_vec(&[1, 1, 1]), int_vec(&[1, 1, 2])];
        assert_eq!(extreme_rays(3, &pyr).len(), 4);
    }

    #[test]
    fn cone_lattice_generators() {
        let even = IntLattice::from_generators(2, &[int_vec(&[2, 0]), int_vec(&[1, 1])]);
        let c = Cone::new(&even, &[int_vec(&[1, 0]), int_vec(&[0, 1])]);
        assert_eq!(c.generators, vec![int_vec(&[0, 2]), int_vec(&[2, 0])]);
        assert_eq!(c.dim, 2);
        assert!(c.contains(&int_vec(&[1, 3])));
        assert!(!c.contains(&int_vec(&[-1, 3])));
    }
}
