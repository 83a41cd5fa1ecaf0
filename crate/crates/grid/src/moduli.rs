//! The moduli complexes `Π_n(Σ)` and `Π_n⁺(Σ)` with the projection and sections.

use std::collections::HashMap;

use num_bigint::BigInt;
use tropfm_core::{ComplexBuilder, ComplexMap, ConeComplex, IntLattice, IntVec, RatVec};

use crate::error::GridError;
use crate::fan::TropFan;
use crate::types::{count_types, default_budget, enumerate_types, GridCombType};

/// `Π_n⁺(Σ)`: enumerated on demand from its types, or an explicit complex.
#[derive(Clone, Debug)]
pub enum PiPlus {
    /// Cells are the types of `n + 1` points, the first point being `x`.
    Lazy,
    Explicit(ConeComplex),
}

#[derive(Clone, Debug)]
pub struct GridModuli {
    pub fan: TropFan,
    pub n: usize,
    pub pi: ConeComplex,
    /// Type of each cell of `pi`.
    pub types: Vec<GridCombType>,
    type_index: HashMap<GridCombType, usize>,
    pub pi_plus: PiPlus,
    /// `(x, u_1, …, u_n) ↦ (u_1, …, u_n)`; rows are target coordinates.
    pub p: Vec<IntVec>,
    /// `σ_i: u ↦ (u_i, u)`, for `i = 1..n` at index `i − 1`.
    pub sections: Vec<Vec<IntVec>>,
}

fn unit(len: usize, k: usize) -> IntVec {
    (0..len).map(|i| BigInt::from((i == k) as i64)).collect()
}

/// Cone complex of the given types; cell `c` is `types[c]`.
pub fn complex_of_types(r: usize, npts: usize, types: &[GridCombType]) -> ConeComplex {
    let mut b = ComplexBuilder::new(IntLattice::standard(r * npts));
    for t in types {
        b.add_cell(&t.generator_vectors(), t.to_string());
    }
    b.build()
}

pub fn projection_matrix(r: usize, n: usize) -> Vec<IntVec> {
    (0..r * n).map(|k| unit(r * (n + 1), r + k)).collect()
}

pub fn section_matrix(r: usize, n: usize, i: usize) -> Vec<IntVec> {
    let mut rows: Vec<IntVec> = (0..r).map(|j| unit(r * n, (i - 1) * r + j)).collect();
    rows.extend((0..r * n).map(|k| unit(r * n, k)));
    rows
}

pub fn build_pi(fan: &TropFan, n: usize) -> Result<GridModuli, GridError> {
    build_pi_with_budget(fan, n, default_budget())
}

pub fn build_pi_with_budget(fan: &TropFan, n: usize, budget: u64) -> Result<GridModuli, GridError> {
    if n == 0 {
        return Err(GridError::NoPoints);
    }
    let types = enumerate_types(fan, n, budget)?;
    let pi = complex_of_types(fan.rays(), n, &types);
    let type_index = types.iter().enumerate().map(|(c, t)| (t.clone(), c)).collect();
    let r = fan.rays();
    Ok(GridModuli {
        fan: fan.clone(),
        n,
        pi,
        types,
        type_index,
        pi_plus: PiPlus::Lazy,
        p: projection_matrix(r, n),
        sections: (1..=n).map(|i| section_matrix(r, n, i)).collect(),
    })
}

impl GridModuli {
    pub fn r(&self) -> usize {
        self.fan.rays()
    }

    pub fn cell_of_type(&self, t: &GridCombType) -> Option<usize> {
        self.type_index.get(t).copied()
    }

    pub fn pi_plus_count(&self) -> u64 {
        match &self.pi_plus {
            PiPlus::Lazy => count_types(&self.fan, self.n + 1),
            PiPlus::Explicit(c) => c.len() as u64,
        }
    }

    /// `Π_n⁺(Σ)` as an explicit complex (the types of `n + 1` points).
    pub fn materialize_pi_plus(&self, budget: u64) -> Result<ConeComplex, GridError> {
        match &self.pi_plus {
            PiPlus::Explicit(c) => Ok(c.clone()),
            PiPlus::Lazy => {
                let types = enumerate_types(&self.fan, self.n + 1, budget)?;
                Ok(complex_of_types(self.r(), self.n + 1, &types))
            }
        }
    }

    pub fn with_pi_plus(mut self, c: ConeComplex) -> Self {
        self.pi_plus = PiPlus::Explicit(c);
        self
    }

    /// The projection as a map of complexes, when every image is a cell.
    pub fn p_map(&self, plus: &ConeComplex) -> Option<ComplexMap> {
        map_by_lookup(plus, &self.p, &self.pi)
    }

    pub fn section_map(&self, i: usize, plus: &ConeComplex) -> Option<ComplexMap> {
        map_by_lookup(&self.pi, &self.sections[i - 1], plus)
    }
}

fn to_rat(m: &[IntVec]) -> Vec<RatVec> {
    m.iter().map(|r| tropfm_core::rat::to_rat_vec(r)).collect()
}

/// Uniform linear map whose image of each source cell is a target cell.
fn map_by_lookup(source: &ConeComplex, m: &[IntVec], target: &ConeComplex) -> Option<ComplexMap> {
    let d = target.dim();
    let mut targets = Vec::with_capacity(source.len());
    for c in 0..source.len() {
        let imgs: Vec<IntVec> = source.ray_vectors(c).iter().map(|r| tropfm_core::intmat::mat_vec(m, r)).collect();
        let gens = tropfm_core::cone::extreme_rays(d, &imgs);
        targets.push(target.cell_by_vectors(&gens)?);
    }
    Some(ComplexMap::new(vec![Some(to_rat(m)); source.len()], targets))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_ray_two_points() {
        let m = build_pi(&TropFan::full(1), 2).unwrap();
        assert_eq!(m.pi.len(), 6);
        assert_eq!(m.pi.count_by_dim(), vec![1, 3, 2]);
        assert!(m.pi.validate().is_ok());
    }

    #[test]
    fn permutohedral_counts() {
        for (n, want) in [(2, 6), (3, 24)] {
            let m = build_pi(&TropFan::disjoint(2), n).unwrap();
            assert_eq!(m.pi.maximal_cells().len(), want);
        }
    }

    #[test]
    fn one_point_gives_the_fan() {
        for fan in TropFan::all(3) {
            let m = build_pi(&fan, 1).unwrap();
            assert!(m.pi.structurally_equal(&fan.to_complex()));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let e = build_pi_with_budget(&TropFan::full(3), 3, 100).unwrap_err();
        assert_eq!(e, GridError::SizeLimit { count: 17576, budget: 100 });
    }
}
