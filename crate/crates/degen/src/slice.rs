//! The height-`t` slice `Δ_t` of the orthant and the subdivisions cut out by
//! marked points.

use num_traits::{One, Zero};
use serde::Serialize;
use tropfm_core::rat::fmt_rat;
use tropfm_core::{arrangement_cells, Halfspace, Polyhedron, Rat, RatVec};

use crate::error::DegenError;
use crate::wire;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Slice {
    pub r: usize,
}

impl Slice {
    pub fn new(r: usize) -> Result<Self, DegenError> {
        if r < 2 {
            return Err(DegenError::BadShape { r, n: 1 });
        }
        Ok(Slice { r })
    }

    /// `{x ≥ 0 : Σ x_j = t}`.
    pub fn polytope(&self, t: &Rat) -> Polyhedron {
        let r = self.r;
        let ineqs = (0..r).map(|j| Halfspace::new(unit(r, j), Rat::zero())).collect();
        Polyhedron::new(r, ineqs, vec![Halfspace::new(vec![Rat::one(); r], t.clone())])
    }

    pub fn vertex(&self, j: usize, t: &Rat) -> RatVec {
        let mut v = vec![Rat::zero(); self.r];
        v[j] = t.clone();
        v
    }
}

pub(crate) fn unit(len: usize, k: usize) -> RatVec {
    (0..len).map(|i| if i == k { Rat::one() } else { Rat::zero() }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubdivCell {
    /// Sorted indices into the vertex table.
    pub vertices: Vec<usize>,
    pub dim: usize,
}

/// `Δ_t` cut by the hyperplanes `x_j = u_i^{(j)}`, with each point marked at
/// the vertex where it sits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplexLatticeSubdivision {
    pub r: usize,
    #[serde(serialize_with = "wire::ser_rat")]
    pub t: Rat,
    #[serde(serialize_with = "wire::ser_rat_vecs")]
    pub points: Vec<RatVec>,
    #[serde(serialize_with = "wire::ser_rat_vecs")]
    pub vertices: Vec<RatVec>,
    pub cells: Vec<SubdivCell>,
    /// `marking[i]` is the vertex of point `i + 1`.
    pub marking: Vec<usize>,
}

impl SimplexLatticeSubdivision {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn maximal_cells(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&c| self.cells[c].dim + 1 == self.r).collect()
    }

    pub fn vertex_index(&self, x: &[Rat]) -> Option<usize> {
        self.vertices.iter().position(|v| v.as_slice() == x)
    }

    /// Points `1..=n` marked at vertex `v`.
    pub fn labels_at(&self, v: usize) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.marking[i] == v).map(|i| i + 1).collect()
    }

    pub fn cells_containing_vertex(&self, v: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&c| self.cells[c].vertices.contains(&v)).collect()
    }

    /// Smallest cell whose closure contains `x`.
    pub fn carrier(&self, x: &[Rat]) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (c, cell) in self.cells.iter().enumerate() {
            if best.is_some_and(|b| self.cells[b].dim <= cell.dim) {
                continue;
            }
            if self.cell_polytope(c).contains(x) {
                best = Some(c);
            }
        }
        best
    }

    /// The cell as a polytope: `Δ_t` with `x_j` pinned or bounded by the
    /// thresholds met at its vertices.
    pub fn cell_polytope(&self, c: usize) -> Polyhedron {
        let r = self.r;
        let vs: Vec<&RatVec> = self.cells[c].vertices.iter().map(|&v| &self.vertices[v]).collect();
        let mut ineqs = Vec::new();
        let mut eqs = vec![Halfspace::new(vec![Rat::one(); r], self.t.clone())];
        for j in 0..r {
            let lo = vs.iter().map(|v| v[j].clone()).min().expect("nonempty");
            let hi = vs.iter().map(|v| v[j].clone()).max().expect("nonempty");
            if lo == hi {
                eqs.push(Halfspace::new(unit(r, j), lo));
            } else {
                ineqs.push(Halfspace::new(unit(r, j), lo));
                ineqs.push(Halfspace::new(unit(r, j).iter().map(|x| -x).collect(), -hi));
            }
        }
        Polyhedron::new(r, ineqs, eqs)
    }
}

pub fn simplex_subdiv_from_points(points: &[RatVec], t: &Rat) -> Result<SimplexLatticeSubdivision, DegenError> {
    let r = points.first().map_or(0, |p| p.len());
    let slice = Slice::new(r)?;
    for (i, p) in points.iter().enumerate() {
        let sum: Rat = p.iter().sum();
        if p.len() != r || sum != *t || p.iter().any(|x| *x < Rat::zero()) {
            return Err(DegenError::HeightMismatch { point: i + 1, sum: fmt_rat(&sum), t: fmt_rat(t) });
        }
    }
    let mut hyper: Vec<(usize, Rat)> = points.iter().flat_map(|p| p.iter().cloned().enumerate()).collect();
    hyper.sort();
    hyper.dedup();
    let hs: Vec<Halfspace> = hyper.into_iter().map(|(j, c)| Halfspace::new(unit(r, j), c)).collect();
    let arr = arrangement_cells(&slice.polytope(t), &hs);
    // vertex table in sorted order, cells renumbered
    let mut order: Vec<usize> = (0..arr.vertices.len()).collect();
    order.sort_by(|&a, &b| arr.vertices[b].cmp(&arr.vertices[a]));
    let mut pos = vec![0; order.len()];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let vertices: Vec<RatVec> = order.iter().map(|&v| arr.vertices[v].clone()).collect();
    let mut cells: Vec<SubdivCell> = arr
        .cells
        .iter()
        .map(|c| {
            let mut vs: Vec<usize> = c.vertices.iter().map(|&v| pos[v]).collect();
            vs.sort();
            SubdivCell { vertices: vs, dim: c.dim }
        })
        .collect();
    cells.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    let marking = points
        .iter()
        .map(|p| vertices.iter().position(|v| v == p).expect("marked points are vertices"))
        .collect();
    Ok(SimplexLatticeSubdivision { r, t: t.clone(), points: points.to_vec(), vertices, cells, marking })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropfm_core::rat::rat;

    fn pt(v: &[(i64, i64)]) -> RatVec {
        v.iter().map(|&(a, b)| rat(a, b)).collect()
    }

    #[test]
    fn vertex_point_is_trivial() {
        let s = simplex_subdiv_from_points(&[pt(&[(1, 1), (0, 1), (0, 1)])], &Rat::one()).unwrap();
        assert_eq!(s.vertices.len(), 3);
        assert_eq!(s.maximal_cells().len(), 1);
        assert_eq!(s.vertices[s.marking[0]], pt(&[(1, 1), (0, 1), (0, 1)]));
    }

    #[test]
    fn midpoint_splits_segment() {
        let s = simplex_subdiv_from_points(&[pt(&[(1, 2), (1, 2)])], &Rat::one()).unwrap();
        assert_eq!(s.vertices.len(), 3);
        assert_eq!(s.maximal_cells().len(), 2);
    }

    #[test]
    fn inscribed_triangle() {
        let pts = [pt(&[(1, 2), (1, 2), (0, 1)]), pt(&[(1, 2), (0, 1), (1, 2)]), pt(&[(0, 1), (1, 2), (1, 2)])];
        let s = simplex_subdiv_from_points(&pts, &Rat::one()).unwrap();
        assert_eq!(s.maximal_cells().len(), 4);
        assert_eq!(s.vertices.len(), 6);
        assert_eq!(s.cells.iter().filter(|c| c.dim == 1).count(), 9);
    }

    #[test]
    fn height_is_checked() {
        let e = simplex_subdiv_from_points(&[pt(&[(1, 2), (1, 1)])], &Rat::one()).unwrap_err();
        assert!(matches!(e, DegenError::HeightMismatch { point: 1, .. }));
    }
}
