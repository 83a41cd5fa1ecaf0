//! Embedded cone complexes and maps between them.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::cone::{self, Cone, ConeHRep};
use crate::error::CoreError;
use crate::lattice::IntLattice;
use crate::rat::{is_zero_vec, primitive_int, IntVec, RatVec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    /// Sorted indices into the complex's ray table.
    pub rays: Vec<usize>,
    pub dim: usize,
    pub label: String,
    /// Explicit lattice; `None` means the ambient lattice restricted to the span.
    pub lattice: Option<IntLattice>,
}

/// A finite set of pointed cones in a common lattice, each given by its rays.
#[derive(Debug)]
pub struct ConeComplex {
    pub ambient: IntLattice,
    pub rays: Vec<IntVec>,
    pub cells: Vec<Cell>,
    index: HashMap<Vec<usize>, usize>,
    hreps: OnceLock<Vec<OnceLock<ConeHRep>>>,
    lattices: OnceLock<Vec<OnceLock<IntLattice>>>,
    incidence: OnceLock<Vec<Vec<usize>>>,
}

impl Clone for ConeComplex {
    fn clone(&self) -> Self {
        ConeComplex::from_parts(self.ambient.clone(), self.rays.clone(), self.cells.clone())
    }
}

impl ConeComplex {
    pub fn from_parts(ambient: IntLattice, rays: Vec<IntVec>, cells: Vec<Cell>) -> Self {
        let index = cells.iter().enumerate().map(|(i, c)| (c.rays.clone(), i)).collect();
        ConeComplex { ambient, rays, cells, index, hreps: OnceLock::new(), lattices: OnceLock::new(), incidence: OnceLock::new() }
    }

    pub fn dim(&self) -> usize {
        self.ambient.ambient()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_by_rays(&self, rays: &[usize]) -> Option<usize> {
        self.index.get(rays).copied()
    }

    pub fn ray_vectors(&self, cell: usize) -> Vec<IntVec> {
        self.cells[cell].rays.iter().map(|&r| self.rays[r].clone()).collect()
    }

    pub fn ray_id(&self, v: &[BigInt]) -> Option<usize> {
        let p = primitive_int(v);
        self.rays.iter().position(|r| *r == p)
    }

    /// Looks up a cell by the directions of its rays.
    pub fn cell_by_vectors(&self, gens: &[IntVec]) -> Option<usize> {
        let mut ids = Vec::with_capacity(gens.len());
        for g in gens {
            ids.push(self.ray_id(g)?);
        }
        ids.sort();
        ids.dedup();
        self.cell_by_rays(&ids)
    }

    pub fn cell_lattice(&self, cell: usize) -> IntLattice {
        let slots = self.lattices.get_or_init(|| (0..self.cells.len()).map(|_| OnceLock::new()).collect());
        slots[cell]
            .get_or_init(|| match &self.cells[cell].lattice {
                Some(l) => l.clone(),
                None => self.ambient.intersect_span(&self.ray_vectors(cell)),
            })
            .clone()
    }

    pub fn cone(&self, cell: usize) -> Cone {
        Cone::with_lattice(self.cell_lattice(cell), &self.ray_vectors(cell))
    }

    pub fn cell_hrep(&self, cell: usize) -> &ConeHRep {
        let slots = self.hreps.get_or_init(|| (0..self.cells.len()).map(|_| OnceLock::new()).collect());
        slots[cell].get_or_init(|| cone::hrep(self.dim(), &self.ray_vectors(cell)))
    }

    pub fn contains(&self, cell: usize, x: &[BigInt]) -> bool {
        self.cell_hrep(cell).contains(x)
    }

    /// `a` is a face of `b` (ray-set inclusion; valid inside a complex).
    pub fn is_face(&self, a: usize, b: usize) -> bool {
        let rb = &self.cells[b].rays;
        self.cells[a].rays.iter().all(|r| rb.binary_search(r).is_ok())
    }

    fn ray_cells(&self) -> &Vec<Vec<usize>> {
        self.incidence.get_or_init(|| {
            let mut inc = vec![Vec::new(); self.rays.len()];
            for (i, c) in self.cells.iter().enumerate() {
                for &r in &c.rays {
                    inc[r].push(i);
                }
            }
            inc
        })
    }

    /// Cells having `a` as a face, `a` included.
    pub fn cofaces(&self, a: usize) -> Vec<usize> {
        let rays = &self.cells[a].rays;
        if rays.is_empty() {
            return (0..self.cells.len()).collect();
        }
        let inc = self.ray_cells();
        let shortest = rays.iter().min_by_key(|&&r| inc[r].len()).unwrap();
        inc[*shortest].iter().copied().filter(|&b| self.is_face(a, b)).collect()
    }

    /// Faces of `b` of dimension one less.
    pub fn facets_of(&self, b: usize) -> Vec<usize> {
        let k = self.cells[b].dim;
        if k == 0 {
            return Vec::new();
        }
        if k == 1 {
            return self.cell_by_rays(&[]).into_iter().collect();
        }
        let inc = self.ray_cells();
        let mut out: Vec<usize> = self.cells[b]
            .rays
            .iter()
            .flat_map(|&r| inc[r].iter().copied())
            .filter(|&a| self.cells[a].dim + 1 == k && self.is_face(a, b))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// All pairs `(face, cell)` with `face ⊊ cell`.
    pub fn face_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.cells.len() {
            for b in self.cofaces(a) {
                if b != a {
                    out.push((a, b));
                }
            }
        }
        out.sort();
        out
    }

    /// Covering pairs of the face poset (dimension drops by one).
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.cells.len())
            .flat_map(|b| self.facets_of(b).into_iter().map(move |a| (a, b)))
            .collect();
        out.sort();
        out
    }

    pub fn faces_of(&self, cell: usize) -> Vec<usize> {
        let gens = &self.cells[cell].rays;
        let vecs = self.ray_vectors(cell);
        let mut out: Vec<usize> = face_ray_sets(self.dim(), &vecs)
            .into_iter()
            .filter_map(|f| {
                let ids: Vec<usize> = f.iter().map(|&k| gens[k]).collect();
                self.cell_by_rays(&ids)
            })
            .collect();
        if let Some(o) = self.cell_by_rays(&[]) {
            out.push(o);
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn maximal_cells(&self) -> Vec<usize> {
        (0..self.cells.len()).filter(|&b| self.cofaces(b).len() == 1).collect()
    }

    pub fn count_by_dim(&self) -> Vec<usize> {
        let top = self.cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut v = vec![0; top + 1];
        for c in &self.cells {
            v[c.dim] += 1;
        }
        v
    }

    /// Cells as sets of ray vectors; two complexes are structurally equal when
    /// these sets and the ambient lattices agree.
    pub fn canonical(&self) -> BTreeSet<Vec<IntVec>> {
        self.cells
            .iter()
            .map(|c| {
                let mut v: Vec<IntVec> = c.rays.iter().map(|&r| self.rays[r].clone()).collect();
                v.sort();
                v
            })
            .collect()
    }

    pub fn structurally_equal(&self, other: &ConeComplex) -> bool {
        self.ambient == other.ambient && self.canonical() == other.canonical()
    }

    /// Checks closure under faces and that pairwise intersections are common
    /// faces. Exhaustive; meant for test-sized complexes.
    pub fn validate(&self) -> Result<(), String> {
        let d = self.dim();
        for (i, c) in self.cells.iter().enumerate() {
            let gens = self.ray_vectors(i);
            if cone::rank(&gens, d) != c.dim {
                return Err(format!("cell {i}: stored dim {} disagrees with rank", c.dim));
            }
            if cone::extreme_rays(d, &gens).len() != gens.len() {
                return Err(format!("cell {i}: rays are not all extreme"));
            }
            for f in face_ray_sets(d, &gens) {
                let ids: Vec<usize> = f.iter().map(|&k| c.rays[k]).collect();
                if self.cell_by_rays(&ids).is_none() {
                    return Err(format!("cell {i}: face with rays {ids:?} missing"));
                }
            }
        }
        for a in 0..self.cells.len() {
            for b in a + 1..self.cells.len() {
                let ha = self.cell_hrep(a);
                let hb = self.cell_hrep(b);
                let mut ineqs = ha.facets.clone();
                ineqs.extend(hb.facets.iter().cloned());
                let mut eqs = ha.eqs.clone();
                eqs.extend(hb.eqs.iter().cloned());
                let inter = crate::dd::cone_dd(d, &ineqs, &eqs);
                if !inter.lines.is_empty() {
                    return Err(format!("cells {a},{b}: intersection not pointed"));
                }
                let mut ids = Vec::new();
                for r in &inter.rays {
                    match self.ray_id(r) {
                        Some(id) => ids.push(id),
                        None => return Err(format!("cells {a},{b}: intersection has a new ray")),
                    }
                }
                ids.sort();
                let common: Vec<usize> = self.cells[a]
                    .rays
                    .iter()
                    .filter(|r| self.cells[b].rays.contains(r))
                    .copied()
                    .collect();
                if ids != common {
                    return Err(format!("cells {a},{b}: intersection is not a common face"));
                }
            }
        }
        Ok(())
    }

    /// Product complex in the direct sum of the ambient lattices.
    pub fn product(&self, other: &ConeComplex) -> ConeComplex {
        let (d1, d2) = (self.dim(), other.dim());
        let mut b = ComplexBuilder::new(direct_sum(&self.ambient, &other.ambient));
        let pad = |v: &IntVec, left: bool| -> IntVec {
            let mut out = vec![BigInt::from(0); d1 + d2];
            let off = if left { 0 } else { d1 };
            for (i, x) in v.iter().enumerate() {
                out[off + i] = x.clone();
            }
            out
        };
        let explicit = self.cells.iter().any(|c| c.lattice.is_some()) || other.cells.iter().any(|c| c.lattice.is_some());
        for (i, c1) in self.cells.iter().enumerate() {
            for (j, c2) in other.cells.iter().enumerate() {
                let mut gens: Vec<IntVec> = c1.rays.iter().map(|&r| pad(&self.rays[r], true)).collect();
                gens.extend(c2.rays.iter().map(|&r| pad(&other.rays[r], false)));
                let label = format!("{}|{}", c1.label, c2.label);
                let lattice = explicit.then(|| direct_sum(&self.cell_lattice(i), &other.cell_lattice(j)));
                b.add_cell_with(&gens, label, lattice);
            }
        }
        b.build()
    }
}

pub fn direct_sum(a: &IntLattice, b: &IntLattice) -> IntLattice {
    let (d1, d2) = (a.ambient(), b.ambient());
    let mut gens = Vec::new();
    for r in a.basis() {
        let mut v = r.clone();
        v.extend((0..d2).map(|_| BigInt::from(0)));
        gens.push(v);
    }
    for r in b.basis() {
        let mut v: IntVec = (0..d1).map(|_| BigInt::from(0)).collect();
        v.extend(r.iter().cloned());
        gens.push(v);
    }
    IntLattice::from_generators(d1 + d2, &gens)
}

/// Ray subsets (as indices into `gens`) spanning the proper nonempty faces
/// and the cone itself.
pub fn face_ray_sets(dim: usize, gens: &[IntVec]) -> Vec<Vec<usize>> {
    let h = cone::hrep(dim, gens);
    let n = gens.len();
    let tight: Vec<Vec<usize>> = h
        .facets
        .iter()
        .map(|f| (0..n).filter(|&i| crate::rat::dot(f, &gens[i]) == BigInt::from(0)).collect())
        .collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let all: Vec<usize> = (0..n).collect();
    let mut stack = vec![all.clone()];
    seen.insert(all);
    while let Some(f) = stack.pop() {
        for t in &tight {
            let g: Vec<usize> = f.iter().filter(|i| t.contains(i)).copied().collect();
            if seen.insert(g.clone()) {
                stack.push(g);
            }
        }
    }
    seen.into_iter().collect()
}

/// Incremental construction with ray deduplication.
pub struct ComplexBuilder {
    ambient: IntLattice,
    rays: Vec<IntVec>,
    ray_index: HashMap<IntVec, usize>,
    cells: Vec<Cell>,
    cell_index: HashMap<Vec<usize>, usize>,
}

impl ComplexBuilder {
    pub fn new(ambient: IntLattice) -> Self {
        ComplexBuilder { ambient, rays: Vec::new(), ray_index: HashMap::new(), cells: Vec::new(), cell_index: HashMap::new() }
    }

    pub fn add_ray(&mut self, v: &[BigInt]) -> usize {
        let p = primitive_int(v);
        if let Some(&i) = self.ray_index.get(&p) {
            return i;
        }
        self.rays.push(p.clone());
        self.ray_index.insert(p, self.rays.len() - 1);
        self.rays.len() - 1
    }

    /// Adds the cell spanned by the given extreme rays; returns its index.
    /// Adding an existing ray set returns the existing cell.
    pub fn add_cell(&mut self, gens: &[IntVec], label: String) -> usize {
        self.add_cell_with(gens, label, None)
    }

    pub fn add_cell_with(&mut self, gens: &[IntVec], label: String, lattice: Option<IntLattice>) -> usize {
        let mut ids: Vec<usize> = gens.iter().filter(|g| !is_zero_vec(g)).map(|g| self.add_ray(g)).collect();
        ids.sort();
        ids.dedup();
        if let Some(&i) = self.cell_index.get(&ids) {
            return i;
        }
        let vecs: Vec<IntVec> = ids.iter().map(|&i| self.rays[i].clone()).collect();
        let dim = cone::rank(&vecs, self.ambient.ambient());
        self.cells.push(Cell { rays: ids.clone(), dim, label, lattice });
        self.cell_index.insert(ids, self.cells.len() - 1);
        self.cells.len() - 1
    }

    pub fn build(self) -> ConeComplex {
        ConeComplex::from_parts(self.ambient, self.rays, self.cells)
    }
}

/// Per-cell linear maps from a source complex into a target complex.
/// `matrices[c]` has one row per target coordinate; `targets[c]` names a
/// target cell containing the image of source cell `c`.
#[derive(Clone, Debug)]
pub struct ComplexMap {
    pub matrices: Vec<Option<Vec<RatVec>>>,
    pub targets: Vec<usize>,
}

impl ComplexMap {
    pub fn new(matrices: Vec<Option<Vec<RatVec>>>, targets: Vec<usize>) -> Self {
        ComplexMap { matrices, targets }
    }

    pub fn matrix(&self, cell: usize) -> Result<&Vec<RatVec>, CoreError> {
        self.matrices.get(cell).and_then(|m| m.as_ref()).ok_or(CoreError::MapUndefined(cell))
    }

    /// The same matrix on every cell, with designated targets found by `locate`.
    pub fn uniform(source: &ConeComplex, m: Vec<RatVec>, locate: impl Fn(&[IntVec]) -> usize) -> Self {
        let mut targets = Vec::new();
        for c in 0..source.len() {
            let imgs: Vec<IntVec> = source.ray_vectors(c).iter().map(|r| apply_int(&m, r)).collect();
            targets.push(locate(&imgs));
        }
        ComplexMap { matrices: vec![Some(m); source.len()], targets }
    }

    pub fn identity(source: &ConeComplex, target: &ConeComplex) -> Result<Self, CoreError> {
        let d = source.dim();
        if d != target.dim() {
            return Err(CoreError::DimensionMismatch { expected: target.dim(), found: d });
        }
        let id: Vec<RatVec> = crate::ratmat::identity(d);
        let mut targets = Vec::new();
        for c in 0..source.len() {
            let gens = source.ray_vectors(c);
            let t = (0..target.len())
                .filter(|&t| gens.iter().all(|g| target.contains(t, g)))
                .min_by_key(|&t| target.cells[t].dim)
                .ok_or(CoreError::NotACell(c))?;
            targets.push(t);
        }
        Ok(ComplexMap { matrices: vec![Some(id); source.len()], targets })
    }
}

/// Image of an integer vector under a rational matrix, scaled to a primitive
/// integer direction.
pub fn apply_int(m: &[RatVec], v: &[BigInt]) -> IntVec {
    let rv: RatVec = v.iter().map(crate::rat::rat_int).collect();
    crate::rat::primitive(&crate::ratmat::mat_vec(m, &rv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int_vec;

    pub fn orthant(d: usize) -> ConeComplex {
        let mut b = ComplexBuilder::new(IntLattice::standard(d));
        for mask in 0u32..(1 << d) {
            let gens: Vec<IntVec> = (0..d)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (0..d).map(|j| BigInt::from((i == j) as i64)).collect())
                .collect();
            b.add_cell(&gens, format!("{mask}"));
        }
        b.build()
    }

    #[test]
    fn orthant_is_a_complex() {
        let c = orthant(3);
        assert_eq!(c.len(), 8);
        assert!(c.validate().is_ok());
        assert_eq!(c.maximal_cells().len(), 1);
        assert_eq!(c.covering_pairs().len(), 12);
    }

    #[test]
    fn overlapping_cells_rejected() {
        let mut b = ComplexBuilder::new(IntLattice::standard(2));
        b.add_cell(&[], "0".into());
        for g in [[1, 0], [0, 1], [1, 1]] {
            b.add_cell(&[int_vec(&g)], "r".into());
        }
        b.add_cell(&[int_vec(&[1, 0]), int_vec(&[0, 1])], "a".into());
        b.add_cell(&[int_vec(&[1, 0]), int_vec(&[1, 1])], "b".into());
        assert!(b.build().validate().is_err());
    }

    #[test]
    fn product_of_rays() {
        let r = orthant(1);
        let p = r.product(&r);
        assert!(p.structurally_equal(&orthant(2)));
    }
}
