//! Rational polyhedra `{x : a·x ≥ b}` with exact V-representations.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::dd::{cone_dd, BitSet};
use crate::rat::{lcm_denoms, rat_int, rdot, IntVec, Rat, RatVec};
use crate::ratmat;

/// One constraint `a·x ≥ b` (or `a·x = b` when stored as an equation).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub a: RatVec,
    pub b: Rat,
}

impl Halfspace {
    pub fn new(a: RatVec, b: Rat) -> Self {
        Halfspace { a, b }
    }
    pub fn slack(&self, x: &[Rat]) -> Rat {
        rdot(&self.a, x) - &self.b
    }
    /// Homogenized integer row for `(x, s)`: `a·x − b·s`.
    fn homogenized(&self) -> IntVec {
        let mut v: RatVec = self.a.clone();
        v.push(-self.b.clone());
        let l = lcm_denoms(&v);
        v.iter().map(|x| (x * rat_int(&l)).to_integer()).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<RatVec>,
    pub rays: Vec<IntVec>,
    pub lines: Vec<IntVec>,
}

impl VRep {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

#[derive(Debug)]
pub struct Polyhedron {
    dim: usize,
    ineqs: Vec<Halfspace>,
    eqs: Vec<Halfspace>,
    vrep: OnceLock<VRep>,
}

impl Clone for Polyhedron {
    fn clone(&self) -> Self {
        let p = Polyhedron::new(self.dim, self.ineqs.clone(), self.eqs.clone());
        if let Some(v) = self.vrep.get() {
            let _ = p.vrep.set(v.clone());
        }
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Empty,
    Dim(usize),
}

impl Polyhedron {
    pub fn new(dim: usize, ineqs: Vec<Halfspace>, eqs: Vec<Halfspace>) -> Self {
        Polyhedron { dim, ineqs, eqs, vrep: OnceLock::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }
    pub fn inequalities(&self) -> &[Halfspace] {
        &self.ineqs
    }
    pub fn equations(&self) -> &[Halfspace] {
        &self.eqs
    }

    pub fn with_inequality(&self, h: Halfspace) -> Polyhedron {
        let mut ineqs = self.ineqs.clone();
        ineqs.push(h);
        Polyhedron::new(self.dim, ineqs, self.eqs.clone())
    }

    pub fn with_equation(&self, h: Halfspace) -> Polyhedron {
        let mut eqs = self.eqs.clone();
        eqs.push(h);
        Polyhedron::new(self.dim, self.ineqs.clone(), eqs)
    }

    /// Exact V-representation, computed once.
    pub fn vrep(&self) -> &VRep {
        self.vrep.get_or_init(|| {
            let d = self.dim;
            let mut ineqs: Vec<IntVec> = self.ineqs.iter().map(|h| h.homogenized()).collect();
            let mut s = vec![BigInt::zero(); d + 1];
            s[d] = BigInt::from(1);
            ineqs.push(s);
            let eqs: Vec<IntVec> = self.eqs.iter().map(|h| h.homogenized()).collect();
            let res = cone_dd(d + 1, &ineqs, &eqs);
            let mut out = VRep::default();
            for r in res.rays {
                if r[d].is_zero() {
                    out.rays.push(r[..d].to_vec());
                } else {
                    let s = rat_int(&r[d]);
                    out.vertices.push(r[..d].iter().map(|x| rat_int(x) / &s).collect());
                }
            }
            if out.vertices.is_empty() {
                return VRep::default();
            }
            out.lines = res.lines.into_iter().map(|l| l[..d].to_vec()).collect();
            out.vertices.sort();
            out.rays.sort();
            out
        })
    }

    pub fn is_empty(&self) -> bool {
        self.vrep().is_empty()
    }

    pub fn dimension(&self) -> Dimension {
        let v = self.vrep();
        if v.is_empty() {
            return Dimension::Empty;
        }
        let base = &v.vertices[0];
        let mut rows: Vec<RatVec> = v.vertices[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        rows.extend(v.rays.iter().chain(&v.lines).map(|r| r.iter().map(rat_int).collect()));
        Dimension::Dim(ratmat::rank(&rows, self.dim))
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.ineqs.iter().all(|h| !h.slack(x).is_negative())
            && self.eqs.iter().all(|h| h.slack(x).is_zero())
    }

    /// Average of the vertices plus the sum of the rays: a relative-interior point.
    pub fn relint_point(&self) -> Option<RatVec> {
        let v = self.vrep();
        if v.is_empty() {
            return None;
        }
        let k = Rat::from_integer(BigInt::from(v.vertices.len()));
        let mut p: RatVec = vec![Rat::zero(); self.dim];
        for x in &v.vertices {
            for (a, b) in p.iter_mut().zip(x) {
                *a += b;
            }
        }
        for a in p.iter_mut() {
            *a = &*a / &k;
        }
        for r in &v.rays {
            for (a, b) in p.iter_mut().zip(r) {
                *a += rat_int(b);
            }
        }
        Some(p)
    }

    /// Faces of a bounded polyhedron, each as a sorted list of indices into
    /// `vrep().vertices`. Includes the polyhedron itself, excludes the empty face.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let v = self.vrep();
        let nv = v.vertices.len();
        if nv == 0 {
            return Vec::new();
        }
        let facets: Vec<BitSet> = self
            .ineqs
            .iter()
            .map(|h| {
                let mut b = BitSet::new(nv);
                for (i, x) in v.vertices.iter().enumerate() {
                    if h.slack(x).is_zero() {
                        b.insert(i);
                    }
                }
                b
            })
            .collect();
        let mut full = BitSet::new(nv);
        for i in 0..nv {
            full.insert(i);
        }
        let mut seen: HashMap<BitSet, ()> = HashMap::new();
        let mut stack = vec![full.clone()];
        seen.insert(full, ());
        let mut out = Vec::new();
        while let Some(f) = stack.pop() {
            out.push(f.iter().collect::<Vec<_>>());
            for fac in &facets {
                let g = f.and(fac);
                if g.count() > 0 && !seen.contains_key(&g) {
                    seen.insert(g.clone(), ());
                    stack.push(g);
                }
            }
        }
        out.sort();
        out
    }
}

/// A cell of a hyperplane arrangement restricted to a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementCell {
    /// Sorted indices into the global vertex table.
    pub vertices: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Arrangement {
    pub vertices: Vec<RatVec>,
    pub cells: Vec<ArrangementCell>,
}

/// All cells of the subdivision of the polytope `p` cut out by the hyperplanes
/// `a·x = b`: the faces of the closed chambers.
pub fn arrangement_cells(p: &Polyhedron, hyperplanes: &[Halfspace]) -> Arrangement {
    let full_dim = match p.dimension() {
        Dimension::Empty => return Arrangement::default(),
        Dimension::Dim(k) => k,
    };
    let mut chambers = vec![p.clone()];
    for h in hyperplanes {
        let mut next = Vec::with_capacity(chambers.len());
        for c in chambers {
            let vals: Vec<Rat> = c.vrep().vertices.iter().map(|x| h.slack(x)).collect();
            let pos = vals.iter().any(|v| v.is_positive());
            let neg = vals.iter().any(|v| v.is_negative());
            if pos && neg {
                let up = c.with_inequality(h.clone());
                let down = c.with_inequality(Halfspace::new(
                    h.a.iter().map(|x| -x).collect(),
                    -h.b.clone(),
                ));
                for piece in [up, down] {
                    if piece.dimension() == Dimension::Dim(full_dim) {
                        next.push(piece);
                    }
                }
            } else {
                next.push(c);
            }
        }
        chambers = next;
    }
    let mut out = Arrangement::default();
    let mut vindex: HashMap<RatVec, usize> = HashMap::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    for c in &chambers {
        let local: Vec<usize> = c
            .vrep()
            .vertices
            .iter()
            .map(|x| {
                *vindex.entry(x.clone()).or_insert_with(|| {
                    out.vertices.push(x.clone());
                    out.vertices.len() - 1
                })
            })
            .collect();
        for f in c.faces() {
            let mut ids: Vec<usize> = f.iter().map(|&i| local[i]).collect();
            ids.sort();
            if seen.insert(ids.clone()) {
                let base = &out.vertices[ids[0]];
                let rows: Vec<RatVec> = ids[1..]
                    .iter()
                    .map(|&i| out.vertices[i].iter().zip(base).map(|(a, b)| a - b).collect())
                    .collect();
                let dim = ratmat::rank(&rows, p.ambient_dim());
                out.cells.push(ArrangementCell { vertices: ids, dim });
            }
        }
    }
    out.cells.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn hs(a: &[i64], b: i64) -> Halfspace {
        Halfspace::new(a.iter().map(|&x| rat(x, 1)).collect(), rat(b, 1))
    }

    #[test]
    fn square_and_infeasible() {
        let sq = Polyhedron::new(2, vec![hs(&[1, 0], 0), hs(&[0, 1], 0), hs(&[-1, 0], -1), hs(&[0, -1], -1)], vec![]);
        assert_eq!(sq.vrep().vertices.len(), 4);
        assert!(sq.vrep().rays.is_empty());
        assert_eq!(sq.dimension(), Dimension::Dim(2));
        assert_eq!(sq.faces().len(), 9);
        let bad = Polyhedron::new(1, vec![hs(&[1], 1), hs(&[-1], 0)], vec![]);
        assert!(bad.is_empty());
        assert_eq!(bad.dimension(), Dimension::Empty);
    }

    #[test]
    fn simplex_vertices() {
        let d = Polyhedron::new(3, vec![hs(&[1, 0, 0], 0), hs(&[0, 1, 0], 0), hs(&[0, 0, 1], 0)], vec![hs(&[1, 1, 1], 1)]);
        assert_eq!(d.vrep().vertices.len(), 3);
        assert_eq!(d.dimension(), Dimension::Dim(2));
        let pt = Polyhedron::new(1, vec![hs(&[1], 2), hs(&[-1], -2)], vec![]);
        assert_eq!(pt.dimension(), Dimension::Dim(0));
    }

    #[test]
    fn unbounded() {
        let q = Polyhedron::new(2, vec![hs(&[1, 0], 1), hs(&[0, 1], 0)], vec![]);
        let v = q.vrep();
        assert_eq!(v.vertices, vec![vec![rat(1, 1), rat(0, 1)]]);
        assert_eq!(v.rays.len(), 2);
    }

    #[test]
    fn square_cut_by_diagonal() {
        let sq = Polyhedron::new(2, vec![hs(&[1, 0], 0), hs(&[0, 1], 0), hs(&[-1, 0], -1), hs(&[0, -1], -1)], vec![]);
        let arr = arrangement_cells(&sq, &[hs(&[1, -1], 0)]);
        let by_dim = |k| arr.cells.iter().filter(|c| c.dim == k).count();
        assert_eq!((by_dim(0), by_dim(1), by_dim(2)), (4, 5, 2));
    }
}
