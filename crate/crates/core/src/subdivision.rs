//! Deciding whether a map of cone complexes is a subdivision.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::complex::{ComplexMap, ConeComplex};
use crate::error::CoreError;
use crate::rat::{primitive, to_rat_vec, IntVec, Rat, RatVec};
use crate::ratmat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// Matrices of a cell and one of its faces disagree on the face.
    Incompatible,
    /// The map drops dimension on the cell.
    NotInjective,
    /// The image leaves the designated target cell.
    OutsideTarget,
    /// A coarse cell is not covered.
    Gap,
    /// Two fine cells overlap in their images.
    Overlap,
    /// An interior wall of the fine cells over a coarse cell is not matched.
    UnpairedWall,
    /// A lower-dimensional fine cell sits in the interior of a coarse cell
    /// without bounding a top-dimensional one.
    Stray,
    /// Image of the cell lattice differs from the coarse lattice on the span.
    Lattice,
    /// Image of a lattice point is not integral.
    NonIntegral,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub fine_cell: Option<usize>,
    pub coarse_cell: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SubdivisionCertificate {
    pub support_bijective: bool,
    pub lattice_bijective: bool,
    /// For each fine cell, the smallest coarse cell containing its image.
    pub carriers: Vec<usize>,
    pub violations: Vec<Violation>,
}

impl SubdivisionCertificate {
    pub fn holds(&self) -> bool {
        self.support_bijective && self.lattice_bijective
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

fn image_rays(fine: &ConeComplex, f: &ComplexMap, c: usize) -> Result<Vec<RatVec>, CoreError> {
    let m = f.matrix(c)?;
    Ok(fine.ray_vectors(c).iter().map(|r| ratmat::mat_vec(m, &to_rat_vec(r))).collect())
}

fn sum(vs: &[IntVec], d: usize) -> IntVec {
    let mut s: IntVec = vec![Zero::zero(); d];
    for v in vs {
        for (a, b) in s.iter_mut().zip(v) {
            *a += b;
        }
    }
    s
}

/// Row basis of the span of `vs`.
fn span_basis(vs: &[RatVec], d: usize) -> Vec<RatVec> {
    let mut m = vs.to_vec();
    let k = ratmat::rref(&mut m, d).len();
    m.truncate(k);
    m
}

/// Coefficient of `x` when writing `y ≡ λ·x` modulo `span(wall)`.
fn side_ratio(wall: &[RatVec], x: &RatVec, y: &RatVec, d: usize) -> Option<Rat> {
    let mut b = vec![x.clone()];
    b.extend(span_basis(wall, d));
    ratmat::solve_left(&b, y).map(|c| c[0].clone())
}

/// Decides whether `f: fine → coarse` is a subdivision: a bijection of
/// supports that restricts on each fine cell to a lattice isomorphism onto
/// the coarse lattice points of its image.
///
/// Support bijectivity is certified cell by cell: every fine cell maps
/// injectively into its target; over every coarse cell the full-dimensional
/// fine cells pair up across interior walls, cover one chosen interior point
/// exactly once, and account for every lower-dimensional fine cell mapping
/// into that coarse cell's interior.
pub fn is_subdivision(fine: &ConeComplex, coarse: &ConeComplex, f: &ComplexMap) -> Result<SubdivisionCertificate, CoreError> {
    let d = coarse.dim();
    let mut cert = SubdivisionCertificate { support_bijective: true, lattice_bijective: true, ..Default::default() };
    let viol = |cert: &mut SubdivisionCertificate, kind, fine_cell, coarse_cell| {
        match kind {
            ViolationKind::Lattice | ViolationKind::NonIntegral => cert.lattice_bijective = false,
            _ => cert.support_bijective = false,
        }
        cert.violations.push(Violation { kind, fine_cell, coarse_cell });
    };

    let mut images: Vec<Vec<IntVec>> = Vec::with_capacity(fine.len());
    let mut raw: Vec<Vec<RatVec>> = Vec::with_capacity(fine.len());
    for c in 0..fine.len() {
        let img = image_rays(fine, f, c)?;
        if img.iter().any(|v| v.len() != d) {
            return Err(CoreError::DimensionMismatch { expected: d, found: img.first().map_or(0, |v| v.len()) });
        }
        images.push(img.iter().map(|v| primitive(v)).collect());
        raw.push(img);
    }

    // compatibility on faces, injectivity, containment, carriers
    cert.carriers = vec![usize::MAX; fine.len()];
    for c in 0..fine.len() {
        for a in fine.facets_of(c) {
            let on_face: Vec<RatVec> = {
                let m = f.matrix(c)?;
                fine.ray_vectors(a).iter().map(|r| ratmat::mat_vec(m, &to_rat_vec(r))).collect()
            };
            if on_face != raw[a] {
                viol(&mut cert, ViolationKind::Incompatible, Some(c), None);
            }
        }
        if ratmat::rank(&raw[c], d) != fine.cells[c].dim {
            viol(&mut cert, ViolationKind::NotInjective, Some(c), None);
            continue;
        }
        let t = *f.targets.get(c).ok_or(CoreError::MapUndefined(c))?;
        if t >= coarse.len() {
            return Err(CoreError::NotACell(t));
        }
        if !images[c].iter().all(|v| coarse.contains(t, v)) {
            viol(&mut cert, ViolationKind::OutsideTarget, Some(c), Some(t));
            continue;
        }
        let bary = sum(&images[c], d);
        let carrier = coarse
            .faces_of(t)
            .into_iter()
            .filter(|&g| coarse.contains(g, &bary))
            .min_by_key(|&g| coarse.cells[g].dim)
            .expect("target contains the image");
        cert.carriers[c] = carrier;
    }
    if !cert.support_bijective {
        return Ok(cert);
    }

    // tiling of each coarse cell by the fine cells over it
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); coarse.len()];
    for c in 0..fine.len() {
        over[cert.carriers[c]].push(c);
    }
    for (g, cells) in over.iter().enumerate() {
        let gd = coarse.cells[g].dim;
        let top: Vec<usize> = cells.iter().copied().filter(|&c| fine.cells[c].dim == gd).collect();
        if top.is_empty() {
            viol(&mut cert, ViolationKind::Gap, None, Some(g));
            continue;
        }
        for &c in cells {
            if fine.cells[c].dim < gd && !top.iter().any(|&t| fine.is_face(c, t)) {
                viol(&mut cert, ViolationKind::Stray, Some(c), Some(g));
            }
        }
        // one interior point covered once
        let probe = sum(&images[top[0]], d);
        let hits = top.iter().filter(|&&t| fine_image_contains(&images[t], &probe, d)).count();
        if hits != 1 {
            viol(&mut cert, ViolationKind::Overlap, Some(top[0]), Some(g));
        }
        // interior walls are shared by exactly two cells on opposite sides
        for &c in &top {
            for w in fine.facets_of(c) {
                if cert.carriers[w] != g {
                    continue;
                }
                let sharing: Vec<usize> = fine
                    .cofaces(w)
                    .into_iter()
                    .filter(|&t| fine.cells[t].dim == gd && cert.carriers[t] == g)
                    .collect();
                let ok = sharing.len() == 2 && {
                    let other = if sharing[0] == c { sharing[1] } else { sharing[0] };
                    let outside = |t: usize| {
                        let wall_rays = &fine.cells[w].rays;
                        let k = fine.cells[t].rays.iter().position(|r| !wall_rays.contains(r)).unwrap();
                        raw[t][k].clone()
                    };
                    side_ratio(&raw[w], &outside(c), &outside(other), d).is_some_and(|l| l.is_negative())
                };
                if !ok {
                    viol(&mut cert, ViolationKind::UnpairedWall, Some(w), Some(g));
                }
            }
        }
    }

    // lattices
    for c in 0..fine.len() {
        let m = f.matrix(c)?;
        let img = match fine.cell_lattice(c).image_rat(m, d) {
            Ok(l) => l,
            Err(_) => {
                viol(&mut cert, ViolationKind::NonIntegral, Some(c), None);
                continue;
            }
        };
        let g = cert.carriers[c];
        let expect = coarse.cell_lattice(g).intersect_span(&images[c]);
        if img != expect {
            viol(&mut cert, ViolationKind::Lattice, Some(c), Some(g));
        }
    }
    Ok(cert)
}

/// Whether `p` lies in the cone spanned by `gens` (exact).
pub fn fine_image_contains(gens: &[IntVec], p: &IntVec, d: usize) -> bool {
    crate::cone::hrep(d, gens).contains(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexBuilder;
    use crate::lattice::IntLattice;
    use crate::rat::int_vec;

    fn ray(lattice: IntLattice) -> ConeComplex {
        let mut b = ComplexBuilder::new(IntLattice::standard(1));
        b.add_cell(&[], "0".into());
        b.add_cell_with(&[int_vec(&[1])], "r".into(), Some(lattice));
        b.build()
    }

    fn quadrant(split: bool) -> ConeComplex {
        let mut b = ComplexBuilder::new(IntLattice::standard(2));
        let (x, y, m) = (int_vec(&[1, 0]), int_vec(&[0, 1]), int_vec(&[1, 1]));
        b.add_cell(&[], "0".into());
        b.add_cell(std::slice::from_ref(&x), "x".into());
        b.add_cell(std::slice::from_ref(&y), "y".into());
        if split {
            b.add_cell(std::slice::from_ref(&m), "m".into());
            b.add_cell(&[x.clone(), m.clone()], "xm".into());
            b.add_cell(&[m, y], "my".into());
        } else {
            b.add_cell(&[x, y], "xy".into());
        }
        b.build()
    }

    fn id_map(fine: &ConeComplex, coarse: &ConeComplex) -> ComplexMap {
        ComplexMap::identity(fine, coarse).unwrap()
    }

    #[test]
    fn identity_is_subdivision() {
        let r = ray(IntLattice::standard(1));
        assert!(is_subdivision(&r, &r, &id_map(&r, &r)).unwrap().holds());
        let q = quadrant(false);
        assert!(is_subdivision(&q, &q, &id_map(&q, &q)).unwrap().holds());
    }

    #[test]
    fn elementary_split() {
        let (fine, coarse) = (quadrant(true), quadrant(false));
        assert!(is_subdivision(&fine, &coarse, &id_map(&fine, &coarse)).unwrap().holds());
    }

    #[test]
    fn missing_half_is_a_gap() {
        let mut b = ComplexBuilder::new(IntLattice::standard(2));
        b.add_cell(&[], "0".into());
        for g in [[1, 0], [1, 1]] {
            b.add_cell(&[int_vec(&g)], "r".into());
        }
        b.add_cell(&[int_vec(&[1, 0]), int_vec(&[1, 1])], "xm".into());
        b.add_cell(&[int_vec(&[0, 1])], "y".into());
        let fine = b.build();
        let coarse = quadrant(false);
        let cert = is_subdivision(&fine, &coarse, &id_map(&fine, &coarse)).unwrap();
        assert!(!cert.support_bijective);
    }

    #[test]
    fn even_lattice_fails_lattice_condition() {
        let two = IntLattice::from_generators(1, &[int_vec(&[2])]);
        let fine = ray(two);
        let coarse = ray(IntLattice::standard(1));
        let cert = is_subdivision(&fine, &coarse, &id_map(&fine, &coarse)).unwrap();
        assert!(cert.support_bijective);
        assert!(!cert.lattice_bijective);
        let v = cert.first_violation().unwrap();
        assert_eq!((v.kind.clone(), v.fine_cell), (ViolationKind::Lattice, Some(1)));
    }

    #[test]
    fn missing_matrix_is_an_error() {
        let r = ray(IntLattice::standard(1));
        let f = ComplexMap::new(vec![None, None], vec![0, 1]);
        assert_eq!(is_subdivision(&r, &r, &f).unwrap_err(), CoreError::MapUndefined(0));
    }
}
