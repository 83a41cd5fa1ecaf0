//! Forest types over the slice moduli, and the cones of the family over
//! them: a further point `p₀` on the subdivision, on a tree vertex, or on a
//! bounded tree edge. Each such cone should map onto its base cone.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use tropfm_core::cone::extreme_rays;
use tropfm_core::intmat;
use tropfm_core::rat::{is_zero_vec, primitive_int};
use tropfm_core::{ConeComplex, IntVec, Rat, RatVec};
use tropfm_fm::{enumerate_fm_types, fm_cone, ForestBase, PlantedForestType};

use crate::error::DegenError;
use crate::moduli::{at_height_one, DegenModuli};
use crate::wire;

/// A cell of `Π_n(Δ)` or `Π_n⁺(Δ)` as the base of a forest type. For cells
/// of `Π_n⁺(Δ)` the extra point is not among the groups.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SliceBase {
    pub label: String,
    pub cell: usize,
    pub plus: bool,
    pub npts: usize,
    pub dim: usize,
    pub groups: Vec<Vec<usize>>,
    #[serde(serialize_with = "wire::ser_int_vecs")]
    pub gens: Vec<IntVec>,
    pub ambient: usize,
}

impl fmt::Display for SliceBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.plus { "+" } else { "" }, self.label)
    }
}

impl ForestBase for SliceBase {
    fn npts(&self) -> usize {
        self.npts
    }

    fn base_codim(&self) -> usize {
        self.dim
    }

    fn vertex_groups(&self) -> Vec<Vec<usize>> {
        self.groups.clone()
    }

    fn ambient_dim(&self) -> usize {
        self.ambient
    }

    fn cone_generators(&self) -> Vec<IntVec> {
        self.gens.clone()
    }

    fn face(&self, _kept: &[usize]) -> Option<Self> {
        None
    }
}

/// Points `1..` grouped by position, groups ordered by their first point.
fn groups_of(points: &[RatVec]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        match out.iter_mut().find(|g| &points[g[0] - 1] == p) {
            Some(g) => g.push(i + 1),
            None => out.push(vec![i + 1]),
        }
    }
    out
}

fn barycenter_points(c: &ConeComplex, cell: usize, r: usize) -> Vec<RatVec> {
    let rays = c.ray_vectors(cell);
    let k = Rat::from_integer(BigInt::from(rays.len()));
    let mut acc = vec![Rat::zero(); c.dim()];
    for v in &rays {
        for (a, x) in acc.iter_mut().zip(at_height_one(v, r)) {
            *a += x;
        }
    }
    acc.chunks(r).map(|p| p.iter().map(|x| x / &k).collect()).collect()
}

fn base_of(m: &DegenModuli, cell: usize, plus: bool) -> SliceBase {
    let c = if plus { &m.pi_plus } else { &m.pi };
    let mut pts = barycenter_points(c, cell, m.r);
    if plus {
        pts.remove(0);
    }
    SliceBase {
        label: c.cells[cell].label.clone(),
        cell,
        plus,
        npts: m.n,
        dim: c.cells[cell].dim,
        groups: groups_of(&pts),
        gens: c.ray_vectors(cell),
        ambient: c.dim(),
    }
}

/// Cell of `Π_n(Δ)` the cell of `Π_n⁺(Δ)` maps onto, by its image rays.
fn image_cell(m: &DegenModuli, plus_cell: usize) -> Option<usize> {
    let d = m.dim();
    let imgs: Vec<IntVec> = m
        .pi_plus
        .ray_vectors(plus_cell)
        .iter()
        .map(|v| intmat::mat_vec(&m.p, v))
        .filter(|v| !is_zero_vec(v))
        .map(|v| primitive_int(&v))
        .collect();
    m.pi.cell_by_vectors(&imgs).or_else(|| m.pi.cell_by_vectors(&extreme_rays(d, &imgs)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Placement {
    /// `p₀` on the subdivision: a cell of `Π_n⁺(Δ)` over the base cell.
    OnSubdivision { plus_cell: String },
    /// `p₀` on node `node` of the tree keyed by `tree`.
    TreeVertex { tree: usize, node: usize },
    /// `p₀` splits the edge above `node`.
    TreeEdge { tree: usize, node: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlacementCheck {
    pub code: String,
    pub placement: Placement,
    pub source_dim: usize,
    pub target_dim: usize,
    pub surjects: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FmDegenReport {
    pub r: usize,
    pub n: usize,
    pub types: usize,
    /// Checks on the subdivision, on tree vertices and on tree edges.
    pub by_kind: [usize; 3],
    pub failures: Vec<PlacementCheck>,
    pub passed: bool,
}

/// The cone generated by the images of `src` under `map` is the cone
/// generated by `tgt`.
pub fn cone_surjects(src: &[IntVec], map: &[IntVec], tgt: &[IntVec], dim: usize) -> bool {
    let imgs: Vec<IntVec> = src.iter().map(|g| intmat::mat_vec(map, g)).filter(|v| !is_zero_vec(v)).map(|v| primitive_int(&v)).collect();
    let tgt: Vec<IntVec> = tgt.iter().filter(|v| !is_zero_vec(v)).map(|v| primitive_int(v)).collect();
    intmat::rank(&imgs, dim) == intmat::rank(&tgt, dim) && extreme_rays(dim, &imgs) == extreme_rays(dim, &tgt)
}

fn identity(d: usize) -> Vec<IntVec> {
    (0..d).map(|i| (0..d).map(|j| BigInt::from((i == j) as i64)).collect()).collect()
}

/// Every stable forest type over the non-origin cells of `Π_n(Δ)` up to
/// codimension `max_codim`, with every placement of `p₀`.
pub fn fm_degen_flatness(m: &DegenModuli, max_codim: usize, budget: u64) -> Result<FmDegenReport, DegenError> {
    let d = m.dim();
    let bases: Vec<SliceBase> = (0..m.pi.len()).filter(|&c| !m.is_origin(c)).map(|c| base_of(m, c, false)).collect();
    let mut over: HashMap<usize, Vec<usize>> = HashMap::new();
    for c in 0..m.pi_plus.len() {
        if let Some(t) = image_cell(m, c) {
            over.entry(t).or_default().push(c);
        }
    }
    let types = enumerate_fm_types(&bases, max_codim, budget)?;
    let mut checks = Vec::new();
    for f in &types {
        let code = f.code();
        let target = fm_cone(f)?;
        let e = target.edges.len();
        let td = d + e;
        let check = |placement, source_dim, surjects| PlacementCheck { code: code.clone(), placement, source_dim, target_dim: target.dim, surjects };

        for &pc in over.get(&f.base.cell).map_or(&[][..], |v| &v[..]) {
            let pb = base_of(m, pc, true);
            let label = pb.label.clone();
            // the extra point does not move the others, so the groups agree
            let ok = pb.groups == f.base.groups
                && match fm_cone(&PlantedForestType::new(pb, f.trees.clone())?) {
                    Ok(src) => {
                        let mut map: Vec<IntVec> = m.p.iter().map(|row| row.iter().cloned().chain(std::iter::repeat_n(BigInt::zero(), e)).collect()).collect();
                        for i in 0..e {
                            map.push((0..d + m.r + e).map(|k| BigInt::from((k == d + m.r + i) as i64)).collect());
                        }
                        src.edges == target.edges && cone_surjects(&src.generators, &map, &target.generators, td)
                    }
                    Err(_) => false,
                };
            let dim = m.pi_plus.cells[pc].dim + e;
            checks.push(check(Placement::OnSubdivision { plus_cell: label }, dim, ok));
        }

        for (&key, t) in &f.trees {
            for node in 0..t.len() {
                let ok = cone_surjects(&target.generators, &identity(td), &target.generators, td);
                checks.push(check(Placement::TreeVertex { tree: key, node }, target.dim, ok));
            }
        }

        for (i, &(key, node)) in target.edges.iter().enumerate() {
            // e_1 keeps the coordinate of the edge, e_2 is a new last one
            let mut src: Vec<IntVec> = target.generators.iter().map(|g| g.iter().cloned().chain([BigInt::zero()]).collect()).collect();
            let mut e2 = vec![BigInt::zero(); td + 1];
            e2[td] = BigInt::one();
            src.push(e2);
            let mut map: Vec<IntVec> = identity(td).into_iter().map(|mut row| {
                row.push(BigInt::zero());
                row
            }).collect();
            map[d + i][td] = BigInt::one();
            let ok = cone_surjects(&src, &map, &target.generators, td);
            checks.push(check(Placement::TreeEdge { tree: key, node }, target.dim + 1, ok));
        }
    }
    let mut by_kind = [0; 3];
    for c in &checks {
        by_kind[match c.placement {
            Placement::OnSubdivision { .. } => 0,
            Placement::TreeVertex { .. } => 1,
            Placement::TreeEdge { .. } => 2,
        }] += 1;
    }
    let failures: Vec<PlacementCheck> = checks.into_iter().filter(|c| !c.surjects).collect();
    Ok(FmDegenReport { r: m.r, n: m.n, types: types.len(), by_kind, passed: failures.is_empty(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::build_pi_delta;

    #[test]
    fn square_two_points() {
        let m = build_pi_delta(2, 2).unwrap();
        let rep = fm_degen_flatness(&m, 4, 10_000).unwrap();
        assert!(rep.passed, "{:?}", rep.failures);
        assert!(rep.by_kind.iter().all(|&k| k > 0));
    }

    #[test]
    fn sum_of_split_edge() {
        let e = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<IntVec>();
        let map = vec![e(&[1, 1])];
        assert!(cone_surjects(&[e(&[1, 0]), e(&[0, 1])], &map, &[e(&[1])], 1));
        let drop = vec![e(&[1, 0])];
        assert!(!cone_surjects(&[e(&[0, 1])], &drop, &[e(&[1])], 1));
    }
}
