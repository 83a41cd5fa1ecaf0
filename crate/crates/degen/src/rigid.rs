//! Rigid types, rubber lattices and position maps, and the retraction of a
//! type onto a rigid face.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use tropfm_core::intmat;
use tropfm_core::{IntVec, Rat, RatVec};

use crate::error::DegenError;
use crate::moduli::{at_height_one, DegenModuli};
use crate::slice::{simplex_subdiv_from_points, SimplexLatticeSubdivision};
use crate::types::DeltaCombType;
use crate::wire;

/// Cells of `Π_n(Δ)` that are rays, with their types.
pub fn rigid_types(m: &DegenModuli) -> Vec<(usize, DeltaCombType)> {
    m.ray_cells().into_iter().map(|c| (c, m.types[c].clone().expect("rays are not the origin"))).collect()
}

/// `𝒮` for the configuration at the barycenter of `cell`.
pub fn subdivision_of(m: &DegenModuli, cell: usize) -> SimplexLatticeSubdivision {
    let b = m.barycenter(cell);
    let pts: Vec<RatVec> = b.chunks(m.r).map(|c| c.to_vec()).collect();
    simplex_subdiv_from_points(&pts, &Rat::one()).expect("barycenter lies on the slice")
}

/// Positions of the vertices of `𝒮_τ` as linear functions of the
/// configuration on the span of `τ`: one row per coordinate of `ℝ^r`, each
/// a functional on `(ℝ^r)^n`. A coordinate is `0` or a threshold `u_i^{(j)}`
/// when pinned, and the free coordinate is the height minus the others.
pub fn vertex_positions(m: &DegenModuli, cell: usize) -> (SimplexLatticeSubdivision, Vec<Vec<IntVec>>) {
    let (r, d) = (m.r, m.dim());
    let s = subdivision_of(m, cell);
    let mut out = Vec::new();
    for x in &s.vertices {
        let mut rows: Vec<Option<IntVec>> = vec![None; r];
        for j in 0..r {
            if x[j].is_zero() {
                rows[j] = Some(vec![BigInt::zero(); d]);
            } else if let Some(i) = s.points.iter().position(|p| p[j] == x[j]) {
                let mut row = vec![BigInt::zero(); d];
                row[i * r + j] = BigInt::one();
                rows[j] = Some(row);
            }
        }
        let free: Vec<usize> = (0..r).filter(|&j| rows[j].is_none()).collect();
        assert!(free.len() <= 1, "vertex of 𝒮 with {} free coordinates", free.len());
        if let Some(&j) = free.first() {
            let mut row = m.h[0].clone();
            for row_k in rows.iter().flatten() {
                for (a, b) in row.iter_mut().zip(row_k) {
                    *a -= b;
                }
            }
            rows[j] = Some(row);
        }
        out.push(rows.into_iter().map(|r| r.expect("filled")).collect());
    }
    (s, out)
}

fn eval_rows(rows: &[IntVec], v: &[Rat]) -> RatVec {
    rows.iter().map(|row| row.iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, x)| Rat::from_integer(a.clone()) * x).sum()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RubberData {
    pub cell: usize,
    pub label: String,
    pub rank: usize,
    /// Basis of `N_τ = ker h` on the lattice of the cell.
    #[serde(serialize_with = "wire::ser_int_vecs")]
    pub basis: Vec<IntVec>,
    /// `None` for the origin.
    pub subdivision: Option<SimplexLatticeSubdivision>,
    /// `φ_v` for each vertex of `𝒮_τ`: `r × rank`, column `k` the motion of
    /// the vertex along basis vector `k`.
    pub positions: Vec<Vec<Vec<String>>>,
    pub marked: Vec<usize>,
    /// The position map of the marked vertices is injective.
    pub free: bool,
}

/// `ker(h)` on the lattice of `cell`.
pub fn rubber_lattice(m: &DegenModuli, cell: usize) -> Vec<IntVec> {
    let l = m.pi.cell_lattice(cell);
    let hv: Vec<Vec<BigInt>> = l.basis().iter().map(|b| vec![intmat::mat_vec(&m.h, b)[0].clone()]).collect();
    let ker = intmat::left_kernel(&hv, 1);
    ker.iter().map(|c| intmat::mat_vec(&intmat::transpose(l.basis(), m.dim()), c)).collect()
}

pub fn rubber_data(m: &DegenModuli, cell: usize) -> RubberData {
    let basis = if m.is_origin(cell) { Vec::new() } else { rubber_lattice(m, cell) };
    let rank = basis.len();
    let (subdivision, rows) = if m.is_origin(cell) {
        (None, Vec::new())
    } else {
        let (s, rows) = vertex_positions(m, cell);
        (Some(s), rows)
    };
    let bt = intmat::transpose(&basis, m.dim());
    let phis: Vec<Vec<IntVec>> = rows.iter().map(|rv| if rank == 0 { vec![Vec::new(); m.r] } else { intmat::mat_mul(rv, &bt, rank) }).collect();
    let mut marked = subdivision.as_ref().map_or(Vec::new(), |s| s.marking.clone());
    marked.sort();
    marked.dedup();
    let stacked: Vec<IntVec> = marked.iter().flat_map(|&v| phis[v].iter().cloned()).collect();
    let free = rank == 0 || intmat::rank(&stacked, rank) == rank;
    RubberData {
        cell,
        label: m.pi.cells[cell].label.clone(),
        rank,
        basis,
        subdivision,
        positions: phis.iter().map(|p| p.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect()).collect(),
        marked,
        free,
    }
}

/// `ψ` from the vertices of `𝒮_τ` to the vertices of `𝒮_ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Retraction {
    pub tau: usize,
    pub rho: usize,
    pub vertex_map: Vec<usize>,
    /// `I_v` for each vertex `v` of `𝒮_ρ`.
    pub labels: Vec<Vec<usize>>,
    /// The section rays over `ρ` land where the vertex positions put the
    /// marked vertices.
    pub sections_agree: bool,
}

pub fn require_rigid(m: &DegenModuli, rho: usize) -> Result<(), DegenError> {
    if rho >= m.pi.len() || m.is_origin(rho) || m.pi.cells[rho].dim != 1 {
        return Err(DegenError::NotRigid(rho));
    }
    Ok(())
}

/// Degenerating `τ` onto its rigid face `ρ`: vertex positions are linear on
/// the cone of `τ` and evaluate at the ray of `ρ` to vertices of `𝒮_ρ`.
pub fn retraction(m: &DegenModuli, tau: usize, rho: usize) -> Result<Retraction, DegenError> {
    require_rigid(m, rho)?;
    if tau >= m.pi.len() || !m.pi.is_face(rho, tau) {
        return Err(DegenError::NotAFace { rho, tau });
    }
    let r = m.r;
    let v = m.pi.ray_vectors(rho).remove(0);
    let v1 = at_height_one(&v, r);
    let s_rho = subdivision_of(m, rho);
    let (s_tau, rows) = vertex_positions(m, tau);
    let vertex_map: Vec<usize> = rows
        .iter()
        .map(|rv| s_rho.vertex_index(&eval_rows(rv, &v1)).expect("positions degenerate to vertices"))
        .collect();

    // section route: σ_j of the rays of τ, the one over ρ, its point x
    let mut sections_agree = true;
    for (j, sec) in m.sections.iter().enumerate() {
        let over: Vec<IntVec> = m
            .pi
            .ray_vectors(tau)
            .iter()
            .map(|g| intmat::mat_vec(sec, g))
            .filter(|s| intmat::mat_vec(&m.p, s) == v)
            .collect();
        let ok = over.len() == 1 && {
            let x = at_height_one(&over[0], r);
            s_rho.vertex_index(&x[..r]) == Some(vertex_map[s_tau.marking[j]])
        };
        sections_agree &= ok;
    }
    let labels = (0..s_rho.vertices.len())
        .map(|w| (1..=m.n).filter(|&j| vertex_map[s_tau.marking[j - 1]] == w).collect())
        .collect();
    Ok(Retraction { tau, rho, vertex_map, labels, sections_agree })
}
