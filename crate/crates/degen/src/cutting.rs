//! The cutting map at a rigid ray `ρ`: the star of `ρ` in `Π_n(Δ)` against
//! the product over the vertices `v` of `𝒮_ρ` of the moduli of the points
//! retracting to `v`, placed on the star fan `Σ_v`.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use tropfm_core::cone::extreme_rays;
use tropfm_core::rat::{fmt_rat, lcm_denoms, primitive, rat_int, to_rat_vec};
use tropfm_core::{
    arrangement_cells, is_subdivision, ratmat, star_fan, ComplexBuilder, ComplexMap, ConeComplex, Halfspace, IntVec, Polyhedron,
    Quotient, Rat, RatVec, StarFan,
};
use tropfm_grid::{build_pi, grid_comb_type, GridModuli, TropFan, TropPointTuple};

use crate::error::DegenError;
use crate::heights::{compositions, for_each_config, kernel_lattice};
use crate::moduli::DegenModuli;
use crate::rigid::{require_rigid, subdivision_of};
use crate::slice::SimplexLatticeSubdivision;
use crate::wire;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutOptions {
    /// Points sampled from the star and from the product.
    pub samples: usize,
    pub seed: u64,
    /// Initial slice height is this multiple of the base times the
    /// denominator of the sample point.
    pub slice_multiplier: u64,
    /// Lattice points are enumerated at heights `k·h_tot`, `k = 1..=4`, while
    /// the number of configurations stays under this.
    pub lattice_budget: u64,
}

impl Default for CutOptions {
    fn default() -> Self {
        CutOptions { samples: 200, seed: 0, slice_multiplier: 4, lattice_budget: 2_000_000 }
    }
}

/// The factor at one vertex of `𝒮_ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexFactor {
    pub vertex: usize,
    #[serde(serialize_with = "wire::ser_rat_vec")]
    pub position: RatVec,
    /// `I_v`.
    pub labels: Vec<usize>,
    /// Rays of `Σ_v` in the coordinates of the quotient lattice.
    #[serde(serialize_with = "wire::ser_int_vecs")]
    pub rays: Vec<IntVec>,
    pub maximal_cones: Vec<Vec<usize>>,
    pub unimodular: bool,
    /// `Σ_v` agrees with the fan of tangent cones of `𝒮_ρ` at `v`.
    pub tangent_agrees: bool,
    /// Cells of `Π_{I_v}(Σ_v)` by dimension; empty when `I_v = ∅`.
    pub moduli_counts: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CutCertificate {
    /// `κ` maps the star onto the product cell by cell, as a subdivision.
    pub support_bijective: bool,
    pub lattice_bijective: bool,
    pub first_violation: Option<String>,
    /// The star cut by the pullbacks of the walls of the `Σ_v`.
    pub refined_counts: Vec<usize>,
    /// The cut star subdivides the star.
    pub refines_star: bool,
    /// The cut star subdivides the product under `κ`.
    pub refined_subdivides_product: bool,
    /// The linear part of `κ` into the quotient coordinates of the `Σ_v`
    /// is an isomorphism of lattices.
    pub linear_unimodular: bool,
    pub source_counts: Vec<usize>,
    pub target_counts: Vec<usize>,
    pub dims_match: bool,
    pub samples: usize,
    /// Metric and linear descriptions agree on the sample, inside the
    /// designated target cells.
    pub sample_consistent: bool,
    pub injective_on_sample: bool,
    pub integral_on_sample: bool,
    pub surjective_on_sample: bool,
    /// Integral product points lift to lattice points at slice heights in
    /// `h_tot·ℤ`.
    pub lattice_lifts: bool,
    pub slice_height: String,
    pub slice_raises: u32,
    pub lattice_heights: Vec<u64>,
    pub lattice_points: u64,
    pub lattice_integral: bool,
    pub lattice_injective: bool,
    /// Heights `h_tot..4·h_tot` were all enumerated.
    pub lattice_complete: bool,
    /// Lattice points of the star in the zonotopes of the maximal cells.
    pub cell_lattice_points: u64,
    pub cell_lattice_integral: bool,
}

impl CutCertificate {
    /// `κ` is a map of cone complexes and a subdivision.
    pub fn holds(&self) -> bool {
        self.support_bijective && self.lattice_bijective && self.piecewise_bijective()
    }

    /// `κ` is a bijection of supports and of lattice points, whether or not
    /// the cells of the star land in cells of the product.
    pub fn piecewise_bijective(&self) -> bool {
        self.refines_star
            && self.refined_subdivides_product
            && self.linear_unimodular
            && self.dims_match
            && self.sample_consistent
            && self.injective_on_sample
            && self.integral_on_sample
            && self.surjective_on_sample
            && self.lattice_lifts
            && self.lattice_integral
            && self.lattice_injective
            && self.cell_lattice_integral
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuttingMapResult {
    pub rho: usize,
    pub label: String,
    pub h_tot: u64,
    pub subdivision: SimplexLatticeSubdivision,
    pub factors: Vec<VertexFactor>,
    pub certificate: CutCertificate,
}

/// One vertex of `𝒮_ρ` with its star fan and, for nonempty `I_v`, the moduli
/// of `I_v` points on it.
struct Vertex {
    position: RatVec,
    labels: Vec<usize>,
    star: StarFan,
    grid: Option<GridModuli>,
    /// Offset of the factor's coordinates in the product.
    offset: usize,
    /// Pseudo-inverse of the ray matrix of every cone of `Σ_v`.
    charts: Vec<Vec<RatVec>>,
}

impl Vertex {
    fn nrays(&self) -> usize {
        self.star.fan.rays.len()
    }

    /// Smallest cone of `Σ_v` containing `y`.
    fn carrier(&self, y: &[Rat]) -> Option<usize> {
        let yi = scale_to_int(y);
        let fan = &self.star.fan;
        (0..fan.len()).filter(|&c| fan.contains(c, &yi)).min_by_key(|&c| fan.cells[c].dim)
    }

    /// `y` in the ray coordinates of its carrier.
    fn chart(&self, y: &[Rat]) -> Option<RatVec> {
        let c = self.carrier(y)?;
        let mut out = vec![Rat::zero(); self.nrays()];
        let a = ratmat::mat_vec(&self.charts[c], y);
        for (&ray, x) in self.star.fan.cells[c].rays.iter().zip(a) {
            out[ray] = x;
        }
        Some(out)
    }
}

struct Cut {
    rho: usize,
    rho_vec: IntVec,
    s_rho: SimplexLatticeSubdivision,
    star: StarFan,
    /// Star cell of each coface of `ρ`.
    star_of: HashMap<usize, usize>,
    vertices: Vec<Vertex>,
    /// Vertex of `𝒮_ρ` carrying point `j + 1`, and the point's index in `I_v`.
    point_vertex: Vec<(usize, usize)>,
    /// Linear part into `⊕_j` quotient coordinates of `Σ_{v(j)}`, one block
    /// of `r − 1` rows per point.
    linear: Vec<RatVec>,
    product: ConeComplex,
    /// Radices of the product cell ids, factor order.
    radices: Vec<usize>,
    map: ComplexMap,
    /// The star cut by the pulled-back walls, and `κ` on it.
    refined: ConeComplex,
    refined_map: ComplexMap,
    target_dim: usize,
}

fn scale_to_int(v: &[Rat]) -> IntVec {
    let l = lcm_denoms(v);
    v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()
}

fn int_rows(m: &[IntVec]) -> Vec<RatVec> {
    m.iter().map(|r| to_rat_vec(r)).collect()
}

/// `(W·Wᵀ)⁻¹·W` for the rows `W`: coefficients of a point in the span.
fn pseudo_inverse(rows: &[IntVec], d: usize) -> Vec<RatVec> {
    if rows.is_empty() {
        return Vec::new();
    }
    let w = int_rows(rows);
    let wt = ratmat::transpose(&w, d);
    let g = ratmat::mat_mul(&w, &wt, w.len());
    let gi = ratmat::inverse(&g).expect("cone rays are independent");
    ratmat::mat_mul(&gi, &w, d)
}

fn height(v: &[Rat], r: usize) -> Rat {
    v[..r].iter().sum()
}

fn unimodular(rows: &[IntVec], d: usize) -> bool {
    // rays of a cone form part of a basis of ℤ^d
    if rows.is_empty() {
        return true;
    }
    let s = tropfm_core::intmat::smith(rows, d);
    s.rank == rows.len() && s.invariants().iter().all(|x| x.is_one())
}

/// `Σ_{W_ρ}`: cones over the cells of `𝒮_ρ` in the lattice of points whose
/// coordinate sums lie in `base·ℤ`. Returns the cone id of each vertex.
fn slice_fan(s: &SimplexLatticeSubdivision, base: u64) -> (ConeComplex, Vec<usize>) {
    let r = s.r;
    let mut b = ComplexBuilder::new(kernel_lattice(r, 1, base));
    b.add_cell(&[], "0".into());
    let mut ids = vec![0; s.vertices.len()];
    for c in &s.cells {
        let gens: Vec<IntVec> = c.vertices.iter().map(|&v| primitive(&s.vertices[v])).collect();
        let label = c.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        let id = b.add_cell(&gens, label);
        if c.dim == 0 {
            ids[c.vertices[0]] = id;
        }
    }
    (b.build(), ids)
}

/// Σ_v again, as tangent cones at `v` of the cells of `𝒮_ρ` through `v`.
fn tangent_fan(s: &SimplexLatticeSubdivision, v: usize, q: &Quotient, r: usize) -> Vec<Vec<IntVec>> {
    let d = q.rank;
    let mut out: Vec<Vec<IntVec>> = s
        .cells_containing_vertex(v)
        .into_iter()
        .map(|c| {
            let dirs: Vec<IntVec> = s.cells[c]
                .vertices
                .iter()
                .filter(|&&w| w != v)
                .map(|&w| {
                    let diff: RatVec = (0..r).map(|j| &s.vertices[w][j] - &s.vertices[v][j]).collect();
                    primitive(&ratmat::mat_vec(&q.matrix, &diff))
                })
                .collect();
            let mut g = extreme_rays(d, &dirs);
            g.sort();
            g
        })
        .collect();
    out.sort();
    out
}

fn build_cut(m: &DegenModuli, rho: usize) -> Result<Cut, DegenError> {
    require_rigid(m, rho)?;
    let (r, n) = (m.r, m.n);
    let rho_vec = m.pi.ray_vectors(rho).remove(0);
    let s_rho = subdivision_of(m, rho);
    let star = star_fan(&m.pi, rho)?;
    let star_of: HashMap<usize, usize> = star.source_cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let rank = star.quotient.rank;

    let (wfan, cone_of_vertex) = slice_fan(&s_rho, m.base);
    let mut vertices = Vec::new();
    let mut offset = 0;
    for (v, pos) in s_rho.vertices.iter().enumerate() {
        let labels = s_rho.labels_at(v);
        let vstar = star_fan(&wfan, cone_of_vertex[v])?;
        let fan = &vstar.fan;
        let mut cones = Vec::new();
        for c in 0..fan.len() {
            if fan.cells[c].rays.len() != fan.cells[c].dim {
                return Err(DegenError::UnsupportedDim(r));
            }
            cones.push(fan.cells[c].rays.clone());
        }
        let charts = (0..fan.len()).map(|c| pseudo_inverse(&fan.ray_vectors(c), r - 1)).collect();
        let grid = if labels.is_empty() {
            None
        } else {
            let tf = TropFan::new(fan.rays.len(), &cones)?;
            Some(build_pi(&tf, labels.len())?)
        };
        let nr = fan.rays.len();
        vertices.push(Vertex { position: pos.clone(), labels: labels.clone(), star: vstar, grid, offset, charts });
        offset += nr * labels.len();
    }
    let target_dim = offset;
    let mut point_vertex = vec![(0, 0); n];
    for (v, vx) in vertices.iter().enumerate() {
        for (k, &j) in vx.labels.iter().enumerate() {
            point_vertex[j - 1] = (v, k);
        }
    }

    // κ_v(q̄) = Q_v(block_j(lift q̄)); Q_v kills the block of ρ
    let lift = int_rows(&star.quotient.section);
    let mut linear = Vec::new();
    for (j, &(v, _)) in point_vertex.iter().enumerate() {
        let block: Vec<RatVec> = lift[j * r..(j + 1) * r].to_vec();
        linear.extend(ratmat::mat_mul(&vertices[v].star.quotient.matrix, &block, rank));
    }

    let factors: Vec<usize> = (0..vertices.len()).filter(|&v| vertices[v].grid.is_some()).collect();
    let mut product: Option<ConeComplex> = None;
    let mut radices = Vec::new();
    for &v in &factors {
        let pi = &vertices[v].grid.as_ref().expect("factor").pi;
        radices.push(pi.len());
        product = Some(match product {
            None => pi.clone(),
            Some(acc) => {
                let p = acc.product(pi);
                debug_assert_eq!(p.len(), acc.len() * pi.len());
                p
            }
        });
    }
    let product = product.expect("n ≥ 1 gives a factor");

    let mut cut = Cut {
        rho,
        rho_vec,
        s_rho,
        star,
        star_of,
        vertices,
        point_vertex,
        linear,
        product,
        radices,
        map: ComplexMap::new(Vec::new(), Vec::new()),
        refined: ConeComplex::from_parts(tropfm_core::IntLattice::standard(0), Vec::new(), Vec::new()),
        refined_map: ComplexMap::new(Vec::new(), Vec::new()),
        target_dim,
    };
    cut.map = cut.map_on(&cut.star.fan);
    cut.refined = refine_by(&cut.star.fan, &cut.product_walls());
    cut.refined_map = cut.map_on(&cut.refined);
    Ok(cut)
}

/// Cuts every maximal cell of the pointed fan `fan` by the linear
/// hyperplanes `walls`, through a slice transverse to the cell.
fn refine_by(fan: &ConeComplex, walls: &[RatVec]) -> ConeComplex {
    let d = fan.dim();
    let hyper: Vec<Halfspace> = walls.iter().map(|w| Halfspace::new(w.clone(), Rat::zero())).collect();
    let mut b = ComplexBuilder::new(fan.ambient.clone());
    b.add_cell(&[], "0".into());
    for c in fan.maximal_cells() {
        if fan.cells[c].dim == 0 {
            continue;
        }
        let h = fan.cell_hrep(c);
        let mut g = vec![Rat::zero(); d];
        for f in &h.facets {
            for (a, x) in g.iter_mut().zip(f) {
                *a += rat_int(x);
            }
        }
        if h.facets.is_empty() {
            // a full space would not be pointed; a ray's own direction works
            g = to_rat_vec(&fan.ray_vectors(c)[0]);
        }
        let mut eqs: Vec<Halfspace> = h.eqs.iter().map(|e| Halfspace::new(to_rat_vec(e), Rat::zero())).collect();
        eqs.push(Halfspace::new(g, Rat::one()));
        let ineqs = h.facets.iter().map(|f| Halfspace::new(to_rat_vec(f), Rat::zero())).collect();
        let arr = arrangement_cells(&Polyhedron::new(d, ineqs, eqs), &hyper);
        for (k, cell) in arr.cells.iter().enumerate() {
            let gens: Vec<IntVec> = cell.vertices.iter().map(|&v| primitive(&arr.vertices[v])).collect();
            b.add_cell(&gens, format!("{}.{k}", fan.cells[c].label));
        }
    }
    b.build()
}

impl Cut {
    fn rank(&self) -> usize {
        self.star.quotient.rank
    }

    /// `κ` on each cell of `source`, a fan in the star's coordinates, charted
    /// at the cell's interior.
    fn map_on(&self, source: &ConeComplex) -> ComplexMap {
        let rank = self.rank();
        let mut matrices = Vec::new();
        let mut targets = Vec::new();
        for c in 0..source.len() {
            let interior: IntVec = source.ray_vectors(c).iter().fold(vec![BigInt::zero(); rank], |acc, w| acc.iter().zip(w).map(|(a, b)| a + b).collect());
            let (mat, target) = self.cell_map(&to_rat_vec(&interior)).expect("interior points chart");
            matrices.push(Some(mat));
            targets.push(target);
        }
        ComplexMap::new(matrices, targets)
    }

    /// Walls of the `Σ_{v(j)}` pulled back to the star along the linear part.
    fn product_walls(&self) -> Vec<RatVec> {
        let rank = self.rank();
        let mut out: Vec<IntVec> = Vec::new();
        for (j, &(v, _)) in self.point_vertex.iter().enumerate() {
            let vx = &self.vertices[v];
            let q = vx.star.quotient.rank;
            let block = &self.linear[j * q..(j + 1) * q];
            for c in 0..vx.star.fan.len() {
                if vx.star.fan.cells[c].dim + 1 != q {
                    continue;
                }
                let rows = int_rows(&vx.star.fan.ray_vectors(c));
                for nrm in ratmat::nullspace(&rows, q) {
                    let w: RatVec = (0..rank).map(|i| nrm.iter().zip(block).map(|(a, row)| a * &row[i]).sum()).collect();
                    if w.iter().any(|x| !x.is_zero()) {
                        out.push(primitive(&w));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out.into_iter().map(|w| to_rat_vec(&w)).collect()
    }

    /// Smallest cell of the cut star containing `qbar`.
    fn refined_cell_of(&self, qbar: &[Rat]) -> Option<usize> {
        let qi = scale_to_int(qbar);
        let fan = &self.refined;
        (0..fan.len()).filter(|&c| fan.contains(c, &qi)).min_by_key(|&c| fan.cells[c].dim)
    }

    /// Images `y_j ∈ Σ_{v(j)}` of a point of the star, linearly.
    fn linear_points(&self, qbar: &[Rat]) -> Vec<RatVec> {
        let y = ratmat::mat_vec(&self.linear, qbar);
        let k = self.vertices.first().map_or(0, |v| v.star.quotient.rank);
        y.chunks(k.max(1)).map(|c| c.to_vec()).collect()
    }

    /// Product coordinates of the points `y_j`, charted through their carriers.
    fn target_point(&self, ys: &[RatVec]) -> Option<RatVec> {
        let mut z = vec![Rat::zero(); self.target_dim];
        for (j, y) in ys.iter().enumerate() {
            let (v, k) = self.point_vertex[j];
            let vx = &self.vertices[v];
            let a = vx.chart(y)?;
            let off = vx.offset + k * vx.nrays();
            for (l, x) in a.into_iter().enumerate() {
                z[off + l] = x;
            }
        }
        Some(z)
    }

    /// Product cell of the configuration `z`, by grid types per factor.
    fn locate(&self, z: &[Rat]) -> Option<usize> {
        let mut id = 0;
        let mut f = 0;
        for vx in &self.vertices {
            let Some(g) = &vx.grid else { continue };
            let nr = vx.nrays();
            let points: Vec<RatVec> = (0..vx.labels.len()).map(|k| z[vx.offset + k * nr..vx.offset + (k + 1) * nr].to_vec()).collect();
            let t = grid_comb_type(&TropPointTuple { r: nr, points });
            id = id * self.radices[f] + g.cell_of_type(&t)?;
            f += 1;
        }
        Some(id)
    }

    /// Matrix of `κ` on the star cell whose relative interior holds `qbar`,
    /// and its target cell.
    fn cell_map(&self, qbar: &[Rat]) -> Option<(Vec<RatVec>, usize)> {
        let rank = self.rank();
        let ys = self.linear_points(qbar);
        let mut mat = vec![vec![Rat::zero(); rank]; self.target_dim];
        for (j, y) in ys.iter().enumerate() {
            let (v, k) = self.point_vertex[j];
            let vx = &self.vertices[v];
            let c = vx.carrier(y)?;
            let q = vx.star.quotient.rank;
            let rows = ratmat::mat_mul(&vx.charts[c], &self.linear[j * q..(j + 1) * q], rank);
            for (&ray, row) in vx.star.fan.cells[c].rays.iter().zip(rows) {
                mat[vx.offset + k * vx.nrays() + ray] = row;
            }
        }
        let z = self.target_point(&ys)?;
        Some((mat, self.locate(&z)?))
    }

    /// `κ(q̄)` through a lift to height `t`: the overstar and slice
    /// neighbourhood conditions are checked, then each point is projected to
    /// its star fan.
    fn metric_points(&self, m: &DegenModuli, qbar: &[Rat], t: &Rat) -> Result<Vec<RatVec>, DegenError> {
        let r = m.r;
        let too_small = || DegenError::SliceTooSmall { t: fmt_rat(t) };
        let base = ratmat::mat_vec(&int_rows(&self.star.quotient.section), qbar);
        let rv = to_rat_vec(&self.rho_vec);
        let s = (t - height(&base, r)) / height(&rv, r);
        let q: RatVec = base.iter().zip(&rv).map(|(a, b)| a + &s * b).collect();
        if q.iter().any(|x| x.is_negative()) {
            return Err(too_small());
        }
        let cell = m.cell_of_point(&q, t).ok_or_else(too_small)?;
        if !m.pi.is_face(self.rho, cell) {
            return Err(too_small());
        }
        let mut ys = Vec::new();
        for (j, &(v, _)) in self.point_vertex.iter().enumerate() {
            let x: RatVec = q[j * r..(j + 1) * r].to_vec();
            let x1: RatVec = x.iter().map(|a| a / t).collect();
            let carrier = self.s_rho.carrier(&x1).ok_or_else(too_small)?;
            if !self.s_rho.cells[carrier].vertices.contains(&v) {
                return Err(too_small());
            }
            ys.push(ratmat::mat_vec(&self.vertices[v].star.quotient.matrix, &x));
        }
        Ok(ys)
    }

    /// Configuration at height `t` placing each point `j` at `t·v(j) + ỹ_j`
    /// with `ỹ_j` of coordinate sum zero over `y_j`.
    fn lift_configuration(&self, ys: &[RatVec], t: &Rat, r: usize) -> RatVec {
        let mut q = Vec::new();
        for (j, y) in ys.iter().enumerate() {
            let vx = &self.vertices[self.point_vertex[j].0];
            let mut sys = vx.star.quotient.matrix.clone();
            sys.push(vec![Rat::one(); r]);
            let mut rhs = y.clone();
            rhs.push(Rat::zero());
            let inv = ratmat::inverse(&sys).expect("quotient is transverse to the sum-zero plane");
            let yt = ratmat::mat_vec(&inv, &rhs);
            q.extend(vx.position.iter().zip(yt).map(|(p, d)| p * t + d));
        }
        q
    }
}

fn random_combo(rng: &mut ChaCha8Rng, rays: &[IntVec], d: usize, integral: bool) -> RatVec {
    let mut out = vec![Rat::zero(); d];
    for w in rays {
        let c = if integral {
            Rat::from_integer(BigInt::from(rng.gen_range(1..=5)))
        } else {
            Rat::new(BigInt::from(rng.gen_range(1..=9)), BigInt::from(rng.gen_range(1..=4)))
        };
        for (o, x) in out.iter_mut().zip(w) {
            *o += &c * rat_int(x);
        }
    }
    out
}

fn is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// Runs `f` at slice heights `t0, 2·t0, …` until it stops reporting
/// `SliceTooSmall`.
fn with_slice<T>(t0: Rat, raises: &mut u32, top: &mut Rat, mut f: impl FnMut(&Rat) -> Result<T, DegenError>) -> Result<T, DegenError> {
    let mut t = t0;
    for k in 0..40 {
        match f(&t) {
            Err(DegenError::SliceTooSmall { .. }) => {
                t *= Rat::from_integer(BigInt::from(2));
                *raises = (*raises).max(k + 1);
            }
            other => {
                if t > *top {
                    *top = t;
                }
                return other;
            }
        }
    }
    Err(DegenError::SliceTooSmall { t: fmt_rat(&t) })
}

pub fn cutting_map(m: &DegenModuli, rho: usize, opts: &CutOptions) -> Result<CuttingMapResult, DegenError> {
    let cut = build_cut(m, rho)?;
    let (r, n) = (m.r, m.n);
    let rank = cut.rank();
    let mut cert = CutCertificate { samples: opts.samples, ..Default::default() };

    let sub = is_subdivision(&cut.star.fan, &cut.product, &cut.map)?;
    cert.support_bijective = sub.support_bijective;
    cert.lattice_bijective = sub.lattice_bijective;
    cert.first_violation = sub.first_violation().map(|v| format!("{:?} at fine {:?}, coarse {:?}", v.kind, v.fine_cell, v.coarse_cell));
    let fine = is_subdivision(&cut.refined, &cut.star.fan, &ComplexMap::identity(&cut.refined, &cut.star.fan)?)?;
    cert.refines_star = fine.holds();
    cert.refined_subdivides_product = is_subdivision(&cut.refined, &cut.product, &cut.refined_map)?.holds();
    cert.refined_counts = cut.refined.count_by_dim();
    cert.source_counts = cut.star.fan.count_by_dim();
    cert.target_counts = cut.product.count_by_dim();
    cert.dims_match = cert.source_counts.len() == cert.target_counts.len() && rank == (r - 1) * n;

    cert.linear_unimodular = cut.linear.len() == rank
        && is_integral(&cut.linear.concat())
        && ratmat::inverse(&cut.linear).is_some_and(|inv| is_integral(&inv.concat()));

    // sample from the star: metric route against the cell matrices
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (rho as u64).wrapping_mul(0x9e37_79b9));
    let maximal = cut.star.fan.maximal_cells();
    let mut top = Rat::zero();
    let mut raises = 0;
    let mut seen: HashMap<Vec<Rat>, Vec<Rat>> = HashMap::new();
    let mut images: HashSet<Vec<Rat>> = HashSet::new();
    cert.sample_consistent = true;
    cert.integral_on_sample = true;
    for k in 0..opts.samples {
        let c = maximal[rng.gen_range(0..maximal.len())];
        let integral = k % 2 == 0;
        let qbar = random_combo(&mut rng, &cut.star.fan.ray_vectors(c), rank, integral);
        let rc = cut.refined_cell_of(&qbar).expect("the cut star covers the star");
        let z = ratmat::mat_vec(cut.refined_map.matrix(rc)?, &qbar);
        let t0 = Rat::from_integer(BigInt::from(opts.slice_multiplier * m.base) * lcm_denoms(&qbar));
        let ys = with_slice(t0, &mut raises, &mut top, |t| cut.metric_points(m, &qbar, t))?;
        let ok = ys == cut.linear_points(&qbar)
            && cut.target_point(&ys).as_ref() == Some(&z)
            && cut.product.contains(cut.refined_map.targets[rc], &scale_to_int(&z));
        cert.sample_consistent &= ok;
        if integral && !is_integral(&z) {
            cert.integral_on_sample = false;
        }
        if seen.insert(qbar, z.clone()).is_none() {
            images.insert(z);
        }
    }
    cert.injective_on_sample = images.len() == seen.len();

    // sample from the product: build a configuration, descend, map back
    let tmax = cut.product.maximal_cells();
    cert.surjective_on_sample = true;
    cert.lattice_lifts = true;
    let lift_base = Rat::from_integer(BigInt::from(opts.slice_multiplier * m.base));
    for k in 0..opts.samples {
        let c = tmax[rng.gen_range(0..tmax.len())];
        let integral = k % 2 == 0;
        let z = random_combo(&mut rng, &cut.product.ray_vectors(c), cut.target_dim, integral);
        let ys: Vec<RatVec> = (0..n)
            .map(|j| {
                let (v, kk) = cut.point_vertex[j];
                let vx = &cut.vertices[v];
                let off = vx.offset + kk * vx.nrays();
                let mut y = vec![Rat::zero(); vx.star.quotient.rank];
                for (l, w) in vx.star.fan.rays.iter().enumerate() {
                    for (a, b) in y.iter_mut().zip(w) {
                        *a += &z[off + l] * rat_int(b);
                    }
                }
                y
            })
            .collect();
        let t0 = lift_base.clone() * Rat::from_integer(lcm_denoms(&z));
        let q = with_slice(t0, &mut raises, &mut top, |t| {
            let q = cut.lift_configuration(&ys, t, r);
            let qbar = ratmat::mat_vec(&cut.star.quotient.matrix, &q);
            cut.metric_points(m, &qbar, t)?;
            Ok(q)
        })?;
        let qbar = ratmat::mat_vec(&cut.star.quotient.matrix, &q);
        let back = cut.refined_cell_of(&qbar).map(|rc| ratmat::mat_vec(cut.refined_map.matrix(rc).expect("defined"), &qbar));
        cert.surjective_on_sample &= back.as_ref() == Some(&z);
        if integral {
            let qi: Option<IntVec> = is_integral(&q).then(|| q.iter().map(|x| x.to_integer()).collect());
            cert.lattice_lifts &= qi.is_some_and(|qi| m.pi.ambient.contains(&qi)) && is_integral(&qbar);
        }
    }
    cert.slice_height = fmt_rat(&top);
    cert.slice_raises = raises;

    // lattice points at heights k·h_tot, while affordable
    let comps = |t: u64| (compositions(t as i64, r).len() as u64).saturating_pow(n as u32);
    let mut budget = opts.lattice_budget;
    cert.lattice_integral = true;
    let mut qbars: HashMap<IntVec, IntVec> = HashMap::new();
    for k in 1..=4u64 {
        let t = k * m.base;
        let cost = comps(t);
        if cost > budget {
            break;
        }
        budget -= cost;
        cert.lattice_heights.push(t);
        for_each_config(r, n, t as i64, |u| {
            let Some(cell) = m.cell_of_int(u, t as i64) else { return };
            if !cut.star_of.contains_key(&cell) {
                return;
            }
            let ui: IntVec = u.iter().map(|&x| BigInt::from(x)).collect();
            let qbar = cut.star.quotient.apply(&ui);
            if !is_integral(&qbar) {
                cert.lattice_integral = false;
                return;
            }
            let rc = cut.refined_cell_of(&qbar).expect("the cut star covers the star");
            let z = ratmat::mat_vec(cut.refined_map.matrix(rc).expect("defined"), &qbar);
            if !is_integral(&z) {
                cert.lattice_integral = false;
                return;
            }
            qbars.insert(qbar.iter().map(|x| x.to_integer()).collect(), z.iter().map(|x| x.to_integer()).collect());
        });
    }
    cert.lattice_points = qbars.len() as u64;
    cert.lattice_injective = qbars.values().collect::<HashSet<_>>().len() == qbars.len();
    cert.lattice_complete = cert.lattice_heights.len() == 4;

    // every lattice point of each maximal star cell up to the sum of its rays
    cert.cell_lattice_integral = true;
    for &c in &maximal {
        let rays = cut.star.fan.ray_vectors(c);
        let lo: Vec<i64> = (0..rank).map(|i| rays.iter().map(|w| w[i].to_i64().unwrap().min(0)).sum()).collect();
        let hi: Vec<i64> = (0..rank).map(|i| rays.iter().map(|w| w[i].to_i64().unwrap().max(0)).sum()).collect();
        let mut x = lo.clone();
        loop {
            let xi: IntVec = x.iter().map(|&a| BigInt::from(a)).collect();
            if cut.star.fan.contains(c, &xi) {
                cert.cell_lattice_points += 1;
                let xr = to_rat_vec(&xi);
                let rc = cut.refined_cell_of(&xr).expect("the cut star covers the star");
                if !is_integral(&ratmat::mat_vec(cut.refined_map.matrix(rc)?, &xr)) {
                    cert.cell_lattice_integral = false;
                }
            }
            let mut p = 0;
            while p < rank && x[p] == hi[p] {
                x[p] = lo[p];
                p += 1;
            }
            if p == rank {
                break;
            }
            x[p] += 1;
        }
    }

    let mut factors = Vec::new();
    for (v, vx) in cut.vertices.iter().enumerate() {
        let fan = &vx.star.fan;
        let mut star_cones: Vec<Vec<IntVec>> = (0..fan.len())
            .map(|c| {
                let mut g = fan.ray_vectors(c);
                g.sort();
                g
            })
            .collect();
        star_cones.sort();
        let tangent = tangent_fan(&cut.s_rho, v, &vx.star.quotient, r);
        factors.push(VertexFactor {
            vertex: v,
            position: vx.position.clone(),
            labels: vx.labels.clone(),
            rays: fan.rays.clone(),
            maximal_cones: fan.maximal_cells().iter().map(|&c| fan.cells[c].rays.clone()).collect(),
            unimodular: (0..fan.len()).all(|c| unimodular(&fan.ray_vectors(c), vx.star.quotient.rank)),
            tangent_agrees: tangent == star_cones,
            moduli_counts: vx.grid.as_ref().map_or(Vec::new(), |g| g.pi.count_by_dim()),
        });
    }

    Ok(CuttingMapResult {
        rho,
        label: m.pi.cells[rho].label.clone(),
        h_tot: m.base,
        subdivision: cut.s_rho.clone(),
        factors,
        certificate: cert,
    })
}

/// The data of one factor of the degeneration formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportFactor {
    pub vertex: usize,
    #[serde(serialize_with = "wire::ser_rat_vec")]
    pub position: RatVec,
    pub labels: Vec<usize>,
    /// Rays and maximal cones of `Σ_v`.
    pub star_rays: usize,
    pub maximal_cones: Vec<Vec<usize>>,
    /// `I_v = ∅`: the factor is a point.
    pub trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegenerationReport {
    pub rho: usize,
    pub label: String,
    pub factors: Vec<ReportFactor>,
    pub certificate: CutCertificate,
    /// Rays of `Π_n(Δ)` and types with zero-dimensional polyhedron, counted
    /// separately.
    pub rays_of_pi: usize,
    pub rigid_types: usize,
}

pub fn degeneration_report(m: &DegenModuli, rho: usize, opts: &CutOptions) -> Result<DegenerationReport, DegenError> {
    let res = cutting_map(m, rho, opts)?;
    let rigid = (1..m.pi.len()).filter(|&c| m.types[c].as_ref().is_some_and(|t| t.is_rigid())).count();
    Ok(DegenerationReport {
        rho,
        label: res.label,
        factors: res
            .factors
            .into_iter()
            .map(|f| ReportFactor {
                vertex: f.vertex,
                position: f.position,
                trivial: f.labels.is_empty(),
                labels: f.labels,
                star_rays: f.rays.len(),
                maximal_cones: f.maximal_cones,
            })
            .collect(),
        certificate: res.certificate,
        rays_of_pi: m.ray_cells().len(),
        rigid_types: rigid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::{h_tot, refine_lattices};
    use crate::moduli::build_pi_delta;
    use crate::rigid::rigid_types;

    fn refined(r: usize, n: usize) -> DegenModuli {
        let m = build_pi_delta(r, n).unwrap();
        refine_lattices(&m, h_tot(&m))
    }

    #[test]
    fn segment_vertex() {
        let m = refined(2, 1);
        let opts = CutOptions { samples: 20, ..Default::default() };
        for (rho, _) in rigid_types(&m) {
            let res = cutting_map(&m, rho, &opts).unwrap();
            assert!(res.certificate.holds(), "{:?}", res.certificate);
            let labelled: Vec<&VertexFactor> = res.factors.iter().filter(|f| !f.labels.is_empty()).collect();
            assert_eq!(labelled.len(), 1);
            assert_eq!(labelled[0].rays.len(), 1);
        }
    }

    #[test]
    fn square_corners() {
        let m = refined(2, 2);
        let opts = CutOptions { samples: 20, ..Default::default() };
        for (rho, _) in rigid_types(&m) {
            let res = cutting_map(&m, rho, &opts).unwrap();
            assert!(res.certificate.holds(), "{} {:?}", res.label, res.certificate);
            assert!(res.factors.iter().all(|f| f.tangent_agrees && f.unimodular));
        }
    }

    #[test]
    fn not_rigid() {
        let m = refined(2, 1);
        let top = m.pi.maximal_cells()[0];
        assert!(matches!(cutting_map(&m, top, &CutOptions::default()), Err(DegenError::NotRigid(_))));
    }
}
