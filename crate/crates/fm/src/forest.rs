//! Planted forests over a base combinatorial type.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use tropfm_core::complex::face_ray_sets;
use tropfm_core::IntVec;
use tropfm_grid::{GridCombType, GridRay};

use crate::error::FmError;
use crate::tree::RootedTree;

/// A base type whose marked vertices carry the trees.
pub trait ForestBase: Clone + Eq + Ord + fmt::Display + Serialize {
    fn npts(&self) -> usize;
    /// Codimension of the base stratum, equal to the dimension of its cone.
    fn base_codim(&self) -> usize;
    /// Marked points grouped by vertex, each group sorted, groups ordered by
    /// their first point.
    fn vertex_groups(&self) -> Vec<Vec<usize>>;
    fn ambient_dim(&self) -> usize;
    fn cone_generators(&self) -> Vec<IntVec>;
    /// Type of the face spanned by the generators at `kept`, when the base
    /// knows how to name it.
    fn face(&self, kept: &[usize]) -> Option<Self>;
}

impl ForestBase for GridCombType {
    fn npts(&self) -> usize {
        GridCombType::npts(self)
    }

    fn base_codim(&self) -> usize {
        self.codim()
    }

    fn vertex_groups(&self) -> Vec<Vec<usize>> {
        self.marked_vertices().into_iter().map(|(_, p)| p).collect()
    }

    fn ambient_dim(&self) -> usize {
        self.rays() * GridCombType::npts(self)
    }

    fn cone_generators(&self) -> Vec<IntVec> {
        self.generator_vectors()
    }

    fn face(&self, kept: &[usize]) -> Option<Self> {
        let gens = self.generators();
        let sub: Vec<GridRay> = kept.iter().map(|&i| gens[i]).collect();
        GridCombType::from_generators(self.rays(), GridCombType::npts(self), &sub)
    }
}

/// A base type with a rooted tree at each marked vertex. Trees are keyed by
/// the smallest point at their vertex; vertices without a key carry the
/// trivial tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PlantedForestType<B> {
    pub base: B,
    pub trees: BTreeMap<usize, RootedTree>,
}

/// A non-root node of valence below three.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityWitness {
    /// Key of the tree (smallest point at its vertex).
    pub vertex: usize,
    pub node: usize,
}

impl<B: ForestBase> PlantedForestType<B> {
    /// The base type with trivial trees.
    pub fn bare(base: B) -> Self {
        PlantedForestType { base, trees: BTreeMap::new() }
    }

    /// Checks that each tree sits at a marked vertex and carries exactly its
    /// points as legs.
    pub fn new(base: B, trees: BTreeMap<usize, RootedTree>) -> Result<Self, FmError> {
        let groups = base.vertex_groups();
        for (k, t) in &trees {
            let Some(g) = groups.iter().find(|g| g[0] == *k) else {
                return Err(FmError::Malformed(format!("no marked vertex with first point {k}")));
            };
            let legs: Vec<usize> = t.legs.iter().flatten().copied().collect();
            let set: BTreeSet<usize> = legs.iter().copied().collect();
            if legs.len() != set.len() || set != g.iter().copied().collect() {
                return Err(FmError::Malformed(format!("legs of the tree at {k} are not the points there")));
            }
        }
        Ok(PlantedForestType { base, trees }.canonical())
    }

    /// Trees put in canonical form; trivial trees dropped.
    pub fn canonical(&self) -> Self {
        let trees = self.trees.iter().filter(|(_, t)| !t.is_trivial()).map(|(k, t)| (*k, t.canonical())).collect();
        PlantedForestType { base: self.base.clone(), trees }
    }

    pub fn tree_at(&self, key: usize) -> RootedTree {
        match self.trees.get(&key) {
            Some(t) => t.clone(),
            None => {
                let g = self.base.vertex_groups().into_iter().find(|g| g[0] == key).unwrap_or_default();
                RootedTree::root(g)
            }
        }
    }

    pub fn stability(&self) -> Option<StabilityWitness> {
        self.trees.iter().find_map(|(k, t)| t.unstable_node().map(|node| StabilityWitness { vertex: *k, node }))
    }

    pub fn is_stable(&self) -> bool {
        self.stability().is_none()
    }

    pub fn edges(&self) -> usize {
        self.trees.values().map(|t| t.edges()).sum()
    }

    /// Isomorphism-invariant string.
    pub fn code(&self) -> String {
        let c = self.canonical();
        let trees: Vec<String> = c.trees.iter().map(|(k, t)| format!("{k}:{}", t.code())).collect();
        format!("{}#{}", c.base, trees.join(" "))
    }

    /// Graphviz description, legs drawn as labelled leaves.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph \"{name}\" {{\n  label=\"{}\";\n", self.base);
        for g in self.base.vertex_groups() {
            let t = self.tree_at(g[0]);
            let id = |v: usize| format!("v{}_{}", g[0], v);
            for v in 0..t.len() {
                let shape = if v == 0 { "box" } else { "circle" };
                s += &format!("  {} [shape={shape}, label=\"\"];\n", id(v));
                if let Some(p) = t.parent[v] {
                    s += &format!("  {} -- {};\n", id(p), id(v));
                }
                for l in &t.legs[v] {
                    s += &format!("  l{l} [shape=plaintext, label=\"{l}\"];\n  {} -- l{l};\n", id(v));
                }
            }
        }
        s += "}\n";
        s
    }
}

impl<B: ForestBase> fmt::Display for PlantedForestType<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

pub fn fm_codim<B: ForestBase>(f: &PlantedForestType<B>) -> Result<usize, FmError> {
    if let Some(w) = f.stability() {
        return Err(FmError::Unstable { vertex: w.vertex, node: w.node });
    }
    Ok(f.base.base_codim() + f.edges())
}

/// A face of an FM cone: a face of the base cone and a set of contracted edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FmFace {
    /// Indices into the base generators.
    pub base_rays: Vec<usize>,
    /// Indices into the edge list of the cone.
    pub contracted: Vec<usize>,
    pub dim: usize,
    pub stable: bool,
    /// Code of the type of the face, when the base face has a name.
    pub code: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FmCone {
    pub ambient_dim: usize,
    #[serde(serialize_with = "ser_vecs")]
    pub generators: Vec<IntVec>,
    /// `(tree key, node)` of the edge above `node`, in generator order after
    /// the base generators.
    pub edges: Vec<(usize, usize)>,
    pub dim: usize,
    pub faces: Vec<FmFace>,
}

fn ser_vecs<S: serde::Serializer>(v: &[IntVec], s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    strs.serialize(s)
}

/// Laminar family of the tree at `key` after contracting the given nodes.
fn contracted_family(t: &RootedTree, nodes: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    (1..t.len()).filter(|v| !nodes.contains(v)).map(|v| t.subtree_legs(v)).collect()
}

/// The forest type of a face.
fn face_type<B: ForestBase>(f: &PlantedForestType<B>, base_rays: &[usize], contracted: &BTreeSet<(usize, usize)>) -> Option<PlantedForestType<B>> {
    let base = f.base.face(base_rays)?;
    let mut trees = BTreeMap::new();
    for g in base.vertex_groups() {
        // trees of the old vertices merging here are joined at the root
        let mut family = Vec::new();
        for old in f.base.vertex_groups().into_iter().filter(|o| g.contains(&o[0])) {
            let t = f.tree_at(old[0]);
            let nodes: BTreeSet<usize> = contracted.iter().filter(|(k, _)| *k == old[0]).map(|(_, v)| *v).collect();
            family.extend(contracted_family(&t, &nodes));
        }
        let t = RootedTree::from_laminar(&g, &family)?;
        if !t.is_trivial() {
            trees.insert(g[0], t);
        }
    }
    Some(PlantedForestType { base, trees })
}

/// `cone(τ) × ∏ ℝ_{≥0}^{E(T)}` with its faces.
pub fn fm_cone<B: ForestBase>(f: &PlantedForestType<B>) -> Result<FmCone, FmError> {
    let codim = fm_codim(f)?;
    let f = f.canonical();
    let d0 = f.base.ambient_dim();
    let edges: Vec<(usize, usize)> = f.trees.iter().flat_map(|(k, t)| (1..t.len()).map(move |v| (*k, v))).collect();
    let e = edges.len();
    let base_gens = f.base.cone_generators();
    let mut generators: Vec<IntVec> = base_gens
        .iter()
        .map(|g| g.iter().cloned().chain(std::iter::repeat_n(BigInt::from(0), e)).collect())
        .collect();
    for i in 0..e {
        generators.push((0..d0 + e).map(|k| BigInt::from((k == d0 + i) as i64)).collect());
    }
    let base_faces = if base_gens.is_empty() { vec![Vec::new()] } else { face_ray_sets(d0, &base_gens) };
    let base_faces: Vec<Vec<usize>> =
        if base_faces.contains(&Vec::new()) { base_faces } else { std::iter::once(Vec::new()).chain(base_faces).collect() };
    let mut faces = Vec::new();
    for bf in &base_faces {
        let bdim = tropfm_core::cone::rank(&bf.iter().map(|&i| base_gens[i].clone()).collect::<Vec<_>>(), d0);
        for m in 0u64..1 << e {
            let contracted: Vec<usize> = (0..e).filter(|i| m >> i & 1 == 1).collect();
            let set: BTreeSet<(usize, usize)> = contracted.iter().map(|&i| edges[i]).collect();
            let ft = face_type(&f, bf, &set);
            faces.push(FmFace {
                base_rays: bf.clone(),
                dim: bdim + e - contracted.len(),
                stable: ft.as_ref().is_none_or(|t| t.is_stable()),
                code: ft.map(|t| t.code()),
                contracted,
            });
        }
    }
    Ok(FmCone { ambient_dim: d0 + e, generators, edges, dim: codim, faces })
}
