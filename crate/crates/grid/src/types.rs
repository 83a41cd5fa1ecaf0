//! Combinatorial types of marked grid subdivisions: one ordered partition of
//! `{0, 1, …, n}` per ray, with `0` in the lowest block.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use tropfm_core::IntVec;

use crate::error::GridError;
use crate::fan::TropFan;

/// `levels[j][k]` is the block of index `k` in the ordered partition of ray
/// `j`; `levels[j][0] == 0` and the values used form `0..=depth(j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridCombType {
    pub levels: Vec<Vec<u8>>,
}

/// A ray of a moduli cone: the points of `mask` move together along `ray`.
/// Bit `k − 1` of `mask` stands for point `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridRay {
    pub ray: usize,
    pub mask: u32,
}

impl GridRay {
    /// Coordinates in `(ℝ^r)^npts`, point `k` occupying block `k − 1`.
    pub fn to_vec(self, r: usize, npts: usize) -> IntVec {
        let mut v = vec![BigInt::from(0); r * npts];
        for k in 0..npts {
            if self.mask >> k & 1 == 1 {
                v[k * r + self.ray] = BigInt::from(1);
            }
        }
        v
    }
}

impl GridCombType {
    pub fn rays(&self) -> usize {
        self.levels.len()
    }

    pub fn npts(&self) -> usize {
        self.levels.first().map_or(0, |l| l.len() - 1)
    }

    pub fn depth(&self, j: usize) -> u8 {
        self.levels[j].iter().copied().max().unwrap_or(0)
    }

    /// Ordered partition `T_j` of `{0, …, n}`.
    pub fn partition(&self, j: usize) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.depth(j) as usize + 1];
        for (k, &l) in self.levels[j].iter().enumerate() {
            blocks[l as usize].push(k);
        }
        blocks
    }

    pub fn from_partitions(parts: &[Vec<Vec<usize>>]) -> Option<Self> {
        let npts = parts.first()?.iter().map(|b| b.len()).sum::<usize>().checked_sub(1)?;
        let mut levels = Vec::new();
        for p in parts {
            let mut l = vec![u8::MAX; npts + 1];
            for (b, block) in p.iter().enumerate() {
                if block.is_empty() {
                    return None;
                }
                for &k in block {
                    if k > npts || l[k] != u8::MAX {
                        return None;
                    }
                    l[k] = b as u8;
                }
            }
            if l.contains(&u8::MAX) || l[0] != 0 {
                return None;
            }
            levels.push(l);
        }
        Some(GridCombType { levels })
    }

    /// Rays `j` on which point `k` sits away from the origin.
    pub fn support(&self, k: usize) -> u32 {
        (0..self.rays()).filter(|&j| self.levels[j][k] > 0).fold(0, |m, j| m | 1 << j)
    }

    pub fn is_valid(&self, fan: &TropFan) -> bool {
        self.rays() == fan.rays() && (1..=self.npts()).all(|k| fan.is_cone(self.support(k)))
    }

    /// Sum over rays of (number of blocks − 1).
    pub fn codim(&self) -> usize {
        (0..self.rays()).map(|j| self.depth(j) as usize).sum()
    }

    /// Generators of the cone of this type: for ray `j` and level `m ≥ 1`,
    /// the points at level `≥ m` move together along `j`.
    pub fn generators(&self) -> Vec<GridRay> {
        let mut out = Vec::with_capacity(self.codim());
        for (j, l) in self.levels.iter().enumerate() {
            for m in 1..=self.depth(j) {
                let mask = (1..l.len()).filter(|&k| l[k] >= m).fold(0u32, |a, k| a | 1 << (k - 1));
                out.push(GridRay { ray: j, mask });
            }
        }
        out
    }

    pub fn generator_vectors(&self) -> Vec<IntVec> {
        let (r, n) = (self.rays(), self.npts());
        self.generators().into_iter().map(|g| g.to_vec(r, n)).collect()
    }

    /// The type whose generators are exactly `gens`, if any.
    pub fn from_generators(r: usize, npts: usize, gens: &[GridRay]) -> Option<Self> {
        let mut levels = vec![vec![0u8; npts + 1]; r];
        for j in 0..r {
            let mut chain: Vec<u32> = gens.iter().filter(|g| g.ray == j).map(|g| g.mask).collect();
            chain.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
            for w in chain.windows(2) {
                if w[0] & w[1] != w[1] || w[0] == w[1] {
                    return None;
                }
            }
            for m in &chain {
                if *m == 0 || *m >> npts != 0 {
                    return None;
                }
                for k in 1..=npts {
                    if m >> (k - 1) & 1 == 1 {
                        levels[j][k] += 1;
                    }
                }
            }
        }
        if gens.iter().any(|g| g.ray >= r) {
            return None;
        }
        Some(GridCombType { levels })
    }

    /// Position of point `k` in the grid: its level on each ray. Points with
    /// equal positions sit at the same vertex.
    pub fn vertex_of(&self, k: usize) -> Vec<u8> {
        self.levels.iter().map(|l| l[k]).collect()
    }

    /// Marked vertices with the points they carry, in order of first point.
    pub fn marked_vertices(&self) -> Vec<(Vec<u8>, Vec<usize>)> {
        let mut out: Vec<(Vec<u8>, Vec<usize>)> = Vec::new();
        for k in 1..=self.npts() {
            let v = self.vertex_of(k);
            match out.iter_mut().find(|(w, _)| *w == v) {
                Some((_, pts)) => pts.push(k),
                None => out.push((v, vec![k])),
            }
        }
        out
    }

    /// Type of the tuple with point `i` duplicated as a new first point.
    pub fn with_duplicate_first(&self, i: usize) -> GridCombType {
        let levels = self
            .levels
            .iter()
            .map(|l| {
                let mut v = vec![0, l[i]];
                v.extend_from_slice(&l[1..]);
                v
            })
            .collect();
        GridCombType { levels }
    }

    /// Type after forgetting point `k`, with levels renormalised.
    pub fn forget(&self, k: usize) -> GridCombType {
        let levels = self
            .levels
            .iter()
            .map(|l| {
                let mut v: Vec<u8> = l.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).collect();
                let mut used: Vec<u8> = v.clone();
                used.sort();
                used.dedup();
                for x in v.iter_mut() {
                    *x = used.iter().position(|u| u == x).unwrap() as u8;
                }
                v
            })
            .collect();
        GridCombType { levels }
    }
}

impl fmt::Display for GridCombType {
    /// Rays separated by `;`, blocks by `|`, e.g. `0|1,2;0,1|2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rays: Vec<String> = (0..self.rays())
            .map(|j| {
                self.partition(j)
                    .iter()
                    .map(|b| b.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","))
                    .collect::<Vec<_>>()
                    .join("|")
            })
            .collect();
        write!(f, "{}", rays.join(";"))
    }
}

impl Serialize for GridCombType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let parts: Vec<Vec<Vec<usize>>> = (0..self.rays()).map(|j| self.partition(j)).collect();
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GridCombType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts: Vec<Vec<Vec<usize>>> = Vec::deserialize(d)?;
        GridCombType::from_partitions(&parts).ok_or_else(|| serde::de::Error::custom("not an ordered partition with 0 first"))
    }
}

pub fn grid_codim(t: &GridCombType) -> usize {
    t.codim()
}

/// All level vectors `l` on `{0, …, npts}` with `l[0] = 0` and image an
/// initial segment.
pub fn ray_levels(npts: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; npts + 1];
    fn rec(k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k == cur.len() {
            let mut used: Vec<u8> = cur.clone();
            used.sort();
            used.dedup();
            if used.iter().enumerate().all(|(i, &u)| i as u8 == u) {
                out.push(cur.clone());
            }
            return;
        }
        for v in 0..cur.len() as u8 {
            cur[k] = v;
            rec(k + 1, cur, out);
        }
    }
    rec(1, &mut cur, &mut out);
    out.sort();
    out
}

/// Streams every valid type for `npts` points on `fan` in lexicographic
/// order of per-ray level vectors.
pub fn for_each_type(fan: &TropFan, npts: usize, mut f: impl FnMut(&GridCombType)) {
    let per_ray = ray_levels(npts);
    let r = fan.rays();
    // points' supports so far
    let mut supp = vec![0u32; npts + 1];
    let mut t = GridCombType { levels: vec![Vec::new(); r] };
    fn rec(
        j: usize,
        fan: &TropFan,
        per_ray: &[Vec<u8>],
        supp: &mut Vec<u32>,
        t: &mut GridCombType,
        f: &mut dyn FnMut(&GridCombType),
    ) {
        if j == fan.rays() {
            f(t);
            return;
        }
        for l in per_ray {
            let ok = (1..l.len()).all(|k| l[k] == 0 || fan.is_cone(supp[k] | 1 << j));
            if !ok {
                continue;
            }
            for k in 1..l.len() {
                if l[k] > 0 {
                    supp[k] |= 1 << j;
                }
            }
            t.levels[j] = l.clone();
            rec(j + 1, fan, per_ray, supp, t, f);
            for k in 1..l.len() {
                supp[k] &= !(1 << j);
            }
        }
    }
    rec(0, fan, &per_ray, &mut supp, &mut t, &mut f);
}

/// Number of valid types, counted without materialising them.
pub fn count_types(fan: &TropFan, npts: usize) -> u64 {
    // group points by support: count assignments of supports, then per-ray
    // level vectors compatible with them
    let per_ray = ray_levels(npts);
    let r = fan.rays();
    let mut memo = std::collections::HashMap::new();
    fn rec(j: usize, r: usize, fan: &TropFan, per_ray: &[Vec<u8>], supp: &mut Vec<u32>, memo: &mut std::collections::HashMap<(usize, Vec<u32>), u64>) -> u64 {
        if j == r {
            return 1;
        }
        let key = (j, supp.clone());
        if let Some(&c) = memo.get(&key) {
            return c;
        }
        let mut total = 0;
        for l in per_ray {
            if !(1..l.len()).all(|k| l[k] == 0 || fan.is_cone(supp[k] | 1 << j)) {
                continue;
            }
            let saved = supp.clone();
            for k in 1..l.len() {
                if l[k] > 0 {
                    supp[k] |= 1 << j;
                }
            }
            total += rec(j + 1, r, fan, per_ray, supp, memo);
            *supp = saved;
        }
        memo.insert(key, total);
        total
    }
    let mut supp = vec![0u32; npts + 1];
    rec(0, r, fan, &per_ray, &mut supp, &mut memo)
}

/// All valid types, refusing when their number exceeds `budget`.
pub fn enumerate_types(fan: &TropFan, npts: usize, budget: u64) -> Result<Vec<GridCombType>, GridError> {
    if npts == 0 {
        return Err(GridError::NoPoints);
    }
    let count = count_types(fan, npts);
    if count > budget {
        return Err(GridError::SizeLimit { count, budget });
    }
    let mut out = Vec::with_capacity(count as usize);
    for_each_type(fan, npts, |t| out.push(t.clone()));
    out.sort_by(|a, b| (a.codim(), a).cmp(&(b.codim(), b)));
    Ok(out)
}

/// Enumeration budget: `TROPFM_BUDGET` if set, else one million.
pub fn default_budget() -> u64 {
    std::env::var("TROPFM_BUDGET").ok().and_then(|s| s.parse().ok()).unwrap_or(1_000_000)
}
