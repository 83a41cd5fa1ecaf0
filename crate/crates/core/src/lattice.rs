//! Sublattices of ℤ^n stored by a canonical Hermite basis.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;
use crate::intmat::{self, Mat};
use crate::rat::{rat_int, IntVec, Rat, RatVec};
use crate::ratmat;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntLattice {
    rank_ambient: usize,
    basis: Mat<BigInt>,
}

impl IntLattice {
    /// Lattice generated by `gens` (any generating set; dependent rows allowed).
    pub fn from_generators(ambient: usize, gens: &[IntVec]) -> Self {
        IntLattice { rank_ambient: ambient, basis: intmat::hnf(gens, ambient) }
    }

    pub fn standard(ambient: usize) -> Self {
        IntLattice { rank_ambient: ambient, basis: intmat::identity(ambient) }
    }

    pub fn zero(ambient: usize) -> Self {
        IntLattice { rank_ambient: ambient, basis: Vec::new() }
    }

    /// `ℤ^d ∩ span_ℚ(gens)`.
    pub fn saturated(ambient: usize, gens: &[IntVec]) -> Self {
        if gens.iter().all(|g| g.iter().all(|x| x.is_zero())) {
            return Self::zero(ambient);
        }
        IntLattice { rank_ambient: ambient, basis: intmat::saturate(gens, ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.rank_ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &Mat<BigInt> {
        &self.basis
    }

    pub fn scaled(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        let gens: Mat<BigInt> = self.basis.iter().map(|r| r.iter().map(|x| x * &k).collect()).collect();
        Self::from_generators(self.rank_ambient, &gens)
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the rational span.
    pub fn coordinates(&self, v: &[Rat]) -> Option<RatVec> {
        if self.basis.is_empty() {
            return v.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        let b: Vec<RatVec> = self.basis.iter().map(|r| r.iter().map(rat_int).collect()).collect();
        ratmat::solve_left(&b, v)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let rv: RatVec = v.iter().map(rat_int).collect();
        self.contains_rat(&rv)
    }

    pub fn contains_rat(&self, v: &[Rat]) -> bool {
        match self.coordinates(v) {
            Some(c) => c.iter().all(|x| x.is_integer()),
            None => false,
        }
    }

    /// `self ∩ span_ℚ(vectors)`.
    pub fn intersect_span(&self, vectors: &[IntVec]) -> Self {
        let d = self.rank_ambient;
        if vectors.iter().all(|v| v.iter().all(|x| x.is_zero())) {
            return Self::zero(d);
        }
        // W: integer basis of span(vectors)^⊥
        let w = intmat::right_kernel(vectors, d);
        if w.is_empty() {
            return self.clone();
        }
        // c·B·Wᵀ = 0
        let wt = intmat::transpose(&w, d);
        let bw = intmat::mat_mul(&self.basis, &wt, w.len());
        let cs = intmat::left_kernel(&bw, w.len());
        let gens = intmat::mat_mul(&cs, &self.basis, d);
        Self::from_generators(d, &gens)
    }

    /// Image under the integer matrix `f` (rows = target coordinates).
    pub fn image(&self, f: &[IntVec], target_dim: usize) -> Result<Self, CoreError> {
        if f.len() != target_dim {
            return Err(CoreError::DimensionMismatch { expected: target_dim, found: f.len() });
        }
        if let Some(row) = f.iter().find(|r| r.len() != self.rank_ambient) {
            return Err(CoreError::DimensionMismatch { expected: self.rank_ambient, found: row.len() });
        }
        let gens: Mat<BigInt> = self.basis.iter().map(|b| intmat::mat_vec(f, b)).collect();
        Ok(Self::from_generators(target_dim, &gens))
    }

    /// Image under a rational matrix; fails if some image is not integral.
    pub fn image_rat(&self, f: &[RatVec], target_dim: usize) -> Result<Self, CoreError> {
        let mut gens = Vec::new();
        for b in &self.basis {
            let bv: RatVec = b.iter().map(rat_int).collect();
            let img = ratmat::mat_vec(f, &bv);
            if img.len() != target_dim {
                return Err(CoreError::DimensionMismatch { expected: target_dim, found: img.len() });
            }
            if !img.iter().all(|x| x.is_integer()) {
                return Err(CoreError::NotInLattice);
            }
            gens.push(img.iter().map(|x| x.to_integer()).collect());
        }
        Ok(Self::from_generators(target_dim, &gens))
    }

    /// Index of `self` in `other`, when `self ⊆ other` and ranks agree.
    pub fn index_in(&self, other: &IntLattice) -> Option<BigInt> {
        if self.rank() != other.rank() {
            return None;
        }
        if self.rank() == 0 {
            return Some(BigInt::one());
        }
        let mut coords: Mat<BigInt> = Vec::new();
        for b in &self.basis {
            let c = other.coordinates(&b.iter().map(rat_int).collect::<Vec<_>>())?;
            if !c.iter().all(|x| x.is_integer()) {
                return None;
            }
            coords.push(c.iter().map(|x| x.to_integer()).collect());
        }
        let s = intmat::smith(&coords, other.rank());
        Some(s.invariants().iter().fold(BigInt::one(), |a, x| a * x.abs()))
    }

    pub fn is_sublattice_of(&self, other: &IntLattice) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }
}

/// Primitive generator of the ray through `dir` in `lattice`: the smallest
/// positive multiple of `dir` lying in the lattice.
pub fn lattice_primitive(lattice: &IntLattice, dir: &[BigInt]) -> Option<IntVec> {
    let l = lattice.intersect_span(&[dir.to_vec()]);
    if l.rank() != 1 {
        return None;
    }
    let g = &l.basis()[0];
    // orient along dir
    let pos = g.iter().zip(dir).any(|(a, b)| (a.is_positive() && b.is_positive()) || (a.is_negative() && b.is_negative()));
    Some(if pos { g.clone() } else { g.iter().map(|x| -x).collect() })
}
