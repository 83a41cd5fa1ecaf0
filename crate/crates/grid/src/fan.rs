//! Tropicalisations of simple normal crossings pairs: subcomplexes of the
//! orthant spanned by coordinate faces.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use tropfm_core::{ComplexBuilder, ConeComplex, IntLattice, IntVec};

use crate::error::GridError;

/// Cones are stored as bitmasks over the rays `0..r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropFan {
    r: usize,
    cones: BTreeSet<u32>,
}

impl TropFan {
    /// Downward closure of `cones` (0-based ray indices), plus all singletons.
    pub fn new(r: usize, cones: &[Vec<usize>]) -> Result<Self, GridError> {
        if r == 0 || r > 16 {
            return Err(GridError::InvalidFan(format!("unsupported number of rays {r}")));
        }
        let mut top: Vec<u32> = (0..r).map(|j| 1 << j).collect();
        for c in cones {
            let mut m = 0u32;
            for &j in c {
                if j >= r {
                    return Err(GridError::InvalidFan(format!("ray {} out of range", j + 1)));
                }
                m |= 1 << j;
            }
            top.push(m);
        }
        let mut set = BTreeSet::new();
        for m in top {
            // all submasks
            let mut s = m;
            loop {
                set.insert(s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & m;
            }
        }
        Ok(TropFan { r, cones: set })
    }

    pub fn full(r: usize) -> Self {
        Self::new(r, &[(0..r).collect()]).expect("valid")
    }

    /// `r` rays pairwise not spanning a cone.
    pub fn disjoint(r: usize) -> Self {
        Self::new(r, &[]).expect("valid")
    }

    /// Every fan on `r` rays (all downward-closed families containing the
    /// singletons).
    pub fn all(r: usize) -> Vec<TropFan> {
        let big: Vec<u32> = (1u32..1 << r).filter(|m| m.count_ones() >= 2).collect();
        let mut out = BTreeSet::new();
        for pick in 0u64..1 << big.len() {
            let chosen: Vec<u32> = (0..big.len()).filter(|&k| pick >> k & 1 == 1).map(|k| big[k]).collect();
            let closed = chosen.iter().all(|&m| {
                (0..r).filter(|j| m >> j & 1 == 1).all(|j| {
                    let sub = m & !(1 << j);
                    sub.count_ones() < 2 || chosen.contains(&sub)
                })
            });
            if closed {
                let cones: Vec<Vec<usize>> = chosen.iter().map(|&m| (0..r).filter(|j| m >> j & 1 == 1).collect()).collect();
                out.insert(Self::new(r, &cones).expect("valid"));
            }
        }
        out.into_iter().collect()
    }

    pub fn rays(&self) -> usize {
        self.r
    }

    pub fn is_cone(&self, mask: u32) -> bool {
        self.cones.contains(&mask)
    }

    pub fn cone_masks(&self) -> impl Iterator<Item = u32> + '_ {
        self.cones.iter().copied()
    }

    /// Cones as sorted 0-based ray lists.
    pub fn cones(&self) -> Vec<Vec<usize>> {
        self.cones.iter().map(|&m| (0..self.r).filter(|j| m >> j & 1 == 1).collect()).collect()
    }

    pub fn maximal_cones(&self) -> Vec<Vec<usize>> {
        self.cones
            .iter()
            .filter(|&&m| !self.cones.iter().any(|&o| o != m && o & m == m))
            .map(|&m| (0..self.r).filter(|j| m >> j & 1 == 1).collect())
            .collect()
    }

    /// The fan as a cone complex in `ℤ^r`.
    pub fn to_complex(&self) -> ConeComplex {
        let mut b = ComplexBuilder::new(IntLattice::standard(self.r));
        let mut cones: Vec<u32> = self.cones.iter().copied().collect();
        cones.sort_by_key(|m| (m.count_ones(), *m));
        for m in cones {
            let gens: Vec<IntVec> = (0..self.r)
                .filter(|j| m >> j & 1 == 1)
                .map(|j| (0..self.r).map(|k| BigInt::from((k == j) as i64)).collect())
                .collect();
            b.add_cell(&gens, format!("{m:b}"));
        }
        b.build()
    }

    /// `Σ^k` as a product complex.
    pub fn power(&self, k: usize) -> ConeComplex {
        let base = self.to_complex();
        let mut acc = base.clone();
        for _ in 1..k {
            acc = acc.product(&base);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_and_counts() {
        let f = TropFan::full(3);
        assert_eq!(f.cones().len(), 8);
        let d = TropFan::disjoint(3);
        assert_eq!(d.cones().len(), 4);
        assert!(!d.is_cone(0b11));
        assert_eq!(TropFan::all(1).len(), 1);
        assert_eq!(TropFan::all(2).len(), 2);
        assert_eq!(TropFan::all(3).len(), 9);
        assert!(TropFan::new(2, &[vec![0, 2]]).is_err());
    }

    #[test]
    fn complex_of_the_square() {
        let c = TropFan::full(2).to_complex();
        assert_eq!(c.len(), 4);
        assert!(c.validate().is_ok());
        assert_eq!(TropFan::disjoint(2).power(2).len(), 9);
    }
}
