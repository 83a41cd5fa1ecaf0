//! Double description: extreme rays and lineality of `{y : A·y ≥ 0, E·y = 0}`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::rat::{dot, primitive_int, IntVec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet(Vec<u64>);

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64).max(1)])
    }
    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    pub fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| k * 64 + b)
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct DdResult {
    pub rays: Vec<IntVec>,
    pub lines: Vec<IntVec>,
}

fn combine(a: &BigInt, x: &[BigInt], b: &BigInt, y: &[BigInt]) -> IntVec {
    // a·x + b·y, made primitive
    let v: IntVec = x.iter().zip(y).map(|(p, q)| a * p + b * q).collect();
    primitive_int(&v)
}

/// Extreme rays and a lineality basis of the polyhedral cone
/// `{y ∈ ℝ^d : ineqs·y ≥ 0, eqs·y = 0}`. Rays are primitive integer vectors.
pub fn cone_dd(d: usize, ineqs: &[IntVec], eqs: &[IntVec]) -> DdResult {
    let total = ineqs.len() + eqs.len();
    let mut lines: Vec<IntVec> = (0..d)
        .map(|i| (0..d).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    let mut rays: Vec<(IntVec, BitSet)> = Vec::new();

    let constraints = eqs.iter().map(|c| (c, true)).chain(ineqs.iter().map(|c| (c, false)));
    for (k, (c, is_eq)) in constraints.enumerate() {
        if let Some(li) = lines.iter().position(|l| !dot(c, l).is_zero()) {
            let l = lines.swap_remove(li);
            let cl = dot(c, &l);
            let abs_cl = cl.abs();
            let sgn = BigInt::from(if cl.is_positive() { 1 } else { -1 });
            for other in lines.iter_mut() {
                let co = dot(c, other);
                if !co.is_zero() {
                    *other = combine(&abs_cl, other, &(-(&sgn * &co)), &l);
                }
            }
            for (r, tight) in rays.iter_mut() {
                let cr = dot(c, r);
                if !cr.is_zero() {
                    *r = combine(&abs_cl, r, &(-(&sgn * &cr)), &l);
                }
                tight.insert(k);
            }
            if !is_eq {
                let dir: IntVec = if cl.is_positive() { l } else { l.iter().map(|x| -x).collect() };
                let mut tight = BitSet::new(total);
                for j in 0..k {
                    tight.insert(j);
                }
                rays.push((dir, tight));
            }
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| dot(c, r)).collect();
        let mut next: Vec<(IntVec, BitSet)> = Vec::new();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        for p in &pos {
            for q in &neg {
                let common = rays[*p].1.and(&rays[*q].1);
                let adjacent = rays.iter().enumerate().all(|(i, (_, t))| {
                    i == *p || i == *q || !common.is_subset(t)
                });
                if adjacent {
                    let v = combine(&vals[*p], &rays[*q].0, &(-&vals[*q]), &rays[*p].0);
                    let mut t = common;
                    t.insert(k);
                    next.push((v, t));
                }
            }
        }
        for (i, (r, t)) in rays.iter().enumerate() {
            if vals[i].is_zero() {
                let mut t = t.clone();
                t.insert(k);
                next.push((r.clone(), t));
            } else if vals[i].is_positive() && !is_eq {
                next.push((r.clone(), t.clone()));
            }
        }
        rays = next;
    }
    DdResult { rays: rays.into_iter().map(|(r, _)| r).collect(), lines }
}
