//! Gaussian elimination over ℚ.

use num_traits::{One, Zero};

use crate::rat::{Rat, RatVec};

pub type RatMat = Vec<RatVec>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut RatMat, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(prow.iter()) {
                    if !y.is_zero() {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[RatVec], ncols: usize) -> usize {
    let mut a = m.to_vec();
    rref(&mut a, ncols).len()
}

/// Basis of `{x : M·x = 0}`.
pub fn nullspace(m: &[RatVec], ncols: usize) -> RatMat {
    let mut a = m.to_vec();
    let piv = rref(&mut a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (i, &p) in piv.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `c·B = x` for the row vector `c`, where the rows of `B` are linearly
/// independent. Returns `None` when `x` is outside the row space.
pub fn solve_left(b: &[RatVec], x: &[Rat]) -> Option<RatVec> {
    let k = b.len();
    let d = x.len();
    // columns of the system: unknowns c_1..c_k, equations per coordinate
    let mut sys: RatMat = (0..d)
        .map(|j| {
            let mut row: RatVec = b.iter().map(|bi| bi[j].clone()).collect();
            row.push(x[j].clone());
            row
        })
        .collect();
    let piv = rref(&mut sys, k + 1);
    if piv.contains(&k) {
        return None;
    }
    let mut c = vec![Rat::zero(); k];
    for (i, &p) in piv.iter().enumerate() {
        c[p] = sys[i][k].clone();
    }
    Some(c)
}

pub fn mat_vec(m: &[RatVec], v: &[Rat]) -> RatVec {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn mat_mul(a: &[RatVec], b: &[RatVec], bcols: usize) -> RatMat {
    a.iter()
        .map(|row| {
            (0..bcols)
                .map(|j| row.iter().zip(b).map(|(x, br)| x * &br[j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[RatVec], ncols: usize) -> RatMat {
    (0..ncols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn identity(n: usize) -> RatMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

/// Inverse of a square matrix, if invertible.
pub fn inverse(m: &[RatVec]) -> Option<RatMat> {
    let n = m.len();
    let mut aug: RatMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug, n);
    if piv.len() < n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn nullspace_and_solve() {
        let m = vec![vec![rat(1, 1), rat(1, 1), rat(0, 1)]];
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(mat_vec(&m, v)[0].is_zero());
        }
        let b = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(0, 1), rat(2, 1)]];
        let c = solve_left(&b, &[rat(1, 1), rat(3, 1)]).unwrap();
        assert_eq!(c, vec![rat(1, 1), rat(1, 1)]);
        assert!(solve_left(&b[..1], &[rat(1, 1), rat(3, 1)]).is_none());
    }

    #[test]
    fn invert() {
        let m = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv, 2), identity(2));
    }
}
