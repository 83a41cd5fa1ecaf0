//! Integer row reduction: Hermite and Smith normal forms, integer kernels and
//! saturation. Generic over the integer type so hot loops can run on `i64`.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

pub trait Int: Integer + Signed + Clone + Debug + Hash {}
impl Int for i64 {}
impl Int for i128 {}
impl Int for BigInt {}

pub type Mat<T> = Vec<Vec<T>>;

fn axpy<T: Int>(dst: &mut [T], q: &T, src: &[T]) {
    // dst -= q * src
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = d.clone() - q.clone() * s.clone();
        }
    }
}

/// Row-echelon reduction by unimodular row operations, pivoting only on the
/// first `pivot_cols` columns. Pivots end up positive with the entries above
/// them reduced into `[0, pivot)`. Returns the rank of the pivot block; rows
/// from `rank` on have a zero pivot block.
pub fn echelon<T: Int>(rows: &mut Mat<T>, pivot_cols: usize) -> usize {
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let mut have_pivot = false;
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if !rows[i][c].is_zero()
                    && best.is_none_or(|b| rows[i][c].abs() < rows[b][c].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            have_pivot = true;
            rows.swap(r, b);
            let mut clean = true;
            let (head, tail) = rows.split_at_mut(r + 1);
            let prow = &head[r];
            for row in tail.iter_mut() {
                if !row[c].is_zero() {
                    let q = row[c].div_floor(&prow[c]);
                    axpy(row, &q, prow);
                    if !row[c].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if have_pivot {
            if rows[r][c].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            let (head, tail) = rows.split_at_mut(r);
            let prow = &tail[0];
            for row in head.iter_mut() {
                let q = row[c].div_floor(&prow[c]);
                if !q.is_zero() {
                    axpy(row, &q, prow);
                }
            }
            r += 1;
        }
    }
    r
}

/// Canonical Hermite normal form of the row lattice; zero rows dropped.
pub fn hnf<T: Int>(rows: &[Vec<T>], ncols: usize) -> Mat<T> {
    let mut m: Mat<T> = rows.to_vec();
    let r = echelon(&mut m, ncols);
    m.truncate(r);
    m
}

pub fn rank<T: Int>(rows: &[Vec<T>], ncols: usize) -> usize {
    let mut m: Mat<T> = rows.to_vec();
    echelon(&mut m, ncols)
}

/// Basis (in HNF) of `{c ∈ ℤ^m : c·M = 0}` for an `m × k` matrix `M`.
pub fn left_kernel<T: Int>(m: &[Vec<T>], k: usize) -> Mat<T> {
    let nrows = m.len();
    let mut aug: Mat<T> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v = row.clone();
            v.extend((0..nrows).map(|j| if i == j { T::one() } else { T::zero() }));
            v
        })
        .collect();
    let r = echelon(&mut aug, k);
    let ker: Mat<T> = aug[r..].iter().map(|row| row[k..].to_vec()).collect();
    hnf(&ker, nrows)
}

pub fn transpose<T: Clone>(m: &[Vec<T>], ncols: usize) -> Mat<T> {
    (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Basis of `{w ∈ ℤ^d : M·w = 0}`.
pub fn right_kernel<T: Int>(m: &[Vec<T>], d: usize) -> Mat<T> {
    left_kernel(&transpose(m, d), m.len())
}

/// HNF basis of `ℤ^d ∩ span_ℚ(rows)`.
pub fn saturate<T: Int>(rows: &[Vec<T>], d: usize) -> Mat<T> {
    let w = right_kernel(rows, d);
    if w.is_empty() {
        return (0..d)
            .map(|i| (0..d).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
    }
    // columns of W are the kernel vectors
    let wt = transpose(&w, d);
    left_kernel(&wt, w.len())
}

pub fn mat_vec<T: Int>(m: &[Vec<T>], v: &[T]) -> Vec<T> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}

pub fn mat_mul<T: Int>(a: &[Vec<T>], b: &[Vec<T>], bcols: usize) -> Mat<T> {
    a.iter()
        .map(|row| {
            (0..bcols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(T::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn identity<T: Int>(n: usize) -> Mat<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

/// Smith normal form `U·M·V = D` with unimodular `U`, `V`. Also returns `V⁻¹`.
/// The diagonal of `D` is nonnegative and each entry divides the next.
pub struct Smith<T> {
    pub u: Mat<T>,
    pub d: Mat<T>,
    pub v: Mat<T>,
    pub v_inv: Mat<T>,
    pub rank: usize,
}

impl<T: Int> Smith<T> {
    pub fn invariants(&self) -> Vec<T> {
        (0..self.rank).map(|i| self.d[i][i].clone()).collect()
    }
}

pub fn smith<T: Int>(m: &[Vec<T>], ncols: usize) -> Smith<T> {
    let nrows = m.len();
    let mut a: Mat<T> = m.to_vec();
    let mut u = identity::<T>(nrows);
    let mut v = identity::<T>(ncols);
    let mut v_inv = identity::<T>(ncols);

    // column ops: col_j -= q col_i on a and v; row_i += q row_j on v_inv
    let col_sub = |a: &mut Mat<T>, v: &mut Mat<T>, v_inv: &mut Mat<T>, j: usize, i: usize, q: &T| {
        for row in a.iter_mut() {
            let t = row[i].clone();
            row[j] = row[j].clone() - q.clone() * t;
        }
        for row in v.iter_mut() {
            let t = row[i].clone();
            row[j] = row[j].clone() - q.clone() * t;
        }
        let rj = v_inv[j].clone();
        for (x, y) in v_inv[i].iter_mut().zip(rj.iter()) {
            *x = x.clone() + q.clone() * y.clone();
        }
    };
    let col_swap = |a: &mut Mat<T>, v: &mut Mat<T>, v_inv: &mut Mat<T>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        v_inv.swap(i, j);
    };
    let col_neg = |a: &mut Mat<T>, v: &mut Mat<T>, v_inv: &mut Mat<T>, i: usize| {
        for row in a.iter_mut() {
            row[i] = -row[i].clone();
        }
        for row in v.iter_mut() {
            row[i] = -row[i].clone();
        }
        for x in v_inv[i].iter_mut() {
            *x = -x.clone();
        }
    };

    let mut t = 0;
    while t < nrows.min(ncols) {
        // pivot: smallest nonzero entry in the lower-right block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        col_swap(&mut a, &mut v, &mut v_inv, t, pj);
        let mut dirty = false;
        for i in t + 1..nrows {
            if !a[i][t].is_zero() {
                let q = a[i][t].div_floor(&a[t][t]);
                let pr = a[t].clone();
                axpy(&mut a[i], &q, &pr);
                let ur = u[t].clone();
                axpy(&mut u[i], &q, &ur);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
        }
        for j in t + 1..ncols {
            if !a[t][j].is_zero() {
                let q = a[t][j].div_floor(&a[t][t]);
                col_sub(&mut a, &mut v, &mut v_inv, j, t, &q);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }
        // divisibility: fold a offending row into row t and redo
        let mut fixed = true;
        'outer: for i in t + 1..nrows {
            for j in t + 1..ncols {
                if !(a[i][j].clone() % a[t][t].clone()).is_zero() {
                    let ri = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(ri.iter()) {
                        *x = x.clone() + y.clone();
                    }
                    let ui = u[i].clone();
                    for (x, y) in u[t].iter_mut().zip(ui.iter()) {
                        *x = x.clone() + y.clone();
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        if a[t][t].is_negative() {
            col_neg(&mut a, &mut v, &mut v_inv, t);
        }
        t += 1;
    }
    Smith { u, d: a, v, v_inv, rank: t }
}
