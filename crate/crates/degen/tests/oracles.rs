//! Brute-force oracles for the slice moduli, written without the
//! arrangement code: forms are rebuilt from their definition and vertices
//! are found by solving every square subsystem.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use tropfm_core::rat::rat;
use tropfm_core::{Rat, RatVec};
use tropfm_degen::heights::{ray_height, sign_vector_height};
use tropfm_degen::moduli::at_height_one;
use tropfm_degen::types::threshold_forms;
use tropfm_degen::*;

/// `a·u − c` at height one.
#[derive(Clone)]
struct Aff {
    a: Vec<i64>,
    c: i64,
}

fn forms(r: usize, n: usize) -> Vec<Aff> {
    let d = r * n;
    let at = |i: usize, j: usize| i * r + j;
    let mut out = Vec::new();
    for k in 0..d {
        let mut a = vec![0; d];
        a[k] = 1;
        out.push(Aff { a, c: 0 });
    }
    for j in 0..r {
        for i in 0..n {
            for k in i + 1..n {
                let mut a = vec![0; d];
                a[at(i, j)] = 1;
                a[at(k, j)] = -1;
                out.push(Aff { a, c: 0 });
            }
        }
    }
    // lines of different points meeting on the slice
    for mask in 1usize..1 << r {
        let js: Vec<usize> = (0..r).filter(|j| mask >> j & 1 == 1).collect();
        if js.len() < 2 {
            continue;
        }
        let mut choice = vec![0usize; js.len()];
        loop {
            if choice.iter().any(|&i| i != choice[0]) {
                let mut a = vec![0; d];
                for (&j, &i) in js.iter().zip(&choice) {
                    a[at(i, j)] += 1;
                }
                out.push(Aff { a, c: 1 });
            }
            let mut p = 0;
            while p < choice.len() && choice[p] == n - 1 {
                choice[p] = 0;
                p += 1;
            }
            if p == choice.len() {
                break;
            }
            choice[p] += 1;
        }
    }
    out
}

/// Unique solution of the square system `rows·x = rhs`, if any.
fn solve(mut rows: Vec<RatVec>, mut rhs: RatVec) -> Option<RatVec> {
    let n = rows.len();
    for col in 0..n {
        let p = (col..n).find(|&i| !rows[i][col].is_zero())?;
        rows.swap(col, p);
        rhs.swap(col, p);
        for i in 0..n {
            if i != col && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &rows[col][col];
                for k in 0..n {
                    let v = &f * &rows[col][k];
                    rows[i][k] -= v;
                }
                let v = &f * &rhs[col];
                rhs[i] -= v;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &rows[i][i]).collect())
}

fn rank(mut rows: Vec<RatVec>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rk = 0;
    for col in 0..ncols {
        let Some(p) = (rk..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rk, p);
        for i in rk + 1..rows.len() {
            let f = &rows[i][col] / &rows[rk][col];
            for k in 0..ncols {
                let v = &f * &rows[rk][k];
                rows[i][k] -= v;
            }
        }
        rk += 1;
    }
    rk
}

fn subsets(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::new(), f);
}

/// Vertices of the polytope `{u ∈ Δ^n : eq = 0, ineq ≥ 0}` at height one, by
/// trying every choice of tight constraints.
fn vertices(r: usize, n: usize, eqs: &[Aff], ineqs: &[Aff]) -> BTreeSet<RatVec> {
    let d = r * n;
    let row = |f: &Aff| -> RatVec { f.a.iter().map(|&x| rat(x, 1)).collect() };
    let eval = |f: &Aff, u: &[Rat]| -> Rat { f.a.iter().zip(u).map(|(&a, x)| rat(a, 1) * x).sum::<Rat>() - rat(f.c, 1) };
    let mut base_rows: Vec<RatVec> = Vec::new();
    let mut base_rhs: RatVec = Vec::new();
    for i in 0..n {
        base_rows.push((0..d).map(|k| if k / r == i { Rat::one() } else { Rat::zero() }).collect());
        base_rhs.push(Rat::one());
    }
    for e in eqs {
        let mut trial = base_rows.clone();
        trial.push(row(e));
        if rank(trial) == base_rows.len() + 1 {
            base_rows.push(row(e));
            base_rhs.push(rat(e.c, 1));
        }
    }
    let mut out = BTreeSet::new();
    let need = d as isize - base_rows.len() as isize;
    if need < 0 {
        return out;
    }
    subsets(ineqs.len(), need as usize, &mut |s| {
        let mut rows = base_rows.clone();
        let mut rhs = base_rhs.clone();
        for &i in s {
            rows.push(row(&ineqs[i]));
            rhs.push(rat(ineqs[i].c, 1));
        }
        let Some(u) = solve(rows, rhs) else { return };
        if u.iter().all(|x| !x.is_negative()) && eqs.iter().all(|e| eval(e, &u).is_zero()) && ineqs.iter().all(|f| !eval(f, &u).is_negative()) {
            out.insert(u);
        }
    });
    out
}

fn arrangement_vertices(r: usize, n: usize) -> BTreeSet<RatVec> {
    // a vertex is where enough hyperplanes meet; no sign constraints
    let fs = forms(r, n);
    let d = r * n;
    let row = |f: &Aff| -> RatVec { f.a.iter().map(|&x| rat(x, 1)).collect() };
    let mut out = BTreeSet::new();
    subsets(fs.len(), d - n, &mut |s| {
        let mut rows: Vec<RatVec> = (0..n).map(|i| (0..d).map(|k| if k / r == i { Rat::one() } else { Rat::zero() }).collect()).collect();
        let mut rhs: RatVec = vec![Rat::one(); n];
        for &i in s {
            rows.push(row(&fs[i]));
            rhs.push(rat(fs[i].c, 1));
        }
        if let Some(u) = solve(rows, rhs) {
            if u.iter().all(|x| !x.is_negative()) {
                out.insert(u);
            }
        }
    });
    out
}

fn rigid_points(r: usize, n: usize) -> BTreeSet<RatVec> {
    let m = build_pi_delta(r, n).unwrap();
    rigid_types(&m).iter().map(|&(c, _)| at_height_one(&m.pi.ray_vectors(c)[0], r)).collect()
}

#[test]
fn rigid_types_are_arrangement_vertices() {
    for (r, n, want) in [(2, 1, 2), (2, 2, 4), (3, 1, 3), (2, 3, 8), (3, 2, 15)] {
        let oracle = arrangement_vertices(r, n);
        assert_eq!(oracle.len(), want, "({r},{n})");
        assert_eq!(rigid_points(r, n), oracle, "({r},{n})");
    }
}

#[test]
fn oracle_forms_match() {
    for (r, n) in [(2, 2), (3, 2), (2, 3)] {
        let mine: BTreeSet<(Vec<i64>, i64)> = forms(r, n).into_iter().map(|f| (f.a, f.c)).collect();
        let theirs: BTreeSet<(Vec<i64>, i64)> = threshold_forms(r, n).into_iter().map(|f| (f.a, f.c)).collect();
        assert_eq!(mine, theirs);
    }
}

fn config(pts: &[[i64; 3]], den: i64) -> Vec<RatVec> {
    pts.iter().map(|p| p.iter().map(|&x| rat(x, den)).collect()).collect()
}

#[test]
fn inscribed_ray_has_height_two() {
    let pts = config(&[[1, 1, 0], [0, 1, 1], [1, 0, 1]], 2);
    let ty = delta_comb_type(&pts, &Rat::one()).unwrap();
    assert!(ty.is_rigid());
    let gens = ty.cone_generators();
    assert_eq!(gens.len(), 1);
    assert_eq!(ray_height(&gens[0], 3), 2.into());
    let fs = threshold_forms(3, 3);
    assert_eq!(sign_vector_height(3, 3, &fs, &ty.signs, 4), Some(2));
}

/// A type whose polyhedron is a quadrilateral: point 1 on the edge
/// `x_2 = 0`, points 2 and 3 symmetric on the edge `x_1 = 0`.
#[test]
fn non_simplicial_witness_three_points() {
    let pts = config(&[[2, 0, 2], [0, 3, 1], [0, 1, 3]], 4);
    let ty = delta_comb_type(&pts, &Rat::one()).unwrap();
    let gens = ty.cone_generators();
    assert_eq!(ty.dim(), Some(2));
    assert_eq!(gens.len(), 4);

    // the closure of the type: zero forms stay zero, the others keep their
    // weak sign
    let fs = forms(3, 3);
    let theirs = threshold_forms(3, 3);
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for f in &fs {
        let k = theirs.iter().position(|g| g.a == f.a && g.c == f.c).unwrap();
        match ty.signs[k] {
            0 => eqs.push(f.clone()),
            1 => ineqs.push(f.clone()),
            _ => ineqs.push(Aff { a: f.a.iter().map(|x| -x).collect(), c: -f.c }),
        }
    }
    let vs = vertices(3, 3, &eqs, &ineqs);
    assert_eq!(vs.len(), 4);
}

#[test]
fn two_points_in_the_triangle_are_simplicial() {
    let m = build_pi_delta(3, 2).unwrap();
    assert_eq!(m.pi.len(), 296);
    assert!((0..m.pi.len()).all(|c| m.pi.cells[c].rays.len() == m.pi.cells[c].dim));
}
