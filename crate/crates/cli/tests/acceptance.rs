//! Acceptance run: one line per criterion. Each library result is checked
//! against a brute-force oracle where the criterion names one.
//!
//! Criteria 8 and 9 fail on this model of the slice moduli (see the README).
//! The run exits 0 only when every other criterion passes and those two
//! fail exactly as recorded, so any change in either direction shows up.

use std::collections::BTreeSet;
use std::process::ExitCode;

use num_traits::{One, Signed, Zero};
use tropfm_cli::accept::{inscribed_midpoints, run_criterion, CRITERIA};
use tropfm_core::rat::rat;
use tropfm_core::{Rat, RatVec};
use tropfm_degen::heights::for_each_config;
use tropfm_degen::moduli::at_height_one;
use tropfm_degen::{build_pi_delta, delta_comb_type, rigid_types};
use tropfm_grid::{build_pi, default_budget, enumerate_types, grid_codim, grid_comb_type, GridCombType, TropFan, TropPointTuple};

/// Failures that are recorded deviations, with a fragment the detail must
/// contain.
const RECORDED: [(usize, &str); 2] = [
    (8, "(3,2): 296 cones, 0 with more generators than dimension"),
    (9, "26/32 rigid rays certified; piecewise-linear lattice bijection on 32/32"),
];

// ---- criterion 1: strict total orders of the points and the origin ----

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

/// Element 0 is the origin, `1..=n` the points; positions left of the
/// origin go on ray 2, right of it on ray 1.
fn strict_orders(n: usize) -> (usize, bool) {
    let m = build_pi(&TropFan::disjoint(2), n).unwrap();
    let ours: BTreeSet<GridCombType> = m.pi.maximal_cells().iter().map(|&c| m.types[c].clone()).collect();
    let mut seen = BTreeSet::new();
    let orders = permutations(n + 1);
    for p in &orders {
        let at = |e: usize| p.iter().position(|&x| x == e).unwrap() as i64;
        let points = (1..=n)
            .map(|i| {
                let d = at(i) - at(0);
                if d > 0 {
                    vec![rat(d, 1), rat(0, 1)]
                } else {
                    vec![rat(0, 1), rat(-d, 1)]
                }
            })
            .collect();
        seen.insert(grid_comb_type(&TropPointTuple { r: 2, points }));
    }
    (orders.len(), seen.len() == orders.len() && seen == ours)
}

fn oracle_1() -> (bool, String) {
    let mut ok = true;
    let mut counts = Vec::new();
    for n in 2..=4 {
        let (k, same) = strict_orders(n);
        ok &= same;
        counts.push(k.to_string());
    }
    (ok, format!("strict orders {} match the maximal types", counts.join("/")))
}

// ---- criterion 5: divisors counted by their data ----

fn oracle_5() -> (bool, String) {
    let mut ok = true;
    let mut counts = Vec::new();
    for n in 2..=4usize {
        // a nonempty set of points pushed along one of three rays, or a set
        // of at least two points colliding at the origin
        let mut k = 0;
        for s in 1u32..1 << n {
            k += 3;
            if s.count_ones() >= 2 {
                k += 1;
            }
        }
        let base = enumerate_types(&TropFan::disjoint(3), n, default_budget()).unwrap().iter().filter(|t| grid_codim(t) == 1).count();
        ok &= base == 3 * ((1 << n) - 1) && k == (1 << (n + 2)) - (n + 3) - 1;
        counts.push(k.to_string());
    }
    (ok && counts == ["10", "25", "56"], format!("subset count {}", counts.join("/")))
}

// ---- criteria 6 and 8: vertex enumeration ----

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

fn row(f: &Aff) -> RatVec {
    f.a.iter().map(|&x| rat(x, 1)).collect()
}

fn eval(f: &Aff, u: &[Rat]) -> Rat {
    f.a.iter().zip(u).map(|(&a, x)| rat(a, 1) * x).sum::<Rat>() - rat(f.c, 1)
}

fn sum_rows(r: usize, n: usize) -> (Vec<RatVec>, RatVec) {
    let d = r * n;
    ((0..n).map(|i| (0..d).map(|k| if k / r == i { Rat::one() } else { Rat::zero() }).collect()).collect(), vec![Rat::one(); n])
}

/// Points of the slice where `r·n − n` hyperplanes of the arrangement meet
/// in a single point.
fn arrangement_vertices(r: usize, n: usize) -> BTreeSet<RatVec> {
    let fs = forms(r, n);
    let mut out = BTreeSet::new();
    subsets(fs.len(), r * n - n, &mut |s| {
        let (mut rows, mut rhs) = sum_rows(r, n);
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

fn oracle_6() -> (bool, String) {
    let mut ok = true;
    let mut counts = Vec::new();
    for (r, n) in [(2, 1), (2, 2), (3, 1)] {
        let oracle = arrangement_vertices(r, n);
        let m = build_pi_delta(r, n).unwrap();
        let ours: BTreeSet<RatVec> = rigid_types(&m).iter().map(|&(c, _)| at_height_one(&m.pi.ray_vectors(c)[0], r)).collect();
        ok &= ours == oracle;
        counts.push(oracle.len().to_string());
    }
    (ok, format!("arrangement vertices {}", counts.join("/")))
}

/// Vertices of the closure of the witness type: solved from every choice of
/// tight constraints among the weak inequalities.
fn oracle_8() -> (bool, String) {
    let (r, n) = (3, 3);
    let pts: Vec<RatVec> = [[2, 0, 2], [0, 3, 1], [0, 1, 3]].iter().map(|p| p.iter().map(|&x| rat(x, 4)).collect()).collect();
    let u: RatVec = pts.concat();
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for f in forms(r, n) {
        let v = eval(&f, &u);
        if v.is_zero() {
            eqs.push(f);
        } else if v.is_positive() {
            ineqs.push(f);
        } else {
            ineqs.push(Aff { a: f.a.iter().map(|x| -x).collect(), c: -f.c });
        }
    }
    let (mut rows, mut rhs) = sum_rows(r, n);
    for e in &eqs {
        let mut trial = rows.clone();
        trial.push(row(e));
        let mut t2 = rhs.clone();
        t2.push(rat(e.c, 1));
        if rank(trial.clone()) == rows.len() + 1 {
            rows = trial;
            rhs = t2;
        }
    }
    let mut vs = BTreeSet::new();
    subsets(ineqs.len(), r * n - rows.len(), &mut |s| {
        let (mut rr, mut hh) = (rows.clone(), rhs.clone());
        for &i in s {
            rr.push(row(&ineqs[i]));
            hh.push(rat(ineqs[i].c, 1));
        }
        if let Some(x) = solve(rr, hh) {
            if x.iter().all(|y| !y.is_negative()) && eqs.iter().all(|e| eval(e, &x).is_zero()) && ineqs.iter().all(|f| !eval(f, &x).is_negative()) {
                vs.insert(x);
            }
        }
    });
    let ty = delta_comb_type(&pts, &Rat::one()).unwrap();
    let ok = vs.len() == 4 && ty.cone_generators().len() == 4;
    (ok, format!("(3,3) witness closure has {} vertices", vs.len()))
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

// ---- criterion 7: smallest heights by direct search ----

fn min_int_height(pts: &[RatVec], bound: i64) -> Option<i64> {
    let r = pts[0].len();
    let want = delta_comb_type(pts, &Rat::one()).unwrap();
    (1..=bound).find(|&t| {
        let mut hit = false;
        for_each_config(r, pts.len(), t, |u| {
            if hit {
                return;
            }
            let q: Vec<RatVec> = u.chunks(r).map(|p| p.iter().map(|&x| rat(x, 1)).collect()).collect();
            hit = delta_comb_type(&q, &rat(t, 1)).is_ok_and(|ty| ty == want);
        });
        hit
    })
}

fn oracle_7() -> (bool, String) {
    let inscribed = min_int_height(&inscribed_midpoints(), 4);
    // the segment: both ends at height 1, the interior at 2
    let m = build_pi_delta(2, 1).unwrap();
    let mut lcm = 1;
    for c in (0..m.pi.len()).filter(|&c| !m.is_origin(c)) {
        let b: Vec<RatVec> = m.barycenter(c).chunks(2).map(|p| p.to_vec()).collect();
        let h = min_int_height(&b, 4).unwrap_or(0);
        lcm = num_integer::lcm(lcm, h);
    }
    (inscribed == Some(2) && lcm == 2, format!("inscribed type first at height {inscribed:?}, segment lcm {lcm}"))
}

fn oracle(id: usize) -> Option<(bool, String)> {
    match id {
        1 => Some(oracle_1()),
        5 => Some(oracle_5()),
        6 => Some(oracle_6()),
        7 => Some(oracle_7()),
        8 => Some(oracle_8()),
        _ => None,
    }
}

fn main() -> ExitCode {
    let budget = default_budget();
    let mut unexpected = Vec::new();
    let mut passed = 0;
    for id in 1..=CRITERIA {
        let o = run_criterion(id, budget);
        let mut ok = o.passed;
        let mut line = o.line();
        if let Some((agrees, what)) = oracle(id) {
            line += &format!(" | oracle {}: {what}", if agrees { "agrees" } else { "DISAGREES" });
            if !agrees {
                ok = false;
                line = line.replacen("[PASS]", "[FAIL]", 1);
            }
        }
        println!("{line}");
        let recorded = RECORDED.iter().find(|(k, _)| *k == id);
        match (ok, recorded) {
            (true, None) => passed += 1,
            (false, Some((_, sig))) if o.detail.contains(sig) => {}
            _ => unexpected.push(id),
        }
    }
    let recorded: Vec<String> = RECORDED.iter().map(|(k, _)| k.to_string()).collect();
    println!("{passed}/{CRITERIA} criteria pass; recorded deviations: {}", recorded.join(", "));
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
