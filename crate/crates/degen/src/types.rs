//! Combinatorial types of point configurations on `Δ`: sign vectors of the
//! threshold forms.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use tropfm_core::rat::{fmt_rat, primitive};
use tropfm_core::{Dimension, Halfspace, IntVec, Polyhedron, Rat, RatVec};

use crate::error::DegenError;

/// The linear form `a·u − c·t` on `(ℝ^r)^npts`, coordinate `(i, j)` at
/// index `i·r + j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Form {
    pub a: Vec<i64>,
    pub c: i64,
    pub name: String,
}

impl Form {
    pub fn eval_int(&self, u: &[i64], t: i64) -> i64 {
        self.a.iter().zip(u).map(|(a, x)| a * x).sum::<i64>() - self.c * t
    }

    pub fn eval(&self, u: &[Rat], t: &Rat) -> Rat {
        let mut s = -Rat::from_integer(BigInt::from(self.c)) * t;
        for (a, x) in self.a.iter().zip(u) {
            if *a != 0 {
                s += Rat::from_integer(BigInt::from(*a)) * x;
            }
        }
        s
    }

    fn coeffs(&self) -> RatVec {
        self.a.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect()
    }

    /// `form ≥ 0` at `t = 1`.
    pub fn halfspace(&self) -> Halfspace {
        Halfspace::new(self.coeffs(), Rat::from_integer(BigInt::from(self.c)))
    }

    pub fn negated(&self) -> Form {
        Form { a: self.a.iter().map(|x| -x).collect(), c: -self.c, name: format!("-({})", self.name) }
    }
}

fn coord(r: usize, i: usize, j: usize) -> usize {
    i * r + j
}

fn single(len: usize, k: usize) -> Vec<i64> {
    let mut a = vec![0; len];
    a[k] = 1;
    a
}

/// Forms for points `offset..offset + n` inside `npts` points: facets
/// `u_i^{(j)} ≥ 0`, comparisons `u_i^{(j)} − u_k^{(j)}`, and for every set `J`
/// of at least two coordinates and every non-constant choice of points
/// `(i_j)`, `Σ_{j∈J} u_{i_j}^{(j)} − t`. The last family decides where the
/// lines `x_j = u_{i_j}^{(j)}` of different points meet inside `Δ`.
fn forms_for(r: usize, n: usize, npts: usize, offset: usize) -> Vec<Form> {
    let d = r * npts;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..r {
            out.push(Form { a: single(d, coord(r, offset + i, j)), c: 0, name: format!("u{}({})", i + 1, j + 1) });
        }
    }
    for j in 0..r {
        for i in 0..n {
            for k in i + 1..n {
                let mut a = single(d, coord(r, offset + i, j));
                a[coord(r, offset + k, j)] = -1;
                out.push(Form { a, c: 0, name: format!("u{}({})-u{}({})", i + 1, j + 1, k + 1, j + 1) });
            }
        }
    }
    for mask in 1u32..1 << r {
        let js: Vec<usize> = (0..r).filter(|j| mask >> j & 1 == 1).collect();
        if js.len() < 2 {
            continue;
        }
        let total = n.pow(js.len() as u32);
        for code in 0..total {
            let choice: Vec<usize> = (0..js.len()).map(|p| code / n.pow(p as u32) % n).collect();
            if choice.iter().all(|&i| i == choice[0]) {
                continue;
            }
            let mut a = vec![0; d];
            let mut name = Vec::new();
            for (&j, &i) in js.iter().zip(&choice) {
                a[coord(r, offset + i, j)] += 1;
                name.push(format!("u{}({})", i + 1, j + 1));
            }
            out.push(Form { a, c: 1, name: format!("{}-t", name.join("+")) });
        }
    }
    out
}

/// Threshold forms of `n` points in `Δ ⊂ ℝ^r`.
pub fn threshold_forms(r: usize, n: usize) -> Vec<Form> {
    forms_for(r, n, n, 0)
}

/// Forms on `(x, u_1, …, u_n)`: the threshold forms of the `u`, the facets of
/// `x`, and `x^{(j)} − u_i^{(j)}`.
pub fn plus_forms(r: usize, n: usize) -> Vec<Form> {
    let d = r * (n + 1);
    let mut out = forms_for(r, n, n + 1, 1);
    for j in 0..r {
        out.push(Form { a: single(d, j), c: 0, name: format!("x({})", j + 1) });
    }
    for i in 1..=n {
        for j in 0..r {
            let mut a = single(d, j);
            a[coord(r, i, j)] = -1;
            out.push(Form { a, c: 0, name: format!("x({})-u{}({})", j + 1, i, j + 1) });
        }
    }
    out
}

pub fn signs_int(forms: &[Form], u: &[i64], t: i64) -> Vec<i8> {
    forms.iter().map(|f| f.eval_int(u, t).signum() as i8).collect()
}

pub fn signs(forms: &[Form], u: &[Rat], t: &Rat) -> Vec<i8> {
    forms
        .iter()
        .map(|f| {
            let v = f.eval(u, t);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// `Δ^npts` as a polytope in `(ℝ^r)^npts`.
pub fn simplex_power(r: usize, npts: usize) -> Polyhedron {
    let d = r * npts;
    let ineqs = (0..d).map(|k| Halfspace::new(unit_rat(d, k), Rat::zero())).collect();
    let eqs = (0..npts)
        .map(|i| {
            let a: RatVec = (0..d).map(|k| if k / r == i { Rat::one() } else { Rat::zero() }).collect();
            Halfspace::new(a, Rat::one())
        })
        .collect();
    Polyhedron::new(d, ineqs, eqs)
}

fn unit_rat(len: usize, k: usize) -> RatVec {
    (0..len).map(|i| if i == k { Rat::one() } else { Rat::zero() }).collect()
}

/// A sign condition `form ⋚ 0` at height one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub form: Form,
    /// `1` for `> 0`, `0` for `= 0`, `-1` for `< 0`.
    pub sign: i8,
}

/// The closure of the solution set of `system` inside `Δ^n`.
pub fn closed_polyhedron(r: usize, n: usize, system: &[Constraint]) -> Polyhedron {
    let base = simplex_power(r, n);
    let mut ineqs = base.inequalities().to_vec();
    let mut eqs = base.equations().to_vec();
    for c in system {
        match c.sign {
            0 => eqs.push(c.form.halfspace()),
            s if s > 0 => ineqs.push(c.form.halfspace()),
            _ => ineqs.push(c.form.negated().halfspace()),
        }
    }
    Polyhedron::new(r * n, ineqs, eqs)
}

/// Whether some configuration in `Δ^n` satisfies every condition, strict
/// ones strictly. A strict condition holding somewhere on the closure holds
/// on its whole relative interior, so one interior point decides.
pub fn type_feasible(r: usize, n: usize, system: &[Constraint]) -> bool {
    let q = closed_polyhedron(r, n, system);
    let Some(x) = q.relint_point() else {
        return false;
    };
    let one = Rat::one();
    system.iter().all(|c| c.sign == 0 || c.form.eval(&x, &one).signum() == Rat::from_integer(BigInt::from(c.sign)))
}

/// Sign vector of a configuration against [`threshold_forms`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DeltaCombType {
    pub r: usize,
    pub n: usize,
    pub signs: Vec<i8>,
}

impl fmt::Display for DeltaCombType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.signs.iter().map(|&x| match x { 1 => '+', 0 => '0', _ => '-' }).collect();
        write!(f, "{}", s)
    }
}

pub fn delta_comb_type(points: &[RatVec], t: &Rat) -> Result<DeltaCombType, DegenError> {
    let n = points.len();
    let r = points.first().map_or(0, |p| p.len());
    if r < 2 || n == 0 {
        return Err(DegenError::BadShape { r, n });
    }
    for (i, p) in points.iter().enumerate() {
        let sum: Rat = p.iter().sum();
        if p.len() != r || sum != *t {
            return Err(DegenError::HeightMismatch { point: i + 1, sum: fmt_rat(&sum), t: fmt_rat(t) });
        }
    }
    let flat: RatVec = points.iter().flatten().cloned().collect();
    Ok(DeltaCombType { r, n, signs: signs(&threshold_forms(r, n), &flat, t) })
}

impl DeltaCombType {
    pub fn system(&self) -> Vec<Constraint> {
        threshold_forms(self.r, self.n).into_iter().zip(&self.signs).map(|(form, &sign)| Constraint { form, sign }).collect()
    }

    pub fn is_feasible(&self) -> bool {
        type_feasible(self.r, self.n, &self.system())
    }

    /// `μ_τ`: the closure of the configurations of this type, at height one.
    pub fn polyhedron(&self) -> Polyhedron {
        closed_polyhedron(self.r, self.n, &self.system())
    }

    pub fn dim(&self) -> Option<usize> {
        match self.polyhedron().dimension() {
            Dimension::Empty => None,
            Dimension::Dim(k) => Some(k),
        }
    }

    pub fn is_rigid(&self) -> bool {
        self.dim() == Some(0)
    }

    /// A configuration of this type at height one.
    pub fn representative(&self) -> Option<RatVec> {
        self.polyhedron().relint_point()
    }

    /// Primitive generators of the cone over `μ_τ`.
    pub fn cone_generators(&self) -> Vec<IntVec> {
        let mut g: Vec<IntVec> = self.polyhedron().vrep().vertices.iter().map(|v| primitive(v)).collect();
        g.sort();
        g
    }

    /// Whether points `i` and `k` (1-based) coincide.
    pub fn coincide(&self, i: usize, k: usize) -> bool {
        if i == k {
            return true;
        }
        let (r, d) = (self.r, self.r * self.n);
        let (i, k) = (i.min(k), i.max(k));
        let forms = threshold_forms(r, self.n);
        (0..r).all(|j| {
            let mut a = vec![0; d];
            a[coord(r, i - 1, j)] = 1;
            a[coord(r, k - 1, j)] = -1;
            forms.iter().zip(&self.signs).any(|(f, &s)| f.a == a && f.c == 0 && s == 0)
        })
    }

    /// Points grouped by position, in order of first point.
    pub fn vertex_groups(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = Vec::new();
        for k in 1..=self.n {
            match out.iter_mut().find(|g| self.coincide(g[0], k)) {
                Some(g) => g.push(k),
                None => out.push(vec![k]),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropfm_core::rat::rat;

    fn pt(v: &[(i64, i64)]) -> RatVec {
        v.iter().map(|&(a, b)| rat(a, b)).collect()
    }

    #[test]
    fn form_counts() {
        assert_eq!(threshold_forms(2, 1).len(), 2);
        // 6 facets, 3 comparisons, 6 + 6 sums
        assert_eq!(threshold_forms(3, 2).len(), 21);
        assert_eq!(plus_forms(2, 1).len(), 2 + 2 + 2);
    }

    #[test]
    fn vertex_type() {
        let t = delta_comb_type(&[pt(&[(1, 1), (0, 1), (0, 1)])], &Rat::one()).unwrap();
        assert_eq!(t.to_string(), "+00");
        assert!(t.is_rigid());
        assert_eq!(t.cone_generators(), vec![tropfm_core::rat::int_vec(&[1, 0, 0])]);
    }

    #[test]
    fn infeasible_system() {
        let f = threshold_forms(2, 2).into_iter().find(|f| f.name == "u1(1)-u2(1)").unwrap();
        let sys = [Constraint { form: f.clone(), sign: 1 }, Constraint { form: f.negated(), sign: 1 }];
        assert!(!type_feasible(2, 2, &sys));
        assert!(type_feasible(2, 2, &sys[..1]));
    }

    #[test]
    fn non_rigid_type() {
        // one point inside an edge, one in the interior
        let t = delta_comb_type(&[pt(&[(1, 2), (1, 2), (0, 1)]), pt(&[(1, 4), (1, 4), (1, 2)])], &Rat::one()).unwrap();
        assert!(t.is_feasible());
        assert!(t.dim().unwrap() > 0);
        assert_eq!(t.vertex_groups(), vec![vec![1], vec![2]]);
    }

    #[test]
    fn coincident_points() {
        let p = pt(&[(1, 3), (2, 3)]);
        let t = delta_comb_type(&[p.clone(), p], &Rat::one()).unwrap();
        assert_eq!(t.vertex_groups(), vec![vec![1, 2]]);
    }
}
