//! Tropical point tuples and marked grid subdivisions.

use num_traits::{Signed, Zero};
use serde::Serialize;
use tropfm_core::{Rat, RatVec};

use crate::error::GridError;
use crate::fan::TropFan;
use crate::types::GridCombType;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropPointTuple {
    pub r: usize,
    /// `points[i][j]` is the coordinate of point `i + 1` on ray `j`.
    pub points: Vec<RatVec>,
}

impl TropPointTuple {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Coordinates flattened point by point.
    pub fn flat(&self) -> RatVec {
        self.points.iter().flatten().cloned().collect()
    }
}

fn support(p: &[Rat]) -> u32 {
    p.iter().enumerate().filter(|(_, x)| x.is_positive()).fold(0, |m, (j, _)| m | 1 << j)
}

/// Validates a matrix of valuations against the fan.
pub fn tropicalise(vals: &[RatVec], fan: &TropFan) -> Result<TropPointTuple, GridError> {
    let r = fan.rays();
    for (i, row) in vals.iter().enumerate() {
        if row.len() != r {
            return Err(GridError::Core(tropfm_core::CoreError::DimensionMismatch { expected: r, found: row.len() }));
        }
        if let Some(j) = row.iter().position(|x| x.is_negative()) {
            return Err(GridError::Negative { point: i + 1, ray: j + 1 });
        }
        if !fan.is_cone(support(row)) {
            return Err(GridError::NotInSupport(i + 1));
        }
    }
    Ok(TropPointTuple { r, points: vals.to_vec() })
}

/// Product of ray subdivisions with a marking of the points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedGridSubdivision {
    /// Per ray, the strictly increasing positive break points.
    #[serde(serialize_with = "ser_breaks")]
    pub breaks: Vec<Vec<Rat>>,
    /// Vertex marked by each point, as coordinates.
    #[serde(serialize_with = "ser_breaks")]
    pub marking: Vec<RatVec>,
}

fn ser_breaks<S: serde::Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<Vec<String>> = v.iter().map(|r| tropfm_core::rat::fmt_vec(r)).collect();
    strs.serialize(s)
}

impl MarkedGridSubdivision {
    /// Breaks are positive, increasing, and each equals some marked coordinate;
    /// marked vertices lie on the grid.
    pub fn is_valid(&self) -> bool {
        self.breaks.iter().enumerate().all(|(j, b)| {
            b.windows(2).all(|w| w[0] < w[1])
                && b.iter().all(|x| x.is_positive() && self.marking.iter().any(|m| m[j] == *x))
        }) && self
            .marking
            .iter()
            .all(|m| m.iter().enumerate().all(|(j, x)| x.is_zero() || self.breaks[j].contains(x)))
    }
}

pub fn grid_from_points(u: &TropPointTuple) -> MarkedGridSubdivision {
    let breaks = (0..u.r)
        .map(|j| {
            let mut b: Vec<Rat> = u.points.iter().map(|p| p[j].clone()).filter(|x| x.is_positive()).collect();
            b.sort();
            b.dedup();
            b
        })
        .collect();
    MarkedGridSubdivision { breaks, marking: u.points.clone() }
}

pub fn points_from_grid(g: &MarkedGridSubdivision) -> TropPointTuple {
    TropPointTuple { r: g.breaks.len(), points: g.marking.clone() }
}

/// Per ray, the order of `0, u_1^{(j)}, …, u_n^{(j)}`.
pub fn grid_comb_type(u: &TropPointTuple) -> GridCombType {
    let levels = (0..u.r)
        .map(|j| {
            let mut vals: Vec<Rat> = u.points.iter().map(|p| p[j].clone()).collect();
            vals.push(Rat::zero());
            vals.sort();
            vals.dedup();
            let mut l = vec![0u8];
            l.extend(u.points.iter().map(|p| vals.iter().position(|v| *v == p[j]).unwrap() as u8));
            l
        })
        .collect();
    GridCombType { levels }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropfm_core::rat::rat;

    fn pts(rows: &[&[i64]]) -> Vec<RatVec> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    #[test]
    fn tropicalise_examples() {
        let z = tropicalise(&pts(&[&[0, 0], &[0, 0]]), &TropFan::full(2)).unwrap();
        assert!(z.points.iter().flatten().all(|x| x.is_zero()));
        assert_eq!(tropicalise(&pts(&[&[1, 2]]), &TropFan::disjoint(2)), Err(GridError::NotInSupport(1)));
        let u = tropicalise(&pts(&[&[1, 0], &[1, 2]]), &TropFan::full(2)).unwrap();
        assert_eq!(u.points, pts(&[&[1, 0], &[1, 2]]));
    }

    #[test]
    fn grid_examples() {
        let u = tropicalise(&pts(&[&[1, 0], &[0, 2]]), &TropFan::disjoint(2)).unwrap();
        let g = grid_from_points(&u);
        assert_eq!(g.breaks, vec![vec![rat(1, 1)], vec![rat(2, 1)]]);
        assert!(g.is_valid());
        assert_eq!(points_from_grid(&g), u);
        let o = tropicalise(&pts(&[&[0, 0]]), &TropFan::full(2)).unwrap();
        assert!(grid_from_points(&o).breaks.iter().all(|b| b.is_empty()));
    }

    #[test]
    fn type_examples() {
        let t = grid_comb_type(&tropicalise(&pts(&[&[0], &[0]]), &TropFan::full(1)).unwrap());
        assert_eq!(t.partition(0), vec![vec![0, 1, 2]]);
        let t = grid_comb_type(&tropicalise(&pts(&[&[1], &[3]]), &TropFan::full(1)).unwrap());
        assert_eq!(t.partition(0), vec![vec![0], vec![1], vec![2]]);
        let t = grid_comb_type(&tropicalise(&pts(&[&[1, 1], &[1, 2]]), &TropFan::full(2)).unwrap());
        assert_eq!(t.partition(0), vec![vec![0], vec![1, 2]]);
        assert_eq!(t.partition(1), vec![vec![0], vec![1], vec![2]]);
    }
}
