//! Exact rationals and the `"p/q"` wire format.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::CoreError;

pub type Rat = BigRational;
pub type RatVec = Vec<Rat>;
pub type IntVec = Vec<BigInt>;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn to_rat_vec(v: &[BigInt]) -> RatVec {
    v.iter().map(rat_int).collect()
}

pub fn int_vec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Parses `"p/q"` or `"p"`; the result is always reduced with positive denominator.
pub fn parse_rat(s: &str) -> Result<Rat, CoreError> {
    let s = s.trim();
    let bad = || CoreError::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
    }
}

pub fn parse_int(s: &str) -> Result<BigInt, CoreError> {
    let r = parse_rat(s)?;
    if !r.is_integer() {
        return Err(CoreError::Parse(format!("expected an integer, got {s:?}")));
    }
    Ok(r.to_integer())
}

/// Integers print as `"p"`, everything else as `"p/q"`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

pub fn fmt_int_vec(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

pub fn gcd_vec(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Positive multiple of `v` with integer entries and content 1. Zero stays zero.
pub fn primitive(v: &[Rat]) -> IntVec {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: IntVec = v.iter().map(|x| (x * rat_int(&l)).to_integer()).collect();
    primitive_int(&scaled)
}

pub fn primitive_int(v: &[BigInt]) -> IntVec {
    let g = gcd_vec(v);
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn rdot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn lcm_denoms(v: &[Rat]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn sign(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn i64_of(x: &BigInt) -> Option<i64> {
    use num_traits::ToPrimitive;
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-2/-4").unwrap(), rat(1, 2));
        assert_eq!(fmt_rat(&rat(4, 2)), "2");
        assert_eq!(fmt_rat(&rat(-1, 3)), "-1/3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive(&[rat(1, 2), rat(1, 2)]), int_vec(&[1, 1]));
        assert_eq!(primitive(&[rat(-2, 3), rat(4, 3)]), int_vec(&[-1, 2]));
        assert_eq!(primitive_int(&int_vec(&[0, 0])), int_vec(&[0, 0]));
    }
}
