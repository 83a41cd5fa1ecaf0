//! Rationals on the wire as `"p/q"` strings.

use serde::ser::{SerializeSeq, Serializer};
use tropfm_core::rat::{fmt_rat, fmt_vec};
use tropfm_core::{Rat, RatVec};

pub fn ser_rat<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(x))
}

pub fn ser_rat_vec<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in fmt_vec(v) {
        seq.serialize_element(&x)?;
    }
    seq.end()
}

pub fn ser_rat_vecs<S: Serializer>(v: &[RatVec], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        seq.serialize_element(&fmt_vec(row))?;
    }
    seq.end()
}

pub fn ser_int_vecs<S: Serializer>(v: &[tropfm_core::IntVec], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        seq.serialize_element(&row.iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
    }
    seq.end()
}
