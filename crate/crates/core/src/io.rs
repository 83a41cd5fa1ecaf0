//! JSON interchange for cone complexes. Numbers are written as decimal
//! strings; ids and ranks stay JSON integers.

use serde::{Deserialize, Serialize};

use crate::complex::{ComplexBuilder, ConeComplex};
use crate::error::CoreError;
use crate::lattice::IntLattice;
use crate::rat::{fmt_int_vec, parse_int, primitive_int, IntVec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeJson {
    pub id: usize,
    pub generators: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_basis: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanJson {
    pub ambient_rank: usize,
    pub lattice_basis: Vec<Vec<String>>,
    pub cones: Vec<ConeJson>,
    /// Covering pairs `[face, cell]` of the face poset.
    pub faces: Vec<[usize; 2]>,
    /// Construction parameters, when the fan came from a moduli builder.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moduli: Option<serde_json::Value>,
}

fn mat_str(m: &[IntVec]) -> Vec<Vec<String>> {
    m.iter().map(|r| fmt_int_vec(r)).collect()
}

fn mat_parse(m: &[Vec<String>], d: usize) -> Result<Vec<IntVec>, CoreError> {
    m.iter()
        .map(|r| {
            if r.len() != d {
                return Err(CoreError::DimensionMismatch { expected: d, found: r.len() });
            }
            r.iter().map(|x| parse_int(x)).collect()
        })
        .collect()
}

pub fn to_json(c: &ConeComplex) -> FanJson {
    let cones = (0..c.len())
        .map(|i| {
            let cell = &c.cells[i];
            ConeJson {
                id: i,
                generators: mat_str(&c.cone(i).generators),
                lattice_basis: cell.lattice.as_ref().map(|l| mat_str(l.basis())),
                label: cell.label.clone(),
            }
        })
        .collect();
    FanJson {
        ambient_rank: c.dim(),
        lattice_basis: mat_str(c.ambient.basis()),
        cones,
        faces: c.covering_pairs().into_iter().map(|(a, b)| [a, b]).collect(),
        moduli: None,
    }
}

/// Rebuilds the complex; cone ids must be `0..len` in order and the listed
/// face pairs must match the recomputed ones.
pub fn from_json(j: &FanJson) -> Result<ConeComplex, CoreError> {
    let d = j.ambient_rank;
    let ambient = IntLattice::from_generators(d, &mat_parse(&j.lattice_basis, d)?);
    let mut b = ComplexBuilder::new(ambient);
    for (k, cone) in j.cones.iter().enumerate() {
        if cone.id != k {
            return Err(CoreError::Parse(format!("cone id {} out of order", cone.id)));
        }
        let gens: Vec<IntVec> = mat_parse(&cone.generators, d)?.iter().map(|g| primitive_int(g)).collect();
        let lattice = match &cone.lattice_basis {
            Some(m) => Some(IntLattice::from_generators(d, &mat_parse(m, d)?)),
            None => None,
        };
        if b.add_cell_with(&gens, cone.label.clone(), lattice) != k {
            return Err(CoreError::Parse(format!("cone {k} repeats an earlier cone")));
        }
    }
    let c = b.build();
    let mut listed: Vec<(usize, usize)> = j.faces.iter().map(|p| (p[0], p[1])).collect();
    listed.sort();
    if listed != c.covering_pairs() {
        return Err(CoreError::Parse("face list disagrees with the cones".into()));
    }
    Ok(c)
}

pub fn to_string(c: &ConeComplex) -> String {
    serde_json::to_string_pretty(&to_json(c)).expect("serializable")
}

pub fn from_str(s: &str) -> Result<ConeComplex, CoreError> {
    let j: FanJson = serde_json::from_str(s).map_err(|e| CoreError::Parse(e.to_string()))?;
    from_json(&j)
}
