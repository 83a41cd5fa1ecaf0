//! Point configurations on the height-one slice of a degeneration: the
//! moduli complexes `Π_n(Δ)`, `Π_n⁺(Δ)`, their lattice refinement, rigid
//! types, and the cutting map at a rigid type.

pub mod cutting;
pub mod error;
pub mod fmdegen;
pub mod heights;
pub mod moduli;
pub mod rigid;
pub mod slice;
pub mod types;
pub mod verify;
mod wire;

pub use error::DegenError;
pub use moduli::{build_pi_delta, build_pi_delta_with_budget, DegenModuli};
pub use slice::{simplex_subdiv_from_points, SimplexLatticeSubdivision, Slice};
pub use types::{delta_comb_type, type_feasible, Constraint, DeltaCombType, Form};
pub use heights::{h_tot, min_height, min_heights, refine_lattices, HeightReading, Heights};
pub use verify::{verify_degen_ss, DegenSsReport, DegenWitness};
pub use rigid::{retraction, rigid_types, rubber_data, Retraction, RubberData};
pub use cutting::{cutting_map, degeneration_report, CutCertificate, CutOptions, CuttingMapResult, DegenerationReport};
pub use fmdegen::{fm_degen_flatness, FmDegenReport, Placement, PlacementCheck, SliceBase};
