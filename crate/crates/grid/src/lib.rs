//! Marked grid subdivisions of a tropicalised simple normal crossings pair,
//! their combinatorial types, and the moduli complexes `Π_n(Σ)`, `Π_n⁺(Σ)`.

pub mod error;
pub mod fan;
pub mod moduli;
pub mod points;
pub mod types;
pub mod verify;

pub use error::GridError;
pub use fan::TropFan;
pub use moduli::{build_pi, build_pi_with_budget, GridModuli, PiPlus};
pub use points::{grid_comb_type, grid_from_points, points_from_grid, tropicalise, MarkedGridSubdivision, TropPointTuple};
pub use types::{default_budget, enumerate_types, grid_codim, GridCombType, GridRay};
pub use verify::{verify_weak_ss, WeakSsReport, Witness};
