//! Exact polyhedral geometry over ℚ and ℤ: lattices, cones, cone complexes,
//! subdivisions and stars.

pub mod complex;
pub mod cone;
pub mod dd;
pub mod error;
pub mod intmat;
pub mod io;
pub mod lattice;
pub mod polyhedron;
pub mod rat;
pub mod ratmat;
pub mod star;
pub mod subdivision;

pub use complex::{Cell, ComplexBuilder, ComplexMap, ConeComplex};
pub use cone::Cone;
pub use error::CoreError;
pub use lattice::IntLattice;
pub use polyhedron::{arrangement_cells, Arrangement, Dimension, Halfspace, Polyhedron};
pub use rat::{IntVec, Rat, RatVec};
pub use star::{star_fan, Quotient, StarFan};
pub use subdivision::{is_subdivision, SubdivisionCertificate, Violation, ViolationKind};
