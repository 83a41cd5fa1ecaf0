//! Planted forests, stable FM types over grid bases, and blow-up orders.

pub mod enumerate;
pub mod error;
pub mod forest;
pub mod schedule;
pub mod tree;

pub use enumerate::{enumerate_fm_types, enumerate_grid_fm_types};
pub use error::FmError;
pub use forest::{fm_codim, fm_cone, FmCone, FmFace, ForestBase, PlantedForestType, StabilityWitness};
pub use schedule::{blowup_schedule, BlowupSchedule, Center, ScheduleKind};
pub use tree::{stable_trees, RootedTree};
