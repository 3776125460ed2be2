//! Truncated Fourier representation of divergence-free periodic fields.

pub mod field;
pub mod grid;
pub mod mode_set;

pub use field::{CVec3, SpectralField};
pub use grid::PhysicalGrid;
pub use mode_set::{ModeSet, Wavevector};
