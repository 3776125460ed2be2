//! Spectral Galerkin laboratory for the incompressible Navier-Stokes
//! equations on the periodic box `[0, 2π]³`.
//!
//! Velocity fields are divergence-free truncated Fourier series
//! ([`SpectralField`]); the Stokes operator, advection operator and
//! trilinear form live in [`operators`]; [`solvers`] integrates the full,
//! controlled and perturbation systems; [`estimates`] evaluates the
//! stability constants and checks the energy, Gronwall and Lipschitz
//! inequalities along computed trajectories; [`continuation`] runs the
//! λ-scaled solution family and the fixed-point iteration `z = λF(z)`.

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod continuation;
pub mod error;
pub mod estimates;
pub mod io;
pub mod operators;
pub mod presets;
pub mod quadrature;
pub mod solvers;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use spectral::{CVec3, ModeSet, PhysicalGrid, SpectralField, Wavevector};
