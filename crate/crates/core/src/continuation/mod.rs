//! The λ-scaled solution family `y_λ = solution with data (λy0, λf)` and
//! the fixed-point formulation `z = λF(z)`, where `F(z)` solves the
//! controlled linear system with control `z`.
//!
//! Everything reported here is numerical evidence at a fixed resolution: a
//! blow-up flag means the V-norm cap was reached, not that a singularity
//! exists.

mod fixed_point;
mod sweep;

pub use fixed_point::{compactness_probe, fixed_point_iterate, FixedPointLog};
pub use sweep::{default_lambda_grid, lambda_sweep, LambdaStatus, SweepEntry, SweepReport, Verdict};
