//! Time integration of the Galerkin systems
//!
//! * full equations: `dy/dt + νAy + B(y, y) = f`
//! * controlled linear system: `dy/dt + νAy + B(z, y) = f` for a given control `z(t)`
//! * perturbation system: `dη/dt + νAη + B(η, η) + B(y, η) + B(η, y) = g − f`
//!   around a base solution `y(t)`

mod config;
mod forcing;
mod integrator;
mod trajectory;

pub use config::{Interpolation, Scheme, SolverConfig, ADVECTIVE_LIMIT, DEFAULT_BLOWUP_THRESHOLD};
pub use forcing::ForcingSpec;
pub use trajectory::{NormTrace, Trajectory};

use crate::error::{Error, Result};
use crate::operators::bilinear_b;
use crate::spectral::SpectralField;

fn add_forcing(rhs: SpectralField, forcing: &ForcingSpec, t: f64) -> SpectralField {
    match forcing.at(t) {
        Some(f) => f.add(&rhs),
        None => rhs,
    }
}

fn require_cover(traj: &Trajectory, config: &SolverConfig, what: &str) -> Result<()> {
    if traj.times()[0] > 1e-12 || traj.t_end() < config.t_end * (1.0 - 1e-12) {
        return Err(Error::Usage(format!(
            "{what} covers [{}, {}], solver needs [0, {}]",
            traj.times()[0],
            traj.t_end(),
            config.t_end
        )));
    }
    if traj.initial().mode_set().cutoff() != config.cutoff {
        return Err(Error::Usage(format!("{what} is not on the solver mode set")));
    }
    Ok(())
}

/// Galerkin Navier-Stokes solve from `y0` under forcing `f`.
///
/// Stops with [`Error::BlowUpDetected`] as soon as `‖y(t)‖_V` exceeds
/// `config.blowup_threshold`.
pub fn solve_nse(y0: &SpectralField, f: &ForcingSpec, config: &SolverConfig) -> Result<Trajectory> {
    integrator::integrate(y0, config, f, |t, y| {
        let b = bilinear_b(y, y)?;
        Ok(add_forcing(b.scaled(-1.0), f, t))
    })
}

/// Linear controlled system with the control `z` interpolated in time per
/// `config.interpolation`. Its solution map is the operator `F(z)`.
pub fn solve_controlled(
    z: &Trajectory,
    y0: &SpectralField,
    f: &ForcingSpec,
    config: &SolverConfig,
) -> Result<Trajectory> {
    require_cover(z, config, "control")?;
    let interpolation = config.interpolation;
    integrator::integrate(y0, config, f, |t, y| {
        let zt = z.state_at(t, interpolation);
        let b = bilinear_b(&zt, y)?;
        Ok(add_forcing(b.scaled(-1.0), f, t))
    })
}

/// Perturbation `η = z − y` of the base solution `y` when the data change to
/// `(z0, g) = (y0 + eta0, f + (g − f))`.
pub fn solve_perturbation(
    y: &Trajectory,
    eta0: &SpectralField,
    g_minus_f: &ForcingSpec,
    config: &SolverConfig,
) -> Result<Trajectory> {
    require_cover(y, config, "base trajectory")?;
    let interpolation = config.interpolation;
    integrator::integrate(eta0, config, g_minus_f, |t, eta| {
        let yt = y.state_at(t, interpolation);
        // B(η,η) + B(y,η) = B(η + y, η)
        let b = bilinear_b(&eta.add(&yt), eta)?.add(&bilinear_b(eta, &yt)?);
        Ok(add_forcing(b.scaled(-1.0), g_minus_f, t))
    })
}
