//! Integrating-factor Runge-Kutta stepping for `dy/dt + νAy = N(t, y)`.
//!
//! The stiff diagonal term `ν|k|²` is removed exactly by the factor
//! `e^{−ν|k|²t}`; the transformed variable is advanced with explicit RK4
//! (Lawson) or Heun.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::solvers::config::{Scheme, SolverConfig, ADVECTIVE_LIMIT};
use crate::solvers::forcing::ForcingSpec;
use crate::solvers::trajectory::Trajectory;
use crate::spectral::{ModeSet, SpectralField};

struct Factors {
    step: f64,
    full: Vec<f64>,
    half: Vec<f64>,
}

impl Factors {
    fn new(modes: &ModeSet, nu: f64, step: f64) -> Self {
        let full = (0..modes.len()).map(|i| (-nu * modes.k2(i) * step).exp()).collect();
        let half = (0..modes.len()).map(|i| (-nu * modes.k2(i) * 0.5 * step).exp()).collect();
        Self { step, full, half }
    }
}

fn damp(y: &SpectralField, factors: &[f64]) -> SpectralField {
    y.map_real(|i| factors[i])
}

fn lawson_rk4<F>(rhs: &F, t: f64, y: &SpectralField, e: &Factors) -> Result<SpectralField>
where
    F: Fn(f64, &SpectralField) -> Result<SpectralField>,
{
    let h = e.step;
    let k1 = rhs(t, y)?;
    let y2 = damp(&y.axpy(0.5 * h, &k1), &e.half);
    let k2 = rhs(t + 0.5 * h, &y2)?;
    let y_half = damp(y, &e.half);
    let y3 = y_half.axpy(0.5 * h, &k2);
    let k3 = rhs(t + 0.5 * h, &y3)?;
    let y4 = damp(y, &e.full).axpy(h, &damp(&k3, &e.half));
    let k4 = rhs(t + h, &y4)?;
    let mid = damp(&k2.add(&k3), &e.half);
    let incr = damp(&k1, &e.full).axpy(2.0, &mid).add(&k4);
    Ok(damp(y, &e.full).axpy(h / 6.0, &incr))
}

fn heun<F>(rhs: &F, t: f64, y: &SpectralField, e: &Factors) -> Result<SpectralField>
where
    F: Fn(f64, &SpectralField) -> Result<SpectralField>,
{
    let h = e.step;
    let k1 = rhs(t, y)?;
    let predictor = damp(&y.axpy(h, &k1), &e.full);
    let k2 = rhs(t + h, &predictor)?;
    Ok(damp(&y.axpy(0.5 * h, &k1), &e.full).axpy(0.5 * h, &k2))
}

fn blowup_check(t: f64, y: &SpectralField, threshold: f64) -> Result<f64> {
    let nv = y.norm_v();
    if !nv.is_finite() || nv > threshold {
        Err(Error::BlowUpDetected { t_star: t, norm_v: nv })
    } else {
        Ok(nv)
    }
}

/// Integrates on `config`'s time grid. `trace_forcing` is only used for the
/// `∫⟨f, y⟩` column of the norm trace.
pub(crate) fn integrate<F>(
    y0: &SpectralField,
    config: &SolverConfig,
    trace_forcing: &ForcingSpec,
    rhs: F,
) -> Result<Trajectory>
where
    F: Fn(f64, &SpectralField) -> Result<SpectralField>,
{
    config.validate()?;
    let modes: Arc<ModeSet> = y0.mode_set().clone();
    if modes.cutoff() != config.cutoff {
        return Err(Error::Usage(format!(
            "initial data has K = {}, solver configured for K = {}",
            modes.cutoff(),
            config.cutoff
        )));
    }
    trace_forcing.check_modes(&modes)?;
    let times = config.time_grid();
    let advective = |nv: f64| config.dt * config.cutoff as f64 * nv > ADVECTIVE_LIMIT;

    let nv0 = blowup_check(0.0, y0, config.blowup_threshold)?;
    let mut warned = advective(nv0);
    if warned {
        log::warn!(
            "advective step guard exceeded at t = 0 (dt·K·|y|_V = {:.3})",
            config.dt * config.cutoff as f64 * nv0
        );
    }

    let mut factors = Factors::new(&modes, config.nu, config.dt);
    let mut states = Vec::with_capacity(times.len());
    states.push(y0.clone());
    for n in 0..times.len() - 1 {
        let (t, h) = (times[n], times[n + 1] - times[n]);
        if (h - factors.step).abs() > 1e-15 * h.max(1.0) {
            factors = Factors::new(&modes, config.nu, h);
        }
        let y = &states[n];
        let next = match config.scheme {
            Scheme::Rk4 => lawson_rk4(&rhs, t, y, &factors)?,
            Scheme::Rk2 => heun(&rhs, t, y, &factors)?,
        };
        let nv = blowup_check(times[n + 1], &next, config.blowup_threshold)?;
        if !warned && advective(nv) {
            warned = true;
            log::warn!(
                "advective step guard exceeded at t = {} (dt·K·|y|_V = {:.3})",
                times[n + 1],
                config.dt * config.cutoff as f64 * nv
            );
        }
        states.push(next);
    }
    Ok(Trajectory::assemble(config.clone(), times, states, trace_forcing, warned))
}
