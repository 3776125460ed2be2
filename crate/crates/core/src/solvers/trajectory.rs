use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::solvers::config::{Interpolation, SolverConfig};
use crate::solvers::forcing::ForcingSpec;
use crate::spectral::SpectralField;

/// Per-time norms and cumulative integrals along a trajectory.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NormTrace {
    pub times: Vec<f64>,
    pub norm_h: Vec<f64>,
    pub norm_v: Vec<f64>,
    pub norm_da: Vec<f64>,
    pub norm_l4: Vec<f64>,
    /// `∫₀ᵗ ‖y‖²_V dτ`
    pub int_v2: Vec<f64>,
    /// `∫₀ᵗ ⟨f, y⟩ dτ`
    pub int_f_y: Vec<f64>,
    /// `∫₀ᵗ ‖y‖⁸_{L⁴} dτ`
    pub int_l4_8: Vec<f64>,
}

impl NormTrace {
    pub fn compute(times: &[f64], states: &[SpectralField], forcing: &ForcingSpec) -> Self {
        let rows: Vec<[f64; 5]> = times
            .par_iter()
            .zip(states.par_iter())
            .map(|(&t, y)| {
                let f_y = forcing.at(t).map_or(0.0, |f| f.inner(y));
                [y.norm_h(), y.norm_v(), y.norm_da(), y.norm_l4(), f_y]
            })
            .collect();
        let col = |j: usize| -> Vec<f64> { rows.iter().map(|r| r[j]).collect() };
        let norm_v = col(1);
        let norm_l4 = col(3);
        let v2: Vec<f64> = norm_v.iter().map(|v| v * v).collect();
        let l8: Vec<f64> = norm_l4.iter().map(|v| v.powi(8)).collect();
        Self {
            times: times.to_vec(),
            norm_h: col(0),
            norm_da: col(2),
            int_v2: quadrature::cumulative(times, &v2),
            int_f_y: quadrature::cumulative(times, &col(4)),
            int_l4_8: quadrature::cumulative(times, &l8),
            norm_v,
            norm_l4,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Time-sampled solution with its norm trace.
#[derive(Clone, Debug)]
pub struct Trajectory {
    config: SolverConfig,
    times: Vec<f64>,
    states: Vec<SpectralField>,
    norms: NormTrace,
    advective_warning: bool,
}

impl Trajectory {
    /// Assembles a trajectory from states on `times`, computing the norm trace
    /// against `forcing` (used for `∫⟨f, y⟩`). Every state is validated.
    pub fn from_states(
        config: SolverConfig,
        times: Vec<f64>,
        states: Vec<SpectralField>,
        forcing: &ForcingSpec,
    ) -> Result<Self> {
        if times.is_empty() || times.len() != states.len() {
            return Err(Error::Usage("trajectory needs one state per time".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Usage("trajectory times must increase".into()));
        }
        for s in &states {
            states[0].require_same_modes(s)?;
            s.check_invariants()?;
        }
        Ok(Self::assemble(config, times, states, forcing, false))
    }

    pub(crate) fn assemble(
        config: SolverConfig,
        times: Vec<f64>,
        states: Vec<SpectralField>,
        forcing: &ForcingSpec,
        advective_warning: bool,
    ) -> Self {
        let norms = NormTrace::compute(&times, &states, forcing);
        Self { config, times, states, norms, advective_warning }
    }

    /// The same field at every time of `config`'s grid.
    pub fn constant(config: &SolverConfig, field: &SpectralField) -> Self {
        let times = config.time_grid();
        let states = vec![field.clone(); times.len()];
        Self::assemble(config.clone(), times, states, &ForcingSpec::Zero, false)
    }

    pub fn zero(config: &SolverConfig, field_modes: &std::sync::Arc<crate::ModeSet>) -> Self {
        Self::constant(config, &SpectralField::zeros(field_modes))
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[SpectralField] {
        &self.states
    }

    pub fn norm_trace(&self) -> &NormTrace {
        &self.norms
    }

    pub fn initial(&self) -> &SpectralField {
        &self.states[0]
    }

    pub fn last(&self) -> &SpectralField {
        &self.states[self.states.len() - 1]
    }

    pub fn t_end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Whether the advective step guard `dt · K · ‖y‖_V ≤ 0.5` was exceeded.
    pub fn advective_warning(&self) -> bool {
        self.advective_warning
    }

    /// `max_t ‖y(t)‖_V` over the grid.
    pub fn sup_v(&self) -> f64 {
        self.norms.norm_v.iter().copied().fold(0.0, f64::max)
    }

    /// State at an arbitrary time, interpolated in the coefficients.
    pub fn state_at(&self, t: f64, interpolation: Interpolation) -> SpectralField {
        let (start, w, n) = match interpolation {
            Interpolation::Linear => quadrature::linear_stencil(&self.times, t),
            Interpolation::Cubic => quadrature::cubic_stencil(&self.times, t),
        };
        if n == 1 {
            return self.states[start].clone();
        }
        let mut acc = self.states[start].scaled(w[0]);
        for (j, &wj) in w.iter().enumerate().take(n).skip(1) {
            acc = acc.axpy(wj, &self.states[start + j]);
        }
        acc
    }

    pub fn same_grid(&self, other: &Trajectory) -> bool {
        self.times.len() == other.times.len()
            && self.times.iter().zip(&other.times).all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(1.0))
    }

    pub(crate) fn require_same_grid(&self, other: &Trajectory) -> Result<()> {
        if self.same_grid(other) {
            self.states[0].require_same_modes(&other.states[0])
        } else {
            Err(Error::Usage(format!("time grids differ ({} vs {} samples)", self.times.len(), other.times.len())))
        }
    }

    /// `max_t ‖self(t) − other(t)‖_V` on a shared grid.
    pub fn sup_v_distance(&self, other: &Trajectory) -> Result<f64> {
        self.require_same_grid(other)?;
        Ok(self.states.iter().zip(&other.states).map(|(a, b)| a.sub(b).norm_v()).fold(0.0, f64::max))
    }

    /// Sup-V distance to `other` sampled on this trajectory's grid, with
    /// `other` interpolated where the time grids differ. Mode sets may
    /// differ; states are compared on the finer one.
    pub fn sup_v_distance_resampled(&self, other: &Trajectory) -> f64 {
        self.times
            .iter()
            .zip(&self.states)
            .map(|(&t, a)| {
                let b = other.state_at(t, Interpolation::Cubic);
                if b.mode_set().cutoff() >= a.mode_set().cutoff() {
                    a.resample(b.mode_set()).sub(&b).norm_v()
                } else {
                    a.sub(&b.resample(a.mode_set())).norm_v()
                }
            })
            .fold(0.0, f64::max)
    }

    /// Pointwise combination `self + factor · other` on a shared grid.
    pub fn axpy(&self, factor: f64, other: &Trajectory, forcing: &ForcingSpec) -> Result<Trajectory> {
        self.require_same_grid(other)?;
        let states = self.states.iter().zip(&other.states).map(|(a, b)| a.axpy(factor, b)).collect();
        Ok(Self::assemble(self.config.clone(), self.times.clone(), states, forcing, false))
    }

    pub fn scaled(&self, factor: f64, forcing: &ForcingSpec) -> Trajectory {
        let states = self.states.iter().map(|s| s.scaled(factor)).collect();
        Self::assemble(self.config.clone(), self.times.clone(), states, forcing, self.advective_warning)
    }

    /// Prefix of the trajectory up to and including grid index `last`.
    pub fn truncated(&self, last: usize, forcing: &ForcingSpec) -> Trajectory {
        let n = (last + 1).min(self.times.len());
        Self::assemble(
            self.config.clone(),
            self.times[..n].to_vec(),
            self.states[..n].to_vec(),
            forcing,
            self.advective_warning,
        )
    }
}
