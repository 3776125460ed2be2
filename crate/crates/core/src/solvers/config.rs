use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Time interpolation for inputs sampled on a grid (controls, base flows,
/// sampled forcing).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    Linear,
    /// Four-point Lagrange; fourth order, matching the integrator.
    #[default]
    Cubic,
}

/// Integrating-factor Runge-Kutta scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Classical fourth-order Runge-Kutta on the integrating-factor variable (Lawson).
    #[default]
    Rk4,
    /// Second-order Heun on the integrating-factor variable.
    Rk2,
}

pub const DEFAULT_BLOWUP_THRESHOLD: f64 = 1e6;
/// Advective step guard: warn when `dt · K · ‖y‖_V` exceeds this.
pub const ADVECTIVE_LIMIT: f64 = 0.5;

fn default_blowup() -> f64 {
    DEFAULT_BLOWUP_THRESHOLD
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Viscosity ν. Zero is accepted only as an integrator test mode.
    pub nu: f64,
    /// Horizon T.
    #[serde(alias = "T")]
    pub t_end: f64,
    pub dt: f64,
    /// Mode cutoff K.
    #[serde(alias = "K")]
    pub cutoff: usize,
    #[serde(default = "default_blowup")]
    pub blowup_threshold: f64,
    #[serde(default)]
    pub interpolation: Interpolation,
    #[serde(default)]
    pub scheme: Scheme,
}

impl SolverConfig {
    pub fn new(nu: f64, t_end: f64, dt: f64, cutoff: usize) -> Self {
        Self {
            nu,
            t_end,
            dt,
            cutoff,
            blowup_threshold: DEFAULT_BLOWUP_THRESHOLD,
            interpolation: Interpolation::default(),
            scheme: Scheme::default(),
        }
    }

    pub fn with_dt(&self, dt: f64) -> Self {
        Self { dt, ..self.clone() }
    }

    pub fn with_scheme(&self, scheme: Scheme) -> Self {
        Self { scheme, ..self.clone() }
    }

    pub fn with_blowup_threshold(&self, blowup_threshold: f64) -> Self {
        Self { blowup_threshold, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return bad(format!("nu must be a finite nonnegative number, got {}", self.nu));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("T must be positive, got {}", self.t_end));
        }
        if !(self.dt > 0.0 && self.dt <= self.t_end) {
            return bad(format!("dt must lie in (0, T], got {}", self.dt));
        }
        if self.cutoff == 0 {
            return bad("cutoff K must be positive".into());
        }
        if !(self.blowup_threshold > 0.0) {
            return bad(format!("blowup_threshold must be positive, got {}", self.blowup_threshold));
        }
        Ok(())
    }

    /// Uniform grid `0, dt, 2dt, …` ending exactly at `T`; the last step is
    /// shortened when `dt` does not divide `T`.
    pub fn time_grid(&self) -> Vec<f64> {
        let steps = (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize;
        let mut t: Vec<f64> = (0..steps).map(|i| i as f64 * self.dt).collect();
        t.push(self.t_end);
        t
    }
}
