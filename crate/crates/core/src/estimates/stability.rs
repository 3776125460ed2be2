use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solvers::Trajectory;

/// Perturbation-stability constants of a strong solution `y` on `[0, T]`:
///
/// ```text
/// C = max{27c⁴/(2ν³), 7⁸c⁸/(2¹²ν⁷)} · (‖y‖⁴_{C([0,T];V)} + 1)²
/// δ = min{1, ν/4} · e^{−2TC},   L = 1/δ
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityConstants {
    pub nu: f64,
    pub t_end: f64,
    /// Trilinear constant actually used (already multiplied by `safety_factor`).
    pub c: f64,
    pub safety_factor: f64,
    #[serde(rename = "C")]
    pub big_c: f64,
    pub delta: f64,
    /// `1/δ`; absent when δ underflows.
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub y_v_sup: f64,
    /// `e^{−2TC}` underflowed: the admissible perturbation ball is empty in
    /// floating point.
    pub vacuous_ball: bool,
}

impl StabilityConstants {
    pub fn from_sup(c: f64, nu: f64, t_end: f64, y_v_sup: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Usage(format!("c must be positive, got {c}")));
        }
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::Usage(format!("nu must be positive, got {nu}")));
        }
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(Error::Usage(format!("T must be nonnegative, got {t_end}")));
        }
        if !(y_v_sup >= 0.0) {
            return Err(Error::Usage(format!("sup-V norm must be nonnegative, got {y_v_sup}")));
        }
        let first = 27.0 * c.powi(4) / (2.0 * nu.powi(3));
        let second = 7f64.powi(8) * c.powi(8) / (2f64.powi(12) * nu.powi(7));
        let big_c = first.max(second) * (y_v_sup.powi(4) + 1.0).powi(2);
        let decay = (-2.0 * t_end * big_c).exp();
        let vacuous_ball = decay < f64::MIN_POSITIVE;
        let delta = if vacuous_ball { 0.0 } else { 1f64.min(nu / 4.0) * decay };
        Ok(Self {
            nu,
            t_end,
            c,
            safety_factor: 1.0,
            big_c,
            delta,
            l: (!vacuous_ball).then(|| 1.0 / delta),
            y_v_sup,
            vacuous_ball,
        })
    }

    pub fn with_safety(c_raw: f64, safety_factor: f64, nu: f64, t_end: f64, y_v_sup: f64) -> Result<Self> {
        let mut k = Self::from_sup(c_raw * safety_factor, nu, t_end, y_v_sup)?;
        k.safety_factor = safety_factor;
        Ok(k)
    }
}

/// Constants for the base trajectory `y`, with `‖y‖_{C([0,T];V)}` taken as the
/// grid maximum of `‖y(t)‖_V`.
pub fn compute_constants(c: f64, nu: f64, t_end: f64, y: &Trajectory) -> Result<StabilityConstants> {
    StabilityConstants::from_sup(c, nu, t_end, y.sup_v())
}
