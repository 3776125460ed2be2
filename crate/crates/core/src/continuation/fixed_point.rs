use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::{Check, VerificationReport};
use crate::quadrature;
use crate::solvers::{solve_controlled, ForcingSpec, SolverConfig, Trajectory};
use crate::spectral::SpectralField;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixedPointLog {
    pub lambda: f64,
    pub relaxation: f64,
    pub tolerance: f64,
    /// `d_n = sup_t ‖z_{n+1}(t) − z_n(t)‖_V`.
    pub iterates: Vec<f64>,
    pub converged: bool,
    #[serde(skip)]
    pub trajectory: Option<Trajectory>,
}

/// Picard iteration `z_{n+1} = (1 − ω) z_n + ω λ F(z_n)` from `z_init`
/// (zero trajectory by default), where `F(z)` solves the controlled system
/// with data `(y0, f)`.
///
/// A fixed point `z = λF(z)` solves the full equations with data
/// `(λy0, λf)`. Fails with [`Error::NonConvergence`] (carrying the `d_n`
/// history) when `d_n > tol` after `max_iter` iterations or when an
/// iterate leaves the solvable range.
#[allow(clippy::too_many_arguments)]
pub fn fixed_point_iterate(
    lambda: f64,
    y0: &SpectralField,
    f: &ForcingSpec,
    z_init: Option<&Trajectory>,
    max_iter: usize,
    tol: f64,
    config: &SolverConfig,
    relaxation: f64,
) -> Result<FixedPointLog> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::Usage(format!("λ must lie in [0, 1], got {lambda}")));
    }
    if !(relaxation > 0.0 && relaxation <= 1.0) {
        return Err(Error::Usage(format!("relaxation must lie in (0, 1], got {relaxation}")));
    }
    if max_iter == 0 || !(tol > 0.0) {
        return Err(Error::Usage("max_iter and tol must be positive".into()));
    }
    config.validate()?;
    let trace_forcing = f.scaled(lambda);
    let mut z = match z_init {
        Some(z) => z.clone(),
        None => Trajectory::zero(config, y0.mode_set()),
    };
    let mut history = Vec::with_capacity(max_iter);
    for _ in 0..max_iter {
        let image = match solve_controlled(&z, y0, f, config) {
            Ok(y) => y,
            Err(Error::BlowUpDetected { .. }) => {
                history.push(f64::INFINITY);
                break;
            }
            Err(e) => return Err(e),
        };
        let target = image.scaled(lambda, &trace_forcing);
        let next = if relaxation == 1.0 {
            target
        } else {
            z.scaled(1.0 - relaxation, &trace_forcing).axpy(relaxation, &target, &trace_forcing)?
        };
        let d = next.sup_v_distance(&z)?;
        history.push(d);
        z = next;
        if d <= tol {
            return Ok(FixedPointLog {
                lambda,
                relaxation,
                tolerance: tol,
                iterates: history,
                converged: true,
                trajectory: Some(z),
            });
        }
        if !d.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergence { iterations: history.len(), last: history.last().copied().unwrap_or(f64::NAN), history })
}

/// Uniform-boundedness proxy for the compactness of `F`: every `F(z)` in the
/// batch must satisfy the a-priori bound
/// `sup_t ‖F(z)(t)‖²_V ≤ ‖y0‖²_V exp(2c2 ∫₀ᵀ ‖z‖⁸_{L⁴})`, and the batch
/// supremum must lie below the bound evaluated at the largest Serrin norm.
pub fn compactness_probe(
    z_batch: &[Trajectory],
    y0: &SpectralField,
    c2_raw: f64,
    safety_factor: f64,
    config: &SolverConfig,
) -> Result<VerificationReport> {
    if z_batch.is_empty() {
        return Err(Error::Usage("empty control batch".into()));
    }
    let c2 = c2_raw * safety_factor;
    let y0v = y0.norm_v_sqr();
    let mut report = VerificationReport::new("compactness_probe");
    report.safety_factor = Some(safety_factor);
    report.context("c2", c2);
    let mut batch_sup = 0f64;
    let mut batch_serrin8 = 0f64;
    for (i, z) in z_batch.iter().enumerate() {
        let serrin8 = z.norm_trace().int_l4_8.last().copied().unwrap_or(0.0);
        batch_serrin8 = batch_serrin8.max(serrin8);
        let bound = y0v * (2.0 * c2 * serrin8).exp();
        let sup2 = match solve_controlled(z, y0, &ForcingSpec::Zero, config) {
            Ok(y) => {
                let da2: Vec<f64> = y.norm_trace().norm_da.iter().map(|x| x * x).collect();
                let lhs = config.nu * quadrature::integral(y.times(), &da2);
                let rhs = y0v * (1.0 + 2.0 * c2 * (2.0 * c2 * serrin8).exp() * serrin8);
                report.push(Check::relative(format!("member_{i}_DA_integral"), lhs, rhs));
                y.sup_v().powi(2)
            }
            Err(Error::BlowUpDetected { .. }) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        report.push(Check::relative(format!("member_{i}_sup_V"), sup2, bound));
        batch_sup = batch_sup.max(sup2);
    }
    let uniform = y0v * (2.0 * c2 * batch_serrin8).exp();
    report.context("batch_serrin_max", batch_serrin8.powf(0.125));
    report.context("uniform_bound", uniform);
    report.push(Check::relative("batch_sup_V", batch_sup, uniform));
    Ok(report)
}
