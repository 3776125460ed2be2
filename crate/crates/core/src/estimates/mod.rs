//! Functionals, constants and inequality checks evaluated along computed
//! trajectories. Failures are reported in a [`VerificationReport`], never
//! raised as errors.

mod report;
mod stability;

pub use report::{Check, VerificationReport, CHECK_TOL};
pub use stability::{compute_constants, StabilityConstants};

use crate::error::{Error, Result};
use crate::operators::{apply_a, trilinear_b};
use crate::quadrature;
use crate::solvers::{solve_nse, ForcingSpec, Interpolation, Scheme, SolverConfig, Trajectory};
use crate::spectral::SpectralField;

/// Default multiplier applied to empirical (lower-bound) constants.
pub const DEFAULT_SAFETY_FACTOR: f64 = 2.0;

/// `V(y)(t) = ½‖y(t)‖²_H + ν∫₀ᵗ‖y‖²_V − ∫₀ᵗ⟨f, y⟩` on the trajectory grid.
pub fn energy_functional(traj: &Trajectory, f: &ForcingSpec) -> Vec<f64> {
    let nu = traj.config().nu;
    let times = traj.times();
    let trace = traj.norm_trace();
    let f_y: Vec<f64> = times.iter().zip(traj.states()).map(|(&t, y)| f.at(t).map_or(0.0, |ft| ft.inner(y))).collect();
    let int_f_y = quadrature::cumulative(times, &f_y);
    trace.norm_h.iter().zip(&trace.int_v2).zip(&int_f_y).map(|((h, iv), ify)| 0.5 * h * h + nu * iv - ify).collect()
}

/// Checks `V(t) ≤ V(s) + tol·(1 + |V(0)|)` for every grid pair `s ≤ t`.
pub fn check_energy_inequality(traj: &Trajectory, f: &ForcingSpec, tol: f64) -> VerificationReport {
    let v = energy_functional(traj, f);
    let mut report = VerificationReport::new("energy_inequality");
    let scale = 1.0 + v[0].abs();
    let mut running_min = f64::INFINITY;
    let mut worst = (0.0, traj.times()[0]);
    for (&t, &vt) in traj.times().iter().zip(&v) {
        running_min = running_min.min(vt);
        let rise = vt - running_min;
        if rise > worst.0 || rise.is_nan() {
            worst = (rise, t);
        }
    }
    report.push(Check::new("energy_nonincreasing", worst.0, 0.0, tol, scale).at(worst.1));
    report.context("V0", v[0]);
    report.context("V_final", v[v.len() - 1]);
    report
}

/// `(∫₀ᵀ ‖y‖⁸_{L⁴} dt)^{1/8}`.
pub fn serrin_norm(traj: &Trajectory) -> f64 {
    serrin_norm_until(traj, traj.times().len() - 1)
}

/// Serrin norm of the restriction to `[0, t_index]`.
pub fn serrin_norm_until(traj: &Trajectory, index: usize) -> f64 {
    let c = &traj.norm_trace().int_l4_8;
    c[index.min(c.len() - 1)].max(0.0).powf(0.125)
}

fn da_integral(traj: &Trajectory) -> Vec<f64> {
    let vals: Vec<f64> = traj.norm_trace().norm_da.iter().map(|x| x * x).collect();
    quadrature::cumulative(traj.times(), &vals)
}

/// Lipschitz dependence on data around the base solution `y`:
///
/// ```text
/// ‖z − y‖²_{C([0,T];V)} + (ν/2)‖z − y‖²_{L²(0,T;D(A))} ≤ L (‖z0 − y0‖²_V + ‖g − f‖²_{L²(0,T;H)})
/// ```
///
/// asserted only when the data perturbation lies inside the δ-ball.
#[allow(clippy::too_many_arguments)]
pub fn verify_lipschitz(
    y: &Trajectory,
    z: &Trajectory,
    constants: &StabilityConstants,
    z0: &SpectralField,
    g: &ForcingSpec,
    y0: &SpectralField,
    f: &ForcingSpec,
    tol: f64,
) -> Result<VerificationReport> {
    y.require_same_grid(z)?;
    let modes = y.initial().mode_set().clone();
    let mut report = VerificationReport::new("lipschitz");
    report.safety_factor = Some(constants.safety_factor);
    let gmf = ForcingSpec::difference(g, f, y.times(), &modes);
    let data = z0.sub(y0).norm_v_sqr() + gmf.l2_h_sqr(y.times());
    report.context("data_size", data);
    report.context("delta", constants.delta);
    report.context("C", constants.big_c);
    report.context("c", constants.c);

    let diff = z.axpy(-1.0, y, &ForcingSpec::Zero)?;
    let sup_v2 = diff.sup_v().powi(2);
    let da = da_integral(&diff);
    let lhs = sup_v2 + 0.5 * constants.nu * da[da.len() - 1];
    report.context("sup_V2", sup_v2);
    report.context("int_DA2", da[da.len() - 1]);

    let Some(l) = constants.l else {
        report.note("vacuous ball: δ underflows, inequality not asserted");
        return Ok(report);
    };
    if !(data < constants.delta) && data > 0.0 {
        report.note(format!(
            "precondition violated: perturbation size {data:e} is not below δ = {:e}; inequality not asserted",
            constants.delta
        ));
        return Ok(report);
    }
    let rhs = l * data;
    report.push(Check::new("lipschitz", lhs, rhs, tol.max(CHECK_TOL), rhs));
    Ok(report)
}

/// A-priori bounds for the controlled system with `f = 0`:
///
/// ```text
/// ‖y(t)‖²_V ≤ ‖y0‖²_V exp(2c2 ∫₀ᵗ ‖z‖⁸_{L⁴})
/// ν∫₀ᵗ ‖y‖²_{D(A)} ≤ ‖y0‖²_V [1 + 2c2 exp(2c2 ∫₀ᵗ ‖z‖⁸_{L⁴}) ∫₀ᵗ ‖z‖⁸_{L⁴}]
/// ```
///
/// `c2` enters multiplied by `safety_factor`.
pub fn verify_gronwall(
    y: &Trajectory,
    z: &Trajectory,
    c2_raw: f64,
    safety_factor: f64,
    nu: f64,
    f: &ForcingSpec,
) -> Result<VerificationReport> {
    y.require_same_grid(z)?;
    let mut report = VerificationReport::new("gronwall");
    report.safety_factor = Some(safety_factor);
    let c2 = c2_raw * safety_factor;
    report.context("c2", c2);
    if !f.is_zero() {
        report.note("forcing is nonzero: the homogeneous bounds do not apply, check skipped");
        return Ok(report);
    }
    let y0 = y.norm_trace().norm_v[0].powi(2);
    let zint = &z.norm_trace().int_l4_8;
    let da = da_integral(y);
    let times = y.times();
    let bound = |i: usize| (2.0 * c2 * zint[i]).exp();

    let v_checks =
        (0..times.len()).map(|i| Check::relative("", y.norm_trace().norm_v[i].powi(2), y0 * bound(i)).at(times[i]));
    report.extend_worst("gronwall_V", v_checks);
    let da_checks = (0..times.len())
        .map(|i| Check::relative("", nu * da[i], y0 * (1.0 + 2.0 * c2 * bound(i) * zint[i])).at(times[i]));
    report.extend_worst("gronwall_DA_integral", da_checks);
    Ok(report)
}

/// Pointwise evaluation of the four energy-estimate bounds used for the
/// perturbation `η` and the integrated bound on `φ = min{‖η‖²_V, 1}`.
///
/// Each bound is checked in two steps, the trilinear (or Cauchy-Schwarz)
/// estimate and the Young split, so a failure identifies which one broke.
#[allow(clippy::too_many_arguments)]
pub fn verify_proof_estimates(
    eta: &Trajectory,
    y: &Trajectory,
    g_minus_f: &ForcingSpec,
    c_raw: f64,
    safety_factor: f64,
    nu: f64,
    constants: &StabilityConstants,
) -> Result<VerificationReport> {
    eta.require_same_grid(y)?;
    let c = c_raw * safety_factor;
    let mut report = VerificationReport::new("proof_estimates");
    report.safety_factor = Some(safety_factor);
    report.context("c", c);
    report.context("C", constants.big_c);
    let y_sup = constants.y_v_sup;
    let k_cubic = 27.0 * c.powi(4) / (2.0 * nu.powi(3));
    let k_seventh = 7f64.powi(8) * c.powi(8) / (2f64.powi(12) * nu.powi(7));
    let modes = eta.initial().mode_set().clone();
    let times = eta.times();

    let mut rows = Vec::with_capacity(times.len());
    for (i, &t) in times.iter().enumerate() {
        let e = &eta.states()[i];
        let yt = &y.states()[i];
        let ae = apply_a(e);
        let h = g_minus_f.at_or_zero(t, &modes);
        let (ev, eda) = (e.norm_v(), e.norm_da());
        let yv = yt.norm_v();
        let hn = h.norm_h();
        let d2 = eda * eda;
        let terms = [
            (2.0 * h.inner(&ae), 2.0 * hn * eda, 0.25 * nu * d2 + 4.0 / nu * hn * hn),
            (
                -2.0 * trilinear_b(e, e, &ae)?,
                2.0 * c * ev.powf(1.5) * eda.powf(1.5),
                0.5 * nu * d2 + k_cubic * ev.powi(6),
            ),
            (
                -2.0 * trilinear_b(yt, e, &ae)?,
                2.0 * c * yv * ev.sqrt() * eda.powf(1.5),
                0.5 * nu * d2 + k_cubic * y_sup.powi(4) * ev * ev,
            ),
            (
                -2.0 * trilinear_b(e, yt, &ae)?,
                2.0 * c * eda.powf(1.75) * ev.powf(0.25) * yv,
                0.5 * nu * d2 + k_seventh * y_sup.powi(8) * ev * ev,
            ),
        ];
        rows.push((t, terms, hn * hn, ev * ev));
    }
    let names = [
        ("forcing_cauchy_schwarz", "forcing_young"),
        ("self_advection_trilinear", "self_advection_young"),
        ("base_advects_perturbation_trilinear", "base_advects_perturbation_young"),
        ("perturbation_advects_base_trilinear", "perturbation_advects_base_young"),
    ];
    for (j, (first, second)) in names.iter().enumerate() {
        report.extend_worst(
            first,
            rows.iter().map(|(t, terms, _, _)| Check::relative("", terms[j].0, terms[j].1).at(*t)),
        );
        report.extend_worst(
            second,
            rows.iter().map(|(t, terms, _, _)| Check::relative("", terms[j].1, terms[j].2).at(*t)),
        );
    }

    // φ(t) ≤ e^{2Ct} (φ(0) + (4/ν) ∫₀ᵗ e^{−2Cs} ‖g − f‖²_H ds)
    let two_c = 2.0 * constants.big_c;
    let weighted: Vec<f64> = rows.iter().map(|(t, _, h2, _)| (-two_c * t).exp() * h2).collect();
    let g_int = quadrature::cumulative(times, &weighted);
    let phi0 = rows[0].3.min(1.0);
    report.extend_worst(
        "phi_gronwall",
        rows.iter().enumerate().map(|(i, (t, _, _, ev2))| {
            let rhs = (two_c * t).exp() * (phi0 + 4.0 / nu * g_int[i]);
            Check::relative("", ev2.min(1.0), rhs).at(*t)
        }),
    );
    Ok(report)
}

impl VerificationReport {
    fn extend_worst(&mut self, name: &str, checks: impl IntoIterator<Item = Check>) {
        if let Some(c) = Check::worst(name, checks) {
            self.push(c);
        }
    }
}

/// Numerical uniqueness proxy: the solution must not depend on the
/// integrator. Compares RK4 at `dt` and `dt/2`, and second-order Heun
/// (Richardson-extrapolated from `dt` and `dt/2`) against the RK4 `dt/2`
/// reference, all in `C([0,T];V)` on the `dt` grid.
pub fn cross_integrator_uniqueness(
    y0: &SpectralField,
    f: &ForcingSpec,
    config: &SolverConfig,
    tol: f64,
) -> Result<VerificationReport> {
    let base = config.with_scheme(Scheme::Rk4);
    let half = base.with_dt(0.5 * config.dt);
    let rk4 = solve_nse(y0, f, &base)?;
    let rk4_half = solve_nse(y0, f, &half)?;
    let rk2 = solve_nse(y0, f, &base.with_scheme(Scheme::Rk2))?;
    let rk2_half = solve_nse(y0, f, &half.with_scheme(Scheme::Rk2))?;

    let mut report = VerificationReport::new("cross_integrator_uniqueness");
    let at = |traj: &Trajectory, t: f64| traj.state_at(t, Interpolation::Cubic);
    let mut d_rk4 = 0f64;
    let mut d_rich = 0f64;
    let mut d_rk2 = 0f64;
    if !rk4.same_grid(&rk2) {
        return Err(Error::Usage("integrator grids differ".into()));
    }
    for (i, (&t, a)) in rk4.times().iter().zip(rk4.states()).enumerate() {
        let reference = at(&rk4_half, t);
        let coarse = &rk2.states()[i];
        let fine = at(&rk2_half, t);
        let richardson = fine.scaled(4.0 / 3.0).axpy(-1.0 / 3.0, coarse);
        d_rk4 = d_rk4.max(a.sub(&reference).norm_v());
        d_rich = d_rich.max(richardson.sub(&reference).norm_v());
        d_rk2 = d_rk2.max(coarse.sub(&reference).norm_v());
    }
    report.push(Check::new("rk4_dt_vs_dt_half", d_rk4, tol, 0.0, 1.0));
    report.push(Check::new("rk2_richardson_vs_rk4", d_rich, tol, 0.0, 1.0));
    report.context("rk2_raw_distance", d_rk2);
    report.context("dt", config.dt);
    Ok(report)
}
