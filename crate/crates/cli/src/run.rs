use std::fs::{self, OpenOptions};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use ns_galerkin::continuation::{default_lambda_grid, fixed_point_iterate, lambda_sweep, FixedPointLog};
use ns_galerkin::estimates::{
    check_energy_inequality, cross_integrator_uniqueness, verify_gronwall, verify_lipschitz, verify_proof_estimates,
    Check, StabilityConstants, VerificationReport,
};
use ns_galerkin::io::{write_json, write_sweep_csv, write_trajectory, TrajectoryMeta};
use ns_galerkin::operators::{estimate_constants, ConstantEstimate};
use ns_galerkin::solvers::{solve_controlled, solve_nse, solve_perturbation, ForcingSpec, SolverConfig, Trajectory};
use ns_galerkin::Error;
use serde::Serialize;

use crate::config::{Command, ExperimentConfig};
use crate::{RunError, RunOptions, EXIT_BLOWUP, EXIT_NONCONVERGENCE, EXIT_OK, EXIT_STRICT};

const LOCK_FILE: &str = ".lock";

/// Contents of `meta.json` in every run directory.
#[derive(Clone, Debug, Serialize)]
pub struct RunMeta {
    pub command: String,
    pub exit_status: String,
    pub exit_code: i32,
    pub config: SolverConfig,
    pub experiment: ExperimentConfig,
    pub trajectory: Option<TrajectoryMeta>,
    pub blow_up: Option<BlowUp>,
    pub reports: Vec<String>,
    pub failed_checks: Vec<String>,
    pub created_unix: u64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BlowUp {
    pub t_star: f64,
    pub norm_v: f64,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub status: String,
    pub exit_code: i32,
    pub failed_checks: Vec<String>,
}

struct LockGuard(PathBuf);

impl LockGuard {
    fn acquire(dir: &Path) -> Result<Self, RunError> {
        let path = dir.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(LockGuard(path)),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(RunError::Locked(dir.to_path_buf())),
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

/// Accumulates everything a command produces before `meta.json` is written.
struct Output<'a> {
    dir: &'a Path,
    status: &'static str,
    exit_code: i32,
    trajectory: Option<TrajectoryMeta>,
    blow_up: Option<BlowUp>,
    reports: Vec<(String, VerificationReport)>,
}

impl<'a> Output<'a> {
    fn new(dir: &'a Path) -> Self {
        Self { dir, status: "ok", exit_code: EXIT_OK, trajectory: None, blow_up: None, reports: Vec::new() }
    }

    fn blew_up(&mut self, t_star: f64, norm_v: f64) {
        self.status = "blow-up";
        self.exit_code = EXIT_BLOWUP;
        self.blow_up = Some(BlowUp { t_star, norm_v });
    }

    fn report(&mut self, file: &str, report: VerificationReport) {
        self.reports.push((file.to_string(), report));
    }

    fn json<T: Serialize>(&self, file: &str, value: &T) -> Result<(), RunError> {
        Ok(write_json(&self.dir.join(file), value)?)
    }
}

/// Loads, validates and executes the experiment in `config_path`.
///
/// Nothing is written when the config is invalid. Otherwise the output
/// directory is locked for the duration of the run and always receives a
/// `meta.json`, including on blow-up and non-convergence.
pub fn run_experiment(config_path: &Path, options: &RunOptions) -> Result<RunOutcome, RunError> {
    let cfg = ExperimentConfig::load(config_path)?;
    let out_dir = options
        .out_dir
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .ok_or_else(|| RunError::Config("no output directory: pass --out-dir or set out_dir".into()))?;
    if options.threads == Some(0) {
        return Err(RunError::Config("--threads must be positive".into()));
    }
    let modes = cfg.modes()?;
    let y0 = cfg.initial_field(&modes)?;
    let f = cfg.forcing(&modes, &y0)?;
    log::info!("running {} into {}", cfg.command.as_str(), out_dir.display());

    fs::create_dir_all(&out_dir)?;
    let _lock = LockGuard::acquire(&out_dir)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = options.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| RunError::Config(e.to_string()))?;

    let mut out = Output::new(&out_dir);
    pool.install(|| execute(&cfg, &y0, &f, &mut out))?;

    for (file, report) in &out.reports {
        out.json(file, report)?;
    }
    let failed_checks: Vec<String> = out.reports.iter().flat_map(|(_, r)| r.failed().map(|c| c.name.clone())).collect();
    if options.strict && out.exit_code == EXIT_OK && !failed_checks.is_empty() {
        out.exit_code = EXIT_STRICT;
    }
    let meta = RunMeta {
        command: cfg.command.as_str().to_string(),
        exit_status: out.status.to_string(),
        exit_code: out.exit_code,
        config: cfg.solver.clone(),
        experiment: cfg.clone(),
        trajectory: out.trajectory.take(),
        blow_up: out.blow_up,
        reports: out.reports.iter().map(|(f, _)| f.clone()).collect(),
        failed_checks: failed_checks.clone(),
        created_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    };
    out.json("meta.json", &meta)?;
    let (status, exit_code) = (out.status.to_string(), out.exit_code);
    drop(out);
    Ok(RunOutcome { out_dir, status, exit_code, failed_checks })
}

fn execute(
    cfg: &ExperimentConfig,
    y0: &ns_galerkin::SpectralField,
    f: &ForcingSpec,
    out: &mut Output,
) -> Result<(), RunError> {
    let solver = &cfg.solver;
    let tol = cfg.estimates.tolerance;
    let every = cfg.output.snapshot_every;
    let dir = out.dir;
    match cfg.command {
        Command::Nse | Command::Check => {
            let Some(y) = solve_or_record(y0, f, solver, out)? else {
                return Ok(());
            };
            out.trajectory = Some(write_trajectory(dir, &y, every, "ok")?);
            out.report("energy_report.json", check_energy_inequality(&y, f, tol));
            if cfg.command == Command::Check {
                out.report("uniqueness_report.json", cross_integrator_uniqueness(y0, f, solver, tol)?);
            }
        }
        Command::Controlled => {
            let control = cfg.controlled.as_ref().expect("validated").control.build(y0.mode_set())?;
            let z = Trajectory::constant(solver, &control);
            let y = match solve_controlled(&z, y0, f, solver) {
                Ok(y) => y,
                Err(Error::BlowUpDetected { t_star, norm_v }) => {
                    out.blew_up(t_star, norm_v);
                    return Ok(());
                }
                Err(e) => return Err(e.into()),
            };
            out.trajectory = Some(write_trajectory(dir, &y, every, "ok")?);
            let est = constants(cfg, y0)?;
            out.json("constants.json", &est)?;
            out.report(
                "gronwall_report.json",
                verify_gronwall(&y, &z, est.c2, cfg.estimates.safety_factor, solver.nu, f)?,
            );
        }
        Command::Perturb => {
            let p = cfg.perturb.as_ref().expect("validated");
            let modes = y0.mode_set();
            let eta0 = p.perturbation.build(modes)?;
            let delta = match &p.forcing_delta {
                Some(spec) => ForcingSpec::Constant(spec.build(modes)?),
                None => ForcingSpec::Zero,
            };
            let Some(y) = solve_or_record(y0, f, solver, out)? else {
                return Ok(());
            };
            let est = constants(cfg, y0)?;
            out.json("constants.json", &est)?;
            let stability = StabilityConstants::with_safety(
                est.c,
                cfg.estimates.safety_factor,
                solver.nu,
                solver.t_end,
                y.sup_v(),
            )?;
            out.json("stability.json", &stability)?;

            let eta = match solve_perturbation(&y, &eta0, &delta, solver) {
                Ok(eta) => eta,
                Err(Error::BlowUpDetected { t_star, norm_v }) => {
                    out.blew_up(t_star, norm_v);
                    return Ok(());
                }
                Err(e) => return Err(e.into()),
            };
            out.trajectory = Some(write_trajectory(dir, &eta, every, "ok")?);
            write_trajectory(&dir.join("base"), &y, every, "ok")?;

            let z0 = y0.add(&eta0);
            let g = add_forcing(f, &delta, y.times(), modes);
            let Some(z) = solve_or_record(&z0, &g, solver, out)? else {
                return Ok(());
            };
            let mut consistency = VerificationReport::new("perturbation_consistency");
            let sum = y.axpy(1.0, &eta, &g)?;
            consistency.push(Check::new(
                "perturbed_minus_base_equals_eta",
                z.sup_v_distance(&sum)?,
                tol * (1.0 + z.sup_v()),
                0.0,
                1.0,
            ));
            out.report("consistency_report.json", consistency);
            out.report("lipschitz_report.json", verify_lipschitz(&y, &z, &stability, &z0, &g, y0, f, tol)?);
            out.report(
                "proof_estimates_report.json",
                verify_proof_estimates(&eta, &y, &delta, est.c, cfg.estimates.safety_factor, solver.nu, &stability)?,
            );
        }
        Command::Sweep => {
            let grid = cfg.sweep.lambdas.clone().unwrap_or_else(default_lambda_grid);
            let report = lambda_sweep(y0, f, &grid, solver, cfg.sweep.evidence_threshold)?;
            out.json("sweep.json", &report)?;
            write_sweep_csv(&dir.join("sweep.csv"), &report)?;
        }
        Command::FixedPoint => {
            let fp = &cfg.fixed_point;
            match fixed_point_iterate(fp.lambda, y0, f, None, fp.max_iter, fp.tol, solver, fp.relaxation) {
                Ok(log) => {
                    if let Some(z) = &log.trajectory {
                        out.trajectory = Some(write_trajectory(dir, z, every, "ok")?);
                    }
                    out.json("fixed_point.json", &log)?;
                }
                Err(Error::NonConvergence { history, .. }) => {
                    let log = FixedPointLog {
                        lambda: fp.lambda,
                        relaxation: fp.relaxation,
                        tolerance: fp.tol,
                        iterates: history,
                        converged: false,
                        trajectory: None,
                    };
                    out.json("fixed_point.json", &log)?;
                    out.status = "non-convergence";
                    out.exit_code = EXIT_NONCONVERGENCE;
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Constants => {
            let est = constants(cfg, y0)?;
            out.json("constants.json", &est)?;
            if let Some(y) = solve_or_record(y0, f, solver, out)? {
                let stability = StabilityConstants::with_safety(
                    est.c,
                    cfg.estimates.safety_factor,
                    solver.nu,
                    solver.t_end,
                    y.sup_v(),
                )?;
                out.json("stability.json", &stability)?;
            }
        }
    }
    Ok(())
}

fn solve_or_record(
    y0: &ns_galerkin::SpectralField,
    f: &ForcingSpec,
    solver: &SolverConfig,
    out: &mut Output,
) -> Result<Option<Trajectory>, RunError> {
    match solve_nse(y0, f, solver) {
        Ok(y) => Ok(Some(y)),
        Err(Error::BlowUpDetected { t_star, norm_v }) => {
            log::warn!("blow-up at t = {t_star} (|y|_V = {norm_v:e})");
            out.blew_up(t_star, norm_v);
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn constants(cfg: &ExperimentConfig, y0: &ns_galerkin::SpectralField) -> Result<ConstantEstimate, RunError> {
    let e = &cfg.estimates;
    Ok(estimate_constants(y0.mode_set(), e.samples, e.seed, e.decay, cfg.solver.nu)?)
}

/// `f + delta`, sampled on `times` when either side varies in time.
fn add_forcing(
    f: &ForcingSpec,
    delta: &ForcingSpec,
    times: &[f64],
    modes: &std::sync::Arc<ns_galerkin::ModeSet>,
) -> ForcingSpec {
    match (f, delta) {
        (ForcingSpec::Zero, d) => d.clone(),
        (g, ForcingSpec::Zero) => g.clone(),
        (ForcingSpec::Constant(a), ForcingSpec::Constant(b)) => ForcingSpec::Constant(a.add(b)),
        _ => {
            let fields = times.iter().map(|&t| f.at_or_zero(t, modes).add(&delta.at_or_zero(t, modes))).collect();
            ForcingSpec::sampled(times.to_vec(), fields).expect("grid times are increasing")
        }
    }
}
