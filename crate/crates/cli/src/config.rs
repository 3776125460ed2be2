//! Experiment configuration (TOML).
//!
//! ```toml
//! command = "nse"            # nse | controlled | perturb | sweep | fixed-point | constants | check
//! out_dir = "runs/tg"        # optional; --out-dir overrides
//!
//! [solver]
//! nu = 1.0
//! T = 1.0
//! dt = 1e-3
//! K = 2
//! blowup_threshold = 1e6     # optional
//! interpolation = "cubic"    # optional: linear | cubic
//!
//! [data]                     # initial field
//! preset = "taylor-green"    # taylor-green | single-mode | random | zero | file
//! amplitude = 1.0
//!
//! [forcing]                  # optional; zero when absent
//! kind = "steady"            # zero | steady | field
//! ```
//!
//! See the README for the experiment-specific sections.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use ns_galerkin::operators::{apply_a, bilinear_b};
use ns_galerkin::solvers::{ForcingSpec, SolverConfig};
use ns_galerkin::{presets, CVec3, Complex64, ModeSet, SpectralField};
use serde::{Deserialize, Serialize};

use crate::RunError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Nse,
    Controlled,
    Perturb,
    Sweep,
    FixedPoint,
    Constants,
    Check,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Nse => "nse",
            Command::Controlled => "controlled",
            Command::Perturb => "perturb",
            Command::Sweep => "sweep",
            Command::FixedPoint => "fixed-point",
            Command::Constants => "constants",
            Command::Check => "check",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string())).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    TaylorGreen,
    SingleMode,
    Random,
    Zero,
    File,
}

fn one() -> f64 {
    1.0
}
fn two() -> f64 {
    2.0
}

/// Initial, control or perturbation field.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub preset: Preset,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "two")]
    pub decay: f64,
    /// `random`: rescale to this V-norm before applying `amplitude`.
    pub norm_v: Option<f64>,
    /// `single-mode`: wavevector and (projected) direction of `2cos(k·x)·d`.
    pub wavevector: Option<[i32; 3]>,
    pub direction: Option<[f64; 3]>,
    /// `file`: field CSV.
    pub path: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ForcingKind {
    #[default]
    Zero,
    /// `f = νAy0 + B(y0, y0)`, making the initial field a steady state.
    Steady,
    /// Constant-in-time field given by `field`.
    Field,
}

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ForcingConfig {
    #[serde(default)]
    pub kind: ForcingKind,
    pub field: Option<FieldSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatesConfig {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "two")]
    pub decay: f64,
    #[serde(default = "two")]
    pub safety_factor: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_samples() -> usize {
    1000
}
fn default_seed() -> u64 {
    7
}
fn default_tolerance() -> f64 {
    1e-6
}

impl Default for EstimatesConfig {
    fn default() -> Self {
        Self {
            samples: default_samples(),
            seed: default_seed(),
            decay: 2.0,
            safety_factor: 2.0,
            tolerance: default_tolerance(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlledConfig {
    /// Control `z`, held constant in time.
    pub control: FieldSpec,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbConfig {
    /// `z0 − y0`.
    pub perturbation: FieldSpec,
    /// `g − f`, constant in time.
    pub forcing_delta: Option<FieldSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub lambdas: Option<Vec<f64>>,
    pub evidence_threshold: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointConfig {
    #[serde(default = "one")]
    pub lambda: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_fp_tol")]
    pub tol: f64,
    #[serde(default = "one")]
    pub relaxation: f64,
}

fn default_max_iter() -> usize {
    50
}
fn default_fp_tol() -> f64 {
    1e-8
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        Self { lambda: 1.0, max_iter: default_max_iter(), tol: default_fp_tol(), relaxation: 1.0 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_snapshot_every")]
    pub snapshot_every: usize,
}

fn default_snapshot_every() -> usize {
    100
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { snapshot_every: default_snapshot_every() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Command,
    pub out_dir: Option<PathBuf>,
    pub solver: SolverConfig,
    pub data: FieldSpec,
    #[serde(default)]
    pub forcing: ForcingConfig,
    #[serde(default)]
    pub estimates: EstimatesConfig,
    pub controlled: Option<ControlledConfig>,
    pub perturb: Option<PerturbConfig>,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub fixed_point: FixedPointConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn config_err(msg: impl Into<String>) -> RunError {
    RunError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, RunError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| config_err(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<(), RunError> {
        self.solver.validate().map_err(|e| config_err(e.to_string()))?;
        self.data.validate()?;
        if let Some(f) = &self.forcing.field {
            f.validate()?;
        }
        if self.forcing.kind == ForcingKind::Field && self.forcing.field.is_none() {
            return Err(config_err("forcing.kind = \"field\" needs a [forcing.field] table"));
        }
        let e = &self.estimates;
        if e.samples == 0 || !(e.safety_factor >= 1.0) || !(e.tolerance > 0.0) || !(e.decay >= 0.0) {
            return Err(config_err("estimates: samples > 0, safety_factor ≥ 1, tolerance > 0, decay ≥ 0"));
        }
        match self.command {
            Command::Controlled => {
                let c =
                    self.controlled.as_ref().ok_or_else(|| config_err("command \"controlled\" needs [controlled]"))?;
                c.control.validate()?;
            }
            Command::Perturb => {
                let p = self.perturb.as_ref().ok_or_else(|| config_err("command \"perturb\" needs [perturb]"))?;
                p.perturbation.validate()?;
                if let Some(d) = &p.forcing_delta {
                    d.validate()?;
                }
            }
            Command::Sweep => {
                if let Some(l) = &self.sweep.lambdas {
                    if l.first() != Some(&0.0) || l.last() != Some(&1.0) || l.windows(2).any(|w| !(w[1] > w[0])) {
                        return Err(config_err("sweep.lambdas must increase from 0 to 1"));
                    }
                }
            }
            Command::FixedPoint => {
                let fp = &self.fixed_point;
                if !(0.0..=1.0).contains(&fp.lambda)
                    || fp.max_iter == 0
                    || !(fp.tol > 0.0)
                    || !(fp.relaxation > 0.0 && fp.relaxation <= 1.0)
                {
                    return Err(config_err("fixed_point: lambda ∈ [0,1], max_iter > 0, tol > 0, relaxation ∈ (0,1]"));
                }
            }
            Command::Nse | Command::Constants | Command::Check => {}
        }
        if matches!(self.command, Command::Perturb | Command::Controlled | Command::Constants)
            && !(self.solver.nu > 0.0)
        {
            return Err(config_err(format!("command \"{}\" needs nu > 0", self.command.as_str())));
        }
        Ok(())
    }

    pub fn modes(&self) -> Result<Arc<ModeSet>, RunError> {
        ModeSet::new(self.solver.cutoff).map_err(|e| config_err(e.to_string()))
    }

    pub fn initial_field(&self, modes: &Arc<ModeSet>) -> Result<SpectralField, RunError> {
        self.data.build(modes)
    }

    pub fn forcing(&self, modes: &Arc<ModeSet>, y0: &SpectralField) -> Result<ForcingSpec, RunError> {
        Ok(match self.forcing.kind {
            ForcingKind::Zero => ForcingSpec::Zero,
            ForcingKind::Steady => {
                let b = bilinear_b(y0, y0)?;
                ForcingSpec::Constant(apply_a(y0).scaled(self.solver.nu).add(&b))
            }
            ForcingKind::Field => ForcingSpec::Constant(self.forcing.field.as_ref().expect("validated").build(modes)?),
        })
    }
}

impl FieldSpec {
    pub fn validate(&self) -> Result<(), RunError> {
        if !self.amplitude.is_finite() {
            return Err(config_err("field amplitude must be finite"));
        }
        if !(self.decay >= 0.0) {
            return Err(config_err("field decay must be nonnegative"));
        }
        if self.preset == Preset::File && self.path.is_none() {
            return Err(config_err("preset \"file\" needs a path"));
        }
        if let Some(n) = self.norm_v {
            if !(n >= 0.0) {
                return Err(config_err("norm_v must be nonnegative"));
            }
        }
        Ok(())
    }

    pub fn build(&self, modes: &Arc<ModeSet>) -> Result<SpectralField, RunError> {
        let field = match self.preset {
            Preset::TaylorGreen => presets::taylor_green(modes, 1.0),
            Preset::Zero => SpectralField::zeros(modes),
            Preset::Random => match self.norm_v {
                Some(n) => presets::random_with_norm_v(modes, self.seed, self.decay, n),
                None => SpectralField::random(modes, self.seed, self.decay),
            },
            Preset::SingleMode => {
                let k = self.wavevector.unwrap_or([1, 0, 0]);
                let d = self.direction.unwrap_or([0.0, 0.0, 1.0]);
                let i =
                    modes.index_of(k).ok_or_else(|| config_err(format!("wavevector {k:?} outside the mode set")))?;
                let mut raw: Vec<CVec3> = vec![Default::default(); modes.len()];
                let a: CVec3 = d.map(|x| Complex64::new(x, 0.0));
                raw[i] = a;
                raw[modes.negation(i)] = a;
                let f = SpectralField::leray_project(modes, &raw)?;
                if f.is_zero() {
                    return Err(config_err("single-mode direction is parallel to its wavevector"));
                }
                f
            }
            Preset::File => {
                let path = self.path.as_ref().expect("validated");
                let f = SpectralField::read_csv_file(path)?;
                if !f.mode_set().same_as(modes) {
                    return Err(config_err(format!(
                        "{} has K = {}, solver uses K = {}",
                        path.display(),
                        f.mode_set().cutoff(),
                        modes.cutoff()
                    )));
                }
                f.resample(modes)
            }
        };
        Ok(field.scaled(self.amplitude))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHIPPED: [&str; 8] = [
        include_str!("../../../configs/taylor_green.toml"),
        include_str!("../../../configs/check_random.toml"),
        include_str!("../../../configs/controlled.toml"),
        include_str!("../../../configs/perturb.toml"),
        include_str!("../../../configs/sweep_zero.toml"),
        include_str!("../../../configs/sweep_blowup.toml"),
        include_str!("../../../configs/fixed_point.toml"),
        include_str!("../../../configs/constants.toml"),
    ];

    fn base(command: &str) -> String {
        format!("command = \"{command}\"\n[solver]\nnu = 1.0\nT = 1.0\ndt = 1e-2\nK = 2\n[data]\npreset = \"taylor-green\"\n")
    }

    #[test]
    fn shipped_configs_parse() {
        for text in SHIPPED {
            ExperimentConfig::from_toml_str(text).unwrap();
        }
    }

    #[test]
    fn command_sections_are_required() {
        for command in ["controlled", "perturb"] {
            assert!(matches!(ExperimentConfig::from_toml_str(&base(command)), Err(RunError::Config(_))));
        }
        for command in ["nse", "sweep", "fixed-point", "constants", "check"] {
            assert_eq!(ExperimentConfig::from_toml_str(&base(command)).unwrap().command.as_str(), command);
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = base("nse").replace("preset", "amplitude = 2.0\nsmoothness = 1\npreset");
        assert!(ExperimentConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn invalid_values_are_rejected() {
        for (from, to) in [("dt = 1e-2", "dt = 2.0"), ("K = 2", "K = 0"), ("nu = 1.0", "nu = -1.0")] {
            assert!(ExperimentConfig::from_toml_str(&base("nse").replace(from, to)).is_err(), "{to}");
        }
        let grid = base("sweep") + "[sweep]\nlambdas = [0.0, 0.5]\n";
        assert!(ExperimentConfig::from_toml_str(&grid).is_err());
        let relax = base("fixed-point") + "[fixed_point]\nrelaxation = 1.5\n";
        assert!(ExperimentConfig::from_toml_str(&relax).is_err());
    }

    #[test]
    fn single_mode_builds_a_projected_cosine() {
        let text = base("nse").replace(
            "preset = \"taylor-green\"",
            "preset = \"single-mode\"\nwavevector = [0, 1, 0]\ndirection = [1.0, 1.0, 0.0]\namplitude = 3.0",
        );
        let cfg = ExperimentConfig::from_toml_str(&text).unwrap();
        let y = cfg.initial_field(&cfg.modes().unwrap()).unwrap();
        // Projection removes the e₂ part; 3·2cos(x₂)e₁ has H-norm 3√2.
        assert!((y.norm_h() - 3.0 * 2f64.sqrt()).abs() < 1e-12);

        let parallel = text.replace("[1.0, 1.0, 0.0]", "[0.0, 2.0, 0.0]");
        let cfg = ExperimentConfig::from_toml_str(&parallel).unwrap();
        assert!(cfg.initial_field(&cfg.modes().unwrap()).is_err());
    }

    #[test]
    fn steady_forcing_balances_the_initial_field() {
        let text = base("nse")
            .replace("preset = \"taylor-green\"", "preset = \"random\"\nseed = 4\nnorm_v = 1.0")
            .replace("dt = 1e-2", "dt = 1e-3")
            + "[forcing]\nkind = \"steady\"\n";
        let cfg = ExperimentConfig::from_toml_str(&text).unwrap();
        let modes = cfg.modes().unwrap();
        let y0 = cfg.initial_field(&modes).unwrap();
        let f = cfg.forcing(&modes, &y0).unwrap();
        let y = ns_galerkin::solvers::solve_nse(&y0, &f, &cfg.solver).unwrap();
        let d = y.last().sub(&y0).norm_v();
        assert!(d < 1e-8, "drift {d:e} norm {}", y0.norm_v());
    }
}
