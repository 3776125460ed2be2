use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::serrin_norm;
use crate::solvers::{solve_nse, ForcingSpec, SolverConfig, Trajectory};
use crate::spectral::SpectralField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaStatus {
    Converged,
    BlowUp,
}

impl LambdaStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            LambdaStatus::Converged => "converged",
            LambdaStatus::BlowUp => "blow-up",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    AllSolvedBounded,
    UnboundedFamilyEvidence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub lambda: f64,
    pub status: LambdaStatus,
    /// Time at which the V-norm cap was exceeded.
    pub t_star: Option<f64>,
    /// `‖y_λ‖_{L⁸(0,T;L⁴)}`; absent after a blow-up.
    pub serrin: Option<f64>,
    pub sup_v: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub lambdas: Vec<f64>,
    pub entries: Vec<SweepEntry>,
    pub verdict: Verdict,
    /// Largest Serrin norm over the family, exported when every λ solved.
    pub family_bound: Option<f64>,
    /// `max sup-V(y_{λ'} − y_λ) / (λ' − λ)` over adjacent solved grid points.
    pub lambda_lipschitz: Option<f64>,
    pub evidence_threshold: Option<f64>,
}

impl SweepReport {
    pub fn blow_ups(&self) -> impl Iterator<Item = &SweepEntry> {
        self.entries.iter().filter(|e| e.status == LambdaStatus::BlowUp)
    }
}

/// Eleven uniform points on `[0, 1]`.
pub fn default_lambda_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.first() != Some(&0.0) || grid.last() != Some(&1.0) {
        return Err(Error::Usage("λ grid must start at 0 and end at 1".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Usage("λ grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Solves the family `(λ·y0, λ·f)` for every λ on the grid.
///
/// Entries run concurrently and are reported in grid order. The verdict is
/// `unbounded-family-evidence` when any λ hits the V-norm cap or any Serrin
/// norm exceeds `evidence_threshold`.
pub fn lambda_sweep(
    y0: &SpectralField,
    f: &ForcingSpec,
    lambda_grid: &[f64],
    config: &SolverConfig,
    evidence_threshold: Option<f64>,
) -> Result<SweepReport> {
    validate_grid(lambda_grid)?;
    config.validate()?;
    let runs: Vec<(SweepEntry, Option<Trajectory>)> = lambda_grid
        .par_iter()
        .map(|&lambda| {
            let data = y0.scaled(lambda);
            match solve_nse(&data, &f.scaled(lambda), config) {
                Ok(traj) => Ok((
                    SweepEntry {
                        lambda,
                        status: LambdaStatus::Converged,
                        t_star: None,
                        serrin: Some(serrin_norm(&traj)),
                        sup_v: Some(traj.sup_v()),
                    },
                    Some(traj),
                )),
                Err(Error::BlowUpDetected { t_star, .. }) => Ok((
                    SweepEntry {
                        lambda,
                        status: LambdaStatus::BlowUp,
                        t_star: Some(t_star),
                        serrin: None,
                        sup_v: None,
                    },
                    None,
                )),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut lambda_lipschitz: Option<f64> = None;
    for pair in runs.windows(2) {
        if let ((a, Some(ta)), (b, Some(tb))) = (&pair[0], &pair[1]) {
            let slope = ta.sup_v_distance(tb)? / (b.lambda - a.lambda);
            lambda_lipschitz = Some(lambda_lipschitz.map_or(slope, |m| m.max(slope)));
        }
    }
    let entries: Vec<SweepEntry> = runs.into_iter().map(|(e, _)| e).collect();
    let any_blowup = entries.iter().any(|e| e.status == LambdaStatus::BlowUp);
    let max_serrin = entries.iter().filter_map(|e| e.serrin).fold(0.0, f64::max);
    let over_threshold = evidence_threshold.is_some_and(|th| max_serrin > th);
    let verdict =
        if any_blowup || over_threshold { Verdict::UnboundedFamilyEvidence } else { Verdict::AllSolvedBounded };
    Ok(SweepReport {
        lambdas: lambda_grid.to_vec(),
        family_bound: (!any_blowup).then_some(max_serrin),
        entries,
        verdict,
        lambda_lipschitz,
        evidence_threshold,
    })
}
