use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::spectral::{ModeSet, SpectralField};

/// Time-dependent body force `f ∈ L²(0,T;H)`.
#[derive(Clone, Debug, Default)]
pub enum ForcingSpec {
    #[default]
    Zero,
    Constant(SpectralField),
    /// Samples at increasing times, linearly interpolated and held constant
    /// outside the sampled range.
    Sampled {
        times: Vec<f64>,
        fields: Vec<SpectralField>,
    },
}

impl ForcingSpec {
    pub fn sampled(times: Vec<f64>, fields: Vec<SpectralField>) -> Result<Self> {
        if times.is_empty() || times.len() != fields.len() {
            return Err(Error::Usage("sampled forcing needs one field per time".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Usage("forcing sample times must increase".into()));
        }
        for f in &fields {
            fields[0].require_same_modes(f)?;
            f.check_invariants()?;
        }
        Ok(Self::Sampled { times, fields })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ForcingSpec::Zero => true,
            ForcingSpec::Constant(f) => f.is_zero(),
            ForcingSpec::Sampled { fields, .. } => fields.iter().all(SpectralField::is_zero),
        }
    }

    pub fn check_modes(&self, modes: &ModeSet) -> Result<()> {
        let ok = match self {
            ForcingSpec::Zero => true,
            ForcingSpec::Constant(f) => f.mode_set().same_as(modes),
            ForcingSpec::Sampled { fields, .. } => fields.iter().all(|f| f.mode_set().same_as(modes)),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Usage("forcing is not on the solver mode set".into()))
        }
    }

    /// `f(t)`, or `None` for identically zero forcing.
    pub fn at(&self, t: f64) -> Option<SpectralField> {
        match self {
            ForcingSpec::Zero => None,
            ForcingSpec::Constant(f) => Some(f.clone()),
            ForcingSpec::Sampled { times, fields } => {
                let (start, w, n) = quadrature::linear_stencil(times, t);
                let mut acc = fields[start].scaled(w[0]);
                for j in 1..n {
                    acc = acc.axpy(w[j], &fields[start + j]);
                }
                Some(acc)
            }
        }
    }

    pub fn at_or_zero(&self, t: f64, modes: &Arc<ModeSet>) -> SpectralField {
        self.at(t).unwrap_or_else(|| SpectralField::zeros(modes))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            ForcingSpec::Zero => ForcingSpec::Zero,
            ForcingSpec::Constant(f) => ForcingSpec::Constant(f.scaled(factor)),
            ForcingSpec::Sampled { times, fields } => {
                ForcingSpec::Sampled { times: times.clone(), fields: fields.iter().map(|f| f.scaled(factor)).collect() }
            }
        }
    }

    /// `g − f`; sampled on `times` unless both are constant in time.
    pub fn difference(g: &ForcingSpec, f: &ForcingSpec, times: &[f64], modes: &Arc<ModeSet>) -> ForcingSpec {
        use ForcingSpec::*;
        match (g, f) {
            (Zero, Zero) => Zero,
            (Constant(a), Zero) => Constant(a.clone()),
            (Zero, Constant(b)) => Constant(b.scaled(-1.0)),
            (Constant(a), Constant(b)) => Constant(a.sub(b)),
            _ => Sampled {
                times: times.to_vec(),
                fields: times.iter().map(|&t| g.at_or_zero(t, modes).sub(&f.at_or_zero(t, modes))).collect(),
            },
        }
    }

    /// `‖f‖²_{L²(0,T;H)}` on the given time grid.
    pub fn l2_h_sqr(&self, times: &[f64]) -> f64 {
        match self {
            ForcingSpec::Zero => 0.0,
            ForcingSpec::Constant(f) => f.norm_h_sqr() * (times[times.len() - 1] - times[0]),
            ForcingSpec::Sampled { .. } => {
                let vals: Vec<f64> = times.iter().map(|&t| self.at(t).map_or(0.0, |f| f.norm_h_sqr())).collect();
                quadrature::integral(times, &vals)
            }
        }
    }
}
