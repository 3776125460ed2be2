//! Empirical lower bounds for the constants of the trilinear-form inequalities
//!
//! ```text
//! |b(u,v,w)|  ≤ c_b1 ‖u‖_V ‖v‖_V^{1/2} ‖v‖_{D(A)}^{1/2} ‖w‖_H
//! |b(u,v,w)|  ≤ c_b2 ‖u‖_{D(A)}^{3/4} ‖u‖_V^{1/4} ‖v‖_V ‖w‖_H
//! |b(u,v,Av)| ≤ c1 ‖u‖_{L⁴} ‖v‖_V^{1/4} ‖v‖_{D(A)}^{7/4} ≤ (ν/2)‖v‖²_{D(A)} + c2 ‖u‖⁸_{L⁴} ‖v‖²_V
//! ```
//!
//! Each constant is the running maximum of the corresponding ratio over a
//! deterministic sequence of random fields, so it only ever bounds the true
//! constant from below.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{apply_a, bilinear_b, trilinear_b};
use crate::spectral::{ModeSet, SpectralField};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub c_b1: f64,
    pub c_b2: f64,
    /// `max(c_b1, c_b2)`.
    pub c: f64,
    pub c1: f64,
    /// Sharp Young split of `c1` at viscosity `nu`, see [`young_c2`].
    pub c2: f64,
    pub samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub nu: f64,
    #[serde(default)]
    pub decay_exponent: f64,
}

/// Smallest `c2` with `c1 X Y^{1/4} Z^{7/4} ≤ (ν/2) Z² + c2 X⁸ Y²` for all
/// nonnegative `X, Y, Z`: `c2 = 7⁷ c1⁸ / (2¹⁷ ν⁷)`.
pub fn young_c2(c1: f64, nu: f64) -> f64 {
    7f64.powi(7) * c1.powi(8) / (2f64.powi(17) * nu.powi(7))
}

/// Seed of the `index`-th sample; a splitmix64 step so that neighbouring
/// indices give unrelated streams.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Default)]
struct Ratios {
    b1: Option<f64>,
    b2: Option<f64>,
    c1: Option<f64>,
}

fn max_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0 && den.is_finite() && num.is_finite()).then(|| num.abs() / den)
}

/// Ratios for one triple. `w` is tried both as drawn and as the maximizer
/// `w = B(u, v)` of `|b(u,v,w)| / ‖w‖_H` over the mode-set span.
fn sample_ratios(u: &SpectralField, v: &SpectralField, w: &SpectralField) -> Result<Ratios> {
    let (uv, uda, ul4) = (u.norm_v(), u.norm_da(), u.norm_l4());
    let (vv, vda) = (v.norm_v(), v.norm_da());
    let den_b1 = uv * (vv * vda).sqrt();
    let den_b2 = uda.powf(0.75) * uv.powf(0.25) * vv;

    let mut best_b = ratio(trilinear_b(u, v, w)?, w.norm_h());
    let buv = bilinear_b(u, v)?;
    let buv_norm = buv.norm_h();
    if buv_norm > 0.0 {
        best_b = max_opt(best_b, Some(buv_norm));
    }
    let scale = |den: f64| best_b.and_then(|num| ratio(num, den));

    let bav = trilinear_b(u, v, &apply_a(v))?;
    let c1 = ratio(bav, ul4 * vv.powf(0.25) * vda.powf(1.75));
    Ok(Ratios { b1: scale(den_b1), b2: scale(den_b2), c1 })
}

fn draw(modes: &Arc<ModeSet>, seed: u64, index: u64, decay: f64) -> Result<Ratios> {
    let s = sample_seed(seed, index);
    let u = SpectralField::random(modes, sample_seed(s, 0), decay);
    let v = SpectralField::random(modes, sample_seed(s, 1), decay);
    let w = SpectralField::random(modes, sample_seed(s, 2), decay);
    sample_ratios(&u, &v, &w)
}

/// Estimates `c_b1, c_b2, c1` (and `c2` at viscosity `nu`) as sample maxima
/// over `samples` random triples with spectral decay `decay_exponent`.
///
/// Samples are evaluated in parallel; each draws from its own seed derived
/// from `(seed, index)`, so the result is independent of scheduling and a
/// run with more samples extends the run with fewer.
pub fn estimate_constants(
    modes: &Arc<ModeSet>,
    samples: usize,
    seed: u64,
    decay_exponent: f64,
    nu: f64,
) -> Result<ConstantEstimate> {
    if samples == 0 {
        return Err(Error::Estimation("at least one sample is required".into()));
    }
    if !(nu > 0.0) {
        return Err(Error::Estimation("viscosity must be positive to split c1 into c2".into()));
    }
    let all = (0..samples as u64)
        .into_par_iter()
        .map(|i| draw(modes, seed, i, decay_exponent))
        .collect::<Result<Vec<_>>>()?;
    let best = all.into_iter().fold(Ratios::default(), |acc, r| Ratios {
        b1: max_opt(acc.b1, r.b1),
        b2: max_opt(acc.b2, r.b2),
        c1: max_opt(acc.c1, r.c1),
    });
    match (best.b1, best.b2, best.c1) {
        (Some(c_b1), Some(c_b2), Some(c1)) => Ok(ConstantEstimate {
            c_b1,
            c_b2,
            c: c_b1.max(c_b2),
            c1,
            c2: young_c2(c1, nu),
            samples,
            seed,
            nu,
            decay_exponent,
        }),
        _ => Err(Error::Estimation(format!("all {samples} draws were degenerate"))),
    }
}
