use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::spectral::grid::PhysicalGrid;
use crate::spectral::mode_set::{ModeSet, Wavevector};

/// Complex amplitude of one Fourier mode of a vector field.
pub type CVec3 = [Complex64; 3];

const ZERO3: CVec3 = [Complex64 { re: 0.0, im: 0.0 }; 3];

/// Incompressibility and reality are checked to this (relative) tolerance.
pub const INVARIANT_TOL: f64 = 1e-12;

/// Divergence-free, real, mean-free vector field on the torus,
/// `y(x) = Σ_k ŷ_k e^{ik·x}`, with `‖y‖²_H = Σ_k |ŷ_k|²`.
///
/// Immutable once constructed; every constructor establishes the invariants.
#[derive(Clone)]
pub struct SpectralField {
    modes: Arc<ModeSet>,
    coeffs: Vec<CVec3>,
}

fn dot_k(k: [f64; 3], a: &CVec3) -> Complex64 {
    a[0] * k[0] + a[1] * k[1] + a[2] * k[2]
}

fn norm_sqr(a: &CVec3) -> f64 {
    a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()
}

/// `P_k a = a − k (k·a)/|k|²`.
pub(crate) fn project_mode(k: [f64; 3], k2: f64, a: &CVec3) -> CVec3 {
    let s = dot_k(k, a) / k2;
    [a[0] - s * k[0], a[1] - s * k[1], a[2] - s * k[2]]
}

impl SpectralField {
    pub fn zeros(modes: &Arc<ModeSet>) -> Self {
        Self { modes: Arc::clone(modes), coeffs: vec![ZERO3; modes.len()] }
    }

    /// Wraps coefficients that satisfy the invariants by construction.
    pub(crate) fn from_raw(modes: Arc<ModeSet>, coeffs: Vec<CVec3>) -> Self {
        debug_assert_eq!(modes.len(), coeffs.len());
        Self { modes, coeffs }
    }

    /// Accepts coefficients only if they already satisfy every field invariant.
    pub fn new(modes: &Arc<ModeSet>, coeffs: Vec<CVec3>) -> Result<Self> {
        if coeffs.len() != modes.len() {
            return Err(Error::DataIntegrity(format!("expected {} modes, got {}", modes.len(), coeffs.len())));
        }
        let field = Self::from_raw(Arc::clone(modes), coeffs);
        field.check_invariants()?;
        Ok(field)
    }

    /// Leray projection `P_k = I − k kᵀ/|k|²` applied mode by mode.
    ///
    /// The input must already have conjugate symmetry; the projector commutes
    /// with conjugation so the output keeps it.
    pub fn leray_project(modes: &Arc<ModeSet>, raw: &[CVec3]) -> Result<Self> {
        if raw.len() != modes.len() {
            return Err(Error::DataIntegrity(format!("expected {} modes, got {}", modes.len(), raw.len())));
        }
        check_reality(modes, raw)?;
        let mut coeffs = vec![ZERO3; modes.len()];
        for i in modes.positive_half() {
            let p = project_mode(modes.wavevector(i), modes.k2(i), &raw[i]);
            coeffs[modes.negation(i)] = conj3(&p);
            coeffs[i] = p;
        }
        Ok(Self::from_raw(Arc::clone(modes), coeffs))
    }

    /// Builds a field from amplitudes on selected modes; `−k` receives the
    /// conjugate. Amplitudes must be tangent (`k·a = 0`).
    pub fn from_modes(modes: &Arc<ModeSet>, entries: &[(Wavevector, CVec3)]) -> Result<Self> {
        let mut coeffs = vec![ZERO3; modes.len()];
        for (k, a) in entries {
            let i =
                modes.index_of(*k).ok_or_else(|| Error::DataIntegrity(format!("wavevector {k:?} not in mode set")))?;
            coeffs[i] = *a;
            coeffs[modes.negation(i)] = conj3(a);
        }
        Self::new(modes, coeffs)
    }

    /// Deterministic random field with `|ŷ_k| ∝ |k|^{−decay}`.
    pub fn random(modes: &Arc<ModeSet>, seed: u64, decay_exponent: f64) -> Self {
        assert!(decay_exponent >= 0.0, "decay exponent must be nonnegative");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coeffs = vec![ZERO3; modes.len()];
        for i in modes.positive_half() {
            let mut g = ZERO3;
            for c in g.iter_mut() {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                *c = Complex64::new(re, im);
            }
            let scale = modes.k2(i).powf(-0.5 * decay_exponent);
            let p = project_mode(modes.wavevector(i), modes.k2(i), &g);
            let p = [p[0] * scale, p[1] * scale, p[2] * scale];
            coeffs[modes.negation(i)] = conj3(&p);
            coeffs[i] = p;
        }
        Self::from_raw(Arc::clone(modes), coeffs)
    }

    pub fn mode_set(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    pub fn coeffs(&self) -> &[CVec3] {
        &self.coeffs
    }

    pub fn coeff(&self, k: Wavevector) -> Option<&CVec3> {
        self.modes.index_of(k).map(|i| &self.coeffs[i])
    }

    pub fn into_coeffs(self) -> Vec<CVec3> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| norm_sqr(a) == 0.0)
    }

    pub fn check_invariants(&self) -> Result<()> {
        check_reality(&self.modes, &self.coeffs)?;
        for (i, a) in self.coeffs.iter().enumerate() {
            let div = dot_k(self.modes.wavevector(i), a).norm();
            if div > INVARIANT_TOL * norm_sqr(a).sqrt().max(1.0) {
                return Err(Error::DataIntegrity(format!("mode {:?} has divergence {div:e}", self.modes.mode(i))));
            }
        }
        Ok(())
    }

    pub fn same_modes(&self, other: &SpectralField) -> bool {
        self.modes.same_as(&other.modes)
    }

    pub(crate) fn require_same_modes(&self, other: &SpectralField) -> Result<()> {
        if self.same_modes(other) {
            Ok(())
        } else {
            Err(Error::Usage(format!("mode set mismatch: K = {} vs K = {}", self.modes.cutoff(), other.modes.cutoff())))
        }
    }

    fn weighted_sum(&self, power: i32) -> f64 {
        self.coeffs.iter().enumerate().map(|(i, a)| self.modes.k2(i).powi(power) * norm_sqr(a)).sum()
    }

    pub fn norm_h(&self) -> f64 {
        self.weighted_sum(0).sqrt()
    }

    pub fn norm_v(&self) -> f64 {
        self.weighted_sum(1).sqrt()
    }

    pub fn norm_da(&self) -> f64 {
        self.weighted_sum(2).sqrt()
    }

    pub fn norm_h_sqr(&self) -> f64 {
        self.weighted_sum(0)
    }

    pub fn norm_v_sqr(&self) -> f64 {
        self.weighted_sum(1)
    }

    pub fn norm_da_sqr(&self) -> f64 {
        self.weighted_sum(2)
    }

    /// Spatial `L⁴` norm by exact grid quadrature of `|y|⁴` on the mode set's
    /// `(4K+1)³` grid.
    pub fn norm_l4(&self) -> f64 {
        self.norm_l4_on(self.modes.quadrature_grid()).expect("mode set quadrature grid is exact by construction")
    }

    /// `L⁴` norm on a caller-chosen grid; rejects grids below `4K + 1` points
    /// per axis, where the quadrature of `|y|⁴` stops being exact.
    pub fn norm_l4_on(&self, grid: &PhysicalGrid) -> Result<f64> {
        let needed = 4 * self.modes.cutoff() + 1;
        if grid.n() < needed {
            return Err(Error::Config(format!(
                "L4 quadrature needs at least {needed} points per axis, got {}",
                grid.n()
            )));
        }
        let [u, v, w] = self.to_grid(grid);
        let sum: f64 = (0..grid.len())
            .map(|p| {
                let s = u[p] * u[p] + v[p] * v[p] + w[p] * w[p];
                s * s
            })
            .sum();
        Ok((sum / grid.len() as f64).max(0.0).powf(0.25))
    }

    /// `⟨u, v⟩_H = Re Σ_k û_k · conj(v̂_k)`.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        debug_assert!(self.same_modes(other));
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (0..3).map(|c| (a[c] * b[c].conj()).re).sum::<f64>()).sum()
    }

    /// `⟨Au, v⟩ = Σ |k|² û_k · conj(v̂_k)`, the V inner product.
    pub fn inner_v(&self, other: &SpectralField) -> f64 {
        debug_assert!(self.same_modes(other));
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .map(|(i, (a, b))| self.modes.k2(i) * (0..3).map(|c| (a[c] * b[c].conj()).re).sum::<f64>())
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|_, a| [a[0] * factor, a[1] * factor, a[2] * factor])
    }

    /// `self + factor · other`.
    pub fn axpy(&self, factor: f64, other: &SpectralField) -> Self {
        debug_assert!(self.same_modes(other));
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| [a[0] + b[0] * factor, a[1] + b[1] * factor, a[2] + b[2] * factor])
            .collect();
        Self::from_raw(Arc::clone(&self.modes), coeffs)
    }

    pub fn add(&self, other: &SpectralField) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &SpectralField) -> Self {
        self.axpy(-1.0, other)
    }

    /// Applies a per-mode real multiplier `m(i)`; preserves every invariant.
    pub(crate) fn map_real(&self, multiplier: impl Fn(usize) -> f64) -> Self {
        self.map(|i, a| {
            let m = multiplier(i);
            [a[0] * m, a[1] * m, a[2] * m]
        })
    }

    fn map(&self, f: impl Fn(usize, &CVec3) -> CVec3) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, a)| f(i, a)).collect();
        Self::from_raw(Arc::clone(&self.modes), coeffs)
    }

    /// Maximum componentwise deviation from `other`.
    pub fn max_abs_diff(&self, other: &SpectralField) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .flat_map(|(a, b)| (0..3).map(move |c| (a[c] - b[c]).norm()))
            .fold(0.0, f64::max)
    }

    /// Copies the amplitudes onto another mode set, dropping modes outside it
    /// and zero-filling new ones.
    pub fn resample(&self, target: &Arc<ModeSet>) -> Self {
        let coeffs = target.modes().iter().map(|k| self.coeff(*k).copied().unwrap_or(ZERO3)).collect();
        Self::from_raw(Arc::clone(target), coeffs)
    }

    /// Velocity components on a physical grid.
    pub fn to_grid(&self, grid: &PhysicalGrid) -> [Vec<f64>; 3] {
        let comp = |c: usize| -> Vec<Complex64> { self.coeffs.iter().map(|a| a[c]).collect() };
        [
            grid.synthesize(&self.modes, &comp(0)),
            grid.synthesize(&self.modes, &comp(1)),
            grid.synthesize(&self.modes, &comp(2)),
        ]
    }

    /// Velocity gradient on a physical grid: entry `[i][j]` holds `∂_i y_j`.
    pub fn gradient_to_grid(&self, grid: &PhysicalGrid) -> [[Vec<f64>; 3]; 3] {
        let deriv = |i: usize, j: usize| -> Vec<f64> {
            let amps: Vec<Complex64> = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, a)| Complex64::new(0.0, self.modes.wavevector(m)[i]) * a[j])
                .collect();
            grid.synthesize(&self.modes, &amps)
        };
        [
            [deriv(0, 0), deriv(0, 1), deriv(0, 2)],
            [deriv(1, 0), deriv(1, 1), deriv(1, 2)],
            [deriv(2, 0), deriv(2, 1), deriv(2, 2)],
        ]
    }
}

impl std::fmt::Debug for SpectralField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralField").field("cutoff", &self.modes.cutoff()).field("norm_h", &self.norm_h()).finish()
    }
}

impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        self.same_modes(other) && self.coeffs == other.coeffs
    }
}

pub(crate) fn conj3(a: &CVec3) -> CVec3 {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

fn check_reality(modes: &ModeSet, coeffs: &[CVec3]) -> Result<()> {
    for i in modes.positive_half() {
        let a = &coeffs[i];
        let b = &coeffs[modes.negation(i)];
        let scale = norm_sqr(a).sqrt().max(1.0);
        for c in 0..3 {
            if (a[c] - b[c].conj()).norm() > INVARIANT_TOL * scale {
                return Err(Error::DataIntegrity(format!("conjugate symmetry violated at mode {:?}", modes.mode(i))));
            }
        }
    }
    Ok(())
}
