//! Uniform physical grids on the periodic box and the transforms between
//! truncated Fourier amplitudes and grid values.
//!
//! With `n` points per axis, the grid mean integrates `e^{im·x}` exactly for
//! every `|m_i| < n`, so trigonometric polynomials of degree below `n` have
//! exact quadrature under the normalized measure.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::spectral::mode_set::{ModeSet, Wavevector};

#[derive(Clone)]
pub struct PhysicalGrid {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl PhysicalGrid {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "grid needs at least one point per axis");
        let mut planner = FftPlanner::new();
        Self { n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) }
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn cell(&self, k: Wavevector) -> usize {
        let n = self.n as i32;
        let w = |x: i32| x.rem_euclid(n) as usize;
        (w(k[0]) * self.n + w(k[1])) * self.n + w(k[2])
    }

    /// Evaluates the real scalar `Σ_k a_k e^{ik·x}` on the grid.
    ///
    /// Panics if the mode set would alias on this grid (`2K + 1 > n`).
    pub fn synthesize(&self, modes: &ModeSet, amplitudes: &[Complex64]) -> Vec<f64> {
        assert!(2 * modes.cutoff() < self.n, "grid too coarse for mode set");
        assert_eq!(amplitudes.len(), modes.len());
        let mut data = vec![Complex64::new(0.0, 0.0); self.len()];
        for (i, a) in amplitudes.iter().enumerate() {
            data[self.cell(modes.mode(i))] = *a;
        }
        self.transform(&mut data, &self.inverse);
        data.into_iter().map(|z| z.re).collect()
    }

    /// Fourier coefficients of grid values, normalized so that synthesizing
    /// them reproduces the values. Indexed via [`coefficient`](Self::coefficient).
    pub fn analyze(&self, values: &[f64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.len());
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut data, &self.forward);
        let scale = 1.0 / self.len() as f64;
        data.iter_mut().for_each(|z| *z *= scale);
        data
    }

    pub fn coefficient(&self, spectrum: &[Complex64], k: Wavevector) -> Complex64 {
        spectrum[self.cell(k)]
    }

    /// Normalized-measure integral (grid mean).
    pub fn mean(&self, values: &[f64]) -> f64 {
        values.iter().sum::<f64>() / self.len() as f64
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        // Last axis is contiguous.
        fft.process_with_scratch(data, &mut scratch);
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        // Middle axis.
        for i0 in 0..n {
            for i2 in 0..n {
                for (i1, slot) in line.iter_mut().enumerate() {
                    *slot = data[(i0 * n + i1) * n + i2];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (i1, v) in line.iter().enumerate() {
                    data[(i0 * n + i1) * n + i2] = *v;
                }
            }
        }
        // First axis.
        for i1 in 0..n {
            for i2 in 0..n {
                for (i0, slot) in line.iter_mut().enumerate() {
                    *slot = data[(i0 * n + i1) * n + i2];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (i0, v) in line.iter().enumerate() {
                    data[(i0 * n + i1) * n + i2] = *v;
                }
            }
        }
    }

    /// Grid coordinates of point `index` in `[0, 2π)³`.
    pub fn point(&self, index: usize) -> [f64; 3] {
        let n = self.n;
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let i2 = index % n;
        let i1 = (index / n) % n;
        let i0 = index / (n * n);
        [i0 as f64 * h, i1 as f64 * h, i2 as f64 * h]
    }
}

impl std::fmt::Debug for PhysicalGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PhysicalGrid").field("n", &self.n).finish()
    }
}
