//! Named initial data used by tests and the experiment runner.

use std::sync::Arc;

use num_complex::Complex64;

use crate::spectral::{ModeSet, SpectralField};

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `amplitude · (sin x₁ cos x₂, −cos x₁ sin x₂, 0)`.
pub fn taylor_green(modes: &Arc<ModeSet>, amplitude: f64) -> SpectralField {
    let q = 0.25 * amplitude;
    SpectralField::from_modes(
        modes,
        &[([1, 1, 0], [c(0.0, -q), c(0.0, q), c(0.0, 0.0)]), ([1, -1, 0], [c(0.0, -q), c(0.0, -q), c(0.0, 0.0)])],
    )
    .expect("Taylor-Green modes are tangent and lie in every mode set")
}

/// `amplitude · 2 cos(x₁) e₃`, an eigenfunction of A with eigenvalue 1
/// satisfying `B(y, y) = 0`.
pub fn cosine_x1_e3(modes: &Arc<ModeSet>, amplitude: f64) -> SpectralField {
    SpectralField::from_modes(modes, &[([1, 0, 0], [c(0.0, 0.0), c(0.0, 0.0), c(amplitude, 0.0)])])
        .expect("(1,0,0) lies in every mode set")
}

/// Random field rescaled to the requested V-norm (zero stays zero).
pub fn random_with_norm_v(modes: &Arc<ModeSet>, seed: u64, decay: f64, norm_v: f64) -> SpectralField {
    let y = SpectralField::random(modes, seed, decay);
    let n = y.norm_v();
    if n == 0.0 {
        y
    } else {
        y.scaled(norm_v / n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_green_matches_physical_definition() {
        let ms = ModeSet::new(2).unwrap();
        let y = taylor_green(&ms, 1.0);
        let grid = ms.quadrature_grid();
        let [u, v, w] = y.to_grid(grid);
        for p in 0..grid.len() {
            let x = grid.point(p);
            assert!((u[p] - x[0].sin() * x[1].cos()).abs() < 1e-14);
            assert!((v[p] + x[0].cos() * x[1].sin()).abs() < 1e-14);
            assert!(w[p].abs() < 1e-14);
        }
        assert!((y.norm_h_sqr() - 0.5).abs() < 1e-15);
    }
}
