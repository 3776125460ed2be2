//! Stokes operator, advection operator `B(u, v)` and trilinear form
//! `b(u, v, w) = ∫ Σ u_i ∂_i v_j w_j dx` on the truncated torus.
//!
//! `B` is the mode-set truncation of the exact convolution of `(u·∇)v`
//! followed by Leray projection, i.e. the Galerkin projection onto the
//! span of the retained Stokes eigenfunctions. It is computed by a direct
//! sum over interacting triads; [`bilinear_b_physical`] evaluates the same
//! quantity through a dealiased physical grid and is kept as an oracle.

mod constants;

pub use constants::{estimate_constants, sample_seed, young_c2, ConstantEstimate};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::field::{conj3, project_mode};
use crate::spectral::{CVec3, PhysicalGrid, SpectralField};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Stokes operator: `(Ay)_k = |k|² ŷ_k`.
pub fn apply_a(field: &SpectralField) -> SpectralField {
    let ms = field.mode_set().clone();
    field.map_real(|i| ms.k2(i))
}

/// `B(u, v) = P_K[(u·∇)v]` by direct triad summation.
pub fn bilinear_b(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    u.require_same_modes(v)?;
    let ms = u.mode_set();
    let triads = ms.triads();
    let (uc, vc) = (u.coeffs(), v.coeffs());
    let mut out = vec![[ZERO; 3]; ms.len()];
    for (slot, p) in ms.positive_half().enumerate() {
        let mut acc = [ZERO; 3];
        for &(k, q) in &triads.pairs[triads.offsets[slot]..triads.offsets[slot + 1]] {
            let a = &uc[k as usize];
            let qv = ms.wavevector(q as usize);
            let s = a[0] * qv[0] + a[1] * qv[1] + a[2] * qv[2];
            let b = &vc[q as usize];
            acc[0] += s * b[0];
            acc[1] += s * b[1];
            acc[2] += s * b[2];
        }
        // ∂_j e^{iq·x} = i q_j e^{iq·x}
        let acc = [mul_i(acc[0]), mul_i(acc[1]), mul_i(acc[2])];
        let projected = project_mode(ms.wavevector(p), ms.k2(p), &acc);
        out[ms.negation(p)] = conj3(&projected);
        out[p] = projected;
    }
    Ok(SpectralField::from_raw(ms.clone(), out))
}

fn mul_i(z: Complex64) -> Complex64 {
    Complex64::new(-z.im, z.re)
}

/// `B(u, v)` evaluated through the physical grid: pointwise `(u·∇)v`,
/// forward transform, restriction to the mode set, Leray projection.
///
/// Exact (alias-free on the retained modes) when the grid has at least
/// `3K + 1` points per axis.
pub fn bilinear_b_physical(u: &SpectralField, v: &SpectralField, grid: &PhysicalGrid) -> Result<SpectralField> {
    u.require_same_modes(v)?;
    let ms = u.mode_set();
    require_grid(grid, 3 * ms.cutoff() + 1)?;
    let uu = u.to_grid(grid);
    let grad = v.gradient_to_grid(grid);
    let mut raw: Vec<CVec3> = vec![[ZERO; 3]; ms.len()];
    for (j, _) in uu.iter().enumerate() {
        let values: Vec<f64> = (0..grid.len()).map(|p| (0..3).map(|i| uu[i][p] * grad[i][j][p]).sum()).collect();
        let spectrum = grid.analyze(&values);
        for (m, slot) in raw.iter_mut().enumerate() {
            slot[j] = grid.coefficient(&spectrum, ms.mode(m));
        }
    }
    // Roundoff can leave the grid transform a few ulps off exact conjugate
    // symmetry; rebuild the negative half from the positive one.
    for p in ms.positive_half() {
        raw[ms.negation(p)] = conj3(&raw[p]);
    }
    SpectralField::leray_project(ms, &raw)
}

/// `b(u, v, w)` by exact grid quadrature (untruncated product).
pub fn trilinear_b(u: &SpectralField, v: &SpectralField, w: &SpectralField) -> Result<f64> {
    trilinear_b_on(u, v, w, u.mode_set().quadrature_grid())
}

pub fn trilinear_b_on(u: &SpectralField, v: &SpectralField, w: &SpectralField, grid: &PhysicalGrid) -> Result<f64> {
    u.require_same_modes(v)?;
    u.require_same_modes(w)?;
    require_grid(grid, 3 * u.mode_set().cutoff() + 1)?;
    if u.is_zero() || v.is_zero() || w.is_zero() {
        return Ok(0.0);
    }
    let uu = u.to_grid(grid);
    let ww = w.to_grid(grid);
    let grad = v.gradient_to_grid(grid);
    let mut sum = 0.0;
    for p in 0..grid.len() {
        for i in 0..3 {
            let ui = uu[i][p];
            for j in 0..3 {
                sum += ui * grad[i][j][p] * ww[j][p];
            }
        }
    }
    Ok(sum / grid.len() as f64)
}

fn require_grid(grid: &PhysicalGrid, needed: usize) -> Result<()> {
    if grid.n() < needed {
        Err(Error::Config(format!("quadrature grid needs at least {needed} points per axis, got {}", grid.n())))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::spectral::ModeSet;

    #[test]
    fn a_has_unit_eigenvalue_on_first_shell() {
        let ms = ModeSet::new(2).unwrap();
        let y = presets::cosine_x1_e3(&ms, 1.0);
        assert_eq!(apply_a(&y), y);
    }

    #[test]
    fn a_scales_122_mode_by_nine() {
        let ms = ModeSet::new(2).unwrap();
        let a = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.5), Complex64::new(-1.0, -0.5)];
        let y = SpectralField::from_modes(&ms, &[([1, 2, 2], a)]).unwrap();
        let ay = apply_a(&y);
        let got = ay.coeff([1, 2, 2]).unwrap();
        for c in 0..3 {
            assert!((got[c] - a[c] * 9.0).norm() < 1e-15);
        }
    }

    #[test]
    fn a_norm_identities() {
        let ms = ModeSet::new(3).unwrap();
        for seed in 0..10 {
            let u = SpectralField::random(&ms, seed, 1.0);
            let au = apply_a(&u);
            assert!((au.norm_h() - u.norm_da()).abs() <= 1e-12 * u.norm_da());
            assert!((au.inner(&u) - u.norm_v_sqr()).abs() <= 1e-12 * u.norm_v_sqr());
        }
    }

    #[test]
    fn b_vanishes_on_zero_input() {
        let ms = ModeSet::new(2).unwrap();
        let u = SpectralField::random(&ms, 1, 1.0);
        let z = SpectralField::zeros(&ms);
        assert!(bilinear_b(&u, &z).unwrap().is_zero());
        assert!(bilinear_b(&z, &u).unwrap().is_zero());
    }

    #[test]
    fn b_of_shear_mode_with_itself_is_zero() {
        let ms = ModeSet::new(2).unwrap();
        let y = presets::cosine_x1_e3(&ms, 1.0);
        assert!(bilinear_b(&y, &y).unwrap().norm_h() < 1e-15);
    }

    #[test]
    fn b_of_taylor_green_is_a_gradient() {
        let ms = ModeSet::new(2).unwrap();
        let y = presets::taylor_green(&ms, 1.0);
        assert!(bilinear_b(&y, &y).unwrap().norm_h() < 1e-15);
    }

    #[test]
    fn mismatched_mode_sets_rejected() {
        let u = SpectralField::random(&ModeSet::new(2).unwrap(), 1, 1.0);
        let v = SpectralField::random(&ModeSet::new(3).unwrap(), 1, 1.0);
        assert!(matches!(bilinear_b(&u, &v), Err(Error::Usage(_))));
        assert!(matches!(trilinear_b(&u, &u, &v), Err(Error::Usage(_))));
    }

    #[test]
    fn b_output_is_divergence_free_and_real() {
        let ms = ModeSet::new(2).unwrap();
        let u = SpectralField::random(&ms, 4, 1.0);
        let v = SpectralField::random(&ms, 5, 1.0);
        bilinear_b(&u, &v).unwrap().check_invariants().unwrap();
    }

    #[test]
    fn b_is_bilinear() {
        let ms = ModeSet::new(2).unwrap();
        let u1 = SpectralField::random(&ms, 1, 1.0);
        let u2 = SpectralField::random(&ms, 2, 1.0);
        let v = SpectralField::random(&ms, 3, 1.0);
        let lhs = bilinear_b(&u1.axpy(2.5, &u2), &v).unwrap();
        let rhs = bilinear_b(&u1, &v).unwrap().axpy(2.5, &bilinear_b(&u2, &v).unwrap());
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn physical_oracle_rejects_coarse_grid() {
        let ms = ModeSet::new(2).unwrap();
        let u = SpectralField::random(&ms, 1, 1.0);
        assert!(bilinear_b_physical(&u, &u, &PhysicalGrid::new(6)).is_err());
    }

    #[test]
    fn trilinear_single_triad_matches_brute_force_quadrature() {
        // u on k1 = (1,0,0), v on k2 = (0,1,0), w on k3 = (-1,-1,0): k1 + k2 + k3 = 0.
        let ms = ModeSet::new(1).unwrap();
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let u = SpectralField::from_modes(&ms, &[([1, 0, 0], [c(0.0, 0.0), c(0.7, 0.2), c(0.3, -0.4)])]).unwrap();
        let v = SpectralField::from_modes(&ms, &[([0, 1, 0], [c(0.5, 0.1), c(0.0, 0.0), c(-0.2, 0.6)])]).unwrap();
        let w = SpectralField::from_modes(&ms, &[([-1, -1, 0], [c(0.4, 0.3), c(-0.4, -0.3), c(0.9, 0.0)])]).unwrap();
        let b = trilinear_b(&u, &v, &w).unwrap();
        // Brute-force midpoint quadrature on a fine grid with pointwise
        // evaluation of the closed-form fields.
        let n = 24;
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let field = |f: &SpectralField, x: [f64; 3], deriv: Option<usize>| -> [f64; 3] {
            let ms = f.mode_set();
            let mut out = [0.0; 3];
            for (m, a) in f.coeffs().iter().enumerate() {
                let k = ms.wavevector(m);
                let phase = Complex64::new(0.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]).exp();
                let factor = match deriv {
                    Some(i) => Complex64::new(0.0, k[i]),
                    None => Complex64::new(1.0, 0.0),
                };
                for j in 0..3 {
                    out[j] += (a[j] * phase * factor).re;
                }
            }
            out
        };
        let mut sum = 0.0;
        for i0 in 0..n {
            for i1 in 0..n {
                for i2 in 0..n {
                    let x = [i0 as f64 * h, i1 as f64 * h, i2 as f64 * h];
                    let uu = field(&u, x, None);
                    let ww = field(&w, x, None);
                    for (i, ui) in uu.iter().enumerate() {
                        let dv = field(&v, x, Some(i));
                        sum += ui * (0..3).map(|j| dv[j] * ww[j]).sum::<f64>();
                    }
                }
            }
        }
        let expected = sum / (n * n * n) as f64;
        assert!(expected.abs() > 1e-3);
        assert!((b - expected).abs() < 1e-10, "{b} vs {expected}");
    }

    #[test]
    fn trilinear_zero_first_slot() {
        let ms = ModeSet::new(2).unwrap();
        let v = SpectralField::random(&ms, 1, 1.0);
        let w = SpectralField::random(&ms, 2, 1.0);
        assert_eq!(trilinear_b(&SpectralField::zeros(&ms), &v, &w).unwrap(), 0.0);
    }
}
