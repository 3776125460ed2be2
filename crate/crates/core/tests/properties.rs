//! Structural invariants of fields and operators over random inputs.

use std::sync::Arc;

use ns_galerkin::io::{read_field_csv, write_field_csv};
use ns_galerkin::operators::{apply_a, bilinear_b, bilinear_b_physical, trilinear_b};
use ns_galerkin::{ModeSet, PhysicalGrid, SpectralField};
use proptest::prelude::*;

fn modes(k: usize) -> Arc<ModeSet> {
    ModeSet::new(k).unwrap()
}

fn field() -> impl Strategy<Value = SpectralField> {
    (1usize..=3, any::<u64>(), 0.0f64..3.0, 0.1f64..5.0)
        .prop_map(|(k, seed, decay, scale)| SpectralField::random(&modes(k), seed, decay).scaled(scale))
}

fn pair(k: usize) -> impl Strategy<Value = (SpectralField, SpectralField)> {
    (any::<u64>(), any::<u64>(), 0.0f64..3.0).prop_map(move |(a, b, decay)| {
        let m = modes(k);
        (SpectralField::random(&m, a, decay), SpectralField::random(&m, b, decay))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn parseval(y in field()) {
        let grid = y.mode_set().quadrature_grid();
        let values = y.to_grid(grid);
        let mean_sq = values.iter().flat_map(|c| c.iter()).map(|v| v * v).sum::<f64>() / grid.len() as f64;
        prop_assert!((mean_sq - y.norm_h_sqr()).abs() <= 1e-10 * (1.0 + y.norm_h_sqr()));
    }

    #[test]
    fn poincare_chain(y in field()) {
        let slack = 1e-12 * (1.0 + y.norm_da());
        prop_assert!(y.norm_h() <= y.norm_v() + slack);
        prop_assert!(y.norm_v() <= y.norm_da() + slack);
        prop_assert!(y.norm_v_sqr() <= y.norm_h() * y.norm_da() + slack);
    }

    #[test]
    fn random_fields_satisfy_invariants(y in field()) {
        prop_assert!(y.check_invariants().is_ok());
        let again = SpectralField::leray_project(y.mode_set(), y.coeffs()).unwrap();
        prop_assert!(again.max_abs_diff(&y) <= 1e-14 * (1.0 + y.norm_h()));
    }

    #[test]
    fn stokes_operator_is_symmetric((u, v) in pair(2)) {
        let lhs = apply_a(&u).inner(&v);
        let rhs = u.inner(&apply_a(&v));
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        prop_assert!((lhs - u.inner_v(&v)).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn trilinear_skew_symmetry((u, v) in pair(2), w_seed in any::<u64>()) {
        let w = SpectralField::random(u.mode_set(), w_seed, 1.0);
        let scale = u.norm_v() * v.norm_v() * w.norm_v();
        let vvv = trilinear_b(&u, &v, &v).unwrap();
        prop_assert!(vvv.abs() <= 1e-10 * u.norm_v() * v.norm_v_sqr());
        let uvw = trilinear_b(&u, &v, &w).unwrap();
        let uwv = trilinear_b(&u, &w, &v).unwrap();
        prop_assert!((uvw + uwv).abs() <= 1e-10 * scale);
    }

    #[test]
    fn bilinear_matches_trilinear((u, v) in pair(2), w_seed in any::<u64>()) {
        let w = SpectralField::random(u.mode_set(), w_seed, 1.0);
        let via_b = bilinear_b(&u, &v).unwrap().inner(&w);
        let direct = trilinear_b(&u, &v, &w).unwrap();
        prop_assert!((via_b - direct).abs() <= 1e-10 * (1.0 + u.norm_v() * v.norm_v() * w.norm_v()));
    }

    #[test]
    fn bilinear_output_invariants((u, v) in pair(2)) {
        let b = bilinear_b(&u, &v).unwrap();
        prop_assert!(b.check_invariants().is_ok());
        // Energy neutrality: ⟨B(u, v), v⟩ = 0.
        prop_assert!(b.inner(&v).abs() <= 1e-10 * u.norm_v() * v.norm_v_sqr());
    }

    #[test]
    fn direct_and_dealiased_advection_agree((u, v) in pair(2)) {
        let grid = PhysicalGrid::new(3 * 2 + 1);
        let direct = bilinear_b(&u, &v).unwrap();
        let physical = bilinear_b_physical(&u, &v, &grid).unwrap();
        prop_assert!(direct.max_abs_diff(&physical) <= 1e-10 * (1.0 + u.norm_v() * v.norm_v()));
    }

    #[test]
    fn field_csv_round_trip(y in field()) {
        let mut buf = Vec::new();
        write_field_csv(&y, &mut buf).unwrap();
        let back = read_field_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(&back, &y);
        let mut again = Vec::new();
        write_field_csv(&back, &mut again).unwrap();
        prop_assert_eq!(buf, again);
    }

    #[test]
    fn l4_quadrature_is_exact(y in field()) {
        let fine = PhysicalGrid::new(8 * y.mode_set().cutoff() + 1);
        let a = y.norm_l4();
        let b = y.norm_l4_on(&fine).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
    }
}
