use proptest::prelude::*;

use super::*;
use crate::enumerate::meander_series;
use crate::presets;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// `sum_{n <= N} x_n z^n` and a bound on the rest: `z^{N+1} / (1 - z)` when `z < 1` (all
/// `x_n <= 1`), otherwise a geometric tail from the last ratio, inflated tenfold.
fn series_at(coeffs: &[f64], z: f64) -> (f64, f64) {
    let sum = coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c);
    if z < 1.0 {
        return (sum, z.powi(coeffs.len() as i32) / (1.0 - z));
    }
    let n = coeffs.len() - 1;
    let q = z * coeffs[n] / coeffs[n - 1];
    assert!(q < 0.9, "series at z={z} does not converge fast enough");
    (sum, 10.0 * coeffs[n] * z.powi(n as i32) * q / (1.0 - q))
}

fn excursion_series(model: &WalkModel, n: usize) -> Vec<f64> {
    meander_series::<f64>(model, n).excursions
}

fn supercritical_example() -> WalkModel {
    presets::supercritical_negative_drift()
}

#[test]
fn dyck_branch_is_closed_form() {
    let set = small_branches(&presets::dyck_reflection(), 0.5).unwrap();
    assert_eq!(set.branches.len(), 1);
    assert!(close(set.branches[0].re, 2.0 - 3f64.sqrt(), 1e-14));
    assert!(set.branches[0].im.abs() < 1e-14);
}

#[test]
fn motzkin_branch_at_rho_is_tau() {
    let set = small_branches(&presets::motzkin_reflection(), 1.0).unwrap();
    assert_eq!(set.branches[0], Complex64::new(1.0, 0.0));
}

#[test]
fn branches_vanish_near_zero() {
    for m in presets::all() {
        let set = small_branches(&m, 1e-8).unwrap();
        assert!(set.branches.iter().all(|u| u.norm() < 1e-3), "{m:?}");
    }
}

#[test]
fn beyond_rho_is_degenerate() {
    let err = small_branches(&presets::motzkin_reflection(), 1.5).unwrap_err();
    assert!(matches!(err, Error::BranchDegenerate { .. }));
}

#[test]
fn principal_branch_matches_real_bisection() {
    for m in presets::all() {
        let sc = structural_constants(&m).unwrap();
        for k in 1..20 {
            let z = sc.rho * k as f64 / 20.0;
            let set = small_branches(&m, z).unwrap();
            let u = set.principal();
            assert!(u.im.abs() < 1e-12 && u.re > 0.0 && u.re < sc.tau);
            assert!(close(u.re, u1_real(&m, z).unwrap(), 1e-12 * sc.tau), "{m:?} z={z}");
        }
    }
}

#[test]
fn two_down_branches() {
    let m = presets::two_down_reflection();
    let set = small_branches(&m, 0.3).unwrap();
    assert_eq!(set.branches.len(), 2);
    assert!(set.residual(&m.p().to_float()) <= ROOT_TOLERANCE);
    let positive = set.branches.iter().filter(|u| u.re > 0.0 && u.im.abs() < 1e-12).count();
    assert_eq!(positive, 1);
}

#[test]
fn lukasiewicz_f0_is_eq5() {
    let m = presets::motzkin_reflection();
    let z = 0.2;
    let u = u1_real(&m, z).unwrap();
    let direct = 1.0 / (1.0 - z * m.p0_geq().to_float().eval(u));
    assert!(close(solve_boundary_gfs(&m, z).unwrap()[0], direct, 1e-14));
    let (series, tail) = series_at(&excursion_series(&m, 60), z);
    assert!(close(direct, series, 1e-12 + tail));
}

#[test]
fn two_down_f0_matches_recurrence() {
    let m = presets::two_down_reflection();
    let z = 0.3;
    let f = solve_boundary_gfs(&m, z).unwrap();
    let series = meander_series::<f64>(&m, 120);
    let (e, tail) = series_at(&series.excursions, z);
    assert!(close(f[0], e, 1e-10 + tail), "{} vs {e}", f[0]);
    assert!(close(excursion_gf_vandermonde(&m, z).unwrap(), f[0], 1e-9));
}

#[test]
fn boundary_gfs_match_altitude_series() {
    // F_1 for the c = 2 model, against the mass at altitude 1
    let m = presets::two_down_reflection();
    let z = 0.25;
    let mut ones = Vec::new();
    for n in 0..=80 {
        ones.push(crate::enumerate::meander_distribution::<f64>(&m, n).mass(1));
    }
    let (f1, tail) = series_at(&ones, z);
    assert!(close(solve_boundary_gfs(&m, z).unwrap()[1], f1, 1e-10 + tail));
}

#[test]
fn boundary_gfs_at_zero() {
    assert_eq!(solve_boundary_gfs(&presets::two_down_reflection(), 0.0).unwrap(), vec![1.0, 0.0]);
    assert_eq!(excursion_gf_vandermonde(&presets::two_down_reflection(), 0.0).unwrap(), 1.0);
    assert_eq!(excursion_gf_bf(&presets::motzkin_reflection(), 0.0).unwrap(), 1.0);
    assert!(solve_boundary_gfs(&presets::motzkin_absorption(), 1e-9).unwrap()[0] - 1.0 < 1e-8);
}

#[test]
fn boundary_free_excursions() {
    let e = excursion_gf_bf(&presets::dyck_reflection(), 0.5).unwrap();
    assert!(close(e, 4.0 * (2.0 - 3f64.sqrt()), 1e-13));
    // Catalan numbers: sum Cat_k (z/2)^{2k}
    let mut cat = 1.0f64;
    let mut sum = 0.0;
    for k in 0..200 {
        sum += cat * 0.25f64.powi(2 * k);
        cat *= 2.0 * (2.0 * k as f64 + 1.0) / (k as f64 + 2.0);
    }
    assert!(close(e, sum, 1e-12));
    for m in [presets::motzkin_reflection(), presets::two_down_reflection()] {
        let bf = m.with_boundary(m.p().clone());
        let z = 0.2;
        let (series, tail) = series_at(&excursion_series(&bf, 80), z);
        assert!(close(excursion_gf_bf(&m, z).unwrap(), series, 1e-12 + tail));
    }
}

#[test]
fn perturbation_identity() {
    for (m, z) in [(presets::motzkin_reflection(), 0.2), (presets::two_down_reflection(), 0.25)] {
        assert!(perturbation_identity_residual(&m, z).unwrap() <= 1e-9);
    }
    assert!(perturbation_identity_residual(&presets::motzkin_absorption(), 1e-7).unwrap() < 1e-12);
    // with r_0 = P - P0>= in the correction term the identity is off even for c = 1
    assert!(perturbation_residual_with_r0(&presets::motzkin_reflection(), 0.2).unwrap() > 1e-3);
}

#[test]
fn perturbation_vanishes_without_boundary() {
    let m = presets::motzkin_absorption();
    for z in [0.1, 0.4, 0.8] {
        let e = solve_boundary_gfs(&m, z).unwrap()[0];
        assert!(close(e, excursion_gf_bf(&m, z).unwrap(), 1e-12));
    }
}

#[test]
fn dyck_constants() {
    let sc = structural_constants(&presets::dyck_reflection()).unwrap();
    assert_eq!((sc.tau, sc.rho, sc.delta), (1.0, 1.0, 0.0));
    assert!(close(sc.c, 2f64.sqrt(), 1e-14));
}

#[test]
fn motzkin_constants() {
    let sc = structural_constants(&presets::motzkin_reflection()).unwrap();
    assert_eq!((sc.tau, sc.rho, sc.lambda), (1.0, 1.0, 1.0));
    assert!(close(sc.c, 3f64.sqrt(), 1e-14));
    assert!(close(sc.kappa, 3f64.sqrt() / 2.0, 1e-14));
    assert_eq!(sc.criticality, Criticality::Critical);
    assert_eq!(sc.rho1, Some(1.0));

    let sc = structural_constants(&presets::motzkin_absorption()).unwrap();
    assert_eq!(sc.criticality, Criticality::Subcritical);
    assert!(close(sc.lambda, 2.0 / 3.0, 1e-15));
    assert!(close(sc.kappa, 1.0 / 3f64.sqrt(), 1e-14));
    assert!(close(sc.e_at_rho.unwrap(), 3.0, 1e-13));
    assert!(close(sc.e_at_1.unwrap(), 3.0, 1e-13));
}

#[test]
fn tau_by_bisection_oracle() {
    let p = LaurentPolynomial::from_ratios(&[(-1, 3, 10), (0, 3, 10), (1, 2, 5)]);
    let m = WalkModel::new(p, LaurentPolynomial::from_ratios(&[(0, 1, 2), (1, 1, 2)]));
    let sc = structural_constants(&m).unwrap();
    assert!(close(sc.tau, 3f64.sqrt() / 2.0, 1e-14));
    assert!(close(sc.delta, 0.1, 1e-15));
    let p_tau = 0.3 / sc.tau + 0.3 + 0.4 * sc.tau;
    assert!(close(sc.rho, 1.0 / p_tau, 1e-14));
}

#[test]
fn supercritical_constants_closed_form() {
    // u1 solves 0.3 z u^2 + (0.2 z - 1) u + 0.5 z = 0; rho1 solves 0.45 z^2 + 0.2 z - 2/3 = 0
    let m = supercritical_example();
    let sc = structural_constants(&m).unwrap();
    assert_eq!(sc.criticality, Criticality::Supercritical);
    let rho1 = (-0.2 + 1.24f64.sqrt()) / 0.9;
    assert!(close(sc.rho1.unwrap(), rho1, 1e-13));
    let u1 = |z: f64| (1.0 - 0.2 * z - ((1.0 - 0.2 * z).powi(2) - 0.6 * z * z).sqrt()) / (0.6 * z);
    let a = |z: f64| 0.9 * u1(z);
    // five-point stencils
    let h = 1e-4;
    let alpha = (a(rho1 - 2.0 * h) - 8.0 * a(rho1 - h) + 8.0 * a(rho1 + h) - a(rho1 + 2.0 * h)) / (12.0 * h);
    let alpha2 = (-a(rho1 - 2.0 * h) + 16.0 * a(rho1 - h) - 30.0 * a(rho1) + 16.0 * a(rho1 + h) - a(rho1 + 2.0 * h))
        / (12.0 * h * h);
    assert!(close(sc.alpha.unwrap(), alpha, 1e-8 * alpha));
    assert!(close(sc.alpha2.unwrap(), alpha2, 1e-5 * alpha2));
    assert!(close(sc.gamma.unwrap(), 1.0 / (alpha * rho1 * rho1 + 1.0), 1e-9));
    assert!(close(sc.e_at_1.unwrap(), 10.0, 1e-12));
}

#[test]
fn critical_negative_drift_is_tangent() {
    let sc = structural_constants(&presets::critical_negative_drift()).unwrap();
    assert_eq!(sc.criticality, Criticality::Critical);
    assert!(close(sc.tau, 2.0, 1e-14));
    assert!(close(sc.rho1.unwrap(), sc.rho, 1e-10));
}

#[test]
fn criticality_trichotomy() {
    for m in presets::all().into_iter().filter(|m| m.is_lukasiewicz()) {
        let sc = structural_constants(&m).unwrap();
        let b = Branch::new(&m).unwrap();
        let at_rho = b.denominator(sc.rho).unwrap();
        match sc.criticality {
            Criticality::Supercritical => {
                assert!(sc.rho1.unwrap() < sc.rho && at_rho < 0.0)
            }
            Criticality::Critical => {
                assert!(close(sc.rho1.unwrap(), sc.rho, 1e-10) && at_rho.abs() < 1e-9)
            }
            Criticality::Subcritical => assert!(sc.rho1.is_none() && at_rho > 0.0),
        }
    }
    assert_eq!(rho1(&presets::motzkin_absorption()), Err(Error::NoRho1));
}

#[test]
fn expansion_of_u1() {
    for m in [presets::motzkin_reflection(), presets::supercritical_negative_drift()] {
        let check = u1_expansion_check(&m).unwrap();
        assert!(check.max_scaled < 10.0);
        assert!(check.residuals[2] < check.residuals[1] && check.residuals[1] < check.residuals[0]);
    }
    // Dyck: u1(z) = (1 - sqrt(1 - z^2)) / z in closed form
    let check = u1_expansion_check(&presets::dyck_reflection()).unwrap();
    for (e, r) in check.eps.iter().zip(&check.residuals) {
        let z = 1.0 - e;
        let exact = (1.0 - (1.0 - z * z).sqrt()) / z;
        assert!(close((exact - (1.0 - 2f64.sqrt() * e.sqrt())).abs(), *r, 1e-12));
        assert!(r / e < 2.0);
    }
}

#[test]
fn coefficients_reconstruct_boundary_series() {
    for m in presets::all() {
        let sc = structural_constants(&m).unwrap();
        let e = excursion_series(&m, 80);
        for k in 1..=20 {
            let z = 0.5 * sc.rho * k as f64 / 21.0;
            let (series, tail) = series_at(&e, z);
            let f0 = solve_boundary_gfs(&m, z).unwrap()[0];
            assert!(close(f0, series, 1e-9 + tail), "{m:?} z={z}: {f0} vs {series}");
        }
    }
}

proptest! {
    #[test]
    fn branches_solve_the_kernel(idx in 0usize..12, frac in 0.01f64..0.99) {
        let m = presets::all()[idx].clone();
        let rho = structural_constants(&m).unwrap().rho;
        let set = small_branches(&m, frac * rho).unwrap();
        prop_assert!(set.residual(&m.p().to_float()) <= ROOT_TOLERANCE);
        prop_assert_eq!(set.branches.len(), m.c() as usize);
    }

    #[test]
    fn u1_is_increasing(idx in 0usize..12, a in 0.01f64..0.98, gap in 0.001f64..0.01) {
        let m = presets::all()[idx].clone();
        let rho = structural_constants(&m).unwrap().rho;
        prop_assert!(u1_real(&m, a * rho).unwrap() < u1_real(&m, (a + gap) * rho).unwrap());
    }

    #[test]
    fn perturbation_identity_holds(idx in 0usize..12, frac in 0.01f64..0.9) {
        let m = presets::all()[idx].clone();
        let sc = structural_constants(&m).unwrap();
        let limit = sc.rho1.map_or(sc.rho, |r1| r1.min(sc.rho));
        prop_assert!(perturbation_identity_residual(&m, frac * limit).unwrap() <= 1e-9);
    }
}
