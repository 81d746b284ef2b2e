//! Every asymptotic cell against the float recurrence on the presets.

use latpath::asymptotics::{
    classify, excursion_asymptotic, final_altitude_asymptotic, meander_ratio_asymptotic, AsymptoticEstimate,
};
use latpath::enumerate::{final_altitude_expectation, meander_series};
use latpath::kernel::{structural_constants, u1_real, Criticality};
use latpath::lawcheck::{final_altitude_law, fit_sequence, returns_law, Law, Statistic};
use latpath::model::WalkModel;
use latpath::presets;

fn aperiodic() -> Vec<(&'static str, WalkModel)> {
    presets::named().into_iter().filter(|(_, m)| m.periodicity().is_aperiodic() && m.is_lukasiewicz()).collect()
}

/// Largest length at which masses of order `rho_dom^{-n}` stay well inside `f64`.
fn length_cap(m: &WalkModel) -> usize {
    let sc = structural_constants(m).unwrap();
    let dom = sc.rho1.unwrap_or(sc.rho).min(sc.rho);
    if dom <= 1.0 + 1e-12 {
        usize::MAX
    } else {
        (200.0 * 10f64.ln() / dom.ln()) as usize
    }
}

fn rel(est: &AsymptoticEstimate, exact: f64) -> f64 {
    (exact / est.value - 1.0).abs()
}

#[test]
fn excursion_cells_converge() {
    for (name, m) in aperiodic() {
        let cap = length_cap(&m).min(2000);
        let s = meander_series::<f64>(&m, cap).excursions;
        for (n, tol) in [(500, 0.05), (2000, 0.02)] {
            let n = n.min(cap);
            let est = excursion_asymptotic(&m, n).unwrap();
            assert!(rel(&est, s[n]) <= tol, "{name} {} n={n}: {} vs {}", est.formula_id, s[n], est.value);
        }
    }
}

#[test]
fn meander_cells_converge() {
    for (name, m) in aperiodic() {
        let cap = length_cap(&m).min(2000);
        let s = meander_series::<f64>(&m, cap).meanders;
        let mut errs = Vec::new();
        for n in [cap / 4, cap] {
            let est = meander_ratio_asymptotic(&m, n).unwrap();
            errs.push(rel(&est, s[n]));
        }
        // the subcritical negative-drift cell converges like 1/n
        assert!(errs[1] <= 0.05, "{name}: {errs:?}");
        assert!(errs[1] <= errs[0] || errs[1] < 1e-9, "{name}: {errs:?}");
    }
}

#[test]
fn final_altitude_cells_converge() {
    for (name, m) in aperiodic() {
        let cap = length_cap(&m).min(2000);
        let mut errs = Vec::new();
        for n in [cap / 4, cap] {
            let est = final_altitude_asymptotic(&m, n).unwrap();
            let exact: f64 = final_altitude_expectation(&m, n).unwrap();
            errs.push(rel(&est, exact));
        }
        assert!(errs[1] <= 0.05, "{name}: {errs:?}");
        assert!(errs[1] <= errs[0] || errs[1] < 1e-9, "{name}: {errs:?}");
    }
}

#[test]
fn critical_model_is_tangent() {
    let m = presets::critical_negative_drift();
    let sc = structural_constants(&m).unwrap();
    assert_eq!(sc.criticality, Criticality::Critical);
    assert!((sc.tau - 2.0).abs() < 1e-12);
    let p0 = m.p0_geq().to_float();
    // 1 - z P0>=(u1(z)) vanishes at rho and nowhere before
    let d = |z: f64| 1.0 - z * p0.eval(u1_real(&m, z).unwrap());
    assert!(d(sc.rho).abs() < 1e-10);
    assert!((1..100).all(|k| d(sc.rho * k as f64 / 100.0) > 0.0));
}

#[test]
fn reflection_with_positive_drift_grows_linearly() {
    let m = presets::positive_drift_reflection();
    let delta = structural_constants(&m).unwrap().delta;
    let x: f64 = final_altitude_expectation(&m, 2000).unwrap();
    assert!((x / (delta * 2000.0) - 1.0).abs() <= 0.02);
}

#[test]
fn every_preset_is_classified() {
    for (name, m) in aperiodic() {
        let class = classify(&m).unwrap();
        assert!(class.is_possible(), "{name}: {class:?}");
    }
}

#[test]
fn law_fits_improve_with_length() {
    for (name, m) in aperiodic() {
        let cap = length_cap(&m).min(2000);
        let ns = [cap / 8, cap / 4, cap / 2, cap];
        for (stat, spec) in [
            (Statistic::ReturnsToZero, returns_law(&m).unwrap()),
            (Statistic::FinalAltitude, final_altitude_law(&m).unwrap()),
        ] {
            if matches!(spec.law, Law::Discrete { pmf: None }) {
                continue;
            }
            let reports = fit_sequence(&m, stat, &ns, &spec).unwrap();
            let (first, last) = (&reports[0], &reports[3]);
            assert!(last.passed, "{name} {stat}: {:?}", last);
            assert!(last.sup_distance < first.sup_distance || last.sup_distance < 1e-3, "{name} {stat}: {reports:?}");
        }
    }
}
