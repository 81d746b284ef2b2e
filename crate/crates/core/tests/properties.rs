mod common;

use common::{arb_lukasiewicz, arb_model};
use latpath::asymptotics::{classify, excursion_asymptotic, final_altitude_asymptotic, meander_ratio_asymptotic};
use latpath::enumerate::{
    arch_masses, brute_force, meander_distribution, meander_series, returns_to_zero_distribution,
};
use latpath::kernel::{small_branches, solve_boundary_gfs, structural_constants, u1_real, Criticality};
use latpath::model::{format_model, parse_model, ModelKind};
use latpath::Error;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn model_files_round_trip(m in arb_model(2, 3)) {
        prop_assert_eq!(parse_model(&format_model(&m)).unwrap(), m);
    }

    #[test]
    fn boundary_mass_decides_the_kind(m in arb_model(1, 3)) {
        let mass = m.p0_geq().at_one();
        prop_assert!(mass <= BigRational::one());
        prop_assert_eq!(mass == BigRational::one(), m.kind() == ModelKind::Reflection);
    }

    #[test]
    fn period_divides_support_differences(m in arb_model(2, 4)) {
        let g = m.periodicity().period as i32;
        let support = m.p().support();
        for a in &support {
            for b in &support {
                prop_assert_eq!((a - b) % g, 0);
            }
        }
    }

    #[test]
    fn brute_force_matches_the_recurrence(m in arb_model(2, 2), n in 0usize..7) {
        let bf = brute_force(&m, n).unwrap();
        let series = meander_series::<BigRational>(&m, n);
        let dist = meander_distribution::<BigRational>(&m, n);
        prop_assert_eq!(bf.meanders.masses(), dist.masses());
        prop_assert_eq!(&bf.excursion_mass, &series.excursions[n]);
        prop_assert_eq!(&bf.altitude_sum, &series.altitude_sums[n]);
        prop_assert_eq!(&bf.arch_mass, &arch_masses::<BigRational>(&m, n)[n]);
        if let Ok(d) = returns_to_zero_distribution::<BigRational>(&m, n) {
            prop_assert_eq!(d.total(), BigRational::one());
        }
    }

    #[test]
    fn float_tracks_exact(m in arb_model(2, 3)) {
        let n = 120;
        let exact = meander_series::<BigRational>(&m, n);
        let float = meander_series::<f64>(&m, n);
        for k in [1, 10, 60, n] {
            let e = exact.meanders[k].to_f64().unwrap();
            prop_assert!((float.meanders[k] - e).abs() <= 1e-12 * e.abs().max(1e-300), "{} vs {}", float.meanders[k], e);
        }
    }

    #[test]
    fn excursions_are_sequences_of_arches(m in arb_lukasiewicz()) {
        let n = 40;
        let e = meander_series::<BigRational>(&m, n).excursions;
        let a = arch_masses::<BigRational>(&m, n);
        // E = 1 + A E
        for k in 1..=n {
            let conv = (1..=k).fold(BigRational::zero(), |acc, j| acc + &a[j] * &e[k - j]);
            prop_assert_eq!(&conv, &e[k]);
        }
    }

    #[test]
    fn boundary_series_match_the_kernel(m in arb_model(2, 2), k in 1usize..20) {
        let sc = structural_constants(&m).unwrap();
        let z = 0.5 * sc.rho * k as f64 / 21.0;
        prop_assume!(z < 1.0);
        let series = meander_series::<f64>(&m, 80).excursions;
        let sum = series.iter().rev().fold(0.0, |acc, c| acc * z + c);
        let tail = z.powi(81) / (1.0 - z);
        let f0 = solve_boundary_gfs(&m, z).unwrap()[0];
        prop_assert!((f0 - sum).abs() <= 1e-9 + tail, "{} vs {}", f0, sum);
    }

    #[test]
    fn branch_residuals(m in arb_model(2, 3), frac in 0.01f64..0.99) {
        let rho = structural_constants(&m).unwrap().rho;
        let set = small_branches(&m, frac * rho).unwrap();
        prop_assert_eq!(set.branches.len(), m.c() as usize);
        prop_assert!(set.residual(&m.p().to_float()) <= 1e-12);
    }

    #[test]
    fn u1_increases(m in arb_lukasiewicz()) {
        let rho = structural_constants(&m).unwrap().rho;
        let grid: Vec<f64> = (1..50).map(|k| u1_real(&m, rho * k as f64 / 50.0).unwrap()).collect();
        prop_assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn criticality_trichotomy(m in arb_lukasiewicz()) {
        let sc = structural_constants(&m).unwrap();
        let p0 = m.p0_geq().to_float();
        let d = |z: f64| 1.0 - z * p0.eval(u1_real(&m, z).unwrap());
        match sc.criticality {
            Criticality::Supercritical => {
                let rho1 = sc.rho1.unwrap();
                prop_assert!(rho1 < sc.rho);
                prop_assert!(d(rho1).abs() < 1e-10);
            }
            Criticality::Critical => prop_assert!(d(sc.rho).abs() < 1e-10),
            Criticality::Subcritical => {
                prop_assert!(sc.rho1.is_none());
                prop_assert!((1..=40).all(|k| d(sc.rho * k as f64 / 40.0) > 0.0));
            }
        }
    }

    /// Every aperiodic Łukasiewicz model lands in a cell that exists.
    #[test]
    fn cell_selection_is_total(m in arb_lukasiewicz()) {
        prop_assume!(m.periodicity().is_aperiodic());
        let class = classify(&m).unwrap();
        prop_assert!(class.is_possible());
        for r in [excursion_asymptotic(&m, 100), meander_ratio_asymptotic(&m, 100), final_altitude_asymptotic(&m, 100)] {
            prop_assert!(!matches!(r, Err(Error::InconsistentCase(_))), "{:?} {:?}", class, r);
        }
    }
}
