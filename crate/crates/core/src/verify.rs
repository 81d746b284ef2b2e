//! The invariant suite behind `latpath verify`: every identity the library relies on,
//! checked against independent computations for one model.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::asymptotics::{
    arch_asymptotic, excursion_asymptotic, final_altitude_asymptotic, meander_ratio_asymptotic, AsymptoticEstimate,
};
use crate::enumerate::{
    arch_masses, brute_force, meander_series, returns_to_zero_distribution, walk_series, BRUTE_FORCE_LIMIT,
};
use crate::error::{Error, Result};
use crate::kernel::{
    excursion_gf_vandermonde, perturbation_identity_residual, solve_boundary_gfs, structural_constants, Criticality,
};
use crate::lawcheck::{final_altitude_law, fit, returns_law, Law, LimitLawSpec, Statistic};
use crate::model::WalkModel;

/// Largest length compared against brute force.
pub const BRUTE_FORCE_LENGTH: usize = 10;
/// Lengths for the exact `m_{n+1} = 1 - (1 - P0>=(1)) sum_{k <= n} e_k` identity.
pub const REMARK_LENGTH: usize = 200;
/// Number of series terms compared with the kernel solution.
pub const SERIES_TERMS: usize = 80;
pub const SAMPLE_POINTS: usize = 20;
pub const KERNEL_TOLERANCE: f64 = 1e-9;
/// Accepted `|exact / estimate - 1|` at the longest length.
pub const ASYMPTOTIC_TOLERANCE: f64 = 0.1;
/// Longest length used for asymptotic and law checks.
pub const MAX_LENGTH: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
    /// The check could not be evaluated because of a numerical failure.
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
            Status::Error => "ERROR",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, detail: detail.into() }
    }

    fn skip(name: impl Into<String>, why: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Skip, detail: why.into() }
    }

    fn from_result(name: &str, r: Result<Check>) -> Check {
        r.unwrap_or_else(|e| Check {
            name: name.into(),
            status: if e.is_numerical() { Status::Error } else { Status::Fail },
            detail: e.to_string(),
        })
    }
}

/// Runs every applicable check. The model must be valid.
pub fn verify_model(model: &WalkModel) -> Result<Vec<Check>> {
    model.require_valid()?;
    let mut out = vec![Check::from_result("brute-force", brute_force_check(model)), remark_check(model)];
    out.extend(kernel_checks(model));
    if !model.periodicity().is_aperiodic() {
        out.push(periodicity_guard(model));
        return Ok(out);
    }
    if !model.is_lukasiewicz() {
        out.push(Check::skip("asymptotics", "more than one negative jump"));
        return Ok(out);
    }
    let (n_lo, n_hi) = match lengths(model) {
        Ok(l) => l,
        Err(e) => {
            out.push(Check::from_result("asymptotics", Err(e)));
            return Ok(out);
        }
    };
    out.extend(asymptotic_checks(model, n_lo, n_hi));
    out.extend(law_checks(model, n_lo, n_hi));
    Ok(out)
}

/// Brute force against the recurrences, exactly, for every `n <= 10`.
fn brute_force_check(model: &WalkModel) -> Result<Check> {
    let n_max = BRUTE_FORCE_LENGTH.min(BRUTE_FORCE_LIMIT);
    let series = meander_series::<BigRational>(model, n_max);
    let arches = arch_masses::<BigRational>(model, n_max);
    let (walks, bridges) = walk_series::<BigRational>(model, n_max);
    for n in 0..=n_max {
        let bf = brute_force(model, n)?;
        let dist = crate::enumerate::meander_distribution::<BigRational>(model, n);
        let mut mismatches = Vec::new();
        if bf.meanders.masses() != dist.masses() {
            mismatches.push("altitude distribution");
        }
        if bf.excursion_mass != series.excursions[n] || bf.meander_mass != series.meanders[n] {
            mismatches.push("excursion/meander mass");
        }
        if bf.altitude_sum != series.altitude_sums[n] {
            mismatches.push("altitude sum");
        }
        if bf.arch_mass != arches[n] {
            mismatches.push("arch mass");
        }
        if bf.walk_total != walks[n] || bf.bridge_mass != bridges[n] {
            mismatches.push("walks/bridges");
        }
        match returns_to_zero_distribution::<BigRational>(model, n) {
            Ok(d) => {
                let scaled: Vec<BigRational> = d.prob.iter().map(|p| p * &bf.excursion_mass).collect();
                let mut bf_returns = bf.returns_mass.clone();
                bf_returns.resize(scaled.len().max(bf_returns.len()), BigRational::zero());
                let mut scaled = scaled;
                scaled.resize(bf_returns.len(), BigRational::zero());
                if scaled != bf_returns {
                    mismatches.push("returns distribution");
                }
            }
            Err(Error::NoExcursions { .. }) if bf.excursion_mass.is_zero() => {}
            Err(e) => return Err(e),
        }
        if !mismatches.is_empty() {
            return Ok(Check::new("brute-force", false, format!("n = {n}: {}", mismatches.join(", "))));
        }
    }
    Ok(Check::new("brute-force", true, format!("exact agreement for n <= {n_max}")))
}

fn remark_check(model: &WalkModel) -> Check {
    let name = "meander-identity";
    if model.c() != 1 {
        return Check::skip(name, "needs a single negative jump");
    }
    let s = meander_series::<BigRational>(model, REMARK_LENGTH + 1);
    let kill = model.kill_probability();
    let mut partial = BigRational::zero();
    for n in 0..=REMARK_LENGTH {
        partial += &s.excursions[n];
        if s.meanders[n + 1] != BigRational::one() - &kill * &partial {
            return Check::new(name, false, format!("fails at n = {n}"));
        }
    }
    Check::new(name, true, format!("exact for n <= {REMARK_LENGTH}"))
}

/// `sum_{n <= N} x_n z^n` with a bound on the remainder: `z^{N+1} / (1 - z)` for `z < 1`
/// (all `x_n <= 1`), otherwise ten times the geometric tail implied by the last ratio.
pub fn series_with_tail(coeffs: &[f64], z: f64) -> (f64, f64) {
    let sum = coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c);
    if z < 1.0 {
        return (sum, z.powi(coeffs.len() as i32) / (1.0 - z));
    }
    let n = coeffs.len() - 1;
    let q = z * coeffs[n] / coeffs[n - 1];
    if q.is_nan() || q >= 0.9 {
        return (sum, f64::INFINITY);
    }
    (sum, 10.0 * coeffs[n] * z.powi(n as i32) * q / (1.0 - q))
}

/// Sample points `0.5 rho k / 21` for `k = 1..=20`.
pub fn sample_points(model: &WalkModel) -> Result<Vec<f64>> {
    let rho = structural_constants(model)?.rho;
    Ok((1..=SAMPLE_POINTS).map(|k| 0.5 * rho * k as f64 / (SAMPLE_POINTS + 1) as f64).collect())
}

fn kernel_checks(model: &WalkModel) -> Vec<Check> {
    let points = match sample_points(model) {
        Ok(p) => p,
        Err(e) => return vec![Check::from_result("kernel", Err(e))],
    };
    let e = meander_series::<f64>(model, SERIES_TERMS).excursions;
    let series = Check::from_result(
        "kernel-series",
        (|| {
            let mut worst = 0.0f64;
            for &z in &points {
                let (sum, tail) = series_with_tail(&e, z);
                let f0 = solve_boundary_gfs(model, z)?[0];
                let excess = (f0 - sum).abs() - tail;
                worst = worst.max(excess);
                if excess > KERNEL_TOLERANCE {
                    return Ok(Check::new(
                        "kernel-series",
                        false,
                        format!("z = {z}: |F0 - series| = {}", (f0 - sum).abs()),
                    ));
                }
            }
            Ok(Check::new("kernel-series", true, format!("max excess over tail bound {worst:e}")))
        })(),
    );
    let perturbation = Check::from_result(
        "perturbation-identity",
        (|| {
            let mut worst = 0.0f64;
            for &z in &points {
                worst = worst.max(perturbation_identity_residual(model, z)?);
            }
            Ok(Check::new("perturbation-identity", worst <= KERNEL_TOLERANCE, format!("max residual {worst:e}")))
        })(),
    );
    let mut out = vec![series, perturbation];
    if model.c() >= 2 {
        out.push(Check::from_result(
            "vandermonde-formula",
            (|| {
                let mut worst = 0.0f64;
                for &z in &points {
                    let f0 = solve_boundary_gfs(model, z)?[0];
                    worst = worst.max((excursion_gf_vandermonde(model, z)? - f0).abs());
                }
                Ok(Check::new("vandermonde-formula", worst <= KERNEL_TOLERANCE, format!("max difference {worst:e}")))
            })(),
        ));
    }
    out
}

fn periodicity_guard(model: &WalkModel) -> Check {
    let period = model.periodicity().period;
    let expected = Err(Error::PeriodicModel { period });
    let ok = excursion_asymptotic(model, 100).map(|_| ()) == expected
        && final_altitude_asymptotic(model, 100).map(|_| ()) == expected
        && returns_law(model).map(|_| ()) == expected
        && final_altitude_law(model).map(|_| ()) == expected;
    Check::new("periodicity-guard", ok, format!("period {period}: asymptotic and law operations refuse"))
}

/// `(n / 4, n)` with `n <= 2000` small enough that `rho^{-n}` stays far above the
/// smallest double.
fn lengths(model: &WalkModel) -> Result<(usize, usize)> {
    let sc = structural_constants(model)?;
    let dominant = match sc.criticality {
        Criticality::Supercritical => sc.rho1.unwrap_or(sc.rho),
        _ => sc.rho,
    };
    let limit = if dominant > 1.0 { (200.0 * 10f64.ln() / dominant.ln()) as usize } else { MAX_LENGTH };
    let n_hi = limit.min(MAX_LENGTH);
    Ok((n_hi / 4, n_hi))
}

fn relative(exact: f64, estimate: &AsymptoticEstimate) -> f64 {
    (exact / estimate.value - 1.0).abs()
}

fn asymptotic_checks(model: &WalkModel, n_lo: usize, n_hi: usize) -> Vec<Check> {
    let s = meander_series::<f64>(model, n_hi);
    let arches = arch_masses::<f64>(model, n_hi);
    type Estimator = fn(&WalkModel, usize) -> Result<AsymptoticEstimate>;
    type Exact<'a> = Box<dyn Fn(usize) -> f64 + 'a>;
    let cases: [(&str, Estimator, Exact); 4] = [
        ("asym-excursions", excursion_asymptotic, Box::new(|n| s.excursions[n])),
        ("asym-arches", arch_asymptotic, Box::new(|n| arches[n])),
        ("asym-meanders", meander_ratio_asymptotic, Box::new(|n| s.meanders[n])),
        ("asym-final-altitude", final_altitude_asymptotic, Box::new(|n| s.altitude_sums[n] / s.meanders[n])),
    ];
    cases
        .into_iter()
        .map(|(name, estimate, exact)| {
            Check::from_result(
                name,
                (|| {
                    let (lo, hi) = (estimate(model, n_lo)?, estimate(model, n_hi)?);
                    let (err_lo, err_hi) = (relative(exact(n_lo), &lo), relative(exact(n_hi), &hi));
                    let ok = err_hi <= ASYMPTOTIC_TOLERANCE && (err_hi < err_lo || err_hi < 1e-6);
                    Ok(Check::new(
                        name,
                        ok,
                        format!(
                            "{}: relative error {err_lo:.3e} at n = {n_lo}, {err_hi:.3e} at n = {n_hi}",
                            hi.formula_id
                        ),
                    ))
                })(),
            )
        })
        .collect()
}

fn law_check(
    model: &WalkModel,
    name: &str,
    stat: Statistic,
    spec: Result<LimitLawSpec>,
    n_lo: usize,
    n_hi: usize,
) -> Check {
    Check::from_result(
        name,
        (|| {
            let spec = spec?;
            if matches!(spec.law, Law::Discrete { pmf: None }) {
                return Ok(Check::skip(name, format!("{}: discrete limit without closed form", spec.case)));
            }
            let (lo, hi) = (fit(model, stat, n_lo, &spec)?, fit(model, stat, n_hi, &spec)?);
            let ok = hi.passed && hi.sup_distance < lo.sup_distance;
            Ok(Check::new(
                name,
                ok,
                format!(
                    "{} {}: distance {:.4} at n = {n_lo}, {:.4} at n = {n_hi}",
                    spec.case, spec.law, lo.sup_distance, hi.sup_distance
                ),
            ))
        })(),
    )
}

fn law_checks(model: &WalkModel, n_lo: usize, n_hi: usize) -> Vec<Check> {
    vec![
        law_check(model, "law-returns", Statistic::ReturnsToZero, returns_law(model), n_lo, n_hi),
        law_check(model, "law-final-altitude", Statistic::FinalAltitude, final_altitude_law(model), n_lo, n_hi),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn motzkin_passes_everything() {
        let checks = verify_model(&presets::motzkin_absorption()).unwrap();
        for c in &checks {
            assert_eq!(c.status, Status::Pass, "{c:?}");
        }
        assert!(checks.iter().any(|c| c.name == "law-returns"));
    }

    #[test]
    fn dyck_stops_at_the_guard() {
        let checks = verify_model(&presets::dyck_reflection()).unwrap();
        let guard = checks.iter().find(|c| c.name == "periodicity-guard").unwrap();
        assert_eq!(guard.status, Status::Pass);
        assert!(checks.iter().all(|c| !c.name.starts_with("asym")));
    }

    #[test]
    fn two_down_jumps_use_the_vandermonde_formula() {
        let checks = verify_model(&presets::two_down_reflection()).unwrap();
        let v = checks.iter().find(|c| c.name == "vandermonde-formula").unwrap();
        assert_eq!(v.status, Status::Pass, "{v:?}");
        assert_eq!(checks.iter().find(|c| c.name == "meander-identity").unwrap().status, Status::Skip);
    }

    #[test]
    fn tail_bound() {
        let coeffs = vec![1.0; 10];
        let (s, t) = series_with_tail(&coeffs, 0.5);
        assert!((s + t - 2.0).abs() < 1e-15);
        let (_, t) = series_with_tail(&[1.0, 1.0, 1.0], 1.5);
        assert!(t.is_infinite());
    }
}
