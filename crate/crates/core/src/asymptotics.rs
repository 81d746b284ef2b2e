//! Leading-order asymptotics of excursions, arches, meanders and the final altitude for
//! aperiodic Łukasiewicz walks (`c = 1`).
//!
//! Every estimate names the formula it came from, so that a mismatch against the exact
//! recurrences can be traced to a single table cell.

use std::f64::consts::PI;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::{structural_constants, Branch, Criticality, StructuralConstants};
use crate::model::{ModelKind, WalkModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DriftSign {
    Negative,
    Zero,
    Positive,
}

impl fmt::Display for DriftSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DriftSign::Negative => "negative",
            DriftSign::Zero => "zero",
            DriftSign::Positive => "positive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Classification {
    pub criticality: Criticality,
    pub drift: DriftSign,
    pub kind: ModelKind,
}

impl Classification {
    /// Whether the combination can occur at all. Reflection forces `lambda > 1` for
    /// negative drift and `lambda = 1` for zero drift; absorption forces `lambda < 1` for
    /// zero drift.
    pub fn is_possible(&self) -> bool {
        use Criticality::*;
        match (self.kind, self.drift) {
            (_, DriftSign::Positive) => true,
            (ModelKind::Reflection, DriftSign::Negative) => self.criticality == Supercritical,
            (ModelKind::Reflection, DriftSign::Zero) => self.criticality == Critical,
            (ModelKind::Absorption, DriftSign::Negative) => true,
            (ModelKind::Absorption, DriftSign::Zero) => self.criticality == Subcritical,
        }
    }

    fn cell(&self) -> String {
        format!("{} {} drift, {} model", self.criticality, self.drift, self.kind)
    }
}

/// Sign of `P'(1)`, decided on exact rationals.
pub fn drift_sign(model: &WalkModel) -> DriftSign {
    let delta = model.p().derivative_at_one();
    if delta.is_zero() {
        DriftSign::Zero
    } else if delta.is_positive() {
        DriftSign::Positive
    } else {
        DriftSign::Negative
    }
}

pub fn classify(model: &WalkModel) -> Result<Classification> {
    model.require_valid()?;
    model.require_aperiodic()?;
    let sc = structural_constants(model)?;
    let class = Classification { criticality: sc.criticality, drift: drift_sign(model), kind: model.kind() };
    if !class.is_possible() {
        return Err(Error::InconsistentCase(format!("{} cannot occur", class.cell())));
    }
    Ok(class)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticEstimate {
    pub n: usize,
    pub value: f64,
    /// Which formula produced `value`, e.g. `excursions/critical`.
    pub formula_id: &'static str,
}

fn prepare(model: &WalkModel) -> Result<(Classification, StructuralConstants)> {
    model.require_valid()?;
    model.require_aperiodic()?;
    model.require_lukasiewicz()?;
    let class = classify(model)?;
    Ok((class, structural_constants(model)?))
}

/// `x^{-n}` without intermediate overflow.
fn inv_pow(x: f64, n: usize) -> f64 {
    (-(n as f64) * x.ln()).exp()
}

fn missing(what: &str) -> Error {
    Error::InconsistentCase(format!("constant {what} is undefined for this model"))
}

/// `e_n` from the dominant singularity of `E(z)`.
pub fn excursion_asymptotic(model: &WalkModel, n: usize) -> Result<AsymptoticEstimate> {
    let (class, sc) = prepare(model)?;
    let nf = n as f64;
    let (value, formula_id) = match class.criticality {
        Criticality::Supercritical => {
            let rho1 = sc.rho1.ok_or_else(|| missing("rho1"))?;
            (sc.gamma.ok_or_else(|| missing("gamma"))? * inv_pow(rho1, n), "excursions/supercritical")
        }
        Criticality::Critical => (inv_pow(sc.rho, n) / (sc.kappa * (PI * nf).sqrt()), "excursions/critical"),
        Criticality::Subcritical => {
            let e = sc.e_at_rho.ok_or_else(|| missing("E(rho)"))?;
            (e * e * sc.kappa * inv_pow(sc.rho, n) / (2.0 * (PI * nf.powi(3)).sqrt()), "excursions/subcritical")
        }
    };
    Ok(AsymptoticEstimate { n, value, formula_id })
}

/// `a_n ~ kappa rho^{-n} / (2 sqrt(pi n^3))`, from `A(z) = lambda - kappa sqrt(1 - z/rho) + ...`.
pub fn arch_asymptotic(model: &WalkModel, n: usize) -> Result<AsymptoticEstimate> {
    let (_, sc) = prepare(model)?;
    let nf = n as f64;
    Ok(AsymptoticEstimate {
        n,
        value: sc.kappa * inv_pow(sc.rho, n) / (2.0 * (PI * nf.powi(3)).sqrt()),
        formula_id: "arches",
    })
}

/// `m_n`, the surviving fraction of walks in the absorption model.
///
/// Reflection models keep all their mass, so the estimate there is the constant 1.
pub fn meander_ratio_asymptotic(model: &WalkModel, n: usize) -> Result<AsymptoticEstimate> {
    let (class, sc) = prepare(model)?;
    let nf = n as f64;
    if class.kind == ModelKind::Reflection {
        return Ok(AsymptoticEstimate { n, value: 1.0, formula_id: "meanders/reflection" });
    }
    let e1 = || sc.e_at_1.ok_or_else(|| missing("E(1)"));
    let (value, formula_id) = match (class.drift, class.criticality) {
        (DriftSign::Positive, _) => (1.0 - (1.0 - sc.p0geq_at_one) * e1()?, "meanders/positive-drift"),
        (DriftSign::Negative, Criticality::Supercritical) => {
            let rho1 = sc.rho1.ok_or_else(|| missing("rho1"))?;
            let gamma = sc.gamma.ok_or_else(|| missing("gamma"))?;
            (rho1 * gamma / (e1()? * (rho1 - 1.0)) * inv_pow(rho1, n), "meanders/supercritical/negative-drift")
        }
        (DriftSign::Negative, Criticality::Critical) => (
            sc.rho / (e1()? * sc.kappa * (sc.rho - 1.0)) * inv_pow(sc.rho, n) / (PI * nf).sqrt(),
            "meanders/critical/negative-drift",
        ),
        (DriftSign::Negative, Criticality::Subcritical) => {
            let e = sc.e_at_rho.ok_or_else(|| missing("E(rho)"))?;
            (
                e * e / e1()? * sc.kappa * sc.rho / (2.0 * (sc.rho - 1.0)) * inv_pow(sc.rho, n)
                    / (PI * nf.powi(3)).sqrt(),
                "meanders/subcritical/negative-drift",
            )
        }
        (DriftSign::Zero, Criticality::Subcritical) => {
            (e1()? * sc.kappa / (PI * nf).sqrt(), "meanders/subcritical/zero-drift")
        }
        (DriftSign::Zero, _) => return Err(Error::InconsistentCase(class.cell())),
    };
    Ok(AsymptoticEstimate { n, value, formula_id })
}

/// `E[X_n]` for the final altitude of a surviving meander.
pub fn final_altitude_asymptotic(model: &WalkModel, n: usize) -> Result<AsymptoticEstimate> {
    let (class, sc) = prepare(model)?;
    let nf = n as f64;
    let branch = Branch::new(model)?;
    let e1 = || sc.e_at_1.ok_or_else(|| missing("E(1)"));
    let p0_second = branch.p0.deriv2(1.0);
    let (value, formula_id) = match (class.kind, class.drift, class.criticality) {
        (_, DriftSign::Positive, _) => (sc.delta * nf, "final-altitude/positive-drift"),
        (ModelKind::Reflection, DriftSign::Zero, Criticality::Critical) => {
            ((2.0 * sc.p_second * nf / PI).sqrt(), "final-altitude/reflection/critical/zero-drift")
        }
        (ModelKind::Reflection, DriftSign::Negative, Criticality::Supercritical) => (
            (sc.delta0geq * sc.p_second - sc.delta * p0_second) / (2.0 * sc.delta * (sc.delta - sc.delta0geq)),
            "final-altitude/reflection/supercritical/negative-drift",
        ),
        (ModelKind::Absorption, DriftSign::Zero, Criticality::Subcritical) => {
            ((sc.p_second * PI * nf / 2.0).sqrt(), "final-altitude/absorption/subcritical/zero-drift")
        }
        (ModelKind::Absorption, DriftSign::Negative, Criticality::Supercritical) => {
            let rho1 = sc.rho1.ok_or_else(|| missing("rho1"))?;
            let ratio = branch.fu_over_e(rho1, sc.delta, sc.delta0geq)?;
            ((1.0 - 1.0 / rho1) * e1()? * ratio, "final-altitude/absorption/supercritical/negative-drift")
        }
        (ModelKind::Absorption, DriftSign::Negative, Criticality::Critical) => {
            let ratio = branch.fu_over_e(sc.rho, sc.delta, sc.delta0geq)?;
            ((1.0 - 1.0 / sc.rho) * e1()? * ratio, "final-altitude/absorption/critical/negative-drift")
        }
        (ModelKind::Absorption, DriftSign::Negative, Criticality::Subcritical) => {
            let r = sc.r.ok_or_else(|| missing("r"))?;
            let e_rho = sc.e_at_rho.ok_or_else(|| missing("E(rho)"))?;
            (r * (1.0 - 1.0 / sc.rho) * e1()? / e_rho, "final-altitude/absorption/subcritical/negative-drift")
        }
        _ => return Err(Error::InconsistentCase(class.cell())),
    };
    Ok(AsymptoticEstimate { n, value, formula_id })
}

/// The two final-altitude constants whose printed form differs from the derivation used
/// by [`final_altitude_asymptotic`]: a `+` in place of `-` in the reflection numerator
/// and an extra factor `kappa` in the critical absorption cell. `None` elsewhere.
pub fn final_altitude_printed_variant(model: &WalkModel, n: usize) -> Result<Option<AsymptoticEstimate>> {
    let (class, sc) = prepare(model)?;
    let derived = final_altitude_asymptotic(model, n)?;
    let p0_second = Branch::new(model)?.p0.deriv2(1.0);
    Ok(match (class.kind, class.drift, class.criticality) {
        (ModelKind::Reflection, DriftSign::Negative, Criticality::Supercritical) => Some(AsymptoticEstimate {
            n,
            value: (sc.delta0geq * sc.p_second + sc.delta * p0_second) / (2.0 * sc.delta * (sc.delta - sc.delta0geq)),
            formula_id: "final-altitude/reflection/supercritical/negative-drift/printed",
        }),
        (ModelKind::Absorption, DriftSign::Negative, Criticality::Critical) => Some(AsymptoticEstimate {
            n,
            value: sc.kappa * derived.value,
            formula_id: "final-altitude/absorption/critical/negative-drift/printed",
        }),
        _ => None,
    })
}

/// Local behaviour of `Q(z) = P0>=(u1(z))` near `z = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchExpansionCheck {
    /// `quadratic` when `rho > 1`, `square-root` when `rho = 1`.
    pub regime: &'static str,
    pub eps: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Residuals divided by `eps^3` (quadratic) or `eps` (square root).
    pub scaled: Vec<f64>,
}

/// Compares `Q(1 - eps)` with `Q(1) - alpha eps + alpha2/2 eps^2` (`rho > 1`) or with
/// `P0>=(1) - kappa sqrt(eps)` (`rho = 1`).
pub fn branch_expansion_check(model: &WalkModel) -> Result<BranchExpansionCheck> {
    model.require_valid()?;
    model.require_lukasiewicz()?;
    let sc = structural_constants(model)?;
    let b = Branch::new(model)?;
    let q = |z: f64| -> Result<f64> { Ok(b.p0.eval(b.u1(z)?)) };
    let eps = vec![1e-2, 1e-3];
    let (regime, residuals, power) = if sc.rho > 1.0 + 1e-12 {
        let u = b.u1(1.0)?;
        let du = b.u1_prime(1.0, u);
        let alpha = -b.p0.deriv(u) / b.p.deriv(u);
        let alpha2 = b.p0.deriv2(u) * du * du + b.p0.deriv(u) * b.u1_second(1.0, u, du);
        let q1 = b.p0.eval(u);
        let res = eps
            .iter()
            .map(|&e| Ok((q(1.0 - e)? - (q1 - alpha * e + alpha2 / 2.0 * e * e)).abs()))
            .collect::<Result<Vec<f64>>>()?;
        ("quadratic", res, 3)
    } else {
        let res = eps
            .iter()
            .map(|&e| Ok((q(1.0 - e)? - (sc.p0geq_at_one - sc.kappa * e.sqrt())).abs()))
            .collect::<Result<Vec<f64>>>()?;
        ("square-root", res, 1)
    };
    let scaled = residuals.iter().zip(&eps).map(|(r, e)| r / e.powi(power)).collect();
    Ok(BranchExpansionCheck { regime, eps, residuals, scaled })
}
