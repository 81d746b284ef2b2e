use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{FloatLaurent, WalkModel};

/// Position of the pole of `E(z)` relative to the branch point `rho`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criticality {
    /// `P0>=(tau) > P(tau)`: a simple pole `rho1 < rho` dominates.
    Supercritical,
    /// `P0>=(tau) = P(tau)`: pole and branch point meet.
    Critical,
    /// `P0>=(tau) < P(tau)`: the square-root singularity at `rho` dominates.
    Subcritical,
}

impl fmt::Display for Criticality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criticality::Supercritical => "supercritical",
            Criticality::Critical => "critical",
            Criticality::Subcritical => "subcritical",
        })
    }
}

/// `lambda` this close to 1 counts as critical when it cannot be decided exactly.
pub const CRITICAL_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct StructuralConstants {
    /// Positive root of `P'(u) = 0`.
    pub tau: f64,
    /// `1 / P(tau)`.
    pub rho: f64,
    /// `sqrt(2 P(tau) / P''(tau))`.
    pub c: f64,
    /// `P'(1)`.
    pub delta: f64,
    /// `P0>='(1)`.
    pub delta0geq: f64,
    /// `P0>=(tau) / P(tau)`.
    pub lambda: f64,
    /// `C rho P0>='(tau)`.
    pub kappa: f64,
    /// `P''(1)`.
    pub p_second: f64,
    /// `P0>=(1)`.
    pub p0geq_at_one: f64,
    pub criticality: Criticality,
    /// Root of `1 = z P0>=(u1(z))` in `(0, rho]`. Only computed for `c = 1`.
    pub rho1: Option<f64>,
    /// `d/dz P0>=(u1(z))` at `rho1`; supercritical only.
    pub alpha: Option<f64>,
    /// `d2/dz2 P0>=(u1(z))` at `rho1`; supercritical only.
    pub alpha2: Option<f64>,
    /// `1 / (alpha rho1^2 + 1)`.
    pub gamma: Option<f64>,
    /// `E(rho) = 1 / (1 - lambda)` in the subcritical case.
    pub e_at_rho: Option<f64>,
    /// `E(1)` when `1 < rho1` (or there is no `rho1`).
    pub e_at_1: Option<f64>,
    /// `F_u(rho, 1) - delta rho / (1 - rho)^2` in the subcritical case with `rho > 1`.
    pub r: Option<f64>,
}

/// Float views of `P` and `P0>=` with the branch helpers the constants need.
#[derive(Clone, Debug)]
pub(crate) struct Branch {
    pub p: FloatLaurent,
    pub p0: FloatLaurent,
    pub tau: f64,
    pub rho: f64,
}

impl Branch {
    pub fn new(model: &WalkModel) -> Result<Branch> {
        let p = model.p().to_float();
        let tau = if model.p().derivative_at_one().is_zero() { 1.0 } else { find_tau(&p)? };
        let rho = 1.0 / p.eval(tau);
        Ok(Branch { p, p0: model.p0_geq().to_float(), tau, rho })
    }

    /// The real branch `u1(z)` on `(0, tau]`, for `0 < z <= rho`.
    pub fn u1(&self, z: f64) -> Result<f64> {
        if z <= 0.0 || z > self.rho * (1.0 + 1e-14) {
            return Err(Error::BranchDegenerate { z: format!("{z}") });
        }
        if z >= self.rho * (1.0 - 1e-15) {
            return Ok(self.tau);
        }
        // z P(u) - 1 decreases from +inf to z / rho - 1 < 0 on (0, tau]
        let f = |u: f64| z * self.p.eval(u) - 1.0;
        let (mut lo, mut hi) = (0.0, self.tau);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut u = 0.5 * (lo + hi);
        for _ in 0..3 {
            let d = z * self.p.deriv(u);
            if d == 0.0 {
                break;
            }
            let next = u - f(u) / d;
            if next > lo && next < hi {
                u = next;
            }
        }
        Ok(u)
    }

    /// `u1'(z) = -1 / (z^2 P'(u1))`.
    pub fn u1_prime(&self, z: f64, u: f64) -> f64 {
        -1.0 / (z * z * self.p.deriv(u))
    }

    /// `u1''(z)` from differentiating `z P(u1) = 1` twice.
    pub fn u1_second(&self, z: f64, u: f64, du: f64) -> f64 {
        let (p1, p2) = (self.p.deriv(u), self.p.deriv2(u));
        -(2.0 * p1 * du + z * p2 * du * du) / (z * p1)
    }

    /// `D(z) = 1 - z P0>=(u1(z))`.
    pub fn denominator(&self, z: f64) -> Result<f64> {
        Ok(1.0 - z * self.p0.eval(self.u1(z)?))
    }

    /// `F_u(z, 1) / E(z)`: the derivative of the meander function at `u = 1`, divided by
    /// the excursion function.
    pub fn fu_over_e(&self, z: f64, delta: f64, delta0geq: f64) -> Result<f64> {
        let u = self.u1(z)?;
        let w = 1.0 - z;
        Ok(delta0geq * z / w + delta * (self.p0.eval(1.0) - self.p0.eval(u)) * z * z / (w * w))
    }
}

/// Root of the increasing function `P'` on `(0, inf)`.
fn find_tau(p: &FloatLaurent) -> Result<f64> {
    let mut hi = 1.0;
    while p.deriv(hi) <= 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::RootFinding("P' has no positive root".into()));
        }
    }
    let mut lo = hi / 2.0;
    while p.deriv(lo) >= 0.0 {
        lo /= 2.0;
        if lo < 1e-12 {
            return Err(Error::RootFinding("P' has no positive root".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p.deriv(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut tau = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d2 = p.deriv2(tau);
        let next = tau - p.deriv(tau) / d2;
        if next.is_finite() && next >= lo && next <= hi {
            tau = next;
        }
    }
    Ok(tau)
}

/// Computes every constant the asymptotic formulas use.
///
/// Works for periodic step sets too; the asymptotic operations reject those separately.
pub fn structural_constants(model: &WalkModel) -> Result<StructuralConstants> {
    model.require_valid()?;
    let b = Branch::new(model)?;
    let (tau, rho) = (b.tau, b.rho);
    let p_tau = b.p.eval(tau);
    let c = (2.0 * p_tau / b.p.deriv2(tau)).sqrt();
    let to_f = |q: num_rational::BigRational| q.to_f64().unwrap_or(f64::NAN);
    let delta = to_f(model.p().derivative_at_one());
    let delta0geq = to_f(model.p0_geq().derivative_at_one());
    let p_second = to_f(model.p().second_derivative_at_one());
    let p0geq_at_one_exact = model.p0_geq().at_one();
    let p0geq_at_one = to_f(p0geq_at_one_exact.clone());
    let lambda = b.p0.eval(tau) / p_tau;
    let kappa = c * rho * b.p0.deriv(tau);

    let criticality = if model.p().derivative_at_one().is_zero() {
        // tau = 1 exactly, so lambda = P0>=(1)
        if p0geq_at_one_exact == num_rational::BigRational::from_integer(1.into()) {
            Criticality::Critical
        } else {
            Criticality::Subcritical
        }
    } else if (lambda - 1.0).abs() <= CRITICAL_TOLERANCE {
        Criticality::Critical
    } else if lambda > 1.0 {
        Criticality::Supercritical
    } else {
        Criticality::Subcritical
    };

    let mut sc = StructuralConstants {
        tau,
        rho,
        c,
        delta,
        delta0geq,
        lambda,
        kappa,
        p_second,
        p0geq_at_one,
        criticality,
        rho1: None,
        alpha: None,
        alpha2: None,
        gamma: None,
        e_at_rho: None,
        e_at_1: None,
        r: None,
    };
    if !model.is_lukasiewicz() {
        return Ok(sc);
    }

    match criticality {
        Criticality::Supercritical => {
            let rho1 = find_rho1(&b)?;
            let u = b.u1(rho1)?;
            let du = b.u1_prime(rho1, u);
            let ddu = b.u1_second(rho1, u, du);
            let alpha = b.p0.deriv(u) * du;
            let alpha2 = b.p0.deriv2(u) * du * du + b.p0.deriv(u) * ddu;
            sc.rho1 = Some(rho1);
            sc.alpha = Some(alpha);
            sc.alpha2 = Some(alpha2);
            sc.gamma = Some(1.0 / (alpha * rho1 * rho1 + 1.0));
        }
        Criticality::Critical => sc.rho1 = Some(rho),
        Criticality::Subcritical => {
            let e_rho = 1.0 / (1.0 - lambda);
            sc.e_at_rho = Some(e_rho);
            if rho > 1.0 {
                let fu = e_rho * b.fu_over_e(rho, delta, delta0geq)?;
                sc.r = Some(fu - delta * rho / ((1.0 - rho) * (1.0 - rho)));
            }
        }
    }

    // E(1): u1(1) = 1 exactly when tau >= 1, i.e. delta <= 0
    sc.e_at_1 = if delta <= 0.0 {
        let kill = 1.0 - p0geq_at_one;
        (kill > 0.0).then(|| 1.0 / kill)
    } else {
        let d1 = b.denominator(1.0)?;
        (d1 > 1e-14).then(|| 1.0 / d1)
    };
    Ok(sc)
}

/// Bisection on `D(z)` over `(0, rho)`, valid when `D(rho) < 0`.
fn find_rho1(b: &Branch) -> Result<f64> {
    let (mut lo, mut hi) = (0.0, b.rho);
    if b.denominator(hi)? >= 0.0 {
        return Err(Error::NoRho1);
    }
    while hi - lo > 1e-15 * b.rho {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if b.denominator(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `u1(z)` for real `z` in `(0, rho]`; returns `tau` at `z = rho`.
pub fn u1_real(model: &WalkModel, z: f64) -> Result<f64> {
    Branch::new(model)?.u1(z)
}

/// `rho1`, or `NoRho1` when `1 - z P0>=(u1(z))` stays positive on `(0, rho]`.
pub fn rho1(model: &WalkModel) -> Result<f64> {
    model.require_lukasiewicz()?;
    let sc = structural_constants(model)?;
    sc.rho1.ok_or(Error::NoRho1)
}

impl StructuralConstants {
    /// `(name, value)` pairs in a fixed order; absent optional constants are skipped.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        let mut out = vec![
            ("tau", self.tau),
            ("rho", self.rho),
            ("C", self.c),
            ("delta", self.delta),
            ("delta0geq", self.delta0geq),
            ("lambda", self.lambda),
            ("kappa", self.kappa),
        ];
        let optional = [
            ("rho1", self.rho1),
            ("alpha", self.alpha),
            ("alpha2", self.alpha2),
            ("gamma", self.gamma),
            ("E_at_rho", self.e_at_rho),
            ("E_at_1", self.e_at_1),
            ("r", self.r),
        ];
        out.extend(optional.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))));
        out
    }
}
