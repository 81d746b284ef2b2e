//! The kernel method, evaluated numerically.
//!
//! Substituting the `c` small roots `u_i(z)` of `1 - z P(u) = 0` into the functional
//! equation for `F(z, u)` gives a `c x c` linear system for the boundary series
//! `F_0 .. F_{c-1}`. Everything here works in double precision at a fixed `z`.

mod constants;
mod roots;

pub use constants::{rho1, structural_constants, u1_real, Criticality, StructuralConstants, CRITICAL_TOLERANCE};
pub use roots::polynomial_roots;

pub(crate) use constants::Branch;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::model::{FloatLaurent, LaurentPolynomial, WalkModel};

/// Bound on `|1 - z P(u_i)|` for refined branches.
pub const ROOT_TOLERANCE: f64 = 1e-12;

/// The small branches at one point `z`, sorted by increasing modulus.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchSet {
    pub z: Complex64,
    pub branches: Vec<Complex64>,
}

impl BranchSet {
    /// The branch that is real and positive for real `z`, `u1(z)`.
    pub fn principal(&self) -> Complex64 {
        *self
            .branches
            .iter()
            .filter(|u| u.re > 0.0)
            .min_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap())
            .unwrap_or(&self.branches[0])
    }

    /// `max |1 - z P(u_i)|`.
    pub fn residual(&self, p: &FloatLaurent) -> f64 {
        self.branches
            .iter()
            .map(|&u| (Complex64::new(1.0, 0.0) - self.z * p.eval_complex(u)).norm())
            .fold(0.0, f64::max)
    }
}

/// Small branches at real `z`.
pub fn small_branches(model: &WalkModel, z: f64) -> Result<BranchSet> {
    small_branches_complex(model, Complex64::new(z, 0.0))
}

/// Roots of `u^c - z u^c P(u)` (degree `c + d`), the `c` smallest in modulus.
pub fn small_branches_complex(model: &WalkModel, z: Complex64) -> Result<BranchSet> {
    model.require_valid()?;
    if z.norm() == 0.0 {
        return Err(Error::BranchDegenerate { z: "0".into() });
    }
    let branch = Branch::new(model)?;
    let rho = branch.rho;
    let at_rho = (z.re - rho).abs() <= 1e-12 * rho && z.im.abs() <= 1e-12 * rho;
    if z.norm() > rho * (1.0 + 1e-12) {
        return Err(Error::BranchDegenerate { z: format!("{z}") });
    }
    let p = model.p().to_float();
    let c = model.c() as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); c + model.d() as usize + 1];
    coeffs[c] += 1.0;
    for &(e, w) in p.terms() {
        coeffs[(e + c as i32) as usize] -= z * w;
    }
    let mut all = polynomial_roots(&coeffs)?;
    all.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
    let mut branches: Vec<Complex64> = all[..c].to_vec();
    if at_rho {
        // u1 and a large branch merge at tau
        let nearest = (0..c)
            .min_by(|&i, &j| {
                let di = (branches[i] - branch.tau).norm();
                let dj = (branches[j] - branch.tau).norm();
                di.partial_cmp(&dj).unwrap()
            })
            .unwrap();
        branches[nearest] = Complex64::new(branch.tau, 0.0);
        return Ok(BranchSet { z, branches });
    }
    let (inner, outer) = (all[c - 1].norm(), all[c].norm());
    if outer - inner <= 1e-9 * outer {
        return Err(Error::BranchDegenerate { z: format!("{z}") });
    }
    for u in branches.iter_mut() {
        *u = polish(&p, z, *u);
    }
    let set = BranchSet { z, branches };
    let residual = set.residual(&p);
    if residual > ROOT_TOLERANCE {
        return Err(Error::RootFinding(format!("kernel residual {residual:e} at z = {z}")));
    }
    Ok(set)
}

/// Newton on `1 - z P(u)`.
fn polish(p: &FloatLaurent, z: Complex64, mut u: Complex64) -> Complex64 {
    let deriv = |u: Complex64| -> Complex64 {
        p.terms().iter().filter(|t| t.0 != 0).map(|&(e, w)| u.powi(e - 1) * (w * e as f64)).sum()
    };
    for _ in 0..6 {
        let g = Complex64::new(1.0, 0.0) - z * p.eval_complex(u);
        let dg = -z * deriv(u);
        if g.norm() == 0.0 || dg.norm() == 0.0 {
            break;
        }
        let next = u - g / dg;
        if !next.is_finite() {
            break;
        }
        u = next;
    }
    u
}

/// `r_0 = P - P0>=` and `r_k(u) = sum_{j=-c}^{-k-1} p_j u^{j+k}` for `k >= 1`.
pub fn boundary_polynomials(model: &WalkModel) -> Vec<LaurentPolynomial> {
    let c = model.c();
    let mut out = Vec::with_capacity(c as usize);
    let r0 = LaurentPolynomial::from_terms(
        model.p().terms().map(|(e, w)| (e, w.clone())).chain(model.p0_geq().terms().map(|(e, w)| (e, -w.clone()))),
    );
    out.push(r0);
    for k in 1..c {
        out.push(LaurentPolynomial::from_terms((-c..=-k - 1).map(|j| (j + k, model.p().coeff(j)))));
    }
    out
}

/// Gaussian elimination with partial pivoting; `None` when a pivot vanishes.
fn solve_linear(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    let scale = a.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())?;
        if a[pivot][col].norm() <= 1e-14 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let s: Complex64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// `F_0(z) .. F_{c-1}(z)` from the linear system `sum_k z u_i^c r_k(u_i) F_k = u_i^c`.
pub fn solve_boundary_gfs(model: &WalkModel, z: f64) -> Result<Vec<f64>> {
    let c = model.c() as usize;
    if z == 0.0 {
        let mut out = vec![0.0; c];
        out[0] = 1.0;
        return Ok(out);
    }
    let set = small_branches(model, z)?;
    let r: Vec<FloatLaurent> = boundary_polynomials(model).iter().map(|p| p.to_float()).collect();
    let zc = Complex64::new(z, 0.0);
    let a: Vec<Vec<Complex64>> =
        set.branches.iter().map(|&u| r.iter().map(|rk| zc * u.powi(c as i32) * rk.eval_complex(u)).collect()).collect();
    let b: Vec<Complex64> = set.branches.iter().map(|&u| u.powi(c as i32)).collect();
    let x = solve_linear(a, b).ok_or_else(|| Error::NumericalSingularity { z: format!("{z}") })?;
    Ok(x.iter().map(|v| v.re).collect())
}

/// `V(l)`: product of `u_m - u_n` over pairs `m < n` avoiding index `l`.
fn vandermonde_minor(u: &[Complex64], l: usize) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for m in 0..u.len() {
        for n in m + 1..u.len() {
            if m != l && n != l {
                v *= u[m] - u[n];
            }
        }
    }
    v
}

/// `W(i) = prod_{m != i} (u_i - u_m)`.
fn vandermonde_derivative(u: &[Complex64], i: usize) -> Complex64 {
    (0..u.len()).filter(|&m| m != i).map(|m| u[i] - u[m]).product()
}

/// Excursion series as a ratio of alternating Vandermonde sums. For `c = 1` this is
/// `1 / (1 - z P0>=(u1))`.
pub fn excursion_gf_vandermonde(model: &WalkModel, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(1.0);
    }
    let set = small_branches(model, z)?;
    let p0 = model.p0_geq().to_float();
    let zc = Complex64::new(z, 0.0);
    let u = &set.branches;
    let c = u.len() as i32;
    if c == 1 {
        let e = Complex64::new(1.0, 0.0) / (1.0 - zc * p0.eval_complex(u[0]));
        return Ok(e.re);
    }
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = Complex64::new(0.0, 0.0);
    for l in 0..u.len() {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let term = u[l].powi(c - 1) * vandermonde_minor(u, l) * sign;
        num += term;
        den += term * (1.0 - zc * p0.eval_complex(u[l]));
    }
    if den.norm() <= 1e-300 {
        return Err(Error::NumericalSingularity { z: format!("{z}") });
    }
    Ok((num / den).re)
}

/// Excursions of the boundary-free model (`P0 = P`): `(-1)^{c+1} prod u_i / (z p_{-c})`.
pub fn excursion_gf_bf(model: &WalkModel, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(1.0);
    }
    let set = small_branches(model, z)?;
    let c = model.c();
    let p_c = model.p().coeff(-c).to_f64().unwrap_or(f64::NAN);
    let prod: Complex64 = set.branches.iter().product();
    let sign = if c % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * prod.re / (z * p_c))
}

/// `E(z)` written as a perturbation of the boundary-free `E~(z)`:
/// `E~ / (1 - z E~ sum_i (P0>= - P>=)(u_i) u_i^{c-1} / W(i))` with `W(i) = prod_{m != i}(u_i - u_m)`.
pub fn perturbed_excursion_gf(model: &WalkModel, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(1.0);
    }
    let set = small_branches(model, z)?;
    let e_bf = excursion_gf_bf(model, z)?;
    let diff = LaurentPolynomial::from_terms(
        model
            .p0_geq()
            .terms()
            .map(|(e, w)| (e, w.clone()))
            .chain(model.p().nonnegative_part().terms().map(|(e, w)| (e, -w.clone()))),
    )
    .to_float();
    let u = &set.branches;
    let c = u.len() as i32;
    let sum: Complex64 =
        (0..u.len()).map(|i| diff.eval_complex(u[i]) * u[i].powi(c - 1) / vandermonde_derivative(u, i)).sum();
    Ok(e_bf / (1.0 - z * e_bf * sum.re))
}

/// `|F_0(z) - perturbed_excursion_gf(z)|`.
pub fn perturbation_identity_residual(model: &WalkModel, z: f64) -> Result<f64> {
    let f0 = solve_boundary_gfs(model, z)?[0];
    Ok((f0 - perturbed_excursion_gf(model, z)?).abs())
}

/// The same identity with `r_0 = P - P0>=` and the pairwise minors `V(i)` in the sum.
/// Kept to document that this reading does not hold (see the tests).
pub fn perturbation_residual_with_r0(model: &WalkModel, z: f64) -> Result<f64> {
    let f0 = solve_boundary_gfs(model, z)?;
    let set = small_branches(model, z)?;
    let e_bf = excursion_gf_bf(model, z)?;
    let r0 = boundary_polynomials(model)[0].to_float();
    let u = &set.branches;
    let c = u.len() as i32;
    let sum: Complex64 = (0..u.len()).map(|i| r0.eval_complex(u[i]) * u[i].powi(c - 1) / vandermonde_minor(u, i)).sum();
    Ok((f0[0] - e_bf / (1.0 - z * e_bf * sum.re)).abs())
}

/// Deviations of `u1(rho(1 - eps))` from `tau - C sqrt(eps)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionCheck {
    pub eps: Vec<f64>,
    /// `|u1 - (tau - C sqrt(eps))|` for each `eps`.
    pub residuals: Vec<f64>,
    /// `max residual / eps`.
    pub max_scaled: f64,
}

pub fn u1_expansion_check(model: &WalkModel) -> Result<ExpansionCheck> {
    let sc = structural_constants(model)?;
    let b = Branch::new(model)?;
    let eps = vec![1e-2, 1e-3, 1e-4];
    let residuals = eps
        .iter()
        .map(|&e| Ok((b.u1(sc.rho * (1.0 - e))? - (sc.tau - sc.c * e.sqrt())).abs()))
        .collect::<Result<Vec<f64>>>()?;
    let max_scaled = residuals.iter().zip(&eps).map(|(r, e)| r / e).fold(0.0, f64::max);
    Ok(ExpansionCheck { eps, residuals, max_scaled })
}

#[cfg(test)]
mod tests;
