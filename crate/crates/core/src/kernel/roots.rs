//! All complex roots of a polynomial by Aberth–Ehrlich iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITER: usize = 500;

/// `p(x)` and `p'(x)` by Horner; `coeffs[k]` multiplies `x^k`.
pub(crate) fn horner(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(k, log|a_k|)`, so roots of very different sizes all start near their own scale.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let pts: Vec<(f64, f64)> =
        coeffs.iter().enumerate().filter(|(_, c)| c.norm() > 0.0).map(|(k, c)| (k as f64, c.norm().ln())).collect();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut guesses = Vec::with_capacity(n);
    // a zero constant term contributes roots at 0; they are spread tightly around it
    let lowest = pts[0].0 as usize;
    for j in 0..lowest {
        let angle = 2.0 * std::f64::consts::PI * j as f64 / lowest as f64 + 0.4;
        guesses.push(Complex64::from_polar(1e-8, angle));
    }
    for w in hull.windows(2) {
        let (k0, k1) = (w[0].0 as usize, w[1].0 as usize);
        let count = k1 - k0;
        let radius = ((w[0].1 - w[1].1) / count as f64).exp();
        for j in 0..count {
            let angle = 2.0 * std::f64::consts::PI * j as f64 / count as f64 + 0.7 + 0.3 * k0 as f64 / n as f64;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

/// Roots of `sum coeffs[k] x^k`, with multiplicity. Leading coefficient must be non-zero.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    if coeffs[n].norm() == 0.0 {
        return Err(Error::RootFinding("leading coefficient is zero".into()));
    }
    let mut z = initial_guesses(coeffs);
    let mut converged = vec![false; n];
    for _ in 0..MAX_ITER {
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (p, dp) = horner(coeffs, z[i]);
            if p.norm() == 0.0 {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 1e-15 * z[i].norm().max(1e-300) {
                converged[i] = true;
            }
        }
        if converged.iter().all(|&c| c) {
            return Ok(z);
        }
    }
    // slow convergence at clustered roots still leaves usable approximations
    let worst = z.iter().map(|&x| horner(coeffs, x).0.norm() / scale_at(coeffs, x)).fold(0.0, f64::max);
    if worst <= 1e-10 {
        Ok(z)
    } else {
        Err(Error::RootFinding(format!(
            "Aberth iteration stalled after {MAX_ITER} sweeps, relative residual {worst:e}"
        )))
    }
}

/// `sum |a_k| |x|^k`, the natural size of `p(x)` for relative residuals.
fn scale_at(coeffs: &[Complex64], x: Complex64) -> f64 {
    let r = x.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm()).max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sorted_re(mut roots: Vec<Complex64>) -> Vec<f64> {
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        roots.iter().map(|r| r.re).collect()
    }

    #[test]
    fn real_roots() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let roots = polynomial_roots(&[c(6.0), c(-7.0), c(0.0), c(1.0)]).unwrap();
        let re = sorted_re(roots);
        for (got, want) in re.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn widely_separated_roots() {
        // (x - 1e-6)(x - 1e6)
        let roots = polynomial_roots(&[c(1.0), c(-(1e6 + 1e-6)), c(1.0)]).unwrap();
        let re = sorted_re(roots);
        assert!((re[0] - 1e-6).abs() < 1e-18);
        assert!((re[1] - 1e6).abs() < 1e-6);
    }

    #[test]
    fn complex_pair() {
        let roots = polynomial_roots(&[c(1.0), c(0.0), c(1.0)]).unwrap();
        for r in roots {
            assert!((r.norm() - 1.0).abs() < 1e-14 && r.re.abs() < 1e-14);
        }
    }

    #[test]
    fn zero_roots() {
        let roots = polynomial_roots(&[c(0.0), c(0.0), c(-1.0), c(1.0)]).unwrap();
        let re = sorted_re(roots);
        assert!(re[0].abs() < 1e-6 && re[1].abs() < 1e-6 && (re[2] - 1.0).abs() < 1e-14);
    }
}
