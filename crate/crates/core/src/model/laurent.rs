use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Laurent polynomial `sum_i p_i u^i` with exact rational coefficients and finite support.
///
/// Coefficients are stored densely from `lo` to `lo + coeffs.len() - 1`. The first and last
/// stored coefficients are always non-zero; the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    lo: i32,
    coeffs: Vec<BigRational>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        LaurentPolynomial { lo: 0, coeffs: Vec::new() }
    }

    /// Dense constructor; trims zero coefficients at both ends.
    pub fn new(lo: i32, coeffs: Vec<BigRational>) -> Self {
        let first = coeffs.iter().position(|c| !c.is_zero());
        let Some(first) = first else {
            return Self::zero();
        };
        let last = coeffs.iter().rposition(|c| !c.is_zero()).unwrap();
        LaurentPolynomial { lo: lo + first as i32, coeffs: coeffs[first..=last].to_vec() }
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, BigRational)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::new(lo, coeffs)
    }

    /// Convenience constructor from `(exponent, numerator, denominator)` triples.
    pub fn from_ratios(terms: &[(i32, i64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, a, b)| (e, BigRational::new(BigInt::from(a), BigInt::from(b)))))
    }

    /// The monomial `u^e`.
    pub fn monomial(e: i32) -> Self {
        Self::new(e, vec![BigRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a non-zero coefficient (0 for the zero polynomial).
    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Highest exponent with a non-zero coefficient (0 for the zero polynomial).
    pub fn hi(&self) -> i32 {
        if self.is_zero() {
            0
        } else {
            self.lo + self.coeffs.len() as i32 - 1
        }
    }

    pub fn coeff(&self, e: i32) -> BigRational {
        if e < self.lo {
            return BigRational::zero();
        }
        self.coeffs.get((e - self.lo) as usize).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Non-zero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.lo + i as i32, c))
    }

    pub fn support(&self) -> Vec<i32> {
        self.terms().map(|(e, _)| e).collect()
    }

    pub fn has_negative_coeff(&self) -> bool {
        self.coeffs.iter().any(|c| c.is_negative())
    }

    /// Value at `u = 1`, i.e. the sum of the coefficients.
    pub fn at_one(&self) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |acc, c| acc + c)
    }

    /// First derivative at `u = 1`: `sum_i i p_i`.
    pub fn derivative_at_one(&self) -> BigRational {
        self.terms().fold(BigRational::zero(), |acc, (e, c)| acc + c * BigInt::from(e))
    }

    /// Second derivative at `u = 1`: `sum_i i (i - 1) p_i`.
    pub fn second_derivative_at_one(&self) -> BigRational {
        self.terms().fold(BigRational::zero(), |acc, (e, c)| acc + c * BigInt::from(e as i64 * (e as i64 - 1)))
    }

    pub fn eval(&self, u: &BigRational) -> BigRational {
        self.terms().fold(BigRational::zero(), |acc, (e, c)| {
            let pow =
                if e >= 0 { num_traits::pow(u.clone(), e as usize) } else { num_traits::pow(u.recip(), (-e) as usize) };
            acc + c * pow
        })
    }

    /// Terms with exponent `>= 0`.
    pub fn nonnegative_part(&self) -> Self {
        Self::from_terms(self.terms().filter(|(e, _)| *e >= 0).map(|(e, c)| (e, c.clone())))
    }

    /// Terms with exponent `< 0`.
    pub fn negative_part(&self) -> Self {
        Self::from_terms(self.terms().filter(|(e, _)| *e < 0).map(|(e, c)| (e, c.clone())))
    }

    /// Least common multiple of all coefficient denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.coeffs.iter().filter(|c| !c.is_zero()).fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn to_float(&self) -> FloatLaurent {
        FloatLaurent { terms: self.terms().map(|(e, c)| (e, c.to_f64().unwrap_or(f64::NAN))).collect() }
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Renders as `jump:weight` pairs separated by single spaces, the model-file syntax.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}:{}", e, c)?;
        }
        Ok(())
    }
}

/// Double-precision view of a [`LaurentPolynomial`] used by the analytic code.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatLaurent {
    terms: Vec<(i32, f64)>,
}

impl FloatLaurent {
    pub fn terms(&self) -> &[(i32, f64)] {
        &self.terms
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.terms.iter().map(|&(e, c)| c * u.powi(e)).sum()
    }

    pub fn deriv(&self, u: f64) -> f64 {
        self.terms.iter().filter(|&&(e, _)| e != 0).map(|&(e, c)| c * e as f64 * u.powi(e - 1)).sum()
    }

    pub fn deriv2(&self, u: f64) -> f64 {
        self.terms
            .iter()
            .filter(|&&(e, _)| e != 0 && e != 1)
            .map(|&(e, c)| c * (e as f64) * (e as f64 - 1.0) * u.powi(e - 2))
            .sum()
    }

    pub fn eval_complex(&self, u: Complex64) -> Complex64 {
        self.terms.iter().map(|&(e, c)| u.powi(e) * c).sum()
    }
}

/// Greatest common divisor of the support offsets `i - lo`; 1 means aperiodic.
pub fn support_period(p: &LaurentPolynomial) -> u64 {
    let lo = p.lo() as i64;
    p.support().into_iter().map(|e| (e as i64 - lo).unsigned_abs()).fold(0u64, |g, x| g.gcd(&x)).max(1)
}
