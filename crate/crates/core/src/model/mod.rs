//! Weighted step sets and the two-regime boundary model.
//!
//! A walk is driven by `P(u)` at positive altitude and by `P0(u)` at altitude 0. Only the
//! non-negative part `P0>=` of the boundary polynomial survives the boundary; whatever mass
//! `P0` puts on negative jumps is absorbed.

mod file;
mod laurent;

pub use file::{format_model, parse_model, parse_weight};
pub use laurent::{support_period, FloatLaurent, LaurentPolynomial};

use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

/// Reflection when the boundary keeps all its mass, absorption otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Reflection,
    Absorption,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Reflection => "reflection",
            ModelKind::Absorption => "absorption",
        })
    }
}

/// Period of the step set; the walk is aperiodic iff `period == 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Periodicity {
    pub period: u64,
}

impl Periodicity {
    pub fn is_aperiodic(&self) -> bool {
        self.period == 1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub kind: ModelKind,
    pub lukasiewicz: bool,
    pub periodicity: Periodicity,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The pair `(P, P0)` plus the derived `P0>=`. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WalkModel {
    p: LaurentPolynomial,
    p0: LaurentPolynomial,
    p0_geq: LaurentPolynomial,
}

impl WalkModel {
    /// Builds the model without checking the probabilistic invariants; see [`WalkModel::validate`].
    pub fn new(p: LaurentPolynomial, p0: LaurentPolynomial) -> Self {
        let p0_geq = p0.nonnegative_part();
        WalkModel { p, p0, p0_geq }
    }

    /// Builds the model and rejects it unless every invariant holds.
    pub fn checked(p: LaurentPolynomial, p0: LaurentPolynomial) -> Result<Self> {
        let model = Self::new(p, p0);
        model.require_valid()?;
        Ok(model)
    }

    pub fn p(&self) -> &LaurentPolynomial {
        &self.p
    }

    pub fn p0(&self) -> &LaurentPolynomial {
        &self.p0
    }

    pub fn p0_geq(&self) -> &LaurentPolynomial {
        &self.p0_geq
    }

    /// Largest down jump `c` (so `P` starts at `u^-c`).
    pub fn c(&self) -> i32 {
        -self.p.lo()
    }

    /// Largest up jump `d`.
    pub fn d(&self) -> i32 {
        self.p.hi()
    }

    pub fn is_reflection(&self) -> bool {
        self.p0_geq == self.p0
    }

    pub fn is_absorption(&self) -> bool {
        !self.is_reflection()
    }

    pub fn kind(&self) -> ModelKind {
        if self.is_reflection() {
            ModelKind::Reflection
        } else {
            ModelKind::Absorption
        }
    }

    pub fn is_lukasiewicz(&self) -> bool {
        self.c() == 1
    }

    pub fn periodicity(&self) -> Periodicity {
        Periodicity { period: support_period(&self.p) }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let one = BigRational::one();
        if self.p.is_zero() {
            violations.push("P has no steps".to_string());
        }
        if self.p.has_negative_coeff() {
            violations.push("P has a negative weight".to_string());
        }
        if self.p0.has_negative_coeff() {
            violations.push("P0 has a negative weight".to_string());
        }
        if !self.p.is_zero() && self.p.at_one() != one {
            violations.push(format!("P(1) = {} but must be 1", self.p.at_one()));
        }
        if self.p0.at_one() != one {
            violations.push(format!("P0(1) = {} but must be 1", self.p0.at_one()));
        }
        if !self.p.is_zero() && self.c() < 1 {
            violations.push("P needs at least one down jump (c >= 1)".to_string());
        }
        if !self.p.is_zero() && self.d() < 1 {
            violations.push("P needs at least one up jump (d >= 1)".to_string());
        }
        ValidationReport {
            violations,
            kind: self.kind(),
            lukasiewicz: self.is_lukasiewicz(),
            periodicity: self.periodicity(),
        }
    }

    pub fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.ok() {
            Ok(())
        } else {
            Err(Error::InvalidModel(report.violations))
        }
    }

    pub fn require_aperiodic(&self) -> Result<()> {
        let per = self.periodicity();
        if per.is_aperiodic() {
            Ok(())
        } else {
            Err(Error::PeriodicModel { period: per.period })
        }
    }

    pub fn require_lukasiewicz(&self) -> Result<()> {
        if self.is_lukasiewicz() {
            Ok(())
        } else {
            Err(Error::NotLukasiewicz { c: self.c() })
        }
    }

    /// Same interior steps, another boundary polynomial.
    pub fn with_boundary(&self, p0: LaurentPolynomial) -> WalkModel {
        WalkModel::new(self.p.clone(), p0)
    }

    /// Mass lost at each visit of altitude 0, `1 - P0>=(1)`.
    pub fn kill_probability(&self) -> BigRational {
        BigRational::one() - self.p0_geq.at_one()
    }
}

impl fmt::Debug for WalkModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WalkModel {{ P: {}, P0: {} }}", self.p, self.p0)
    }
}

/// Reflection iff `P0` has no negative-exponent term.
pub fn classify_kind(model: &WalkModel) -> Result<ModelKind> {
    model.require_valid()?;
    Ok(model.kind())
}
