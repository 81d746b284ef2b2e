//! Limit laws for the number of returns to zero and the final altitude, and Kolmogorov
//! distances between them and the exact finite-length distributions.

use std::f64::consts::PI;
use std::fmt;

use libm::erf;

use crate::asymptotics::{classify, DriftSign};
use crate::enumerate::{meander_distribution, returns_distribution_by_arches};
use crate::error::{Error, Result};
use crate::kernel::{structural_constants, Criticality};
use crate::model::{ModelKind, WalkModel};

/// Kolmogorov distance accepted by [`fit`].
pub const FIT_TOLERANCE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Statistic {
    /// Number of returns to 0 of a random excursion.
    ReturnsToZero,
    /// Final altitude of a random meander.
    FinalAltitude,
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistic::ReturnsToZero => "returns",
            Statistic::FinalAltitude => "final-alt",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Law {
    /// After normalization: standard normal. `mean_rate` is the predicted `E[X_n] / n`.
    Gaussian { mean_rate: f64, sigma: Option<f64> },
    /// Density `x/s^2 exp(-x^2 / (2 s^2))`.
    Rayleigh { scale: f64 },
    /// Density `sqrt(2/pi)/s exp(-x^2 / (2 s^2))` on `x >= 0`.
    HalfNormal { scale: f64 },
    /// `P(k) = (k+1) lambda^k (1-lambda)^2`.
    NegBin2 { lambda: f64 },
    /// A law on `0, 1, 2, ...`; `None` when no closed form is known.
    Discrete { pmf: Option<Vec<f64>> },
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Law::Gaussian { mean_rate, .. } => write!(f, "gaussian(mean_rate={mean_rate})"),
            Law::Rayleigh { scale } => write!(f, "rayleigh(scale={scale})"),
            Law::HalfNormal { scale } => write!(f, "half-normal(scale={scale})"),
            Law::NegBin2 { lambda } => write!(f, "negbin2(lambda={lambda})"),
            Law::Discrete { pmf: Some(p) } => write!(f, "discrete({} atoms)", p.len()),
            Law::Discrete { pmf: None } => f.write_str("discrete"),
        }
    }
}

fn negbin2_tail(lambda: f64, k: f64) -> f64 {
    // P(X > k) = lambda^{k+1} (k + 2 - (k+1) lambda)
    lambda.powf(k + 1.0) * (k + 2.0 - (k + 1.0) * lambda)
}

impl Law {
    pub fn is_discrete(&self) -> bool {
        matches!(self, Law::NegBin2 { .. } | Law::Discrete { .. })
    }

    /// `P(Y <= y)`.
    pub fn cdf(&self, y: f64) -> f64 {
        match self {
            Law::Gaussian { .. } => 0.5 * (1.0 + erf(y / std::f64::consts::SQRT_2)),
            Law::Rayleigh { scale } => {
                if y <= 0.0 {
                    0.0
                } else {
                    -(-(y * y) / (2.0 * scale * scale)).exp_m1()
                }
            }
            Law::HalfNormal { scale } => {
                if y <= 0.0 {
                    0.0
                } else {
                    erf(y / (scale * std::f64::consts::SQRT_2))
                }
            }
            Law::NegBin2 { lambda } => {
                if y < 0.0 {
                    0.0
                } else {
                    1.0 - negbin2_tail(*lambda, y.floor())
                }
            }
            Law::Discrete { pmf } => {
                let pmf = pmf.as_deref().unwrap_or(&[]);
                if y < 0.0 {
                    return 0.0;
                }
                let k = (y.floor() as usize).min(pmf.len().saturating_sub(1));
                pmf.iter().take(k + 1).sum::<f64>().min(1.0)
            }
        }
    }

    /// `P(Y < y)`; differs from [`Law::cdf`] only at atoms.
    pub fn cdf_left(&self, y: f64) -> f64 {
        if self.is_discrete() && y.fract() == 0.0 {
            self.cdf(y - 1.0)
        } else {
            self.cdf(y)
        }
    }

    /// Density, or point mass for discrete laws.
    pub fn density(&self, y: f64) -> f64 {
        match self {
            Law::Gaussian { .. } => (-y * y / 2.0).exp() / (2.0 * PI).sqrt(),
            Law::Rayleigh { scale } => {
                let s2 = scale * scale;
                if y < 0.0 {
                    0.0
                } else {
                    y / s2 * (-y * y / (2.0 * s2)).exp()
                }
            }
            Law::HalfNormal { scale } => {
                if y < 0.0 {
                    0.0
                } else {
                    (2.0 / PI).sqrt() / scale * (-y * y / (2.0 * scale * scale)).exp()
                }
            }
            Law::NegBin2 { lambda } => {
                if y < 0.0 || y.fract() != 0.0 {
                    0.0
                } else {
                    (y + 1.0) * lambda.powf(y) * (1.0 - lambda) * (1.0 - lambda)
                }
            }
            Law::Discrete { pmf } => {
                if y < 0.0 || y.fract() != 0.0 {
                    return 0.0;
                }
                pmf.as_ref().and_then(|p| p.get(y as usize).copied()).unwrap_or(0.0)
            }
        }
    }

    /// Atoms carrying all but `1e-15` of the mass, for discrete laws.
    fn atoms(&self) -> Vec<f64> {
        match self {
            Law::NegBin2 { lambda } => {
                let mut k = 0.0;
                let mut out = Vec::new();
                while negbin2_tail(*lambda, k - 1.0) > 1e-15 && k < 1e6 {
                    out.push(k);
                    k += 1.0;
                }
                out
            }
            Law::Discrete { pmf: Some(p) } => (0..p.len()).map(|k| k as f64).collect(),
            _ => Vec::new(),
        }
    }

    fn check(&self) -> Result<()> {
        let bad = match self {
            Law::Rayleigh { scale } | Law::HalfNormal { scale } => !(scale.is_finite() && *scale > 0.0),
            Law::NegBin2 { lambda } => !(*lambda > 0.0 && *lambda < 1.0),
            Law::Discrete { pmf } => pmf.is_none(),
            Law::Gaussian { .. } => false,
        };
        if bad {
            Err(Error::DegenerateLaw(self.to_string()))
        } else {
            Ok(())
        }
    }
}

/// How `X_n` is mapped to the variable the law describes.
#[derive(Clone, Debug, PartialEq)]
pub enum Normalization {
    /// `(X_n - offset - rate n) / (scale n^power)`.
    Affine { offset: f64, rate: f64, scale: f64, power: f64 },
    /// `(X_n - E[X_n]) / sd(X_n)`, with both moments taken from the exact distribution.
    Standardized,
}

impl Normalization {
    pub const IDENTITY: Normalization = Normalization::Affine { offset: 0.0, rate: 0.0, scale: 1.0, power: 0.0 };

    /// `(a, b)` with `y = (x - a) / b`.
    fn coefficients(&self, n: usize, moments: Moments) -> (f64, f64) {
        let nf = n as f64;
        match *self {
            Normalization::Affine { offset, rate, scale, power } => (offset + rate * nf, scale * nf.powf(power)),
            Normalization::Standardized => (moments.mean, moments.variance.sqrt()),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Normalization::Affine { offset, rate, scale, power } => {
                write!(f, "(X - {offset} - {rate} n) / ({scale} n^{power})")
            }
            Normalization::Standardized => f.write_str("(X - E[X]) / sd(X)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitLawSpec {
    pub law: Law,
    pub normalization: Normalization,
    /// Which prediction this is, e.g. `returns/subcritical`.
    pub case: &'static str,
}

fn prepare(model: &WalkModel) -> Result<()> {
    model.require_valid()?;
    model.require_aperiodic()?;
    model.require_lukasiewicz()
}

/// The limit law of the number of returns to zero of a random excursion.
///
/// For the critical case the normalization uses `c = 2` in `kappa (X_n - 1) / sqrt(c n)`;
/// [`calibrate_rayleigh_constant`] measures `c` from the exact distribution.
pub fn returns_law(model: &WalkModel) -> Result<LimitLawSpec> {
    prepare(model)?;
    let sc = structural_constants(model)?;
    Ok(match sc.criticality {
        Criticality::Supercritical => LimitLawSpec {
            law: Law::Gaussian {
                mean_rate: sc.gamma.ok_or(Error::NoRho1)?,
                sigma: Some(printed_sigma(
                    sc.alpha2.ok_or(Error::NoRho1)?,
                    sc.rho1.ok_or(Error::NoRho1)?,
                    sc.gamma.ok_or(Error::NoRho1)?,
                )),
            },
            normalization: Normalization::Standardized,
            case: "returns/supercritical",
        },
        Criticality::Critical => LimitLawSpec {
            law: Law::Rayleigh { scale: 1.0 },
            normalization: Normalization::Affine { offset: 1.0, rate: 0.0, scale: 2f64.sqrt() / sc.kappa, power: 0.5 },
            case: "returns/critical",
        },
        Criticality::Subcritical => LimitLawSpec {
            law: Law::NegBin2 { lambda: sc.lambda },
            normalization: Normalization::Affine { offset: 1.0, rate: 0.0, scale: 1.0, power: 0.0 },
            case: "returns/subcritical",
        },
    })
}

/// `alpha2 (rho1 gamma)^3 - gamma + gamma^2 (rho1 + 2) - 2 gamma^3`, as printed.
pub fn printed_sigma(alpha2: f64, rho1: f64, gamma: f64) -> f64 {
    alpha2 * (rho1 * gamma).powi(3) - gamma + gamma * gamma * (rho1 + 2.0) - 2.0 * gamma.powi(3)
}

/// `alpha2 (rho1 gamma)^3 - gamma + 3 gamma^2 - 2 gamma^3`: the variance rate obtained
/// from the pole `rho1(v)` of `1 / (1 - v z P0>=(u1(z)))`.
pub fn derived_variance_rate(alpha2: f64, rho1: f64, gamma: f64) -> f64 {
    alpha2 * (rho1 * gamma).powi(3) - gamma + 3.0 * gamma * gamma - 2.0 * gamma.powi(3)
}

/// The limit law of the final altitude of a random meander.
///
/// Scales of the half-normal and Rayleigh laws are set so that their means match the
/// expected final altitude.
pub fn final_altitude_law(model: &WalkModel) -> Result<LimitLawSpec> {
    prepare(model)?;
    let class = classify(model)?;
    let sc = structural_constants(model)?;
    let sqrt_n = |law, case| LimitLawSpec {
        law,
        normalization: Normalization::Affine { offset: 0.0, rate: 0.0, scale: 1.0, power: 0.5 },
        case,
    };
    Ok(match (class.kind, class.drift) {
        (_, DriftSign::Positive) => LimitLawSpec {
            law: Law::Gaussian { mean_rate: sc.delta, sigma: None },
            normalization: Normalization::Standardized,
            case: "final-altitude/positive-drift",
        },
        (ModelKind::Reflection, DriftSign::Zero) => {
            sqrt_n(Law::HalfNormal { scale: sc.p_second.sqrt() }, "final-altitude/reflection/zero-drift")
        }
        (ModelKind::Absorption, DriftSign::Zero) => {
            sqrt_n(Law::Rayleigh { scale: sc.p_second.sqrt() }, "final-altitude/absorption/zero-drift")
        }
        (_, DriftSign::Negative) => LimitLawSpec {
            law: Law::Discrete { pmf: None },
            normalization: Normalization::IDENTITY,
            case: "final-altitude/negative-drift",
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// `(value, probability)` pairs of `X_n`, probabilities summing to 1.
pub fn exact_distribution(model: &WalkModel, statistic: Statistic, n: usize) -> Result<Vec<(usize, f64)>> {
    model.require_valid()?;
    match statistic {
        Statistic::ReturnsToZero => {
            let d = returns_distribution_by_arches::<f64>(model, n)?;
            if (d.total() - 1.0).abs() > 1e-6 {
                return Err(Error::Underflow { n });
            }
            Ok(d.prob.iter().copied().enumerate().filter(|(_, p)| *p > 0.0).collect())
        }
        Statistic::FinalAltitude => {
            let d = meander_distribution::<f64>(model, n);
            let total = d.total();
            if total <= 0.0 {
                return Err(Error::NoSurvivors { n });
            }
            Ok(d.iter().filter(|(_, m)| **m > 0.0).map(|(k, m)| (k, m / total)).collect())
        }
    }
}

fn moments_of(dist: &[(usize, f64)]) -> Moments {
    let mean: f64 = dist.iter().map(|(k, p)| *k as f64 * p).sum();
    let variance = dist.iter().map(|(k, p)| (*k as f64 - mean).powi(2) * p).sum();
    Moments { mean, variance }
}

/// Exact mean and variance of `X_n`.
pub fn moment_summary(model: &WalkModel, statistic: Statistic, n: usize) -> Result<Moments> {
    Ok(moments_of(&exact_distribution(model, statistic, n)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitReport {
    pub n: usize,
    /// Kolmogorov distance, in `[0, 1]`.
    pub sup_distance: f64,
    /// Normalized value where the distance is attained.
    pub at: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Kolmogorov distance between the normalized exact distribution of `X_n` and `spec.law`.
pub fn fit(model: &WalkModel, statistic: Statistic, n: usize, spec: &LimitLawSpec) -> Result<FitReport> {
    prepare(model)?;
    spec.law.check()?;
    let dist = exact_distribution(model, statistic, n)?;
    let (sup_distance, at) = kolmogorov(&dist, n, spec)?;
    Ok(FitReport { n, sup_distance, at, tolerance: FIT_TOLERANCE, passed: sup_distance <= FIT_TOLERANCE })
}

/// [`fit`] at several lengths, computed concurrently, reported in the order given.
pub fn fit_sequence(
    model: &WalkModel,
    statistic: Statistic,
    ns: &[usize],
    spec: &LimitLawSpec,
) -> Result<Vec<FitReport>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = ns.iter().map(|&n| s.spawn(move || fit(model, statistic, n, spec))).collect();
        handles.into_iter().map(|h| h.join().expect("fit worker panicked")).collect()
    })
}

fn normalized(dist: &[(usize, f64)], n: usize, norm: &Normalization) -> Result<(Vec<(f64, f64)>, f64)> {
    let (a, b) = norm.coefficients(n, moments_of(dist));
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::DegenerateLaw(format!("normalization {norm} has scale {b} at n = {n}")));
    }
    Ok((dist.iter().map(|(k, p)| ((*k as f64 - a) / b, *p)).collect(), b))
}

fn kolmogorov(dist: &[(usize, f64)], n: usize, spec: &LimitLawSpec) -> Result<(f64, f64)> {
    let (points, _) = normalized(dist, n, &spec.normalization)?;
    let mut cumulative = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    for (_, p) in &points {
        acc += p;
        cumulative.push(acc);
    }
    let empirical = |y: f64, strict: bool| -> f64 {
        let idx = points.partition_point(|(x, _)| if strict { *x < y } else { *x <= y });
        if idx == 0 {
            0.0
        } else {
            cumulative[idx - 1].min(1.0)
        }
    };
    let mut best = (0.0, f64::NAN);
    let candidates = points.iter().map(|(y, _)| *y).chain(spec.law.atoms());
    for y in candidates {
        let d = (empirical(y, false) - spec.law.cdf(y)).abs().max((empirical(y, true) - spec.law.cdf_left(y)).abs());
        if d > best.0 {
            best = (d, y);
        }
    }
    Ok(best)
}

/// One row of plot data: the normalized value with the exact and limiting CDF and density.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotRow {
    pub x: f64,
    pub empirical_cdf: f64,
    pub law_cdf: f64,
    pub empirical_density: f64,
    pub law_density: f64,
}

/// Plot data over the support of `X_n`. Exact masses are divided by the lattice spacing
/// so they compare with a continuous density.
pub fn plot_data(model: &WalkModel, statistic: Statistic, n: usize, spec: &LimitLawSpec) -> Result<Vec<PlotRow>> {
    prepare(model)?;
    spec.law.check()?;
    let dist = exact_distribution(model, statistic, n)?;
    let (points, b) = normalized(&dist, n, &spec.normalization)?;
    let spacing = if spec.law.is_discrete() { 1.0 } else { 1.0 / b };
    let mut acc = 0.0;
    Ok(points
        .iter()
        .map(|&(x, p)| {
            acc += p;
            PlotRow {
                x,
                empirical_cdf: acc.min(1.0),
                law_cdf: spec.law.cdf(x),
                empirical_density: p / spacing,
                law_density: spec.law.density(x),
            }
        })
        .collect())
}

/// `c` such that `kappa (X_n - 1) / sqrt(c n)` has the mean `sqrt(pi/2)` of the standard
/// Rayleigh law.
pub fn calibrate_rayleigh_constant(model: &WalkModel, n: usize) -> Result<f64> {
    prepare(model)?;
    let sc = structural_constants(model)?;
    let m = moment_summary(model, Statistic::ReturnsToZero, n)?;
    let shifted = sc.kappa * (m.mean - 1.0);
    Ok(2.0 * shifted * shifted / (PI * n as f64))
}

/// Empirical check of the supercritical variance expression.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaCheck {
    pub n: usize,
    /// `Var(X_n) / n` from the exact distribution.
    pub empirical_variance_rate: f64,
    pub printed: f64,
    pub derived: f64,
}

impl SigmaCheck {
    /// Relative errors of the printed value read as a standard deviation and as a variance,
    /// then of the derived variance.
    pub fn relative_errors(&self) -> (f64, f64, f64) {
        let v = self.empirical_variance_rate;
        let rel = |x: f64| (x / v - 1.0).abs();
        (rel(self.printed * self.printed), rel(self.printed), rel(self.derived))
    }
}

pub fn sigma_check(model: &WalkModel, n: usize) -> Result<SigmaCheck> {
    prepare(model)?;
    let sc = structural_constants(model)?;
    if sc.criticality != Criticality::Supercritical {
        return Err(Error::InconsistentCase(format!("{} model has no Gaussian returns law", sc.criticality)));
    }
    let (alpha2, rho1, gamma) = (sc.alpha2.unwrap(), sc.rho1.unwrap(), sc.gamma.unwrap());
    let m = moment_summary(model, Statistic::ReturnsToZero, n)?;
    Ok(SigmaCheck {
        n,
        empirical_variance_rate: m.variance / n as f64,
        printed: printed_sigma(alpha2, rho1, gamma),
        derived: derived_variance_rate(alpha2, rho1, gamma),
    })
}
