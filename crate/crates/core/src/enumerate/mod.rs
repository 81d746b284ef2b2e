//! Exact finite-length statistics by step-by-step recurrence.
//!
//! These recurrences are the ground truth every analytic formula in the crate is checked
//! against. All functions are generic over [`Arith`]: use [`BigRational`] for exact
//! results and `f64` for long walks.
//!
//! [`BigRational`]: num_rational::BigRational

mod brute;
mod paths;
mod returns;

pub use brute::{brute_force, for_each_path, BruteForce, EnumeratedPath, BRUTE_FORCE_LIMIT};
pub use paths::{bridges, path_label, path_probability, table2, BoundaryRule, Table2, Table2Row};
pub use returns::{
    mean_returns_series, returns_distribution_by_arches, returns_to_zero_distribution, ReturnsDistribution,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::arith::{Arith, Semiring};
use crate::error::{Error, Result};
use crate::model::{LaurentPolynomial, WalkModel};

/// Mass of meanders after `n` steps, indexed by altitude (the coefficients of `f_n(u)`).
#[derive(Clone, Debug, PartialEq)]
pub struct AltitudeDistribution<T> {
    n: usize,
    mass: Vec<T>,
}

impl<T: Arith> AltitudeDistribution<T> {
    /// The empty walk: all mass at altitude 0.
    pub fn initial() -> Self {
        AltitudeDistribution { n: 0, mass: vec![T::one()] }
    }

    pub fn from_masses(n: usize, mut mass: Vec<T>) -> Self {
        while mass.len() > 1 && Semiring::is_zero(mass.last().unwrap()) {
            mass.pop();
        }
        AltitudeDistribution { n, mass }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mass(&self, altitude: usize) -> T {
        self.mass.get(altitude).cloned().unwrap_or_else(T::zero)
    }

    /// Masses indexed by altitude, up to the highest non-zero one.
    pub fn masses(&self) -> &[T] {
        &self.mass
    }

    pub fn total(&self) -> T {
        self.mass.iter().fold(T::zero(), |acc, m| acc.add(m))
    }

    /// `sum_k k * mass[k]`
    pub fn first_moment(&self) -> T {
        self.mass.iter().enumerate().fold(T::zero(), |acc, (k, m)| acc.add(&m.mul_small(k as u64)))
    }

    /// Non-zero entries as `(altitude, mass)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> + '_ {
        self.mass.iter().enumerate().filter(|(_, m)| !Semiring::is_zero(*m))
    }
}

/// Step weights in raw units (see [`Arith::raw_weight`]).
pub(crate) struct RawWeights<R> {
    pub p: Vec<(i32, R)>,
    /// Only the non-negative part of `P0`: negative boundary jumps are absorbed.
    pub p0: Vec<(i32, R)>,
    pub denom: BigInt,
}

impl<R: Semiring> RawWeights<R> {
    pub fn new<T: Arith<Raw = R>>(model: &WalkModel) -> Self {
        let denom = model.p().common_denominator().lcm(&model.p0().common_denominator());
        let conv =
            |poly: &LaurentPolynomial| poly.terms().map(|(e, c)| (e, T::raw_weight(c, &denom))).collect::<Vec<_>>();
        RawWeights { p: conv(model.p()), p0: conv(model.p0_geq()), denom }
    }

    pub fn max_up(&self) -> usize {
        self.p.iter().chain(&self.p0).map(|(e, _)| *e).max().unwrap_or(0).max(0) as usize
    }
}

/// `f_{n+1} = {u>=0}[P {u>0} f_n + P0 {u^0} f_n]` on raw accumulators.
pub(crate) fn raw_meander_step<R: Semiring>(w: &RawWeights<R>, cur: &[R]) -> Vec<R> {
    let mut next = vec![R::zero(); cur.len() + w.max_up()];
    if let Some(at_zero) = cur.first() {
        if !at_zero.is_zero() {
            for (e, wt) in &w.p0 {
                next[*e as usize].mul_add(at_zero, wt);
            }
        }
    }
    for (alt, m) in cur.iter().enumerate().skip(1) {
        if m.is_zero() {
            continue;
        }
        for (e, wt) in &w.p {
            let target = alt as i64 + *e as i64;
            if target >= 0 {
                next[target as usize].mul_add(m, wt);
            }
        }
    }
    while next.len() > 1 && next.last().unwrap().is_zero() {
        next.pop();
    }
    next
}

/// Applies one step of the boundary model to `dist`; negative altitudes are dropped.
pub fn step<T: Arith>(model: &WalkModel, dist: &AltitudeDistribution<T>) -> AltitudeDistribution<T> {
    let conv = |poly: &LaurentPolynomial| poly.terms().map(|(e, c)| (e, T::from_rational(c))).collect::<Vec<_>>();
    let w = RawWeights { p: conv(model.p()), p0: conv(model.p0_geq()), denom: BigInt::one() };
    AltitudeDistribution::from_masses(dist.n + 1, raw_meander_step(&w, &dist.mass))
}

/// Per-length aggregates of the meander recurrence, for `n = 0..=n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanderSeries<T> {
    /// `e_n`, mass at altitude 0.
    pub excursions: Vec<T>,
    /// `m_n`, total surviving mass.
    pub meanders: Vec<T>,
    /// `sum_k k F_{n,k}`.
    pub altitude_sums: Vec<T>,
    /// The full distribution at `n_max`.
    pub last: AltitudeDistribution<T>,
}

pub fn meander_series<T: Arith>(model: &WalkModel, n_max: usize) -> MeanderSeries<T> {
    let w = RawWeights::new::<T>(model);
    let mut cur = vec![T::raw_one()];
    let mut series = MeanderSeries {
        excursions: Vec::with_capacity(n_max + 1),
        meanders: Vec::with_capacity(n_max + 1),
        altitude_sums: Vec::with_capacity(n_max + 1),
        last: AltitudeDistribution::initial(),
    };
    for n in 0..=n_max {
        if n > 0 {
            cur = raw_meander_step(&w, &cur);
        }
        let mut total = <T::Raw as Semiring>::zero();
        let mut moment = <T::Raw as Semiring>::zero();
        for (k, m) in cur.iter().enumerate() {
            total.add_assign(m);
            if k > 0 {
                moment.add_assign(&m.mul_small(k as u64));
            }
        }
        series.excursions.push(T::from_raw(&cur[0], n, &w.denom));
        series.meanders.push(T::from_raw(&total, n, &w.denom));
        series.altitude_sums.push(T::from_raw(&moment, n, &w.denom));
    }
    series.last =
        AltitudeDistribution::from_masses(n_max, cur.iter().map(|r| T::from_raw(r, n_max, &w.denom)).collect());
    series
}

/// `[z^n] F(z, u)` as a distribution over altitudes.
pub fn meander_distribution<T: Arith>(model: &WalkModel, n: usize) -> AltitudeDistribution<T> {
    let w = RawWeights::new::<T>(model);
    let mut cur = vec![T::raw_one()];
    for _ in 0..n {
        cur = raw_meander_step(&w, &cur);
    }
    AltitudeDistribution::from_masses(n, cur.iter().map(|r| T::from_raw(r, n, &w.denom)).collect())
}

/// `e_n`: probability that the first `n` steps form an excursion.
pub fn excursion_mass<T: Arith>(model: &WalkModel, n: usize) -> T {
    meander_distribution::<T>(model, n).mass(0)
}

/// `m_n`: surviving mass after `n` steps (1 in the reflection model).
pub fn meander_mass<T: Arith>(model: &WalkModel, n: usize) -> T {
    meander_distribution::<T>(model, n).total()
}

/// Unconstrained walk on the integers driven by `P` alone. Returns `(walk total, bridge mass)`.
pub fn bridge_and_walk_mass<T: Arith>(model: &WalkModel, n: usize) -> (T, T) {
    let (walks, bridges) = walk_series::<T>(model, n);
    (walks[n].clone(), bridges[n].clone())
}

/// Walk totals and bridge masses for every length `0..=n_max`.
pub fn walk_series<T: Arith>(model: &WalkModel, n_max: usize) -> (Vec<T>, Vec<T>) {
    let w = RawWeights::new::<T>(model);
    let c = model.c().max(0) as usize;
    let d = model.d().max(0) as usize;
    // index = altitude + c * n
    let mut cur = vec![T::raw_one()];
    let mut walks = Vec::with_capacity(n_max + 1);
    let mut bridges = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            let mut next = vec![<T::Raw as Semiring>::zero(); cur.len() + c + d];
            for (i, m) in cur.iter().enumerate() {
                if m.is_zero() {
                    continue;
                }
                for (e, wt) in &w.p {
                    next[(i as i64 + c as i64 + *e as i64) as usize].mul_add(m, wt);
                }
            }
            cur = next;
        }
        let mut total = <T::Raw as Semiring>::zero();
        for m in &cur {
            total.add_assign(m);
        }
        walks.push(T::from_raw(&total, n, &w.denom));
        bridges.push(T::from_raw(&cur[c * n], n, &w.denom));
    }
    (walks, bridges)
}

/// `a_n` for `n = 0..=n_max` (`a_0 = 0`): excursions touching 0 only at both ends.
pub fn arch_masses<T: Arith>(model: &WalkModel, n_max: usize) -> Vec<T> {
    let w = RawWeights::new::<T>(model);
    let mut arches = vec![T::zero(); n_max + 1];
    if n_max == 0 {
        return arches;
    }
    // First step from 0: the flat boundary step closes an arch immediately.
    let mut cur = vec![<T::Raw as Semiring>::zero(); w.max_up() + 1];
    for (e, wt) in &w.p0 {
        if *e == 0 {
            arches[1] = T::from_raw(wt, 1, &w.denom);
        } else {
            cur[*e as usize] = wt.clone();
        }
    }
    for n in 2..=n_max {
        let mut next = vec![<T::Raw as Semiring>::zero(); cur.len() + w.max_up()];
        for (alt, m) in cur.iter().enumerate().skip(1) {
            if m.is_zero() {
                continue;
            }
            for (e, wt) in &w.p {
                let target = alt as i64 + *e as i64;
                if target >= 0 {
                    next[target as usize].mul_add(m, wt);
                }
            }
        }
        arches[n] = T::from_raw(&next[0], n, &w.denom);
        next[0] = <T::Raw as Semiring>::zero();
        while next.len() > 1 && next.last().unwrap().is_zero() {
            next.pop();
        }
        cur = next;
    }
    arches
}

pub fn arch_mass<T: Arith>(model: &WalkModel, n: usize) -> T {
    arch_masses::<T>(model, n)[n].clone()
}

/// `E[X_n]` for the final altitude `X_n` of a surviving meander.
pub fn final_altitude_expectation<T: Arith>(model: &WalkModel, n: usize) -> Result<T> {
    let dist = meander_distribution::<T>(model, n);
    let total = dist.total();
    if Semiring::is_zero(&total) {
        return Err(Error::NoSurvivors { n });
    }
    Ok(dist.first_moment().div(&total))
}
