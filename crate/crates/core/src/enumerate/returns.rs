use crate::arith::{Arith, Semiring};
use crate::error::{Error, Result};
use crate::model::WalkModel;

use super::{arch_masses, excursion_mass, RawWeights};

/// Law of the number of returns to zero of a random excursion of length `n`.
///
/// The origin is not a return; every later visit of altitude 0 is.
#[derive(Clone, Debug, PartialEq)]
pub struct ReturnsDistribution<T> {
    pub n: usize,
    /// `prob[k]` = probability of exactly `k` returns.
    pub prob: Vec<T>,
}

impl<T: Arith> ReturnsDistribution<T> {
    pub fn get(&self, k: usize) -> T {
        self.prob.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn total(&self) -> T {
        self.prob.iter().fold(T::zero(), |acc, p| acc.add(p))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> + '_ {
        self.prob.iter().enumerate().filter(|(_, p)| !Semiring::is_zero(*p))
    }
}

/// Recurrence on `(altitude, returns so far)`, conditioned on ending at 0.
pub fn returns_to_zero_distribution<T: Arith>(model: &WalkModel, n: usize) -> Result<ReturnsDistribution<T>> {
    if n == 0 {
        return Ok(ReturnsDistribution { n, prob: vec![T::one()] });
    }
    let w = RawWeights::new::<T>(model);
    let c = model.c().max(1) as usize;
    // states[r][alt]
    let mut states: Vec<Vec<T::Raw>> = vec![vec![T::raw_one()]];
    for t in 1..=n {
        // altitudes above c * (n - t) cannot come back to 0 in time
        let cap = c * (n - t);
        let mut next: Vec<Vec<T::Raw>> = vec![Vec::new(); states.len() + 1];
        for (r, row) in states.iter().enumerate() {
            for (alt, m) in row.iter().enumerate() {
                if m.is_zero() {
                    continue;
                }
                let jumps = if alt == 0 { &w.p0 } else { &w.p };
                for (e, wt) in jumps {
                    let target = alt as i64 + *e as i64;
                    if target < 0 || target as usize > cap {
                        continue;
                    }
                    let target = target as usize;
                    let slot = if target == 0 { &mut next[r + 1] } else { &mut next[r] };
                    if slot.len() <= target {
                        slot.resize(target + 1, <T::Raw as Semiring>::zero());
                    }
                    slot[target].mul_add(m, wt);
                }
            }
        }
        while next.len() > 1 && next.last().unwrap().is_empty() {
            next.pop();
        }
        states = next;
    }
    let at_zero: Vec<T> = states
        .iter()
        .map(|row| match row.first() {
            Some(m) => T::from_raw(m, n, &w.denom),
            None => T::zero(),
        })
        .collect();
    let total = at_zero.iter().fold(T::zero(), |acc, m| acc.add(m));
    if Semiring::is_zero(&total) {
        return Err(Error::NoExcursions { n });
    }
    let prob = at_zero.iter().map(|m| m.div(&total)).collect();
    Ok(ReturnsDistribution { n, prob })
}

/// Same law from the arch decomposition: `P(k returns) = [z^n] A(z)^k / e_n`.
///
/// Each power of the arch series costs `O(n^2)`; the loop stops once the remaining
/// probability is exhausted, which makes this the practical route for long excursions.
pub fn returns_distribution_by_arches<T: Arith>(model: &WalkModel, n: usize) -> Result<ReturnsDistribution<T>> {
    let e_n: T = excursion_mass(model, n);
    if Semiring::is_zero(&e_n) {
        return Err(Error::NoExcursions { n });
    }
    if n == 0 {
        return Ok(ReturnsDistribution { n, prob: vec![T::one()] });
    }
    let arches = arch_masses::<T>(model, n);
    let mut prob = vec![T::zero()];
    let mut power = arches.clone();
    let mut cumulative = T::zero();
    let mut prev = T::zero();
    for k in 1..=n {
        if k > 1 {
            let mut next = vec![T::zero(); n + 1];
            for m in k..=n {
                let mut acc = T::zero();
                for j in 1..=m - (k - 1) {
                    acc.mul_add(&arches[j], &power[m - j]);
                }
                next[m] = acc;
            }
            power = next;
        }
        let term = power[n].div(&e_n);
        cumulative = cumulative.add(&term);
        prob.push(term.clone());
        let remaining = T::one().sub(&cumulative);
        if T::tail_exhausted(&remaining, &term, &prev, &T::one()) {
            break;
        }
        prev = term;
    }
    while prob.len() > 1 && Semiring::is_zero(prob.last().unwrap()) {
        prob.pop();
    }
    Ok(ReturnsDistribution { n, prob })
}

/// Expected number of returns of a random excursion for every `n <= n_max`, as
/// `[z^n] A E^2 / e_n` (the derivative of `1 / (1 - v A)` at `v = 1`). `None` where `e_n = 0`.
pub fn mean_returns_series<T: Arith>(model: &WalkModel, n_max: usize) -> Vec<Option<T>> {
    let e = super::meander_series::<T>(model, n_max).excursions;
    let a = arch_masses::<T>(model, n_max);
    let conv = |x: &[T], y: &[T]| -> Vec<T> {
        (0..=n_max)
            .map(|m| {
                let mut acc = T::zero();
                for j in 0..=m {
                    acc.mul_add(&x[j], &y[m - j]);
                }
                acc
            })
            .collect()
    };
    let ae2 = conv(&a, &conv(&e, &e));
    e.iter().zip(&ae2).map(|(en, s)| (!Semiring::is_zero(en)).then(|| s.div(en))).collect()
}
