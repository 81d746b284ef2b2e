use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::WalkModel;

use super::AltitudeDistribution;

/// Largest length [`brute_force`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 12;

/// One surviving step sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct EnumeratedPath {
    pub jumps: Vec<i32>,
    pub weight: BigRational,
    pub altitude: usize,
    /// Visits of altitude 0 after the origin.
    pub returns: usize,
    /// Whether the path touches 0 only at its endpoints (meaningful for excursions).
    pub is_arch: bool,
}

/// Aggregates of a full enumeration, computed path by path.
#[derive(Clone, Debug, PartialEq)]
pub struct BruteForce {
    pub n: usize,
    /// Number of surviving step sequences with non-zero weight.
    pub paths: usize,
    pub meanders: AltitudeDistribution<BigRational>,
    pub excursion_mass: BigRational,
    pub meander_mass: BigRational,
    pub arch_mass: BigRational,
    /// Unnormalized excursion mass by number of returns.
    pub returns_mass: Vec<BigRational>,
    /// `sum` of altitude times weight over surviving paths.
    pub altitude_sum: BigRational,
    /// Boundary-free walks driven by `P`: total mass and mass ending at 0.
    pub walk_total: BigRational,
    pub bridge_mass: BigRational,
}

/// Calls `visit` on every surviving path of length `n` under the boundary model.
pub fn for_each_path(model: &WalkModel, n: usize, mut visit: impl FnMut(&EnumeratedPath)) -> Result<()> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    let p: Vec<(i32, BigRational)> = model.p().terms().map(|(e, c)| (e, c.clone())).collect();
    let p0: Vec<(i32, BigRational)> = model.p0().terms().map(|(e, c)| (e, c.clone())).collect();
    let mut path = EnumeratedPath {
        jumps: Vec::with_capacity(n),
        weight: BigRational::one(),
        altitude: 0,
        returns: 0,
        is_arch: true,
    };
    descend(&p, &p0, n, &mut path, &mut visit);
    Ok(())
}

fn descend(
    p: &[(i32, BigRational)],
    p0: &[(i32, BigRational)],
    n: usize,
    path: &mut EnumeratedPath,
    visit: &mut impl FnMut(&EnumeratedPath),
) {
    if path.jumps.len() == n {
        visit(path);
        return;
    }
    let jumps = if path.altitude == 0 { p0 } else { p };
    for (e, w) in jumps {
        let target = path.altitude as i64 + *e as i64;
        if target < 0 {
            continue;
        }
        let saved = (path.weight.clone(), path.altitude, path.returns, path.is_arch);
        path.weight = &path.weight * w;
        path.altitude = target as usize;
        if target == 0 {
            path.returns += 1;
            if path.jumps.len() + 1 < n {
                path.is_arch = false;
            }
        }
        path.jumps.push(*e);
        descend(p, p0, n, path, visit);
        path.jumps.pop();
        (path.weight, path.altitude, path.returns, path.is_arch) = saved;
    }
}

/// Enumerates every step sequence of length `n <= 12` with exact weights.
///
/// Shares no code with the recurrences, so its aggregates serve as their oracle.
pub fn brute_force(model: &WalkModel, n: usize) -> Result<BruteForce> {
    let mut paths = 0;
    let mut by_altitude: Vec<BigRational> = vec![BigRational::zero()];
    let mut arch_mass = BigRational::zero();
    let mut returns_mass: Vec<BigRational> = vec![BigRational::zero()];
    let mut altitude_sum = BigRational::zero();
    for_each_path(model, n, |path| {
        paths += 1;
        if by_altitude.len() <= path.altitude {
            by_altitude.resize(path.altitude + 1, BigRational::zero());
        }
        by_altitude[path.altitude] += &path.weight;
        altitude_sum += &path.weight * BigRational::from_integer(path.altitude.into());
        if path.altitude == 0 {
            if n > 0 && path.is_arch {
                arch_mass += &path.weight;
            }
            if returns_mass.len() <= path.returns {
                returns_mass.resize(path.returns + 1, BigRational::zero());
            }
            returns_mass[path.returns] += &path.weight;
        }
    })?;
    let meanders = AltitudeDistribution::from_masses(n, by_altitude);
    let (walk_total, bridge_mass) = free_walks(model, n);
    Ok(BruteForce {
        n,
        paths,
        excursion_mass: meanders.mass(0),
        meander_mass: meanders.total(),
        meanders,
        arch_mass,
        returns_mass,
        altitude_sum,
        walk_total,
        bridge_mass,
    })
}

fn free_walks(model: &WalkModel, n: usize) -> (BigRational, BigRational) {
    fn go(
        p: &[(i32, BigRational)],
        left: usize,
        altitude: i64,
        weight: &BigRational,
        total: &mut BigRational,
        bridges: &mut BigRational,
    ) {
        if left == 0 {
            *total += weight;
            if altitude == 0 {
                *bridges += weight;
            }
            return;
        }
        for (e, w) in p {
            go(p, left - 1, altitude + *e as i64, &(weight * w), total, bridges);
        }
    }
    let p: Vec<(i32, BigRational)> = model.p().terms().map(|(e, c)| (e, c.clone())).collect();
    let mut total = BigRational::zero();
    let mut bridges = BigRational::zero();
    go(&p, n, 0, &BigRational::one(), &mut total, &mut bridges);
    (total, bridges)
}
