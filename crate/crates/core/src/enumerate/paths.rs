use std::cmp::Reverse;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{LaurentPolynomial, WalkModel};

/// How a random path of length `n` is drawn before conditioning on being an excursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryRule {
    /// Every bridge equally likely.
    Uniform,
    /// A weighted bridge on the integers, folded by `|.|`. Steps from 0 use `P0`.
    AbsoluteValue,
    /// Boundary steps never lose mass.
    Reflection,
    /// Boundary steps may leave the half-line and kill the walk.
    Absorption,
}

impl BoundaryRule {
    pub const ALL: [BoundaryRule; 4] =
        [BoundaryRule::Uniform, BoundaryRule::AbsoluteValue, BoundaryRule::Reflection, BoundaryRule::Absorption];
}

impl fmt::Display for BoundaryRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryRule::Uniform => "uniform",
            BoundaryRule::AbsoluteValue => "absolute_value",
            BoundaryRule::Reflection => "reflection",
            BoundaryRule::Absorption => "absorption",
        })
    }
}

/// All bridges of length `n` over the support of `P`: excursions first, then the rest,
/// each group in decreasing lexicographic order of jumps.
pub fn bridges(model: &WalkModel, n: usize) -> Vec<Vec<i32>> {
    let support = model.p().support();
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(n);
    collect_bridges(&support, n, 0, &mut path, &mut out);
    out.sort_by_key(|path| (!is_excursion(path), Reverse(path.clone())));
    out
}

fn collect_bridges(support: &[i32], n: usize, alt: i64, path: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
    if path.len() == n {
        if alt == 0 {
            out.push(path.clone());
        }
        return;
    }
    for &e in support {
        path.push(e);
        collect_bridges(support, n, alt + e as i64, path, out);
        path.pop();
    }
}

fn is_excursion(path: &[i32]) -> bool {
    let mut alt = 0i64;
    for &e in path {
        alt += e as i64;
        if alt < 0 {
            return false;
        }
    }
    alt == 0
}

/// Weight of `path` when steps from 0 use `p0` and all other steps use `p`.
/// Leaving the half-line gives weight 0 unless `signed` is set.
fn path_weight(p: &LaurentPolynomial, p0: &LaurentPolynomial, path: &[i32], signed: bool) -> BigRational {
    let mut weight = BigRational::one();
    let mut alt = 0i64;
    for &e in path {
        let poly = if alt == 0 { p0 } else { p };
        weight *= poly.coeff(e);
        alt += e as i64;
        if (alt < 0 && !signed) || weight.is_zero() {
            return BigRational::zero();
        }
    }
    weight
}

/// The reflecting boundary used for the reflection column: the model's own `P0` if it
/// already reflects, otherwise its non-negative part rescaled to total mass 1.
fn reflecting_boundary(model: &WalkModel) -> Result<LaurentPolynomial> {
    if model.is_reflection() {
        return Ok(model.p0().clone());
    }
    let geq = model.p0_geq();
    let total = geq.at_one();
    if total.is_zero() {
        return Err(Error::InconsistentCase("P0 has no non-negative jump to reflect with".into()));
    }
    Ok(LaurentPolynomial::from_terms(geq.terms().map(|(e, c)| (e, c / &total))))
}

fn absorbing_boundary(model: &WalkModel) -> LaurentPolynomial {
    if model.is_absorption() {
        model.p0().clone()
    } else {
        model.p().clone()
    }
}

/// Probability of `path` under `rule`, conditioned on drawing an excursion of its length.
pub fn path_probability(rule: BoundaryRule, model: &WalkModel, path: &[i32]) -> Result<BigRational> {
    if path.iter().map(|&e| e as i64).sum::<i64>() != 0 {
        return Err(Error::InvalidPath("path does not end at altitude 0".into()));
    }
    if let Some(e) = path.iter().find(|&&e| model.p().coeff(e).is_zero()) {
        return Err(Error::InvalidPath(format!("jump {e} is not a step of P")));
    }
    let n = path.len();
    let all = bridges(model, n);
    let conditional = |weight: BigRational, total: BigRational| {
        if total.is_zero() {
            Err(Error::NoExcursions { n })
        } else {
            Ok(weight / total)
        }
    };
    match rule {
        BoundaryRule::Uniform => Ok(BigRational::new(BigInt::one(), BigInt::from(all.len()))),
        BoundaryRule::AbsoluteValue => {
            if !is_excursion(path) {
                return Ok(BigRational::zero());
            }
            let (p, p0) = (model.p(), model.p0());
            let mut folded = BigRational::zero();
            let mut total = BigRational::zero();
            for b in &all {
                let w = path_weight(p, p0, b, true);
                if fold(b) == path {
                    folded += &w;
                }
                total += w;
            }
            conditional(folded, total)
        }
        BoundaryRule::Reflection | BoundaryRule::Absorption => {
            let p0 =
                if rule == BoundaryRule::Reflection { reflecting_boundary(model)? } else { absorbing_boundary(model) };
            let p = model.p();
            let total = all
                .iter()
                .filter(|b| is_excursion(b))
                .fold(BigRational::zero(), |acc, b| acc + path_weight(p, &p0, b, false));
            conditional(path_weight(p, &p0, path, false), total)
        }
    }
}

/// Jumps of the path `|S_k|`.
fn fold(path: &[i32]) -> Vec<i32> {
    let mut alt = 0i64;
    path.iter()
        .map(|&e| {
            let next = alt + e as i64;
            let step = next.abs() - alt.abs();
            alt = next;
            step as i32
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table2Row {
    pub path: Vec<i32>,
    pub uniform: BigRational,
    pub absolute_value: BigRational,
    pub reflection: BigRational,
    pub absorption: BigRational,
}

impl Table2Row {
    pub fn get(&self, rule: BoundaryRule) -> &BigRational {
        match rule {
            BoundaryRule::Uniform => &self.uniform,
            BoundaryRule::AbsoluteValue => &self.absolute_value,
            BoundaryRule::Reflection => &self.reflection,
            BoundaryRule::Absorption => &self.absorption,
        }
    }
}

/// Probabilities of every bridge of length `n` under the four rules.
#[derive(Clone, Debug, PartialEq)]
pub struct Table2 {
    pub n: usize,
    pub rows: Vec<Table2Row>,
}

pub fn table2(model: &WalkModel, n: usize) -> Result<Table2> {
    let rows = bridges(model, n)
        .into_iter()
        .map(|path| {
            let get = |rule| path_probability(rule, model, &path);
            Ok(Table2Row {
                uniform: get(BoundaryRule::Uniform)?,
                absolute_value: get(BoundaryRule::AbsoluteValue)?,
                reflection: get(BoundaryRule::Reflection)?,
                absorption: get(BoundaryRule::Absorption)?,
                path,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table2 { n, rows })
}

/// Renders jumps of a Dyck-like path as `U`/`D`/`F`, or as signed integers otherwise.
pub fn path_label(path: &[i32]) -> String {
    if path.iter().all(|e| (-1..=1).contains(e)) {
        path.iter()
            .map(|e| match e {
                1 => 'U',
                -1 => 'D',
                _ => 'F',
            })
            .collect()
    } else {
        path.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    }
}
