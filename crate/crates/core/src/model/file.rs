//! Line-oriented model files.
//!
//! ```text
//! # Motzkin walk, reflecting boundary
//! P: -1:1/3 0:1/3 1:1/3
//! P0: 0:1/2 1:1/2
//! ```
//!
//! Weights are `a/b`, integers or decimals; a decimal with `k` fractional digits is read
//! as the exact rational with denominator `10^k`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{LaurentPolynomial, WalkModel};
use crate::error::{Error, Result};

pub fn parse_weight(s: &str) -> std::result::Result<BigRational, String> {
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.parse().map_err(|_| format!("bad numerator in weight {s:?}"))?;
        let b: BigInt = b.parse().map_err(|_| format!("bad denominator in weight {s:?}"))?;
        if b.is_zero() {
            return Err(format!("zero denominator in weight {s:?}"));
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(format!("bad weight {s:?}"));
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().unwrap() };
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let w = BigRational::new(num, den);
    Ok(if neg { -w } else { w })
}

fn parse_poly(body: &str, line: usize) -> Result<LaurentPolynomial> {
    let err = |msg: String| Error::Parse { line, msg };
    let mut seen = BTreeSet::new();
    let mut terms = Vec::new();
    for pair in body.split_whitespace() {
        let (jump, weight) =
            pair.split_once(':').ok_or_else(|| err(format!("expected <jump>:<weight>, got {pair:?}")))?;
        let jump: i32 = jump.parse().map_err(|_| err(format!("bad jump {jump:?}")))?;
        let weight = parse_weight(weight).map_err(err)?;
        if !seen.insert(jump) {
            return Err(err(format!("jump {jump} listed twice")));
        }
        terms.push((jump, weight));
    }
    if terms.is_empty() {
        return Err(err("empty step list".to_string()));
    }
    Ok(LaurentPolynomial::from_terms(terms))
}

/// Parses a model file. Only syntax is checked here; run [`WalkModel::validate`] afterwards.
pub fn parse_model(text: &str) -> Result<WalkModel> {
    let mut p = None;
    let mut p0 = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, body) = trimmed
            .split_once(':')
            .ok_or(Error::Parse { line, msg: format!("expected `P:` or `P0:`, got {trimmed:?}") })?;
        let slot = match key.trim() {
            "P" => &mut p,
            "P0" => &mut p0,
            other => {
                return Err(Error::Parse { line, msg: format!("unknown key {other:?}") });
            }
        };
        if slot.is_some() {
            return Err(Error::Parse { line, msg: format!("duplicate `{}:` line", key.trim()) });
        }
        *slot = Some(parse_poly(body, line)?);
    }
    let p = p.ok_or(Error::Parse { line: 0, msg: "missing `P:` line".to_string() })?;
    let p0 = p0.ok_or(Error::Parse { line: 0, msg: "missing `P0:` line".to_string() })?;
    Ok(WalkModel::new(p, p0))
}

pub fn format_model(model: &WalkModel) -> String {
    format!("P: {}\nP0: {}\n", model.p(), model.p0())
}
