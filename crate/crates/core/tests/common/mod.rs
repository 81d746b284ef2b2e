#![allow(dead_code)]

use latpath::model::{LaurentPolynomial, WalkModel};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Normalized polynomial with support in `[lo, hi]`, positive at both ends.
fn normalized(lo: i32, weights: Vec<u32>) -> LaurentPolynomial {
    let total: u32 = weights.iter().sum();
    LaurentPolynomial::from_terms(
        weights
            .into_iter()
            .enumerate()
            .filter(|(_, w)| *w > 0)
            .map(|(i, w)| (lo + i as i32, BigRational::new(BigInt::from(w), BigInt::from(total)))),
    )
}

fn step_set(c: i32, d: i32) -> impl Strategy<Value = LaurentPolynomial> {
    let inner = (c + d - 1).max(0) as usize;
    (1u32..5, prop::collection::vec(0u32..5, inner), 1u32..5).prop_map(move |(first, mid, last)| {
        let mut w = vec![first];
        w.extend(mid);
        w.push(last);
        normalized(-c, w)
    })
}

fn boundary(max_up: i32) -> impl Strategy<Value = LaurentPolynomial> {
    // jumps -1..=max_up; the -1 weight makes it an absorption model
    prop::collection::vec(0u32..5, (max_up + 2) as usize)
        .prop_filter("boundary needs mass", |w| w.iter().sum::<u32>() > 0)
        .prop_map(|w| normalized(-1, w))
}

/// Valid models with `c` down jumps and up to `d_max` up jumps.
pub fn arb_model(c: i32, d_max: i32) -> impl Strategy<Value = WalkModel> {
    (1..=d_max).prop_flat_map(move |d| (step_set(c, d), boundary(d))).prop_map(|(p, p0)| WalkModel::new(p, p0))
}

pub fn arb_lukasiewicz() -> impl Strategy<Value = WalkModel> {
    arb_model(1, 3)
}
