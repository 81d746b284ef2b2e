//! Named walk models used throughout the tests and the command-line examples.

use crate::model::{LaurentPolynomial, WalkModel};

fn poly(terms: &[(i32, i64, i64)]) -> LaurentPolynomial {
    LaurentPolynomial::from_ratios(terms)
}

fn dyck() -> LaurentPolynomial {
    poly(&[(-1, 1, 2), (1, 1, 2)])
}

fn motzkin() -> LaurentPolynomial {
    poly(&[(-1, 1, 3), (0, 1, 3), (1, 1, 3)])
}

/// Dyck steps, forced up-step at 0. Period 2.
pub fn dyck_reflection() -> WalkModel {
    WalkModel::new(dyck(), LaurentPolynomial::monomial(1))
}

/// Dyck steps with `P0 = P`.
pub fn dyck_absorption() -> WalkModel {
    WalkModel::new(dyck(), dyck())
}

/// Motzkin steps, boundary `1/2 + 1/2 u`. Critical with zero drift.
pub fn motzkin_reflection() -> WalkModel {
    WalkModel::new(motzkin(), poly(&[(0, 1, 2), (1, 1, 2)]))
}

/// Motzkin steps with `P0 = P`. Subcritical with zero drift.
pub fn motzkin_absorption() -> WalkModel {
    WalkModel::new(motzkin(), motzkin())
}

/// Positive drift (0.4), a fifth of the mass killed at each visit of 0.
pub fn positive_drift_absorption() -> WalkModel {
    WalkModel::new(poly(&[(-1, 1, 5), (0, 1, 5), (1, 3, 5)]), poly(&[(-1, 1, 5), (1, 4, 5)]))
}

/// Positive drift (0.4), forced up-step at 0.
pub fn positive_drift_reflection() -> WalkModel {
    WalkModel::new(poly(&[(-1, 1, 5), (0, 1, 5), (1, 3, 5)]), LaurentPolynomial::monomial(1))
}

/// Negative drift (-0.2) with a strongly repelling boundary: supercritical absorption.
pub fn supercritical_negative_drift() -> WalkModel {
    WalkModel::new(poly(&[(-1, 1, 2), (0, 1, 5), (1, 3, 10)]), poly(&[(-1, 1, 10), (1, 9, 10)]))
}

/// Negative drift (-0.2), weakly repelling boundary: subcritical absorption.
pub fn subcritical_negative_drift() -> WalkModel {
    WalkModel::new(poly(&[(-1, 1, 2), (0, 1, 5), (1, 3, 10)]), poly(&[(-1, 3, 10), (0, 1, 2), (1, 1, 5)]))
}

/// Negative drift (-0.3) with `P0>=(tau) = P(tau)` exactly (`tau = 2`): critical absorption.
pub fn critical_negative_drift() -> WalkModel {
    WalkModel::new(poly(&[(-1, 2, 5), (0, 1, 2), (1, 1, 10)]), poly(&[(-1, 11, 20), (1, 9, 20)]))
}

/// Negative drift (-0.2) reflected at 0; always supercritical.
pub fn negative_drift_reflection() -> WalkModel {
    WalkModel::new(poly(&[(-1, 1, 2), (0, 1, 5), (1, 3, 10)]), poly(&[(0, 1, 2), (1, 1, 2)]))
}

/// Negative drift (-0.2) with a jump of +2 both inside and on the boundary.
pub fn long_jump_reflection() -> WalkModel {
    WalkModel::new(poly(&[(-1, 1, 2), (0, 3, 10), (1, 1, 10), (2, 1, 10)]), poly(&[(0, 1, 2), (1, 1, 5), (2, 3, 10)]))
}

/// Strong positive drift (0.85) with a lazy reflecting boundary; supercritical with
/// `rho1` far from 1.
pub fn strong_drift_reflection() -> WalkModel {
    WalkModel::new(poly(&[(-1, 1, 20), (0, 1, 20), (1, 9, 10)]), poly(&[(0, 1, 2), (1, 1, 2)]))
}

/// Two down jumps (`c = 2`), uniform weights.
pub fn two_down_reflection() -> WalkModel {
    WalkModel::new(poly(&[(-2, 1, 4), (-1, 1, 4), (0, 1, 4), (1, 1, 4)]), poly(&[(0, 1, 2), (1, 1, 2)]))
}

/// Every preset with its name.
pub fn named() -> Vec<(&'static str, WalkModel)> {
    vec![
        ("dyck_reflection", dyck_reflection()),
        ("dyck_absorption", dyck_absorption()),
        ("motzkin_reflection", motzkin_reflection()),
        ("motzkin_absorption", motzkin_absorption()),
        ("positive_drift_absorption", positive_drift_absorption()),
        ("positive_drift_reflection", positive_drift_reflection()),
        ("supercritical_negative_drift", supercritical_negative_drift()),
        ("subcritical_negative_drift", subcritical_negative_drift()),
        ("critical_negative_drift", critical_negative_drift()),
        ("negative_drift_reflection", negative_drift_reflection()),
        ("long_jump_reflection", long_jump_reflection()),
        ("strong_drift_reflection", strong_drift_reflection()),
        ("two_down_reflection", two_down_reflection()),
    ]
}

pub fn all() -> Vec<WalkModel> {
    named().into_iter().map(|(_, m)| m).collect()
}

pub fn by_name(name: &str) -> Option<WalkModel> {
    named().into_iter().find(|(n, _)| *n == name).map(|(_, m)| m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for (name, m) in named() {
            assert!(m.validate().ok(), "{name}: {:?}", m.validate().violations);
        }
    }
}
