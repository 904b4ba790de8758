//! Rational ARE functions of the MICD models, for θ ∈ [0, 1).
//!
//! Only field arithmetic is used, so the same code evaluates in floating
//! point or in exact rationals.

use num_traits::{FromPrimitive, Num};

use crate::model_zoo::MicdVariant;

/// A value of the extended half-line [0, ∞].
#[derive(Debug, Clone, PartialEq)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T> Extended<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }
}

/// Horner evaluation of Σ cₖθᵏ with integer coefficients, lowest degree first.
pub fn poly<T: Num + Clone + FromPrimitive>(coeffs: &[i64], theta: &T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| {
        acc * theta.clone() + T::from_i64(c).expect("integer coefficient representable")
    })
}

/// K₁ of the OS formula.
pub const OS_K1: [i64; 8] = [10, 10, 10, 10, -230, 400, -267, 66];
/// K₂ of the OS formula.
pub const OS_K2: [i64; 8] = [1, 1, 1, 1, -11, 31, -27, 9];

/// ARE of T relative to S for a MICD variant at θ ≥ 0.
pub fn are<T: Num + Clone + FromPrimitive>(variant: MicdVariant, theta: &T) -> Extended<T> {
    let c = |k: i64| T::from_i64(k).expect("small integer");
    let t = theta;
    match variant {
        MicdVariant::As => Extended::Finite(T::one()),
        MicdVariant::Os => {
            let a = poly(&[2, -3, 2], t);
            let b = poly(&[6, -9, 4], t);
            let num = c(9) * a.clone() * a * poly(&OS_K1, t);
            let den = c(10) * b.clone() * b * poly(&OS_K2, t);
            Extended::Finite(num / den)
        }
        MicdVariant::Al => {
            let num = c(2) * poly(&[1, 2, 3, 2, 1, 9], t);
            let den = t.clone() * t.clone() * poly(&[2, 5, 11, 18], t);
            if den.is_zero() {
                Extended::Infinite
            } else {
                Extended::Finite(num / den)
            }
        }
        MicdVariant::Ol => {
            let num = c(9) * poly(&[5, 0, 0, 0, 0, 0, 4, 24, -33], t);
            let den = c(20) * poly(&[1, 0, 0, 0, 0, 0, 8, 0, -9], t);
            Extended::Finite(num / den)
        }
    }
}
