//! The Siegel upper half-plane H₂ and the fractional-linear action of Sp(4, Q).
//!
//! Points are generic over the coefficient field: `Complex64` for numeric
//! checks, [`ComplexRational`] for exact checks on Gaussian-rational inputs.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::SymplecticMatrix;
use crate::exact_arith::{ComplexRational, Rational};

/// Below this modulus `det(CZ + D)` is treated as singular in numeric mode.
pub const NUMERIC_SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ActionError {
    #[error("CZ + D is singular at this point (|det| = {0:e})")]
    Singular(f64),
    #[error("point is not in the Siegel upper half-plane")]
    NotInH2,
}

/// Coefficient field for Siegel points.
pub trait SiegelScalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    /// Modulus, used for the singularity check and error reporting.
    fn modulus(&self) -> f64;

    fn invertible(&self) -> bool;

    /// `Im τ₁ > 0` and `Im τ₁·Im τ₃ − (Im τ₂)² > 0`.
    fn imaginary_part_positive_definite(t1: &Self, t2: &Self, t3: &Self) -> bool;
}

impl SiegelScalar for Complex64 {
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn invertible(&self) -> bool {
        self.norm() >= NUMERIC_SINGULAR_TOL
    }

    fn imaginary_part_positive_definite(t1: &Self, t2: &Self, t3: &Self) -> bool {
        t1.im > 0.0 && t1.im * t3.im - t2.im * t2.im > 0.0
    }
}

impl SiegelScalar for ComplexRational {
    fn from_rational(r: &Rational) -> Self {
        ComplexRational::new(r.clone(), Rational::zero())
    }

    fn modulus(&self) -> f64 {
        self.norm_sqr().to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    fn invertible(&self) -> bool {
        !self.is_zero()
    }

    fn imaginary_part_positive_definite(t1: &Self, t2: &Self, t3: &Self) -> bool {
        t1.im.is_positive() && (&t1.im * &t3.im - &t2.im * &t2.im).is_positive()
    }
}

/// `Z = [[τ₁, τ₂], [τ₂, τ₃]]`, symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelPoint<T> {
    pub tau1: T,
    pub tau2: T,
    pub tau3: T,
}

pub type NumericPoint = SiegelPoint<Complex64>;
pub type ExactPoint = SiegelPoint<ComplexRational>;

impl<T: SiegelScalar> SiegelPoint<T> {
    pub fn new(tau1: T, tau2: T, tau3: T) -> Self {
        Self { tau1, tau2, tau3 }
    }

    fn as_matrix(&self) -> [[T; 2]; 2] {
        [
            [self.tau1.clone(), self.tau2.clone()],
            [self.tau2.clone(), self.tau3.clone()],
        ]
    }
}

impl NumericPoint {
    /// Largest entrywise distance to `other`.
    pub fn max_distance(&self, other: &NumericPoint) -> f64 {
        [
            (self.tau1 - other.tau1).norm(),
            (self.tau2 - other.tau2).norm(),
            (self.tau3 - other.tau3).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl ExactPoint {
    pub fn to_numeric(&self) -> NumericPoint {
        let c = |z: &ComplexRational| {
            Complex64::new(
                z.re.to_f64().unwrap_or(f64::NAN),
                z.im.to_f64().unwrap_or(f64::NAN),
            )
        };
        NumericPoint::new(c(&self.tau1), c(&self.tau2), c(&self.tau3))
    }
}

pub fn is_in_h2<T: SiegelScalar>(z: &SiegelPoint<T>) -> bool {
    T::imaginary_part_positive_definite(&z.tau1, &z.tau2, &z.tau3)
}

fn lift<T: SiegelScalar>(block: [[Rational; 2]; 2]) -> [[T; 2]; 2] {
    block.map(|r| r.map(|x| T::from_rational(&x)))
}

fn mul2<T: SiegelScalar>(a: &[[T; 2]; 2], b: &[[T; 2]; 2]) -> [[T; 2]; 2] {
    std::array::from_fn(|r| {
        std::array::from_fn(|s| {
            a[r][0].clone() * b[0][s].clone() + a[r][1].clone() * b[1][s].clone()
        })
    })
}

fn add2<T: SiegelScalar>(a: &[[T; 2]; 2], b: &[[T; 2]; 2]) -> [[T; 2]; 2] {
    std::array::from_fn(|r| std::array::from_fn(|s| a[r][s].clone() + b[r][s].clone()))
}

/// `γ·Z = (AZ + B)(CZ + D)⁻¹`.
pub fn act<T: SiegelScalar>(
    gamma: &SymplecticMatrix,
    z: &SiegelPoint<T>,
) -> Result<SiegelPoint<T>, ActionError> {
    if !is_in_h2(z) {
        return Err(ActionError::NotInH2);
    }
    let zm = z.as_matrix();
    let [a, b, c, d] = [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(r, s)| lift::<T>(gamma.block(r, s)));
    let num = add2(&mul2(&a, &zm), &b);
    let den = add2(&mul2(&c, &zm), &d);
    let det = den[0][0].clone() * den[1][1].clone() - den[0][1].clone() * den[1][0].clone();
    if !det.invertible() {
        return Err(ActionError::Singular(det.modulus()));
    }
    let inv = [
        [
            den[1][1].clone() / det.clone(),
            -den[0][1].clone() / det.clone(),
        ],
        [-den[1][0].clone() / det.clone(), den[0][0].clone() / det],
    ];
    let w = mul2(&num, &inv);
    let [[w11, w12], [_, w22]] = w;
    Ok(SiegelPoint::new(w11, w12, w22))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{int, rat};

    fn ci(re: Rational, im: Rational) -> ComplexRational {
        ComplexRational::new(re, im)
    }

    fn i_times_identity() -> ExactPoint {
        ExactPoint::new(ci(int(0), int(1)), ci(int(0), int(0)), ci(int(0), int(1)))
    }

    #[test]
    fn identity_fixes_points() {
        let z = ExactPoint::new(
            ci(rat(1, 3), int(2)),
            ci(rat(-1, 2), rat(1, 2)),
            ci(int(5), int(1)),
        );
        assert_eq!(act(&SymplecticMatrix::identity(), &z).unwrap(), z);
    }

    #[test]
    fn inversion_fixes_i_identity() {
        // -J = (0 -I; I 0)
        let gamma = &SymplecticMatrix::j() * &SymplecticMatrix::minus_identity();
        assert_eq!(gamma.block(0, 1)[0][0], int(-1));
        assert_eq!(
            act(&gamma, &i_times_identity()).unwrap(),
            i_times_identity()
        );
    }

    #[test]
    fn translation_shifts() {
        let t = SymplecticMatrix::translation([[int(1), int(0)], [int(0), int(0)]]).unwrap();
        let z = i_times_identity();
        let w = act(&t, &z).unwrap();
        assert_eq!(w.tau1, ci(int(1), int(1)));
        assert_eq!(w.tau2, z.tau2);
        assert_eq!(w.tau3, z.tau3);
    }

    #[test]
    fn h2_membership() {
        assert!(is_in_h2(&i_times_identity()));
        let neg = ExactPoint::new(ci(int(0), int(-1)), ci(int(0), int(0)), ci(int(0), int(-1)));
        assert!(!is_in_h2(&neg));
        let indefinite =
            ExactPoint::new(ci(int(0), int(1)), ci(int(0), int(2)), ci(int(0), int(1)));
        assert!(!is_in_h2(&indefinite));
        assert!(!is_in_h2(&indefinite.to_numeric()));
    }

    #[test]
    fn rejects_points_outside_h2() {
        let neg = ExactPoint::new(ci(int(0), int(-1)), ci(int(0), int(0)), ci(int(0), int(-1)));
        assert_eq!(act(&SymplecticMatrix::j(), &neg), Err(ActionError::NotInH2));
    }

    #[test]
    fn numeric_matches_exact() {
        let gamma = &SymplecticMatrix::j()
            * &SymplecticMatrix::translation([[int(2), int(1)], [int(1), int(-3)]]).unwrap();
        let z = ExactPoint::new(
            ci(rat(1, 2), int(2)),
            ci(rat(1, 5), rat(1, 3)),
            ci(int(-1), int(1)),
        );
        let exact = act(&gamma, &z).unwrap().to_numeric();
        let numeric = act(&gamma, &z.to_numeric()).unwrap();
        assert!(exact.max_distance(&numeric) < 1e-12);
        assert!(is_in_h2(&numeric));
    }
}
