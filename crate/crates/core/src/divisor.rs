//! Formal Q-divisor classes on the partial resolution of the compactified
//! moduli space.
//!
//! Pic ⊗ Q is modelled as the free vector space on twelve labels. The only
//! relation ever used is the one expressing the class
//!
//! ```text
//! ℰ = K + ½E₁' + ½E₁'' + ½Δ̂₁ + ½Δ̂₂ + (1 − 2/p)E₂ − ¼E' − ¼E''
//! ```
//!
//! in terms of pulled-back Hodge and boundary classes,
//!
//! ```text
//! ℰ = 3λ − (1/p)Δ₁ − ((p − 1)/p)Δ̂₀ − ((p − 1)/p)Δ̂̂₀,
//! ```
//!
//! and it is only ever applied by substituting for `K`. Coefficients are
//! affine forms so that the weight multiple `n` can be carried symbolically.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact_arith::{int, rat, AffineForm, ArithError, CompactAffine, Rational};
use crate::symplectic::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("p = {0} is outside the range p >= 5 prime")]
    OutsideHypothesis(u64),
    #[error("unknown divisor label {0:?}")]
    UnknownLabel(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DivisorLabel {
    /// Canonical class.
    K,
    #[serde(rename = "E1'")]
    E1Prime,
    #[serde(rename = "E1''")]
    E1DoublePrime,
    /// Δ̂₁
    H1,
    /// Δ̂₂
    H2,
    E2,
    #[serde(rename = "E'")]
    EPrime,
    #[serde(rename = "E''")]
    EDoublePrime,
    /// Pull-back of the Hodge bundle λ.
    #[serde(rename = "LAMBDA")]
    Lambda,
    /// Pull-back of Δ₁.
    #[serde(rename = "DELTA1")]
    Delta1,
    /// Δ̂₀
    H0,
    /// The second boundary component over Δ₀.
    #[serde(rename = "H0HAT")]
    H0Hat,
}

impl DivisorLabel {
    pub const ALL: [DivisorLabel; 12] = [
        DivisorLabel::K,
        DivisorLabel::E1Prime,
        DivisorLabel::E1DoublePrime,
        DivisorLabel::H1,
        DivisorLabel::H2,
        DivisorLabel::E2,
        DivisorLabel::EPrime,
        DivisorLabel::EDoublePrime,
        DivisorLabel::Lambda,
        DivisorLabel::Delta1,
        DivisorLabel::H0,
        DivisorLabel::H0Hat,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            DivisorLabel::K => "K",
            DivisorLabel::E1Prime => "E1'",
            DivisorLabel::E1DoublePrime => "E1''",
            DivisorLabel::H1 => "H1",
            DivisorLabel::H2 => "H2",
            DivisorLabel::E2 => "E2",
            DivisorLabel::EPrime => "E'",
            DivisorLabel::EDoublePrime => "E''",
            DivisorLabel::Lambda => "LAMBDA",
            DivisorLabel::Delta1 => "DELTA1",
            DivisorLabel::H0 => "H0",
            DivisorLabel::H0Hat => "H0HAT",
        }
    }

    pub fn parse(name: &str) -> Result<Self, DivisorError> {
        Self::ALL
            .into_iter()
            .find(|l| l.name() == name)
            .ok_or_else(|| DivisorError::UnknownLabel(name.to_string()))
    }
}

impl fmt::Display for DivisorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Formal combination `Σ c_X · X` with affine coefficients; zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DivisorClass {
    coeffs: BTreeMap<DivisorLabel, AffineForm>,
}

impl DivisorClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(label: DivisorLabel, coeff: impl Into<AffineForm>) -> Self {
        let mut c = Self::zero();
        c.add_term(label, coeff.into());
        c
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (DivisorLabel, AffineForm)>) -> Self {
        let mut c = Self::zero();
        for (l, a) in terms {
            c.add_term(l, a);
        }
        c
    }

    fn add_term(&mut self, label: DivisorLabel, coeff: AffineForm) {
        let merged = match self.coeffs.remove(&label) {
            Some(old) => old + coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.coeffs.insert(label, merged);
        }
    }

    pub fn coeff(&self, label: DivisorLabel) -> AffineForm {
        self.coeffs.get(&label).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (DivisorLabel, &AffineForm)> {
        self.coeffs.iter().map(|(l, c)| (*l, c))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::from_terms(self.iter().map(|(l, c)| (l, c.scale(k))))
    }

    /// Multiplies every coefficient by an affine form; fails if a product
    /// would leave degree one.
    pub fn scale_affine(&self, k: &AffineForm) -> Result<Self, DivisorError> {
        let terms = self
            .iter()
            .map(|(l, c)| Ok((l, c.try_mul(k)?)))
            .collect::<Result<Vec<_>, ArithError>>()?;
        Ok(Self::from_terms(terms))
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        let mut out = self.clone();
        for (l, c) in rhs.iter() {
            out.add_term(l, c.clone());
        }
        out
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(&-Rational::one())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self + &-rhs
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(l, c)| format!("({c})·{l}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<&str, CompactAffine> = self
            .iter()
            .map(|(l, c)| (l.name(), CompactAffine::from(c)))
            .collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, CompactAffine>::deserialize(d)?;
        let mut out = DivisorClass::zero();
        for (name, repr) in map {
            let label = DivisorLabel::parse(&name).map_err(serde::de::Error::custom)?;
            let coeff = AffineForm::try_from(repr).map_err(serde::de::Error::custom)?;
            out.add_term(label, coeff);
        }
        Ok(out)
    }
}

fn check_hypothesis(p: u64) -> Result<(), DivisorError> {
    if p >= 5 && is_prime(p) {
        Ok(())
    } else {
        Err(DivisorError::OutsideHypothesis(p))
    }
}

fn p_rational(p: u64) -> Rational {
    Rational::from_integer(p.into())
}

/// `ℰ = K + ½E₁' + ½E₁'' + ½Δ̂₁ + ½Δ̂₂ + (1 − 2/p)E₂ − ¼E' − ¼E''` for prime `p >= 5`.
pub fn script_e(p: u64) -> Result<DivisorClass, DivisorError> {
    check_hypothesis(p)?;
    Ok(script_e_unrestricted(p))
}

/// The same expression for any `p >= 1`, for exploring small `p`.
pub fn script_e_unrestricted(p: u64) -> DivisorClass {
    use DivisorLabel::*;
    let half = rat(1, 2);
    let quarter = rat(1, 4);
    let e2 = int(1) - int(2) / p_rational(p);
    DivisorClass::from_terms([
        (K, AffineForm::constant(int(1))),
        (E1Prime, AffineForm::constant(half.clone())),
        (E1DoublePrime, AffineForm::constant(half.clone())),
        (H1, AffineForm::constant(half.clone())),
        (H2, AffineForm::constant(half)),
        (E2, AffineForm::constant(e2)),
        (EPrime, AffineForm::constant(-quarter.clone())),
        (EDoublePrime, AffineForm::constant(-quarter)),
    ])
}

/// `3λ − (1/p)Δ₁ − ((p − 1)/p)(Δ̂₀ + Δ̂̂₀)`.
pub fn star_form(p: u64) -> DivisorClass {
    star_form_with_lambda(p, int(3))
}

/// [`star_form`] with the Hodge coefficient 3 replaced by `lambda_coeff`.
pub fn star_form_with_lambda(p: u64, lambda_coeff: Rational) -> DivisorClass {
    use DivisorLabel::*;
    assert!(p >= 1, "p must be positive");
    let p = p_rational(p);
    let boundary = -(&p - int(1)) / &p;
    DivisorClass::from_terms([
        (Lambda, AffineForm::constant(lambda_coeff)),
        (Delta1, AffineForm::constant(-int(1) / &p)),
        (H0, AffineForm::constant(boundary.clone())),
        (H0Hat, AffineForm::constant(boundary)),
    ])
}

/// Replaces every `K` by `star − (ℰ − K)`, using the given expressions for
/// `ℰ` and its right-hand side.
pub fn eliminate_k_with(
    cls: &DivisorClass,
    script_e: &DivisorClass,
    star: &DivisorClass,
) -> Result<DivisorClass, DivisorError> {
    let k = cls.coeff(DivisorLabel::K);
    if k.is_zero() {
        return Ok(cls.clone());
    }
    let unit_k = DivisorClass::term(DivisorLabel::K, AffineForm::constant(int(1)));
    let k_value = star - &(script_e - &unit_k);
    let without_k = cls - &DivisorClass::term(DivisorLabel::K, k.clone());
    Ok(&without_k + &k_value.scale_affine(&k)?)
}

/// [`eliminate_k_with`] for the standard `ℰ` and its expression at `p`.
pub fn eliminate_k(cls: &DivisorClass, p: u64) -> Result<DivisorClass, DivisorError> {
    eliminate_k_with(cls, &script_e_unrestricted(p), &star_form(p))
}

/// Both sides of
/// `nK − (n/4)E' − (n/4)E'' = nℰ − (n/2)(E₁' + E₁'' + Δ̂₁ + Δ̂₂) − n(1 − 2/p)E₂`.
pub fn rearrangement_sides(p: u64) -> Result<(DivisorClass, DivisorClass), DivisorError> {
    use DivisorLabel::*;
    let n = AffineForm::n();
    let quarter_n = n.scale(&rat(1, 4));
    let half_n = n.scale(&rat(1, 2));
    let lhs = DivisorClass::from_terms([
        (K, n.clone()),
        (EPrime, -quarter_n.clone()),
        (EDoublePrime, -quarter_n),
    ]);
    let e2 = n.scale(&(int(1) - int(2) / p_rational(p)));
    let subtracted = DivisorClass::from_terms([
        (E1Prime, half_n.clone()),
        (E1DoublePrime, half_n.clone()),
        (H1, half_n.clone()),
        (H2, half_n),
        (E2, e2),
    ]);
    let rhs = &script_e_unrestricted(p).scale_affine(&n)? - &subtracted;
    Ok((lhs, rhs))
}

/// Whether the two sides of the rearrangement agree as formal classes,
/// symbolically in `n`.
pub fn check_rearrangement(p: u64) -> Result<bool, DivisorError> {
    let (lhs, rhs) = rearrangement_sides(p)?;
    Ok((&lhs - &rhs).is_zero())
}

/// Coefficient of `DELTA1` in the expression for ℰ, times `p`.
pub fn delta1_times_p(p: u64) -> Rational {
    star_form(p).coeff(DivisorLabel::Delta1).c0 * p_rational(p)
}
