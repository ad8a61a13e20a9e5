//! Exact rational scalars and affine forms in the formal variables `n` and `i`.
//!
//! Every coefficient that shows up in the divisor calculus is rational, and
//! every quantity the verifier has to sign-check is affine in the weight
//! multiple `n` and the obstruction index `i`. Restricting to degree one keeps
//! the "for all admissible n" quantifier decidable: an affine function of `n`
//! is monotone, so its sign on the positive multiples of `d` is settled by its
//! slope and its value at `n = d`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Gaussian rational `re + im·i`.
pub type ComplexRational = Complex<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("cannot parse {0:?} as a rational number")]
    ParseRational(String),
    #[error("divisibility constant must be positive, got {0}")]
    NonPositiveDivisibility(i64),
    #[error("form {0} still depends on i")]
    DependsOnI(Box<AffineForm>),
    #[error("i-range [{lo}, {hi}] is empty for some admissible n")]
    MalformedRange {
        lo: Box<AffineForm>,
        hi: Box<AffineForm>,
    },
    #[error("form {0} is unbounded above on an unbounded i-range")]
    UnboundedRange(Box<AffineForm>),
    #[error("product of {0} and {1} is not affine")]
    NotAffine(Box<AffineForm>, Box<AffineForm>),
    #[error("witness does not fit in 64 bits")]
    WitnessOverflow,
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den`, reduced. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"a/b"` or `"a"` with arbitrary precision integers.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let err = || ArithError::ParseRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().map_err(|_| err())?;
            let den: BigInt = b.trim().parse().map_err(|_| err())?;
            if den.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(num, den))
        }
        None => {
            let num: BigInt = t.parse().map_err(|_| err())?;
            Ok(Rational::from_integer(num))
        }
    }
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Serde adapter writing rationals as canonical strings.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// `c0 + cn·n + ci·i` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineForm {
    #[serde(with = "rational_string")]
    pub c0: Rational,
    #[serde(with = "rational_string")]
    pub cn: Rational,
    #[serde(with = "rational_string")]
    pub ci: Rational,
}

impl AffineForm {
    pub fn new(c0: Rational, cn: Rational, ci: Rational) -> Self {
        Self { c0, cn, ci }
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(c, Rational::zero(), Rational::zero())
    }

    /// The form `n`.
    pub fn n() -> Self {
        Self::new(Rational::zero(), Rational::one(), Rational::zero())
    }

    /// The form `i`.
    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.cn.is_zero() && self.ci.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.cn.is_zero() && self.ci.is_zero()
    }

    pub fn depends_on_i(&self) -> bool {
        !self.ci.is_zero()
    }

    pub fn evaluate(&self, n: &BigInt, i: &BigInt) -> Rational {
        &self.c0
            + &self.cn * Rational::from_integer(n.clone())
            + &self.ci * Rational::from_integer(i.clone())
    }

    pub fn evaluate_i64(&self, n: i64, i: i64) -> Rational {
        self.evaluate(&BigInt::from(n), &BigInt::from(i))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(&self.c0 * k, &self.cn * k, &self.ci * k)
    }

    /// Product of two affine forms, defined when at least one is constant.
    pub fn try_mul(&self, other: &AffineForm) -> Result<AffineForm, ArithError> {
        if other.is_constant() {
            Ok(self.scale(&other.c0))
        } else if self.is_constant() {
            Ok(other.scale(&self.c0))
        } else {
            Err(ArithError::NotAffine(
                Box::new(self.clone()),
                Box::new(other.clone()),
            ))
        }
    }

    /// Replaces `i` by an affine form in `n` alone.
    pub fn substitute_i(&self, value: &AffineForm) -> Result<AffineForm, ArithError> {
        if value.depends_on_i() {
            return Err(ArithError::DependsOnI(Box::new(value.clone())));
        }
        let without_i = AffineForm::new(self.c0.clone(), self.cn.clone(), Rational::zero());
        Ok(without_i + value.scale(&self.ci))
    }
}

/// JSON shape for coefficients: a bare rational string when the form is
/// constant, `{c0, cn, ci}` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CompactAffine {
    Constant(String),
    Affine(AffineForm),
}

impl From<&AffineForm> for CompactAffine {
    fn from(f: &AffineForm) -> Self {
        if f.is_constant() {
            CompactAffine::Constant(format_rational(&f.c0))
        } else {
            CompactAffine::Affine(f.clone())
        }
    }
}

impl TryFrom<CompactAffine> for AffineForm {
    type Error = ArithError;

    fn try_from(c: CompactAffine) -> Result<Self, ArithError> {
        match c {
            CompactAffine::Constant(s) => Ok(AffineForm::constant(parse_rational(&s)?)),
            CompactAffine::Affine(a) => Ok(a),
        }
    }
}

impl fmt::Display for CompactAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompactAffine::Constant(s) => f.write_str(s),
            CompactAffine::Affine(a) => a.fmt(f),
        }
    }
}

impl Default for AffineForm {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for AffineForm {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl Add for AffineForm {
    type Output = AffineForm;
    fn add(self, rhs: AffineForm) -> AffineForm {
        &self + &rhs
    }
}

impl Add<&AffineForm> for &AffineForm {
    type Output = AffineForm;
    fn add(self, rhs: &AffineForm) -> AffineForm {
        AffineForm::new(&self.c0 + &rhs.c0, &self.cn + &rhs.cn, &self.ci + &rhs.ci)
    }
}

impl Sub for AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: AffineForm) -> AffineForm {
        &self - &rhs
    }
}

impl Sub<&AffineForm> for &AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: &AffineForm) -> AffineForm {
        AffineForm::new(&self.c0 - &rhs.c0, &self.cn - &rhs.cn, &self.ci - &rhs.ci)
    }
}

impl Neg for AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        AffineForm::new(-self.c0, -self.cn, -self.ci)
    }
}

impl Mul<&Rational> for &AffineForm {
    type Output = AffineForm;
    fn mul(self, k: &Rational) -> AffineForm {
        self.scale(k)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (c, var) in [(&self.cn, "n"), (&self.ci, "i")] {
            if c.is_zero() {
                continue;
            }
            let body = if c.abs().is_one() {
                var.to_string()
            } else {
                format!("({})·{}", c.abs(), var)
            };
            parts.push(signed(c.is_negative(), body, parts.is_empty()));
        }
        if !self.c0.is_zero() || parts.is_empty() {
            parts.push(signed(
                self.c0.is_negative(),
                self.c0.abs().to_string(),
                parts.is_empty(),
            ));
        }
        write!(f, "{}", parts.concat())
    }
}

fn signed(negative: bool, body: String, first: bool) -> String {
    match (negative, first) {
        (true, true) => format!("-{body}"),
        (true, false) => format!(" - {body}"),
        (false, true) => body,
        (false, false) => format!(" + {body}"),
    }
}

/// Inclusive range `lo <= i <= hi` whose ends are affine in `n`; `hi = None`
/// means the range is unbounded above.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IRange {
    pub lo: AffineForm,
    pub hi: Option<AffineForm>,
}

impl IRange {
    pub fn new(lo: AffineForm, hi: Option<AffineForm>) -> Result<Self, ArithError> {
        for end in std::iter::once(&lo).chain(hi.as_ref()) {
            if end.depends_on_i() {
                return Err(ArithError::DependsOnI(Box::new(end.clone())));
            }
        }
        Ok(Self { lo, hi })
    }

    /// `0 <= i <= coefficient·n - 1`.
    pub fn up_to_multiple_of_n(coefficient: Rational) -> Self {
        Self {
            lo: AffineForm::zero(),
            hi: Some(AffineForm::new(
                -Rational::one(),
                coefficient,
                Rational::zero(),
            )),
        }
    }

    pub fn from_zero_unbounded() -> Self {
        Self {
            lo: AffineForm::zero(),
            hi: None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.hi {
            Some(hi) => format!("{} <= i <= {}", self.lo, hi),
            None => format!("i >= {}", self.lo),
        }
    }

    /// Concrete integer endpoints at a given `n` (lo rounded up, hi rounded down).
    pub fn bounds_at(&self, n: &BigInt) -> (BigInt, Option<BigInt>) {
        let zero = BigInt::zero();
        let lo = self.lo.evaluate(n, &zero).ceil().to_integer();
        let hi = self
            .hi
            .as_ref()
            .map(|h| h.evaluate(n, &zero).floor().to_integer());
        (lo, hi)
    }
}

/// Which end of the range maximises a form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    Lower,
    Upper,
    /// The form does not depend on `i`.
    Any,
}

/// Eliminates `i` by substituting the endpoint that maximises `form`.
///
/// The result is a pointwise upper bound of `form` over the range, for every
/// admissible `n` (positive multiple of `divisibility`).
pub fn max_over_i(
    form: &AffineForm,
    range: &IRange,
    divisibility: i64,
) -> Result<(AffineForm, Endpoint), ArithError> {
    if let Some(hi) = &range.hi {
        let width = hi - &range.lo;
        if !nonnegative_for_all_admissible_n(&width, divisibility)? {
            return Err(ArithError::MalformedRange {
                lo: Box::new(range.lo.clone()),
                hi: Box::new(hi.clone()),
            });
        }
    } else if divisibility <= 0 {
        return Err(ArithError::NonPositiveDivisibility(divisibility));
    }
    if form.ci.is_zero() {
        return Ok((form.clone(), Endpoint::Any));
    }
    if form.ci.is_positive() {
        let hi = range
            .hi
            .as_ref()
            .ok_or_else(|| ArithError::UnboundedRange(Box::new(form.clone())))?;
        Ok((form.substitute_i(hi)?, Endpoint::Upper))
    } else {
        Ok((form.substitute_i(&range.lo)?, Endpoint::Lower))
    }
}

/// Outcome of a universally quantified sign check over admissible `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum SignDecision {
    Holds,
    /// Smallest admissible `n` at which the claimed sign fails.
    Fails {
        witness_n: u64,
    },
}

impl SignDecision {
    pub fn holds(&self) -> bool {
        matches!(self, SignDecision::Holds)
    }
}

#[derive(Clone, Copy)]
enum Bound {
    Strict,
    Weak,
}

/// Decides `form(n) < 0` for every positive multiple `n` of `divisibility`.
pub fn negative_for_all_admissible_n(
    form: &AffineForm,
    divisibility: i64,
) -> Result<SignDecision, ArithError> {
    decide_below_zero(form, divisibility, Bound::Strict)
}

/// Decides `form(n) <= 0` for every positive multiple `n` of `divisibility`.
pub fn nonpositive_for_all_admissible_n(
    form: &AffineForm,
    divisibility: i64,
) -> Result<SignDecision, ArithError> {
    decide_below_zero(form, divisibility, Bound::Weak)
}

fn nonnegative_for_all_admissible_n(
    form: &AffineForm,
    divisibility: i64,
) -> Result<bool, ArithError> {
    Ok(nonpositive_for_all_admissible_n(&-form.clone(), divisibility)?.holds())
}

fn decide_below_zero(
    form: &AffineForm,
    divisibility: i64,
    bound: Bound,
) -> Result<SignDecision, ArithError> {
    if divisibility <= 0 {
        return Err(ArithError::NonPositiveDivisibility(divisibility));
    }
    if form.depends_on_i() {
        return Err(ArithError::DependsOnI(Box::new(form.clone())));
    }
    let d = int(divisibility);
    let violates = |v: &Rational| match bound {
        Bound::Strict => !v.is_negative(),
        Bound::Weak => v.is_positive(),
    };
    let at_d = &form.c0 + &form.cn * &d;
    if violates(&at_d) {
        return witness(BigInt::one(), divisibility);
    }
    if !form.cn.is_positive() {
        // Non-increasing in n: the first admissible value is the largest.
        return Ok(SignDecision::Holds);
    }
    // Increasing: first multiple k·d with c0 + cn·k·d on the wrong side of 0.
    let step = &form.cn * &d;
    let crossing = -&form.c0 / &step;
    let k = match bound {
        Bound::Strict => crossing.ceil().to_integer(),
        Bound::Weak => crossing.floor().to_integer() + 1,
    };
    witness(k.max(BigInt::one()), divisibility)
}

fn witness(k: BigInt, divisibility: i64) -> Result<SignDecision, ArithError> {
    let n = k * BigInt::from(divisibility);
    let witness_n = n.to_u64().ok_or(ArithError::WitnessOverflow)?;
    Ok(SignDecision::Fails { witness_n })
}
