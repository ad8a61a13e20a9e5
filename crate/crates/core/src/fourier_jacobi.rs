//! Truncated Fourier–Jacobi series with opaque coefficients.
//!
//! A series `Σ_m θ_m q^m` along one boundary component is stored up to a
//! truncation `N`. The coefficients θ_m are elements of the free commutative
//! polynomial ring over Q generated by symbols `θ[form, m]`; the boundary
//! coordinates the real coefficients depend on are absorbed into the symbols.
//! The free ring has no zero divisors, so leading coefficients of a product
//! never cancel and vanishing orders add exactly.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FjError {
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("truncation {truncation} must exceed the weight {n} to test vanishing below n")]
    TruncationTooSmall { n: usize, truncation: usize },
}

/// Opaque Fourier–Jacobi coefficient `θ[form, m]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub form: String,
    pub index: usize,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "θ[{},{}]", self.form, self.index)
    }
}

/// Sorted `(symbol, exponent)` pairs with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn symbol(s: Symbol) -> Self {
        Self(vec![(s, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((sa, ea)), Some((sb, eb))) => match sa.cmp(sb) {
                    std::cmp::Ordering::Less => {
                        out.push((sa.clone(), *ea));
                        a.next();
                    }
                    std::cmp::Ordering::Greater => {
                        out.push((sb.clone(), *eb));
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        out.push((sa.clone(), ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => out.extend(a.by_ref().cloned()),
                (None, Some(_)) => out.extend(b.by_ref().cloned()),
                (None, None) => break,
            }
        }
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, e)| {
                if *e == 1 {
                    s.to_string()
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Element of Q[θ-symbols], kept canonical: no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoeffPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn symbol(form: &str, index: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(
            Monomial::symbol(Symbol {
                form: form.to_string(),
                index,
            }),
            Rational::one(),
        );
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, k: &Rational) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }
}

impl Add for &CoeffPoly {
    type Output = CoeffPoly;
    fn add(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Mul for &CoeffPoly {
    type Output = CoeffPoly;
    fn mul(self, rhs: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.0.is_empty() {
                    c.to_string()
                } else if c.is_one() {
                    m.to_string()
                } else {
                    format!("({c})·{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Vanishing order of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishingOrder {
    Exact(usize),
    /// Every stored coefficient vanishes; the order is at least the truncation.
    AtLeast(usize),
}

impl VanishingOrder {
    /// Whether the order is certainly `>= k`.
    pub fn is_at_least(&self, k: usize) -> bool {
        match *self {
            VanishingOrder::Exact(m) => m >= k,
            VanishingOrder::AtLeast(n) => n >= k,
        }
    }
}

impl fmt::Display for VanishingOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VanishingOrder::Exact(m) => write!(f, "{m}"),
            VanishingOrder::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

/// `Σ_{m < N} θ_m q^m` along one boundary component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FjSeries {
    coeffs: Vec<CoeffPoly>,
}

impl FjSeries {
    pub fn zero(truncation: usize) -> Self {
        Self {
            coeffs: vec![CoeffPoly::zero(); truncation],
        }
    }

    pub fn one(truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        if let Some(c) = s.coeffs.first_mut() {
            *c = CoeffPoly::one();
        }
        s
    }

    /// Coefficients beyond the truncation are dropped.
    pub fn from_coeffs(
        truncation: usize,
        coeffs: impl IntoIterator<Item = (usize, CoeffPoly)>,
    ) -> Self {
        let mut s = Self::zero(truncation);
        for (m, c) in coeffs {
            if m < truncation {
                s.coeffs[m] = &s.coeffs[m] + &c;
            }
        }
        s
    }

    /// A form with a fresh symbol `θ[form, m]` at every `first_index <= m < N`.
    /// `first_index = 1` models a cusp form.
    pub fn generic(form: &str, first_index: usize, truncation: usize) -> Self {
        Self::from_coeffs(
            truncation,
            (first_index..truncation).map(|m| (m, CoeffPoly::symbol(form, m))),
        )
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `q^m`; `None` beyond the truncation.
    pub fn coeff(&self, m: usize) -> Option<&CoeffPoly> {
        self.coeffs.get(m)
    }

    pub fn coeffs(&self) -> &[CoeffPoly] {
        &self.coeffs
    }

    pub fn vanishing_order(&self) -> VanishingOrder {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(m) => VanishingOrder::Exact(m),
            None => VanishingOrder::AtLeast(self.truncation()),
        }
    }

    pub fn is_zero_up_to_truncation(&self) -> bool {
        self.coeffs.iter().all(CoeffPoly::is_zero)
    }

    /// Cauchy product, truncated to the smaller truncation.
    pub fn product(&self, other: &FjSeries) -> FjSeries {
        let n = self.truncation().min(other.truncation());
        let mut out = FjSeries::zero(n);
        for (a, fa) in self.coeffs.iter().enumerate().take(n) {
            if fa.is_zero() {
                continue;
            }
            for (b, gb) in other.coeffs.iter().enumerate().take(n - a) {
                if gb.is_zero() {
                    continue;
                }
                out.coeffs[a + b] = &out.coeffs[a + b] + &(fa * gb);
            }
        }
        out
    }

    /// `self^n` for `n >= 1`. If `n·order` reaches the truncation the result
    /// is reported as zero up to truncation rather than padded.
    pub fn power(&self, n: u32) -> Result<FjSeries, FjError> {
        if n == 0 {
            return Err(FjError::ZeroExponent);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.product(self);
        }
        Ok(acc)
    }
}

impl Add for &FjSeries {
    type Output = FjSeries;
    fn add(self, rhs: &FjSeries) -> FjSeries {
        let n = self.truncation().min(rhs.truncation());
        FjSeries {
            coeffs: (0..n).map(|m| &self.coeffs[m] + &rhs.coeffs[m]).collect(),
        }
    }
}

/// Outcome of checking that `Φ = f_n·f₂ⁿ` vanishes to order at least `n`.
#[derive(Debug, Clone)]
pub struct VanishingReport {
    pub n: usize,
    pub truncation: usize,
    pub phi: FjSeries,
    pub order: VanishingOrder,
    /// `Φ[m] = 0` for every `m < n`.
    pub vanishes_below_n: bool,
    /// `Φ[n] ≠ 0`: the bound is attained.
    pub attained_at_n: bool,
    /// The series product agrees with the direct sum over compositions
    /// `m₀ + m₁ + ⋯ + m_n = m` at every stored index.
    pub convolution_agrees: bool,
}

impl VanishingReport {
    pub fn holds(&self) -> bool {
        self.vanishes_below_n && self.convolution_agrees
    }
}

/// Builds a generic weight-`n` form `f_n` (symbols from index 0) and a generic
/// cusp form `f₂` (symbols from index 1) and checks `Φ = f_n·f₂ⁿ`.
pub fn check_cusp_power_vanishing(n: usize, truncation: usize) -> Result<VanishingReport, FjError> {
    let f_n = FjSeries::generic("fn", 0, truncation);
    let f2 = FjSeries::generic("f2", 1, truncation);
    check_cusp_power_vanishing_with(&f_n, &f2, n)
}

/// Same check for caller-supplied `f_n` and `f₂`.
pub fn check_cusp_power_vanishing_with(
    f_n: &FjSeries,
    f2: &FjSeries,
    n: usize,
) -> Result<VanishingReport, FjError> {
    let truncation = f_n.truncation().min(f2.truncation());
    if truncation <= n || n == 0 {
        return Err(FjError::TruncationTooSmall { n, truncation });
    }
    let exponent = u32::try_from(n).map_err(|_| FjError::TruncationTooSmall { n, truncation })?;
    let phi = f_n.product(&f2.power(exponent)?);
    let direct = composition_sum(f_n, f2, n, truncation);
    let convolution_agrees = direct.iter().zip(phi.coeffs()).all(|(a, b)| a == b);
    let vanishes_below_n = phi.coeffs()[..n].iter().all(CoeffPoly::is_zero);
    let attained_at_n = !phi.coeffs()[n].is_zero();
    Ok(VanishingReport {
        n,
        truncation,
        order: phi.vanishing_order(),
        phi,
        vanishes_below_n,
        attained_at_n,
        convolution_agrees,
    })
}

/// `θ_{m,Φ} = Σ_{m₀+⋯+m_n=m} θ_{m₀,f_n} ∏_{k≥1} θ_{m_k,f₂}`, summed directly over
/// all compositions of `m` into `n + 1` parts.
fn composition_sum(f_n: &FjSeries, f2: &FjSeries, n: usize, truncation: usize) -> Vec<CoeffPoly> {
    let mut out = vec![CoeffPoly::zero(); truncation];
    let mut parts = vec![0usize; n + 1];
    for (m, slot) in out.iter_mut().enumerate() {
        visit_compositions(m, 0, &mut parts, &mut |parts| {
            let mut term = f_n.coeffs[parts[0]].clone();
            for &mk in &parts[1..] {
                if term.is_zero() {
                    break;
                }
                term = &term * &f2.coeffs[mk];
            }
            *slot = &*slot + &term;
        });
    }
    out
}

fn visit_compositions(
    rest: usize,
    pos: usize,
    parts: &mut [usize],
    visit: &mut impl FnMut(&[usize]),
) {
    if pos + 1 == parts.len() {
        parts[pos] = rest;
        visit(parts);
        return;
    }
    for k in 0..=rest {
        parts[pos] = k;
        visit_compositions(rest - k, pos + 1, parts, visit);
    }
}

/// Plain-text table of `Φ = f_n·f₂ⁿ` and its vanishing order.
pub fn render_report(report: &VanishingReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "Phi = fn * f2^{n}, n = {n}, truncation {t}\n",
        n = report.n,
        t = report.truncation
    ));
    for (m, c) in report.phi.coeffs().iter().enumerate() {
        let shown = if c.num_terms() > 6 {
            format!("<{} terms>", c.num_terms())
        } else {
            c.to_string()
        };
        out.push_str(&format!("m={m:<3} {shown}\n"));
    }
    out.push_str(&format!("vanishing order: {}\n", report.order));
    out.push_str(&format!(
        "coefficients below m={} vanish: {}\n",
        report.n, report.vanishes_below_n
    ));
    out.push_str(&format!(
        "coefficient at m={} nonzero: {}\n",
        report.n, report.attained_at_n
    ));
    out.push_str(&format!(
        "composition-sum cross-check: {}\n",
        report.convolution_agrees
    ));
    out
}
