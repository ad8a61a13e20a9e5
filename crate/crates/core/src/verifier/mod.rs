//! The five obstruction checks, the dimension count and the overall verdict.
//!
//! Each step takes `nℰ` minus boundary classes already accounted for, minus
//! `i` times the surface under study, eliminates `K`, restricts to the surface
//! as an upper bound and decides a sign over all admissible `(n, i)`.

mod certificate;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::divisor::{
    eliminate_k_with, script_e_unrestricted, star_form_with_lambda, DivisorClass, DivisorError,
    DivisorLabel,
};
use crate::exact_arith::{
    format_rational, int, max_over_i, negative_for_all_admissible_n, rat, AffineForm, ArithError,
    CompactAffine, Endpoint, IRange, Rational, SignDecision,
};
use crate::geometry::{
    restrict, sigma_pair, DiscardedTerm, Domain, GeometryError, GeometrySet, GeometryTable,
    RestrictMode, SurfaceClass, FIB,
};
use crate::symplectic::finite::prime_pattern_count_mod;
use crate::symplectic::{is_prime, sp4_order_mod, GroupError};

pub use certificate::{
    general_type_verdict, revalidate, verify, Certificate, CertificateInputs, Revalidation, Verdict,
};

/// Smallest prime covered by the obstruction estimates.
pub const MIN_PRIME: u64 = 5;
/// Smallest prime for which a weight-2 cusp form is known to exist.
pub const CUSP_FORM_PRIME: u64 = 11;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("divisibility must be positive, got {0}")]
    BadDivisibility(i64),
    #[error("concrete n must be positive")]
    BadConcreteN,
    #[error("step {step}: premise broken, {detail}")]
    Premise { step: StepId, detail: String },
    #[error("p = {0} is too large for exact 64-bit degree arithmetic")]
    Overflow(u64),
    #[error("malformed certificate: {0}")]
    Certificate(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StepId {
    #[serde(rename = "E1'")]
    E1Prime,
    #[serde(rename = "E1''")]
    E1DoublePrime,
    H1,
    H2,
    E2,
}

impl StepId {
    pub const ALL: [StepId; 5] = [
        StepId::E1Prime,
        StepId::E1DoublePrime,
        StepId::H1,
        StepId::H2,
        StepId::E2,
    ];

    pub fn surface(&self) -> &'static str {
        self.label().name()
    }

    fn label(&self) -> DivisorLabel {
        match self {
            StepId::E1Prime => DivisorLabel::E1Prime,
            StepId::E1DoublePrime => DivisorLabel::E1DoublePrime,
            StepId::H1 => DivisorLabel::H1,
            StepId::H2 => DivisorLabel::H2,
            StepId::E2 => DivisorLabel::E2,
        }
    }

    /// Surfaces whose `n/2` multiples are already subtracted before this step.
    fn previous(&self) -> &'static [DivisorLabel] {
        use DivisorLabel::*;
        match self {
            StepId::E1Prime => &[],
            StepId::E1DoublePrime => &[E1Prime],
            StepId::H1 => &[E1Prime, E1DoublePrime],
            StepId::H2 => &[E1Prime, E1DoublePrime, H1],
            StepId::E2 => &[E1Prime, E1DoublePrime, H1, H2],
        }
    }

    fn i_range(&self, p: u64) -> IRange {
        match self {
            StepId::H2 => IRange::from_zero_unbounded(),
            StepId::E2 => IRange::up_to_multiple_of_n(int(1) - int(2) / p_rational(p)),
            _ => IRange::up_to_multiple_of_n(rat(1, 2)),
        }
    }

    fn criterion(&self) -> Criterion {
        match self {
            StepId::H2 | StepId::E2 => Criterion::NegativeFibreMultiple,
            _ => Criterion::SigmaNegative,
        }
    }
}

impl fmt::Display for StepId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.surface())
    }
}

/// How vanishing of sections is concluded from the bounding class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Intersection with Σ is negative for every admissible `(n, i)`.
    SigmaNegative,
    /// The class is a negative multiple of the ruling fibre.
    NegativeFibreMultiple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum StepVerdict {
    Vanishes,
    Fails { witness_n: u64, witness_i: i64 },
    Inconclusive { reason: String },
}

impl StepVerdict {
    pub fn vanishes(&self) -> bool {
        matches!(self, StepVerdict::Vanishes)
    }
}

/// The same step rerun with the Hodge coefficient replaced by `α_p = 3 − 10/p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaComparison {
    #[serde(with = "crate::exact_arith::rational_string")]
    pub alpha: Rational,
    pub bounding_class: SurfaceClass,
    pub sigma_pairing: CompactAffine,
    pub worst_case: Option<CompactAffine>,
    pub verdict: StepVerdict,
    /// The worst case grows more slowly in `n` than with coefficient 3.
    pub tightens: bool,
}

/// Exhaustive evaluation at one value of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConcreteCheck {
    pub n: u64,
    pub admissible_n: bool,
    pub i_from: i64,
    pub i_to: i64,
    pub points: u64,
    /// Largest value of the decision form, `None` when the range is empty.
    pub max_value: Option<CompactAffine>,
    pub argmax_i: Option<i64>,
    pub all_negative: bool,
    /// The maximum equals the symbolic worst case at this `n`.
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepCertificate {
    pub step: StepId,
    pub surface: String,
    pub class: String,
    pub i_range: IRange,
    pub i_range_description: String,
    pub ambient_class: DivisorClass,
    pub bounding_class: SurfaceClass,
    pub criterion: Criterion,
    pub sigma_pairing: CompactAffine,
    pub worst_case: Option<CompactAffine>,
    pub endpoint: Option<Endpoint>,
    pub verdict: StepVerdict,
    pub discarded: Vec<DiscardedTerm>,
    pub provenance: BTreeMap<&'static str, Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_comparison: Option<AlphaComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concrete_check: Option<ConcreteCheck>,
    pub notes: Vec<String>,
}

impl StepCertificate {
    pub fn vanishes(&self) -> bool {
        self.verdict.vanishes()
    }
}

/// Inputs shared by all five steps.
#[derive(Debug, Clone)]
pub struct StepContext<'a> {
    pub p: u64,
    pub divisibility: i64,
    pub geometry: &'a GeometrySet,
    pub alpha_mode: bool,
    pub concrete_n: Option<u64>,
}

impl<'a> StepContext<'a> {
    /// `24p`, no α comparison, concrete check at `n = 24p`.
    pub fn standard(p: u64, geometry: &'a GeometrySet) -> Self {
        let divisibility = default_divisibility(p);
        StepContext {
            p,
            divisibility,
            geometry,
            alpha_mode: false,
            concrete_n: u64::try_from(divisibility).ok(),
        }
    }
}

pub fn default_divisibility(p: u64) -> i64 {
    24 * i64::try_from(p).unwrap_or(i64::MAX / 24)
}

fn p_rational(p: u64) -> Rational {
    Rational::from_integer(p.into())
}

/// `α_p = 3 − 10/p`.
pub fn alpha_p(p: u64) -> Rational {
    int(3) - int(10) / p_rational(p)
}

fn step_class(step: StepId, p: u64) -> (DivisorClass, String) {
    let n = AffineForm::n();
    let half_n = n.scale(&rat(1, 2));
    let mut class = script_e_unrestricted(p)
        .scale_affine(&n)
        .expect("constant times n");
    let mut text = String::from("nℰ");
    let previous = step.previous();
    for label in previous {
        class = &class - &DivisorClass::term(*label, half_n.clone());
    }
    if !previous.is_empty() {
        let names: Vec<&str> = previous.iter().map(DivisorLabel::name).collect();
        text.push_str(&format!(" − (n/2)({})", names.join(" + ")));
    }
    class = &class - &DivisorClass::term(step.label(), AffineForm::i());
    text.push_str(&format!(" − i·{}", step.surface()));
    (class, text)
}

struct Evaluation {
    bounding_class: SurfaceClass,
    sigma_pairing: AffineForm,
    decision_form: Option<AffineForm>,
    worst: Option<(AffineForm, Endpoint)>,
    verdict: StepVerdict,
    discarded: Vec<DiscardedTerm>,
    used: BTreeMap<DivisorLabel, crate::geometry::Provenance>,
}

fn evaluate(
    step: StepId,
    ambient: &DivisorClass,
    table: &GeometryTable,
    domain: &Domain,
) -> Result<Evaluation, VerifyError> {
    let restricted = restrict(ambient, table, RestrictMode::UpperBound(domain))?;
    let bounding_class = restricted.class;
    let sigma_pairing = sigma_pair(&bounding_class, table)?;
    let decision_form = match step.criterion() {
        Criterion::SigmaNegative => Some(sigma_pairing.clone()),
        Criterion::NegativeFibreMultiple => {
            if bounding_class.iter().all(|(label, _)| label == FIB) {
                Some(bounding_class.coeff(FIB))
            } else {
                None
            }
        }
    };
    let (worst, verdict) = match &decision_form {
        None => (
            None,
            StepVerdict::Inconclusive {
                reason: "bounding class is not a multiple of the fibre".into(),
            },
        ),
        Some(_) if domain.is_empty()? => (None, StepVerdict::Vanishes),
        Some(form) => decide(form, domain)?,
    };
    Ok(Evaluation {
        bounding_class,
        sigma_pairing,
        decision_form,
        worst,
        verdict,
        discarded: restricted.discarded,
        used: restricted.used,
    })
}

fn decide(
    form: &AffineForm,
    domain: &Domain,
) -> Result<(Option<(AffineForm, Endpoint)>, StepVerdict), VerifyError> {
    let d = domain.divisibility;
    let range = &domain.i_range;
    match max_over_i(form, range, d) {
        Ok((worst, endpoint)) => {
            let verdict = match negative_for_all_admissible_n(&worst, d)? {
                SignDecision::Holds => StepVerdict::Vanishes,
                SignDecision::Fails { witness_n } => {
                    let n = BigInt::from(witness_n);
                    let (lo, hi) = range.bounds_at(&n);
                    let i = match endpoint {
                        Endpoint::Upper => hi.expect("upper endpoint exists"),
                        Endpoint::Lower | Endpoint::Any => lo,
                    };
                    StepVerdict::Fails {
                        witness_n,
                        witness_i: to_i64(&i)?,
                    }
                }
            };
            Ok((Some((worst, endpoint)), verdict))
        }
        Err(ArithError::UnboundedRange(_)) => {
            // Increasing in i without bound: positive once i is large enough.
            let n = BigInt::from(d);
            let at_zero = form.evaluate(&n, &BigInt::zero());
            let crossing = (-at_zero / &form.ci).ceil().to_integer();
            let (lo, _) = range.bounds_at(&n);
            let i = crossing.max(lo);
            let witness_n = u64::try_from(d).map_err(|_| ArithError::WitnessOverflow)?;
            Ok((
                None,
                StepVerdict::Fails {
                    witness_n,
                    witness_i: to_i64(&i)?,
                },
            ))
        }
        Err(e) => Err(e.into()),
    }
}

fn to_i64(v: &BigInt) -> Result<i64, VerifyError> {
    v.to_i64()
        .ok_or(VerifyError::Arith(ArithError::WitnessOverflow))
}

fn concrete_check(
    form: &AffineForm,
    worst: Option<&AffineForm>,
    domain: &Domain,
    n: u64,
) -> ConcreteCheck {
    let nb = BigInt::from(n);
    let (lo, hi) = domain.i_range.bounds_at(&nb);
    // Unbounded ranges are sampled over n + 1 values.
    let hi = hi.unwrap_or_else(|| &lo + &nb);
    let mut best: Option<(Rational, BigInt)> = None;
    let mut i = lo.clone();
    let mut points = 0u64;
    while i <= hi {
        let v = form.evaluate(&nb, &i);
        if best.as_ref().is_none_or(|(b, _)| &v > b) {
            best = Some((v, i.clone()));
        }
        points += 1;
        i += 1;
    }
    let all_negative = best.as_ref().is_none_or(|(v, _)| v.is_negative());
    let agrees = match (&best, worst) {
        (Some((v, _)), Some(w)) => *v == w.evaluate(&nb, &BigInt::zero()),
        (None, _) => true,
        (Some(_), None) => false,
    };
    let admissible_n = domain.divisibility > 0 && n.is_multiple_of(domain.divisibility as u64);
    ConcreteCheck {
        n,
        admissible_n,
        i_from: lo.to_i64().unwrap_or(i64::MIN),
        i_to: hi.to_i64().unwrap_or(i64::MAX),
        points,
        max_value: best
            .as_ref()
            .map(|(v, _)| CompactAffine::Constant(format_rational(v))),
        argmax_i: best.as_ref().and_then(|(_, i)| i.to_i64()),
        all_negative,
        agrees,
    }
}

/// Runs one step against the tables in `ctx.geometry`.
pub fn verify_step(step: StepId, ctx: &StepContext<'_>) -> Result<StepCertificate, VerifyError> {
    let p = ctx.p;
    if !is_prime(p) {
        return Err(VerifyError::NotPrime(p));
    }
    if ctx.divisibility <= 0 {
        return Err(VerifyError::BadDivisibility(ctx.divisibility));
    }
    if ctx.concrete_n == Some(0) {
        return Err(VerifyError::BadConcreteN);
    }
    let table = ctx.geometry.get(step.surface())?;
    let mut notes = Vec::new();

    if step == StepId::E2 {
        let lambda = DivisorClass::term(DivisorLabel::Lambda, AffineForm::constant(int(1)));
        let r = restrict(&lambda, table, RestrictMode::Exact)?;
        if !r.class.is_zero() {
            return Err(VerifyError::Premise {
                step,
                detail: format!("LAMBDA restricts to {} instead of 0", r.class),
            });
        }
        notes.push("LAMBDA restricts trivially, so α_p does not enter this step".into());
    }

    let i_range = step.i_range(p);
    let domain = Domain {
        divisibility: ctx.divisibility,
        i_range: i_range.clone(),
    };
    let (class, class_text) = step_class(step, p);
    let ambient = eliminate_k_with(
        &class,
        &script_e_unrestricted(p),
        &star_form_with_lambda(p, int(3)),
    )?;
    let eval = evaluate(step, &ambient, table, &domain)?;

    if p < MIN_PRIME {
        notes.push(format!(
            "p = {p} is below the range p >= {MIN_PRIME} of the estimates"
        ));
    }
    if domain.is_empty()? {
        notes.push("the i-range is empty, so there is nothing to bound".into());
    }
    if step == StepId::E1Prime {
        notes.push(
            "pairing taken as (1/p - 3/4)n + i; the reading (1/p - 1/4)n + i is positive at i = n/2 - 1 for every p".into(),
        );
    }

    let alpha_comparison = if ctx.alpha_mode {
        let alpha = alpha_p(p);
        let ambient = eliminate_k_with(
            &class,
            &script_e_unrestricted(p),
            &star_form_with_lambda(p, alpha.clone()),
        )?;
        let alt = evaluate(step, &ambient, table, &domain)?;
        let tightens = match (&eval.worst, &alt.worst) {
            (Some((w, _)), Some((a, _))) => a.cn < w.cn,
            _ => false,
        };
        Some(AlphaComparison {
            alpha,
            bounding_class: alt.bounding_class,
            sigma_pairing: CompactAffine::from(&alt.sigma_pairing),
            worst_case: alt.worst.as_ref().map(|(w, _)| CompactAffine::from(w)),
            verdict: alt.verdict,
            tightens,
        })
    } else {
        None
    };

    let concrete_check = match (ctx.concrete_n, &eval.decision_form) {
        (Some(n), Some(form)) => Some(concrete_check(
            form,
            eval.worst.as_ref().map(|(w, _)| w),
            &domain,
            n,
        )),
        _ => None,
    };

    let mut provenance: BTreeMap<&'static str, Vec<String>> = BTreeMap::new();
    for (label, tag) in &eval.used {
        provenance
            .entry(tag.tag())
            .or_default()
            .push(label.name().to_string());
    }
    for d in eval
        .discarded
        .iter()
        .filter(|d| !eval.used.keys().any(|l| l.name() == d.term))
    {
        provenance
            .entry(d.provenance.tag())
            .or_default()
            .push(d.term.clone());
    }

    Ok(StepCertificate {
        step,
        surface: table.surface.clone(),
        class: class_text,
        i_range_description: i_range.describe(),
        i_range,
        ambient_class: ambient,
        bounding_class: eval.bounding_class,
        criterion: step.criterion(),
        sigma_pairing: CompactAffine::from(&eval.sigma_pairing),
        worst_case: eval.worst.as_ref().map(|(w, _)| CompactAffine::from(w)),
        endpoint: eval.worst.as_ref().map(|(_, e)| *e),
        verdict: eval.verdict,
        discarded: eval.discarded,
        provenance,
        alpha_comparison,
        concrete_check,
        notes,
    })
}

fn with_shipped(step: StepId, p: u64) -> Result<StepCertificate, VerifyError> {
    let geometry = GeometrySet::shipped();
    verify_step(step, &StepContext::standard(p, &geometry))
}

pub fn verify_step_e1_prime(p: u64) -> Result<StepCertificate, VerifyError> {
    with_shipped(StepId::E1Prime, p)
}

pub fn verify_step_e1_double_prime(p: u64) -> Result<StepCertificate, VerifyError> {
    with_shipped(StepId::E1DoublePrime, p)
}

pub fn verify_step_h1(p: u64) -> Result<StepCertificate, VerifyError> {
    with_shipped(StepId::H1, p)
}

pub fn verify_step_h2(p: u64) -> Result<StepCertificate, VerifyError> {
    with_shipped(StepId::H2, p)
}

pub fn verify_step_e2(p: u64) -> Result<StepCertificate, VerifyError> {
    with_shipped(StepId::E2, p)
}

/// Leading coefficient `p²(p² + 1)/8640` of the cusp form dimension in weight `n`.
pub fn dimension_leading_term(p: u64) -> Result<Rational, VerifyError> {
    Ok(Rational::from_integer(degree_over_a2(p)?.into()) / int(8640))
}

/// `p²(p² + 1)`, the degree of the forgetful map to the principally polarised space.
pub fn degree_over_a2(p: u64) -> Result<u64, VerifyError> {
    if !is_prime(p) {
        return Err(VerifyError::NotPrime(p));
    }
    let p2 = p.checked_mul(p).ok_or(VerifyError::Overflow(p))?;
    p2.checked_mul(p2 + 1).ok_or(VerifyError::Overflow(p))
}

/// The same degree as `|Sp(4, F_p)|` over the number of residues of the
/// conjugated group, counted by enumeration. Feasible for `p <= 7`.
pub fn degree_by_enumeration(p: u64) -> Result<u64, VerifyError> {
    let total = sp4_order_mod(p)?;
    let image = u128::from(prime_pattern_count_mod(p)?);
    u64::try_from(total / image).map_err(|_| VerifyError::Overflow(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(c: &CompactAffine) -> AffineForm {
        AffineForm::try_from(c.clone()).unwrap()
    }

    fn inv(p: u64) -> Rational {
        int(1) / p_rational(p)
    }

    #[test]
    fn step_one_matches_display() {
        for p in [5, 7, 11, 13] {
            let c = verify_step_e1_prime(p).unwrap();
            assert_eq!(
                form(&c.sigma_pairing),
                AffineForm::new(int(0), inv(p) - rat(3, 4), int(1))
            );
            assert_eq!(
                form(c.worst_case.as_ref().unwrap()),
                AffineForm::new(int(-1), inv(p) - rat(1, 4), int(0))
            );
            assert_eq!(c.endpoint, Some(Endpoint::Upper));
            assert!(c.vanishes());
            assert!(c.concrete_check.as_ref().unwrap().agrees);
        }
    }

    #[test]
    fn step_one_bounding_class() {
        let c = verify_step_e1_prime(5).unwrap();
        let i = AffineForm::i();
        let expected = SurfaceClass::from_terms([
            ("SIGMA", i.scale(&int(3))),
            (FIB, AffineForm::new(int(0), rat(1, 5) - rat(3, 4), int(4))),
        ]);
        assert_eq!(c.bounding_class, expected);
        let dropped: Vec<&str> = c.discarded.iter().map(|d| d.term.as_str()).collect();
        assert_eq!(dropped, ["DELTA1", "H0", "H0HAT", "G"]);
    }

    #[test]
    fn step_one_at_p11_concrete() {
        let c = verify_step_e1_prime(11).unwrap();
        let pairing = form(&c.sigma_pairing);
        assert_eq!(pairing.evaluate_i64(264, 131), int(-43));
    }

    #[test]
    fn step_one_fails_at_p3() {
        let c = verify_step_e1_prime(3).unwrap();
        assert_eq!(
            c.verdict,
            StepVerdict::Fails {
                witness_n: 72,
                witness_i: 35
            }
        );
        assert_eq!(
            form(c.worst_case.as_ref().unwrap()),
            AffineForm::new(int(-1), rat(1, 12), int(0))
        );
    }

    #[test]
    fn step_two_matches_display() {
        for p in [2, 3, 5, 7] {
            let c = verify_step_e1_double_prime(p).unwrap();
            assert_eq!(
                form(&c.sigma_pairing),
                AffineForm::new(int(0), inv(p) - rat(5, 4), int(1))
            );
            assert_eq!(
                form(c.worst_case.as_ref().unwrap()),
                AffineForm::new(int(-1), inv(p) - rat(3, 4), int(0))
            );
            assert!(c.vanishes());
        }
        let c = verify_step_e1_double_prime(7).unwrap();
        assert_eq!(form(&c.sigma_pairing).evaluate_i64(168, 0), int(-186));
        let p5 = verify_step_e1_double_prime(5).unwrap();
        assert_eq!(form(&p5.sigma_pairing).evaluate_i64(168, 0), rat(-882, 5));
    }

    #[test]
    fn step_three_and_alpha_mode() {
        let geometry = GeometrySet::shipped();
        let mut ctx = StepContext::standard(5, &geometry);
        ctx.alpha_mode = true;
        let c = verify_step(StepId::H1, &ctx).unwrap();
        assert!(c.vanishes());
        assert_eq!(
            form(&c.sigma_pairing),
            AffineForm::new(int(0), rat(1, 5) - rat(3, 4), int(0))
        );
        let alpha = c.alpha_comparison.unwrap();
        assert_eq!(alpha.alpha, int(1));
        assert!(alpha.verdict.vanishes());
        assert!(alpha.tightens);
        assert_eq!(
            form(&alpha.sigma_pairing),
            AffineForm::new(int(0), rat(1, 30) - rat(3, 4), int(0))
        );
        assert!(c.provenance.contains_key("external [O'G]"));
    }

    #[test]
    fn withheld_table_is_named() {
        let mut geometry = GeometrySet::shipped();
        geometry.remove("H1");
        let err = verify_step(StepId::H1, &StepContext::standard(5, &geometry)).unwrap_err();
        assert!(err.to_string().contains("H1"));
    }

    #[test]
    fn step_four_is_negative_fibre_multiple() {
        for p in [5, 13] {
            let c = verify_step_h2(p).unwrap();
            assert!(c.vanishes());
            assert_eq!(c.criterion, Criterion::NegativeFibreMultiple);
            assert_eq!(
                c.bounding_class,
                SurfaceClass::from_terms([(FIB, AffineForm::new(int(0), rat(-5, 4), int(-1)))])
            );
            assert_eq!(c.endpoint, Some(Endpoint::Lower));
        }
    }

    #[test]
    fn step_five_and_premise() {
        for p in [5, 11] {
            let c = verify_step_e2(p).unwrap();
            assert!(c.vanishes());
            assert!(c.notes.iter().any(|n| n.contains("α_p")));
        }
        let c = verify_step_e2(2).unwrap();
        assert!(c.vanishes());
        assert_eq!(c.worst_case, None);

        let mut geometry = GeometrySet::shipped();
        let table = geometry.get_mut("E2").unwrap();
        table.restrictions.insert(
            DivisorLabel::Lambda,
            crate::geometry::Restriction::Class(SurfaceClass::from_terms([(
                FIB,
                AffineForm::constant(rat(1, 12)),
            )])),
        );
        let err = verify_step(StepId::E2, &StepContext::standard(5, &geometry)).unwrap_err();
        assert!(matches!(
            err,
            VerifyError::Premise {
                step: StepId::E2,
                ..
            }
        ));
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(
            verify_step_e1_prime(9).unwrap_err(),
            VerifyError::NotPrime(9)
        );
        assert_eq!(degree_over_a2(1).unwrap_err(), VerifyError::NotPrime(1));
    }

    #[test]
    fn dimension_terms() {
        assert_eq!(dimension_leading_term(11).unwrap(), rat(7381, 4320));
        assert_eq!(dimension_leading_term(5).unwrap(), rat(65, 864));
        assert_eq!(dimension_leading_term(2).unwrap(), rat(1, 432));
        assert_eq!(degree_over_a2(11).unwrap(), 14762);
        assert_eq!(degree_over_a2(2).unwrap(), 20);
        assert_eq!(degree_by_enumeration(2).unwrap(), 20);
        assert_eq!(degree_by_enumeration(3).unwrap(), 90);
    }

    #[test]
    fn rearrangement_is_available() {
        assert!(crate::divisor::check_rearrangement(5).unwrap());
    }
}
