//! Assembly, serialization and re-validation of the overall certificate.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{
    default_divisibility, degree_over_a2, dimension_leading_term, verify_step, StepCertificate,
    StepContext, StepId, VerifyError, CUSP_FORM_PRIME, MIN_PRIME,
};
use crate::divisor::check_rearrangement;
use crate::exact_arith::format_rational;
use crate::geometry::{GeometrySet, GeometryTable};
use crate::symplectic::is_prime;

/// Everything needed to recompute a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateInputs {
    pub p: u64,
    pub divisibility: i64,
    pub alpha_mode: bool,
    pub concrete_n: Option<u64>,
    /// Tables replacing the shipped ones, keyed by their `surface` field.
    pub geometry_overrides: Vec<Value>,
}

impl CertificateInputs {
    pub fn standard(p: u64) -> Self {
        let divisibility = default_divisibility(p);
        CertificateInputs {
            p,
            divisibility,
            alpha_mode: false,
            concrete_n: u64::try_from(divisibility).ok(),
            geometry_overrides: Vec::new(),
        }
    }

    pub fn with_geometry(mut self, tables: &[GeometryTable]) -> Self {
        self.geometry_overrides = tables.iter().map(GeometryTable::to_value).collect();
        self
    }

    fn geometry(&self) -> Result<GeometrySet, VerifyError> {
        let tables = self
            .geometry_overrides
            .iter()
            .enumerate()
            .map(|(k, v)| GeometryTable::from_value(v, &format!("geometry_overrides[{k}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GeometrySet::with_overrides(tables))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    GeneralType,
    /// Obstructions vanish but the required cusp form is not known to exist.
    Conditional,
    OutsideHypotheses,
    NotCertified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub p: u64,
    pub divisibility: i64,
    pub alpha_mode: bool,
    pub rearrangement: bool,
    pub steps: Vec<StepCertificate>,
    pub dimension_leading_term: String,
    pub degree: u64,
    pub verdict: String,
    pub verdict_kind: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plurigenus_lower_bound: Option<String>,
    pub notes: Vec<String>,
    pub inputs: CertificateInputs,
}

impl Certificate {
    pub fn all_steps_vanish(&self) -> bool {
        self.steps.iter().all(StepCertificate::vanishes)
    }

    pub fn failing_steps(&self) -> impl Iterator<Item = &StepCertificate> {
        self.steps.iter().filter(|s| !s.vanishes())
    }

    /// Pretty JSON with a trailing newline; stable across runs.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("certificate serializes");
        text.push('\n');
        text
    }
}

/// Runs the rearrangement check, all five steps and the dimension count.
pub fn verify(inputs: &CertificateInputs) -> Result<Certificate, VerifyError> {
    let p = inputs.p;
    if !is_prime(p) {
        return Err(VerifyError::NotPrime(p));
    }
    let geometry = inputs.geometry()?;
    let ctx = StepContext {
        p,
        divisibility: inputs.divisibility,
        geometry: &geometry,
        alpha_mode: inputs.alpha_mode,
        concrete_n: inputs.concrete_n,
    };
    let steps = StepId::ALL
        .iter()
        .map(|&step| verify_step(step, &ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let rearrangement = check_rearrangement(p)?;
    let leading = dimension_leading_term(p)?;
    let leading_text = format_rational(&leading);
    let degree = degree_over_a2(p)?;

    let all_vanish = steps.iter().all(StepCertificate::vanishes);
    let verdict_kind = if p < MIN_PRIME {
        Verdict::OutsideHypotheses
    } else if !(all_vanish && rearrangement) {
        Verdict::NotCertified
    } else if p >= CUSP_FORM_PRIME {
        Verdict::GeneralType
    } else {
        Verdict::Conditional
    };
    let verdict = match verdict_kind {
        Verdict::GeneralType => format!("general type; leading term {leading_text}"),
        Verdict::Conditional => format!(
            "conditional: all five obstructions vanish, but a weight-2 cusp form is needed. \
             It is not known whether such a cusp form exists for p = {p}"
        ),
        Verdict::OutsideHypotheses => {
            format!("outside the hypotheses: the obstruction estimates need p >= {MIN_PRIME}")
        }
        Verdict::NotCertified => {
            let mut reasons: Vec<String> = steps
                .iter()
                .filter(|s| !s.vanishes())
                .map(|s| format!("step {} does not vanish", s.step))
                .collect();
            if !rearrangement {
                reasons.push("rearrangement identity fails".into());
            }
            format!("not certified: {}", reasons.join(", "))
        }
    };

    let mut notes = vec![
        format!(
            "all arithmetic is exact over Q; n ranges over positive multiples of {}",
            inputs.divisibility
        ),
        "steps E1', E1'' and H1 conclude from a negative pairing with the section Σ; \
         steps H2 and E2 from a bound that is a negative multiple of the fibre"
            .into(),
        "tables for H1, H2 and E2 carry the tag external [O'G] and are replaceable inputs".into(),
        "the leading term is compared with an earlier plurigenus bound only for p = 11, 13; \
         that bound is not computed here"
            .into(),
    ];
    if !inputs.geometry_overrides.is_empty() {
        let names: Vec<&str> = inputs
            .geometry_overrides
            .iter()
            .filter_map(|v| v.get("surface").and_then(Value::as_str))
            .collect();
        notes.push(format!("geometry overridden for: {}", names.join(", ")));
    }
    let plurigenus_lower_bound = (verdict_kind == Verdict::GeneralType).then(|| {
        notes.push(format!(
            "a nonzero weight-2 cusp form f2 for p >= {CUSP_FORM_PRIME} is taken as a known input"
        ));
        notes.push("for any weight-n form f_n, f_n·f2^n·ω^⊗n gives an n-canonical form".into());
        format!("h0(nK) >= ({leading_text})·n^3 + O(n^2)")
    });

    Ok(Certificate {
        p,
        divisibility: inputs.divisibility,
        alpha_mode: inputs.alpha_mode,
        rearrangement,
        steps,
        dimension_leading_term: leading_text,
        degree,
        verdict,
        verdict_kind,
        plurigenus_lower_bound,
        notes,
        inputs: inputs.clone(),
    })
}

/// Certificate with the standard inputs at `p`.
pub fn general_type_verdict(p: u64) -> Result<Certificate, VerifyError> {
    verify(&CertificateInputs::standard(p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Revalidation {
    pub certificate: Certificate,
    pub matches: bool,
    /// 1-based line of the first difference when the texts disagree.
    pub first_difference: Option<usize>,
}

/// Recomputes a certificate from its recorded inputs and compares the
/// serialization byte for byte.
pub fn revalidate(text: &str) -> Result<Revalidation, VerifyError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| VerifyError::Certificate(e.to_string()))?;
    let inputs = value
        .get("inputs")
        .cloned()
        .ok_or_else(|| VerifyError::Certificate("missing inputs".into()))?;
    let inputs: CertificateInputs =
        serde_json::from_value(inputs).map_err(|e| VerifyError::Certificate(e.to_string()))?;
    let certificate = verify(&inputs)?;
    let fresh = certificate.to_json();
    let matches = fresh == text;
    let first_difference = (!matches).then(|| {
        fresh
            .lines()
            .zip(text.lines())
            .position(|(a, b)| a != b)
            .unwrap_or_else(|| fresh.lines().count().min(text.lines().count()))
            + 1
    });
    Ok(Revalidation {
        certificate,
        matches,
        first_difference,
    })
}
