//! Restriction of ambient divisor classes to the obstruction surfaces and
//! intersection with the distinguished section Σ.
//!
//! Each surface is described by a [`GeometryTable`]: for every ambient label
//! either an exact restriction (a combination of Σ, the ruling fibre and any
//! extra curve classes), the marker `EFFECTIVE_DROP` (the restriction is an
//! effective class that may be discarded when subtracted), or a fibre multiple
//! `κ·FIB` with only a lower bound on `κ` known.
//!
//! In upper-bound mode the discards only ever enlarge the class whose
//! sections are being counted, so a vanishing conclusion for the bound
//! implies one for the original class.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::divisor::{DivisorClass, DivisorLabel};
use crate::exact_arith::{
    format_rational, max_over_i, negative_for_all_admissible_n, nonpositive_for_all_admissible_n,
    parse_rational, AffineForm, ArithError, CompactAffine, IRange, Rational,
};

pub const SIGMA: &str = "SIGMA";
pub const FIB: &str = "FIB";
pub const G: &str = "G";

const E1_PRIME_JSON: &str = include_str!("../data/e1_prime.json");
const E1_DOUBLE_PRIME_JSON: &str = include_str!("../data/e1_double_prime.json");
const H1_JSON: &str = include_str!("../data/h1.json");
const H2_JSON: &str = include_str!("../data/h2.json");
const E2_JSON: &str = include_str!("../data/e2.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("{location}: {message}")]
    Parse { location: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("surface {surface}: no restriction entry for {label}")]
    MissingEntry {
        surface: String,
        label: DivisorLabel,
    },
    #[error(
        "surface {surface}: entry for {label} is only an inequality, not usable in exact mode"
    )]
    InexactEntry {
        surface: String,
        label: DivisorLabel,
    },
    #[error("surface {surface}: coefficient {coefficient} of {label} is not provably <= 0, so it cannot be bounded")]
    CannotBound {
        surface: String,
        label: String,
        coefficient: Box<AffineForm>,
    },
    #[error("surface {surface}: no Σ-pairing declared for {label}")]
    UndeclaredPairing { surface: String, label: String },
    #[error("no geometry table for surface {0}")]
    MissingTable(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Where a table entry comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "paper-derived")]
    PaperDerived,
    #[serde(rename = "external [O'G]")]
    External,
}

impl Provenance {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "paper-derived" => Some(Provenance::PaperDerived),
            "external [O'G]" => Some(Provenance::External),
            _ => None,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::PaperDerived => "paper-derived",
            Provenance::External => "external [O'G]",
        }
    }
}

/// Combination of curve classes on a surface with affine coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurfaceClass {
    coeffs: BTreeMap<String, AffineForm>,
}

impl SurfaceClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<S: Into<String>>(terms: impl IntoIterator<Item = (S, AffineForm)>) -> Self {
        let mut c = Self::zero();
        for (l, a) in terms {
            c.add_term(l.into(), a);
        }
        c
    }

    fn add_term(&mut self, label: String, coeff: AffineForm) {
        let merged = match self.coeffs.remove(&label) {
            Some(old) => old + coeff,
            None => coeff,
        };
        if !merged.is_zero() {
            self.coeffs.insert(label, merged);
        }
    }

    pub fn coeff(&self, label: &str) -> AffineForm {
        self.coeffs.get(label).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &AffineForm)> {
        self.coeffs.iter().map(|(l, c)| (l.as_str(), c))
    }

    pub fn add(&self, other: &SurfaceClass) -> SurfaceClass {
        let mut out = self.clone();
        for (l, c) in other.iter() {
            out.add_term(l.to_string(), c.clone());
        }
        out
    }

    pub fn scale_affine(&self, k: &AffineForm) -> Result<SurfaceClass, ArithError> {
        let mut out = SurfaceClass::zero();
        for (l, c) in self.iter() {
            out.add_term(l.to_string(), c.try_mul(k)?);
        }
        Ok(out)
    }

    fn without(&self, label: &str) -> SurfaceClass {
        let mut out = self.clone();
        out.coeffs.remove(label);
        out
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(l, c)| format!("({c})·{l}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for SurfaceClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<&str, CompactAffine> = self
            .iter()
            .map(|(l, c)| (l, CompactAffine::from(c)))
            .collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SurfaceClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, CompactAffine>::deserialize(d)?;
        let mut out = SurfaceClass::zero();
        for (label, repr) in map {
            out.add_term(
                label,
                AffineForm::try_from(repr).map_err(serde::de::Error::custom)?,
            );
        }
        Ok(out)
    }
}

/// Table entry for one ambient label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Restriction {
    Class(SurfaceClass),
    /// Effective restriction, only usable as a discard when subtracted.
    EffectiveDrop,
    /// `κ·FIB` with integer `κ >= min`.
    FibreMultiple {
        min: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeometryTable {
    pub surface: String,
    /// Name of the ruling fibre on this surface, for display.
    pub fibre_name: String,
    /// Σ·X for each curve class X that has a declared pairing.
    pub sigma_pairings: BTreeMap<String, Rational>,
    /// Curve classes known to be effective, discardable when subtracted.
    pub effective: BTreeMap<String, Provenance>,
    pub restrictions: BTreeMap<DivisorLabel, Restriction>,
    pub provenance: BTreeMap<DivisorLabel, Provenance>,
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> GeometryError {
    GeometryError::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn surface_key(key: &str) -> String {
    match key {
        "sigma" => SIGMA.to_string(),
        "fib" => FIB.to_string(),
        "g" => G.to_string(),
        other => other.to_string(),
    }
}

fn json_key(label: &str) -> String {
    match label {
        SIGMA => "sigma".to_string(),
        FIB => "fib".to_string(),
        G => "g".to_string(),
        other => other.to_string(),
    }
}

fn rational_at(v: &Value, location: &str) -> Result<Rational, GeometryError> {
    let s = v
        .as_str()
        .ok_or_else(|| parse_err(location, "expected a rational string \"num/den\""))?;
    parse_rational(s).map_err(|e| parse_err(location, e.to_string()))
}

fn object_at<'a>(v: &'a Value, location: &str) -> Result<&'a Map<String, Value>, GeometryError> {
    v.as_object()
        .ok_or_else(|| parse_err(location, "expected an object"))
}

impl GeometryTable {
    pub fn from_json_str(text: &str) -> Result<Self, GeometryError> {
        let value: Value = serde_json::from_str(text).map_err(|e| {
            parse_err(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        Self::from_value(&value, "$")
    }

    pub fn from_value(value: &Value, root: &str) -> Result<Self, GeometryError> {
        let obj = object_at(value, root)?;
        for key in obj.keys() {
            if ![
                "surface",
                "fibre_name",
                "pairings",
                "effective",
                "restrictions",
                "provenance",
            ]
            .contains(&key.as_str())
            {
                return Err(parse_err(format!("{root}.{key}"), "unknown field"));
            }
        }
        let field = |name: &str| {
            obj.get(name)
                .ok_or_else(|| parse_err(format!("{root}.{name}"), "missing field"))
        };
        let surface = field("surface")?
            .as_str()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| parse_err(format!("{root}.surface"), "expected a non-empty string"))?
            .to_string();
        let fibre_name = match obj.get("fibre_name") {
            Some(v) => v
                .as_str()
                .ok_or_else(|| parse_err(format!("{root}.fibre_name"), "expected a string"))?
                .to_string(),
            None => FIB.to_string(),
        };

        let loc = format!("{root}.pairings");
        let mut sigma_pairings = BTreeMap::new();
        for (key, v) in object_at(field("pairings")?, &loc)? {
            let target = key.strip_prefix("sigma_").ok_or_else(|| {
                parse_err(
                    format!("{loc}.{key}"),
                    "pairing keys look like sigma_<class>",
                )
            })?;
            sigma_pairings.insert(
                surface_key(target),
                rational_at(v, &format!("{loc}.{key}"))?,
            );
        }
        for required in [SIGMA, FIB] {
            if !sigma_pairings.contains_key(required) {
                return Err(parse_err(
                    &loc,
                    format!("missing sigma_{}", json_key(required)),
                ));
            }
        }

        let mut effective = BTreeMap::new();
        if let Some(v) = obj.get("effective") {
            let loc = format!("{root}.effective");
            for (key, tag) in object_at(v, &loc)? {
                let tag_loc = format!("{loc}.{key}");
                let tag = tag
                    .as_str()
                    .and_then(Provenance::parse)
                    .ok_or_else(|| parse_err(&tag_loc, "unknown provenance tag"))?;
                effective.insert(surface_key(&key.to_lowercase()), tag);
            }
        }

        let loc = format!("{root}.restrictions");
        let mut restrictions = BTreeMap::new();
        for (key, v) in object_at(field("restrictions")?, &loc)? {
            let entry_loc = format!("{loc}.{key}");
            let label =
                DivisorLabel::parse(key).map_err(|e| parse_err(&entry_loc, e.to_string()))?;
            restrictions.insert(label, parse_restriction(v, &entry_loc)?);
        }

        let loc = format!("{root}.provenance");
        let mut provenance = BTreeMap::new();
        for (key, v) in object_at(field("provenance")?, &loc)? {
            let entry_loc = format!("{loc}.{key}");
            let label =
                DivisorLabel::parse(key).map_err(|e| parse_err(&entry_loc, e.to_string()))?;
            let tag = v.as_str().and_then(Provenance::parse).ok_or_else(|| {
                parse_err(
                    &entry_loc,
                    "expected \"paper-derived\" or \"external [O'G]\"",
                )
            })?;
            provenance.insert(label, tag);
        }
        for label in restrictions.keys() {
            if !provenance.contains_key(label) {
                return Err(parse_err(
                    format!("{loc}.{label}"),
                    "restriction entry has no provenance",
                ));
            }
        }
        for label in provenance.keys() {
            if !restrictions.contains_key(label) {
                return Err(parse_err(
                    format!("{loc}.{label}"),
                    "provenance for a label with no restriction",
                ));
            }
        }

        Ok(GeometryTable {
            surface,
            fibre_name,
            sigma_pairings,
            effective,
            restrictions,
            provenance,
        })
    }

    pub fn to_value(&self) -> Value {
        let pairings: Map<String, Value> = self
            .sigma_pairings
            .iter()
            .map(|(l, r)| {
                (
                    format!("sigma_{}", json_key(l)),
                    Value::String(format_rational(r)),
                )
            })
            .collect();
        let effective: Map<String, Value> = self
            .effective
            .iter()
            .map(|(l, p)| (json_key(l).to_uppercase(), Value::String(p.tag().into())))
            .collect();
        let restrictions: Map<String, Value> = self
            .restrictions
            .iter()
            .map(|(l, r)| {
                let v = match r {
                    Restriction::EffectiveDrop => Value::String("EFFECTIVE_DROP".into()),
                    Restriction::FibreMultiple { min } => {
                        serde_json::json!({ "fibre_multiple_min": min })
                    }
                    Restriction::Class(c) => Value::Object(
                        c.iter()
                            .map(|(k, a)| (json_key(k), Value::String(format_rational(&a.c0))))
                            .collect(),
                    ),
                };
                (l.name().to_string(), v)
            })
            .collect();
        let provenance: Map<String, Value> = self
            .provenance
            .iter()
            .map(|(l, p)| (l.name().to_string(), Value::String(p.tag().into())))
            .collect();
        serde_json::json!({
            "surface": self.surface,
            "fibre_name": self.fibre_name,
            "pairings": pairings,
            "effective": effective,
            "restrictions": restrictions,
            "provenance": provenance,
        })
    }

    pub fn sigma_sigma(&self) -> &Rational {
        &self.sigma_pairings[SIGMA]
    }

    pub fn sigma_fib(&self) -> &Rational {
        &self.sigma_pairings[FIB]
    }

    pub fn provenance_of(&self, label: DivisorLabel) -> Option<Provenance> {
        self.provenance.get(&label).copied()
    }
}

fn parse_restriction(v: &Value, location: &str) -> Result<Restriction, GeometryError> {
    match v {
        Value::String(s) if s == "EFFECTIVE_DROP" => Ok(Restriction::EffectiveDrop),
        Value::String(s) => Err(parse_err(location, format!("unknown marker {s:?}"))),
        Value::Object(obj) if obj.contains_key("fibre_multiple_min") => {
            if obj.len() != 1 {
                return Err(parse_err(
                    location,
                    "fibre_multiple_min cannot be combined with classes",
                ));
            }
            let min = obj["fibre_multiple_min"]
                .as_u64()
                .filter(|&k| k >= 1)
                .and_then(|k| u32::try_from(k).ok())
                .ok_or_else(|| {
                    parse_err(
                        format!("{location}.fibre_multiple_min"),
                        "expected an integer >= 1",
                    )
                })?;
            Ok(Restriction::FibreMultiple { min })
        }
        Value::Object(obj) => {
            let mut class = SurfaceClass::zero();
            for (key, coeff) in obj {
                let r = rational_at(coeff, &format!("{location}.{key}"))?;
                class.add_term(surface_key(key), AffineForm::constant(r));
            }
            Ok(Restriction::Class(class))
        }
        _ => Err(parse_err(
            location,
            "expected a class object, \"EFFECTIVE_DROP\" or {\"fibre_multiple_min\": k}",
        )),
    }
}

pub fn load_geometry_table(path: &Path) -> Result<GeometryTable, GeometryError> {
    let text = read(path)?;
    GeometryTable::from_json_str(&text)
}

/// Reads a file holding either one table or an array of tables.
pub fn load_geometry_file(path: &Path) -> Result<Vec<GeometryTable>, GeometryError> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| {
        parse_err(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    match &value {
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(k, v)| GeometryTable::from_value(v, &format!("$[{k}]")))
            .collect(),
        _ => Ok(vec![GeometryTable::from_value(&value, "$")?]),
    }
}

fn read(path: &Path) -> Result<String, GeometryError> {
    std::fs::read_to_string(path).map_err(|e| GeometryError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Tables keyed by surface name.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeometrySet {
    tables: BTreeMap<String, GeometryTable>,
}

impl GeometrySet {
    /// The five tables shipped with the crate: E1', E1'', H1, H2, E2.
    pub fn shipped() -> Self {
        let mut set = GeometrySet::default();
        for text in [
            E1_PRIME_JSON,
            E1_DOUBLE_PRIME_JSON,
            H1_JSON,
            H2_JSON,
            E2_JSON,
        ] {
            let table = GeometryTable::from_json_str(text).expect("shipped geometry table parses");
            set.insert(table);
        }
        set
    }

    pub fn insert(&mut self, table: GeometryTable) {
        self.tables.insert(table.surface.clone(), table);
    }

    pub fn remove(&mut self, surface: &str) -> Option<GeometryTable> {
        self.tables.remove(surface)
    }

    pub fn get(&self, surface: &str) -> Result<&GeometryTable, GeometryError> {
        self.tables
            .get(surface)
            .ok_or_else(|| GeometryError::MissingTable(surface.to_string()))
    }

    pub fn get_mut(&mut self, surface: &str) -> Option<&mut GeometryTable> {
        self.tables.get_mut(surface)
    }

    /// Shipped tables, with any surface present in `overrides` replaced.
    pub fn with_overrides(overrides: Vec<GeometryTable>) -> Self {
        let mut set = Self::shipped();
        for t in overrides {
            set.insert(t);
        }
        set
    }
}

/// Admissible values: `n` a positive multiple of `divisibility`, `i` in range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub divisibility: i64,
    pub i_range: IRange,
}

impl Domain {
    /// Whether the range has no integer points for every admissible `n`.
    pub fn is_empty(&self) -> Result<bool, ArithError> {
        match &self.i_range.hi {
            Some(hi) => Ok(negative_for_all_admissible_n(
                &(hi - &self.i_range.lo),
                self.divisibility,
            )?
            .holds()),
            None => Ok(false),
        }
    }

    /// Whether `form <= 0` for every admissible `(n, i)`.
    pub fn nonpositive(&self, form: &AffineForm) -> Result<bool, ArithError> {
        if self.is_empty()? {
            return Ok(true);
        }
        let worst = match max_over_i(form, &self.i_range, self.divisibility) {
            Ok((worst, _)) => worst,
            Err(ArithError::UnboundedRange(_)) => return Ok(false),
            Err(e) => return Err(e),
        };
        Ok(nonpositive_for_all_admissible_n(&worst, self.divisibility)?.holds())
    }
}

#[derive(Debug, Clone, Copy)]
pub enum RestrictMode<'a> {
    Exact,
    UpperBound(&'a Domain),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscardReason {
    /// Subtracted effective ambient class dropped.
    EffectiveDrop,
    /// Subtracted `κ·FIB` replaced by its smallest admissible multiple.
    FibreMultipleWorstCase,
    /// Subtracted effective curve class on the surface dropped.
    EffectiveCurve,
}

/// One inequality step taken while bounding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscardedTerm {
    pub term: String,
    pub coefficient: AffineForm,
    pub reason: DiscardReason,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restricted {
    pub class: SurfaceClass,
    pub discarded: Vec<DiscardedTerm>,
    /// Ambient labels that contributed, with their provenance.
    pub used: BTreeMap<DivisorLabel, Provenance>,
}

/// Restricts `cls` to the surface described by `table`.
///
/// In upper-bound mode, effective terms with provably non-positive
/// coefficients are dropped and fibre multiples use their smallest `κ`; every
/// such step is recorded in [`Restricted::discarded`].
pub fn restrict(
    cls: &DivisorClass,
    table: &GeometryTable,
    mode: RestrictMode<'_>,
) -> Result<Restricted, GeometryError> {
    let surface = &table.surface;
    let mut class = SurfaceClass::zero();
    let mut discarded = Vec::new();
    let mut used = BTreeMap::new();
    for (label, coeff) in cls.iter() {
        let entry = table
            .restrictions
            .get(&label)
            .ok_or_else(|| GeometryError::MissingEntry {
                surface: surface.clone(),
                label,
            })?;
        let provenance = table.provenance[&label];
        used.insert(label, provenance);
        match (entry, mode) {
            (Restriction::Class(c), _) => {
                class = class.add(&c.scale_affine(coeff)?);
            }
            (_, RestrictMode::Exact) => {
                return Err(GeometryError::InexactEntry {
                    surface: surface.clone(),
                    label,
                });
            }
            (Restriction::EffectiveDrop, RestrictMode::UpperBound(domain)) => {
                require_nonpositive(domain, surface, label.name(), coeff)?;
                discarded.push(DiscardedTerm {
                    term: label.name().to_string(),
                    coefficient: coeff.clone(),
                    reason: DiscardReason::EffectiveDrop,
                    provenance,
                });
            }
            (Restriction::FibreMultiple { min }, RestrictMode::UpperBound(domain)) => {
                require_nonpositive(domain, surface, label.name(), coeff)?;
                let kappa = Rational::from_integer((*min).into());
                class.add_term(FIB.to_string(), coeff.scale(&kappa));
                discarded.push(DiscardedTerm {
                    term: label.name().to_string(),
                    coefficient: coeff.clone(),
                    reason: DiscardReason::FibreMultipleWorstCase,
                    provenance,
                });
            }
        }
    }
    if let RestrictMode::UpperBound(domain) = mode {
        for (curve, provenance) in &table.effective {
            let coeff = class.coeff(curve);
            if coeff.is_zero() || !domain.nonpositive(&coeff)? {
                continue;
            }
            class = class.without(curve);
            discarded.push(DiscardedTerm {
                term: curve.clone(),
                coefficient: coeff,
                reason: DiscardReason::EffectiveCurve,
                provenance: *provenance,
            });
        }
    }
    Ok(Restricted {
        class,
        discarded,
        used,
    })
}

fn require_nonpositive(
    domain: &Domain,
    surface: &str,
    label: &str,
    coeff: &AffineForm,
) -> Result<(), GeometryError> {
    if domain.nonpositive(coeff)? {
        Ok(())
    } else {
        Err(GeometryError::CannotBound {
            surface: surface.to_string(),
            label: label.to_string(),
            coefficient: Box::new(coeff.clone()),
        })
    }
}

/// `Σ · sc` as an affine form in `(n, i)`.
pub fn sigma_pair(sc: &SurfaceClass, table: &GeometryTable) -> Result<AffineForm, GeometryError> {
    let mut total = AffineForm::zero();
    for (label, coeff) in sc.iter() {
        let pairing =
            table
                .sigma_pairings
                .get(label)
                .ok_or_else(|| GeometryError::UndeclaredPairing {
                    surface: table.surface.clone(),
                    label: label.to_string(),
                })?;
        total = total + coeff.scale(pairing);
    }
    Ok(total)
}

/// Whether `a·Σ + b·FIB` style data is internally consistent: Σ² < 0 and
/// Σ·FIB = 1, as for a section of a ruled surface.
pub fn is_ruled_section_data(table: &GeometryTable) -> bool {
    table.sigma_sigma() < &Rational::zero() && table.sigma_fib().is_one()
}

/// All curve labels mentioned anywhere in a table.
pub fn curve_labels(table: &GeometryTable) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = table.sigma_pairings.keys().cloned().collect();
    out.extend(table.effective.keys().cloned());
    for r in table.restrictions.values() {
        if let Restriction::Class(c) = r {
            out.extend(c.iter().map(|(l, _)| l.to_string()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{int, rat};
    use DivisorLabel::*;

    fn shipped(surface: &str) -> GeometryTable {
        GeometrySet::shipped().get(surface).unwrap().clone()
    }

    fn sc(sigma: AffineForm, fib: AffineForm) -> SurfaceClass {
        SurfaceClass::from_terms([(SIGMA, sigma), (FIB, fib)])
    }

    #[test]
    fn shipped_tables_parse_and_have_ruled_pairings() {
        for s in ["E1'", "E1''", "H1", "H2", "E2"] {
            let t = shipped(s);
            assert_eq!(t.surface, s);
            assert!(is_ruled_section_data(&t));
        }
        let e1 = shipped("E1'");
        assert_eq!(e1.sigma_sigma(), &int(-1));
        assert_eq!(e1.sigma_fib(), &int(1));
    }

    #[test]
    fn e1_prime_step_one_restriction() {
        let table = shipped("E1'");
        let n = AffineForm::n();
        let i = AffineForm::i();
        let cls = DivisorClass::from_terms([(Lambda, n.scale(&int(3))), (E1Prime, -i.clone())]);
        let r = restrict(&cls, &table, RestrictMode::Exact).unwrap();
        let expected = SurfaceClass::from_terms([
            (SIGMA, i.scale(&int(3))),
            (FIB, n.scale(&rat(1, 4)) + i.scale(&int(4))),
            (G, i.scale(&int(-3))),
        ]);
        assert_eq!(r.class, expected);
        assert!(r.discarded.is_empty());
    }

    #[test]
    fn lambda_on_e1_double_prime() {
        let cls = DivisorClass::term(Lambda, AffineForm::constant(int(1)));
        let r = restrict(&cls, &shipped("E1''"), RestrictMode::Exact).unwrap();
        assert_eq!(
            r.class,
            SurfaceClass::from_terms([(FIB, AffineForm::constant(rat(1, 12)))])
        );
        let e1 = DivisorClass::term(E1Prime, AffineForm::constant(int(1)));
        let r = restrict(&e1, &shipped("E1''"), RestrictMode::Exact).unwrap();
        assert_eq!(
            r.class,
            SurfaceClass::from_terms([(FIB, AffineForm::constant(int(1)))])
        );
    }

    #[test]
    fn zero_restricts_to_zero() {
        let r = restrict(&DivisorClass::zero(), &shipped("E1'"), RestrictMode::Exact).unwrap();
        assert!(r.class.is_zero());
        assert_eq!(
            sigma_pair(&SurfaceClass::zero(), &shipped("E1'")).unwrap(),
            AffineForm::zero()
        );
    }

    #[test]
    fn exact_mode_refuses_inequalities() {
        let cls = DivisorClass::term(Delta1, AffineForm::n());
        assert!(matches!(
            restrict(&cls, &shipped("E1'"), RestrictMode::Exact),
            Err(GeometryError::InexactEntry { label: Delta1, .. })
        ));
    }

    #[test]
    fn missing_entry_is_named() {
        let cls = DivisorClass::term(E2, AffineForm::n());
        let err = restrict(&cls, &shipped("E1'"), RestrictMode::Exact).unwrap_err();
        assert_eq!(
            err,
            GeometryError::MissingEntry {
                surface: "E1'".into(),
                label: E2
            }
        );
        assert!(err.to_string().contains("E2"));
    }

    #[test]
    fn upper_bound_refuses_positive_drops() {
        let domain = Domain {
            divisibility: 120,
            i_range: IRange::up_to_multiple_of_n(rat(1, 2)),
        };
        let cls = DivisorClass::term(Delta1, AffineForm::n());
        assert!(matches!(
            restrict(&cls, &shipped("E1'"), RestrictMode::UpperBound(&domain)),
            Err(GeometryError::CannotBound { .. })
        ));
    }

    #[test]
    fn sigma_pairings_match_displays() {
        let table = shipped("E1'");
        let p = int(5);
        let n = AffineForm::n();
        let i = AffineForm::i();
        let slope = int(1) / &p - rat(3, 4);
        let c = sc(i.scale(&int(3)), n.scale(&slope) + i.scale(&int(4)));
        assert_eq!(sigma_pair(&c, &table).unwrap(), n.scale(&slope) + i.clone());

        let slope = int(1) / &p - rat(5, 4);
        let c = sc(i.scale(&int(3)), i.scale(&int(4)) + n.scale(&slope));
        assert_eq!(
            sigma_pair(&c, &shipped("E1''")).unwrap(),
            i + n.scale(&slope)
        );
    }

    #[test]
    fn g_has_no_pairing() {
        let c = SurfaceClass::from_terms([(G, AffineForm::i())]);
        assert_eq!(
            sigma_pair(&c, &shipped("E1'")),
            Err(GeometryError::UndeclaredPairing {
                surface: "E1'".into(),
                label: G.into()
            })
        );
    }

    #[test]
    fn table_json_round_trip() {
        for s in ["E1'", "E1''", "H1", "H2", "E2"] {
            let t = shipped(s);
            let back = GeometryTable::from_value(&t.to_value(), "$").unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn malformed_tables_report_locations() {
        let bad = r#"{"surface": "X", "pairings": {"sigma_sigma": "-1", "sigma_fib": "1"},
            "restrictions": {"LAMBDA": {"fib": "one"}}, "provenance": {"LAMBDA": "paper-derived"}}"#;
        let err = GeometryTable::from_json_str(bad).unwrap_err();
        assert!(err.to_string().contains("restrictions.LAMBDA.fib"), "{err}");

        let bad = r#"{"surface": "X", "pairings": {"sigma_sigma": "-1", "sigma_fib": "1"},
            "restrictions": {"E7": "EFFECTIVE_DROP"}, "provenance": {}}"#;
        assert!(GeometryTable::from_json_str(bad)
            .unwrap_err()
            .to_string()
            .contains("E7"));

        let bad = r#"{"surface": "X", "pairings": {"sigma_sigma": "-1", "sigma_fib": "1"},
            "restrictions": {"H0": {"fibre_multiple_min": 0}}, "provenance": {"H0": "paper-derived"}}"#;
        assert!(GeometryTable::from_json_str(bad).is_err());

        let bad = r#"{"surface": "X", "pairings": {"sigma_sigma": "-1", "sigma_fib": "1"},
            "restrictions": {"H0": "EFFECTIVE_DROP"}, "provenance": {}}"#;
        assert!(GeometryTable::from_json_str(bad)
            .unwrap_err()
            .to_string()
            .contains("provenance"));

        assert!(GeometryTable::from_json_str("{ not json").is_err());
        let no_fib = r#"{"surface": "X", "pairings": {"sigma_sigma": "-1"},
            "restrictions": {}, "provenance": {}}"#;
        assert!(GeometryTable::from_json_str(no_fib).is_err());
    }
}
