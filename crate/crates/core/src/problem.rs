//! Problem files: a polynomial system over a field and the points to study.
//!
//! ```toml
//! field = "Q"                      # or "F7", or "Q(b : b^2 - 2)"
//! variables = ["x", "y"]
//! polynomials = ["x^2 + 1", "y^2 - x*y"]
//! seed = 0                         # optional
//!
//! [[points]]
//! label = "(i, 0)"                 # optional
//! extension = { generator = "i", min_poly = "i^2 + 1" }
//! coordinates = ["i", "0"]
//! ```
//!
//! A point without `extension` is rational. `min_poly` may also be a list
//! of integer coefficients, constant term first.

use std::fmt;

use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

use crate::field::{BaseField, FieldDescriptor, FieldElement, FieldError, Scalar};
use crate::multipoly::{parse, MultiPoly, PolyError};
use crate::point::PointSpec;

/// Where in the input a problem was found, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("{location}: {message}")]
    Syntax { location: Location, message: String },
    #[error("{location}: {source}")]
    Expression { location: Location, source: PolyError },
    #[error("{location}: {message}")]
    Invalid { location: Location, message: String },
    /// A declared field that cannot be built, e.g. a reducible polynomial.
    #[error("{location}: {source}")]
    Field { location: Location, source: FieldError },
}

impl ProblemError {
    pub fn location(&self) -> Location {
        match self {
            ProblemError::Syntax { location, .. }
            | ProblemError::Expression { location, .. }
            | ProblemError::Invalid { location, .. }
            | ProblemError::Field { location, .. } => *location,
        }
    }

    /// Malformed text, as opposed to well-formed text describing an
    /// impossible field.
    pub fn is_syntactic(&self) -> bool {
        !matches!(self, ProblemError::Field { .. })
    }
}

#[derive(Clone, Debug)]
pub struct NamedPoint {
    pub label: String,
    pub spec: PointSpec,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub field: FieldDescriptor,
    pub variables: Vec<String>,
    pub polynomials: Vec<MultiPoly>,
    pub seed: u64,
    pub points: Vec<NamedPoint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    field: Spanned<String>,
    variables: Vec<Spanned<String>>,
    polynomials: Vec<Spanned<String>>,
    seed: Option<u64>,
    #[serde(default)]
    points: Vec<RawPoint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    label: Option<String>,
    extension: Option<Spanned<RawExtension>>,
    coordinates: Spanned<Vec<Spanned<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtension {
    generator: Spanned<String>,
    min_poly: Spanned<RawMinPoly>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawMinPoly {
    Text(String),
    Coefficients(Vec<i64>),
}

/// Offsets into the source text.
struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn locate(&self, offset: usize) -> Location {
        let offset = offset.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Location { line, column }
    }

    /// Location of byte `pos` inside the contents of the string value whose
    /// span (quotes included) is `span`.
    fn inside(&self, span: std::ops::Range<usize>, pos: usize) -> Location {
        let raw = &self.text[span.clone()];
        let skip = if raw.starts_with("\"\"\"") || raw.starts_with("'''") { 3 } else { 1 };
        self.locate(span.start + skip + pos)
    }

    fn at<T>(&self, s: &Spanned<T>) -> Location {
        self.locate(s.span().start)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a field name: `Q`, `F<p>`, or `<base>(<gen> : <min poly>)`.
pub fn parse_field(text: &str) -> Result<FieldDescriptor, FieldSpecError> {
    let text = text.trim();
    if let Ok(base) = parse_base(text) {
        return Ok(FieldDescriptor::new(base));
    }
    if let Some(open) = text.find('(').filter(|_| text.contains(':')) {
        let base = parse_base(text[..open].trim())?;
        let inner = text[open + 1..].strip_suffix(')').ok_or(FieldSpecError::Malformed)?;
        let (gen, poly) = inner.split_once(':').ok_or(FieldSpecError::Malformed)?;
        let gen = gen.trim();
        if !is_identifier(gen) {
            return Err(FieldSpecError::Malformed);
        }
        let coeffs = min_poly_from_text(base, gen, poly.trim()).map_err(|(_, e)| FieldSpecError::Poly(e))?;
        return Ok(FieldDescriptor::extension(base, gen, coeffs)?);
    }
    Err(parse_base(text).unwrap_err())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldSpecError {
    #[error("expected Q, F<p>, or <base>(<generator> : <polynomial>)")]
    Malformed,
    #[error(transparent)]
    Poly(PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn parse_base(text: &str) -> Result<BaseField, FieldSpecError> {
    match text {
        "Q" | "QQ" => Ok(BaseField::Rationals),
        _ => {
            let digits = text
                .strip_prefix("GF")
                .and_then(|r| r.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
                .or_else(|| text.strip_prefix('F'))
                .ok_or(FieldSpecError::Malformed)?;
            let p: u64 = digits.parse().map_err(|_| FieldSpecError::Malformed)?;
            Ok(BaseField::prime(p)?)
        }
    }
}

/// Coefficients of a univariate expression in `gen` over `base`, constant
/// term first. Errors carry the byte position inside `text`.
fn min_poly_from_text(base: BaseField, gen: &str, text: &str) -> Result<Vec<Scalar>, (usize, PolyError)> {
    let k = FieldDescriptor::new(base);
    let p = parse(text, &[gen.to_string()], &k).map_err(|e| (position_of(&e), e))?;
    let deg = p.total_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![base.zero(); deg + 1];
    for (m, c) in p.terms() {
        coeffs[m.exponents()[0] as usize] = k.as_base(c).expect("base field coefficient");
    }
    Ok(coeffs)
}

fn position_of(e: &PolyError) -> usize {
    match e {
        PolyError::SyntaxError { position, .. } | PolyError::UnknownSymbol { position, .. } => *position,
        _ => 0,
    }
}

impl Problem {
    pub fn parse(text: &str) -> Result<Problem, ProblemError> {
        let src = Source { text };
        let raw: RawProblem = toml::from_str(text).map_err(|e| ProblemError::Syntax {
            location: src.locate(e.span().map_or(0, |s| s.start)),
            message: e.message().to_string(),
        })?;

        let field = parse_field(raw.field.get_ref()).map_err(|e| field_spec_error(&src, &raw.field, e))?;

        let mut variables = Vec::with_capacity(raw.variables.len());
        for v in &raw.variables {
            let name = v.get_ref();
            if !is_identifier(name) {
                return Err(invalid(&src, v, format!("{name:?} is not a variable name")));
            }
            if variables.contains(name) || field.extension_data().is_some_and(|e| e.generator() == name) {
                return Err(invalid(&src, v, format!("{name:?} is declared twice")));
            }
            variables.push(name.clone());
        }
        if variables.is_empty() {
            return Err(invalid(&src, &raw.field, "no variables declared".into()));
        }

        let polynomials = raw
            .polynomials
            .iter()
            .map(|s| expression(&src, s, &variables, &field))
            .collect::<Result<Vec<_>, _>>()?;
        if polynomials.len() != variables.len() {
            let at = raw.polynomials.first().unwrap_or(&raw.field);
            return Err(invalid(
                &src,
                at,
                format!("{} polynomials for {} variables", polynomials.len(), variables.len()),
            ));
        }

        let points = raw
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| point(&src, p, i, &field, &variables))
            .collect::<Result<Vec<_>, _>>()?;

        Ok(Problem { field, variables, polynomials, seed: raw.seed.unwrap_or(0), points })
    }
}

fn invalid<T>(src: &Source, at: &Spanned<T>, message: String) -> ProblemError {
    ProblemError::Invalid { location: src.at(at), message }
}

fn field_spec_error(src: &Source, at: &Spanned<String>, e: FieldSpecError) -> ProblemError {
    let location = src.at(at);
    match e {
        FieldSpecError::Malformed => ProblemError::Invalid { location, message: e.to_string() },
        FieldSpecError::Poly(source) => ProblemError::Expression { location, source },
        FieldSpecError::Field(source) => ProblemError::Field { location, source },
    }
}

fn expression(src: &Source, s: &Spanned<String>, vars: &[String], k: &FieldDescriptor) -> Result<MultiPoly, ProblemError> {
    parse(s.get_ref(), vars, k).map_err(|e| ProblemError::Expression { location: src.inside(s.span(), position_of(&e)), source: e })
}

fn point(src: &Source, p: &RawPoint, index: usize, k: &FieldDescriptor, vars: &[String]) -> Result<NamedPoint, ProblemError> {
    let residue = match &p.extension {
        None => k.clone(),
        Some(ext) => {
            let e = ext.get_ref();
            let gen = e.generator.get_ref();
            if !is_identifier(gen) || vars.contains(gen) {
                return Err(invalid(src, &e.generator, format!("{gen:?} cannot name a generator")));
            }
            if k.is_extension() {
                return Err(ProblemError::Field { location: src.at(ext), source: FieldError::NestedExtension });
            }
            let coeffs = match e.min_poly.get_ref() {
                RawMinPoly::Coefficients(cs) => cs.iter().map(|&c| k.base().from_i64(c)).collect(),
                RawMinPoly::Text(t) => min_poly_from_text(k.base(), gen, t).map_err(|(pos, source)| {
                    ProblemError::Expression { location: src.inside(e.min_poly.span(), pos), source }
                })?,
            };
            FieldDescriptor::extension(k.base(), gen.clone(), coeffs)
                .map_err(|source| ProblemError::Field { location: src.at(&e.min_poly), source })?
        }
    };
    let coords = p.coordinates.get_ref();
    if coords.len() != vars.len() {
        return Err(invalid(src, &p.coordinates, format!("{} coordinates for {} variables", coords.len(), vars.len())));
    }
    let values = coords
        .iter()
        .map(|c| {
            let e = expression(src, c, &[], &residue)?;
            Ok(e.as_constant().unwrap_or_else(|| residue.zero()))
        })
        .collect::<Result<Vec<FieldElement>, ProblemError>>()?;
    let spec = PointSpec::new(residue, values);
    let label = p.label.clone().unwrap_or_else(|| format!("point {}", index + 1));
    Ok(NamedPoint { label, spec })
}
