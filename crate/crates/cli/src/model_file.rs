//! JSON model files.
//!
//! A free model lists generators and differentials:
//!
//! ```json
//! {
//!   "schema": 1,
//!   "generators": [{"name": "a", "degree": 2}, {"name": "x", "degree": 5}],
//!   "differential": {"x": "a^3"},
//!   "parameters": {},
//!   "metadata": {"formal_dimension": 4, "provenance": ["CP2"]}
//! }
//! ```
//!
//! A finite-dimensional model replaces `generators` and `differential` by a
//! `tabular` object with a basis, a product table and differentials of
//! basis elements. Expressions may use the named `parameters`, which are
//! substituted at parse time.

use std::collections::BTreeMap;
use std::fmt;

use cdga::dga::UNIT_LABEL;
use cdga::gca::{Algebra, Element};
use cdga::{CochainAlgebra, Dga, DgaError, Model, Rational, TabularBuilder, TabularDga};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::expr::{self, ExprError, FreeScope, TabValue, TabularScope};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    SyntaxError,
    SchemaError,
    UnknownIdentifier,
    InhomogeneousDifferential,
    WrongDegree,
    D2NonZero,
    InvalidModel,
    UpstreamError,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Where in a model file a problem was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Location {
    /// Dotted path of the JSON field, such as `differential.x`.
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind}: {detail}")]
pub struct ModelError {
    pub kind: ErrorKind,
    pub detail: String,
    pub location: Option<Location>,
}

impl ModelError {
    fn new(kind: ErrorKind, detail: impl Into<String>) -> Self {
        ModelError {
            kind,
            detail: detail.into(),
            location: None,
        }
    }

    fn at(mut self, location: Location) -> Self {
        self.location = Some(location);
        self
    }
}

pub type Result<T> = std::result::Result<T, ModelError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    pub label: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TabularSpec {
    /// Basis elements other than the unit `1`.
    pub basis: Vec<BasisSpec>,
    /// `[lhs, rhs, value]`; unlisted products of non-unit elements vanish
    /// and graded-commutative counterparts are filled in.
    #[serde(default)]
    pub products: Vec<(String, String, String)>,
    #[serde(default)]
    pub differential: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formal_dimension: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<String>,
}

/// The on-disk form of a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differential: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tabular: Option<TabularSpec>,
    /// Rationals as strings `"p/q"`; integers are also accepted on input.
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

/// A parsed and validated model with its file-level data.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub model: Model,
    pub parameters: BTreeMap<String, Rational>,
    pub metadata: Metadata,
}

impl LoadedModel {
    pub fn formal_dimension(&self) -> Option<u32> {
        self.metadata.formal_dimension
    }
}

/// Reads a rational from a JSON string `"p/q"` or integer.
pub fn rational_value(v: &Value) -> Option<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n.as_i64().map(cdga::q),
        _ => None,
    }
}

/// Parses `"p"` or `"p/q"` with an optional sign.
pub fn parse_rational(s: &str) -> Option<Rational> {
    s.trim().parse().ok()
}

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

fn line_col(src: &str, byte: usize) -> (usize, usize) {
    let before = &src[..byte];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map(|s| s.chars().count()).unwrap_or(0) + 1;
    (line, col)
}

/// Locates the expression string `text` of `field` in the source file. The
/// column points at the offending character inside the string.
fn locate(src: Option<&str>, field: &str, text: &str, expr_column: Option<usize>) -> Location {
    let mut loc = Location {
        field: field.to_string(),
        line: None,
        column: expr_column,
    };
    if let Some(src) = src {
        let quoted = serde_json::to_string(text).expect("string");
        if let Some(p) = src.find(&quoted) {
            let (line, col) = line_col(src, p);
            loc.line = Some(line);
            loc.column = Some(col + expr_column.unwrap_or(0));
        }
    }
    loc
}

fn expr_error(e: ExprError, src: Option<&str>, field: &str, text: &str) -> ModelError {
    let kind = match e {
        ExprError::UnknownIdentifier { .. } => ErrorKind::UnknownIdentifier,
        ExprError::Syntax { .. } => ErrorKind::SyntaxError,
        ExprError::Eval { .. } => ErrorKind::InvalidModel,
    };
    let column = e.column();
    ModelError::new(kind, format!("{field} = \"{text}\": {e}")).at(locate(src, field, text, Some(column)))
}

fn dga_error(e: DgaError) -> ModelError {
    match e {
        DgaError::D2NonZero(report) => ModelError::new(ErrorKind::D2NonZero, report.to_string()),
        DgaError::InhomogeneousDifferential { generator } => ModelError::new(
            ErrorKind::InhomogeneousDifferential,
            format!("d({generator}) is not homogeneous"),
        ),
        DgaError::WrongDegree {
            generator,
            expected,
            found,
        } => ModelError::new(
            ErrorKind::WrongDegree,
            format!("d({generator}) has degree {found}, expected {expected}"),
        ),
        other => ModelError::new(ErrorKind::InvalidModel, other.to_string()),
    }
}

/// Parses model-file text. A CLI output document whose `result` holds a
/// `model` is accepted too, so commands can be chained.
pub fn parse_str(src: &str) -> Result<LoadedModel> {
    let value: Value = serde_json::from_str(src).map_err(|e| {
        ModelError::new(ErrorKind::SyntaxError, e.to_string()).at(Location {
            field: String::new(),
            line: Some(e.line()),
            column: Some(e.column()),
        })
    })?;
    let value = match value {
        Value::Object(ref m) if m.contains_key("error") => {
            return Err(ModelError::new(
                ErrorKind::UpstreamError,
                format!("the input is an error report: {}", m["error"]),
            ))
        }
        Value::Object(ref m) if m.get("result").and_then(|r| r.get("model")).is_some() => {
            m["result"]["model"].clone()
        }
        v => v,
    };
    let file: ModelFile = serde_json::from_value(value)
        .map_err(|e| ModelError::new(ErrorKind::SchemaError, e.to_string()))?;
    load(&file, Some(src))
}

/// Validates a model file. `src`, when given, is used to report line and
/// column numbers.
pub fn load(file: &ModelFile, src: Option<&str>) -> Result<LoadedModel> {
    if file.schema != 1 {
        return Err(ModelError::new(
            ErrorKind::SchemaError,
            format!("unsupported schema {}", file.schema),
        ));
    }
    let mut parameters = BTreeMap::new();
    for (name, v) in &file.parameters {
        let r = rational_value(v).ok_or_else(|| {
            ModelError::new(ErrorKind::SyntaxError, format!("parameter {name} = {v} is not a rational")).at(
                Location {
                    field: format!("parameters.{name}"),
                    line: None,
                    column: None,
                },
            )
        })?;
        parameters.insert(name.clone(), r);
    }
    let metadata = file.metadata.clone().unwrap_or_default();
    let model = match (&file.tabular, file.generators.is_empty() && file.differential.is_empty()) {
        (Some(t), true) => Model::Tabular(load_tabular(t, &parameters, src)?),
        (Some(_), false) => {
            return Err(ModelError::new(
                ErrorKind::SchemaError,
                "a model is either free (generators) or tabular, not both",
            ))
        }
        (None, _) => Model::Free(load_free(file, &parameters, src)?),
    };
    Ok(LoadedModel {
        model,
        parameters,
        metadata,
    })
}

fn check_parameter_names<'a>(
    parameters: &BTreeMap<String, Rational>,
    mut taken: impl FnMut(&str) -> bool + 'a,
) -> Result<()> {
    if let Some(p) = parameters.keys().find(|p| taken(p)) {
        return Err(ModelError::new(
            ErrorKind::InvalidModel,
            format!("parameter `{p}` shadows a generator"),
        )
        .at(Location {
            field: format!("parameters.{p}"),
            line: None,
            column: None,
        }));
    }
    Ok(())
}

fn load_free(file: &ModelFile, parameters: &BTreeMap<String, Rational>, src: Option<&str>) -> Result<Dga> {
    let alg = Algebra::new(file.generators.iter().map(|g| (g.name.clone(), g.degree)))
        .map_err(|e| ModelError::new(ErrorKind::InvalidModel, e.to_string()))?;
    check_parameter_names(parameters, |p| alg.generator_index(p).is_some())?;
    let scope = FreeScope {
        algebra: &alg,
        parameters,
    };
    let mut images = vec![Element::zero(&alg); alg.num_generators()];
    for (name, text) in &file.differential {
        let field = format!("differential.{name}");
        let i = alg.generator_index(name).ok_or_else(|| {
            ModelError::new(
                ErrorKind::UnknownIdentifier,
                format!("differential given for unknown generator `{name}`"),
            )
            .at(locate(src, &field, text, None))
        })?;
        let expected = alg.generators()[i].degree() + 1;
        let parsed = expr::parse(text).map_err(|e| expr_error(e, src, &field, text))?;
        for (_, term) in parsed.terms() {
            let v = term.eval(&scope).map_err(|e| expr_error(e, src, &field, text))?;
            match v.homogeneous_degree() {
                Ok(Some(k)) if k != expected => {
                    return Err(ModelError::new(
                        ErrorKind::WrongDegree,
                        format!(
                            "d({name}) needs degree {expected}, but the term `{}` has degree {k}",
                            term.text(text)
                        ),
                    )
                    .at(locate(src, &field, text, Some(term.start))))
                }
                Err(_) => {
                    return Err(ModelError::new(
                        ErrorKind::InhomogeneousDifferential,
                        format!("d({name}): the term `{}` is not homogeneous", term.text(text)),
                    )
                    .at(locate(src, &field, text, Some(term.start))))
                }
                _ => {}
            }
        }
        images[i] = parsed.eval(&scope).map_err(|e| expr_error(e, src, &field, text))?;
    }
    Dga::validated(&alg, images).map_err(|e| {
        let err = dga_error(e);
        let field = err
            .detail
            .split_once("d(d(")
            .and_then(|(_, rest)| rest.split_once(')'))
            .map(|(g, _)| g.to_string());
        match field.and_then(|g| file.differential.get(&g).map(|t| (g, t))) {
            Some((g, text)) => err.clone().at(locate(src, &format!("differential.{g}"), text, None)),
            None => err,
        }
    })
}

fn to_row(v: TabValue) -> cdga::exactla::SparseRow {
    v.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn load_tabular(spec: &TabularSpec, parameters: &BTreeMap<String, Rational>, src: Option<&str>) -> Result<TabularDga> {
    let invalid = |e: DgaError| dga_error(e);
    let mut b = TabularBuilder::new();
    for item in &spec.basis {
        b.basis(&item.label, item.degree).map_err(invalid)?;
    }
    let labels: BTreeMap<String, usize> = std::iter::once((UNIT_LABEL.to_string(), 0))
        .chain(spec.basis.iter().enumerate().map(|(i, s)| (s.label.clone(), i + 1)))
        .collect();
    check_parameter_names(parameters, |p| labels.contains_key(p))?;
    let scope = TabularScope {
        labels: &labels,
        unit: 0,
        table: None,
        parameters,
    };
    let lookup = |field: &str, label: &str| -> Result<usize> {
        labels.get(label).copied().ok_or_else(|| {
            ModelError::new(ErrorKind::UnknownIdentifier, format!("unknown basis label `{label}`")).at(Location {
                field: field.to_string(),
                line: None,
                column: None,
            })
        })
    };
    for (n, (l, r, text)) in spec.products.iter().enumerate() {
        let field = format!("tabular.products[{n}]");
        let (i, j) = (lookup(&field, l)?, lookup(&field, r)?);
        let v = expr::parse(text)
            .and_then(|e| e.eval(&scope))
            .map_err(|e| expr_error(e, src, &field, text))?;
        b.product_indexed(i, j, to_row(v)).map_err(invalid)?;
    }
    for (label, text) in &spec.differential {
        let field = format!("tabular.differential.{label}");
        let i = lookup(&field, label)?;
        let v = expr::parse(text)
            .and_then(|e| e.eval(&scope))
            .map_err(|e| expr_error(e, src, &field, text))?;
        b.differential_indexed(i, to_row(v)).map_err(invalid)?;
    }
    b.build().map_err(invalid)
}

/// The canonical file of a model: every generator gets a differential entry
/// (`"0"` when closed), products are listed once with `lhs ≤ rhs` in basis
/// order.
pub fn render(model: &Model, parameters: &BTreeMap<String, Rational>, metadata: &Metadata) -> ModelFile {
    let parameters = parameters
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(rational_string(v))))
        .collect();
    let metadata = (metadata != &Metadata::default()).then(|| metadata.clone());
    match model {
        Model::Free(d) => {
            let alg = d.algebra();
            ModelFile {
                schema: 1,
                generators: alg
                    .generators()
                    .iter()
                    .map(|g| GeneratorSpec {
                        name: g.name().to_string(),
                        degree: g.degree(),
                    })
                    .collect(),
                differential: alg
                    .generators()
                    .iter()
                    .map(|g| (g.name().to_string(), d.image(g.ordinal()).to_string()))
                    .collect(),
                tabular: None,
                parameters,
                metadata,
            }
        }
        Model::Tabular(t) => {
            let combo = |degree: u32, row: &[(usize, Rational)]| -> String {
                let terms: Vec<(&str, Rational)> = row.iter().map(|(i, c)| (t.label(*i), c.clone())).collect();
                t.render(&t.cochain_from_labels(degree, &terms).expect("labels exist"))
            };
            let basis = (1..t.len())
                .map(|i| BasisSpec {
                    label: t.label(i).to_string(),
                    degree: t.degree_of(i),
                })
                .collect();
            let products = t
                .product_entries()
                .into_iter()
                .map(|(i, j, row)| {
                    (
                        t.label(i).to_string(),
                        t.label(j).to_string(),
                        combo(t.degree_of(i) + t.degree_of(j), &row),
                    )
                })
                .collect();
            let differential = (1..t.len())
                .filter(|&i| !t.basis_differential(i).is_empty())
                .map(|i| (t.label(i).to_string(), combo(t.degree_of(i) + 1, t.basis_differential(i))))
                .collect();
            ModelFile {
                schema: 1,
                generators: Vec::new(),
                differential: BTreeMap::new(),
                tabular: Some(TabularSpec {
                    basis,
                    products,
                    differential,
                }),
                parameters,
                metadata,
            }
        }
    }
}

/// [`render`] as a JSON value.
pub fn render_value(model: &Model, parameters: &BTreeMap<String, Rational>, metadata: &Metadata) -> Value {
    serde_json::to_value(render(model, parameters, metadata)).expect("model files serialize")
}

/// A short description of the model's shape, used in command results.
pub fn summary(model: &Model) -> Value {
    match model {
        Model::Free(d) => json!({
            "kind": "free",
            "generators": d.algebra().num_generators(),
            "minimal": d.is_minimal(),
        }),
        Model::Tabular(t) => json!({
            "kind": "tabular",
            "dimension": t.len(),
            "top_degree": t.top_degree(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CP2: &str = r#"{
  "schema": 1,
  "generators": [{"name": "a", "degree": 2}, {"name": "x", "degree": 5}],
  "differential": {"x": "a^3"}
}"#;

    #[test]
    fn cp2_parses() {
        let m = parse_str(CP2).unwrap();
        assert_eq!(cdga::cohomology::betti_numbers(&m.model, 5), vec![1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn wrong_degree_names_the_term() {
        let src = r#"{"schema": 1,
"generators": [{"name": "a", "degree": 2}, {"name": "b", "degree": 2}, {"name": "x", "degree": 3}],
"differential": {"x": "a^2 + b"}}"#;
        let e = parse_str(src).unwrap_err();
        assert_eq!(e.kind, ErrorKind::WrongDegree);
        assert!(e.detail.contains("`b`"), "{}", e.detail);
        let loc = e.location.unwrap();
        assert_eq!((loc.field.as_str(), loc.line, loc.column), ("differential.x", Some(3), Some(30)));
    }

    #[test]
    fn unknown_identifier_and_d2() {
        let src = r#"{"schema": 1, "generators": [{"name": "a", "degree": 2}, {"name": "x", "degree": 3}],
"differential": {"x": "a*c"}}"#;
        let e = parse_str(src).unwrap_err();
        assert_eq!(e.kind, ErrorKind::UnknownIdentifier);
        assert_eq!(e.location.unwrap().line, Some(2));

        let src = r#"{"schema": 1, "generators": [{"name": "a", "degree": 2}, {"name": "b", "degree": 3}, {"name": "c", "degree": 2}],
"differential": {"b": "a^2", "c": "b"}}"#;
        assert_eq!(parse_str(src).unwrap_err().kind, ErrorKind::D2NonZero);
    }

    #[test]
    fn json_errors_have_positions() {
        let e = parse_str("{\n  \"schema\": 1,\n  oops\n}").unwrap_err();
        assert_eq!(e.kind, ErrorKind::SyntaxError);
        assert_eq!(e.location.unwrap().line, Some(3));
    }

    #[test]
    fn tabular_round_trip() {
        let src = r#"{"schema": 1, "tabular": {
  "basis": [{"label": "a", "degree": 2}, {"label": "a2", "degree": 4}],
  "products": [["a", "a", "a2"]]
}}"#;
        let m = parse_str(src).unwrap();
        let file = render(&m.model, &m.parameters, &m.metadata);
        let again = load(&file, None).unwrap();
        assert_eq!(render(&again.model, &again.parameters, &again.metadata), file);
    }
}
