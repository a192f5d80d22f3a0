//! Command dispatch and the JSON output envelope.

use std::collections::BTreeMap;
use std::io::Read;

use cdga::cohomology::{self, CohomologySummary};
use cdga::constructions::{
    self, circle_bundle_model, corpus, mapping_torus_model, CohomologyAutomorphism, ConstructionError,
    CorpusParams, EulerData,
};
use cdga::massey::{self, MasseyError};
use cdga::sullivan::{
    self, FormalityOptions, FormalityVerdict, FormalityWitness, SullivanError,
};
use cdga::{CochainAlgebra, Model, Rational, RationalMatrix};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::expr;
use crate::model_file::{self, LoadedModel, Location, Metadata, ModelError};

pub const SCHEMA: u32 = 1;
pub const MAX_DEGREE_ENV: &str = "CDGA_MAX_DEGREE_DEFAULT";
const FALLBACK_MAX_DEGREE: u32 = 8;

#[derive(Debug, Parser)]
#[command(name = "cdga", version, about = "Exact computations with commutative differential graded algebras over Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Bound {
    /// Degree bound. Defaults to $CDGA_MAX_DEGREE_DEFAULT, then the model's
    /// formal dimension, then 8.
    #[arg(long, env = MAX_DEGREE_ENV)]
    pub max_degree: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a model file and check d² = 0.
    Validate {
        file: String,
        #[command(flatten)]
        bound: Bound,
    },
    /// Betti numbers, class representatives and optionally cup products.
    Cohomology {
        file: String,
        #[command(flatten)]
        bound: Bound,
        #[arg(long)]
        ring: bool,
    },
    /// The triple Massey product of three cocycles.
    Massey {
        file: String,
        /// Three comma-separated expressions.
        #[arg(long, allow_hyphen_values = true)]
        classes: String,
        #[command(flatten)]
        bound: Bound,
    },
    /// The minimal model of a simply connected model.
    MinimalModel {
        file: String,
        #[command(flatten)]
        bound: Bound,
    },
    /// Formality verdict for a closed manifold of the given dimension.
    Formality {
        file: String,
        #[arg(long)]
        dimension: u32,
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// The circle bundle with the given Euler class.
    CircleBundle {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        euler: String,
    },
    /// Cohomology and a model of the mapping torus of an automorphism.
    MappingTorus {
        file: String,
        /// JSON file describing the automorphism.
        #[arg(long)]
        auto: String,
        /// Dimension of the torus, for a formality verdict.
        #[arg(long)]
        dimension: Option<u32>,
        #[command(flatten)]
        bound: Bound,
    },
    /// A named example model.
    Corpus {
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        l: Option<i64>,
        /// One or three comma-separated rationals.
        #[arg(long, allow_hyphen_values = true)]
        e: Option<String>,
        /// One value for all points or k comma-separated values.
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        h: Option<String>,
    },
}

/// A failed command, rendered as `{"error": {kind, detail, location?}}`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{kind}: {detail}")]
pub struct CliError {
    pub kind: String,
    pub detail: String,
    pub location: Option<Location>,
}

impl CliError {
    pub fn new(kind: &str, detail: impl Into<String>) -> Self {
        CliError {
            kind: kind.to_string(),
            detail: detail.into(),
            location: None,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError {
            kind: e.kind.to_string(),
            detail: e.detail,
            location: e.location,
        }
    }
}

fn variant_name<E: std::fmt::Debug>(e: &E) -> String {
    let s = format!("{e:?}");
    s.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

impl From<SullivanError> for CliError {
    fn from(e: SullivanError) -> Self {
        CliError::new(&variant_name(&e), e.to_string())
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        let kind = match &e {
            ConstructionError::Dga(inner) => variant_name(inner),
            other => variant_name(other),
        };
        CliError::new(&kind, e.to_string())
    }
}

impl From<MasseyError> for CliError {
    fn from(e: MasseyError) -> Self {
        CliError::new(&variant_name(&e), e.to_string())
    }
}

/// Outcome of a command: a JSON document and the process exit code.
#[derive(Debug, Clone)]
pub struct Output {
    pub document: Value,
    pub exit_code: i32,
}

impl Output {
    /// Pretty-printed JSON with a trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("json");
        s.push('\n');
        s
    }
}

struct Success {
    result: Value,
    witnesses: Value,
    provenance: Vec<String>,
    /// 0, or 2 for a mathematically undefined or inapplicable query.
    exit_code: i32,
}

impl Success {
    fn ok(result: Value, witnesses: Value, provenance: Vec<String>) -> Self {
        Success {
            result,
            witnesses,
            provenance,
            exit_code: 0,
        }
    }
}

fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            h.update([0u8]);
        }
        h.update(p);
    }
    hex::encode(h.finalize())
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    if path == "-" {
        stdin
            .read_to_end(&mut buf)
            .map_err(|e| CliError::new("IoError", format!("standard input: {e}")))?;
    } else {
        buf = std::fs::read(path).map_err(|e| CliError::new("IoError", format!("{path}: {e}")))?;
    }
    Ok(buf)
}

fn load_model(bytes: &[u8]) -> Result<LoadedModel, CliError> {
    let text = std::str::from_utf8(bytes).map_err(|e| CliError::new("SyntaxError", format!("input is not UTF-8: {e}")))?;
    Ok(model_file::parse_str(text)?)
}

fn max_degree(bound: &Bound, model: &LoadedModel) -> u32 {
    bound
        .max_degree
        .or(model.formal_dimension())
        .unwrap_or(FALLBACK_MAX_DEGREE)
}

fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn parse_list(name: &str, s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .map(|p| {
            model_file::parse_rational(p)
                .ok_or_else(|| CliError::new("ParamOutOfRange", format!("--{name}: `{p}` is not a rational")))
        })
        .collect()
}

fn parse_cochain(model: &LoadedModel, field: &str, src: &str) -> Result<cdga::Cochain, CliError> {
    expr::cochain(&model.model, src, &model.parameters).map_err(|e| CliError {
        kind: match e {
            expr::ExprError::UnknownIdentifier { .. } => "UnknownIdentifier",
            expr::ExprError::Syntax { .. } => "SyntaxError",
            expr::ExprError::Eval { .. } => "InvalidExpression",
        }
        .to_string(),
        detail: format!("{field} = \"{src}\": {e}"),
        location: Some(Location {
            field: field.to_string(),
            line: None,
            column: Some(e.column()),
        }),
    })
}

fn engine_provenance() -> String {
    format!("cdga {}", env!("CARGO_PKG_VERSION"))
}

/// Runs a command. Never panics on bad input: failures become error
/// documents with exit code 1.
pub fn run(cli: &Cli, stdin: &mut dyn Read) -> Output {
    let (query, digest_parts) = describe(&cli.command, stdin);
    let outcome = digest_parts.and_then(|inputs| {
        let d = digest(&inputs.iter().map(|v| v.as_slice()).collect::<Vec<_>>());
        execute(&cli.command, &inputs).map(|s| (d, s))
    });
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("query".into(), query);
    match outcome {
        Ok((d, s)) => {
            doc.insert("input_digest".into(), json!(d));
            doc.insert("result".into(), s.result);
            doc.insert("witnesses".into(), s.witnesses);
            let mut provenance = s.provenance;
            provenance.push(engine_provenance());
            doc.insert("provenance".into(), json!(provenance));
            Output {
                document: Value::Object(doc),
                exit_code: s.exit_code,
            }
        }
        Err(e) => {
            let mut err = Map::new();
            err.insert("kind".into(), json!(e.kind));
            err.insert("detail".into(), json!(e.detail));
            if let Some(loc) = e.location {
                err.insert("location".into(), serde_json::to_value(loc).expect("location"));
            }
            doc.insert("error".into(), Value::Object(err));
            Output {
                document: Value::Object(doc),
                exit_code: 1,
            }
        }
    }
}

/// The query record and the raw inputs the digest covers.
fn describe(command: &Command, stdin: &mut dyn Read) -> (Value, Result<Vec<Vec<u8>>, CliError>) {
    let file_input = |f: &str, stdin: &mut dyn Read| read_input(f, stdin).map(|b| vec![b]);
    match command {
        Command::Validate { file, bound } => (
            json!({"command": "validate", "file": file, "max_degree": bound.max_degree}),
            file_input(file, stdin),
        ),
        Command::Cohomology { file, bound, ring } => (
            json!({"command": "cohomology", "file": file, "max_degree": bound.max_degree, "ring": ring}),
            file_input(file, stdin),
        ),
        Command::Massey { file, classes, bound } => (
            json!({"command": "massey", "file": file, "classes": classes, "max_degree": bound.max_degree}),
            file_input(file, stdin),
        ),
        Command::MinimalModel { file, bound } => (
            json!({"command": "minimal-model", "file": file, "max_degree": bound.max_degree}),
            file_input(file, stdin),
        ),
        Command::Formality { file, dimension, s, cap } => (
            json!({"command": "formality", "file": file, "dimension": dimension, "s": s, "cap": cap}),
            file_input(file, stdin),
        ),
        Command::CircleBundle { file, euler } => (
            json!({"command": "circle-bundle", "file": file, "euler": euler}),
            file_input(file, stdin),
        ),
        Command::MappingTorus {
            file,
            auto,
            dimension,
            bound,
        } => {
            let inputs = read_input(file, stdin).and_then(|m| read_input(auto, stdin).map(|a| vec![m, a]));
            (
                json!({"command": "mapping-torus", "file": file, "auto": auto,
                       "dimension": dimension, "max_degree": bound.max_degree}),
                inputs,
            )
        }
        Command::Corpus {
            name,
            k,
            l,
            e,
            epsilon,
            n,
            f,
            h,
        } => {
            let q = json!({"command": "corpus", "name": name, "k": k, "l": l, "e": e,
                           "epsilon": epsilon, "n": n, "f": f, "h": h});
            let bytes = serde_json::to_vec(&q).expect("json");
            (q, Ok(vec![bytes]))
        }
    }
}

fn execute(command: &Command, inputs: &[Vec<u8>]) -> Result<Success, CliError> {
    match command {
        Command::Validate { bound, .. } => validate(&load_model(&inputs[0])?, bound),
        Command::Cohomology { bound, ring, .. } => cohomology_cmd(&load_model(&inputs[0])?, bound, *ring),
        Command::Massey { classes, bound, .. } => massey_cmd(&load_model(&inputs[0])?, classes, bound),
        Command::MinimalModel { bound, .. } => minimal_model_cmd(&load_model(&inputs[0])?, bound),
        Command::Formality { dimension, s, cap, .. } => formality_cmd(
            &load_model(&inputs[0])?,
            FormalityOptions {
                dimension: *dimension,
                s: *s,
                cap: *cap,
            },
        ),
        Command::CircleBundle { euler, .. } => circle_bundle_cmd(&load_model(&inputs[0])?, euler),
        Command::MappingTorus { dimension, bound, .. } => {
            mapping_torus_cmd(&load_model(&inputs[0])?, &inputs[1], *dimension, bound)
        }
        Command::Corpus {
            name,
            k,
            l,
            e,
            epsilon,
            n,
            f,
            h,
        } => {
            let single = |flag: &str, v: &Option<String>| -> Result<Option<Rational>, CliError> {
                v.as_deref()
                    .map(|s| {
                        model_file::parse_rational(s)
                            .ok_or_else(|| CliError::new("ParamOutOfRange", format!("--{flag}: `{s}` is not a rational")))
                    })
                    .transpose()
            };
            let params = CorpusParams {
                k: *k,
                l: *l,
                e: e.as_deref().map(|s| parse_list("e", s)).transpose()?,
                epsilon: epsilon.as_deref().map(|s| parse_list("epsilon", s)).transpose()?,
                n: single("n", n)?,
                f: single("f", f)?,
                h: single("h", h)?,
            };
            corpus_cmd(name, &params)
        }
    }
}

fn validate(m: &LoadedModel, bound: &Bound) -> Result<Success, CliError> {
    let max = max_degree(bound, m);
    let mut result = json!({
        "valid": true,
        "model": model_file::summary(&m.model),
    });
    if let Model::Free(d) = &m.model {
        let report = d
            .validate(max.max(d.default_bound()))
            .map_err(|e| CliError::new("InvalidModel", e.to_string()))?;
        if !report.is_valid() {
            return Err(CliError::new("D2NonZero", report.to_string()));
        }
        result["checked_through"] = json!(report.max_degree);
    }
    Ok(Success::ok(result, json!({}), m.metadata.provenance.clone()))
}

fn betti_json(h: &CohomologySummary) -> Value {
    json!(h.bettis())
}

fn classes_json(model: &Model, h: &CohomologySummary) -> Value {
    Value::Array(
        (0..=h.max_degree())
            .map(|k| {
                let reps: Vec<String> = h.representatives(k).iter().map(|r| model.render(r)).collect();
                json!({"degree": k, "betti": h.betti(k), "representatives": reps})
            })
            .collect(),
    )
}

fn cup_json(h: &CohomologySummary) -> Value {
    let Some(table) = h.cup_table() else {
        return Value::Null;
    };
    let mut out = Vec::new();
    for ((p, q), rows) in table {
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if v.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                    out.push(json!({"p": p, "q": q, "i": i, "j": j, "value": rationals(v)}));
                }
            }
        }
    }
    Value::Array(out)
}

fn cohomology_cmd(m: &LoadedModel, bound: &Bound, ring: bool) -> Result<Success, CliError> {
    let max = max_degree(bound, m);
    let h = if ring {
        cohomology::compute_ring(&m.model, max)
    } else {
        cohomology::compute(&m.model, max)
    };
    let mut result = json!({"max_degree": max, "betti": betti_json(&h)});
    if ring {
        result["cup"] = cup_json(&h);
    }
    Ok(Success::ok(
        result,
        json!({"classes": classes_json(&m.model, &h)}),
        m.metadata.provenance.clone(),
    ))
}

fn massey_cmd(m: &LoadedModel, classes: &str, bound: &Bound) -> Result<Success, CliError> {
    let parts: Vec<&str> = classes.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::new(
            "SyntaxError",
            format!("--classes needs three comma-separated expressions, found {}", parts.len()),
        ));
    }
    let cs = parts
        .iter()
        .enumerate()
        .map(|(i, p)| parse_cochain(m, &format!("classes[{i}]"), p))
        .collect::<Result<Vec<_>, _>>()?;
    let needed = (cs.iter().map(|c| c.degree()).sum::<u32>()).saturating_sub(1);
    let max = bound.max_degree.unwrap_or(needed).max(needed);
    let h = cohomology::compute(&m.model, max);
    match massey::triple_in(&m.model, &h, &cs[0], &cs[1], &cs[2]) {
        Ok(r) => {
            let basis: Vec<Value> = r.indeterminacy.basis().iter().map(|v| rationals(v)).collect();
            Ok(Success::ok(
                json!({
                    "defined": true,
                    "degree": r.degree,
                    "vanishes": r.vanishes,
                    "class": rationals(&r.class),
                    "indeterminacy": {"dimension": r.indeterminacy.dim(), "basis": basis},
                }),
                json!({
                    "classes": parts,
                    "a12": m.model.render(&r.a12),
                    "a23": m.model.render(&r.a23),
                    "representative": m.model.render(&r.representative),
                    "class_basis": h.representatives(r.degree).iter().map(|x| m.model.render(x)).collect::<Vec<_>>(),
                }),
                m.metadata.provenance.clone(),
            ))
        }
        Err(MasseyError::NotDefined(product)) => Ok(Success {
            result: json!({"defined": false, "reason": format!("{product} is not exact")}),
            witnesses: json!({"classes": parts, "nonzero_product": product}),
            provenance: m.metadata.provenance.clone(),
            exit_code: 2,
        }),
        Err(e) => Err(e.into()),
    }
}

fn not_applicable(reason: String, provenance: Vec<String>) -> Success {
    Success {
        result: json!({"applicable": false, "reason": reason}),
        witnesses: json!({}),
        provenance,
        exit_code: 2,
    }
}

fn minimal_model_cmd(m: &LoadedModel, bound: &Bound) -> Result<Success, CliError> {
    let max = max_degree(bound, m);
    let mm = match sullivan::minimal_model(&m.model, max) {
        Ok(mm) => mm,
        Err(e @ (SullivanError::NotSimplyConnected { .. } | SullivanError::NotConnected { .. })) => {
            return Ok(not_applicable(e.to_string(), m.metadata.provenance.clone()))
        }
        Err(e) => return Err(e.into()),
    };
    let report = mm.morphism_to(&m.model)?.is_quasi_iso(max)?;
    let counts: Vec<Value> = mm
        .generator_counts()
        .iter()
        .map(|(d, n)| json!({"degree": d, "count": n}))
        .collect();
    let stages: Vec<Value> = mm
        .stages()
        .iter()
        .map(|s| json!({"degree": s.degree, "surjective": s.surjective, "kernel_killing": s.kernel_killing}))
        .collect();
    let comparison: Vec<Value> = report
        .degrees
        .iter()
        .map(|d| json!({"degree": d.degree, "model_betti": d.source_betti, "target_betti": d.target_betti, "rank": d.rank}))
        .collect();
    let morphism: BTreeMap<String, String> = mm
        .dga()
        .algebra()
        .generators()
        .iter()
        .zip(mm.morphism())
        .map(|(g, c)| (g.name().to_string(), m.model.render(c)))
        .collect();
    let meta = Metadata {
        formal_dimension: m.formal_dimension(),
        provenance: vec![format!("minimal model built through degree {max}")],
    };
    Ok(Success::ok(
        json!({
            "built_degree": mm.built_degree(),
            "generator_counts": counts,
            "quasi_isomorphism": {"through": max, "holds": report.is_quasi_iso(), "degrees": comparison},
            "model": model_file::render_value(&Model::Free(mm.dga().clone()), &BTreeMap::new(), &meta),
        }),
        json!({"stages": stages, "morphism": morphism}),
        m.metadata.provenance.clone(),
    ))
}

/// The verdict and its witness as JSON.
pub fn verdict_json(v: &FormalityVerdict) -> (Value, Value) {
    let result = json!({
        "status": v.status.as_str(),
        "dimension": v.dimension,
        "s": v.s,
        "checked_degree_cap": v.checked_degree_cap,
        "notes": v.notes,
    });
    let witness = match &v.witness {
        FormalityWitness::Shortcut { b1, b2, dimension } => {
            json!({"kind": "shortcut", "b1": b1, "b2": b2, "dimension": dimension})
        }
        FormalityWitness::Massey(w) => json!({
            "kind": "massey",
            "classes": w.classes,
            "degrees": w.degrees,
            "representative": w.representative,
            "class": w.class,
            "indeterminacy_dimension": w.indeterminacy_dim,
        }),
        FormalityWitness::Splitting(l) => json!({
            "kind": "splitting",
            "s": l.s,
            "degrees": l.degrees.iter().map(|d| json!({
                "degree": d.degree, "closed": d.closed, "non_closed": d.non_closed
            })).collect::<Vec<_>>(),
            "ideal": l.ideal.iter().map(|d| json!({
                "degree": d.degree, "closed_dimension": d.closed_dim, "exact": d.exact
            })).collect::<Vec<_>>(),
            "obstruction": l.obstruction,
        }),
        FormalityWitness::None => json!({"kind": "none"}),
    };
    (result, witness)
}

fn formality_cmd(m: &LoadedModel, options: FormalityOptions) -> Result<Success, CliError> {
    let v = sullivan::formality(&m.model, options)?;
    let (result, witness) = verdict_json(&v);
    Ok(Success::ok(result, witness, m.metadata.provenance.clone()))
}

fn circle_bundle_cmd(m: &LoadedModel, euler: &str) -> Result<Success, CliError> {
    let class = parse_cochain(m, "euler", euler)?;
    let rendered = m.model.render(&class);
    let total = circle_bundle_model(&m.model, &EulerData::new(class))?;
    let mut provenance = m.metadata.provenance.clone();
    provenance.push(format!("circle bundle with Euler class {rendered}"));
    let meta = Metadata {
        formal_dimension: m.formal_dimension().map(|n| n + 1),
        provenance: provenance.clone(),
    };
    Ok(Success::ok(
        json!({
            "euler": rendered,
            "model": model_file::render_value(&total, &m.parameters, &meta),
        }),
        json!({}),
        provenance,
    ))
}

/// Reads an automorphism file: either generator images of a free model,
/// `{"schema": 1, "generators": {"a1": "a2", ...}}`, or matrices on the
/// class bases, `{"schema": 1, "cohomology": {"2": [["0", "1"], ["1", "0"]]}}`
/// given row by row, optionally completed by Poincaré duality with
/// `"duality": {"dimension": 7, "orientation": "1"}`.
pub fn parse_automorphism(
    m: &LoadedModel,
    h: &CohomologySummary,
    bytes: &[u8],
) -> Result<CohomologyAutomorphism, CliError> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| CliError {
        kind: "SyntaxError".into(),
        detail: format!("automorphism file: {e}"),
        location: Some(Location {
            field: String::new(),
            line: Some(e.line()),
            column: Some(e.column()),
        }),
    })?;
    let schema_err = |detail: String| CliError::new("SchemaError", detail);
    if v.get("schema") != Some(&json!(1)) {
        return Err(schema_err("automorphism files need \"schema\": 1".into()));
    }
    if let Some(images) = v.get("generators") {
        let Model::Free(dga) = &m.model else {
            return Err(schema_err("generator images need a free model".into()));
        };
        let images = images
            .as_object()
            .ok_or_else(|| schema_err("\"generators\" must map names to expressions".into()))?;
        let alg = dga.algebra();
        let mut out: Vec<cdga::Element> = (0..alg.num_generators())
            .map(|i| cdga::Element::generator(alg, i))
            .collect();
        let scope = expr::FreeScope {
            algebra: alg,
            parameters: &m.parameters,
        };
        for (name, value) in images {
            let field = format!("generators.{name}");
            let i = alg
                .generator_index(name)
                .ok_or_else(|| CliError::new("UnknownIdentifier", format!("unknown generator `{name}`")))?;
            let text = value
                .as_str()
                .ok_or_else(|| schema_err(format!("{field} must be an expression string")))?;
            out[i] = expr::parse(text)
                .and_then(|e| e.eval(&scope))
                .map_err(|e| CliError::new("SyntaxError", format!("{field} = \"{text}\": {e}")))?;
        }
        return Ok(CohomologyAutomorphism::induced(dga, &out, h)?);
    }
    let matrices = v
        .get("cohomology")
        .and_then(Value::as_object)
        .ok_or_else(|| schema_err("expected \"generators\" or \"cohomology\"".into()))?;
    let mut given = BTreeMap::new();
    for (deg, rows) in matrices {
        let k: u32 = deg
            .parse()
            .map_err(|_| schema_err(format!("`{deg}` is not a degree")))?;
        let rows = rows
            .as_array()
            .ok_or_else(|| schema_err(format!("cohomology.{deg} must be a list of rows")))?;
        let parsed = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| schema_err(format!("cohomology.{deg} rows must be lists")))?
                    .iter()
                    .map(|x| {
                        model_file::rational_value(x)
                            .ok_or_else(|| schema_err(format!("cohomology.{deg}: {x} is not a rational")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let ncols = parsed.first().map_or(0, Vec::len);
        let matrix = RationalMatrix::from_rows(ncols, parsed)
            .map_err(|e| CliError::new("InvalidAutomorphism", format!("cohomology.{deg}: {e}")))?;
        given.insert(k, matrix);
    }
    match v.get("duality") {
        Some(d) => {
            let dimension = d
                .get("dimension")
                .and_then(Value::as_u64)
                .ok_or_else(|| schema_err("duality.dimension must be a natural number".into()))?;
            let orientation = d
                .get("orientation")
                .map(|o| model_file::rational_value(o).ok_or_else(|| schema_err("duality.orientation must be a rational".into())))
                .transpose()?
                .unwrap_or_else(|| cdga::q(1));
            Ok(CohomologyAutomorphism::complete_by_duality(
                h,
                given,
                dimension as u32,
                &orientation,
            )?)
        }
        None => Ok(CohomologyAutomorphism::from_matrices(h, given)?),
    }
}

fn mapping_torus_cmd(m: &LoadedModel, auto: &[u8], dimension: Option<u32>, bound: &Bound) -> Result<Success, CliError> {
    let max = max_degree(bound, m);
    let h = cohomology::compute_ring(&m.model, max);
    let rho = parse_automorphism(m, &h, auto)?;
    let options = dimension.map(FormalityOptions::new);
    let model_bound = options.map_or(max + 1, |o| o.cap());
    let torus = mapping_torus_model(&h, &rho, model_bound)?;
    let ht = &torus.cohomology;
    let meta = Metadata {
        formal_dimension: dimension.or(m.formal_dimension().map(|n| n + 1)),
        provenance: vec![format!(
            "mapping torus model: Λ(nu) ⊗ minimal model of the invariant subring, built through degree {model_bound}"
        )],
    };
    let torus_model = torus.as_model();
    let mut result = json!({
        "order": torus.order,
        "betti": betti_json(ht),
        "model": model_file::render_value(&torus_model, &BTreeMap::new(), &meta),
    });
    let mut witnesses = json!({
        "classes": Value::Array((0..=ht.max_degree()).map(|k| json!({
            "degree": k,
            "classes": ht.degree(k).map(|d| d.labels.clone()).unwrap_or_default(),
        })).collect()),
        "automorphism": rho.matrices().iter().filter(|(_, mat)| mat.nrows() > 0).map(|(k, mat)| {
            (k.to_string(), Value::Array(mat.to_dense().iter().map(|r| rationals(r)).collect()))
        }).collect::<Map<String, Value>>(),
    });
    if let Some(o) = options {
        let v = sullivan::formality(&torus_model, o)?;
        let (r, w) = verdict_json(&v);
        result["formality"] = r;
        witnesses["formality"] = w;
    }
    let mut provenance = m.metadata.provenance.clone();
    provenance.push("mapping torus of an automorphism of finite order".into());
    Ok(Success::ok(result, witnesses, provenance))
}

fn corpus_cmd(name: &str, params: &CorpusParams) -> Result<Success, CliError> {
    let entry = corpus(name, params)?;
    let meta = Metadata {
        formal_dimension: entry.formal_dimension,
        provenance: entry.provenance.clone(),
    };
    let parameters: BTreeMap<String, String> = entry.parameters.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    Ok(Success::ok(
        json!({
            "name": entry.name,
            "parameters": parameters,
            "model": model_file::render_value(&entry.model, &BTreeMap::new(), &meta),
        }),
        json!({}),
        entry.provenance,
    ))
}

/// Names accepted by the `corpus` command.
pub fn corpus_names() -> &'static [&'static str] {
    constructions::corpus_names()
}
