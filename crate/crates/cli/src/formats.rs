//! JSON document parsing and rendering.
//!
//! Integers travel as plain JSON numbers; the `arbitrary_precision`
//! feature of `serde_json` keeps them exact at any size, matching the
//! exact arithmetic of the underlying library. All documents are parsed
//! by hand from `serde_json::Value` so that error messages can name the
//! offending field.

use std::collections::BTreeSet;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use affclass_core::bounds::{Configuration, Flag, Interval, InvariantKind, Relation, TraceStep};
use affclass_core::cone::MonoidSpec;
use affclass_core::matrix::AbelianGroup;

/// Schema-level problems: wrong types, missing fields, malformed numbers.
/// These map to the usage/parse exit code.
#[derive(Debug)]
pub struct SchemaError(pub String);

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for SchemaError {}

fn err<T>(msg: impl Into<String>) -> Result<T, SchemaError> {
    Err(SchemaError(msg.into()))
}

pub fn bigint_to_json(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integer literal is a valid number"))
}

pub fn bigints_to_json(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(bigint_to_json).collect())
}

pub fn json_to_bigint(v: &Value, field: &str) -> Result<BigInt, SchemaError> {
    match v {
        Value::Number(n) => {
            let text = n.to_string();
            if text.contains(['.', 'e', 'E']) {
                return err(format!("{}: expected an integer, got {}", field, text));
            }
            BigInt::from_str(&text)
                .map_err(|_| SchemaError(format!("{}: invalid integer {}", field, text)))
        }
        other => err(format!(
            "{}: expected an integer, got {}",
            field,
            kind_of(other)
        )),
    }
}

fn kind_of(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "a boolean",
        Value::Number(_) => "a number",
        Value::String(_) => "a string",
        Value::Array(_) => "an array",
        Value::Object(_) => "an object",
    }
}

pub fn as_object<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>, SchemaError> {
    v.as_object()
        .ok_or_else(|| SchemaError(format!("{}: expected an object", what)))
}

pub fn get<'v>(obj: &'v Map<String, Value>, field: &str) -> Result<&'v Value, SchemaError> {
    obj.get(field)
        .ok_or_else(|| SchemaError(format!("missing field \"{}\"", field)))
}

pub fn json_to_u64(v: &Value, field: &str) -> Result<u64, SchemaError> {
    let big = json_to_bigint(v, field)?;
    u64::try_from(big).map_err(|_| SchemaError(format!("{}: expected a natural number", field)))
}

pub fn json_to_usize(v: &Value, field: &str) -> Result<usize, SchemaError> {
    let n = json_to_u64(v, field)?;
    usize::try_from(n).map_err(|_| SchemaError(format!("{}: value too large", field)))
}

pub fn json_to_vector(v: &Value, field: &str) -> Result<Vec<BigInt>, SchemaError> {
    let arr = v
        .as_array()
        .ok_or_else(|| SchemaError(format!("{}: expected an array of integers", field)))?;
    arr.iter().map(|x| json_to_bigint(x, field)).collect()
}

pub fn json_to_vectors(v: &Value, field: &str) -> Result<Vec<Vec<BigInt>>, SchemaError> {
    let arr = v
        .as_array()
        .ok_or_else(|| SchemaError(format!("{}: expected an array of arrays", field)))?;
    arr.iter().map(|row| json_to_vector(row, field)).collect()
}

pub fn json_to_u64_list(v: &Value, field: &str) -> Result<Vec<u64>, SchemaError> {
    let arr = v
        .as_array()
        .ok_or_else(|| SchemaError(format!("{}: expected an array of integers", field)))?;
    arr.iter().map(|x| json_to_u64(x, field)).collect()
}

/// Monoid document: `{"dim": d, "generators": [[...], ...]}` with an
/// optional `"lattice"` switch (`"generated"`, the default, re-expresses
/// the generators in the lattice they generate; `"ambient"` keeps `Z^dim`).
pub struct MonoidDocument {
    pub dim: usize,
    pub generators: Vec<Vec<BigInt>>,
    pub ambient: bool,
}

impl MonoidDocument {
    pub fn parse(v: &Value) -> Result<Self, SchemaError> {
        let obj = as_object(v, "monoid document")?;
        let dim = json_to_usize(get(obj, "dim")?, "dim")?;
        let generators = json_to_vectors(get(obj, "generators")?, "generators")?;
        let ambient = match obj.get("lattice") {
            None => false,
            Some(Value::String(s)) if s == "generated" => false,
            Some(Value::String(s)) if s == "ambient" => true,
            Some(other) => {
                return err(format!(
                    "lattice: expected \"generated\" or \"ambient\", got {}",
                    kind_of(other)
                ))
            }
        };
        Ok(MonoidDocument {
            dim,
            generators,
            ambient,
        })
    }

    pub fn build(&self) -> Result<MonoidSpec, affclass_core::cone::ConeError> {
        if self.ambient {
            MonoidSpec::in_ambient_lattice(self.dim, &self.generators)
        } else {
            MonoidSpec::build(self.dim, &self.generators)
        }
    }
}

/// Divisor document: `{"coeffs": [...]}` or `{"support": [facet index, ...]}`
/// (zero-based indices into the facet list).
pub enum DivisorDocument {
    Coeffs(Vec<BigInt>),
    Support(BTreeSet<usize>),
}

impl DivisorDocument {
    pub fn parse(v: &Value) -> Result<Self, SchemaError> {
        let obj = as_object(v, "divisor document")?;
        match (obj.get("coeffs"), obj.get("support")) {
            (Some(c), None) => Ok(DivisorDocument::Coeffs(json_to_vector(c, "coeffs")?)),
            (None, Some(s)) => {
                let arr = s
                    .as_array()
                    .ok_or_else(|| SchemaError("support: expected an array".into()))?;
                let mut set = BTreeSet::new();
                for x in arr {
                    set.insert(json_to_usize(x, "support")?);
                }
                Ok(DivisorDocument::Support(set))
            }
            _ => err("divisor document needs exactly one of \"coeffs\" or \"support\""),
        }
    }
}

pub fn group_to_json(g: &AbelianGroup) -> Value {
    json!({
        "free_rank": g.free_rank(),
        "invariant_factors": bigints_to_json(g.invariant_factors()),
    })
}

pub fn group_to_text(g: &AbelianGroup) -> String {
    format!("{}", g)
}

pub fn interval_to_json(i: &Interval) -> Value {
    json!({ "lo": i.lo(), "hi": i.hi() })
}

pub fn trace_to_json(trace: &[TraceStep]) -> Value {
    Value::Array(
        trace
            .iter()
            .map(|step| {
                json!({
                    "rule": step.rule.name(),
                    "statement": step.statement,
                    "invariant": step.kind.name(),
                    "before": interval_to_json(&step.before),
                    "after": interval_to_json(&step.after),
                })
            })
            .collect(),
    )
}

/// Facts document for the bounds engine.
pub struct BoundsDocument {
    pub facts: Vec<(InvariantKind, Relation, u64)>,
    pub flags: Vec<Flag>,
    pub configuration: Configuration,
}

impl BoundsDocument {
    pub fn parse(v: &Value) -> Result<Self, SchemaError> {
        let obj = as_object(v, "bounds document")?;
        let mut facts = Vec::new();
        if let Some(list) = obj.get("facts") {
            let arr = list
                .as_array()
                .ok_or_else(|| SchemaError("facts: expected an array".into()))?;
            for item in arr {
                let fact = as_object(item, "fact")?;
                let name = get(fact, "invariant")?
                    .as_str()
                    .ok_or_else(|| SchemaError("invariant: expected a string".into()))?;
                let kind = InvariantKind::parse(name)
                    .ok_or_else(|| SchemaError(format!("unknown invariant \"{}\"", name)))?;
                let rel_name = get(fact, "rel")?
                    .as_str()
                    .ok_or_else(|| SchemaError("rel: expected a string".into()))?;
                let rel = match rel_name {
                    "eq" => Relation::Eq,
                    "le" => Relation::Le,
                    "ge" => Relation::Ge,
                    other => return err(format!("unknown relation \"{}\"", other)),
                };
                let value = json_to_u64(get(fact, "value")?, "value")?;
                facts.push((kind, rel, value));
            }
        }
        let mut flags = Vec::new();
        if let Some(list) = obj.get("flags") {
            let arr = list
                .as_array()
                .ok_or_else(|| SchemaError("flags: expected an array".into()))?;
            for item in arr {
                let name = item
                    .as_str()
                    .ok_or_else(|| SchemaError("flags: expected strings".into()))?;
                let flag = Flag::parse(name)
                    .ok_or_else(|| SchemaError(format!("unknown flag \"{}\"", name)))?;
                flags.push(flag);
            }
        }
        let configuration = match obj.get("configuration") {
            None => Configuration::IdealInAffineRing,
            Some(Value::String(s)) if s == "ideal" => Configuration::IdealInAffineRing,
            Some(Value::String(s)) if s == "scheme" => Configuration::GeneralScheme,
            Some(other) => {
                return err(format!(
                    "configuration: expected \"ideal\" or \"scheme\", got {}",
                    kind_of(other)
                ))
            }
        };
        Ok(BoundsDocument {
            facts,
            flags,
            configuration,
        })
    }
}
