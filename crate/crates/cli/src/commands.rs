//! One function per subcommand: parse the input document, call the
//! library, and render both the JSON report and its text projection.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde_json::{json, Value};

use affclass_core::bounds::KnowledgeBase;
use affclass_core::cone::{facet_valuations, ConeError, FacetSystem, MonoidSpec};
use affclass_core::divisor::{
    divisor_class_group, simpliciality_report, support, support_witness, DivisorError,
    MonomialDivisor,
};
use affclass_core::rings::{DeterminantalData, HyperbolaData, RingError, SegreFormat, SegreSort};

use crate::formats::{
    as_object, bigints_to_json, get, group_to_json, group_to_text, interval_to_json, json_to_u64,
    json_to_u64_list, json_to_vector, trace_to_json, BoundsDocument, DivisorDocument,
    MonoidDocument, SchemaError,
};

/// A rendered report: the JSON value and its human-readable projection.
pub struct Report {
    pub json: Value,
    pub text: String,
}

/// Errors with their exit-code class.
pub enum CliError {
    /// Malformed input: wrong flags, unreadable file, schema violations.
    /// Exit code 2.
    Usage(String),
    /// Valid input describing a rejected mathematical configuration.
    /// Exit code 1, reported as `{"code", "message", "witness"?}`.
    Domain {
        code: &'static str,
        message: String,
        witness: Option<Value>,
    },
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Usage(e.0)
    }
}

impl From<ConeError> for CliError {
    fn from(e: ConeError) -> Self {
        let message = e.to_string();
        match e {
            ConeError::DimensionMismatch { .. } => CliError::Usage(message),
            ConeError::EmptyGenerators => CliError::Domain {
                code: "empty_generators",
                message,
                witness: None,
            },
            ConeError::NotPointed { ref witness } => CliError::Domain {
                code: "not_pointed",
                message,
                witness: Some(bigints_to_json(witness)),
            },
            ConeError::NotFullDimensional { .. } => CliError::Domain {
                code: "not_full_dimensional",
                message,
                witness: None,
            },
        }
    }
}

impl From<DivisorError> for CliError {
    fn from(e: DivisorError) -> Self {
        let message = e.to_string();
        match e {
            DivisorError::NotEffective { index } => CliError::Domain {
                code: "not_effective",
                message,
                witness: Some(json!({ "facet": index })),
            },
            DivisorError::DimensionMismatch { .. } => CliError::Usage(message),
            DivisorError::InternalInconsistency => CliError::Domain {
                code: "internal_inconsistency",
                message,
                witness: None,
            },
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        let message = e.to_string();
        match e {
            RingError::DimensionMismatch { .. } | RingError::InvalidComaximalData => {
                CliError::Usage(message)
            }
            RingError::InvalidExponent { .. } => CliError::Domain {
                code: "invalid_exponent",
                message,
                witness: None,
            },
            RingError::MissingComaximalData => CliError::Domain {
                code: "missing_comaximal_data",
                message,
                witness: None,
            },
            RingError::BaseNotLocal => CliError::Domain {
                code: "base_not_local",
                message,
                witness: None,
            },
            RingError::FormatViolation { .. } => CliError::Domain {
                code: "format_violation",
                message,
                witness: None,
            },
        }
    }
}

fn monoid_with_facets(doc: &Value) -> Result<(MonoidSpec, FacetSystem), CliError> {
    let monoid = MonoidDocument::parse(doc)?.build()?;
    let facets = facet_valuations(&monoid)?;
    Ok((monoid, facets))
}

pub fn monoid_facets(doc: &Value) -> Result<Report, CliError> {
    let (_, facets) = monoid_with_facets(doc)?;
    let normals: Vec<Value> = facets
        .normals()
        .iter()
        .map(|n| bigints_to_json(n))
        .collect();
    let report = simpliciality_report(&facets)?;
    let mut text = String::new();
    for n in facets.normals() {
        text.push_str(&format!("normal: {}\n", join(n)));
    }
    text.push_str(&format!("simplicial: {}\n", report.simplicial));
    text.push_str(&format!("dkg_is_torsion: {}\n", report.dkg_is_torsion));
    text.push_str(&format!("akg_zero: {}\n", report.akg_zero));
    Ok(Report {
        json: json!({
            "normals": normals,
            "simplicial": report.simplicial,
            "dkg_is_torsion": report.dkg_is_torsion,
            "akg_zero": report.akg_zero,
        }),
        text,
    })
}

pub fn monoid_dkg(doc: &Value) -> Result<Report, CliError> {
    let (_, facets) = monoid_with_facets(doc)?;
    let groups = divisor_class_group(&facets);
    Ok(Report {
        json: json!({ "dkg": group_to_json(&groups.dkg) }),
        text: format!("dkg: {}\n", group_to_text(&groups.dkg)),
    })
}

pub fn monoid_akg(doc: &Value) -> Result<Report, CliError> {
    let (_, facets) = monoid_with_facets(doc)?;
    let groups = divisor_class_group(&facets);
    Ok(Report {
        json: json!({ "akg": group_to_json(&groups.akg) }),
        text: format!("akg: {}\n", group_to_text(&groups.akg)),
    })
}

pub fn monoid_affine(doc: &Value) -> Result<Report, CliError> {
    let obj = as_object(doc, "input")?;
    let (monoid, facets) = monoid_with_facets(get(obj, "monoid")?)?;
    let supp: BTreeSet<usize> = match DivisorDocument::parse(get(obj, "divisor")?)? {
        DivisorDocument::Coeffs(coeffs) => {
            if coeffs.len() != facets.count() {
                return Err(CliError::Usage(format!(
                    "divisor has {} coefficients, expected {}",
                    coeffs.len(),
                    facets.count()
                )));
            }
            support(&MonomialDivisor::new(coeffs))?
        }
        DivisorDocument::Support(set) => {
            if let Some(&bad) = set.iter().find(|&&i| i >= facets.count()) {
                return Err(CliError::Usage(format!(
                    "support index {} out of range (facet count {})",
                    bad,
                    facets.count()
                )));
            }
            set
        }
    };
    let witness = support_witness(&monoid, &facets, &supp);
    let affine = witness.is_some();
    let support_list: Vec<usize> = supp.iter().copied().collect();
    let text = format!(
        "affine: {}\nsupport: {}\nwitness: {}\n",
        affine,
        support_list
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" "),
        witness.as_ref().map_or("none".to_string(), |w| join(w)),
    );
    Ok(Report {
        json: json!({
            "affine": affine,
            "support": support_list,
            "witness": witness.as_ref().map(|w| bigints_to_json(w)),
        }),
        text,
    })
}

pub fn hyperbola(doc: &Value) -> Result<Report, CliError> {
    let obj = as_object(doc, "input")?;
    let exponents = json_to_vector(get(obj, "d")?, "d")?;
    let local = match obj.get("local") {
        None => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(CliError::Usage("local: expected a boolean".into())),
    };
    let comaximal =
        match obj.get("comaximal") {
            None => None,
            Some(v) => {
                let rows = v
                    .as_array()
                    .ok_or_else(|| CliError::Usage("comaximal: expected an array".into()))?;
                let mut rel = Vec::new();
                for row in rows {
                    let row = row
                        .as_array()
                        .ok_or_else(|| CliError::Usage("comaximal: expected rows".into()))?;
                    let mut flags = Vec::new();
                    for x in row {
                        flags.push(x.as_bool().ok_or_else(|| {
                            CliError::Usage("comaximal: expected booleans".into())
                        })?);
                    }
                    rel.push(flags);
                }
                Some(rel)
            }
        };
    let data = HyperbolaData::new(exponents, local, comaximal)?;

    let dkg = data.dkg();
    let mut fields = serde_json::Map::new();
    let mut text = format!("dkg: {}\n", group_to_text(&dkg));
    fields.insert("dkg".into(), group_to_json(&dkg));
    if local {
        let akg = data.akg()?;
        text.push_str(&format!("akg: {}\n", group_to_text(&akg)));
        fields.insert("akg".into(), group_to_json(&akg));
    }
    match data.akg_is_zero() {
        Ok(zero) => {
            text.push_str(&format!("akg_zero: {}\n", zero));
            fields.insert("akg_zero".into(), Value::Bool(zero));
        }
        Err(RingError::MissingComaximalData) => {}
        Err(other) => return Err(other.into()),
    }
    if let Some(n_value) = obj.get("n") {
        let n = json_to_vector(n_value, "n")?;
        if n.len() != data.prime_count() {
            return Err(CliError::Usage(format!(
                "n has {} entries, expected {}",
                n.len(),
                data.prime_count()
            )));
        }
        let coaffine = data.is_coaffine(&n)?;
        let affine_trivial = data.is_affine_trivial(&n)?;
        text.push_str(&format!(
            "coaffine: {}\naffine_trivial: {}\n",
            coaffine, affine_trivial
        ));
        fields.insert("coaffine".into(), Value::Bool(coaffine));
        fields.insert("affine_trivial".into(), Value::Bool(affine_trivial));
    }
    Ok(Report {
        json: Value::Object(fields),
        text,
    })
}

pub fn determinantal(doc: &Value) -> Result<Report, CliError> {
    let obj = as_object(doc, "input")?;
    let m = json_to_u64(get(obj, "m")?, "m")?;
    let n = json_to_u64(get(obj, "n")?, "n")?;
    let k = json_to_u64(get(obj, "k")?, "k")?;
    let data = DeterminantalData::new(m, n, k)?;
    let text = format!(
        "dimension: {}\nideal_height: {}\nextension_height: {}\ndkg: {}\nakg: {}\n",
        data.dimension(),
        data.ideal_height(),
        data.extension_height(),
        group_to_text(&data.dkg()),
        group_to_text(&data.akg()),
    );
    Ok(Report {
        json: json!({
            "dimension": data.dimension(),
            "ideal_height": data.ideal_height(),
            "extension_height": data.extension_height(),
            "dkg": group_to_json(&data.dkg()),
            "akg": group_to_json(&data.akg()),
        }),
        text,
    })
}

pub fn segre(doc: &Value) -> Result<Report, CliError> {
    let obj = as_object(doc, "input")?;
    let m = json_to_u64(get(obj, "m")?, "m")?;
    let n = json_to_u64(get(obj, "n")?, "n")?;
    let rows = match obj.get("rows") {
        None => Vec::new(),
        Some(v) => json_to_u64_list(v, "rows")?,
    };
    let cols = match obj.get("cols") {
        None => Vec::new(),
        Some(v) => json_to_u64_list(v, "cols")?,
    };
    let format = SegreFormat::new(m, n)?;
    let affine = format.union_affine(&rows, &cols)?;
    let row_superheight = format.superheight(SegreSort::Row);
    let col_superheight = format.superheight(SegreSort::Col);
    Ok(Report {
        json: json!({
            "affine": affine,
            "row_superheight": row_superheight,
            "col_superheight": col_superheight,
        }),
        text: format!(
            "affine: {}\nrow_superheight: {}\ncol_superheight: {}\n",
            affine, row_superheight, col_superheight
        ),
    })
}

pub fn bounds(doc: &Value) -> Result<Report, CliError> {
    let parsed = BoundsDocument::parse(doc)?;
    let mut kb = KnowledgeBase::new().with_configuration(parsed.configuration);
    for flag in parsed.flags {
        kb = kb.with_flag(flag);
    }
    for (kind, rel, value) in parsed.facts {
        kb = kb
            .assert_fact(kind, rel, value)
            .map_err(|e| CliError::Domain {
                code: "contradiction",
                message: e.to_string(),
                witness: Some(json!({
                    "invariant": e.kind.name(),
                    "existing": interval_to_json(&e.existing),
                    "asserted": interval_to_json(&e.asserted),
                })),
            })?;
    }
    let propagation = kb.propagate().map_err(|e| CliError::Domain {
        code: "contradiction",
        message: e.to_string(),
        witness: Some(json!({
            "rule": e.rule.name(),
            "statement": e.statement,
            "invariant": e.kind.name(),
            "lo": e.lo,
            "hi": e.hi,
            "trace": trace_to_json(&e.trace),
        })),
    })?;

    let intervals: Vec<Value> = affclass_core::bounds::InvariantKind::ALL
        .iter()
        .map(|&kind| {
            let i = propagation.kb.query(kind);
            json!({ "invariant": kind.name(), "lo": i.lo(), "hi": i.hi() })
        })
        .collect();
    let mut text = String::from("status: consistent\n");
    for kind in affclass_core::bounds::InvariantKind::ALL {
        text.push_str(&format!(
            "{}: {}\n",
            kind.name(),
            propagation.kb.query(kind)
        ));
    }
    for step in propagation.explain() {
        text.push_str(&format!(
            "{} [{}] {}: {} -> {}\n",
            step.rule.name(),
            step.statement,
            step.kind.name(),
            step.before,
            step.after
        ));
    }
    Ok(Report {
        json: json!({
            "status": "consistent",
            "intervals": intervals,
            "trace": trace_to_json(propagation.explain()),
        }),
        text,
    })
}

pub fn error_report(code: &str, message: &str, witness: Option<Value>) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("code".into(), Value::String(code.into()));
    obj.insert("message".into(), Value::String(message.into()));
    if let Some(w) = witness {
        obj.insert("witness".into(), w);
    }
    Value::Object(obj)
}

fn join(xs: &[BigInt]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
