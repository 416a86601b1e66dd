//! Input files: every document carries a "schema" field naming its kind and version.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use modcat::cyclotomic::RootExponent;
use modcat::finab::{AbAction, AbHom, FinAbGroup};
use modcat::fingrp::FiniteGroup;
use modcat::groupcoh::Cochain;
use modcat::metric::MetricGroup;

pub const FORM: &str = "modcat/form@1";
pub const GROUP: &str = "modcat/group@1";
pub const MODULE: &str = "modcat/module@1";
pub const COCHAIN: &str = "modcat/cochain@1";
pub const MODULAR_DATA: &str = "modcat/modular-data@1";
pub const LIFT: &str = "modcat/lift@1";
pub const EXTENSION: &str = "modcat/extension@1";
pub const OUTER_ACTION: &str = "modcat/outer-action@1";

/// Failure of a command: malformed input (exit 2) or a domain error (exit 1).
#[derive(Debug)]
pub enum CliError {
    Malformed { message: String, context: Value },
    Domain { error: modcat::Error, context: Value },
}

impl CliError {
    pub fn malformed(message: impl Into<String>, context: Value) -> Self {
        CliError::Malformed { message: message.into(), context }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Malformed { .. } => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (code, message, context) = match self {
            CliError::Malformed { message, context } => ("MalformedInput", message.clone(), context.clone()),
            CliError::Domain { error, context } => (error.code(), error.to_string(), context.clone()),
        };
        json!({"error": {"code": code, "message": message, "context": context}})
    }
}

impl From<modcat::Error> for CliError {
    fn from(error: modcat::Error) -> Self {
        CliError::Domain { error, context: json!({}) }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Attaches the offending file to malformed-input errors raised while parsing it.
pub fn in_file<T>(path: &Path, r: CliResult<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        CliError::Malformed { message, .. } => CliError::malformed(message, json!({"file": path.display().to_string()})),
        CliError::Domain { error, .. } => CliError::Domain { error, context: json!({"file": path.display().to_string()}) },
    })
}

/// Reads a JSON document and checks its schema tag.
pub fn load(path: &Path, schema: &str) -> CliResult<Value> {
    let ctx = || json!({"file": path.display().to_string()});
    let text = std::fs::read_to_string(path).map_err(|e| CliError::malformed(format!("cannot read file: {e}"), ctx()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::malformed(format!("invalid JSON: {e}"), ctx()))?;
    check_schema(&v, schema).map_err(|m| CliError::malformed(m, ctx()))?;
    Ok(v)
}

pub fn check_schema(v: &Value, schema: &str) -> std::result::Result<(), String> {
    match v.get("schema").and_then(Value::as_str) {
        Some(s) if s == schema => Ok(()),
        Some(s) => Err(format!("expected schema {schema:?}, found {s:?}")),
        None => Err(format!("missing \"schema\" field (expected {schema:?})")),
    }
}

pub fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key).ok_or_else(|| CliError::malformed(format!("missing field {key:?}"), json!({})))
}

pub fn parse<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> CliResult<T> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::malformed(format!("bad {what}: {e}"), json!({})))
}

/// {"cyclic":[...]}.
pub fn ab_group(v: &Value) -> CliResult<FinAbGroup> {
    let orders: Vec<u64> = parse(field(v, "cyclic")?, "cyclic orders")?;
    if orders.contains(&0) {
        return Err(CliError::malformed("cyclic orders must be positive", json!({})));
    }
    Ok(FinAbGroup::new(orders)?)
}

/// {"table":...} | {"permutations":...} | {"cyclic":[...]} (a product of cyclic groups).
pub fn finite_group(v: &Value) -> CliResult<FiniteGroup> {
    if v.get("cyclic").is_some() {
        return Ok(ab_group(v)?.to_finite_group());
    }
    if let Some(t) = v.get("table") {
        let table: Vec<Vec<usize>> = parse(t, "group table")?;
        return Ok(FiniteGroup::from_table(table)?);
    }
    if let Some(p) = v.get("permutations") {
        let gens: Vec<Vec<usize>> = parse(p, "permutations")?;
        return Ok(FiniteGroup::from_permutations(&gens, modcat::fingrp::GROUP_CAP)?);
    }
    Err(CliError::malformed("a group needs \"table\", \"permutations\" or \"cyclic\"", json!({})))
}

/// {"group": {"cyclic":[...]}, "q": {"(x,y)": "a/b", ...}}; shape errors are malformed input,
/// mathematical ones (odd, degenerate, missing values) are domain errors.
pub fn form(v: &Value) -> CliResult<MetricGroup> {
    ab_group(field(v, "group")?)?;
    let q: std::collections::BTreeMap<String, String> = parse(field(v, "q")?, "form values")?;
    for (k, val) in &q {
        if modcat::metric::parse_tuple_key(k).is_err() {
            return Err(CliError::malformed(format!("bad element key {k:?}"), json!({})));
        }
        if val.parse::<RootExponent>().is_err() {
            return Err(CliError::malformed(format!("bad value {val:?} at {k}"), json!({})));
        }
    }
    Ok(MetricGroup::from_json(v)?)
}

/// [{"element": g, "matrix": [[..]]}, ...] for generators; absent means trivial.
pub fn action(gamma: &Arc<FiniteGroup>, module: &FinAbGroup, v: Option<&Value>) -> CliResult<Arc<AbAction>> {
    let Some(list) = v else {
        return Ok(Arc::new(AbAction::trivial(gamma.clone(), module.clone())));
    };
    let items: Vec<Value> = parse(list, "action")?;
    let mut gens = Vec::new();
    for it in &items {
        let g: usize = parse(field(it, "element")?, "action element")?;
        if g >= gamma.order() {
            return Err(CliError::malformed(format!("action element {g} is not in Γ"), json!({})));
        }
        let m: Vec<Vec<i64>> = parse(field(it, "matrix")?, "action matrix")?;
        gens.push((g, AbHom::new(module.clone(), module.clone(), m)?));
    }
    Ok(Arc::new(AbAction::from_generators(gamma.clone(), module.clone(), &gens)?))
}

/// A module document: {"gamma": group, "group": {"cyclic":[...]}, "action": [...]}.
pub fn module(v: &Value) -> CliResult<Arc<AbAction>> {
    let gamma = Arc::new(finite_group(field(v, "gamma")?)?);
    let m = ab_group(field(v, "group")?)?;
    action(&gamma, &m, v.get("action"))
}

/// A cochain with trivial action: {"degree", "module": {"cyclic":[...]}, "values"}.
pub fn trivial_cochain(gamma: &Arc<FiniteGroup>, v: &Value) -> CliResult<Cochain> {
    let degree: usize = parse(field(v, "degree")?, "degree")?;
    let m = ab_group(field(v, "module")?)?;
    let act = Arc::new(AbAction::trivial(gamma.clone(), m));
    Ok(Cochain::from_json(&act, degree, field(v, "values")?)?)
}

pub fn cochain_json(c: &Cochain) -> Value {
    json!({
        "schema": COCHAIN,
        "degree": c.degree(),
        "module": c.module(),
        "values": c.to_json(),
    })
}

/// Q/Z values of a cochain into a cyclic module, as "a/b" strings.
pub fn qz_json(c: &Cochain) -> Value {
    fn rec(c: &Cochain, prefix: &mut Vec<usize>) -> Value {
        if prefix.len() == c.degree() {
            return Value::String(c.value_qz(prefix).to_string());
        }
        let mut arr = Vec::new();
        for g in 0..c.group().order() {
            prefix.push(g);
            arr.push(rec(c, prefix));
            prefix.pop();
        }
        Value::Array(arr)
    }
    rec(c, &mut Vec::new())
}

pub fn root_exponents(v: &Value) -> CliResult<Vec<RootExponent>> {
    let strs: Vec<String> = parse(v, "list of a/b values")?;
    strs.iter()
        .map(|s| s.parse::<RootExponent>().map_err(|e| CliError::malformed(format!("bad value {s:?}: {e}"), json!({}))))
        .collect()
}

pub fn usize_list(v: &Value, what: &str) -> CliResult<Vec<usize>> {
    parse(v, what)
}
