//! JSON forms of markers, perturbations, configurations and attractors.
//!
//! Perturbations are printed with keys sorted by name, e.g. `{"A": 0, "C": 1}`.
//! Configurations and attractors keep the declaration order and print free
//! components as `"*"`.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::network::ComponentId;
use crate::state::{Configuration, PartialAssignment, Subhypercube};

/// Parses a JSON object mapping component names to `0`/`1` (or
/// `false`/`true`).
pub fn parse_assignment(names: &[ComponentId], text: &str) -> Result<PartialAssignment> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let Value::Object(map) = value else {
        return Err(Error::Json("expected a JSON object".into()));
    };
    let mut out = PartialAssignment::new();
    for (name, v) in map {
        let i = names
            .iter()
            .position(|n| n.as_str() == name)
            .ok_or_else(|| Error::UnknownComponent(name.clone()))?;
        let b = match v {
            Value::Bool(b) => b,
            Value::Number(ref num) if num.as_u64() == Some(0) => false,
            Value::Number(ref num) if num.as_u64() == Some(1) => true,
            other => {
                return Err(Error::Json(format!(
                    "value of `{name}` must be 0 or 1, got {other}"
                )))
            }
        };
        out.insert(i, b);
    }
    Ok(out)
}

fn quoted(name: &str) -> String {
    serde_json::to_string(name).expect("strings always serialize")
}

fn object(entries: impl Iterator<Item = (String, String)>) -> String {
    let body: Vec<String> = entries.map(|(k, v)| format!("{k}: {v}")).collect();
    format!("{{{}}}", body.join(", "))
}

/// `{"A": 0, "C": 1}` with keys sorted by name.
pub fn assignment_to_json(names: &[ComponentId], p: &PartialAssignment) -> String {
    let mut entries: Vec<(&str, bool)> = p.iter().map(|(i, v)| (names[i].as_str(), v)).collect();
    entries.sort();
    object(
        entries
            .into_iter()
            .map(|(k, v)| (quoted(k), (v as u8).to_string())),
    )
}

/// All components in declaration order with values `0`/`1`.
pub fn configuration_to_json(names: &[ComponentId], x: &Configuration) -> String {
    object(
        names
            .iter()
            .zip(x.values())
            .map(|(n, &v)| (quoted(n), (v as u8).to_string())),
    )
}

/// All components in declaration order with values `0`, `1` or `"*"`.
pub fn subcube_to_json(names: &[ComponentId], h: &Subhypercube) -> String {
    object(names.iter().zip(h.values()).map(|(n, v)| {
        let v = match v {
            Some(true) => "1".to_string(),
            Some(false) => "0".to_string(),
            None => "\"*\"".to_string(),
        };
        (quoted(n), v)
    }))
}
