//! Small helpers for hand-rolled JSON ingestion with path-cited errors.

use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub(crate) fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::parse(path, "expected a JSON object"))
}

pub(crate) fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::parse(path, "expected a JSON array"))
}

pub(crate) fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::parse(path, "expected a number"))
}

pub(crate) fn field<'a>(obj: &'a Map<String, Value>, parent: &str, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| {
        Error::parse(
            if parent.is_empty() {
                name.to_string()
            } else {
                format!("{parent}.{name}")
            },
            "missing required field",
        )
    })
}

pub(crate) fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::parse("<document>", format!("invalid JSON: {e}")))
}
