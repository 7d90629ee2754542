//! Small helpers for schema-checked reads out of `serde_json::Value`.

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::model::Alphabet;

pub(crate) fn object<'a>(value: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    value.as_object().ok_or_else(|| Error::Schema {
        path: path_or_root(path),
        message: "expected an object".into(),
    })
}

pub(crate) fn field<'a>(obj: &'a Map<String, Value>, name: &str, path: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| Error::MissingField {
        path: path_or_root(path),
        field: name.to_string(),
    })
}

pub(crate) fn alphabet(obj: &Map<String, Value>, name: &str, path: &str) -> Result<Alphabet> {
    let p = format!("{path}/{name}");
    let arr = field(obj, name, path)?
        .as_array()
        .ok_or_else(|| Error::Schema {
            path: p.clone(),
            message: "expected an array of labels".into(),
        })?;
    let mut labels = Vec::with_capacity(arr.len());
    for (i, v) in arr.iter().enumerate() {
        labels.push(match v {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => {
                return Err(Error::Schema {
                    path: format!("{p}/{i}"),
                    message: "expected a string label".into(),
                })
            }
        });
    }
    Alphabet::with_path(labels, &p)
}

pub(crate) fn path_or_root(path: &str) -> String {
    if path.is_empty() {
        "/".to_string()
    } else {
        path.to_string()
    }
}

pub(crate) fn parse_document(text: &str) -> Result<Value> {
    Ok(serde_json::from_str(text)?)
}
