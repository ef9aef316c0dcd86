//! Command arguments are inline JSON when they start with `{` or `[`, a
//! path otherwise, and standard input for `-`.

use std::io::Read;

use serde::de::DeserializeOwned;
use serde_json::Value;

use mucut_core::cones::{Cone2, ConeN};

use crate::Failure;

fn read_source(arg: &str) -> Result<String, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Malformed(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(arg).map_err(|e| Failure::Malformed(format!("{arg}: {e}")))
}

pub(crate) fn parse<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T, Failure> {
    let text = read_source(arg)?;
    serde_json::from_str(&text).map_err(|e| Failure::Malformed(format!("invalid {what}: {e}")))
}

/// A two-dimensional cone given by generators or by facet normals.
pub(crate) fn parse_cone(arg: &str) -> Result<Cone2, Failure> {
    let value: Value = parse(arg, "cone")?;
    if value.get("normals").is_some() {
        let c: ConeN = serde_json::from_value(value).map_err(|e| Failure::Malformed(format!("invalid cone: {e}")))?;
        return c.to_cone2().map_err(Failure::domain);
    }
    serde_json::from_value(value).map_err(|e| Failure::Malformed(format!("invalid cone: {e}")))
}
