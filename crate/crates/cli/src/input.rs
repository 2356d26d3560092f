use std::fs;
use std::io::Read;

use serde::de::DeserializeOwned;
use serde_json::Value;

/// Contents of `path`, or standard input for `-`.
pub fn read_source(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("reading standard input: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    }
}

/// Parses `text` as `T`, also accepting a run report whose `results` hold
/// the object under `key`.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str, key: &str) -> Result<T, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("malformed JSON for {what}: {e}"))?;
    let inner = match value.get("results").and_then(|r| r.get(key)) {
        Some(v) => v.clone(),
        None => value,
    };
    serde_json::from_value(inner).map_err(|e| format!("invalid {what}: {e}"))
}
