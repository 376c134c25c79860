use serde_json::Value;

/// Compact JSON followed by a newline. Object keys come out sorted because
/// `serde_json::Map` is ordered.
pub fn json(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("a Value always serializes");
    s.push('\n');
    s
}

/// Two-column table of the top-level fields; nested values stay compact JSON.
pub fn pretty(v: &Value) -> String {
    let Value::Object(map) = v else {
        return json(v);
    };
    let width = map.keys().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in map {
        let shown = match val {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        out.push_str(&format!("{k:<width$}  {shown}\n"));
    }
    out
}
