use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// JSON report printed by every CLI command. Identical inputs and seed give
/// identical reports apart from `wall_time_ms`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub ok: bool,
    pub result: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failing: Vec<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            parameters: Map::new(),
            ok: true,
            result: Value::Null,
            failing: Vec::new(),
            notes: Vec::new(),
            seed: None,
            wall_time_ms: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(
            key.to_owned(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
        self
    }

    pub fn finish(&mut self, started: Instant) {
        self.wall_time_ms = started.elapsed().as_millis() as u64;
    }

    /// The report with `wall_time_ms` removed, for determinism checks.
    pub fn canonical(&self) -> Value {
        let mut v = serde_json::to_value(self).unwrap_or(Value::Null);
        if let Some(obj) = v.as_object_mut() {
            obj.remove("wall_time_ms");
        }
        v
    }
}
