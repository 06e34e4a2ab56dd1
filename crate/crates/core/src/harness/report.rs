use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::cache::CacheStats;

pub const REPORT_SCHEMA: &str = "wittkit-report/v1";

/// One verified statement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
    pub details: Value,
}

/// Wall clock and cache counters; the only part of a report that may differ
/// between two runs of the same configuration.
#[derive(Clone, Debug, Serialize)]
pub struct Runtime {
    pub wall_clock_ms: u128,
    pub per_check_ms: BTreeMap<String, u128>,
    pub cache: CacheStats,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: String,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<CheckRecord>,
    pub passed: bool,
    pub runtime: Runtime,
}

/// Replaces every JSON number by its decimal string.
pub fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

/// Canonical JSON: sorted keys, integers as strings, two-space indentation.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    let v = stringify_numbers(serde_json::to_value(value).expect("plain data serializes"));
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

impl SuiteReport {
    pub fn to_canonical_json(&self) -> String {
        canonical_json(self)
    }

    /// Canonical JSON without the runtime section.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("plain data serializes");
        if let Value::Object(o) = &mut v {
            o.remove("runtime");
        }
        canonical_json(&v)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn summary_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.suite.len() + c.name.len() + 3).max().unwrap_or(10).max(10);
        let mut out = String::new();
        for c in &self.checks {
            let label = format!("{} / {}", c.suite, c.name);
            let ms = self.runtime.per_check_ms.get(&format!("{}/{}", c.suite, c.name)).copied().unwrap_or(0);
            let _ = writeln!(out, "{:<4}  {label:<width$}  {:>8} ms  {}", if c.passed { "PASS" } else { "FAIL" }, ms, c.computed);
        }
        let s = self.runtime.cache;
        let _ = writeln!(
            out,
            "{} of {} checks passed in {} ms (cache: {} hits, {} misses, {} writes, {} discarded)",
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len(),
            self.runtime.wall_clock_ms,
            s.hits,
            s.misses,
            s.writes,
            s.discarded
        );
        out
    }
}
