//! Line-delimited JSON batch mode.
//!
//! Each input line is an object with a `command` (`analyze`, `verify`,
//! `sweep` or `equilateral`) and string fields `fixed`, `tele_lo`,
//! `tele_hi`, `grid`, `n`, `a`, `b` as the command needs; numbers are
//! accepted wherever a string is. Each output line echoes the record with a
//! `result` or an `error` object added. Blank lines are skipped.

use rayon::prelude::*;
use serde_json::{Map, Value};
use teleskope_core::analysis::{self, AnalysisRequest};

use crate::{Failure, EXIT_FAILURE, EXIT_USAGE};

pub const THREADS_VAR: &str = "TELESKOPE_THREADS";

/// One rendered output line.
#[derive(Clone, Debug)]
pub struct Line {
    pub json: String,
    pub failed: bool,
}

/// A pool capped by `TELESKOPE_THREADS` when it is set.
pub fn pool() -> Result<rayon::ThreadPool, Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(text) = std::env::var(THREADS_VAR) {
        let threads: usize = text
            .trim()
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| Failure::usage(format!("{THREADS_VAR} must be a positive integer, got {text:?}")))?;
        let available = std::thread::available_parallelism().map_or(1, |n| n.get());
        builder = builder.num_threads(threads.min(available));
    }
    builder
        .build()
        .map_err(|e| Failure::new("io", e.to_string(), EXIT_FAILURE))
}

/// Processes every non-blank line, keeping input order.
pub fn process(text: &str) -> Vec<Line> {
    let records: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    records.par_iter().map(|line| process_line(line)).collect()
}

pub fn process_line(line: &str) -> Line {
    let mut record = match serde_json::from_str::<Value>(line) {
        Ok(Value::Object(map)) => map,
        Ok(_) => return raw_failure(line, Failure::usage("record must be a JSON object")),
        Err(e) => return raw_failure(line, Failure::usage(format!("malformed JSON: {e}"))),
    };
    let (result, failure) = match run_record(&record) {
        Ok((value, mismatch)) => (Some(value), mismatch),
        Err(failure) => (None, Some(failure)),
    };
    if let Some(value) = result {
        record.insert("result".into(), value);
    }
    let failed = failure.is_some();
    if let Some(f) = failure {
        record.insert("error".into(), serde_json::to_value(f).expect("failure serializes"));
    }
    Line {
        json: Value::Object(record).to_string(),
        failed,
    }
}

fn raw_failure(line: &str, failure: Failure) -> Line {
    let mut map = Map::new();
    map.insert("input".into(), Value::String(line.to_string()));
    map.insert("error".into(), serde_json::to_value(failure).expect("failure serializes"));
    Line {
        json: Value::Object(map).to_string(),
        failed: true,
    }
}

fn text(record: &Map<String, Value>, key: &str) -> Result<Option<String>, Failure> {
    match record.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(Value::Number(x)) => Ok(Some(x.to_string())),
        Some(Value::Array(items)) if key == "fixed" => {
            let parts = items
                .iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(x) => Ok(x.to_string()),
                    _ => Err(bad_field(key)),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Some(parts.join(",")))
        }
        Some(_) => Err(bad_field(key)),
    }
}

fn bad_field(key: &str) -> Failure {
    Failure::new("parse", format!("field {key} must be a string"), EXIT_USAGE)
}

fn required(record: &Map<String, Value>, key: &str) -> Result<String, Failure> {
    text(record, key)?.ok_or_else(|| Failure::new("parse", format!("missing field {key}"), EXIT_USAGE))
}

fn integer(record: &Map<String, Value>, key: &str) -> Result<Option<usize>, Failure> {
    text(record, key)?
        .map(|s| {
            s.trim().parse::<usize>().map_err(|_| {
                Failure::new(
                    "parse",
                    format!("cannot parse {key} from {s:?}: expected a non-negative integer"),
                    EXIT_USAGE,
                )
            })
        })
        .transpose()
}

fn to_value<T: serde::Serialize>(report: &T) -> Value {
    serde_json::to_value(report).expect("reports serialize")
}

fn linkage(record: &Map<String, Value>) -> Result<AnalysisRequest, Failure> {
    Ok(AnalysisRequest::new(
        &required(record, "fixed")?,
        &required(record, "tele_lo")?,
        &required(record, "tele_hi")?,
    )
    .with_tele_index(integer(record, "tele_index")?)
    .with_recursive(matches!(record.get("recursive"), Some(Value::Bool(true)))))
}

/// The `result` value, plus a failure for verify mismatches.
fn run_record(record: &Map<String, Value>) -> Result<(Value, Option<Failure>), Failure> {
    let command = required(record, "command")?;
    match command.as_str() {
        "analyze" => Ok((to_value(&analysis::analyze(&linkage(record)?)?), None)),
        "verify" => {
            let report = analysis::verify(&linkage(record)?, integer(record, "grid")?)?;
            let passed = report.oracle.as_ref().is_some_and(|o| o.passed());
            let mismatch = (!passed).then(|| {
                Failure::new("mismatch", "grid oracle disagrees with the exact ranks", EXIT_FAILURE)
            });
            Ok((to_value(&report), mismatch))
        }
        "sweep" => {
            let fixed: Vec<String> = required(record, "fixed")?
                .split(',')
                .map(|s| s.trim().to_string())
                .collect();
            Ok((to_value(&analysis::sweep(&fixed)?), None))
        }
        "equilateral" => {
            let n = integer(record, "n")?
                .ok_or_else(|| Failure::new("parse", "missing field n", EXIT_USAGE))?;
            let report = crate::equilateral(n, &required(record, "a")?, &required(record, "b")?)?;
            Ok((to_value(&report), None))
        }
        other => Err(Failure::usage(format!("unknown command {other:?}"))),
    }
}
