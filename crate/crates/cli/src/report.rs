use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use skein_core::error::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{what} exceeds the limit {limit}")]
    Budget { what: String, limit: usize },

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Failed,
}

/// The envelope every command emits in structured mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub status: Status,
    pub timing_ms: u64,
}

/// What a command hands back to `main`: the structured payload, a human
/// rendering of it, and whether the check it ran passed.
pub struct Outcome {
    pub inputs: Value,
    pub result: Value,
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    pub fn ok(inputs: Value, result: Value, text: impl Into<String>) -> Self {
        Outcome {
            inputs,
            result,
            text: text.into(),
            ok: true,
        }
    }
}

/// Exit code 2 for bad input, 3 for budgets.
pub fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Core(Error::DegreeTooHigh { .. } | Error::BudgetExceeded { .. }) | CliError::Budget { .. } => 3,
        _ => 2,
    }
}

pub fn error_payload(e: &CliError) -> Value {
    let core = match e {
        CliError::Core(c) => c,
        CliError::Budget { .. } => return json!({ "error": "budget_exceeded", "message": e.to_string() }),
        CliError::Io { .. } => return json!({ "error": "io", "message": e.to_string() }),
    };
    let kind = match core {
        Error::DivisionByZero => "division_by_zero",
        Error::MixedSystems => "mixed_systems",
        Error::InvalidIndex { .. } => "invalid_index",
        Error::InvalidSystem(_) => "invalid_system",
        Error::DegreeTooHigh { .. } => "degree_too_high",
        Error::BudgetExceeded { .. } => "budget_exceeded",
        Error::WrongSystem => "wrong_system",
        Error::NotPrimitive { .. } => "not_primitive",
        Error::Parse { .. } => "parse_error",
    };
    let mut v = json!({ "error": kind, "message": e.to_string() });
    if let Error::Parse { pos, .. } = core {
        v["position"] = json!(pos);
    }
    v
}
