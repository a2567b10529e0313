use serde::Serialize;
use serde_json::{json, Value};

use evpos::{Error, ErrorClass};

/// Failure of one CLI run, carrying the exit code and its error JSON.
#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub code: String,
    pub message: String,
    pub context: Value,
}

#[derive(Serialize)]
struct Wire<'a> {
    error: &'a str,
    message: &'a str,
    context: &'a Value,
}

impl CliError {
    pub fn parse(message: impl Into<String>, context: Value) -> Self {
        CliError { exit_code: 1, code: "ParseError".into(), message: message.into(), context }
    }

    pub fn io(message: impl Into<String>, context: Value) -> Self {
        CliError { exit_code: 1, code: "IoError".into(), message: message.into(), context }
    }

    pub fn precondition(code: &str, message: impl Into<String>) -> Self {
        CliError { exit_code: 2, code: code.into(), message: message.into(), context: json!({}) }
    }

    pub fn with_context(mut self, key: &str, value: impl Into<Value>) -> Self {
        if let Value::Object(map) = &mut self.context {
            map.entry(key.to_string()).or_insert(value.into());
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&Wire { error: &self.code, message: &self.message, context: &self.context })
            .expect("error json")
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit_code = match (&e, e.class()) {
            (Error::Parse(_), _) => 1,
            (_, ErrorClass::Precondition) => 2,
            (_, ErrorClass::Numerical) => 3,
        };
        CliError { exit_code, code: e.code().to_string(), message: e.to_string(), context: json!({}) }
    }
}
