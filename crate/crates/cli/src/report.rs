//! JSON envelope and exit-code policy shared by all commands.

use std::process::ExitCode;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::Cli;

pub const SCHEMA: &str = "extremal-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

/// What a command hands back: a verdict, a human summary and a JSON body.
pub struct Outcome {
    pub command: &'static str,
    /// The table regime the run targets: `p>3` or `p=3`.
    pub regime: String,
    pub pass: bool,
    pub text: String,
    pub result: Value,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: Value,
    seed: u64,
    regime: &'a str,
    status: &'static str,
    result: &'a Value,
}

/// Regime label for a characteristic; characteristic 0 behaves like large p.
pub fn regime_of(characteristic: u32) -> String {
    if characteristic == 3 { "p=3" } else { "p>3" }.to_string()
}

pub fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

pub fn emit(cli: &Cli, out: Outcome) -> ExitCode {
    let mut config = to_json(&cli.command);
    if let Value::Object(m) = &mut config {
        // unwrap the externally tagged enum: {"build": {...}} -> {...}
        if let Some((_, inner)) = m.iter().next() {
            config = inner.clone();
        }
    }
    let envelope = Envelope {
        schema: SCHEMA,
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: out.command,
        config,
        seed: cli.seed,
        regime: &out.regime,
        status: if out.pass { "pass" } else { "mismatch" },
        result: &out.result,
    };
    let json = serde_json::to_string_pretty(&envelope).expect("reports serialize") + "\n";
    match cli.format {
        Format::Text => print!("{}", out.text),
        Format::Json => print!("{json}"),
    }
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if out.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
