use std::path::PathBuf;

use herzlab::embed::EmbeddingCase;
use herzlab::TruncationWindow;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{Command, Format};
use crate::error::CliError;

pub const SCHEMA: &str = "herzlab-report/1";

/// Everything needed to reproduce a run. Numeric parameters stay as the
/// strings given on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub command: Command,
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

pub struct Outcome {
    pub command: &'static str,
    pub case: Option<EmbeddingCase>,
    pub window: Option<TruncationWindow>,
    pub result: Value,
    /// Tabular view used by the csv format; scalar results are flattened otherwise.
    pub table: Option<Table>,
}

impl Outcome {
    pub fn new(command: &'static str, result: Value) -> Self {
        Outcome { command, case: None, window: None, result, table: None }
    }
}

#[derive(Serialize)]
struct Header<'a> {
    schema: &'static str,
    command: &'static str,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<&'a EmbeddingCase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<&'a TruncationWindow>,
}

#[derive(Serialize)]
struct Full<'a> {
    #[serde(flatten)]
    header: Header<'a>,
    result: &'a Value,
}

#[derive(Deserialize)]
struct Recorded {
    schema: String,
    config: RunConfig,
}

pub fn render(cfg: &RunConfig, out: &Outcome) -> Result<String, CliError> {
    let header = Header {
        schema: SCHEMA,
        command: out.command,
        config: cfg,
        case: out.case.as_ref(),
        window: out.window.as_ref(),
    };
    match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&Full { header, result: &out.result }).map_err(CliError::internal)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut s = format!("# {}\n", serde_json::to_string(&header).map_err(CliError::internal)?);
            let mut w = csv::Writer::from_writer(Vec::new());
            match &out.table {
                Some(t) => {
                    w.write_record(&t.columns).map_err(CliError::internal)?;
                    for row in &t.rows {
                        w.write_record(row.iter().map(cell)).map_err(CliError::internal)?;
                    }
                }
                None => {
                    w.write_record(["key", "value"]).map_err(CliError::internal)?;
                    let mut leaves = Vec::new();
                    flatten("", &out.result, &mut leaves);
                    for (k, v) in leaves {
                        w.write_record([k, v]).map_err(CliError::internal)?;
                    }
                }
            }
            let bytes = w.into_inner().map_err(|e| CliError::internal(e.error()))?;
            s.push_str(std::str::from_utf8(&bytes).map_err(CliError::internal)?);
            Ok(s)
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(xs) => xs.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        _ => out.push((prefix.to_string(), cell(v))),
    }
}

/// The run configuration recorded in a json or csv report.
pub fn recorded_config(text: &str) -> Result<RunConfig, CliError> {
    let header = match text.strip_prefix("# ") {
        Some(rest) => rest.lines().next().unwrap_or_default(),
        None => text,
    };
    let rec: Recorded =
        serde_json::from_str(header).map_err(|e| CliError::input(format!("not a herzlab report: {e}")))?;
    if rec.schema != SCHEMA {
        return Err(CliError::input(format!("unsupported report schema {:?}, expected {SCHEMA:?}", rec.schema)));
    }
    Ok(rec.config)
}
