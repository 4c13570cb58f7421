use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use ergosum::Verdict;
use serde_json::{json, Map, Value};

use crate::args::{Format, Settings};

/// What a command produced: an overall verdict, the JSON report and, for
/// tabular commands, a CSV rendering.
pub struct Output {
    pub verdict: Verdict,
    pub report: Value,
    pub csv: Option<String>,
    pub default_format: Format,
}

impl Output {
    pub fn json(verdict: Verdict, report: Value) -> Self {
        Output { verdict, report, csv: None, default_format: Format::Json }
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv = Some(csv);
        self
    }

    pub fn csv_default(mut self) -> Self {
        self.default_format = Format::Csv;
        self
    }
}

fn params(s: &Settings) -> Value {
    let mut m = Map::new();
    let mut put = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            m.insert(k.to_string(), v);
        }
    };
    put("nu", s.nu.map(Value::from));
    put("Q", s.q.map(Value::from));
    put("phi", s.phi.clone().map(Value::from));
    put("f", s.f.clone().map(Value::from));
    put("tol", s.tol.clone().map(Value::from));
    put("budget_q", s.budget_q.map(Value::from));
    put("n_max", s.n_max.map(Value::from));
    put("grid", s.grid.map(Value::from));
    Value::Object(m)
}

/// Renders the report in the requested format.
pub fn render(command: &str, theta: Option<&str>, s: &Settings, out: &Output) -> Result<String, String> {
    match s.format.unwrap_or(out.default_format) {
        Format::Csv => out.csv.clone().ok_or_else(|| format!("{command} has no CSV output")),
        Format::Json => {
            let mut env = json!({
                "command": command,
                "params": params(s),
                "verdict": out.verdict,
                "report": out.report,
            });
            if let Some(t) = theta {
                env["theta"] = Value::from(t);
            }
            if !s.no_timestamp {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                env["timestamp"] = Value::from(secs);
            }
            let mut text = serde_json::to_string_pretty(&env).map_err(|e| e.to_string())?;
            text.push('\n');
            Ok(text)
        }
    }
}

/// Writes to `path` through a temporary file in the same directory, or to
/// stdout when no path is given.
pub fn write(path: Option<&Path>, text: &str) -> Result<(), String> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout.write_all(text.as_bytes()).map_err(|e| e.to_string());
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| format!("cannot create temp file in {}: {e}", dir.display()))?;
    tmp.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
    tmp.persist(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(())
}
