use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ergosum", version, about = "Certified Birkhoff sums over irrational rotations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Convergents, `||Q_nu theta||` and the `Q_{nu+1} ||Q_nu theta|| > 1/2` check.
    Cf(Common),
    /// Three-gap profile per level.
    Gaps(Common),
    /// Star discrepancy of the first Q orbit points.
    Disc(Common),
    /// Build the bump schedule.
    T1Build(Common),
    /// Four-part split of the bump-function sums.
    T1Verify(Common),
    /// Build the segment tree of f_theta.
    T2Build(Common),
    /// Certify the 1/6 bound for g_theta.
    T2Verify(Common),
    /// Birkhoff sum of a registered function.
    Sum(Common),
    /// Koksma's inequality on the orbit.
    Koksma(Common),
    /// Subsequence experiment for continuous functions.
    Prop1(Common),
    /// Subsequence experiment for even functions.
    Prop2(Common),
    /// Phi-grid maxima of trigonometric sums along convergents.
    Thma(Common),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Cf(c)
            | Command::Gaps(c)
            | Command::Disc(c)
            | Command::T1Build(c)
            | Command::T1Verify(c)
            | Command::T2Build(c)
            | Command::T2Verify(c)
            | Command::Sum(c)
            | Command::Koksma(c)
            | Command::Prop1(c)
            | Command::Prop2(c)
            | Command::Thma(c) => c,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Cf(_) => "cf",
            Command::Gaps(_) => "gaps",
            Command::Disc(_) => "disc",
            Command::T1Build(_) => "t1-build",
            Command::T1Verify(_) => "t1-verify",
            Command::T2Build(_) => "t2-build",
            Command::T2Verify(_) => "t2-verify",
            Command::Sum(_) => "sum",
            Command::Koksma(_) => "koksma",
            Command::Prop1(_) => "prop1",
            Command::Prop2(_) => "prop2",
            Command::Thma(_) => "thma",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Flags as typed on the command line; `None` means "not given".
#[derive(Args, Debug, Clone, PartialEq, Eq, Default)]
pub struct Common {
    /// Built-in spec name or path to a spec file.
    #[arg(long, value_name = "SPEC")]
    pub theta: Option<String>,
    #[arg(long)]
    pub nu: Option<usize>,
    /// Number of terms.
    #[arg(long = "Q", value_name = "N")]
    pub q: Option<u64>,
    /// Shift as an exact rational p/q.
    #[arg(long, value_name = "P/Q")]
    pub phi: Option<String>,
    /// Registered function name.
    #[arg(long = "f", value_name = "NAME")]
    pub f: Option<String>,
    /// Tolerance (epsilon) as an exact rational.
    #[arg(long, value_name = "P/Q")]
    pub tol: Option<String>,
    #[arg(long = "budget-q", value_name = "N")]
    pub budget_q: Option<u64>,
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Omit the timestamp so that reruns are byte-identical.
    #[arg(long = "no-timestamp")]
    pub no_timestamp: bool,
    /// Bump schedule depth.
    #[arg(long = "n-max", value_name = "N")]
    pub n_max: Option<usize>,
    /// Phi grid size.
    #[arg(long, value_name = "N")]
    pub grid: Option<u32>,
    /// key=value file with defaults for any of the flags above.
    #[arg(long, value_name = "PATH")]
    pub config: Option<String>,
}

/// Flags merged with the config file; flags win.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub theta: Option<String>,
    pub nu: Option<usize>,
    pub q: Option<u64>,
    pub phi: Option<String>,
    pub f: Option<String>,
    pub tol: Option<String>,
    pub budget_q: Option<u64>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub no_timestamp: bool,
    pub n_max: Option<usize>,
    pub grid: Option<u32>,
}

const KEYS: [&str; 13] =
    ["theta", "nu", "Q", "phi", "f", "tol", "budget-q", "threads", "out", "format", "no-timestamp", "n-max", "grid"];

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(format!("config line {}: unknown key `{k}`", i + 1));
        }
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

fn num<T: std::str::FromStr>(map: &BTreeMap<String, String>, k: &str) -> Result<Option<T>, String> {
    map.get(k).map(|v| v.parse::<T>().map_err(|_| format!("config key `{k}`: bad value `{v}`"))).transpose()
}

impl Settings {
    pub fn resolve(raw: &Common) -> Result<Settings, String> {
        let map = match &raw.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {path}: {e}"))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        let s = |v: &Option<String>, k: &str| v.clone().or_else(|| map.get(k).cloned());
        let format = match raw.format {
            Some(f) => Some(f),
            None => match map.get("format").map(String::as_str) {
                None => None,
                Some("json") => Some(Format::Json),
                Some("csv") => Some(Format::Csv),
                Some(v) => return Err(format!("config key `format`: bad value `{v}`")),
            },
        };
        let no_timestamp = raw.no_timestamp
            || match map.get("no-timestamp").map(String::as_str) {
                None | Some("false") => false,
                Some("true") => true,
                Some(v) => return Err(format!("config key `no-timestamp`: bad value `{v}`")),
            };
        let settings = Settings {
            theta: s(&raw.theta, "theta"),
            nu: raw.nu.map_or_else(|| num(&map, "nu"), |v| Ok(Some(v)))?,
            q: raw.q.map_or_else(|| num(&map, "Q"), |v| Ok(Some(v)))?,
            phi: s(&raw.phi, "phi"),
            f: s(&raw.f, "f"),
            tol: s(&raw.tol, "tol"),
            budget_q: raw.budget_q.map_or_else(|| num(&map, "budget-q"), |v| Ok(Some(v)))?,
            threads: raw.threads.map_or_else(|| num(&map, "threads"), |v| Ok(Some(v)))?,
            out: s(&raw.out, "out").map(PathBuf::from),
            format,
            no_timestamp,
            n_max: raw.n_max.map_or_else(|| num(&map, "n-max"), |v| Ok(Some(v)))?,
            grid: raw.grid.map_or_else(|| num(&map, "grid"), |v| Ok(Some(v)))?,
        };
        if settings.budget_q == Some(0) {
            return Err("--budget-q must be positive".into());
        }
        if settings.threads == Some(0) {
            return Err("--threads must be positive".into());
        }
        Ok(settings)
    }
}
