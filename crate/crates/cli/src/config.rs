use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context};
use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, CommandFactory};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{Cli, Format};

/// A command plus its parameters, as loaded from `--config` or recorded in a
/// manifest. Parameter keys are long flag names without the dashes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Vec<String>,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mem_cap: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_cap: Option<f64>,
}

/// Written next to every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub formulas: Vec<String>,
    pub outputs: Vec<String>,
    pub wall_time_seconds: f64,
    pub timestamp_unix: u64,
}

const GLOBAL_IDS: [&str; 6] = ["threads", "format", "out", "config", "mem_cap", "time_cap"];
/// Flags that take no value.
const SWITCHES: [&str; 4] = ["--binary", "--help", "--version", "-h"];
/// Pairs of flags where setting one on the command line drops the other from the config.
const EXCLUSIVE: [(&str, &str); 1] = [("theta", "R")];

/// Reads either a bare config or a manifest (whose config is reused).
pub fn load(path: &Path) -> anyhow::Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    if let Ok(m) = serde_json::from_str::<Manifest>(&text) {
        return Ok(m.config);
    }
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

fn flag_name(token: &str) -> Option<&str> {
    let t = token.strip_prefix("--")?;
    Some(t.split_once('=').map_or(t, |(k, _)| k))
}

fn value_text(v: &Value) -> anyhow::Result<Option<String>> {
    Ok(match v {
        Value::Bool(true) => None,
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Array(xs) => {
            let parts: anyhow::Result<Vec<String>> = xs
                .iter()
                .map(|x| match x {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    _ => bail!("list entries must be numbers or strings"),
                })
                .collect();
            Some(parts?.join(","))
        }
        _ => bail!("unsupported config value {v}"),
    })
}

/// Splices config values in front of the user's flags. Flags given on the
/// command line win; a command path on the command line must match the config.
pub fn merged_args(args: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    let Some(path) = config_path(&args[1..]) else {
        return Ok(args);
    };
    let cfg = load(Path::new(&path))?;
    let user: Vec<String> = args[1..].iter().map(|a| a.to_string_lossy().into_owned()).collect();

    let mut user_flags = Vec::new();
    let mut given = Vec::new();
    let mut depth = 0;
    let mut i = 0;
    while i < user.len() {
        let t = &user[i];
        if t.starts_with('-') && t.len() > 1 {
            user_flags.push(t.clone());
            if let Some(name) = flag_name(t) {
                given.push(name.to_string());
            }
            if !t.contains('=') && !SWITCHES.contains(&t.as_str()) && i + 1 < user.len() {
                user_flags.push(user[i + 1].clone());
                i += 1;
            }
        } else if cfg.command.get(depth) == Some(t) {
            depth += 1;
        } else {
            bail!("command '{t}' on the command line does not match the config command '{}'", cfg.command.join(" "));
        }
        i += 1;
    }

    let mut out: Vec<OsString> = vec![args[0].clone()];
    out.extend(cfg.command.iter().map(OsString::from));
    let mut push = |key: &str, v: Option<String>| {
        if given.iter().any(|g| g == key) {
            return;
        }
        for (a, b) in EXCLUSIVE {
            if (key == a && given.iter().any(|g| g == b)) || (key == b && given.iter().any(|g| g == a)) {
                return;
            }
        }
        out.push(match v {
            Some(v) => format!("--{key}={v}").into(),
            None => format!("--{key}").into(),
        });
    };
    if let Some(f) = cfg.format {
        push("format", Some(format!("{f:?}").to_lowercase()));
    }
    if let Some(t) = cfg.threads {
        push("threads", Some(t.to_string()));
    }
    if let Some(m) = &cfg.mem_cap {
        push("mem-cap", Some(m.clone()));
    }
    if let Some(t) = cfg.time_cap {
        push("time-cap", Some(t.to_string()));
    }
    for (k, v) in &cfg.params {
        if *v == Value::Bool(false) {
            continue;
        }
        push(k, value_text(v)?);
    }
    out.extend(user_flags.into_iter().map(OsString::from));
    Ok(out)
}

/// The leaf subcommand path and its matches.
pub fn leaf(matches: &ArgMatches) -> (Vec<String>, &ArgMatches) {
    let mut path = Vec::new();
    let mut m = matches;
    while let Some((name, sub)) = m.subcommand() {
        path.push(name.to_string());
        m = sub;
    }
    (path, m)
}

/// Records the command path and every flag set explicitly on the (merged)
/// command line.
pub fn resolve(matches: &ArgMatches, cli: &Cli) -> ExperimentConfig {
    let (path, m) = leaf(matches);
    let mut cmd = Cli::command();
    let mut node = &mut cmd;
    for p in &path {
        node = node.find_subcommand_mut(p).expect("subcommand from matches");
    }
    let mut params = BTreeMap::new();
    for arg in node.get_arguments() {
        let id = arg.get_id().as_str();
        if GLOBAL_IDS.contains(&id) || m.value_source(id) != Some(ValueSource::CommandLine) {
            continue;
        }
        let Some(long) = arg.get_long() else { continue };
        let value = if matches!(arg.get_action(), ArgAction::SetTrue) {
            Value::Bool(true)
        } else {
            let raw: Vec<String> = m
                .get_raw(id)
                .map(|vs| vs.map(|v| v.to_string_lossy().into_owned()).collect())
                .unwrap_or_default();
            Value::String(raw.join(","))
        };
        params.insert(long.to_string(), value);
    }
    ExperimentConfig {
        command: path,
        params,
        format: cli.format,
        threads: cli.threads,
        mem_cap: cli.mem_cap.clone(),
        time_cap: cli.time_cap,
    }
}

/// About text of the leaf subcommand; names the formula it evaluates.
pub fn formula(path: &[String]) -> Vec<String> {
    let mut cmd = Cli::command();
    let mut node = &mut cmd;
    for p in path {
        match node.find_subcommand_mut(p) {
            Some(n) => node = n,
            None => return Vec::new(),
        }
    }
    node.get_about().map(|a| vec![a.to_string()]).unwrap_or_default()
}
