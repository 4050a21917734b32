//! `--config` files and the config echo.
//!
//! A config file holds `key = value` lines. `command` names the subcommand path
//! (`audit extremal-s`); every other key is a long flag without its dashes. The
//! file's flags are appended after the command line, so they override it.

use crate::error::CliError;
use std::collections::BTreeMap;

const SUBCOMMANDS: [&str; 3] = ["compute", "audit", "simulate"];

/// Flags that steer the invocation itself and are never echoed.
const NOT_ECHOED: [&str; 2] = ["config", "echo-config"];

fn parse_file(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        out.push((k.trim().replace('_', "-"), v.trim().to_string()));
    }
    Ok(out)
}

/// Splices `--config FILE` into the argument list.
pub fn expand(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            path = Some(it.next().ok_or_else(|| CliError::Usage("--config needs a file".into()))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    let entries = parse_file(&text)?;
    let has_command = rest.iter().skip(1).any(|a| SUBCOMMANDS.contains(&a.as_str()));
    for (k, v) in entries {
        if k == "command" {
            if !has_command {
                let at = 1.min(rest.len());
                let words: Vec<String> = v.split_whitespace().map(String::from).collect();
                rest.splice(at..at, words);
            }
        } else {
            rest.push(format!("--{k}"));
            rest.push(v);
        }
    }
    Ok(rest)
}

/// Effective run configuration: the command path and the last value of each flag.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Echo {
    pub command: Vec<String>,
    pub flags: BTreeMap<String, String>,
}

impl Echo {
    /// Reads the expanded argument list. Every flag takes a value, so any token
    /// not consumed as a value is part of the command path.
    pub fn from_args(args: &[String]) -> Self {
        let mut echo = Echo::default();
        let mut i = 1;
        while i < args.len() {
            let a = &args[i];
            if let Some(flag) = a.strip_prefix("--") {
                if let Some((k, v)) = flag.split_once('=') {
                    echo.flags.insert(k.to_string(), v.to_string());
                    i += 1;
                } else {
                    let v = args.get(i + 1).cloned().unwrap_or_default();
                    echo.flags.insert(flag.to_string(), v);
                    i += 2;
                }
            } else {
                echo.command.push(a.clone());
                i += 1;
            }
        }
        for k in NOT_ECHOED {
            echo.flags.remove(k);
        }
        echo
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.flags.insert(key.to_string(), value.to_string());
    }

    /// Config file text that reproduces the run.
    pub fn to_file(&self) -> String {
        let mut s = format!("command = {}\n", self.command.join(" "));
        for (k, v) in &self.flags {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        m.insert("command".into(), self.command.join(" ").into());
        for (k, v) in &self.flags {
            m.insert(k.replace('-', "_"), v.clone().into());
        }
        serde_json::Value::Object(m)
    }
}
