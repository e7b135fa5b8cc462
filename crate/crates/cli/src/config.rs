//! Flat `key=value` configuration: file first, then command-line pairs, then
//! flags. Every subcommand declares its keys up front; anything else is
//! rejected before work starts.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Float,
    Unsigned,
    Count,
    Text,
    Choice(&'static [&'static str]),
    /// Comma-separated floats.
    FloatList,
}

#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    /// `None` marks a required key.
    pub default: Option<&'static str>,
}

pub const fn key(name: &'static str, kind: Kind, default: &'static str) -> Key {
    Key { name, kind, default: Some(default) }
}

pub const fn required(name: &'static str, kind: Kind) -> Key {
    Key { name, kind, default: None }
}

/// Keys accepted anywhere but never echoed, since they do not change results.
const PLUMBING: [&str; 2] = ["output", "workers"];

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Unsigned(u64),
    Count(usize),
    Text(String),
    FloatList(Vec<f64>),
}

impl Value {
    fn canonical(&self) -> String {
        match self {
            Value::Float(x) => format!("{x}"),
            Value::Unsigned(x) => x.to_string(),
            Value::Count(x) => x.to_string(),
            Value::Text(s) => s.clone(),
            Value::FloatList(v) => v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(","),
        }
    }
}

/// Unvalidated pairs in the order of precedence they were applied.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

fn split_pair(item: &str, origin: &str) -> Result<(String, String), CliError> {
    let (k, v) = item
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("{origin}: expected key=value, got '{item}'")))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(CliError::Config(format!("{origin}: empty key in '{item}'")));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

impl RawConfig {
    /// Reads a file of `key=value` lines. Blank lines and lines starting with
    /// `#` are skipped; a key may appear once.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut raw = RawConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = split_pair(line, &format!("{}:{}", path.display(), n + 1))?;
            if raw.entries.insert(k.clone(), v).is_some() {
                return Err(CliError::Config(format!("{}: key '{k}' given twice", path.display())));
            }
        }
        Ok(raw)
    }

    pub fn apply_pairs(&mut self, pairs: &[String]) -> Result<(), CliError> {
        let mut seen = std::collections::BTreeSet::new();
        for p in pairs {
            let (k, v) = split_pair(p, "command line")?;
            if !seen.insert(k.clone()) {
                return Err(CliError::Config(format!("command line: key '{k}' given twice")));
            }
            self.entries.insert(k, v);
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.entries.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Checks every entry against `keys` and fills in defaults.
    pub fn resolve(&self, command: &str, keys: &[Key]) -> Result<Settings, CliError> {
        for k in self.entries.keys() {
            if !PLUMBING.contains(&k.as_str()) && !keys.iter().any(|d| d.name == k) {
                let allowed: Vec<&str> = keys.iter().map(|d| d.name).collect();
                return Err(CliError::Config(format!(
                    "unknown key '{k}' for {command} (allowed: {})",
                    allowed.join(", ")
                )));
            }
        }
        let mut values = Vec::with_capacity(keys.len());
        for d in keys {
            let text = match (self.entries.get(d.name), d.default) {
                (Some(v), _) => v.as_str(),
                (None, Some(def)) => def,
                (None, None) => return Err(CliError::Config(format!("{command} needs key '{}'", d.name))),
            };
            values.push((d.name, parse_value(d, text)?));
        }
        Ok(Settings { values })
    }
}

fn parse_value(d: &Key, text: &str) -> Result<Value, CliError> {
    let bad = |what: &str| CliError::Config(format!("key '{}': '{text}' is not {what}", d.name));
    Ok(match d.kind {
        Kind::Float => {
            let x: f64 = text.parse().map_err(|_| bad("a number"))?;
            if !x.is_finite() {
                return Err(bad("a finite number"));
            }
            Value::Float(x)
        }
        Kind::Unsigned => Value::Unsigned(text.parse().map_err(|_| bad("an unsigned 64-bit integer"))?),
        Kind::Count => Value::Count(text.parse().map_err(|_| bad("a non-negative integer"))?),
        Kind::Text => Value::Text(text.to_string()),
        Kind::Choice(options) => {
            if !options.contains(&text) {
                return Err(bad(&format!("one of {}", options.join(", "))));
            }
            Value::Text(text.to_string())
        }
        Kind::FloatList => {
            let v = text
                .split(',')
                .map(|s| s.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| bad("a comma-separated list of numbers"))?;
            Value::FloatList(v)
        }
    })
}

/// Resolved, typed configuration in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    values: Vec<(&'static str, Value)>,
}

impl Settings {
    fn value(&self, name: &str) -> &Value {
        &self
            .values
            .iter()
            .find(|(k, _)| *k == name)
            .unwrap_or_else(|| panic!("key '{name}' is not declared"))
            .1
    }

    pub fn float(&self, name: &str) -> f64 {
        match self.value(name) {
            Value::Float(x) => *x,
            v => panic!("key '{name}' is {v:?}, not a float"),
        }
    }

    pub fn unsigned(&self, name: &str) -> u64 {
        match self.value(name) {
            Value::Unsigned(x) => *x,
            v => panic!("key '{name}' is {v:?}, not unsigned"),
        }
    }

    pub fn count(&self, name: &str) -> usize {
        match self.value(name) {
            Value::Count(x) => *x,
            v => panic!("key '{name}' is {v:?}, not a count"),
        }
    }

    pub fn text(&self, name: &str) -> &str {
        match self.value(name) {
            Value::Text(s) => s,
            v => panic!("key '{name}' is {v:?}, not text"),
        }
    }

    pub fn floats(&self, name: &str) -> &[f64] {
        match self.value(name) {
            Value::FloatList(v) => v,
            v => panic!("key '{name}' is {v:?}, not a list"),
        }
    }

    /// `key=value` lines that reproduce this configuration when fed back.
    pub fn echo(&self) -> Vec<(String, String)> {
        self.values.iter().map(|(k, v)| (k.to_string(), v.canonical())).collect()
    }
}
