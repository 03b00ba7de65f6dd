//! Plain-text run manifest written next to every output directory.
//!
//! Each `arg = ...` line holds one resolved command-line argument; replaying
//! them reproduces the recorded outputs.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub master_seed: u64,
    /// Resolved configuration, informational.
    pub config: Vec<(String, String)>,
    pub artifacts: Vec<String>,
    pub duration_secs: f64,
    pub args: Vec<String>,
}

impl RunManifest {
    pub fn to_text(&self) -> String {
        let mut s = String::from("# nvqaoa run manifest\n");
        let _ = writeln!(s, "command = {}", self.command);
        let _ = writeln!(s, "version = {}", self.version);
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        let _ = writeln!(s, "duration_secs = {:.3}", self.duration_secs);
        for (k, v) in &self.config {
            let _ = writeln!(s, "config.{k} = {v}");
        }
        for a in &self.artifacts {
            let _ = writeln!(s, "artifact = {a}");
        }
        for a in &self.args {
            let _ = writeln!(s, "arg = {a}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut m = RunManifest {
            command: String::new(),
            version: String::new(),
            master_seed: 0,
            config: Vec::new(),
            artifacts: Vec::new(),
            duration_secs: 0.0,
            args: Vec::new(),
        };
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(" = ")
                .ok_or_else(|| format!("manifest line {}: expected `key = value`", i + 1))?;
            let bad = |what: &str| format!("manifest line {}: invalid {what}", i + 1);
            match key {
                "command" => m.command = value.to_string(),
                "version" => m.version = value.to_string(),
                "master_seed" => m.master_seed = value.parse().map_err(|_| bad("seed"))?,
                "duration_secs" => m.duration_secs = value.parse().map_err(|_| bad("duration"))?,
                "artifact" => m.artifacts.push(value.to_string()),
                "arg" => m.args.push(value.to_string()),
                k => match k.strip_prefix("config.") {
                    Some(name) => m.config.push((name.to_string(), value.to_string())),
                    None => return Err(format!("manifest line {}: unknown key {k:?}", i + 1)),
                },
            }
        }
        if m.command.is_empty() || m.args.is_empty() {
            return Err("manifest has no command".into());
        }
        Ok(m)
    }
}
