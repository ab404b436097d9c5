//! `--config FILE`: flat `key=value` lines spliced in ahead of the command-line flags.

use std::fs;

const GLOBAL_VALUED: [&str; 5] = ["config", "threads", "seed", "out", "format"];
const BOOLEAN: [&str; 1] = ["raw"];

pub const COMMANDS: [&str; 12] = [
    "entropy",
    "pressure",
    "glw",
    "compare",
    "periodic",
    "spec-witness",
    "spec-falsify",
    "census",
    "distortion",
    "subadditivity",
    "entropy-point",
    "expansiveness",
];

/// Parsed `key=value` pairs; `#` starts a comment, blank lines are ignored.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        let k = k.trim().trim_start_matches("--").replace('_', "-");
        if k.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Index of the subcommand token, skipping values of global flags.
fn command_index(args: &[String]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let a = &args[i];
        if COMMANDS.contains(&a.as_str()) {
            return Some(i);
        }
        if let Some(flag) = a.strip_prefix("--") {
            if GLOBAL_VALUED.contains(&flag) {
                i += 1;
            }
        }
        i += 1;
    }
    None
}

fn tokens(key: &str, value: &str) -> Vec<String> {
    if BOOLEAN.contains(&key) {
        return match value {
            "true" | "1" | "yes" => vec![format!("--{key}")],
            _ => Vec::new(),
        };
    }
    vec![format!("--{key}"), value.to_string()]
}

/// Splice the config file's settings in front of the user's own flags, so that
/// every flag given on the command line overrides the file.
pub fn expand(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let pairs = parse_config(&text)?;
    let mut globals = Vec::new();
    let mut local = Vec::new();
    let mut command = None;
    for (k, v) in pairs {
        if k == "command" {
            command = Some(v);
        } else if k == "config" {
            return Err("a config file cannot include another".into());
        } else if GLOBAL_VALUED.contains(&k.as_str()) {
            globals.extend(tokens(&k, &v));
        } else {
            local.extend(tokens(&k, &v));
        }
    }
    let mut out = vec![args[0].clone()];
    out.extend(globals);
    match command_index(&args) {
        Some(i) => {
            out.extend_from_slice(&args[1..=i]);
            out.extend(local);
            out.extend_from_slice(&args[i + 1..]);
        }
        None => {
            let c = command.ok_or("no command given on the command line or in the config file")?;
            out.extend_from_slice(&args[1..]);
            out.push(c);
            out.extend(local);
        }
    }
    Ok(out)
}
