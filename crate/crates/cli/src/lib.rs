//! Command-line driver: flag and config parsing, dispatch, CSV/JSON reports.

pub mod args;
mod commands;
pub mod config;
pub mod report;
pub mod values;

use args::{Cli, Format};
use clap::{CommandFactory, FromArgMatches};
use semithermo::specprobe::Verdict;
use std::ffi::OsString;
use std::fs;

/// What a run produced. Nothing is written to disk unless the run got as far as a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub json: Option<String>,
    pub csv: Option<String>,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: String) -> Self {
        Outcome {
            exit_code: 1,
            json: None,
            csv: None,
            stdout: String::new(),
            stderr: msg,
        }
    }

    /// The JSON report parsed back, for callers that inspect results.
    pub fn report(&self) -> Option<serde_json::Value> {
        self.json.as_deref().and_then(|s| serde_json::from_str(s).ok())
    }
}

fn parse(args: Vec<String>) -> Result<Cli, Outcome> {
    let args = config::expand(args).map_err(|e| Outcome::usage(format!("error: {e}\n")))?;
    let cmd = Cli::command()
        .args_override_self(true)
        .mut_subcommands(|c| c.args_override_self(true));
    let matches = match cmd.try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let mut o = Outcome::usage(String::new());
            o.exit_code = code;
            if code == 0 {
                o.stdout = text;
            } else {
                o.stderr = text;
            }
            return Err(o);
        }
    };
    Cli::from_arg_matches(&matches).map_err(|e| Outcome::usage(e.to_string()))
}

/// Run with a full argument vector (program name first).
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let cli = match parse(args) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let seed = cli.seed as u64;
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli.command, seed)),
            Err(e) => Err(format!("cannot start {n} worker threads: {e}")),
        },
        None => commands::dispatch(&cli.command, seed),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let name = cli.command.name();
    let config = serde_json::to_value(&cli).expect("config serialises");
    let json = report::render_json(name, config, &report);
    let csv = report::render_csv(&report.rows);
    if let Some(prefix) = &cli.out {
        for (ext, body) in [("json", &json), ("csv", &csv)] {
            let path = format!("{prefix}.{ext}");
            if let Err(e) = fs::write(&path, body) {
                return Outcome::usage(format!("error: cannot write {path}: {e}\n"));
            }
        }
    }
    let stdout = match cli.format {
        Format::Json => json.clone(),
        Format::Csv => csv.clone(),
        Format::None => String::new(),
    };
    let mut stderr = String::new();
    if let Some(v) = report.verdict {
        stderr = format!("{name}: {v}\n");
    }
    Outcome {
        exit_code: if report.verdict == Some(Verdict::Fail) { 2 } else { 0 },
        json: Some(json),
        csv: Some(csv),
        stdout,
        stderr,
    }
}
