use semithermo::specprobe::Verdict;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "semithermo-report/1";

/// One CSV record: `command,n,epsilon,method,logZ_or_count,t,extra`.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Row {
    pub command: String,
    pub n: Option<u64>,
    pub epsilon: Option<f64>,
    pub method: String,
    #[serde(rename = "logZ_or_count")]
    pub value: String,
    pub t: Option<f64>,
    pub extra: String,
}

impl Row {
    pub fn new(command: &str) -> Self {
        Row {
            command: command.to_string(),
            ..Row::default()
        }
    }

    pub fn n(mut self, n: impl Into<u64>) -> Self {
        self.n = Some(n.into());
        self
    }

    pub fn eps(mut self, e: f64) -> Self {
        self.epsilon = Some(e);
        self
    }

    pub fn method(mut self, m: impl ToString) -> Self {
        self.method = m.to_string();
        self
    }

    pub fn value(mut self, v: impl CsvValue) -> Self {
        self.value = v.render();
        self
    }

    pub fn t(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn extra(mut self, e: impl Into<String>) -> Self {
        self.extra = e.into();
        self
    }
}

/// Floats are written in shortest round-trip form, as in the JSON report.
pub trait CsvValue {
    fn render(&self) -> String;
}

impl CsvValue for f64 {
    fn render(&self) -> String {
        serde_json::Number::from_f64(*self).map_or_else(|| "NaN".into(), |n| n.to_string())
    }
}

impl CsvValue for &String {
    fn render(&self) -> String {
        (*self).clone()
    }
}

impl CsvValue for usize {
    fn render(&self) -> String {
        self.to_string()
    }
}

pub struct Report {
    pub verdict: Option<Verdict>,
    pub result: Value,
    pub rows: Vec<Row>,
}

pub fn render_json(command: &str, config: Value, report: &Report) -> String {
    let doc = serde_json::json!({
        "schema": SCHEMA,
        "command": command,
        "config": config,
        "verdict": report.verdict,
        "result": report.result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serialises");
    s.push('\n');
    s
}

pub fn render_csv(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["command", "n", "epsilon", "method", "logZ_or_count", "t", "extra"])
            .expect("in-memory write");
    }
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_quoting() {
        let rows = vec![Row::new("entropy").n(3u64).eps(0.5).method("exact").value(1.25).extra("a,b")];
        let s = render_csv(&rows);
        assert_eq!(
            s,
            "command,n,epsilon,method,logZ_or_count,t,extra\nentropy,3,0.5,exact,1.25,,\"a,b\"\n"
        );
        assert!(render_csv(&[]).starts_with("command,n,"));
    }
}
