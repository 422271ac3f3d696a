//! Report documents and their JSON, text and LaTeX renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::config::Format;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inconsistent,
    UnderDetermined,
    NonConvergent,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::NonConvergent => 3,
            _ => 1,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconsistent => "inconsistent",
            Status::UnderDetermined => "under-determined",
            Status::NonConvergent => "non-convergent",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Item {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<String>,
}

impl Item {
    pub fn named(name: impl Into<String>) -> Self {
        Item {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn block(mut self, b: impl ToString) -> Self {
        self.block = Some(b.to_string());
        self
    }

    pub fn residual(mut self, r: impl ToString) -> Self {
        self.residual = Some(r.to_string());
        self
    }

    pub fn expected(mut self, e: impl ToString) -> Self {
        self.expected = Some(e.to_string());
        self
    }

    pub fn actual(mut self, a: impl ToString) -> Self {
        self.actual = Some(a.to_string());
        self
    }

    pub fn tolerance(mut self, t: impl ToString) -> Self {
        self.tolerance = Some(t.to_string());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    /// `name n=.. [block]` of each item responsible for a non-pass status.
    pub failures: Vec<String>,
    pub items: Vec<Item>,
}

impl Report {
    pub fn new(command: &str, target: &str) -> Self {
        let mut params = BTreeMap::new();
        params.insert("target".to_string(), target.to_string());
        Report {
            command: command.to_string(),
            params,
            status: Status::Pass,
            failures: Vec::new(),
            items: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn push(&mut self, item: Item) {
        self.items.push(item);
    }

    /// Adds `item` and records it as a failure with `status`.
    pub fn push_failure(&mut self, item: Item, status: Status) {
        let mut label = item.name.clone();
        if let Some(n) = item.n {
            let _ = write!(label, " n={n}");
        }
        if let Some(b) = &item.block {
            let _ = write!(label, " [{b}]");
        }
        self.failures.push(label);
        self.items.push(item);
        self.raise(status);
    }

    /// Keeps the most severe status seen: any failure outranks non-convergence.
    pub fn raise(&mut self, status: Status) {
        let rank = |s: Status| match s {
            Status::Pass => 0,
            Status::NonConvergent => 1,
            _ => 2,
        };
        if rank(status) > rank(self.status) {
            self.status = status;
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
            Format::Latex => self.render_latex(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for (k, v) in &self.params {
            let _ = writeln!(out, "{k}: {v}");
        }
        let _ = writeln!(out, "status: {}", self.status.label());
        for it in &self.items {
            let mut line = it.name.clone();
            if let Some(n) = it.n {
                let _ = write!(line, " n={n}");
            }
            if let Some(b) = &it.block {
                let _ = write!(line, " [{b}]");
            }
            for (label, v) in [
                ("residual", &it.residual),
                ("expected", &it.expected),
                ("actual", &it.actual),
                ("tol", &it.tolerance),
            ] {
                if let Some(v) = v {
                    let _ = write!(line, " {label}={v}");
                }
            }
            let _ = writeln!(out, "{line}");
        }
        out
    }

    fn render_latex(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "% {} {}: {}", self.command, self.params["target"], self.status.label());
        out.push_str("\\begin{aligned}\n");
        let rows: Vec<String> = self
            .items
            .iter()
            .map(|it| {
                let mut lhs = format!("\\text{{{}}}", it.name.replace('_', "\\_"));
                if let Some(n) = it.n {
                    let _ = write!(lhs, "_{{n={n}}}");
                }
                if let Some(b) = &it.block {
                    let _ = write!(lhs, "\\,[{b}]");
                }
                let rhs = it
                    .residual
                    .as_ref()
                    .or(it.actual.as_ref())
                    .map_or(String::new(), |v| format!("\\texttt{{{v}}}"));
                format!("{lhs} &= {rhs}")
            })
            .collect();
        out.push_str(&rows.join(" \\\\\n"));
        out.push_str("\n\\end{aligned}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_ordering() {
        let mut r = Report::new("identities", "x");
        r.raise(Status::NonConvergent);
        assert_eq!(r.status, Status::NonConvergent);
        r.raise(Status::Fail);
        r.raise(Status::NonConvergent);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.status.exit_code(), 1);
    }

    #[test]
    fn optional_fields_omitted() {
        let json = serde_json::to_string(&Item::named("a").n(3)).unwrap();
        assert_eq!(json, r#"{"name":"a","n":3}"#);
    }
}
