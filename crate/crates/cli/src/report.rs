use std::fmt::Write;

pub const SCHEMA: &str = "ta-report/1";

/// How a run ended; maps onto the exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Error,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Error => 2,
        }
    }
}

/// A line-oriented key/value report. Keys may repeat; order is preserved.
#[derive(Clone, Debug)]
pub struct Report {
    pub status: Status,
    verdict: String,
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new(verb: &str) -> Self {
        let mut r = Report {
            status: Status::Holds,
            verdict: String::new(),
            entries: Vec::new(),
        };
        r.add("verb", verb);
        r
    }

    pub fn add(&mut self, key: &str, value: impl ToString) -> &mut Self {
        let value = value.to_string();
        if value.contains('\n') {
            for line in value.lines() {
                self.entries.push((key.to_string(), line.to_string()));
            }
        } else {
            self.entries.push((key.to_string(), value));
        }
        self
    }

    pub fn verdict(&mut self, status: Status, verdict: &str) -> &mut Self {
        self.status = status;
        self.verdict = verdict.to_string();
        self
    }

    pub fn error(verb: &str, message: impl ToString) -> Self {
        let mut r = Report::new(verb);
        r.add("error", message).verdict(Status::Error, "error");
        r
    }

    pub fn get<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.entries.iter().filter(move |(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn verdict_text(&self) -> &str {
        &self.verdict
    }

    pub fn render(&self) -> String {
        let mut out = format!("schema: {SCHEMA}\n");
        for (k, v) in &self.entries {
            if v.is_empty() {
                let _ = writeln!(out, "{k}:");
            } else {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        let _ = writeln!(out, "exit: {}", self.status.code());
        out
    }

    /// Groups consecutive entries with the same key under one heading.
    pub fn render_human(&self) -> String {
        let mut out = format!("{}\n", self.verdict.to_uppercase());
        let mut i = 0;
        while i < self.entries.len() {
            let key = &self.entries[i].0;
            let run = self.entries[i..].iter().take_while(|(k, _)| k == key).count();
            if run == 1 {
                let _ = writeln!(out, "  {key}: {}", self.entries[i].1);
            } else {
                let _ = writeln!(out, "  {key}:");
                for (_, v) in &self.entries[i..i + run] {
                    let _ = writeln!(out, "    {v}");
                }
            }
            i += run;
        }
        out
    }
}
