use serde_json::json;

/// One report line. `verdict` is `None` for purely informational rows
/// (expansions, solver statistics) and `Some` for pass/fail checks.
#[derive(Clone, Debug)]
pub struct Entry {
    pub label: String,
    pub detail: String,
    pub verdict: Option<bool>,
}

impl Entry {
    pub fn info(label: impl Into<String>, detail: impl Into<String>) -> Entry {
        Entry { label: label.into(), detail: detail.into(), verdict: None }
    }

    pub fn check(label: impl Into<String>, ok: bool, detail: impl Into<String>) -> Entry {
        Entry { label: label.into(), detail: detail.into(), verdict: Some(ok) }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Format {
    Text,
    Records,
}

/// Record output mirrors the text output line for line, so either stream
/// can be diffed in CI. Assembly is single threaded; sweeps hand over
/// entries in a deterministic order regardless of worker count.
#[derive(Default)]
pub struct Report {
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    pub fn extend(&mut self, es: Vec<Entry>) {
        self.entries.extend(es);
    }

    pub fn checks(&self) -> usize {
        self.entries.iter().filter(|e| e.verdict.is_some()).count()
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.verdict == Some(false)).count()
    }

    /// Append the closing tally and return the exit code for the run.
    pub fn summarize(&mut self) -> i32 {
        let (checks, failures) = (self.checks(), self.failures());
        self.push(Entry::info("summary", format!("{} checks, {} failures", checks, failures)));
        if failures == 0 {
            0
        } else {
            1
        }
    }

    pub fn print(&self, format: Format) {
        use std::io::Write;
        let stdout = std::io::stdout();
        let mut out = std::io::BufWriter::new(stdout.lock());
        for e in &self.entries {
            let line = match format {
                Format::Text => render_text(e),
                Format::Records => {
                    let verdict = e.verdict.map(|ok| if ok { "pass" } else { "fail" });
                    json!({
                        "label": e.label,
                        "detail": e.detail,
                        "verdict": verdict,
                    })
                    .to_string()
                }
            };
            // A closed pipe is the reader's choice; die like SIGPIPE so a
            // truncated report is never mistaken for a verdict.
            if writeln!(out, "{}", line).is_err() {
                std::process::exit(141);
            }
        }
        if out.flush().is_err() {
            std::process::exit(141);
        }
    }
}

fn render_text(e: &Entry) -> String {
    match e.verdict {
        None => format!("{}: {}", e.label, e.detail),
        Some(true) => {
            if e.detail.is_empty() {
                format!("pass  {}", e.label)
            } else {
                format!("pass  {}  ({})", e.label, e.detail)
            }
        }
        Some(false) => {
            if e.detail.is_empty() {
                format!("FAIL  {}", e.label)
            } else {
                format!("FAIL  {}  {}", e.label, e.detail)
            }
        }
    }
}
