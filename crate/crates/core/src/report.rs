//! Check records and report assembly.

use serde::Serialize;
use std::time::Instant;

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub paper_anchor: String,
    pub status: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub group: String,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

pub struct ReportBuilder {
    group: String,
    checks: Vec<CheckRecord>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(group: &str) -> ReportBuilder {
        ReportBuilder {
            group: group.to_string(),
            checks: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn record<T>(
        &mut self,
        id: &str,
        anchor: &str,
        result: Result<T, crate::Error>,
        detail_ok: impl FnOnce(&T) -> String,
    ) -> Option<T> {
        match result {
            Ok(v) => {
                let detail = detail_ok(&v);
                self.checks.push(CheckRecord {
                    id: id.to_string(),
                    paper_anchor: anchor.to_string(),
                    status: "pass".to_string(),
                    detail,
                });
                Some(v)
            }
            Err(e) => {
                self.checks.push(CheckRecord {
                    id: id.to_string(),
                    paper_anchor: anchor.to_string(),
                    status: "fail".to_string(),
                    detail: e.to_string(),
                });
                None
            }
        }
    }

    pub fn pass(&mut self, id: &str, anchor: &str, detail: String) {
        self.checks.push(CheckRecord {
            id: id.to_string(),
            paper_anchor: anchor.to_string(),
            status: "pass".to_string(),
            detail,
        });
    }

    pub fn fail(&mut self, id: &str, anchor: &str, detail: String) {
        self.checks.push(CheckRecord {
            id: id.to_string(),
            paper_anchor: anchor.to_string(),
            status: "fail".to_string(),
            detail,
        });
    }

    pub fn check(&mut self, id: &str, anchor: &str, ok: bool, detail: String) {
        if ok {
            self.pass(id, anchor, detail);
        } else {
            self.fail(id, anchor, detail);
        }
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == "fail")
    }

    pub fn finish(mut self) -> Report {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        let pass = self.checks.iter().filter(|c| c.status == "pass").count();
        let fail = self.checks.len() - pass;
        Report {
            group: self.group,
            checks: self.checks,
            summary: Summary {
                pass,
                fail,
                elapsed_ms: self.started.elapsed().as_millis(),
            },
        }
    }
}

impl Report {
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.group));
        let wid = self
            .checks
            .iter()
            .map(|c| c.id.len())
            .max()
            .unwrap_or(0)
            .max(5);
        for c in &self.checks {
            out.push_str(&format!(
                "  {:wid$}  {:4}  {}\n",
                c.id,
                c.status,
                c.detail,
                wid = wid
            ));
        }
        out.push_str(&format!(
            "  {} passed, {} failed ({} ms)\n",
            self.summary.pass, self.summary.fail, self.summary.elapsed_ms
        ));
        out
    }
}
