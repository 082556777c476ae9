//! A small runner for the acceptance checks.
//!
//! Each check returns an [`Outcome`]; the runner times it, compares the time
//! with the check's budget, catches panics, and prints one line per check.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass(String),
    Fail(String),
    /// Not checked at all; the text says why.
    Excluded(String),
}

impl Outcome {
    pub fn from_bool(ok: bool, detail: String) -> Self {
        if ok {
            Outcome::Pass(detail)
        } else {
            Outcome::Fail(detail)
        }
    }
}

#[derive(Debug, Default)]
pub struct Runner {
    pub passed: usize,
    pub failed: usize,
    pub excluded: usize,
    /// When non-empty, only these checks run.
    pub only: Vec<u32>,
}

impl Runner {
    pub fn new() -> Self {
        Self::default()
    }

    /// Numeric command-line arguments select checks by id; flags are ignored.
    pub fn from_args() -> Self {
        let only = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
        Runner { only, ..Self::default() }
    }

    /// Runs one check and prints `[PASS|FAIL|SKIP] <id> <title>: <detail> (<secs>)`.
    /// A check that overruns `budget` fails even if its result is correct.
    pub fn run<F>(&mut self, id: u32, title: &str, budget: Option<Duration>, check: F)
    where
        F: FnOnce() -> Outcome,
    {
        if !self.only.is_empty() && !self.only.contains(&id) {
            return;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| Outcome::Fail(format!("panicked: {}", panic_text(&e))));
        let took = start.elapsed();
        let outcome = match (outcome, budget) {
            (Outcome::Pass(d), Some(b)) if took > b => {
                Outcome::Fail(format!("{d}; over the {:.0} s budget", b.as_secs_f64()))
            }
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Outcome::Pass(d) => {
                self.passed += 1;
                ("PASS", d)
            }
            Outcome::Fail(d) => {
                self.failed += 1;
                ("FAIL", d)
            }
            Outcome::Excluded(d) => {
                self.excluded += 1;
                ("SKIP", d)
            }
        };
        println!("[{tag}] {id:>2} {title}: {detail} ({:.2} s)", took.as_secs_f64());
    }

    pub fn summary(&self) -> String {
        format!("{} passed, {} failed, {} excluded", self.passed, self.failed, self.excluded)
    }
}

fn panic_text(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_else(|| "non-string payload".into())
}
