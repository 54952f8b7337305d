//! Bookkeeping for the acceptance run: one timed pass/fail line per criterion.

use std::fmt;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "criterion {:>2} {verdict} {}: {} [{:.2}s]",
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

/// Runs `check`, timing it. `check` returns the verdict and a detail line.
pub fn run(id: u32, name: &'static str, check: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = check();
    Outcome {
        id,
        name,
        pass,
        detail,
        elapsed: start.elapsed(),
    }
}

/// `(passed, failed)`.
pub fn tally(outcomes: &[Outcome]) -> (usize, usize) {
    let passed = outcomes.iter().filter(|o| o.pass).count();
    (passed, outcomes.len() - passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let o = Outcome {
            id: 3,
            name: "x",
            pass: false,
            detail: "max 1e-3".into(),
            elapsed: Duration::from_millis(1250),
        };
        assert_eq!(o.to_string(), "criterion  3 FAIL x: max 1e-3 [1.25s]");
    }

    #[test]
    fn counts() {
        let a = run(1, "a", || (true, String::new()));
        let b = run(2, "b", || (false, String::new()));
        assert_eq!(tally(&[a, b]), (1, 1));
    }
}
