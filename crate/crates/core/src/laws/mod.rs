//! Randomized law suites. Each suite draws its instances from a seeded
//! generator, checks every law on each instance with exact arithmetic, and
//! reports a count per law.

pub mod gen;

mod algebra;
mod functions;
mod structures;

use std::fmt;
use std::time::{Duration, Instant};

pub use algebra::{induced_hom_suite, measure_algebra_suite, measure_core_suite};
pub use functions::{duality_suite, l2_norm_suite, pullback_suite, riesz_suite};
pub use structures::{codec_suite, partial_suite, signal_suite};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawResult {
    pub law: String,
    pub checked: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub instances: usize,
    pub laws: Vec<LawResult>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.failed == 0)
    }

    pub fn checked(&self) -> usize {
        self.laws.iter().map(|l| l.checked).sum()
    }

    pub fn failed(&self) -> usize {
        self.laws.iter().map(|l| l.failed).sum()
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}] instances={} checked={} failed={} time={:.3}s",
            self.suite,
            self.instances,
            self.checked(),
            self.failed(),
            self.elapsed.as_secs_f64()
        )?;
        for l in &self.laws {
            write!(f, "  {:<44} checked={:<7} failed={}", l.law, l.checked, l.failed)?;
            if let Some(why) = &l.first_failure {
                write!(f, "  first: {why}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Per-law counters, kept in first-seen order.
pub(crate) struct Tally {
    suite: &'static str,
    instances: usize,
    laws: Vec<LawResult>,
    started: Instant,
}

impl Tally {
    pub(crate) fn new(suite: &'static str, instances: usize) -> Self {
        Tally { suite, instances, laws: Vec::new(), started: Instant::now() }
    }

    pub(crate) fn check(&mut self, law: &str, ok: bool, detail: impl FnOnce() -> String) {
        let entry = match self.laws.iter().position(|l| l.law == law) {
            Some(k) => &mut self.laws[k],
            None => {
                self.laws.push(LawResult { law: law.to_string(), checked: 0, failed: 0, first_failure: None });
                self.laws.last_mut().unwrap()
            }
        };
        entry.checked += 1;
        if !ok {
            entry.failed += 1;
            if entry.first_failure.is_none() {
                entry.first_failure = Some(detail());
            }
        }
    }

    pub(crate) fn finish(self) -> SuiteReport {
        SuiteReport { suite: self.suite, instances: self.instances, laws: self.laws, elapsed: self.started.elapsed() }
    }
}

/// Seed for one suite, so suites draw independent streams.
pub(crate) fn suite_seed(seed: u64, suite: &str) -> u64 {
    suite.bytes().fold(seed ^ 0x9e37_79b9_7f4a_7c15, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

pub type SuiteFn = fn(u64, usize) -> SuiteReport;

pub const SUITES: &[(&str, SuiteFn)] = &[
    ("measure-core", measure_core_suite),
    ("measure-algebra", measure_algebra_suite),
    ("induced-hom", induced_hom_suite),
    ("pullback", pullback_suite),
    ("l2-norm", l2_norm_suite),
    ("duality", duality_suite),
    ("riesz", riesz_suite),
    ("partial", partial_suite),
    ("signal", signal_suite),
    ("codec", codec_suite),
];

pub fn run_all(seed: u64, instances: usize) -> Vec<SuiteReport> {
    SUITES.iter().map(|(_, suite)| suite(seed, instances)).collect()
}
