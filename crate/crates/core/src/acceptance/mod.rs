//! The acceptance suite: every criterion is a list of exact checks.

mod criteria;
pub mod instances;

use std::fmt::Debug;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use crate::error::{Error, Result};

pub use criteria::{
    axiom_instances, example1_sweep, example2_sample_indices, example2_tables, finite_bundle_identities,
    random_box_pair, section_variants, SectionVariant, RANDOM_FINITE_COUNT, RANDOM_FINITE_SEED, REGION_SEED,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Accumulates checks; a failure does not stop the criterion.
#[derive(Clone, Debug, Default)]
pub struct Checks(Vec<Check>);

impl Checks {
    pub fn expect(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn equal<T: Debug + PartialEq>(&mut self, name: &str, got: T, want: T) {
        let detail = if got == want {
            format!("{got:?}")
        } else {
            format!("got {got:?}, expected {want:?}")
        };
        self.expect(name, got == want, detail);
    }

    pub fn into_vec(self) -> Vec<Check> {
        self.0
    }
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: &'static str,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// `A1 PASS circle coincidence averaging (17 checks)`
    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        format!("{} {verdict} {} ({} checks)", self.id, self.title, self.checks.len())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "title": self.title,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
            })).collect::<Vec<_>>(),
            "elapsed_ms": self.elapsed.as_millis() as u64,
        })
    }
}

type Runner = fn() -> Result<Checks>;

pub const CRITERIA: &[(&str, &str)] = &[
    ("A1", "circle coincidence averaging"),
    ("A2", "fixed point averaging"),
    ("A3", "torus coincidence battery"),
    ("A4", "first algebraic example"),
    ("A5", "second algebraic example"),
    ("A6", "counting identities over finite groups"),
    ("A7", "local trace axioms and index averaging"),
    ("A8", "representative and section independence"),
];

fn runner(id: &str) -> Option<Runner> {
    Some(match id {
        "A1" => criteria::a1,
        "A2" => criteria::a2,
        "A3" => criteria::a3,
        "A4" => criteria::a4,
        "A5" => criteria::a5,
        "A6" => criteria::a6,
        "A7" => criteria::a7,
        "A8" => criteria::a8,
        _ => return None,
    })
}

/// Runs one criterion; an error inside it becomes a failed check.
pub fn run_criterion(id: &str) -> Result<CriterionReport> {
    let (id, title) = CRITERIA
        .iter()
        .find(|(i, _)| i.eq_ignore_ascii_case(id))
        .copied()
        .ok_or_else(|| Error::UnknownName(id.into()))?;
    let run = runner(id).expect("every criterion has a runner");
    let start = Instant::now();
    let checks = match run() {
        Ok(c) => c.into_vec(),
        Err(e) => vec![Check {
            name: "evaluation".into(),
            passed: false,
            detail: e.to_string(),
        }],
    };
    Ok(CriterionReport {
        id,
        title,
        checks,
        elapsed: start.elapsed(),
    })
}

pub fn run_all() -> Vec<CriterionReport> {
    CRITERIA
        .iter()
        .map(|(id, _)| run_criterion(id).expect("known criterion"))
        .collect()
}
