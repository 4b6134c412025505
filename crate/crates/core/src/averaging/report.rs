use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::group_models::GroupElement;
use crate::reidemeister::ClassKey;
use crate::trace_geometry::TraceVector;

/// Contribution of one coset `β̄ ∈ Π₂/Γ₂`.
#[derive(Clone, Debug)]
pub struct CosetSummand {
    pub beta_bar: usize,
    pub beta: GroupElement,
    /// Label of `β` in `Π₂`.
    pub beta_label: String,
    /// `RT(β̄f̄, βf̃, ḡ, g̃)` in `R[(τ_β φ)', ψ']`.
    pub lifted: TraceVector,
    /// `ρ_β ∘ î^β` of the lifted trace, in `R[φ, ψ]`.
    pub pushed: TraceVector,
    /// Every class of `pushed` projects to `[β̄]` in `R[φ̄, ψ̄]`.
    pub in_fiber: bool,
}

#[derive(Clone, Debug)]
pub struct AveragingReport {
    /// Directly computed trace, when available.
    pub lhs: Option<TraceVector>,
    pub summands: Vec<CosetSummand>,
    pub raw_sum: TraceVector,
    /// `[Π₁ : Γ₁]`.
    pub divisor: u64,
    /// `(class, raw coefficient, quotient)` for every nonzero class.
    pub witness: Vec<(ClassKey, i64, i64)>,
    pub rhs: TraceVector,
}

impl AveragingReport {
    /// `Some(lhs == rhs)` when a left-hand side is present.
    pub fn equal(&self) -> Option<bool> {
        self.lhs.as_ref().map(|l| l == &self.rhs)
    }

    /// Equality together with the structural checks on the summands.
    pub fn passed(&self) -> bool {
        self.equal() != Some(false) && self.summands.iter().all(|s| s.in_fiber)
    }

    /// `(label, lhs, rhs)` for every class where the two sides differ.
    pub fn diff(&self) -> Vec<(String, i64, i64)> {
        let Some(lhs) = &self.lhs else {
            return Vec::new();
        };
        let mut keys: Vec<&ClassKey> = lhs
            .coefficients()
            .keys()
            .chain(self.rhs.coefficients().keys())
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter(|k| lhs.coefficient(k) != self.rhs.coefficient(k))
            .map(|k| (self.rhs.set().label(k), lhs.coefficient(k), self.rhs.coefficient(k)))
            .collect()
    }

    /// Columns `β̄`, summand, pushforward, running sum.
    pub fn table(&self) -> String {
        let mut running = TraceVector::zero(self.raw_sum.set().clone());
        let mut rows = vec![[
            "coset".to_string(),
            "RT summand".to_string(),
            "pushforward".to_string(),
            "running sum".to_string(),
        ]];
        for s in &self.summands {
            running = running.plus(&s.pushed);
            rows.push([
                s.beta_label.clone(),
                s.lifted.to_string(),
                s.pushed.to_string(),
                running.to_string(),
            ]);
        }
        let widths: Vec<usize> = (0..4)
            .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for (i, r) in rows.iter().enumerate() {
            let cells: Vec<String> = r
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            let _ = writeln!(out, "{}", cells.join(" | ").trim_end());
            if i == 0 {
                let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                let _ = writeln!(out, "{}", rule.join("-+-"));
            }
        }
        let _ = writeln!(out, "rhs = ({}) / {} = {}", self.raw_sum, self.divisor, self.rhs);
        if let Some(lhs) = &self.lhs {
            let _ = writeln!(out, "lhs = {lhs}");
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let summands: Vec<Value> = self
            .summands
            .iter()
            .map(|s| {
                json!({
                    "coset": s.beta_bar,
                    "representative": s.beta_label,
                    "lifted": trace_json(&s.lifted),
                    "pushed": trace_json(&s.pushed),
                    "in_fiber": s.in_fiber,
                })
            })
            .collect();
        let witness: Vec<Value> = self
            .witness
            .iter()
            .map(|(k, raw, q)| json!({"class": self.raw_sum.set().label(k), "raw": raw, "quotient": q}))
            .collect();
        json!({
            "lhs": self.lhs.as_ref().map(trace_json),
            "summands": summands,
            "raw_sum": trace_json(&self.raw_sum),
            "divisor": self.divisor,
            "witness": witness,
            "rhs": trace_json(&self.rhs),
            "equal": self.equal(),
            "passed": self.passed(),
        })
    }
}

/// A trace as `{text, terms: [{class, key, coefficient}]}`.
pub fn trace_json(t: &TraceVector) -> Value {
    let terms: Vec<Value> = t
        .terms()
        .map(|(k, c)| json!({"class": t.set().label(k), "key": k.to_string(), "coefficient": c}))
        .collect();
    json!({"text": t.to_string(), "terms": terms})
}
