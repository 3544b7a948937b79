//! Check records, verdicts and report serialization.
//!
//! Every check compares two numbers under a [`Relation`]. The margin is
//! `z·σ + ε`, with `σ` the standard error of `lhs − rhs` (zero on exact paths)
//! and `ε` an absolute slack for deterministic error (round-off, quadrature).
//! `ci_lo`/`ci_hi` bound `lhs − rhs` by `±z·σ`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::config::{Suite, Tolerance};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// How `lhs` is expected to compare with `rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `lhs ≥ rhs`, an inequality that may be tight.
    AtLeast,
    /// `lhs ≤ rhs`, an inequality that may be tight.
    AtMost,
    /// `lhs > rhs`; a difference inside the margin is INCONCLUSIVE.
    Greater,
    /// `lhs < rhs`; a difference inside the margin is INCONCLUSIVE.
    Less,
    /// `lhs = rhs` within the margin.
    Equal,
}

impl Relation {
    pub fn verdict(self, diff: f64, margin: f64) -> Verdict {
        let v = |ok: bool| if ok { Verdict::Pass } else { Verdict::Fail };
        match self {
            Relation::AtLeast => v(diff >= -margin),
            Relation::AtMost => v(diff <= margin),
            Relation::Equal => v(diff.abs() <= margin),
            Relation::Greater | Relation::Less => {
                let d = if self == Relation::Greater { diff } else { -diff };
                if d > margin {
                    Verdict::Pass
                } else if d < -margin {
                    Verdict::Fail
                } else {
                    Verdict::Inconclusive
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub body: Option<String>,
    pub relation: Relation,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub sigma: f64,
    pub margin: f64,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl Check {
    /// Compares `lhs` with `rhs` at margin `z·sigma + eps`.
    #[allow(clippy::too_many_arguments)]
    pub fn compare(
        name: impl Into<String>,
        anchor: &str,
        relation: Relation,
        lhs: f64,
        rhs: f64,
        sigma: f64,
        eps: f64,
        tol: &Tolerance,
    ) -> Check {
        let name = name.into();
        if !(lhs.is_finite() && rhs.is_finite() && sigma.is_finite() && sigma >= 0.0) {
            return Check::failed(
                name,
                anchor,
                relation,
                format!("non-finite comparison: {lhs} vs {rhs}, σ = {sigma}"),
            );
        }
        let diff = lhs - rhs;
        let margin = tol.z * sigma + eps;
        Check {
            name,
            anchor: anchor.to_string(),
            body: None,
            relation,
            lhs: Some(lhs),
            rhs: Some(rhs),
            sigma,
            margin,
            ci_lo: Some(diff - tol.z * sigma),
            ci_hi: Some(diff + tol.z * sigma),
            verdict: relation.verdict(diff, margin),
            note: None,
        }
    }

    /// A check that could not be evaluated.
    pub fn failed(name: impl Into<String>, anchor: &str, relation: Relation, reason: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            anchor: anchor.to_string(),
            body: None,
            relation,
            lhs: None,
            rhs: None,
            sigma: 0.0,
            margin: 0.0,
            ci_lo: None,
            ci_hi: None,
            verdict: Verdict::Fail,
            note: Some(reason.into()),
        }
    }

    pub fn body(mut self, body: &str) -> Check {
        self.body = Some(body.to_string());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Check {
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(old) => format!("{old}; {note}"),
            None => note,
        });
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub version: String,
    pub started_unix: u64,
    pub duration_ms: u64,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub suite: Suite,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub samples: u64,
    pub z: f64,
    pub eps: f64,
    pub bodies: Vec<String>,
    pub catalog: String,
    /// Timing and version data; omitted under `--no-meta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunInfo>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub meta: Meta,
    pub summary: Summary,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(meta: Meta, checks: Vec<Check>) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            match c.verdict {
                Verdict::Pass => summary.pass += 1,
                Verdict::Fail => summary.fail += 1,
                Verdict::Inconclusive => summary.inconclusive += 1,
            }
        }
        SuiteReport {
            schema_version: SCHEMA_VERSION,
            meta,
            summary,
            checks,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn find(&self, name: &str, body: Option<&str>) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name && c.body.as_deref() == body)
    }
}

/// One report serializes as an object, several as an array.
pub fn to_json(reports: &[SuiteReport]) -> String {
    let mut s = match reports {
        [one] => serde_json::to_string_pretty(one),
        many => serde_json::to_string_pretty(many),
    }
    .expect("reports serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<Vec<SuiteReport>> {
    match serde_json::from_str::<SuiteReport>(text) {
        Ok(r) => Ok(vec![r]),
        Err(_) => serde_json::from_str(text),
    }
}

#[derive(Serialize)]
struct Row<'a> {
    suite: &'a str,
    name: &'a str,
    anchor: &'a str,
    body: &'a str,
    relation: Relation,
    lhs: Option<f64>,
    rhs: Option<f64>,
    sigma: f64,
    margin: f64,
    ci_lo: Option<f64>,
    ci_hi: Option<f64>,
    verdict: Verdict,
    note: &'a str,
}

/// One row per check, suite name first.
pub fn to_csv(reports: &[SuiteReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        for c in &r.checks {
            w.serialize(Row {
                suite: r.meta.suite.name(),
                name: &c.name,
                anchor: &c.anchor,
                body: c.body.as_deref().unwrap_or(""),
                relation: c.relation,
                lhs: c.lhs,
                rhs: c.rhs,
                sigma: c.sigma,
                margin: c.margin,
                ci_lo: c.ci_lo,
                ci_hi: c.ci_hi,
                verdict: c.verdict,
                note: c.note.as_deref().unwrap_or(""),
            })
            .expect("csv rows serialize");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}
