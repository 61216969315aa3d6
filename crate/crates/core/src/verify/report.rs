use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which list of conditions an audit runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionList {
    /// (a)–(e)
    James,
    /// (1)–(6)
    Proto,
    /// (i)–(iii)
    Involutive,
    GeneratorSelfcheck,
}

impl ConditionList {
    pub fn as_str(self) -> &'static str {
        match self {
            ConditionList::James => "james",
            ConditionList::Proto => "proto",
            ConditionList::Involutive => "involutive",
            ConditionList::GeneratorSelfcheck => "generator-selfcheck",
        }
    }
}

impl fmt::Display for ConditionList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "james" => Ok(ConditionList::James),
            "proto" => Ok(ConditionList::Proto),
            "involutive" => Ok(ConditionList::Involutive),
            "generator-selfcheck" => Ok(ConditionList::GeneratorSelfcheck),
            other => Err(Error::Param(format!("unknown condition list `{other}`"))),
        }
    }
}

/// One failed check. `b` is absent for single-variable generator checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: String,
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    pub magnitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Violation {
    /// Non-finite magnitudes are stored as `f64::MAX` so reports stay valid
    /// JSON.
    pub fn new(condition: &str, a: f64, b: Option<f64>, magnitude: f64) -> Self {
        let (magnitude, note) = if magnitude.is_finite() {
            (magnitude, None)
        } else {
            (f64::MAX, Some(format!("non-finite magnitude {magnitude}")))
        };
        Violation {
            condition: condition.to_string(),
            a,
            b,
            magnitude,
            note,
        }
    }

    /// A check that could not be evaluated at all.
    pub fn failed(condition: &str, a: f64, b: Option<f64>, err: &Error) -> Self {
        Violation {
            condition: condition.to_string(),
            a,
            b,
            magnitude: f64::MAX,
            note: Some(err.to_string()),
        }
    }

    /// Euclidean distance from `(a, b)`; single-variable violations use `a`
    /// only.
    pub fn distance_to(&self, a: f64, b: f64) -> f64 {
        match self.b {
            Some(vb) => (self.a - a).hypot(vb - b),
            None => (self.a - a).abs(),
        }
    }
}

/// Outcome of auditing a model (or generator) on a grid. Passing means the
/// violation list is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub model_name: String,
    pub condition_list: ConditionList,
    pub grid_mesh: f64,
    pub tolerance: f64,
    pub violations: Vec<Violation>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn worst(&self) -> Option<&Violation> {
        self.violations
            .iter()
            .max_by(|x, y| x.magnitude.total_cmp(&y.magnitude))
    }

    /// Violations of one condition id.
    pub fn of_condition<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Violation> + 'a {
        self.violations.iter().filter(move |v| v.condition == id)
    }

    /// The violation closest to `(a, b)`, useful for locating a witness.
    pub fn nearest(&self, a: f64, b: f64) -> Option<&Violation> {
        self.violations
            .iter()
            .min_by(|x, y| x.distance_to(a, b).total_cmp(&y.distance_to(a, b)))
    }

    /// Distinct condition ids that failed, in first-seen order.
    pub fn failed_conditions(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = Vec::new();
        for v in &self.violations {
            if !ids.contains(&v.condition.as_str()) {
                ids.push(&v.condition);
            }
        }
        ids
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "model: {}", self.model_name);
        let _ = writeln!(s, "conditions: {}", self.condition_list);
        let _ = writeln!(s, "mesh: {}", self.grid_mesh);
        let _ = writeln!(s, "tolerance: {:e}", self.tolerance);
        let _ = writeln!(s, "violations: {}", self.violations.len());
        let _ = writeln!(s, "result: {}", if self.passed() { "PASS" } else { "FAIL" });
        for id in self.failed_conditions() {
            let count = self.of_condition(id).count();
            let worst = self
                .of_condition(id)
                .max_by(|x, y| x.magnitude.total_cmp(&y.magnitude))
                .expect("id came from the list");
            let _ = writeln!(
                s,
                "condition ({id}): {count} violation(s), worst {} at {}",
                fmt_mag(worst.magnitude),
                fmt_loc(worst)
            );
        }
        for v in &self.violations {
            let _ = write!(
                s,
                "violation ({}) at {} magnitude {}",
                v.condition,
                fmt_loc(v),
                fmt_mag(v.magnitude)
            );
            if let Some(note) = &v.note {
                let _ = write!(s, " [{note}]");
            }
            s.push('\n');
        }
        s
    }
}

fn fmt_loc(v: &Violation) -> String {
    match v.b {
        Some(b) => format!("(a={}, b={})", v.a, b),
        None => format!("(a={})", v.a),
    }
}

fn fmt_mag(m: f64) -> String {
    format!("{m:.3e}")
}
