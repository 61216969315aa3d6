//! Algebraic identities behind the Bernoulli-pair derivation.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::domain::Prob;
use crate::error::{Error, Result};
use crate::james::james_p;

pub const TOTAL_TOL: f64 = 1e-15;
pub const FUNCTIONAL_TOL: f64 = 1e-12;
pub const SERIES_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub cells: usize,
    /// max |ab + (1−a)(1−b) + a(1−b) + b(1−a) − 1|
    pub max_total_residual: f64,
    /// max |p − a(1−b) − (ab + (1−a)(1−b))·p| with `p` the James value
    pub max_functional_residual: f64,
    /// max |a(1−b)/(1 − ab − (1−a)(1−b)) − p|
    pub max_series_residual: f64,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.max_total_residual <= TOTAL_TOL
            && self.max_functional_residual <= FUNCTIONAL_TOL
            && self.max_series_residual <= SERIES_TOL
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "cells: {}", self.cells);
        let _ = writeln!(
            s,
            "total probability residual: {:e}",
            self.max_total_residual
        );
        let _ = writeln!(
            s,
            "functional equation residual: {:e}",
            self.max_functional_residual
        );
        let _ = writeln!(
            s,
            "geometric series residual: {:e}",
            self.max_series_residual
        );
        let _ = writeln!(s, "result: {}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

/// Outcome probabilities of one round sum to 1.
pub fn round_total(a: f64, b: f64) -> f64 {
    a * b + (1.0 - a) * (1.0 - b) + a * (1.0 - b) + b * (1.0 - a)
}

/// Checks the identities on the grid `(i/cells, j/cells)`. The total is
/// checked everywhere; the other two skip the undefined corners.
pub fn algebraic_identity_checks(cells: usize) -> Result<IdentityReport> {
    if cells == 0 {
        return Err(Error::Param("need at least one cell".into()));
    }
    let mut report = IdentityReport {
        cells,
        max_total_residual: 0.0,
        max_functional_residual: 0.0,
        max_series_residual: 0.0,
    };
    for i in 0..=cells {
        for j in 0..=cells {
            let a = i as f64 / cells as f64;
            let b = j as f64 / cells as f64;
            report.max_total_residual = report
                .max_total_residual
                .max((round_total(a, b) - 1.0).abs());

            let Ok(p) = james_p(Prob::new(a)?, Prob::new(b)?) else {
                continue;
            };
            let p = p.value();
            let tie = a * b + (1.0 - a) * (1.0 - b);
            let win = a * (1.0 - b);
            report.max_functional_residual = report
                .max_functional_residual
                .max((p - (win + tie * p)).abs());
            let series = win / (1.0 - tie);
            report.max_series_residual = report.max_series_residual.max((series - p).abs());
        }
    }
    Ok(report)
}
