//! Analytic gradients against centered finite differences.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::domain::MatchupPoint;
use crate::error::{Error, Result};
use crate::model::JamesianModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientCheckPoint {
    pub a: f64,
    pub b: f64,
    pub analytic: [f64; 2],
    pub numeric: [f64; 2],
    pub error: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientCheckReport {
    pub model_name: String,
    pub h: f64,
    pub tolerance: f64,
    pub max_error: f64,
    pub points: Vec<GradientCheckPoint>,
}

impl GradientCheckReport {
    pub fn passed(&self) -> bool {
        self.points.iter().all(|p| !p.flagged)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "model: {}", self.model_name);
        let _ = writeln!(s, "h: {:e}", self.h);
        let _ = writeln!(s, "tolerance: {:e}", self.tolerance);
        let _ = writeln!(s, "max error: {:.3e}", self.max_error);
        for p in self.points.iter().filter(|p| p.flagged) {
            let _ = writeln!(s, "flagged at (a={}, b={}) error {:.3e}", p.a, p.b, p.error);
        }
        let _ = writeln!(s, "result: {}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

/// Compares `model.gradient` with centered differences of step `h`.
///
/// Each point needs a margin larger than `h` from the boundary. The error
/// at a point is the larger of the two component errors, measured
/// relative to `max(1, |analytic|)`.
pub fn fd_gradient_check(
    model: &JamesianModel,
    points: &[MatchupPoint],
    h: f64,
    tol: f64,
) -> Result<GradientCheckReport> {
    if !model.has_gradient() {
        return Err(Error::GradientUnavailable(model.name().to_string()));
    }
    if !(h > 0.0) {
        return Err(Error::Param(format!("step must be positive, got {h}")));
    }
    let mut out = Vec::with_capacity(points.len());
    let mut max_error = 0.0_f64;
    for pt in points {
        let (a, b) = (pt.a.value(), pt.b.value());
        if a.min(1.0 - a) <= h || b.min(1.0 - b) <= h {
            return Err(Error::domain(format!(
                "({a}, {b}) is within h = {h} of the boundary"
            )));
        }
        let analytic = model.gradient(a, b)?;
        let da = (model.value(a + h, b)? - model.value(a - h, b)?) / (2.0 * h);
        let db = (model.value(a, b + h)? - model.value(a, b - h)?) / (2.0 * h);
        let numeric = [da, db];
        let error = (0..2)
            .map(|k| (analytic[k] - numeric[k]).abs() / analytic[k].abs().max(1.0))
            .fold(0.0, f64::max);
        max_error = max_error.max(error);
        out.push(GradientCheckPoint {
            a,
            b,
            analytic,
            numeric,
            error,
            flagged: !(error <= tol),
        });
    }
    Ok(GradientCheckReport {
        model_name: model.name().to_string(),
        h,
        tolerance: tol,
        max_error,
        points: out,
    })
}

/// `n × n` interior grid `(i/(n+1), j/(n+1))`.
pub fn interior_grid(n: usize) -> Vec<MatchupPoint> {
    let step = 1.0 / (n + 1) as f64;
    (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i as f64 * step, j as f64 * step)))
        .map(|(a, b)| MatchupPoint::new(a, b).expect("grid points lie in (0, 1)"))
        .collect()
}
