//! A Jamesian function that is not an involution.
//!
//! It is assembled from the curve family `j_c`: each interior point gets the
//! value `c` of the unique curve passing through it. The explicit formula
//! splits the square along its two diagonals into four regions.

use std::fmt;

use serde::Serialize;

use crate::domain::{classify_boundary, require_interior, BoundaryDisposition, Prob};
use crate::error::{Error, Result};

/// The four pieces of the square cut by `b = a` and `a + b = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `b >= a`, `a + b <= 1` (left wedge)
    I,
    /// `b <= a`, `a + b <= 1` (bottom wedge)
    II,
    /// `b >= a`, `a + b >= 1` (top wedge)
    III,
    /// `b <= a`, `a + b >= 1` (right wedge)
    IV,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
        })
    }
}

// Ties go to the lower-numbered region; the formulas agree there anyway.
#[inline]
fn region_raw(a: f64, b: f64) -> Region {
    let below_anti = a + b <= 1.0;
    if b >= a && below_anti {
        Region::I
    } else if below_anti {
        Region::II
    } else if b >= a {
        Region::III
    } else {
        Region::IV
    }
}

pub fn region_classify(a: Prob, b: Prob) -> Result<Region> {
    require_interior(a.value(), b.value(), "region_classify")?;
    Ok(region_raw(a.value(), b.value()))
}

#[inline]
pub(crate) fn kernel(a: f64, b: f64) -> f64 {
    match region_raw(a, b) {
        Region::I => a / (2.0 * b),
        Region::II => (2.0 * a - b) / (2.0 * a),
        Region::III => (1.0 - b) / (2.0 * (1.0 - a)),
        Region::IV => (1.0 + a - 2.0 * b) / (2.0 * (1.0 - b)),
    }
}

pub fn piecewise_j(a: Prob, b: Prob) -> Result<Prob> {
    match classify_boundary(a, b) {
        BoundaryDisposition::Undefined => Err(Error::UndefinedMatchup {
            a: a.value(),
            b: b.value(),
        }),
        BoundaryDisposition::Forced(v) => Ok(v),
        BoundaryDisposition::Interior => Prob::new(kernel(a.value(), b.value())),
    }
}

#[inline]
pub(crate) fn level_curve_raw(c: f64, a: f64) -> f64 {
    if c <= 0.5 {
        if a <= 2.0 * c / (1.0 + 2.0 * c) {
            a / (2.0 * c)
        } else {
            2.0 * c * a + 1.0 - 2.0 * c
        }
    } else if a <= 1.0 / (3.0 - 2.0 * c) {
        (2.0 - 2.0 * c) * a
    } else {
        (a + 1.0 - 2.0 * c) / (2.0 - 2.0 * c)
    }
}

/// The curve `b = j_c(a)` along which the piecewise function equals `c`.
pub fn piecewise_level_curve(c: Prob, a: Prob) -> Result<Prob> {
    if !a.is_interior() || !c.is_interior() {
        return Err(Error::domain(format!(
            "j_c(a) requires 0 < a, c < 1, got a = {a}, c = {c}"
        )));
    }
    Prob::new(level_curve_raw(c.value(), a.value()))
}
