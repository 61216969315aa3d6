//! Winning percentages, matchup points and the boundary rules shared by
//! every model.
//!
//! The closed unit square minus the two corners `(0,0)` and `(1,1)` is the
//! legal evaluation domain. On its edges the value of any Jamesian function
//! is forced to 0 or 1, so kernels only ever see points of the open square.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A winning percentage or probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Prob(f64);

impl Prob {
    pub const ZERO: Prob = Prob(0.0);
    pub const HALF: Prob = Prob(0.5);
    pub const ONE: Prob = Prob(1.0);

    /// Rejects NaN and anything outside `[0, 1]`. Values are never snapped
    /// to the endpoints.
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Prob(value))
        } else {
            Err(Error::InvalidProbability(value))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - p`.
    #[inline]
    pub fn complement(self) -> Prob {
        Prob(1.0 - self.0)
    }

    #[inline]
    pub fn is_interior(self) -> bool {
        self.0 > 0.0 && self.0 < 1.0
    }

    #[inline]
    pub fn is_endpoint(self) -> bool {
        self.0 == 0.0 || self.0 == 1.0
    }
}

impl TryFrom<f64> for Prob {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Prob::new(value)
    }
}

impl From<Prob> for f64 {
    fn from(p: Prob) -> f64 {
        p.0
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A pair of winning percentages: team A's `a` against team B's `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchupPoint {
    pub a: Prob,
    pub b: Prob,
}

impl MatchupPoint {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Ok(MatchupPoint {
            a: Prob::new(a)?,
            b: Prob::new(b)?,
        })
    }

    /// True for `(0,0)` and `(1,1)`, where no prediction can be made.
    pub fn is_undefined(&self) -> bool {
        matches!(
            classify_boundary(self.a, self.b),
            BoundaryDisposition::Undefined
        )
    }

    pub fn disposition(&self) -> BoundaryDisposition {
        classify_boundary(self.a, self.b)
    }
}

/// How a matchup point is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryDisposition {
    /// Both coordinates lie in `(0,1)`; the model kernel decides.
    Interior,
    /// An edge point whose value is dictated by the boundary rules. Always
    /// exactly 0 or 1.
    Forced(Prob),
    /// `(0,0)` or `(1,1)`.
    Undefined,
}

/// Boundary rules derived from conditions (b), (c) and (d):
/// `P(a,0) = 1` for `a > 0`, `P(1,b) = 1` for `b < 1`, and the mirrored
/// `P(0,b) = 0` for `b > 0`, `P(a,1) = 0` for `a < 1`.
pub fn classify_boundary(a: Prob, b: Prob) -> BoundaryDisposition {
    let (a, b) = (a.value(), b.value());
    if (a == 0.0 && b == 0.0) || (a == 1.0 && b == 1.0) {
        BoundaryDisposition::Undefined
    } else if (b == 0.0 && a > 0.0) || (a == 1.0 && b < 1.0) {
        BoundaryDisposition::Forced(Prob::ONE)
    } else if (a == 0.0 && b > 0.0) || (b == 1.0 && a < 1.0) {
        BoundaryDisposition::Forced(Prob::ZERO)
    } else {
        BoundaryDisposition::Interior
    }
}

/// Checks that `(a,b)` lies in the open unit square.
pub(crate) fn require_interior(a: f64, b: f64, what: &str) -> Result<()> {
    if a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{what} requires an interior point, got ({a}, {b})"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64) -> Prob {
        Prob::new(x).unwrap()
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Prob::new(-0.0001).is_err());
        assert!(Prob::new(1.0000001).is_err());
        assert!(Prob::new(f64::NAN).is_err());
        assert!(Prob::new(0.0).is_ok());
        assert!(Prob::new(1.0).is_ok());
    }

    #[test]
    fn near_boundary_is_not_snapped() {
        let tiny = p(1e-16);
        assert_eq!(classify_boundary(tiny, tiny), BoundaryDisposition::Interior);
        assert_eq!(
            classify_boundary(p(1.0 - 1e-15), p(1.0 - 1e-15)),
            BoundaryDisposition::Interior
        );
    }

    #[test]
    fn classify_examples() {
        use BoundaryDisposition::*;
        assert_eq!(classify_boundary(p(0.5), p(0.0)), Forced(Prob::ONE));
        assert_eq!(classify_boundary(p(0.0), p(0.0)), Undefined);
        assert_eq!(classify_boundary(p(1.0), p(1.0)), Undefined);
        assert_eq!(classify_boundary(p(0.3), p(0.7)), Interior);
        assert_eq!(classify_boundary(p(1.0), p(0.25)), Forced(Prob::ONE));
        assert_eq!(classify_boundary(p(0.0), p(0.25)), Forced(Prob::ZERO));
        assert_eq!(classify_boundary(p(0.25), p(1.0)), Forced(Prob::ZERO));
        // overlapping rules agree
        assert_eq!(classify_boundary(p(1.0), p(0.0)), Forced(Prob::ONE));
        assert_eq!(classify_boundary(p(0.0), p(1.0)), Forced(Prob::ZERO));
    }

    #[test]
    fn swap_and_complement_symmetry() {
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        for &a in &grid {
            for &b in &grid {
                if let BoundaryDisposition::Forced(v) = classify_boundary(p(a), p(b)) {
                    assert_eq!(
                        classify_boundary(p(b), p(a)),
                        BoundaryDisposition::Forced(v.complement()),
                        "swap at ({a},{b})"
                    );
                    assert_eq!(
                        classify_boundary(p(1.0 - b), p(1.0 - a)),
                        BoundaryDisposition::Forced(v),
                        "loss-side at ({a},{b})"
                    );
                }
            }
        }
    }

    #[test]
    fn matchup_point_flags_corners() {
        assert!(MatchupPoint::new(0.0, 0.0).unwrap().is_undefined());
        assert!(MatchupPoint::new(1.0, 1.0).unwrap().is_undefined());
        assert!(!MatchupPoint::new(1.0, 0.0).unwrap().is_undefined());
    }
}
