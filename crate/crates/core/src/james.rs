//! The James function
//!
//! ```text
//!             a(1-b)
//! P(a,b) = ----------------
//!          a(1-b) + b(1-a)
//! ```
//!
//! together with its worth map, first and second partial derivatives,
//! gradient direction, involution partner and closed-form level curves.

use serde::Serialize;

use crate::domain::{classify_boundary, require_interior, BoundaryDisposition, Prob};
use crate::error::{Error, Result};

/// Interior kernel. `D = a(1-b) + b(1-a)` vanishes only at the excluded
/// corners, so no guard is needed once boundary dispatch has happened.
#[inline]
pub(crate) fn kernel(a: f64, b: f64) -> f64 {
    let win = a * (1.0 - b);
    win / (win + b * (1.0 - a))
}

#[inline]
fn denom(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + b * (1.0 - a)
}

/// Probability that a team with winning percentage `a` beats one with `b`.
pub fn james_p(a: Prob, b: Prob) -> Result<Prob> {
    match classify_boundary(a, b) {
        BoundaryDisposition::Undefined => Err(Error::UndefinedMatchup {
            a: a.value(),
            b: b.value(),
        }),
        BoundaryDisposition::Forced(v) => Ok(v),
        BoundaryDisposition::Interior => Prob::new(kernel(a.value(), b.value())),
    }
}

/// The worth `q_c(a) = c·a/(1-a)` of a team, calibrated so that a .500 team
/// has worth `c`. With `c = 1/2` this is James's log5.
pub fn log5_worth(a: Prob, c: f64) -> Result<f64> {
    if !a.is_interior() {
        return Err(Error::domain(format!(
            "worth is only defined for 0 < a < 1, got {a}"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain(format!(
            "worth scale must be positive, got {c}"
        )));
    }
    let a = a.value();
    Ok(c * a / (1.0 - a))
}

/// First partial derivatives of the James function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Partials {
    pub dp_da: f64,
    pub dp_db: f64,
}

/// Second partial derivatives of the James function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondPartials {
    pub d2p_da2: f64,
    pub d2p_db2: f64,
    pub d2p_dadb: f64,
}

pub fn james_partials(a: Prob, b: Prob) -> Result<Partials> {
    let (a, b) = (a.value(), b.value());
    require_interior(a, b, "james_partials")?;
    Ok(partials_raw(a, b))
}

pub(crate) fn partials_raw(a: f64, b: f64) -> Partials {
    let d = denom(a, b);
    let d2 = d * d;
    Partials {
        dp_da: b * (1.0 - b) / d2,
        dp_db: -a * (1.0 - a) / d2,
    }
}

pub fn james_second_partials(a: Prob, b: Prob) -> Result<SecondPartials> {
    let (a, b) = (a.value(), b.value());
    require_interior(a, b, "james_second_partials")?;
    let d3 = denom(a, b).powi(3);
    Ok(SecondPartials {
        d2p_da2: -2.0 * b * (1.0 - b) * (1.0 - 2.0 * b) / d3,
        d2p_db2: 2.0 * a * (1.0 - a) * (1.0 - 2.0 * a) / d3,
        d2p_dadb: (a - b) / d3,
    })
}

/// Unnormalized direction of steepest increase, `<b(1-b), -a(1-a)>`.
///
/// Defined on the closed square except the four corners, where neither
/// winning percentage carries enough information.
pub fn james_gradient_direction(a: Prob, b: Prob) -> Result<[f64; 2]> {
    if a.is_endpoint() && b.is_endpoint() {
        return Err(Error::domain(format!(
            "gradient is undefined at the corner ({a}, {b})"
        )));
    }
    let (a, b) = (a.value(), b.value());
    Ok([b * (1.0 - b), -a * (1.0 - a)])
}

/// For fixed `0 < a < 1`, returns `c = P(a,b)`; the James function then maps
/// `c` back to `b`, i.e. `P(a, c) = b`.
pub fn james_involution_partner(a: Prob, b: Prob) -> Result<Prob> {
    if !a.is_interior() {
        return Err(Error::domain(format!(
            "involution requires 0 < a < 1, got {a}"
        )));
    }
    james_p(a, b)
}

/// Closed-form level curve: the `b` with `P(a,b) = c`.
pub fn james_level_curve(a: Prob, c: Prob) -> Result<Prob> {
    if !a.is_interior() || !c.is_interior() {
        return Err(Error::domain(format!(
            "level curve requires 0 < a, c < 1, got a = {a}, c = {c}"
        )));
    }
    Prob::new(kernel(a.value(), c.value()))
}

/// Slope `db/da` of the level curve through `(a, b)`.
pub fn level_curve_slope(a: f64, b: f64) -> f64 {
    b * (1.0 - b) / (a * (1.0 - a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(x: f64) -> Prob {
        Prob::new(x).unwrap()
    }

    fn interior_grid(n: usize) -> Vec<f64> {
        (1..=n).map(|i| i as f64 / (n + 1) as f64).collect()
    }

    #[test]
    fn value_examples() {
        assert_abs_diff_eq!(
            james_p(p(0.6), p(0.4)).unwrap().value(),
            9.0 / 13.0,
            epsilon = 1e-15
        );
        for i in 1..=9 {
            let a = i as f64 / 10.0;
            assert_abs_diff_eq!(
                james_p(p(a), Prob::HALF).unwrap().value(),
                a,
                epsilon = 1e-15
            );
        }
        assert_eq!(james_p(p(0.25), p(0.25)).unwrap().value(), 0.5);
        assert!(matches!(
            james_p(Prob::ONE, Prob::ONE),
            Err(Error::UndefinedMatchup { .. })
        ));
        assert_eq!(james_p(p(0.5), Prob::ZERO).unwrap(), Prob::ONE);
    }

    #[test]
    fn worth_examples() {
        assert_abs_diff_eq!(log5_worth(p(0.6), 0.5).unwrap(), 0.75, epsilon = 1e-15);
        for c in [0.1, 0.5, 2.0, 17.0] {
            assert_abs_diff_eq!(log5_worth(Prob::HALF, c).unwrap(), c, epsilon = 1e-15);
        }
        assert!(log5_worth(Prob::ZERO, 0.5).is_err());
        assert!(log5_worth(Prob::ONE, 0.5).is_err());
        assert!(log5_worth(p(0.3), 0.0).is_err());
        assert!(log5_worth(p(0.3), -1.0).is_err());
    }

    #[test]
    fn worth_reproduces_definition_and_bradley_terry() {
        let grid = interior_grid(19);
        for c in [0.5, 1.0, 3.7] {
            for &a in &grid {
                let qa = log5_worth(p(a), c).unwrap();
                assert_abs_diff_eq!(qa / (qa + c), a, epsilon = 1e-12);
                for &b in &grid {
                    let qb = log5_worth(p(b), c).unwrap();
                    let bt = qa / (qa + qb);
                    assert_abs_diff_eq!(bt, james_p(p(a), p(b)).unwrap().value(), epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn partials_at_center() {
        let d = james_partials(Prob::HALF, Prob::HALF).unwrap();
        assert_abs_diff_eq!(d.dp_da, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.dp_db, -1.0, epsilon = 1e-15);
        assert!(james_partials(Prob::ZERO, Prob::HALF).is_err());
    }

    #[test]
    fn partials_match_finite_differences() {
        let h = 1e-6;
        for a in interior_grid(9) {
            for b in interior_grid(9) {
                let d = james_partials(p(a), p(b)).unwrap();
                let fd_a = (kernel(a + h, b) - kernel(a - h, b)) / (2.0 * h);
                let fd_b = (kernel(a, b + h) - kernel(a, b - h)) / (2.0 * h);
                assert_abs_diff_eq!(d.dp_da, fd_a, epsilon = 1e-6);
                assert_abs_diff_eq!(d.dp_db, fd_b, epsilon = 1e-6);
                assert!(d.dp_da > 0.0 && d.dp_db < 0.0);
            }
        }
    }

    #[test]
    fn dp_da_is_largest_on_the_diagonal() {
        for a in interior_grid(9) {
            let at_diag = james_partials(p(a), p(a)).unwrap().dp_da;
            for b in interior_grid(99) {
                assert!(james_partials(p(a), p(b)).unwrap().dp_da <= at_diag + 1e-12);
            }
        }
    }

    #[test]
    fn second_partials() {
        let s = james_second_partials(Prob::HALF, Prob::HALF).unwrap();
        assert_eq!((s.d2p_da2, s.d2p_db2, s.d2p_dadb), (0.0, 0.0, 0.0));
        assert!(james_second_partials(p(0.7), p(0.3)).unwrap().d2p_dadb > 0.0);
        assert!(james_second_partials(p(0.3), p(0.7)).unwrap().d2p_dadb < 0.0);

        let h = 1e-4;
        for a in interior_grid(9) {
            for b in interior_grid(9) {
                let s = james_second_partials(p(a), p(b)).unwrap();
                let f = kernel;
                let faa = (f(a + h, b) - 2.0 * f(a, b) + f(a - h, b)) / (h * h);
                let fbb = (f(a, b + h) - 2.0 * f(a, b) + f(a, b - h)) / (h * h);
                let fab = (f(a + h, b + h) - f(a + h, b - h) - f(a - h, b + h) + f(a - h, b - h))
                    / (4.0 * h * h);
                assert_abs_diff_eq!(s.d2p_da2, faa, epsilon = 1e-4);
                assert_abs_diff_eq!(s.d2p_db2, fbb, epsilon = 1e-4);
                assert_abs_diff_eq!(s.d2p_dadb, fab, epsilon = 1e-4);
            }
        }
    }

    #[test]
    fn concavity_in_a_follows_b() {
        for a in interior_grid(19) {
            for b in interior_grid(19) {
                let s = james_second_partials(p(a), p(b)).unwrap().d2p_da2;
                if b > 0.5 {
                    assert!(s > 0.0);
                } else if b < 0.5 {
                    assert!(s < 0.0);
                }
            }
        }
    }

    #[test]
    fn gradient_direction() {
        for a in interior_grid(9) {
            let [x, y] = james_gradient_direction(p(a), p(a)).unwrap();
            assert!(x > 0.0);
            assert_abs_diff_eq!(x, -y, epsilon = 1e-15);
            let [x, y] = james_gradient_direction(p(a), p(1.0 - a)).unwrap();
            assert_abs_diff_eq!(x, -y, epsilon = 1e-15);
        }
        // edges that are not corners are fine
        assert!(james_gradient_direction(Prob::ZERO, Prob::HALF).is_ok());
        for (a, b) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
            assert!(james_gradient_direction(p(a), p(b)).is_err());
        }
        for a in interior_grid(9) {
            for b in interior_grid(9) {
                let d = james_partials(p(a), p(b)).unwrap();
                let [x, y] = james_gradient_direction(p(a), p(b)).unwrap();
                let (ra, rb) = (d.dp_da / x, d.dp_db / y);
                assert!(ra > 0.0);
                assert_abs_diff_eq!(ra, rb, epsilon = 1e-10 * ra.max(1.0));
            }
        }
    }

    #[test]
    fn involution_examples() {
        let c = james_involution_partner(p(1.0 / 3.0), p(0.25)).unwrap();
        assert_abs_diff_eq!(c.value(), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(
            james_p(p(1.0 / 3.0), p(0.6)).unwrap().value(),
            0.25,
            epsilon = 1e-12
        );
        let c = james_involution_partner(p(0.3), Prob::HALF).unwrap();
        assert_abs_diff_eq!(c.value(), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(james_p(p(0.3), c).unwrap().value(), 0.5, epsilon = 1e-12);
        assert!(james_involution_partner(Prob::ZERO, p(0.3)).is_err());
        assert!(james_involution_partner(Prob::ONE, p(0.3)).is_err());
    }

    #[test]
    fn fixed_b_involution() {
        let grid = interior_grid(19);
        for &a in &grid {
            for &b in &grid {
                let one_minus_c = james_p(p(a), p(b)).unwrap().value();
                let c = 1.0 - one_minus_c;
                let back = james_p(p(c), p(b)).unwrap().value();
                assert_abs_diff_eq!(back, 1.0 - a, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn level_curve_examples() {
        for c in interior_grid(9) {
            assert_abs_diff_eq!(
                james_level_curve(p(c), p(c)).unwrap().value(),
                0.5,
                epsilon = 1e-15
            );
        }
        for a in interior_grid(9) {
            assert_abs_diff_eq!(
                james_level_curve(p(a), Prob::HALF).unwrap().value(),
                a,
                epsilon = 1e-15
            );
        }
        assert_abs_diff_eq!(
            james_level_curve(p(0.8), p(0.75)).unwrap().value(),
            4.0 / 7.0,
            epsilon = 1e-15
        );
        for a in interior_grid(19) {
            for c in interior_grid(19) {
                let b = james_level_curve(p(a), p(c)).unwrap();
                assert_abs_diff_eq!(james_p(p(a), b).unwrap().value(), c, epsilon = 1e-12);
            }
        }
        assert!(james_level_curve(Prob::ZERO, Prob::HALF).is_err());
        assert!(james_level_curve(Prob::HALF, Prob::ONE).is_err());
    }
}
