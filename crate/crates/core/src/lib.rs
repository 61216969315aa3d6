//! The James (log5) matchup function and its relatives.
//!
//! `P(a, b)` is the probability that a team winning a fraction `a` of its
//! games beats a team winning a fraction `b`. Besides the closed form this
//! crate provides:
//!
//! * [`generators`]: involutive models `J(a,b) = g⁻¹(g(a) − g(b))`,
//!   including the power family `g_n`,
//! * [`piecewise`]: a Jamesian function that is not an involution,
//! * [`verify`]: grid audits, Monte Carlo simulation of the Bernoulli-pair
//!   contest and finite-difference checks,
//! * [`curves`]: level curves and gradient fields as point data.
//!
//! ```
//! use jamesian::{james_p, Prob};
//!
//! let p = james_p(Prob::new(0.6)?, Prob::new(0.4)?)?;
//! assert!((p.value() - 9.0 / 13.0).abs() < 1e-15);
//! # Ok::<(), jamesian::Error>(())
//! ```

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod curves;
pub mod domain;
pub mod error;
pub mod format;
pub mod generators;
pub mod james;
pub mod model;
pub mod piecewise;
pub mod verify;

pub use domain::{classify_boundary, BoundaryDisposition, MatchupPoint, Prob};
pub use error::{Error, ErrorClass, Result};
pub use generators::{
    builtin_generator, eval_g_power, generator_gradient, generator_selfcheck, h32_closed_form,
    invert_monotone, jamesian_from_generator, Generator, GeneratorId, PowerFamilyParam,
};
pub use james::{
    james_gradient_direction, james_involution_partner, james_level_curve, james_p, james_partials,
    james_second_partials, log5_worth, Partials, SecondPartials,
};
pub use model::{JamesianModel, Provenance};
pub use piecewise::{piecewise_j, piecewise_level_curve, region_classify, Region};
