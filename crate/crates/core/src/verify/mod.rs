//! Auditing models: condition lists, Monte Carlo, identities and
//! finite-difference gradient checks.

mod conditions;
mod fd;
mod identities;
mod montecarlo;
mod report;

pub use conditions::{check_conditions, MIN_CELLS};
pub use fd::{fd_gradient_check, interior_grid, GradientCheckPoint, GradientCheckReport};
pub use identities::{algebraic_identity_checks, round_total, IdentityReport};
pub use montecarlo::{
    mc_estimate, mc_validate, z_score, McEstimate, McPointResult, McValidation, DEFAULT_MAX_ROUNDS,
};
pub use report::{ConditionList, ConditionReport, Violation};
