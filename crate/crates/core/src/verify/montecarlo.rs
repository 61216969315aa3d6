//! Monte Carlo simulation of the repeated Bernoulli-pair contest.
//!
//! Each round, A draws 1 with probability `a` and B draws 1 with
//! probability `b`. A 1 against a 0 decides the trial; equal draws are
//! redrawn. Every trial owns an independent Xoshiro256++ stream keyed by
//! `(seed, trial index)`, so results do not depend on scheduling.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{classify_boundary, BoundaryDisposition, MatchupPoint, Prob};
use crate::error::{Error, Result};
use crate::model::JamesianModel;

pub const DEFAULT_MAX_ROUNDS: u64 = 1_000_000;

/// Result of simulating `trials` contests at one matchup point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub a: f64,
    pub b: f64,
    pub trials: u64,
    pub wins: u64,
    pub estimate: f64,
    pub std_error: f64,
    pub seed: u64,
    pub ties_resampled_total: u64,
}

impl McEstimate {
    /// Fraction of all rounds that were ties.
    pub fn tie_frequency(&self) -> f64 {
        self.ties_resampled_total as f64 / (self.trials + self.ties_resampled_total) as f64
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "a: {}", self.a);
        let _ = writeln!(s, "b: {}", self.b);
        let _ = writeln!(s, "trials: {}", self.trials);
        let _ = writeln!(s, "seed: {}", self.seed);
        let _ = writeln!(s, "wins: {}", self.wins);
        let _ = writeln!(s, "estimate: {}", self.estimate);
        let _ = writeln!(s, "std_error: {}", self.std_error);
        let _ = writeln!(s, "ties_resampled_total: {}", self.ties_resampled_total);
        s
    }
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Independent stream for one trial. `seed_from_u64` runs the key through
/// SplitMix64, so neighbouring keys give unrelated states.
fn trial_rng(seed: u64, trial: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(seed ^ trial.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
}

/// Plays one trial; returns `(a_won, tied_rounds)` or `None` when the trial
/// hit `max_rounds` rounds without a decision.
fn play(a: f64, b: f64, rng: &mut Xoshiro256PlusPlus, max_rounds: u64) -> Option<(bool, u64)> {
    for round in 0..max_rounds {
        let x = rng.random::<f64>() < a;
        let y = rng.random::<f64>() < b;
        if x != y {
            return Some((x, round));
        }
    }
    None
}

#[derive(Clone, Copy)]
enum Tally {
    Ok {
        wins: u64,
        ties: u64,
    },
    /// smallest trial index that hit the round limit
    Stuck(u64),
}

fn merge(x: Tally, y: Tally) -> Tally {
    match (x, y) {
        (Tally::Ok { wins: w1, ties: t1 }, Tally::Ok { wins: w2, ties: t2 }) => Tally::Ok {
            wins: w1 + w2,
            ties: t1 + t2,
        },
        (Tally::Stuck(i), Tally::Stuck(j)) => Tally::Stuck(i.min(j)),
        (s @ Tally::Stuck(_), _) | (_, s @ Tally::Stuck(_)) => s,
    }
}

/// Estimates `p(a, b)` from `trials` simulated contests.
pub fn mc_estimate(
    a: Prob,
    b: Prob,
    trials: u64,
    seed: u64,
    max_rounds: u64,
) -> Result<McEstimate> {
    if let BoundaryDisposition::Undefined = classify_boundary(a, b) {
        return Err(Error::UndefinedMatchup {
            a: a.value(),
            b: b.value(),
        });
    }
    if trials == 0 {
        return Err(Error::Param("trials must be at least 1".into()));
    }
    if max_rounds == 0 {
        return Err(Error::Param("max_rounds must be at least 1".into()));
    }
    let (pa, pb) = (a.value(), b.value());
    let tally = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            match play(pa, pb, &mut rng, max_rounds) {
                Some((won, ties)) => Tally::Ok {
                    wins: won as u64,
                    ties,
                },
                None => Tally::Stuck(t),
            }
        })
        .reduce(|| Tally::Ok { wins: 0, ties: 0 }, merge);

    match tally {
        Tally::Stuck(trial) => Err(Error::TieLimitExceeded { trial, max_rounds }),
        Tally::Ok { wins, ties } => {
            let estimate = wins as f64 / trials as f64;
            Ok(McEstimate {
                a: pa,
                b: pb,
                trials,
                wins,
                estimate,
                std_error: (estimate * (1.0 - estimate) / trials as f64).sqrt(),
                seed,
                ties_resampled_total: ties,
            })
        }
    }
}

/// `(estimate − model) / std_error`, or `None` when the standard error is
/// zero.
pub fn z_score(estimate: &McEstimate, model_value: f64) -> Option<f64> {
    (estimate.std_error > 0.0).then(|| (estimate.estimate - model_value) / estimate.std_error)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McPointResult {
    pub a: f64,
    pub b: f64,
    pub model_value: f64,
    pub estimate: McEstimate,
    pub z: Option<f64>,
    pub flagged: bool,
}

/// Simulation versus model over a set of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McValidation {
    pub model_name: String,
    pub trials: u64,
    pub seed: u64,
    pub z_threshold: f64,
    pub points: Vec<McPointResult>,
}

impl McValidation {
    pub fn flagged_count(&self) -> usize {
        self.points.iter().filter(|p| p.flagged).count()
    }

    pub fn passed(&self) -> bool {
        self.flagged_count() == 0
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "model: {}", self.model_name);
        let _ = writeln!(s, "trials: {}", self.trials);
        let _ = writeln!(s, "seed: {}", self.seed);
        let _ = writeln!(s, "z_threshold: {}", self.z_threshold);
        for p in &self.points {
            let z = p.z.map_or_else(|| "n/a".to_string(), |z| format!("{z:.3}"));
            let _ = writeln!(
                s,
                "({}, {}): model {} estimate {} ± {} z {}{}",
                p.a,
                p.b,
                p.model_value,
                p.estimate.estimate,
                p.estimate.std_error,
                z,
                if p.flagged { " FLAGGED" } else { "" }
            );
        }
        let _ = writeln!(s, "flagged: {}", self.flagged_count());
        s
    }
}

/// Compares simulated win rates with `model` at interior `points`.
///
/// A point is flagged when `|estimate − model| > z·std_error`. Point `k`
/// uses seed `seed + k`.
pub fn mc_validate(
    model: &JamesianModel,
    points: &[MatchupPoint],
    trials: u64,
    seed: u64,
    z: f64,
) -> Result<McValidation> {
    let mut results = Vec::with_capacity(points.len());
    for (k, pt) in points.iter().enumerate() {
        if !(pt.a.is_interior() && pt.b.is_interior()) {
            return Err(Error::domain(format!(
                "Monte Carlo validation needs interior points, got ({}, {})",
                pt.a, pt.b
            )));
        }
        let model_value = model.evaluate(pt.a, pt.b)?.value();
        let est = mc_estimate(
            pt.a,
            pt.b,
            trials,
            seed.wrapping_add(k as u64),
            DEFAULT_MAX_ROUNDS,
        )?;
        let diff = (est.estimate - model_value).abs();
        results.push(McPointResult {
            a: pt.a.value(),
            b: pt.b.value(),
            model_value,
            z: z_score(&est, model_value),
            flagged: diff > z * est.std_error,
            estimate: est,
        });
    }
    Ok(McValidation {
        model_name: model.name().to_string(),
        trials,
        seed,
        z_threshold: z,
        points: results,
    })
}
