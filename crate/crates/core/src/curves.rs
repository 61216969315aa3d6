//! Level curves and gradient fields as point data.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::Prob;
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::model::JamesianModel;

/// Distance kept from the edges of the square in all curve work.
pub const CURVE_MARGIN: f64 = 1e-3;
/// Default RK4 step.
pub const DEFAULT_STEP: f64 = 1e-3;
/// The integrated `b` must stay inside `(B_GUARD, 1 − B_GUARD)`.
pub const B_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveMethod {
    ClosedForm,
    Ode,
}

impl fmt::Display for CurveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveMethod::ClosedForm => "closed-form",
            CurveMethod::Ode => "ode",
        })
    }
}

/// Points `(a, b)` on the curve `J(a, b) = level_c`, `a` strictly
/// increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSamples {
    pub level_c: f64,
    pub points: Vec<(f64, f64)>,
    pub method: CurveMethod,
}

impl CurveSamples {
    /// Largest `|b − reference(a)|` over the samples.
    pub fn max_deviation<F>(&self, reference: F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let mut worst = 0.0_f64;
        for &(a, b) in &self.points {
            worst = worst.max((b - reference(a)?).abs());
        }
        Ok(worst)
    }
}

/// `n` points of the level curve `c`, with `a` uniform on
/// `[δ, 1 − δ]`, `δ = 1e-3`.
pub fn sample_level_curve(model: &JamesianModel, c: Prob, n: usize) -> Result<CurveSamples> {
    if !c.is_interior() {
        return Err(Error::domain(format!(
            "level must satisfy 0 < c < 1, got {c}"
        )));
    }
    if n < 2 {
        return Err(Error::Param(format!("need at least 2 samples, got {n}")));
    }
    let span = 1.0 - 2.0 * CURVE_MARGIN;
    let points = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = CURVE_MARGIN + span * i as f64 / (n - 1) as f64;
            model.level_curve_point(a, c.value()).map(|b| (a, b))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveSamples {
        level_c: c.value(),
        points,
        method: CurveMethod::ClosedForm,
    })
}

fn slope(gen: &Generator, a: f64, b: f64) -> Result<f64> {
    match (gen.g_prime(a), gen.g_prime(b)) {
        (Some(ga), Some(gb)) => Ok(ga / gb),
        _ => Err(Error::domain(format!(
            "generator {} has no closed-form derivative",
            gen.name()
        ))),
    }
}

fn guard(a: f64, b: f64) -> Result<()> {
    if b > B_GUARD && b < 1.0 - B_GUARD {
        Ok(())
    } else {
        Err(Error::Step { a, b })
    }
}

fn rk4_step(gen: &Generator, a: f64, b: f64, h: f64) -> Result<f64> {
    let k1 = slope(gen, a, b)?;
    let b2 = b + 0.5 * h * k1;
    guard(a + 0.5 * h, b2)?;
    let k2 = slope(gen, a + 0.5 * h, b2)?;
    let b3 = b + 0.5 * h * k2;
    guard(a + 0.5 * h, b3)?;
    let k3 = slope(gen, a + 0.5 * h, b3)?;
    let b4 = b + h * k3;
    guard(a + h, b4)?;
    let k4 = slope(gen, a + h, b4)?;
    let next = b + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    guard(a + h, next)?;
    Ok(next)
}

/// Marches from `(c, 1/2)` to `end` with fixed steps of `step` (signed)
/// and a final partial step; returns the visited points, start excluded.
fn march(gen: &Generator, c: f64, end: f64, step: f64) -> Result<Vec<(f64, f64)>> {
    let len = (end - c).abs();
    let full = (len / step.abs()).floor() as usize;
    let mut out = Vec::with_capacity(full + 1);
    let (mut a, mut b) = (c, 0.5);
    for k in 1..=full {
        let next_a = c + k as f64 * step;
        b = rk4_step(gen, a, b, next_a - a)?;
        a = next_a;
        out.push((a, b));
    }
    let rest = end - a;
    if rest.abs() > 1e-12 * step.abs() {
        b = rk4_step(gen, a, b, rest)?;
        out.push((end, b));
    } else if let Some(last) = out.last_mut() {
        // rounding in `c + k·step`; pin the endpoint exactly
        last.0 = end;
    }
    Ok(out)
}

/// Integrates `db/da = g'(a)/g'(b)` through `(c, 1/2)` with classical RK4,
/// both ways from `c` across `a_range`.
pub fn integrate_level_curve_ode(
    gen: &Generator,
    c: Prob,
    a_range: (f64, f64),
    step: f64,
) -> Result<CurveSamples> {
    let c = c.value();
    let (lo, hi) = a_range;
    if !gen.has_derivative() {
        return Err(Error::domain(format!(
            "generator {} has no closed-form derivative",
            gen.name()
        )));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::domain(format!(
            "level must satisfy 0 < c < 1, got {c}"
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Param(format!("step must be positive, got {step}")));
    }
    if !(lo >= CURVE_MARGIN && hi <= 1.0 - CURVE_MARGIN && lo <= c && c <= hi) {
        return Err(Error::domain(format!(
            "a-range [{lo}, {hi}] must lie in [{CURVE_MARGIN}, {}] and contain c = {c}",
            1.0 - CURVE_MARGIN
        )));
    }
    let (left, right) = rayon::join(|| march(gen, c, lo, -step), || march(gen, c, hi, step));
    let mut points = left?;
    points.reverse();
    points.push((c, 0.5));
    points.extend(right?);
    Ok(CurveSamples {
        level_c: c,
        points,
        method: CurveMethod::Ode,
    })
}

/// One sample of a gradient field: position and unit direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub a: f64,
    pub b: f64,
    pub ga: f64,
    pub gb: f64,
}

/// Unit gradient directions on the interior mesh points `(i·mesh, j·mesh)`.
pub fn sample_gradient_field(model: &JamesianModel, mesh: f64) -> Result<Vec<FieldSample>> {
    if !model.has_gradient() {
        return Err(Error::GradientUnavailable(model.name().to_string()));
    }
    if !(mesh > 0.0 && mesh < 0.5) {
        return Err(Error::Param(format!(
            "mesh must lie in (0, 1/2), got {mesh}"
        )));
    }
    let k = (1.0 / mesh).round() as usize;
    let coords: Vec<f64> = (1..)
        .map(|i| i as f64 * mesh)
        .take_while(|&x| x < 1.0 - 0.5 * mesh)
        .take(k)
        .collect();
    coords
        .par_iter()
        .flat_map_iter(|&a| coords.iter().map(move |&b| (a, b)))
        .map(|(a, b)| {
            let [ga, gb] = model.gradient(a, b)?;
            let norm = ga.hypot(gb);
            Ok(FieldSample {
                a,
                b,
                ga: ga / norm,
                gb: gb / norm,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{jamesian_from_generator, PowerFamilyParam};
    use crate::james::{kernel, level_curve_slope};
    use crate::piecewise::level_curve_raw;
    use approx::assert_abs_diff_eq;

    fn p(x: f64) -> Prob {
        Prob::new(x).unwrap()
    }

    #[test]
    fn james_curve_passes_through_c_half() {
        let s = sample_level_curve(&JamesianModel::james(), p(0.75), 3).unwrap();
        let (a, b) = s.points[1];
        assert_abs_diff_eq!(a, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b, kernel(0.5, 0.75), epsilon = 1e-15);
        // the point (c, 1/2) itself
        let m = JamesianModel::james();
        assert_abs_diff_eq!(
            m.level_curve_point(0.75, 0.75).unwrap(),
            0.5,
            epsilon = 1e-15
        );
    }

    #[test]
    fn half_level_is_the_diagonal() {
        let models = [
            JamesianModel::james(),
            JamesianModel::piecewise(),
            jamesian_from_generator(Generator::probit()).unwrap(),
        ];
        for m in &models {
            let s = sample_level_curve(m, p(0.5), 21).unwrap();
            for (a, b) in s.points {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn piecewise_curve_matches_family() {
        let s = sample_level_curve(&JamesianModel::piecewise(), p(0.25), 51).unwrap();
        for (a, b) in s.points {
            assert_abs_diff_eq!(b, level_curve_raw(0.25, a), epsilon = 1e-12);
            assert_abs_diff_eq!(
                JamesianModel::piecewise().value(a, b).unwrap(),
                0.25,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn curves_are_consistent_and_ordered() {
        let m = JamesianModel::james();
        let lo = sample_level_curve(&m, p(0.3), 41).unwrap();
        let hi = sample_level_curve(&m, p(0.7), 41).unwrap();
        for (x, y) in lo.points.iter().zip(&hi.points) {
            assert_eq!(x.0, y.0);
            assert!(x.1 > y.1);
            assert_abs_diff_eq!(m.value(x.0, x.1).unwrap(), 0.3, epsilon = 1e-8);
        }
        assert!(lo.points.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn ode_matches_closed_form_with_fourth_order_convergence() {
        let gen = Generator::logit();
        let oracle = |a: f64| Ok(kernel(a, 0.75));
        let coarse = integrate_level_curve_ode(&gen, p(0.75), (0.01, 0.99), 1e-3).unwrap();
        let fine = integrate_level_curve_ode(&gen, p(0.75), (0.01, 0.99), 5e-4).unwrap();
        let d1 = coarse.max_deviation(oracle).unwrap();
        let d2 = fine.max_deviation(oracle).unwrap();
        assert!(d1 < 1e-6, "{d1}");
        assert!(d1 / d2 >= 8.0, "{d1} / {d2}");
        assert_eq!(coarse.points.first().unwrap().0, 0.01);
        assert_eq!(coarse.points.last().unwrap().0, 0.99);
        assert!(coarse.points.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn ode_diagonal_is_invariant() {
        let s =
            integrate_level_curve_ode(&Generator::rational(), p(0.5), (0.01, 0.99), 1e-3).unwrap();
        for (a, b) in s.points {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn ode_power_generator_matches_sampled_curve() {
        let gen = Generator::power(PowerFamilyParam::new(2.0).unwrap());
        // RHS is (b(1−b)/(a(1−a)))^2
        let (a, b) = (0.3_f64, 0.6_f64);
        let rhs = ((b * (1.0 - b)) / (a * (1.0 - a))).powi(2);
        assert_abs_diff_eq!(slope(&gen, a, b).unwrap(), rhs, epsilon = 1e-12 * rhs);

        let model = jamesian_from_generator(gen.clone()).unwrap();
        let s = integrate_level_curve_ode(&gen, p(0.7), (0.2, 0.95), 1e-3).unwrap();
        for &(a, b) in s.points.iter().step_by(50) {
            assert_abs_diff_eq!(b, model.level_curve_point(a, 0.7).unwrap(), epsilon = 1e-5);
        }
    }

    #[test]
    fn ode_leaving_the_square_is_a_step_error() {
        // steep level curve for a tiny level runs into b = 0 quickly
        let gen = Generator::power(PowerFamilyParam::new(3.0).unwrap());
        let r = integrate_level_curve_ode(&gen, p(0.9), (0.001, 0.9), 0.05);
        assert!(matches!(r, Err(Error::Step { .. })), "{r:?}");
    }

    #[test]
    fn ode_rejects_bad_ranges() {
        let g = Generator::logit();
        assert!(integrate_level_curve_ode(&g, p(0.5), (0.6, 0.9), 1e-3).is_err());
        assert!(integrate_level_curve_ode(&g, p(0.5), (0.0, 0.9), 1e-3).is_err());
        assert!(integrate_level_curve_ode(&g, p(0.5), (0.1, 0.9), 0.0).is_err());
    }

    #[test]
    fn gradient_field() {
        let f = sample_gradient_field(&JamesianModel::james(), 0.1).unwrap();
        assert_eq!(f.len(), 81);
        for s in &f {
            assert_abs_diff_eq!(s.ga.hypot(s.gb), 1.0, epsilon = 1e-14);
            if (s.a - s.b).abs() < 1e-12 {
                assert_abs_diff_eq!(s.ga, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
                assert_abs_diff_eq!(s.gb, -std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-14);
            }
            // tangent (1, db/da) of the level curve through the point
            let tangent = [1.0, level_curve_slope(s.a, s.b)];
            let dot = (s.ga * tangent[0] + s.gb * tangent[1]) / tangent[0].hypot(tangent[1]);
            assert!(dot.abs() < 1e-6, "{s:?}");
        }
        assert!(sample_gradient_field(&JamesianModel::piecewise(), 0.1).is_err());
    }
}
