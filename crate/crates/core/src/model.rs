//! The model abstraction: a named matchup-probability function with uniform
//! boundary semantics.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::domain::{classify_boundary, require_interior, BoundaryDisposition, Prob};
use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::{james, piecewise};

/// Where a model's formula comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    GeneratorBased,
    Piecewise,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::GeneratorBased => "generator-based",
            Provenance::Piecewise => "piecewise",
        })
    }
}

pub type KernelFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(f64, f64) -> [f64; 2] + Send + Sync>;

#[derive(Clone)]
enum Kernel {
    James,
    Piecewise,
    Generator(Generator),
    Custom {
        value: KernelFn,
        gradient: Option<GradientFn>,
    },
}

/// A Jamesian (or candidate Jamesian) function.
///
/// Evaluation always goes through [`classify_boundary`] first; the interior
/// kernel is only called on the open unit square.
#[derive(Clone)]
pub struct JamesianModel {
    name: String,
    provenance: Provenance,
    kernel: Kernel,
}

impl fmt::Debug for JamesianModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JamesianModel")
            .field("name", &self.name)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

impl JamesianModel {
    /// The James function.
    pub fn james() -> Self {
        JamesianModel {
            name: "james".into(),
            provenance: Provenance::ClosedForm,
            kernel: Kernel::James,
        }
    }

    /// The piecewise non-involutive example built from the `j_c` curves.
    pub fn piecewise() -> Self {
        JamesianModel {
            name: "piecewise".into(),
            provenance: Provenance::Piecewise,
            kernel: Kernel::Piecewise,
        }
    }

    /// Wraps a generator without auditing it. Use
    /// [`crate::generators::jamesian_from_generator`] for the checked path.
    pub(crate) fn from_generator_unchecked(gen: Generator) -> Self {
        JamesianModel {
            name: gen.name().to_string(),
            provenance: Provenance::GeneratorBased,
            kernel: Kernel::Generator(gen),
        }
    }

    /// An arbitrary interior kernel. Useful for auditing candidate functions.
    pub fn custom<F>(name: impl Into<String>, provenance: Provenance, kernel: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        JamesianModel {
            name: name.into(),
            provenance,
            kernel: Kernel::Custom {
                value: Arc::new(kernel),
                gradient: None,
            },
        }
    }

    /// Attaches an analytic gradient to a custom model. No-op for built-ins.
    pub fn with_gradient<G>(mut self, gradient: G) -> Self
    where
        G: Fn(f64, f64) -> [f64; 2] + Send + Sync + 'static,
    {
        if let Kernel::Custom { gradient: g, .. } = &mut self.kernel {
            *g = Some(Arc::new(gradient));
        }
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn generator(&self) -> Option<&Generator> {
        match &self.kernel {
            Kernel::Generator(g) => Some(g),
            _ => None,
        }
    }

    pub fn has_gradient(&self) -> bool {
        match &self.kernel {
            Kernel::James => true,
            Kernel::Piecewise => false,
            Kernel::Generator(g) => g.has_derivative(),
            Kernel::Custom { gradient, .. } => gradient.is_some(),
        }
    }

    /// Known to satisfy `J(a, J(a,b)) = b`, so the level curve for `c` is
    /// `b = J(a, c)`.
    fn is_involutive(&self) -> bool {
        matches!(self.kernel, Kernel::James | Kernel::Generator(_))
    }

    /// Evaluates the model at a legal matchup point.
    pub fn evaluate(&self, a: Prob, b: Prob) -> Result<Prob> {
        match classify_boundary(a, b) {
            BoundaryDisposition::Undefined => Err(Error::UndefinedMatchup {
                a: a.value(),
                b: b.value(),
            }),
            BoundaryDisposition::Forced(v) => Ok(v),
            BoundaryDisposition::Interior => Prob::new(self.interior(a.value(), b.value())?),
        }
    }

    /// [`evaluate`](Self::evaluate) on raw floats.
    pub fn value(&self, a: f64, b: f64) -> Result<f64> {
        self.evaluate(Prob::new(a)?, Prob::new(b)?).map(Prob::value)
    }

    pub(crate) fn interior(&self, a: f64, b: f64) -> Result<f64> {
        match &self.kernel {
            Kernel::James => Ok(james::kernel(a, b)),
            Kernel::Piecewise => Ok(piecewise::kernel(a, b)),
            Kernel::Generator(g) => g.jamesian(a, b),
            Kernel::Custom { value, .. } => Ok(value(a, b)),
        }
    }

    /// Analytic gradient `(dJ/da, dJ/db)` at an interior point.
    pub fn gradient(&self, a: f64, b: f64) -> Result<[f64; 2]> {
        if !self.has_gradient() {
            return Err(Error::GradientUnavailable(self.name.clone()));
        }
        require_interior(a, b, "gradient")?;
        match &self.kernel {
            Kernel::James => {
                let d = james::partials_raw(a, b);
                Ok([d.dp_da, d.dp_db])
            }
            Kernel::Generator(g) => g.jamesian_gradient(a, b),
            Kernel::Custom {
                gradient: Some(grad),
                ..
            } => Ok(grad(a, b)),
            _ => Err(Error::GradientUnavailable(self.name.clone())),
        }
    }

    /// Solves `J(a, b) = c` for `b` with `0 < a, c < 1`.
    ///
    /// Involutive models answer with `J(a, c)`, the piecewise model with its
    /// explicit curve family, anything else by bisection on the decreasing
    /// map `b -> J(a, b)`.
    pub fn level_curve_point(&self, a: f64, c: f64) -> Result<f64> {
        require_interior(a, c, "level curve")?;
        if self.is_involutive() {
            return self.interior(a, c);
        }
        if let Kernel::Piecewise = self.kernel {
            return Ok(piecewise::level_curve_raw(c, a));
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.interior(a, mid)? > c {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The generator whose level-curve equation `db/da = g'(a)/g'(b)`
    /// describes this model, if there is one with a known derivative.
    pub fn ode_generator(&self) -> Option<Generator> {
        match &self.kernel {
            Kernel::James => Some(Generator::logit()),
            Kernel::Generator(g) if g.has_derivative() => Some(g.clone()),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(x: f64) -> Prob {
        Prob::new(x).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let m = JamesianModel::james();
        assert_abs_diff_eq!(
            m.evaluate(p(0.6), p(0.5)).unwrap().value(),
            0.6,
            epsilon = 1e-15
        );
        assert!(matches!(
            m.evaluate(p(1.0), p(1.0)),
            Err(Error::UndefinedMatchup { .. })
        ));
        for model in [JamesianModel::james(), JamesianModel::piecewise()] {
            assert_abs_diff_eq!(model.value(0.4, 0.4).unwrap(), 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn kernel_never_sees_the_boundary() {
        let m = JamesianModel::custom("probe", Provenance::ClosedForm, |a, b| {
            assert!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0);
            0.5
        });
        for (a, b) in [(0.0, 0.3), (1.0, 0.3), (0.3, 0.0), (0.3, 1.0), (1.0, 0.0)] {
            m.value(a, b).unwrap();
        }
        assert!(m.value(0.0, 0.0).is_err());
    }

    #[test]
    fn out_of_range_kernel_output_is_an_error() {
        let m = JamesianModel::custom("bad", Provenance::ClosedForm, |_, _| 1.5);
        assert!(matches!(
            m.value(0.3, 0.4),
            Err(Error::InvalidProbability(_))
        ));
    }

    #[test]
    fn gradient_availability() {
        assert!(JamesianModel::james().gradient(0.5, 0.5).is_ok());
        assert!(matches!(
            JamesianModel::piecewise().gradient(0.5, 0.5),
            Err(Error::GradientUnavailable(_))
        ));
        assert!(JamesianModel::james().gradient(0.0, 0.5).is_err());
        let m = JamesianModel::custom("k", Provenance::ClosedForm, |a, _| a)
            .with_gradient(|_, _| [1.0, 0.0]);
        assert_eq!(m.gradient(0.2, 0.3).unwrap(), [1.0, 0.0]);
    }

    #[test]
    fn bisection_level_curve_for_custom_models() {
        // same function as james, but opaque to the model
        let m = JamesianModel::custom("opaque-james", Provenance::ClosedForm, james::kernel);
        for (a, c) in [(0.2, 0.7), (0.9, 0.1), (0.5, 0.5)] {
            let b = m.level_curve_point(a, c).unwrap();
            assert_abs_diff_eq!(b, james::kernel(a, c), epsilon = 1e-14);
        }
    }
}
