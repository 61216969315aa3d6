//! Involutive Jamesian functions `J(a,b) = g⁻¹(g(a) − g(b))` built from a
//! generator `g`.
//!
//! A generator is a continuous, strictly increasing map `(0,1) → ℝ` with
//! `g(1−a) = −g(a)` that diverges to `−∞` at 0. Built-ins:
//!
//! | id         | `g(a)`                          | inverse                 |
//! |------------|---------------------------------|-------------------------|
//! | `logit`    | `log(a/(1−a))`                  | logistic                |
//! | `rational` | `(2a−1)/(a(1−a))`               | closed form             |
//! | `cot`      | `−cot(πa)`                      | `½ + atan(s)/π`         |
//! | `probit`   | `Φ⁻¹(a)`                        | `Φ`                     |
//! | `power:n`  | `∫_{1/2}^{a} (t(1−t))^{−n} dt`  | numerical               |
//!
//! `logit` reproduces the James function; `power:n` with `n > 1` gives the
//! hyper-James family.

mod cache;
pub mod normal;
pub mod quad;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::domain::{require_interior, Prob};
use crate::error::{Error, Result};
use crate::model::JamesianModel;
use crate::verify::{ConditionList, ConditionReport, Violation};

use cache::PowerCache;
pub use cache::CACHE_NODES;

/// Absolute tolerance for the `g_n` quadrature.
pub const QUAD_TOL: f64 = 1e-10;
/// Recursion cap for the adaptive quadrature.
pub const QUAD_MAX_DEPTH: u32 = 60;
/// Relative residual tolerance used when a model inverts its generator.
pub const INVERSION_TOL: f64 = 1e-12;
/// Bracket expansion never goes closer to 0 or 1 than this.
pub const INVERSION_CLAMP: f64 = 1e-15;

const MAX_INVERSION_ITERS: usize = 200;

/// Exponent `n >= 1` of the power family `g_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerFamilyParam(f64);

impl PowerFamilyParam {
    pub fn new(n: f64) -> Result<Self> {
        if n.is_finite() && n >= 1.0 {
            Ok(PowerFamilyParam(n))
        } else {
            Err(Error::Param(format!(
                "power-family exponent must be a finite real >= 1, got {n}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Identifies a built-in generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorId {
    Logit,
    Rational,
    Cot,
    Probit,
    Power(f64),
}

impl FromStr for GeneratorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logit" => Ok(GeneratorId::Logit),
            "rational" => Ok(GeneratorId::Rational),
            "cot" => Ok(GeneratorId::Cot),
            "probit" => Ok(GeneratorId::Probit),
            other => match other.strip_prefix("power:") {
                Some(n) => n
                    .parse::<f64>()
                    .map(GeneratorId::Power)
                    .map_err(|_| Error::Param(format!("bad power exponent `{n}`"))),
                None => Err(Error::Param(format!("unknown generator `{other}`"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvaluationMode {
    ClosedForm,
    Quadrature,
}

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Logit,
    Rational,
    Cot,
    Probit,
    Power {
        param: PowerFamilyParam,
        cache: Option<Arc<PowerCache>>,
    },
    Custom {
        g: ScalarFn,
        inverse: Option<ScalarFn>,
        derivative: Option<ScalarFn>,
    },
}

/// A generator together with whatever closed forms are known for it.
#[derive(Clone)]
pub struct Generator {
    name: String,
    kind: Kind,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("name", &self.name)
            .field("mode", &self.evaluation_mode())
            .field("closed_inverse", &self.has_closed_inverse())
            .field("derivative", &self.has_derivative())
            .finish()
    }
}

/// Looks up a built-in generator.
pub fn builtin_generator(id: GeneratorId) -> Result<Generator> {
    Ok(match id {
        GeneratorId::Logit => Generator::logit(),
        GeneratorId::Rational => Generator::rational(),
        GeneratorId::Cot => Generator::cot(),
        GeneratorId::Probit => Generator::probit(),
        GeneratorId::Power(n) => Generator::power(PowerFamilyParam::new(n)?),
    })
}

impl Generator {
    pub fn logit() -> Self {
        Generator {
            name: "logit".into(),
            kind: Kind::Logit,
        }
    }

    pub fn rational() -> Self {
        Generator {
            name: "rational".into(),
            kind: Kind::Rational,
        }
    }

    pub fn cot() -> Self {
        Generator {
            name: "cot".into(),
            kind: Kind::Cot,
        }
    }

    pub fn probit() -> Self {
        Generator {
            name: "probit".into(),
            kind: Kind::Probit,
        }
    }

    /// `g_n`, evaluated by quadrature and inverted numerically.
    pub fn power(param: PowerFamilyParam) -> Self {
        Generator {
            name: format!("power:{}", param.value()),
            kind: Kind::Power { param, cache: None },
        }
    }

    /// A user-supplied generator. Attach an inverse or derivative with
    /// [`with_inverse`](Self::with_inverse) / [`with_derivative`](Self::with_derivative).
    pub fn custom<F>(name: impl Into<String>, g: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Generator {
            name: name.into(),
            kind: Kind::Custom {
                g: Arc::new(g),
                inverse: None,
                derivative: None,
            },
        }
    }

    pub fn with_inverse<F>(mut self, inv: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if let Kind::Custom { inverse, .. } = &mut self.kind {
            *inverse = Some(Arc::new(inv));
        }
        self
    }

    pub fn with_derivative<F>(mut self, d: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if let Kind::Custom { derivative, .. } = &mut self.kind {
            *derivative = Some(Arc::new(d));
        }
        self
    }

    /// Tabulates `g_n` on a Chebyshev grid for bulk plotting workloads.
    /// Accuracy drops to roughly 1e-7 relative, so models built from the
    /// result are for drawing curves, not for audits. No-op for closed-form
    /// generators.
    pub fn with_bulk_cache(mut self) -> Self {
        if let Kind::Power { param, cache } = &mut self.kind {
            *cache = Some(Arc::new(PowerCache::new(param.value(), QUAD_TOL)));
            self.name = format!("{}+cache", self.name);
        }
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn power_param(&self) -> Option<PowerFamilyParam> {
        match self.kind {
            Kind::Power { param, .. } => Some(param),
            _ => None,
        }
    }

    pub fn evaluation_mode(&self) -> EvaluationMode {
        match self.kind {
            Kind::Power { .. } => EvaluationMode::Quadrature,
            _ => EvaluationMode::ClosedForm,
        }
    }

    pub fn has_closed_inverse(&self) -> bool {
        match &self.kind {
            Kind::Power { .. } => false,
            Kind::Custom { inverse, .. } => inverse.is_some(),
            _ => true,
        }
    }

    pub fn has_derivative(&self) -> bool {
        match &self.kind {
            Kind::Custom { derivative, .. } => derivative.is_some(),
            _ => true,
        }
    }

    /// `g(a)` for `0 < a < 1`.
    pub fn g(&self, a: f64) -> f64 {
        match &self.kind {
            Kind::Logit => a.ln() - (-a).ln_1p(),
            Kind::Rational => (2.0 * a - 1.0) / (a * (1.0 - a)),
            // −cot(πa) = tan(π(a − 1/2)); odd about 1/2 by construction
            Kind::Cot => (PI * (a - 0.5)).tan(),
            Kind::Probit => normal::norm_ppf(a),
            Kind::Power { param, cache } => cache
                .as_ref()
                .and_then(|c| c.g(a))
                .unwrap_or_else(|| power_g(param.value(), a, QUAD_TOL)),
            Kind::Custom { g, .. } => g(a),
        }
    }

    /// `g'(a)` when known in closed form.
    pub fn g_prime(&self, a: f64) -> Option<f64> {
        let u = a * (1.0 - a);
        match &self.kind {
            Kind::Logit => Some(1.0 / u),
            Kind::Rational => Some((2.0 * a * a - 2.0 * a + 1.0) / (u * u)),
            Kind::Cot => {
                let s = (PI * a).sin();
                Some(PI / (s * s))
            }
            Kind::Probit => Some(1.0 / normal::norm_pdf(normal::norm_ppf(a))),
            Kind::Power { param, .. } => Some(u.powf(-param.value())),
            Kind::Custom { derivative, .. } => derivative.as_ref().map(|d| d(a)),
        }
    }

    /// `g⁻¹(s)` when known in closed form.
    pub fn closed_inverse(&self, s: f64) -> Option<f64> {
        match &self.kind {
            Kind::Logit => Some(if s >= 0.0 {
                1.0 / (1.0 + (-s).exp())
            } else {
                let e = s.exp();
                e / (1.0 + e)
            }),
            // (s − 2 + √(s²+4)) / (2s), rearranged to avoid cancellation
            Kind::Rational => {
                let r = (s * s + 4.0).sqrt();
                Some(if s < 0.0 {
                    2.0 / (2.0 - s + r)
                } else {
                    1.0 - 2.0 / (2.0 + s + r)
                })
            }
            // (1/π)·arccot(−s) with arccot valued in (0, π)
            Kind::Cot => Some(0.5 + s.atan() / PI),
            Kind::Probit => Some(normal::norm_cdf(s)),
            Kind::Power { .. } => None,
            Kind::Custom { inverse, .. } => inverse.as_ref().map(|f| f(s)),
        }
    }

    /// `g⁻¹(s)`, numerically when no closed form exists.
    pub fn inverse(&self, s: f64) -> Result<f64> {
        invert_monotone(self, s, INVERSION_TOL).map(Prob::value)
    }

    /// Interior kernel of the generated Jamesian function.
    pub(crate) fn jamesian(&self, a: f64, b: f64) -> Result<f64> {
        self.inverse(self.g(a) - self.g(b))
    }

    pub(crate) fn jamesian_gradient(&self, a: f64, b: f64) -> Result<[f64; 2]> {
        let (Some(ga), Some(gb)) = (self.g_prime(a), self.g_prime(b)) else {
            return Err(Error::GradientUnavailable(self.name.clone()));
        };
        let j = self.jamesian(a, b)?;
        let gj = self
            .g_prime(j)
            .ok_or_else(|| Error::GradientUnavailable(self.name.clone()))?;
        Ok([ga / gj, -gb / gj])
    }
}

/// `g_n(a) = ∫_{1/2}^{a} (t(1−t))^{−n} dt`, no argument checks.
pub(crate) fn power_g(n: f64, a: f64, tol: f64) -> f64 {
    quad::adaptive_simpson(|t| (t * (1.0 - t)).powf(-n), 0.5, a, tol, QUAD_MAX_DEPTH)
}

/// `g_n(a)` by adaptive Simpson quadrature to absolute tolerance `tol`.
/// Negative for `a < 1/2`.
pub fn eval_g_power(n: f64, a: Prob, tol: f64) -> Result<f64> {
    let param = PowerFamilyParam::new(n)?;
    if !a.is_interior() {
        return Err(Error::domain(format!(
            "g_n diverges at the endpoints, got a = {a}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Param(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    Ok(power_g(param.value(), a.value(), tol))
}

/// Finds `a` with `|g(a) − s| <= tol·max(1, |s|)`.
///
/// Uses the closed-form inverse when the generator has one. Otherwise the
/// bracket `[1/2, 1/2]` is widened toward the endpoint on the side of `s`,
/// halving the remaining gap each time down to [`INVERSION_CLAMP`], then
/// narrowed by bisection with Newton steps whenever `g'` is available and
/// the step stays inside the bracket.
pub fn invert_monotone(gen: &Generator, s: f64, tol: f64) -> Result<Prob> {
    if s.is_nan() {
        return Err(Error::domain("cannot invert NaN"));
    }
    if !(tol > 0.0) {
        return Err(Error::Param(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if let Some(a) = gen.closed_inverse(s) {
        return Prob::new(a);
    }
    if s.is_infinite() {
        return Err(Error::Convergence(format!("g⁻¹({s}) lies outside (0, 1)")));
    }

    let target = tol * s.abs().max(1.0);
    let f = |a: f64| gen.g(a) - s;

    let f_mid = f(0.5);
    if f_mid.abs() <= target {
        return Prob::new(0.5);
    }

    // Bracket: f(lo) < 0 < f(hi).
    let (mut lo, mut hi);
    if f_mid < 0.0 {
        lo = 0.5;
        let mut gap = 0.5_f64;
        loop {
            gap *= 0.5;
            let cand = (1.0 - gap).min(1.0 - INVERSION_CLAMP);
            let fc = f(cand);
            if fc.abs() <= target {
                return Prob::new(cand);
            }
            if fc > 0.0 {
                hi = cand;
                break;
            }
            lo = cand;
            if gap <= INVERSION_CLAMP {
                return Err(no_bracket(gen, s));
            }
        }
    } else {
        hi = 0.5;
        let mut gap = 0.5_f64;
        loop {
            gap *= 0.5;
            let cand = gap.max(INVERSION_CLAMP);
            let fc = f(cand);
            if fc.abs() <= target {
                return Prob::new(cand);
            }
            if fc < 0.0 {
                lo = cand;
                break;
            }
            hi = cand;
            if gap <= INVERSION_CLAMP {
                return Err(no_bracket(gen, s));
            }
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_INVERSION_ITERS {
        let fx = f(x);
        if fx.abs() <= target {
            return Prob::new(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // adjacent floats: nothing finer is representable
            return Prob::new(x);
        }
        x = match gen.g_prime(x) {
            Some(d) if d > 0.0 => {
                let newton = x - fx / d;
                if newton > lo && newton < hi {
                    newton
                } else {
                    mid
                }
            }
            _ => mid,
        };
    }
    Err(Error::Convergence(format!(
        "inverting {} at s = {s} did not converge in {MAX_INVERSION_ITERS} iterations",
        gen.name()
    )))
}

fn no_bracket(gen: &Generator, s: f64) -> Error {
    Error::Convergence(format!(
        "cannot bracket g⁻¹({s}) for {} within [{INVERSION_CLAMP}, 1 − {INVERSION_CLAMP}]",
        gen.name()
    ))
}

/// Builds the involutive Jamesian function of `gen` after auditing the
/// generator with [`generator_selfcheck`].
pub fn jamesian_from_generator(gen: Generator) -> Result<JamesianModel> {
    let report = generator_selfcheck(&gen, 99, 1e-8)?;
    if !report.passed() {
        let first = &report.violations[0];
        return Err(Error::Param(format!(
            "generator {} fails self-check: {} violation(s), first `{}` at a = {}",
            gen.name(),
            report.violations.len(),
            first.condition,
            first.a
        )));
    }
    Ok(JamesianModel::from_generator_unchecked(gen))
}

/// Audits the generator requirements on `gridsize` interior points
/// `k/(gridsize+1)`.
///
/// Checks strict monotonicity, odd symmetry, `g(1/2) = 0`, the inverse
/// round trip, `g'` against finite differences when `g'` is known, and a
/// divergence proxy: `g` must keep dropping by at least 1 over each of the
/// steps `1e-4 → 1e-8 → 1e-16`, which a bounded function cannot do.
pub fn generator_selfcheck(gen: &Generator, gridsize: usize, tol: f64) -> Result<ConditionReport> {
    if gridsize < 3 {
        return Err(Error::Param(format!(
            "gridsize must be at least 3, got {gridsize}"
        )));
    }
    let mut violations = Vec::new();
    let mut flag = |condition: &str, a: f64, magnitude: f64| {
        violations.push(Violation::new(condition, a, None, magnitude));
    };

    let grid: Vec<f64> = (1..=gridsize)
        .map(|k| k as f64 / (gridsize + 1) as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&a| gen.g(a)).collect();

    for i in 0..grid.len() {
        let (a, ga) = (grid[i], values[i]);
        if !ga.is_finite() {
            flag("finite", a, ga);
            continue;
        }
        if i + 1 < grid.len() && values[i + 1] <= ga {
            flag("monotone", a, ga - values[i + 1]);
        }
        let odd = (gen.g(1.0 - a) + ga).abs();
        if odd > tol * ga.abs().max(1.0) {
            flag("odd-symmetry", a, odd);
        }
        match invert_monotone(gen, ga, INVERSION_TOL) {
            Ok(back) => {
                let err = (back.value() - a).abs();
                if err > tol {
                    flag("round-trip", a, err);
                }
            }
            // inversion failed outright: report the largest possible error
            Err(_) => flag("round-trip", a, 1.0),
        }
        if let Some(d) = gen.g_prime(a) {
            let fd = five_point_derivative(|x| gen.g(x), a, 1e-4 * a.min(1.0 - a));
            let rel = (d - fd).abs() / d.abs().max(1.0);
            if !(rel <= 1e-5) {
                flag("derivative", a, rel);
            }
        }
    }

    let center = gen.g(0.5).abs();
    if center > tol {
        flag("center", 0.5, center);
    }

    let probes = [1e-4, 1e-8, 1e-16];
    for w in probes.windows(2) {
        let drop = gen.g(w[0]) - gen.g(w[1]);
        if !(drop >= 1.0) {
            flag("divergence", w[1], drop);
        }
    }

    Ok(ConditionReport {
        model_name: gen.name().to_string(),
        condition_list: ConditionList::GeneratorSelfcheck,
        grid_mesh: 1.0 / (gridsize + 1) as f64,
        tolerance: tol,
        violations,
    })
}

fn five_point_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Explicit formula for the hyper-James function `H_{3/2}`:
///
/// `1/2 + (v'√u − u'√v) / (2√(u + v − 4uv − 2u'v'√(uv)))`
///
/// with `u = a(1−a)`, `v = b(1−b)`, `u' = 1−2a`, `v' = 1−2b`.
pub fn h32_closed_form(a: Prob, b: Prob) -> Result<Prob> {
    let (a, b) = (a.value(), b.value());
    require_interior(a, b, "h32_closed_form")?;
    let u = a * (1.0 - a);
    let v = b * (1.0 - b);
    let du = 1.0 - 2.0 * a;
    let dv = 1.0 - 2.0 * b;
    let num = dv * u.sqrt() - du * v.sqrt();
    let den = 2.0 * (u + v - 4.0 * u * v - 2.0 * du * dv * (u * v).sqrt()).sqrt();
    Prob::new(0.5 + num / den)
}

/// Gradient `⟨g'(a)/g'(J), −g'(b)/g'(J)⟩` of the generated function.
pub fn generator_gradient(gen: &Generator, a: Prob, b: Prob) -> Result<[f64; 2]> {
    if !gen.has_derivative() {
        return Err(Error::domain(format!(
            "generator {} has no closed-form derivative",
            gen.name()
        )));
    }
    require_interior(a.value(), b.value(), "generator_gradient")?;
    gen.jamesian_gradient(a.value(), b.value())
}
