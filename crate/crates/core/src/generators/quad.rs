//! Adaptive Simpson quadrature.

/// Integrates `f` over `[lo, hi]` (either orientation) to absolute error
/// about `tol`, refining at most `max_depth` levels.
pub fn adaptive_simpson<F>(f: F, lo: f64, hi: f64, tol: f64, max_depth: u32) -> f64
where
    F: Fn(f64) -> f64,
{
    if lo == hi {
        return 0.0;
    }
    if hi < lo {
        return -adaptive_simpson(f, hi, lo, tol, max_depth);
    }
    let fa = f(lo);
    let fb = f(hi);
    let m = 0.5 * (lo + hi);
    let fm = f(m);
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    refine(&f, lo, hi, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn refine<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let sum = left + right;
    let delta = sum - whole;
    // Below a few ulps of the panel value further halving only chases
    // rounding noise.
    let floor = 64.0 * f64::EPSILON * sum.abs();
    if depth == 0 || delta.abs() <= 15.0 * tol.max(floor) || lm <= a || rm >= b {
        return sum + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
