//! Tabulated `g_n` for bulk level-curve sampling.
//!
//! Values are stored on Chebyshev-spaced nodes, which crowd toward the
//! singular endpoints. The table holds `g_n(a)·(a(1-a))^(n-1)`, which stays
//! bounded near the endpoints, and interpolates it with local cubics.

use rayon::prelude::*;

use super::power_g;

pub const CACHE_NODES: usize = 4097;

#[derive(Debug)]
pub(crate) struct PowerCache {
    n: f64,
    nodes: Vec<f64>,
    scaled: Vec<f64>,
}

impl PowerCache {
    pub(crate) fn new(n: f64, tol: f64) -> Self {
        let count = CACHE_NODES;
        let nodes: Vec<f64> = (0..count)
            .map(|k| {
                let theta = std::f64::consts::PI * (k as f64 + 0.5) / count as f64;
                0.5 * (1.0 - theta.cos())
            })
            .collect();
        let scaled = nodes
            .par_iter()
            .map(|&a| power_g(n, a, tol) * scale(n, a))
            .collect();
        PowerCache { n, nodes, scaled }
    }

    /// Interpolated `g_n(a)`, or `None` outside the tabulated range.
    pub(crate) fn g(&self, a: f64) -> Option<f64> {
        let first = self.nodes[0];
        let last = self.nodes[self.nodes.len() - 1];
        if !(first..=last).contains(&a) {
            return None;
        }
        let idx = self.nodes.partition_point(|&x| x <= a);
        // four nodes around a: idx-2 .. idx+1, shifted to stay in range
        let start = idx.saturating_sub(2).min(self.nodes.len() - 4);
        let xs = &self.nodes[start..start + 4];
        let ys = &self.scaled[start..start + 4];
        let mut w = 0.0;
        for i in 0..4 {
            let mut basis = 1.0;
            for j in 0..4 {
                if i != j {
                    basis *= (a - xs[j]) / (xs[i] - xs[j]);
                }
            }
            w += ys[i] * basis;
        }
        Some(w / scale(self.n, a))
    }
}

#[inline]
fn scale(n: f64, a: f64) -> f64 {
    (a * (1.0 - a)).powf(n - 1.0)
}
