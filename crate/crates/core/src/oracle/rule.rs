//! Composite Gauss–Legendre rules on a finite window of the standard normal.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Points per panel.
pub(crate) const ORDER: usize = 16;

/// Nodes and weights of the `ORDER`-point Gauss–Legendre rule on [−1, 1].
pub(crate) fn gauss_legendre() -> &'static [(f64, f64); ORDER] {
    static RULE: OnceLock<[(f64, f64); ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut out = [(0.0, 0.0); ORDER];
        for i in 0..n {
            // Chebyshev guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            out[i] = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out
    })
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[inline]
pub(crate) fn normal_density(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Panel edges: `panels` uniform panels on `[lo, hi]` refined at `breaks`.
pub(crate) fn edges(lo: f64, hi: f64, panels: usize, breaks: &[f64]) -> Vec<f64> {
    let h = (hi - lo) / panels as f64;
    let mut e: Vec<f64> = (0..=panels).map(|i| lo + i as f64 * h).collect();
    e.extend(breaks.iter().copied().filter(|b| *b > lo && *b < hi));
    e.sort_by(|a, b| a.total_cmp(b));
    let tiny = 1e-13 * (hi - lo);
    e.dedup_by(|a, b| (*a - *b).abs() <= tiny);
    e
}

/// Nodes and plain (unweighted) quadrature weights over the given edges.
pub(crate) fn composite(edges: &[f64]) -> Vec<(f64, f64)> {
    let gl = gauss_legendre();
    let mut out = Vec::with_capacity(ORDER * edges.len().saturating_sub(1));
    for w in edges.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let half = 0.5 * (w[1] - w[0]);
        for &(t, wt) in gl {
            out.push((mid + half * t, half * wt));
        }
    }
    out
}
