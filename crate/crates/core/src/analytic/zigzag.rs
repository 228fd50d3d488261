//! Closed forms for triangle-wave ("zigzag") phases.
//!
//! Everything here rests on the Fourier expansion of `|cos y|` and on
//! `E[cos(kx)] = e^{-k²/2}` for a standard normal `x`. With
//! `cos(arcsin(sin y)) = |cos y|` and `sin(arcsin(sin y)) = sin y`, the factor
//! `e^{i z(x, α)}` becomes a sum of plane waves whose Gaussian averages are
//! elementary.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use super::SeriesControl;
use crate::model::{triangle, triangle_kinks};

/// Largest denominator accepted when looking for a common period of two
/// zigzag frequencies.
const MAX_PERIOD_RATIO: i64 = 4096;

#[inline]
pub(crate) fn gauss(u: f64) -> f64 {
    (-0.5 * u * u).exp()
}

/// Fourier coefficient `(-1)^n / (1 - 4n²)` of `|cos y|` (up to `4/π`).
#[inline]
pub(crate) fn abs_cos_coefficient(n: u32) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let n = n as f64;
    sign / (1.0 - 4.0 * n * n)
}

/// `E[e^{i z(x, α)} e^{iτx}]` for standard normal `x`, summed term by term.
/// Real by symmetry of the Gaussian.
pub(crate) fn local_series(alpha: f64, tau: f64, ctl: &SeriesControl) -> f64 {
    if alpha == 0.0 {
        return gauss(tau);
    }
    let mut sum = FRAC_2_PI * gauss(tau) - 0.5 * (gauss(tau - alpha) - gauss(tau + alpha));
    for n in 1..=ctl.max_terms {
        let shift = 2.0 * n as f64 * alpha;
        let term = FRAC_2_PI * abs_cos_coefficient(n) * (gauss(tau - shift) + gauss(tau + shift));
        sum += term;
        // Past the Gaussian peak the terms only shrink.
        if shift.abs() > tau.abs() && term.abs() < ctl.term_floor {
            break;
        }
    }
    sum
}

/// `E[e^{i(z(x, a) + z(x, b))} e^{isx}]` for standard normal `x`.
///
/// When `a/b` is rational the product is periodic; its Fourier coefficients
/// are integrated exactly over one period, which sums every resonant line of
/// the `(n, m)` double series at once. Otherwise the double series is
/// truncated according to `ctl`.
pub(crate) fn pair_average(a: f64, b: f64, s: f64, ctl: &SeriesControl) -> f64 {
    if a == 0.0 && b == 0.0 {
        return gauss(s);
    }
    match common_base(a, b) {
        Some(base) => periodic_average(a, b, base, s, ctl.term_floor),
        None => spectral_pair_average(a, b, s, ctl),
    }
}

/// `r > 0` with `a = p r` and `b = q r` for small integers `p`, `q`.
fn common_base(a: f64, b: f64) -> Option<f64> {
    if b == 0.0 {
        return Some(a.abs());
    }
    if a == 0.0 {
        return Some(b.abs());
    }
    let ratio = (a / b).abs();
    let (num, den) = rational_approximation(ratio, MAX_PERIOD_RATIO)?;
    let r = b.abs() / den as f64;
    let p = (a.abs() / r).round();
    if (a.abs() - p * r).abs() > 1e-12 * a.abs() || p as i64 != num || num > MAX_PERIOD_RATIO {
        return None;
    }
    Some(r)
}

/// Best rational approximation `num/den ≈ x` with `den ≤ max_den`, accepted
/// only if it matches to 1e-12 relative.
fn rational_approximation(x: f64, max_den: i64) -> Option<(i64, i64)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if ((h1 as f64 / k1 as f64) - x).abs() <= 1e-12 * x.max(1.0) {
            return Some((h1, k1));
        }
        let frac = rest - a as f64;
        if frac < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    None
}

/// One linear piece of the combined phase on `[mid - half, mid + half]`.
struct Piece {
    mid: f64,
    half: f64,
    /// Slope in units of the base frequency `r`.
    slope: i64,
    phase: f64,
}

fn periodic_average(a: f64, b: f64, r: f64, s: f64, term_floor: f64) -> f64 {
    let period = 2.0 * PI / r;
    let p = (a / r).round() as i64;
    let q = (b / r).round() as i64;

    let mut edges = vec![0.0, period];
    for c in [a, b] {
        if c != 0.0 {
            edges.extend(triangle_kinks(c, 0.0, period));
        }
    }
    edges.sort_by(|x, y| x.total_cmp(y));
    edges.dedup_by(|x, y| (*x - *y).abs() < 1e-12 * period);

    let pieces: Vec<Piece> = edges
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            let sa = if (a * mid).cos() >= 0.0 { 1 } else { -1 };
            let sb = if (b * mid).cos() >= 0.0 { 1 } else { -1 };
            Piece {
                mid,
                half: 0.5 * (w[1] - w[0]),
                slope: sa * p + sb * q,
                phase: triangle(a * mid) + triangle(b * mid),
            }
        })
        .collect();

    // The Gaussian factor bounds the contribution of every coefficient
    // (|F_k| ≤ 1), so frequencies further than `width` from −s are dropped.
    let floor = term_floor.max(1e-300).min(1e-16);
    let width = (-2.0 * floor.ln()).sqrt() + 1.0;
    let k_lo = ((-s - width) / r).ceil() as i64;
    let k_hi = ((-s + width) / r).floor() as i64;

    let mut total = Complex64::new(0.0, 0.0);
    for k in k_lo..=k_hi {
        let freq = k as f64 * r;
        let mut coef = Complex64::new(0.0, 0.0);
        for piece in &pieces {
            let lam = piece.slope - k;
            let integral = if lam == 0 {
                2.0 * piece.half
            } else {
                let lam = lam as f64 * r;
                2.0 * (lam * piece.half).sin() / lam
            };
            coef += Complex64::from_polar(integral, piece.phase - freq * piece.mid);
        }
        total += coef * gauss(freq + s);
    }
    total.re / period
}

/// Plane-wave expansion of `e^{i z(x, α)}` truncated at `n_terms` harmonics:
/// `(frequency, weight)` pairs.
fn zigzag_spectrum(alpha: f64, n_terms: u32) -> Vec<(f64, f64)> {
    if alpha == 0.0 {
        return vec![(0.0, 1.0)];
    }
    let mut out = Vec::with_capacity(2 * n_terms as usize + 3);
    out.push((0.0, FRAC_2_PI));
    out.push((alpha, 0.5));
    out.push((-alpha, -0.5));
    for n in 1..=n_terms {
        let w = FRAC_2_PI * abs_cos_coefficient(n);
        let f = 2.0 * n as f64 * alpha;
        out.push((f, w));
        out.push((-f, w));
    }
    out
}

/// Truncated double series for [`pair_average`]. The tail falls off only as
/// `max_terms⁻³` (about 1e-7 at 64 terms).
pub(crate) fn spectral_pair_average(a: f64, b: f64, s: f64, ctl: &SeriesControl) -> f64 {
    let sa = zigzag_spectrum(a, ctl.max_terms);
    let sb = zigzag_spectrum(b, ctl.max_terms);
    let mut sum = 0.0;
    for &(fa, wa) in &sa {
        for &(fb, wb) in &sb {
            sum += wa * wb * gauss(fa + fb + s);
        }
    }
    sum
}
