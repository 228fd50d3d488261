//! Direct numerical integration of the decoherence functions.
//!
//! Independent of the closed forms: the frequency average is done by
//! composite Gauss–Legendre quadrature on `[−L, L]` against the normal
//! density, with panel edges placed on every kink of the phase profiles so
//! the integrand is smooth on each panel. Every value is computed twice, with
//! `n` and `2n` base panels, and rejected if the two differ by more than
//! [`CONVERGENCE_TOLERANCE`].

mod rule;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::RIDGE_TOLERANCE;
use crate::error::{Error, Result};
use crate::model::{DecoherenceSet, FrequencySpec, PhaseProfile, ScenarioConfig};

use rule::{composite, edges, normal_density};

/// Largest accepted change between the base and the doubled rule.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-9;

/// Resolution of the oracle quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControl {
    /// Uniform base panels for one-dimensional integrals.
    pub nodes_1d: usize,
    /// Uniform base panels per axis for correlated two-dimensional integrals.
    pub nodes_2d: usize,
    /// Integration window `[−L, L]` in units of σ.
    pub domain_halfwidth: f64,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        QuadratureControl {
            nodes_1d: 201,
            nodes_2d: 121,
            domain_halfwidth: 10.0,
        }
    }
}

impl QuadratureControl {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_1d < 8 || self.nodes_2d < 8 {
            return Err(Error::InvalidParameter(format!(
                "quadrature needs at least 8 panels, got {} and {}",
                self.nodes_1d, self.nodes_2d
            )));
        }
        if !(self.domain_halfwidth >= 6.0) || !self.domain_halfwidth.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "domain halfwidth must be at least 6, got {}",
                self.domain_halfwidth
            )));
        }
        Ok(())
    }

    pub fn doubled(&self) -> Self {
        QuadratureControl {
            nodes_1d: 2 * self.nodes_1d,
            nodes_2d: 2 * self.nodes_2d,
            ..*self
        }
    }
}

/// `x ↦ Σ w φ(x) e^{iψ(x)} e^{iνx}` on fixed nodes, evaluated for any `ν`.
#[derive(Debug, Clone)]
struct Transform {
    x: Vec<f64>,
    amp: Vec<Complex64>,
}

impl Transform {
    fn new(halfwidth: f64, panels: usize, breaks: &[f64], phase: impl Fn(f64) -> f64) -> Self {
        let nodes = composite(&edges(-halfwidth, halfwidth, panels, breaks));
        let (x, amp) = nodes
            .into_iter()
            .map(|(x, w)| (x, Complex64::from_polar(w * normal_density(x), phase(x))))
            .unzip();
        Transform { x, amp }
    }

    fn at(&self, nu: f64) -> Complex64 {
        self.x
            .iter()
            .zip(&self.amp)
            .map(|(&x, &a)| a * Complex64::cis(nu * x))
            .sum()
    }
}

/// A transform at base and doubled resolution.
#[derive(Debug, Clone)]
struct Checked {
    base: Transform,
    fine: Transform,
}

impl Checked {
    fn new(
        halfwidth: f64,
        panels: usize,
        breaks: &[f64],
        phase: impl Fn(f64) -> f64 + Copy,
    ) -> Self {
        Checked {
            base: Transform::new(halfwidth, panels, breaks, phase),
            fine: Transform::new(halfwidth, 2 * panels, breaks, phase),
        }
    }

    fn at(&self, nu: f64) -> (Complex64, Complex64) {
        (self.base.at(nu), self.fine.at(nu))
    }
}

fn converged(base: Complex64, fine: Complex64) -> Result<Complex64> {
    let change = (fine - base).norm();
    if change > CONVERGENCE_TOLERANCE || !change.is_finite() {
        return Err(Error::QuadratureNonConverged { change });
    }
    Ok(fine)
}

#[derive(Debug, Clone)]
enum Pair {
    /// `K = 0`: tensor-product rule, the inner integral does not depend on
    /// the outer variable.
    Independent { first: Checked, second: Checked },
    /// `|K| = 1`: one-dimensional along `x₂ = K x₁`.
    Ridge { k: f64, sum: Checked, diff: Checked },
    /// `0 < |K| < 1`.
    Correlated { k: f64 },
}

/// Oracle for one scenario with node tables prepared once and reused across
/// every `τ`.
#[derive(Debug, Clone)]
pub struct OracleEvaluator {
    eta: f64,
    phase1: PhaseProfile,
    phase2: PhaseProfile,
    q: QuadratureControl,
    local1: Checked,
    local2: Checked,
    pairs: Vec<(f64, Pair)>,
}

impl OracleEvaluator {
    pub fn new(
        freq: &FrequencySpec,
        phase1: &PhaseProfile,
        phase2: &PhaseProfile,
        q: &QuadratureControl,
    ) -> Result<Self> {
        q.validate()?;
        freq.validate()?;
        let (p1, p2) = (*phase1, *phase2);
        let l = q.domain_halfwidth;
        let kinks1 = p1.kinks(-l, l);
        let kinks2 = p2.kinks(-l, l);
        let local = |p: PhaseProfile, kinks: &[f64], panels| {
            Checked::new(l, panels, kinks, move |x| p.eval(x))
        };
        let local1 = local(p1, &kinks1, q.nodes_1d);
        let local2 = local(p2, &kinks2, q.nodes_1d);

        let mut pairs = Vec::with_capacity(freq.components.len());
        for c in &freq.components {
            let pair = if c.k == 0.0 {
                Pair::Independent {
                    first: local(p1, &kinks1, q.nodes_2d),
                    second: local(p2, &kinks2, q.nodes_2d),
                }
            } else if (c.k.abs() - 1.0).abs() <= RIDGE_TOLERANCE {
                let k = c.k.signum();
                let mut breaks = kinks1.clone();
                breaks.extend(kinks2.iter().map(|x| k * x));
                Pair::Ridge {
                    k,
                    sum: Checked::new(l, q.nodes_1d, &breaks, move |x| p1.eval(x) + p2.eval(k * x)),
                    diff: Checked::new(l, q.nodes_1d, &breaks, move |x| {
                        p1.eval(x) - p2.eval(k * x)
                    }),
                }
            } else {
                Pair::Correlated { k: c.k }
            };
            pairs.push((c.weight, pair));
        }
        Ok(OracleEvaluator {
            eta: freq.eta,
            phase1: p1,
            phase2: p2,
            q: *q,
            local1,
            local2,
            pairs,
        })
    }

    pub fn for_scenario(cfg: &ScenarioConfig, q: &QuadratureControl) -> Result<Self> {
        Self::new(&cfg.freq, &cfg.phase1, &cfg.phase2, q)
    }

    pub fn kappa1(&self, tau: f64) -> Result<Complex64> {
        self.local(&self.local1, tau)
    }

    pub fn kappa2(&self, tau: f64) -> Result<Complex64> {
        self.local(&self.local2, tau)
    }

    fn local(&self, t: &Checked, tau: f64) -> Result<Complex64> {
        let (base, fine) = t.at(tau);
        Ok(Complex64::cis(self.eta * tau) * converged(base, fine)?)
    }

    /// `(κ₁₂(τ), Λ₁₂(τ))`.
    pub fn nonlocal(&self, tau: f64) -> Result<(Complex64, Complex64)> {
        let mut kappa12 = Complex64::new(0.0, 0.0);
        let mut lambda12 = Complex64::new(0.0, 0.0);
        for (weight, pair) in &self.pairs {
            let (k12, l12) = match pair {
                Pair::Independent { first, second } => {
                    let (a0, a1) = first.at(tau);
                    let (b0, b1) = second.at(tau);
                    (
                        converged(a0 * b0, a1 * b1)?,
                        converged(a0 * b0.conj(), a1 * b1.conj())?,
                    )
                }
                Pair::Ridge { k, sum, diff } => {
                    let (s0, s1) = sum.at(tau * (1.0 + k));
                    let (d0, d1) = diff.at(tau * (1.0 - k));
                    (converged(s0, s1)?, converged(d0, d1)?)
                }
                Pair::Correlated { k } => {
                    let base = correlated(*k, &self.phase1, &self.phase2, tau, &self.q);
                    let fine = correlated(*k, &self.phase1, &self.phase2, tau, &self.q.doubled());
                    (converged(base.0, fine.0)?, converged(base.1, fine.1)?)
                }
            };
            kappa12 += weight * k12;
            lambda12 += weight * l12;
        }
        Ok((Complex64::cis(2.0 * self.eta * tau) * kappa12, lambda12))
    }

    pub fn decoherence_set(&self, tau: f64) -> Result<DecoherenceSet> {
        let (kappa12, lambda12) = self.nonlocal(tau)?;
        Ok(DecoherenceSet {
            kappa1: self.kappa1(tau)?,
            kappa2: self.kappa2(tau)?,
            kappa12,
            lambda12,
        })
    }

    /// Decoherence sets on every `τ`, evaluated in parallel.
    pub fn trace(&self, taus: &[f64]) -> Result<Vec<DecoherenceSet>> {
        taus.par_iter().map(|&t| self.decoherence_set(t)).collect()
    }
}

/// Two-dimensional integral over the bivariate normal with correlation `k`,
/// in the coordinates `x₂ = k x₁ + √(1−k²) u`. Returns the pair without the
/// `e^{2iητ}` carrier.
fn correlated(
    k: f64,
    phase1: &PhaseProfile,
    phase2: &PhaseProfile,
    tau: f64,
    q: &QuadratureControl,
) -> (Complex64, Complex64) {
    let l = q.domain_halfwidth;
    let s = (1.0 - k * k).sqrt();
    let outer = composite(&edges(-l, l, q.nodes_2d, &phase1.kinks(-l, l)));
    outer
        .par_iter()
        .map(|&(x1, w1)| {
            let centre = k * x1;
            // Kinks of θ₂ mapped into the inner variable.
            let breaks: Vec<f64> = phase2
                .kinks(centre - s * l, centre + s * l)
                .into_iter()
                .map(|x2| (x2 - centre) / s)
                .collect();
            let inner: Complex64 = composite(&edges(-l, l, q.nodes_2d, &breaks))
                .into_iter()
                .map(|(u, w)| {
                    let x2 = centre + s * u;
                    Complex64::from_polar(w * normal_density(u), phase2.eval(x2) + tau * x2)
                })
                .sum();
            let f = Complex64::from_polar(w1 * normal_density(x1), phase1.eval(x1) + tau * x1);
            (f * inner, f * inner.conj())
        })
        .reduce(
            || (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            |a, b| (a.0 + b.0, a.1 + b.1),
        )
}

/// `κ_j(τ)` by quadrature.
pub fn oracle_local_kappa(
    phase: &PhaseProfile,
    eta: f64,
    tau: f64,
    q: &QuadratureControl,
) -> Result<Complex64> {
    q.validate()?;
    let l = q.domain_halfwidth;
    let p = *phase;
    let t = Checked::new(l, q.nodes_1d, &p.kinks(-l, l), move |x| p.eval(x));
    let (base, fine) = t.at(tau);
    Ok(Complex64::cis(eta * tau) * converged(base, fine)?)
}

/// `(κ₁₂(τ), Λ₁₂(τ))` by quadrature, for any mixture and phases.
pub fn oracle_nonlocal(
    freq: &FrequencySpec,
    phase1: &PhaseProfile,
    phase2: &PhaseProfile,
    tau: f64,
    q: &QuadratureControl,
) -> Result<(Complex64, Complex64)> {
    OracleEvaluator::new(freq, phase1, phase2, q)?.nonlocal(tau)
}
