//! Domain types shared by every engine: phase profiles, frequency mixtures,
//! amplitudes, the scaled-time grid and the decoherence-function set.
//!
//! All engine code works in scaled time `τ = σ Δn t` and centered frequency
//! `x = (ω − μ)/σ`. Physical units only appear in [`physical_to_tau`].

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `Σ w = 1` and on the amplitude norm.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Decoherence-function magnitudes may exceed one by this much (rounding).
pub const MAGNITUDE_TOLERANCE: f64 = 1e-9;

/// Differential phase `θ_j(x)` imprinted on one photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseProfile {
    /// Frequency-independent offset in radians.
    Constant(f64),
    /// Triangle wave `arcsin(sin(α x))`.
    Zigzag(f64),
    /// Quadratic phase `β x²`.
    Parabola(f64),
}

impl PhaseProfile {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            PhaseProfile::Constant(theta0) => theta0,
            PhaseProfile::Zigzag(alpha) => triangle(alpha * x),
            PhaseProfile::Parabola(beta) => beta * x * x,
        }
    }

    /// The profile of `−θ(x)`.
    pub fn negated(&self) -> PhaseProfile {
        match *self {
            PhaseProfile::Constant(c) => PhaseProfile::Constant(-c),
            PhaseProfile::Zigzag(a) => PhaseProfile::Zigzag(-a),
            PhaseProfile::Parabola(b) => PhaseProfile::Parabola(-b),
        }
    }

    /// `(α, offset)` such that `θ(x) = arcsin(sin(α x)) + offset`, if the
    /// profile has that shape.
    pub fn as_zigzag(&self) -> Option<(f64, f64)> {
        match *self {
            PhaseProfile::Constant(c) => Some((0.0, c)),
            PhaseProfile::Zigzag(a) => Some((a, 0.0)),
            PhaseProfile::Parabola(b) if b == 0.0 => Some((0.0, 0.0)),
            PhaseProfile::Parabola(_) => None,
        }
    }

    /// `(β, offset)` such that `θ(x) = β x² + offset`, if the profile has
    /// that shape.
    pub fn as_parabola(&self) -> Option<(f64, f64)> {
        match *self {
            PhaseProfile::Constant(c) => Some((0.0, c)),
            PhaseProfile::Parabola(b) => Some((b, 0.0)),
            PhaseProfile::Zigzag(a) if a == 0.0 => Some((0.0, 0.0)),
            PhaseProfile::Zigzag(_) => None,
        }
    }

    /// Points in the open interval `(lo, hi)` where the profile has a
    /// derivative discontinuity, in increasing order.
    pub fn kinks(&self, lo: f64, hi: f64) -> Vec<f64> {
        match *self {
            PhaseProfile::Zigzag(alpha) if alpha != 0.0 => triangle_kinks(alpha, lo, hi),
            _ => Vec::new(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            PhaseProfile::Constant(v) | PhaseProfile::Zigzag(v) | PhaseProfile::Parabola(v) => {
                v.is_finite()
            }
        }
    }
}

/// `arcsin(sin(y))`: the 2π-periodic triangle wave with values in [−π/2, π/2].
#[inline]
pub fn triangle(y: f64) -> f64 {
    y.sin().asin()
}

/// Kinks of `arcsin(sin(α x))` inside `(lo, hi)`: `α x = π/2 + jπ`.
pub(crate) fn triangle_kinks(alpha: f64, lo: f64, hi: f64) -> Vec<f64> {
    let (ylo, yhi) = if alpha > 0.0 {
        (alpha * lo, alpha * hi)
    } else {
        (alpha * hi, alpha * lo)
    };
    let jlo = ((ylo - FRAC_PI_2) / PI).floor() as i64 - 1;
    let jhi = ((yhi - FRAC_PI_2) / PI).ceil() as i64 + 1;
    let mut out: Vec<f64> = (jlo..=jhi)
        .map(|j| (FRAC_PI_2 + j as f64 * PI) / alpha)
        .filter(|&x| x > lo && x < hi)
        .collect();
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

/// Evaluates a phase profile at centered frequency `x`.
pub fn eval_phase(profile: &PhaseProfile, x: f64) -> f64 {
    profile.eval(x)
}

/// Converts physical time to scaled time `τ = σ Δn t`.
pub fn physical_to_tau(sigma: f64, delta_n: f64, t: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "sigma must be positive and finite, got {sigma}"
        )));
    }
    Ok(sigma * delta_n * t)
}

/// One bivariate Gaussian `G(K)` in a mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianComponent {
    pub weight: f64,
    /// Frequency correlation coefficient in [−1, 1].
    pub k: f64,
}

impl GaussianComponent {
    pub fn new(weight: f64, k: f64) -> Result<Self> {
        let c = GaussianComponent { weight, k };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.weight > 0.0 && self.weight <= 1.0) {
            return Err(Error::WeightViolation(format!(
                "component weight {} is outside (0, 1]",
                self.weight
            )));
        }
        if !(-1.0..=1.0).contains(&self.k) {
            return Err(Error::InvalidParameter(format!(
                "correlation coefficient {} is outside [-1, 1]",
                self.k
            )));
        }
        Ok(())
    }
}

/// Weighted mixture of bivariate Gaussians sharing mean `μ` and width `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySpec {
    pub components: Vec<GaussianComponent>,
    pub mu: f64,
    pub sigma: f64,
    /// `μ/σ`.
    pub eta: f64,
}

impl FrequencySpec {
    pub fn new(components: Vec<GaussianComponent>, mu: f64, sigma: f64) -> Result<Self> {
        let spec = FrequencySpec {
            components,
            mu,
            sigma,
            eta: mu / sigma,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Mixture in scaled units (`σ = 1`, `μ = η`).
    pub fn from_eta(components: Vec<GaussianComponent>, eta: f64) -> Result<Self> {
        Self::new(components, eta, 1.0)
    }

    /// A single `G(K)` with the given `η`.
    pub fn single(k: f64, eta: f64) -> Result<Self> {
        Self::from_eta(vec![GaussianComponent::new(1.0, k)?], eta)
    }

    /// `½[G(1) + G(−1)]`.
    pub fn ridge_mixture(eta: f64) -> Result<Self> {
        Self::from_eta(
            vec![
                GaussianComponent::new(0.5, 1.0)?,
                GaussianComponent::new(0.5, -1.0)?,
            ],
            eta,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::WeightViolation("mixture has no components".into()));
        }
        for c in &self.components {
            c.validate()?;
        }
        let total: f64 = self.components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::WeightViolation(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() || !self.mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "need finite mu and positive sigma, got mu={}, sigma={}",
                self.mu, self.sigma
            )));
        }
        if self.eta != self.mu / self.sigma {
            return Err(Error::InvalidParameter(format!(
                "eta {} does not equal mu/sigma = {}",
                self.eta,
                self.mu / self.sigma
            )));
        }
        Ok(())
    }
}

/// Initial polarization amplitudes on `{HH, HV, VH, VV}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeVector {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl AmplitudeVector {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let v = AmplitudeVector { a, b, c, d };
        v.validate()?;
        Ok(v)
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// `a = b = c = d = ½`, the product state `|++⟩`.
    pub fn plus_plus() -> Self {
        let h = Complex64::new(0.5, 0.0);
        AmplitudeVector {
            a: h,
            b: h,
            c: h,
            d: h,
        }
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NormViolation { norm });
        }
        Ok(())
    }
}

/// Uniform grid of scaled times starting at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub tau_values: Vec<f64>,
    pub step: f64,
}

impl TimeGrid {
    /// `0, step, 2 step, …` up to `tau_max` (inclusive, within 1e-9 steps).
    pub fn uniform(tau_max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() || !tau_max.is_finite() {
            return Err(Error::GridViolation(format!(
                "need a positive step and finite tau_max, got step={step}, tau_max={tau_max}"
            )));
        }
        if tau_max < step {
            return Err(Error::GridViolation(format!(
                "tau_max {tau_max} is shorter than one step {step}; the grid would be empty"
            )));
        }
        let n = (tau_max / step + 1e-9).floor() as usize;
        let grid = TimeGrid {
            tau_values: (0..=n).map(|i| i as f64 * step).collect(),
            step,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// `τ ∈ [0, 10]`, step 0.01: the grid used for classification.
    pub fn default_classification() -> Self {
        TimeGrid::uniform(10.0, 0.01).expect("default grid is valid")
    }

    pub fn len(&self) -> usize {
        self.tau_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau_values.is_empty()
    }

    pub fn tau_max(&self) -> f64 {
        self.tau_values.last().copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau_values.len() < 2 {
            return Err(Error::GridViolation(format!(
                "grid needs at least two points, has {}",
                self.tau_values.len()
            )));
        }
        if !(self.step > 0.0) {
            return Err(Error::GridViolation(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        if self.tau_values[0] != 0.0 {
            return Err(Error::GridViolation(format!(
                "grid must start at 0, starts at {}",
                self.tau_values[0]
            )));
        }
        let tol = 1e-9 * self.step;
        for (i, w) in self.tau_values.windows(2).enumerate() {
            let d = w[1] - w[0];
            if (d - self.step).abs() > tol {
                return Err(Error::GridViolation(format!(
                    "spacing {d} between points {i} and {} differs from step {}",
                    i + 1,
                    self.step
                )));
            }
        }
        Ok(())
    }
}

/// One full scenario: frequency mixture, both phases, amplitudes and a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub freq: FrequencySpec,
    pub phase1: PhaseProfile,
    pub phase2: PhaseProfile,
    pub amplitudes: AmplitudeVector,
    pub grid: TimeGrid,
}

impl ScenarioConfig {
    pub fn new(
        freq: FrequencySpec,
        phase1: PhaseProfile,
        phase2: PhaseProfile,
        amplitudes: AmplitudeVector,
        grid: TimeGrid,
    ) -> Result<Self> {
        validate_scenario(ScenarioConfig {
            freq,
            phase1,
            phase2,
            amplitudes,
            grid,
        })
    }

    /// The same scenario with the photons exchanged.
    pub fn swapped(&self) -> Self {
        let [a, b, c, d] = self.amplitudes.as_array();
        ScenarioConfig {
            freq: self.freq.clone(),
            phase1: self.phase2,
            phase2: self.phase1,
            amplitudes: AmplitudeVector { a, b: c, c: b, d },
            grid: self.grid.clone(),
        }
    }
}

/// Checks every invariant of the scenario and hands it back unchanged.
pub fn validate_scenario(cfg: ScenarioConfig) -> Result<ScenarioConfig> {
    cfg.amplitudes.validate()?;
    cfg.freq.validate()?;
    cfg.grid.validate()?;
    for (name, p) in [("phase1", &cfg.phase1), ("phase2", &cfg.phase2)] {
        if !p.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "{name} parameter is not finite: {p:?}"
            )));
        }
    }
    Ok(cfg)
}

/// `(κ₁, κ₂, κ₁₂, Λ₁₂)` at one scaled time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceSet {
    pub kappa1: Complex64,
    pub kappa2: Complex64,
    pub kappa12: Complex64,
    pub lambda12: Complex64,
}

impl DecoherenceSet {
    /// All four functions equal to one: no decoherence at all.
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        DecoherenceSet {
            kappa1: one,
            kappa2: one,
            kappa12: one,
            lambda12: one,
        }
    }

    pub fn from_array(v: [Complex64; 4]) -> Self {
        DecoherenceSet {
            kappa1: v[0],
            kappa2: v[1],
            kappa12: v[2],
            lambda12: v[3],
        }
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.kappa1, self.kappa2, self.kappa12, self.lambda12]
    }

    /// `[|κ₁|, |κ₂|, |κ₁₂|, |Λ₁₂|]`.
    pub fn magnitudes(&self) -> [f64; 4] {
        self.as_array().map(|z| z.norm())
    }

    /// Largest entrywise distance to `other`.
    pub fn max_deviation(&self, other: &DecoherenceSet) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Each function divided by the magnitude of its value in `initial`,
    /// so that every magnitude starts at one.
    pub fn rescaled(&self, initial: &DecoherenceSet) -> Result<Self> {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (i, (z, z0)) in self
            .as_array()
            .iter()
            .zip(initial.as_array().iter())
            .enumerate()
        {
            let m = z0.norm();
            if m == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "cannot rescale: decoherence function {i} vanishes initially"
                )));
            }
            out[i] = z / m;
        }
        Ok(DecoherenceSet::from_array(out))
    }

    pub fn validate(&self) -> Result<()> {
        for (i, m) in self.magnitudes().iter().enumerate() {
            if !m.is_finite() || *m > 1.0 + MAGNITUDE_TOLERANCE {
                return Err(Error::InvalidParameter(format!(
                    "decoherence function {i} has magnitude {m} > 1"
                )));
            }
        }
        Ok(())
    }
}
