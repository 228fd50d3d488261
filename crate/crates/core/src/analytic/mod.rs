//! Closed-form decoherence functions.
//!
//! Local functions are available for every phase profile. Non-local ones are
//! solved for: uncorrelated frequencies (any phases), perfectly
//! (anti)correlated frequencies with constant or zigzag phases, and any
//! correlation with constant or parabola phases. Mixtures are evaluated
//! component by component; the integrals are linear in `|g|²`.

mod parabola;
mod zigzag;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DecoherenceSet, FrequencySpec, PhaseProfile, ScenarioConfig};
use crate::oracle::{self, QuadratureControl};

/// `|K|` this close to one is treated as a perfect (anti)correlation.
pub const RIDGE_TOLERANCE: f64 = 1e-12;

/// Truncation of the Fourier series that appear in the zigzag closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Upper bound on the harmonic index.
    pub max_terms: u32,
    /// Summation stops once terms past the Gaussian peak fall below this.
    pub term_floor: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_terms: 64,
            term_floor: 1e-14,
        }
    }
}

impl SeriesControl {
    pub fn new(max_terms: u32, term_floor: f64) -> Result<Self> {
        let ctl = SeriesControl {
            max_terms,
            term_floor,
        };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 1 {
            return Err(Error::InvalidParameter(
                "max_terms must be at least 1".into(),
            ));
        }
        if !(self.term_floor >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "term_floor must be non-negative, got {}",
                self.term_floor
            )));
        }
        Ok(())
    }
}

/// Local decoherence function `κ_j(τ)`; independent of the correlation `K`.
pub fn local_kappa(phase: &PhaseProfile, eta: f64, tau: f64, ctl: &SeriesControl) -> Complex64 {
    let carrier = Complex64::from_polar(1.0, eta * tau);
    match *phase {
        PhaseProfile::Constant(theta0) => {
            Complex64::from_polar(zigzag::gauss(tau), eta * tau + theta0)
        }
        PhaseProfile::Zigzag(alpha) => carrier * zigzag::local_series(alpha, tau, ctl),
        PhaseProfile::Parabola(beta) => carrier * parabola::local(beta, tau),
    }
}

/// Non-local pair `(κ₁₂(τ), Λ₁₂(τ))` for a frequency mixture.
pub fn nonlocal_pair(
    freq: &FrequencySpec,
    phase1: &PhaseProfile,
    phase2: &PhaseProfile,
    tau: f64,
    ctl: &SeriesControl,
) -> Result<(Complex64, Complex64)> {
    let mut kappa12 = Complex64::new(0.0, 0.0);
    let mut lambda12 = Complex64::new(0.0, 0.0);
    for c in &freq.components {
        let (k12, l12) = component_pair(c.k, freq.eta, phase1, phase2, tau, ctl)?;
        kappa12 += c.weight * k12;
        lambda12 += c.weight * l12;
    }
    Ok((kappa12, lambda12))
}

fn component_pair(
    k: f64,
    eta: f64,
    phase1: &PhaseProfile,
    phase2: &PhaseProfile,
    tau: f64,
    ctl: &SeriesControl,
) -> Result<(Complex64, Complex64)> {
    if k == 0.0 {
        let k1 = local_kappa(phase1, eta, tau, ctl);
        let k2 = local_kappa(phase2, eta, tau, ctl);
        return Ok((k1 * k2, k1 * k2.conj()));
    }
    let carrier = Complex64::from_polar(1.0, 2.0 * eta * tau);

    if let (Some((b1, c1)), Some((b2, c2))) = (phase1.as_parabola(), phase2.as_parabola()) {
        let k12 =
            carrier * Complex64::from_polar(1.0, c1 + c2) * parabola::sum_channel(b1, b2, k, tau);
        let l12 =
            Complex64::from_polar(1.0, c1 - c2) * parabola::difference_channel(b1, b2, k, tau);
        return Ok((k12, l12));
    }

    if (k.abs() - 1.0).abs() <= RIDGE_TOLERANCE {
        if let (Some((a1, c1)), Some((a2, c2))) = (phase1.as_zigzag(), phase2.as_zigzag()) {
            // On the ridge x₂ = ±x₁, and z(−x, α) = z(x, −α).
            let moving = zigzag::pair_average(a1, a2, 2.0 * tau, ctl);
            let frozen = zigzag::pair_average(a1, -a2, 0.0, ctl);
            let (sum, diff) = if k > 0.0 {
                (moving, frozen)
            } else {
                (frozen, moving)
            };
            let k12 = carrier * Complex64::from_polar(sum, c1 + c2);
            let l12 = Complex64::from_polar(diff, c1 - c2);
            return Ok((k12, l12));
        }
    }

    Err(Error::UnsupportedAnalytic(format!(
        "K = {k} with phases {phase1:?} and {phase2:?}"
    )))
}

/// All four decoherence functions of a scenario at one scaled time.
///
/// With `fallback` set, non-local pairs without a closed form are integrated
/// numerically instead of failing.
pub fn decoherence_set(
    cfg: &ScenarioConfig,
    tau: f64,
    ctl: &SeriesControl,
    fallback: Option<&QuadratureControl>,
) -> Result<DecoherenceSet> {
    let eta = cfg.freq.eta;
    let kappa1 = local_kappa(&cfg.phase1, eta, tau, ctl);
    let kappa2 = local_kappa(&cfg.phase2, eta, tau, ctl);
    let (kappa12, lambda12) = match nonlocal_pair(&cfg.freq, &cfg.phase1, &cfg.phase2, tau, ctl) {
        Ok(pair) => pair,
        Err(Error::UnsupportedAnalytic(_)) if fallback.is_some() => {
            oracle::oracle_nonlocal(&cfg.freq, &cfg.phase1, &cfg.phase2, tau, fallback.unwrap())?
        }
        Err(e) => return Err(e),
    };
    Ok(DecoherenceSet {
        kappa1,
        kappa2,
        kappa12,
        lambda12,
    })
}
