//! Decoherence functions over a whole time grid, by closed form, by
//! quadrature, or both with a comparison.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::{self, local_kappa, nonlocal_pair, SeriesControl};
use crate::error::{Error, Result};
use crate::model::{DecoherenceSet, ScenarioConfig};
use crate::observables::{observables, ObservableRow, ObservableSettings};
use crate::oracle::{OracleEvaluator, QuadratureControl};

/// Largest accepted analytic–oracle deviation in cross-check mode.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EngineMode {
    #[default]
    Analytic,
    Oracle,
    CrossCheck,
}

impl FromStr for EngineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(EngineMode::Analytic),
            "oracle" => Ok(EngineMode::Oracle),
            "cross-check" => Ok(EngineMode::CrossCheck),
            other => Err(Error::InvalidParameter(format!(
                "unknown engine mode '{other}' (expected analytic, oracle or cross-check)"
            ))),
        }
    }
}

impl fmt::Display for EngineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineMode::Analytic => "analytic",
            EngineMode::Oracle => "oracle",
            EngineMode::CrossCheck => "cross-check",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineSettings {
    pub mode: EngineMode,
    pub series: SeriesControl,
    pub quadrature: QuadratureControl,
    /// In analytic mode, integrate numerically where no closed form exists.
    pub oracle_fallback: bool,
    pub cross_check_tolerance: f64,
}

impl Default for EngineSettings {
    fn default() -> Self {
        EngineSettings {
            mode: EngineMode::Analytic,
            series: SeriesControl::default(),
            quadrature: QuadratureControl::default(),
            oracle_fallback: true,
            cross_check_tolerance: CROSS_CHECK_TOLERANCE,
        }
    }
}

impl EngineSettings {
    pub fn with_mode(mode: EngineMode) -> Self {
        EngineSettings {
            mode,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.series.validate()?;
        self.quadrature.validate()?;
        if !(self.cross_check_tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cross-check tolerance must be positive, got {}",
                self.cross_check_tolerance
            )));
        }
        Ok(())
    }
}

/// Decoherence sets on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub taus: Vec<f64>,
    pub sets: Vec<DecoherenceSet>,
    /// Sup-norm analytic–oracle gap over the grid and all four functions
    /// (cross-check mode only).
    pub max_deviation: Option<f64>,
}

impl Trace {
    /// `|κ₁|, |κ₂|, |κ₁₂|, |Λ₁₂|` as four series.
    pub fn magnitudes(&self) -> [Vec<f64>; 4] {
        std::array::from_fn(|k| self.sets.iter().map(|s| s.magnitudes()[k]).collect())
    }

    pub fn within(&self, tolerance: f64) -> bool {
        self.max_deviation.map_or(true, |d| d <= tolerance)
    }
}

/// Evaluates the scenario on its grid. In cross-check mode the analytic
/// values are returned together with their deviation from the oracle.
pub fn compute_trace(cfg: &ScenarioConfig, settings: &EngineSettings) -> Result<Trace> {
    settings.validate()?;
    cfg.grid.validate()?;
    let taus = cfg.grid.tau_values.clone();
    match settings.mode {
        EngineMode::Analytic => Ok(Trace {
            sets: analytic_sets(cfg, &taus, settings)?,
            taus,
            max_deviation: None,
        }),
        EngineMode::Oracle => Ok(Trace {
            sets: OracleEvaluator::for_scenario(cfg, &settings.quadrature)?.trace(&taus)?,
            taus,
            max_deviation: None,
        }),
        EngineMode::CrossCheck => {
            let sets = analytic_sets(cfg, &taus, settings)?;
            let reference =
                OracleEvaluator::for_scenario(cfg, &settings.quadrature)?.trace(&taus)?;
            let deviation = sets
                .iter()
                .zip(&reference)
                .map(|(a, b)| a.max_deviation(b))
                .fold(0.0, f64::max);
            Ok(Trace {
                taus,
                sets,
                max_deviation: Some(deviation),
            })
        }
    }
}

fn analytic_sets(
    cfg: &ScenarioConfig,
    taus: &[f64],
    settings: &EngineSettings,
) -> Result<Vec<DecoherenceSet>> {
    let ctl = &settings.series;
    // Whether a closed form exists depends on K and the phases, not on τ.
    match nonlocal_pair(&cfg.freq, &cfg.phase1, &cfg.phase2, 0.0, ctl) {
        Err(Error::UnsupportedAnalytic(_)) if settings.oracle_fallback => {
            let oracle = OracleEvaluator::for_scenario(cfg, &settings.quadrature)?;
            taus.par_iter()
                .map(|&tau| {
                    let (kappa12, lambda12) = oracle.nonlocal(tau)?;
                    Ok(DecoherenceSet {
                        kappa1: local_kappa(&cfg.phase1, cfg.freq.eta, tau, ctl),
                        kappa2: local_kappa(&cfg.phase2, cfg.freq.eta, tau, ctl),
                        kappa12,
                        lambda12,
                    })
                })
                .collect()
        }
        Err(e) => Err(e),
        Ok(_) => taus
            .par_iter()
            .map(|&tau| analytic::decoherence_set(cfg, tau, ctl, None))
            .collect(),
    }
}

/// Observables along the scenario grid against a pure reference state.
///
/// With `rescale`, every decoherence function is divided by its magnitude at
/// `τ = 0` first. That removes the initial polarization–frequency
/// correlations but need not leave a valid state, in which case the
/// positivity check fails.
pub fn observables_trace(
    cfg: &ScenarioConfig,
    settings: &EngineSettings,
    reference: &[Complex64; 4],
    obs: &ObservableSettings,
    rescale: bool,
) -> Result<(Trace, Vec<ObservableRow>)> {
    let trace = compute_trace(cfg, settings)?;
    let initial = trace.sets[0];
    let rows = trace
        .taus
        .iter()
        .zip(&trace.sets)
        .map(|(&tau, set)| {
            let set = if rescale {
                set.rescaled(&initial)?
            } else {
                *set
            };
            observables(tau, &cfg.amplitudes, &set, reference, obs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((trace, rows))
}
