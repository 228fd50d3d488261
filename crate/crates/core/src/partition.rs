//! Memory effects per subspace.
//!
//! A decoherence function shows memory when its magnitude rises again after
//! having dropped. The four functions `κ₁, κ₂, κ₁₂, Λ₁₂` govern the
//! subspaces `S₁, S₂, S_Φ, S_Ψ`; which of them show memory is the scenario's
//! memory partition.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::engine::{compute_trace, EngineMode, EngineSettings};
use crate::error::{Error, Result};
use crate::model::{
    AmplitudeVector, DecoherenceSet, FrequencySpec, PhaseProfile, ScenarioConfig, TimeGrid,
};

/// Smallest rise counted as a revival.
pub const DEFAULT_REVIVAL_THRESHOLD: f64 = 1e-3;

/// Memory flags in the order `⟨S₁, S₂, S_Φ, S_Ψ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct MemoryPartition {
    pub bits: [bool; 4],
}

impl MemoryPartition {
    pub const fn new(s1: bool, s2: bool, s_phi: bool, s_psi: bool) -> Self {
        MemoryPartition {
            bits: [s1, s2, s_phi, s_psi],
        }
    }

    /// The same partition seen with the photons relabelled.
    pub fn swapped(&self) -> Self {
        let [a, b, c, d] = self.bits;
        MemoryPartition::new(b, a, c, d)
    }
}

/// `1010` style.
impl fmt::Display for MemoryPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for MemoryPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<char> = s
            .chars()
            .filter(|c| !matches!(c, '<' | '>' | '⟨' | '⟩' | ',' | ' '))
            .collect();
        if digits.len() != 4 {
            return Err(Error::InvalidParameter(format!(
                "'{s}' is not a 4-bit partition"
            )));
        }
        let mut bits = [false; 4];
        for (b, c) in bits.iter_mut().zip(digits) {
            *b = match c {
                '0' => false,
                '1' => true,
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "'{s}' is not a 4-bit partition"
                    )))
                }
            };
        }
        Ok(MemoryPartition { bits })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierControl {
    pub revival_threshold: f64,
    pub grid: TimeGrid,
}

impl Default for ClassifierControl {
    fn default() -> Self {
        ClassifierControl {
            revival_threshold: DEFAULT_REVIVAL_THRESHOLD,
            grid: TimeGrid::default_classification(),
        }
    }
}

impl ClassifierControl {
    pub fn new(revival_threshold: f64, grid: TimeGrid) -> Result<Self> {
        let ctl = ClassifierControl {
            revival_threshold,
            grid,
        };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.revival_threshold > 0.0) || !self.revival_threshold.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "revival threshold must be positive, got {}",
                self.revival_threshold
            )));
        }
        self.grid.validate()
    }
}

/// True when some sample exceeds the running minimum of the samples before
/// it by at least `eps`.
pub fn is_nonmonotonic(samples: &[f64], eps: f64) -> bool {
    let mut lowest = f64::INFINITY;
    for &s in samples {
        if s - lowest >= eps {
            return true;
        }
        lowest = lowest.min(s);
    }
    false
}

/// Partition read off a precomputed trace.
pub fn partition_of(sets: &[DecoherenceSet], eps: f64) -> MemoryPartition {
    let mut bits = [false; 4];
    for (k, b) in bits.iter_mut().enumerate() {
        let series: Vec<f64> = sets.iter().map(|s| s.magnitudes()[k]).collect();
        *b = is_nonmonotonic(&series, eps);
    }
    MemoryPartition { bits }
}

/// Result of classifying one scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub partition: MemoryPartition,
    /// Analytic–oracle gap, cross-check mode only.
    pub max_deviation: Option<f64>,
}

/// Classifies with the closed-form engine on `ctl.grid`.
pub fn classify(cfg: &ScenarioConfig, ctl: &ClassifierControl) -> Result<MemoryPartition> {
    Ok(classify_with(cfg, ctl, &EngineSettings::default())?.partition)
}

/// Classifies on `ctl.grid`, ignoring the scenario's own grid.
pub fn classify_with(
    cfg: &ScenarioConfig,
    ctl: &ClassifierControl,
    settings: &EngineSettings,
) -> Result<Classification> {
    ctl.validate()?;
    let on_grid = ScenarioConfig {
        grid: ctl.grid.clone(),
        ..cfg.clone()
    };
    let trace = compute_trace(&on_grid, settings)?;
    Ok(Classification {
        partition: partition_of(&trace.sets, ctl.revival_threshold),
        max_deviation: trace.max_deviation,
    })
}

/// One preset scenario with its expected partition.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetRow {
    pub id: char,
    pub scenario: ScenarioConfig,
    pub expected: MemoryPartition,
}

impl PresetRow {
    /// `freq | phase1 | phase2`.
    pub fn summary(&self) -> String {
        format!(
            "{} | {} | {}",
            describe_freq(&self.scenario.freq),
            describe_phase(&self.scenario.phase1),
            describe_phase(&self.scenario.phase2)
        )
    }
}

fn describe_freq(f: &FrequencySpec) -> String {
    if f.components.len() == 1 {
        return format!("G({})", f.components[0].k);
    }
    let parts: Vec<String> = f
        .components
        .iter()
        .map(|c| format!("{}*G({})", c.weight, c.k))
        .collect();
    parts.join(" + ")
}

fn describe_phase(p: &PhaseProfile) -> String {
    match *p {
        PhaseProfile::Constant(c) if c == 0.0 => "const".into(),
        PhaseProfile::Constant(c) => format!("const({c})"),
        PhaseProfile::Zigzag(a) => format!("z({a})"),
        PhaseProfile::Parabola(b) => format!("p({b})"),
    }
}

/// The sixteen reference scenarios, rows `a` to `p`, one per partition.
pub fn table1_scenarios() -> Vec<PresetRow> {
    use PhaseProfile::{Constant, Parabola, Zigzag};
    let g = |k: f64| FrequencySpec::single(k, 0.0).expect("valid preset");
    let x = || FrequencySpec::ridge_mixture(0.0).expect("valid preset");
    let c = Constant(0.0);
    let rows = [
        ('a', g(0.0), c, c, "0000"),
        ('b', g(0.0), Zigzag(5.0), c, "1000"),
        ('c', g(0.0), c, Zigzag(5.0), "0100"),
        ('d', x(), Parabola(3.0), Parabola(3.0), "0010"),
        ('e', x(), Parabola(3.0), Parabola(-3.0), "0001"),
        ('f', x(), Zigzag(5.0), Zigzag(-5.0), "1100"),
        ('g', g(1.0), Zigzag(5.0), c, "1010"),
        ('h', g(-1.0), Zigzag(5.0), c, "1001"),
        ('i', g(1.0), c, Zigzag(5.0), "0110"),
        ('j', g(-1.0), c, Zigzag(5.0), "0101"),
        ('k', x(), Parabola(3.0), c, "0011"),
        ('l', g(1.0), Zigzag(5.0), Zigzag(-15.0), "1110"),
        ('m', g(-1.0), Zigzag(5.0), Zigzag(-15.0), "1101"),
        ('n', g(0.0), Zigzag(5.0), Parabola(3.0), "1011"),
        ('o', g(0.0), Parabola(3.0), Zigzag(5.0), "0111"),
        ('p', g(0.0), Zigzag(5.0), Zigzag(5.0), "1111"),
    ];
    rows.into_iter()
        .map(|(id, freq, phase1, phase2, expected)| PresetRow {
            id,
            scenario: ScenarioConfig {
                freq,
                phase1,
                phase2,
                amplitudes: AmplitudeVector::plus_plus(),
                grid: TimeGrid::default_classification(),
            },
            expected: expected.parse().expect("valid preset"),
        })
        .collect()
}

/// Outcome of one preset row.
#[derive(Debug, Clone, PartialEq)]
pub struct RowOutcome {
    pub id: char,
    pub summary: String,
    pub expected: MemoryPartition,
    pub computed: std::result::Result<Classification, Error>,
    pub passed: bool,
}

/// Classifies every preset row. A row passes when its partition matches and,
/// in cross-check mode, the engines agree to `settings.cross_check_tolerance`.
pub fn run_table1(ctl: &ClassifierControl, settings: &EngineSettings) -> Vec<RowOutcome> {
    table1_scenarios()
        .into_par_iter()
        .map(|row| {
            let computed = classify_with(&row.scenario, ctl, settings);
            let passed = match &computed {
                Ok(c) => {
                    c.partition == row.expected
                        && (settings.mode != EngineMode::CrossCheck
                            || c.max_deviation
                                .is_some_and(|d| d <= settings.cross_check_tolerance))
                }
                Err(_) => false,
            };
            RowOutcome {
                id: row.id,
                summary: row.summary(),
                expected: row.expected,
                computed,
                passed,
            }
        })
        .collect()
}

/// Number of distinct decoherence functions for `n` qubits:
/// `Σ_k C(n,k) 2^(k−1) = (3ⁿ − 1)/2`.
pub fn count_decoherence_functions(n: u32) -> Result<u128> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "qubit count must be at least 1".into(),
        ));
    }
    let overflow = || Error::InvalidParameter(format!("count for {n} qubits overflows"));
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for k in 1..=n {
        binom = binom
            .checked_mul((n - k + 1) as u128)
            .ok_or_else(overflow)?
            / k as u128;
        let term = binom
            .checked_mul(1u128.checked_shl(k - 1).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
        total = total.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(total)
}

/// `2^M` memory partitions, or `None` when that exceeds `u128`.
pub fn count_partitions(n: u32) -> Result<Option<u128>> {
    let m = count_decoherence_functions(n)?;
    Ok(u32::try_from(m).ok().and_then(|m| 1u128.checked_shl(m)))
}
