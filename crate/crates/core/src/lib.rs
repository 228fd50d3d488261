//! Engineered dephasing of a two-photon polarization state.
//!
//! Two photons carry polarization qubits and share a frequency distribution
//! (a mixture of correlated Gaussians). Frequency-dependent phases and a
//! birefringent evolution make the polarization dephase; the four
//! decoherence functions `κ₁, κ₂, κ₁₂, Λ₁₂` capture the whole dynamics.
//!
//! - [`analytic`] closed forms, [`oracle`] direct quadrature.
//! - [`engine`] grid evaluation with engine selection and cross-checking.
//! - [`observables`] density matrices, purity, entropy, distances.
//! - [`partition`] memory-effect classification per subspace.

pub mod analytic;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod partition;

pub use analytic::{decoherence_set, local_kappa, nonlocal_pair, SeriesControl};
pub use engine::{compute_trace, observables_trace, EngineMode, EngineSettings, Trace};
pub use error::{Error, Result};
pub use model::{
    eval_phase, physical_to_tau, triangle, validate_scenario, AmplitudeVector, DecoherenceSet,
    FrequencySpec, GaussianComponent, PhaseProfile, ScenarioConfig, TimeGrid,
};
pub use observables::{
    density_matrix, entropy, fidelity_pure, normalized_purity, purity, reduced_state,
    trace_distance, DensityMatrix, DensityMatrix2, DensityMatrix4, EntropyBase, FidelityConvention,
    ObservableRow, ObservableSettings, Photon,
};
pub use oracle::{oracle_local_kappa, oracle_nonlocal, OracleEvaluator, QuadratureControl};
pub use partition::{
    classify, classify_with, count_decoherence_functions, count_partitions, is_nonmonotonic,
    run_table1, table1_scenarios, ClassifierControl, MemoryPartition, PresetRow,
};
