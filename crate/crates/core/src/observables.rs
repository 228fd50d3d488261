//! Two-photon polarization states under dephasing and their figures of merit.
//!
//! Basis order is `{HH, HV, VH, VV}` for the pair and `{H, V}` for a single
//! photon.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, Matrix};
use crate::model::{AmplitudeVector, DecoherenceSet, NORM_TOLERANCE};

pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
pub const TRACE_TOLERANCE: f64 = 1e-12;
/// Smallest eigenvalue accepted as "non-negative".
pub const PSD_TOLERANCE: f64 = 1e-9;

/// A validated density matrix of dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix<const N: usize> {
    entries: Matrix<N>,
}

pub type DensityMatrix4 = DensityMatrix<4>;
pub type DensityMatrix2 = DensityMatrix<2>;

impl<const N: usize> DensityMatrix<N> {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(entries: Matrix<N>) -> Result<Self> {
        let rho = DensityMatrix { entries };
        for i in 0..N {
            for j in i..N {
                let gap = (entries[i][j] - entries[j][i].conj()).norm();
                if gap > HERMITICITY_TOLERANCE {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not Hermitian: |ρ[{i}][{j}] − ρ[{j}][{i}]*| = {gap:e}"
                    )));
                }
            }
        }
        let tr = rho.trace();
        if (tr - 1.0).norm() > TRACE_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "trace is {tr}, expected 1"
            )));
        }
        let min_eigenvalue = rho.eigenvalues()[0];
        if min_eigenvalue < -PSD_TOLERANCE {
            return Err(Error::PsdViolation { min_eigenvalue });
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(psi: &[Complex64; N]) -> Result<Self> {
        check_normalized(psi)?;
        Ok(DensityMatrix {
            entries: std::array::from_fn(|i| std::array::from_fn(|j| psi[i] * psi[j].conj())),
        })
    }

    pub fn diagonal(probabilities: [f64; N]) -> Result<Self> {
        let mut entries = [[Complex64::new(0.0, 0.0); N]; N];
        for (i, p) in probabilities.into_iter().enumerate() {
            entries[i][i] = Complex64::new(p, 0.0);
        }
        Self::new(entries)
    }

    pub fn maximally_mixed() -> Self {
        let mut entries = [[Complex64::new(0.0, 0.0); N]; N];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = Complex64::new(1.0 / N as f64, 0.0);
        }
        DensityMatrix { entries }
    }

    pub fn entries(&self) -> &Matrix<N> {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self.entries[i][i]).sum()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; N] {
        hermitian_eigenvalues(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

fn check_normalized<const N: usize>(psi: &[Complex64; N]) -> Result<()> {
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::InvalidParameter(format!(
            "state vector has squared norm {norm}, expected 1"
        )));
    }
    Ok(())
}

/// Which photon a reduced state refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Photon {
    First,
    Second,
}

/// The dephased two-photon state.
pub fn density_matrix(amp: &AmplitudeVector, dec: &DecoherenceSet) -> Result<DensityMatrix4> {
    amp.validate()?;
    let [a, b, c, d] = amp.as_array();
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, z) in [a, b, c, d].iter().enumerate() {
        m[i][i] = Complex64::new(z.norm_sqr(), 0.0);
    }
    let upper = [
        (0, 1, a * b.conj() * dec.kappa2),
        (0, 2, a * c.conj() * dec.kappa1),
        (0, 3, a * d.conj() * dec.kappa12),
        (1, 2, b * c.conj() * dec.lambda12),
        (1, 3, b * d.conj() * dec.kappa1),
        (2, 3, c * d.conj() * dec.kappa2),
    ];
    for (i, j, z) in upper {
        m[i][j] = z;
        m[j][i] = z.conj();
    }
    DensityMatrix::new(m)
}

/// Single-photon state left after tracing out the other photon.
pub fn reduced_state(amp: &AmplitudeVector, dec: &DecoherenceSet, which: Photon) -> DensityMatrix2 {
    let [a, b, c, d] = amp.as_array();
    let (p_h, p_v, coherence) = match which {
        Photon::First => (
            a.norm_sqr() + b.norm_sqr(),
            c.norm_sqr() + d.norm_sqr(),
            (a * c.conj() + b * d.conj()) * dec.kappa1,
        ),
        Photon::Second => (
            a.norm_sqr() + c.norm_sqr(),
            b.norm_sqr() + d.norm_sqr(),
            (a * b.conj() + c * d.conj()) * dec.kappa2,
        ),
    };
    DensityMatrix {
        entries: [
            [Complex64::new(p_h, 0.0), coherence],
            [coherence.conj(), Complex64::new(p_v, 0.0)],
        ],
    }
}

/// `tr ρ²`.
pub fn purity<const N: usize>(rho: &DensityMatrix<N>) -> f64 {
    rho.entries.iter().flatten().map(|z| z.norm_sqr()).sum()
}

/// `D/(D−1) (P − 1/D)`: 0 for the maximally mixed state, 1 for pure states.
pub fn normalized_purity(p: f64, dim: usize) -> Result<f64> {
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    let d = dim as f64;
    if !(p >= 1.0 / d - PSD_TOLERANCE && p <= 1.0 + PSD_TOLERANCE) {
        return Err(Error::InvalidParameter(format!(
            "purity {p} is outside [1/{dim}, 1]"
        )));
    }
    Ok(d / (d - 1.0) * (p - 1.0 / d))
}

/// Logarithm base for [`entropy_in`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntropyBase {
    #[default]
    Bits,
    Nats,
}

/// Von Neumann entropy in bits.
pub fn entropy<const N: usize>(rho: &DensityMatrix<N>) -> f64 {
    entropy_in(rho, EntropyBase::Bits)
}

pub fn entropy_in<const N: usize>(rho: &DensityMatrix<N>, base: EntropyBase) -> f64 {
    let nats: f64 = rho
        .eigenvalues()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum();
    let s = match base {
        EntropyBase::Bits => nats / std::f64::consts::LN_2,
        EntropyBase::Nats => nats,
    };
    s.max(0.0)
}

/// `½ Σ |λ_i(ρ − σ)|`.
pub fn trace_distance<const N: usize>(rho: &DensityMatrix<N>, sigma: &DensityMatrix<N>) -> f64 {
    let diff: Matrix<N> =
        std::array::from_fn(|i| std::array::from_fn(|j| rho.entries[i][j] - sigma.entries[i][j]));
    0.5 * hermitian_eigenvalues(&diff)
        .iter()
        .map(|l| l.abs())
        .sum::<f64>()
}

/// Fidelity with a pure reference state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FidelityConvention {
    /// `√⟨ψ|ρ|ψ⟩`.
    #[default]
    Root,
    /// `⟨ψ|ρ|ψ⟩`.
    Squared,
}

/// `√⟨ψ|ρ|ψ⟩`.
pub fn fidelity_pure<const N: usize>(rho: &DensityMatrix<N>, psi: &[Complex64; N]) -> Result<f64> {
    fidelity_pure_with(rho, psi, FidelityConvention::Root)
}

pub fn fidelity_pure_with<const N: usize>(
    rho: &DensityMatrix<N>,
    psi: &[Complex64; N],
    convention: FidelityConvention,
) -> Result<f64> {
    check_normalized(psi)?;
    let mut overlap = Complex64::new(0.0, 0.0);
    for i in 0..N {
        for j in 0..N {
            overlap += psi[i].conj() * rho.entries[i][j] * psi[j];
        }
    }
    let f = overlap.re.clamp(0.0, 1.0);
    Ok(match convention {
        FidelityConvention::Root => f.sqrt(),
        FidelityConvention::Squared => f,
    })
}

/// `|++⟩ = ½(|HH⟩ + |HV⟩ + |VH⟩ + |VV⟩)`.
pub fn plus_plus() -> [Complex64; 4] {
    [Complex64::new(0.5, 0.0); 4]
}

/// `|+−⟩ = ½(|HH⟩ − |HV⟩ + |VH⟩ − |VV⟩)`.
pub fn plus_minus() -> [Complex64; 4] {
    let h = Complex64::new(0.5, 0.0);
    [h, -h, h, -h]
}

/// Entropy and fidelity conventions for [`observables`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ObservableSettings {
    pub fidelity: FidelityConvention,
    pub entropy: EntropyBase,
}

/// Figures of merit of the state at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRow {
    pub tau: f64,
    pub purity_total_norm: f64,
    pub purity_1_norm: f64,
    pub purity_2_norm: f64,
    pub entropy: f64,
    /// Distance to the reference state.
    pub trace_distance: f64,
    /// Fidelity with the reference state.
    pub fidelity: f64,
}

pub fn observables(
    tau: f64,
    amp: &AmplitudeVector,
    dec: &DecoherenceSet,
    reference: &[Complex64; 4],
    settings: &ObservableSettings,
) -> Result<ObservableRow> {
    let rho = density_matrix(amp, dec)?;
    let r1 = reduced_state(amp, dec, Photon::First);
    let r2 = reduced_state(amp, dec, Photon::Second);
    let target = DensityMatrix::pure(reference)?;
    Ok(ObservableRow {
        tau,
        purity_total_norm: normalized_purity(purity(&rho), 4)?,
        purity_1_norm: normalized_purity(purity(&r1), 2)?,
        purity_2_norm: normalized_purity(purity(&r2), 2)?,
        entropy: entropy_in(&rho, settings.entropy),
        trace_distance: trace_distance(&rho, &target),
        fidelity: fidelity_pure_with(&rho, reference, settings.fidelity)?,
    })
}
