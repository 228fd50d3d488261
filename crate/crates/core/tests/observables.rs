use mempart_core::observables::{entropy, purity, reduced_state, trace_distance, Photon};
use mempart_core::{density_matrix, fidelity_pure, AmplitudeVector, DecoherenceSet, DensityMatrix};
use num_complex::Complex64;
use proptest::prelude::*;

fn unit(parts: &[f64]) -> Option<[Complex64; 4]> {
    let v: [Complex64; 4] = std::array::from_fn(|i| Complex64::new(parts[2 * i], parts[2 * i + 1]));
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (n > 1e-3).then(|| v.map(|z| z / n))
}

/// A physical decoherence set: independent local dephasing with an
/// uncorrelated frequency pair, `κ₁₂ = κ₁κ₂`, `Λ₁₂ = κ₁κ₂*`.
fn factorized(r1: f64, p1: f64, r2: f64, p2: f64) -> DecoherenceSet {
    let k1 = Complex64::from_polar(r1, p1);
    let k2 = Complex64::from_polar(r2, p2);
    DecoherenceSet {
        kappa1: k1,
        kappa2: k2,
        kappa12: k1 * k2,
        lambda12: k1 * k2.conj(),
    }
}

fn brute_partial_trace(m: &[[Complex64; 4]; 4], keep: Photon) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let (a, b) = match keep {
                    Photon::First => (2 * i + k, 2 * j + k),
                    Photon::Second => (2 * k + i, 2 * k + j),
                };
                out[i][j] += m[a][b];
            }
        }
    }
    out
}

fn amp_strategy() -> impl Strategy<Value = [Complex64; 4]> {
    prop::collection::vec(-1.0..1.0f64, 8).prop_filter_map("zero vector", |v| unit(&v))
}

fn set_strategy() -> impl Strategy<Value = DecoherenceSet> {
    (0.0..=1.0f64, -3.2..3.2f64, 0.0..=1.0f64, -3.2..3.2f64)
        .prop_map(|(r1, p1, r2, p2)| factorized(r1, p1, r2, p2))
}

proptest! {
    #[test]
    fn fuchs_van_de_graaf(amp in amp_strategy(), set in set_strategy(), psi in amp_strategy()) {
        let amp = AmplitudeVector::new(amp[0], amp[1], amp[2], amp[3]).unwrap();
        let rho = density_matrix(&amp, &set).unwrap();
        let f = fidelity_pure(&rho, &psi).unwrap();
        let d = trace_distance(&rho, &DensityMatrix::pure(&psi).unwrap());
        prop_assert!(1.0 - f <= d + 1e-9);
        prop_assert!(d <= (1.0 - f * f).sqrt() + 1e-9);
    }

    #[test]
    fn zero_entropy_exactly_for_pure_states(amp in amp_strategy(), set in set_strategy()) {
        let amp = AmplitudeVector::new(amp[0], amp[1], amp[2], amp[3]).unwrap();
        let rho = density_matrix(&amp, &set).unwrap();
        let pure = (purity(&rho) - 1.0).abs() < 1e-9;
        let zero = entropy(&rho) < 1e-9;
        // Near-pure states sit on both sides of the cut; skip the band.
        if (purity(&rho) - 1.0).abs() > 1e-6 || pure {
            prop_assert_eq!(pure, zero);
        }
    }

    #[test]
    fn reduced_state_is_partial_trace(amp in amp_strategy(), set in set_strategy()) {
        let amp = AmplitudeVector::new(amp[0], amp[1], amp[2], amp[3]).unwrap();
        let rho = density_matrix(&amp, &set).unwrap();
        for p in [Photon::First, Photon::Second] {
            let want = brute_partial_trace(rho.entries(), p);
            let got = reduced_state(&amp, &set, p);
            for i in 0..2 {
                for j in 0..2 {
                    prop_assert!((got.entries()[i][j] - want[i][j]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn local_purity_grows_with_local_magnitude(
        amp in amp_strategy(),
        phase in -3.2..3.2f64,
        lo in 0.0..1.0f64,
        step in 0.0..1.0f64,
        other in 0.0..=1.0f64,
    ) {
        let amp = AmplitudeVector::new(amp[0], amp[1], amp[2], amp[3]).unwrap();
        let hi = lo + step * (1.0 - lo);
        let p = |r: f64| purity(&reduced_state(&amp, &factorized(r, phase, other, 0.4), Photon::First));
        prop_assert!(p(lo) <= p(hi) + 1e-15);
        // The other photon's dephasing does not enter.
        let q = purity(&reduced_state(&amp, &factorized(hi, phase, 0.1, -2.0), Photon::First));
        prop_assert!((q - p(hi)).abs() < 1e-15);
    }
}

#[test]
fn pure_product_state_has_zero_entropy() {
    let amp = AmplitudeVector::plus_plus();
    let rho = density_matrix(&amp, &DecoherenceSet::identity()).unwrap();
    assert!((purity(&rho) - 1.0).abs() < 1e-15);
    assert!(entropy(&rho).abs() < 1e-12);
}
