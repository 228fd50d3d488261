//! Eigenvalues of small Hermitian matrices.

use num_complex::Complex64;

/// Cyclic Jacobi stops once every off-diagonal modulus is below this
/// (relative to the Frobenius norm, floored at one).
pub const JACOBI_TOLERANCE: f64 = 1e-13;

const MAX_SWEEPS: usize = 64;

pub type Matrix<const N: usize> = [[Complex64; N]; N];

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching eigenvectors as the columns of `vectors`.
#[derive(Debug, Clone, Copy)]
pub struct Eigen<const N: usize> {
    pub values: [f64; N],
    pub vectors: Matrix<N>,
}

/// Eigenvalues of a Hermitian 2×2 matrix, ascending.
pub fn eigenvalues_2x2(m: &Matrix<2>) -> [f64; 2] {
    let (a, b) = (m[0][0].re, m[1][1].re);
    let mean = 0.5 * (a + b);
    let r = (0.5 * (a - b)).hypot(m[0][1].norm());
    [mean - r, mean + r]
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the upper triangle and
/// the real part of the diagonal are read.
pub fn hermitian_eigenvalues<const N: usize>(m: &Matrix<N>) -> [f64; N] {
    if N == 2 {
        let m2 = [[m[0][0], m[0][1]], [m[0][1].conj(), m[1][1]]];
        let v = eigenvalues_2x2(&m2);
        let mut out = [0.0; N];
        out.copy_from_slice(&v);
        return out;
    }
    hermitian_eigen(m).values
}

/// Cyclic complex Jacobi iteration.
pub fn hermitian_eigen<const N: usize>(m: &Matrix<N>) -> Eigen<N> {
    let zero = Complex64::new(0.0, 0.0);
    let mut a = [[zero; N]; N];
    for i in 0..N {
        a[i][i] = Complex64::new(m[i][i].re, 0.0);
        for j in i + 1..N {
            a[i][j] = m[i][j];
            a[j][i] = m[i][j].conj();
        }
    }
    let mut v = [[zero; N]; N];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }

    let scale = a
        .iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    for _ in 0..MAX_SWEEPS {
        let off = (0..N)
            .flat_map(|i| (i + 1..N).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].norm())
            .fold(0.0, f64::max);
        if off <= JACOBI_TOLERANCE * scale {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                let g = a[p][q].norm();
                if g == 0.0 {
                    continue;
                }
                let phase = a[p][q] / g;
                let zeta = (a[q][q].re - a[p][p].re) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                // U = [[c, s e^{iφ}], [−s e^{−iφ}, c]] on the (p, q) plane.
                let upq = phase * s;
                let uqp = -phase.conj() * s;
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * c + y * uqp;
                    row[q] = x * upq + y * c;
                }
                for k in 0..N {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = x * c + y * uqp.conj();
                    a[q][k] = x * upq.conj() + y * c;
                }
                a[p][q] = zero;
                a[q][p] = zero;
                for row in v.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * c + y * uqp;
                    row[q] = x * upq + y * c;
                }
            }
        }
    }

    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[i][i].re.total_cmp(&a[j][j].re));
    Eigen {
        values: std::array::from_fn(|k| a[order[k]][order[k]].re),
        vectors: std::array::from_fn(|r| std::array::from_fn(|k| v[r][order[k]])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn hermitian<const N: usize>(parts: &[f64]) -> Matrix<N> {
        let mut m = [[c(0.0, 0.0); N]; N];
        let mut it = parts.iter().copied();
        for i in 0..N {
            m[i][i] = c(it.next().unwrap(), 0.0);
            for j in i + 1..N {
                m[i][j] = c(it.next().unwrap(), it.next().unwrap());
                m[j][i] = m[i][j].conj();
            }
        }
        m
    }

    #[test]
    fn diagonal_is_sorted() {
        let m = hermitian::<4>(&[
            0.3, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.1, 0.0, 0.0, 0.0, 0.0, 0.4, 0.0, 0.0, 0.2,
        ]);
        assert_eq!(hermitian_eigenvalues(&m), [0.1, 0.2, 0.3, 0.4]);
    }

    #[test]
    fn rank_one_projector() {
        // |++⟩⟨++| has eigenvalues 0, 0, 0, 1
        let m = [[c(0.25, 0.0); 4]; 4];
        let ev = hermitian_eigenvalues(&m);
        for v in &ev[..3] {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(ev[3], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = [[c(1.0, 0.0), c(0.0, 2.0)], [c(0.0, -2.0), c(1.0, 0.0)]];
        assert_eq!(eigenvalues_2x2(&m), [-1.0, 3.0]);
        let e = hermitian_eigen(&m);
        assert_abs_diff_eq!(e.values[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.values[1], 3.0, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn decomposition_reconstructs_matrix(parts in prop::collection::vec(-1.0..1.0f64, 16)) {
            let m = hermitian::<4>(&parts);
            let e = hermitian_eigen(&m);
            for i in 0..4 {
                for j in 0..4 {
                    let r: Complex64 = (0..4)
                        .map(|k| e.vectors[i][k] * e.values[k] * e.vectors[j][k].conj())
                        .sum();
                    prop_assert!((r - m[i][j]).norm() < 1e-12);
                }
            }
            let trace: f64 = (0..4).map(|i| m[i][i].re).sum();
            prop_assert!((e.values.iter().sum::<f64>() - trace).abs() < 1e-12);
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn jacobi_agrees_with_closed_form(parts in prop::collection::vec(-1.0..1.0f64, 4)) {
            let m = hermitian::<2>(&parts);
            let closed = eigenvalues_2x2(&m);
            let jac = hermitian_eigen(&m).values;
            prop_assert!((closed[0] - jac[0]).abs() < 1e-13);
            prop_assert!((closed[1] - jac[1]).abs() < 1e-13);
        }
    }
}
