//! Closed forms for quadratic phases `β x²`, from the Gaussian integral
//! `E[exp(i xᵀBx + i tᵀx)] = det(I − 2iΣB)^{-1/2} exp(−½ tᵀ(Σ⁻¹ − 2iB)⁻¹ t)`.
//!
//! The principal square root is the correct branch everywhere: the
//! determinant never reaches the negative real axis (its imaginary part only
//! vanishes where its real part is `1 + 4β²(1−K²) > 0`).

use num_complex::Complex64;

/// `E[e^{iβx²} e^{iτx}]` for standard normal `x`.
pub(crate) fn local(beta: f64, tau: f64) -> Complex64 {
    let d = Complex64::new(1.0, -2.0 * beta);
    d.inv().sqrt() * (-(tau * tau) / (2.0 * d)).exp()
}

/// `E[e^{i(β₁x₁² + β₂x₂²)} e^{iτ(x₁+x₂)}]` for unit-variance normals with
/// correlation `k`. Without the `e^{2iητ}` carrier.
pub(crate) fn sum_channel(beta1: f64, beta2: f64, k: f64, tau: f64) -> Complex64 {
    let decor = 1.0 - k * k;
    let d = Complex64::new(1.0 - 4.0 * beta1 * beta2 * decor, -2.0 * (beta1 + beta2));
    let n = Complex64::new(1.0 + k, -(beta1 + beta2) * decor);
    d.inv().sqrt() * (-(n / d) * (tau * tau)).exp()
}

/// `E[e^{i(β₁x₁² − β₂x₂²)} e^{iτ(x₁−x₂)}]`.
pub(crate) fn difference_channel(beta1: f64, beta2: f64, k: f64, tau: f64) -> Complex64 {
    // x₂ → −x₂ flips the correlation; β₂ → −β₂ flips the phase sign.
    sum_channel(beta1, -beta2, -k, tau)
}
