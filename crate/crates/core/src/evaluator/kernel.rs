use std::f64::consts::PI;

use num_complex::Complex64;

use super::{a_prime_at_node, log_a, log_a_unchecked, CoefficientVector};
use crate::numeric::{CompensatedSum, ComplexSum, LogComplex};
use crate::spectral::SpectralData;

/// `(F, G) = π² Σ a_n conj(b_n)`.
pub fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let s: ComplexSum = a.iter().zip(b).map(|(x, y)| x * y.conj()).collect();
    s.value() * (PI * PI)
}

/// `‖F‖ = π‖a‖₂`.
pub fn norm(a: &[Complex64]) -> f64 {
    let s: CompensatedSum = a.iter().map(|x| x.norm_sqr()).collect();
    PI * s.value().sqrt()
}

fn node_of(data: &SpectralData, w: Complex64) -> Option<usize> {
    if w.im == 0.0 {
        data.node_index(w.re)
    } else {
        None
    }
}

/// Coefficients of the reproducing kernel `k_w`:
/// `a_n = −conj(A(w)) μ_n^{1/2}/(π²(t_n − conj w))`, and at `w = t_n` the single
/// entry `A′(t_n) μ_n^{1/2}/π²`.
pub fn kernel_coeffs(data: &SpectralData, w: Complex64) -> CoefficientVector {
    let pi2 = PI * PI;
    if let Some(n) = node_of(data, w) {
        let mut a = vec![Complex64::new(0.0, 0.0); data.len()];
        a[n] = Complex64::new(a_prime_at_node(data, n).value() * data.mu[n].sqrt() / pi2, 0.0);
        return a;
    }
    let abar = log_a(data, w).expect("off-node").conj();
    data.t
        .iter()
        .zip(&data.mu)
        .map(|(&t, &m)| {
            let f = LogComplex::from_complex(-m.sqrt() / (pi2 * (t - w.conj())));
            (abar * f).to_complex()
        })
        .collect()
}

/// `k_w(w) = |A(w)|²/π² · Σ μ_n/|t_n − w|²`.
pub fn kernel_value(data: &SpectralData, w: Complex64) -> f64 {
    let pi2 = PI * PI;
    if let Some(n) = node_of(data, w) {
        let ap = a_prime_at_node(data, n);
        return (2.0 * ap.log_abs).exp() * data.mu[n] / pi2;
    }
    let la = log_a_unchecked(data, w).log_abs;
    let s: CompensatedSum = data
        .t
        .iter()
        .zip(&data.mu)
        .map(|(&t, &m)| m / (t - w).norm_sqr())
        .collect();
    (2.0 * la + s.value().ln()).exp() / pi2
}

/// `k_w(z) = conj(A(w)) A(z)/π² · Σ μ_n/((t_n − z)(t_n − conj w))` for off-node `z`, `w`.
pub fn kernel_eval(data: &SpectralData, w: Complex64, z: Complex64) -> Complex64 {
    let s: ComplexSum = data
        .t
        .iter()
        .zip(&data.mu)
        .map(|(&t, &m)| m / ((t - z) * (t - w.conj())))
        .collect();
    let pre = log_a_unchecked(data, w).conj() * log_a_unchecked(data, z);
    (pre * LogComplex::from_complex(s.value())).to_complex() / (PI * PI)
}
