use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::b_over_a;
use crate::numeric::CompensatedSum;
use crate::spectral::SpectralData;

/// `B/A` on the real line (the node itself is excluded by the caller).
pub fn m_real(data: &SpectralData, r: f64, x: f64) -> f64 {
    b_over_a(data, r, Complex64::new(x, 0.0))
        .map(|z| z.re)
        .unwrap_or(f64::INFINITY)
}

/// Limit of `B/A(x)` as `x → ±∞` for the stored prefix.
pub fn m_at_infinity(data: &SpectralData, r: f64) -> f64 {
    let s: CompensatedSum = data
        .t
        .iter()
        .zip(&data.mu)
        .map(|(&t, &m)| -m * t / (t * t + 1.0))
        .collect();
    r + s.value() / PI
}

/// Splits `B/A` near its closest pole `t_j`: returns `(δ, c, R, R′)` with
/// `δ = t_j − x`, `c = μ_j/π` and `B/A = c/δ + R`.
fn split_at_nearest(data: &SpectralData, r: f64, x: f64) -> (f64, f64, f64, f64) {
    let j = data.nearest_node(x);
    let tj = data.t[j];
    let mut rest = CompensatedSum::new();
    let mut drest = CompensatedSum::new();
    for (k, (&t, &m)) in data.t.iter().zip(&data.mu).enumerate() {
        rest.add(-m * t / (t * t + 1.0));
        if k != j {
            let d = t - x;
            rest.add(m / d);
            drest.add(m / (d * d));
        }
    }
    (tj - x, data.mu[j] / PI, r + rest.value() / PI, drest.value() / PI)
}

/// Continuous increasing phase `φ(x) = atan(B/A(x)) + π·#{t_k < x}`.
///
/// Fixes `φ(x) ∈ (−π/2, π/2)` below the smallest node, so `φ(t_n) = π/2 + πn`.
pub fn phase(data: &SpectralData, r: f64, x: f64) -> f64 {
    let (delta, c, rest, _) = split_at_nearest(data, r, x);
    let count = data.count_below(x) as f64;
    let base = if delta == 0.0 {
        FRAC_PI_2
    } else {
        // atan(N/δ) with N = c + Rδ, kept finite near the pole
        let n = c + rest * delta;
        (n * delta.signum()).atan2(delta.abs())
    };
    PI * count + base
}

/// `φ′(x) = (c + R′δ²)/(δ² + N²)`; equals `π/μ_n` at a node.
pub fn phase_derivative(data: &SpectralData, r: f64, x: f64) -> f64 {
    let (delta, c, rest, drest) = split_at_nearest(data, r, x);
    let n = c + rest * delta;
    let d2 = delta * delta;
    (c + drest * d2) / (d2 + n * n)
}

/// `|Θ′(x)| = |i + B/A(x)|^{−2}·Σ 2μ_n/(π(t_n − x)²)`, with `2π/μ_n` at a node.
pub fn theta_prime_on_r(data: &SpectralData, r: f64, x: f64) -> f64 {
    if let Some(n) = data.node_index(x) {
        return 2.0 * PI / data.mu[n];
    }
    let m = m_real(data, r, x);
    let s: CompensatedSum = data
        .t
        .iter()
        .zip(&data.mu)
        .map(|(&t, &mu)| 2.0 * mu / (PI * (t - x) * (t - x)))
        .collect();
    s.value() / (1.0 + m * m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TailModel;

    #[test]
    fn phase_at_nodes_is_half_integer_multiple_of_pi() {
        let d = SpectralData::new(vec![-1.0, 2.0, 5.0], vec![1.0, 3.0, 0.5], TailModel::none()).unwrap();
        for (n, &t) in d.t.iter().enumerate() {
            assert_eq!(phase(&d, 0.0, t), FRAC_PI_2 + PI * n as f64);
            let dp = phase_derivative(&d, 0.0, t);
            assert!((dp - PI / d.mu[n]).abs() < 1e-14 * dp);
        }
        assert!(phase(&d, 0.0, -1e9).abs() < FRAC_PI_2);
    }

    #[test]
    fn single_node_theta_prime() {
        let d = SpectralData::new(vec![3.0], vec![0.7], TailModel::none()).unwrap();
        assert_eq!(theta_prime_on_r(&d, 0.0, 3.0), 2.0 * PI / 0.7);
    }
}
