//! Splitting `h = G₂S₂` along a sparse subsequence of common zeros and building
//! the companion factor `G₁` whose zeros `s̃_k` sit just below them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::genfn::{GeneratingFunction, ZeroTag};
use super::{Certificate, ForgeError};
use crate::evaluator::RealPoint;
use crate::numeric::{CompensatedSum, SignedLog};
use crate::spectral::Tri;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSample {
    pub y: f64,
    pub s2: f64,
    pub g1: f64,
    pub y_s2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratingPair {
    /// Indices into `Certificate::zeros`.
    pub selected: Vec<usize>,
    pub s: Vec<f64>,
    pub s_tilde: Vec<f64>,
    /// `S₂(z) = Π(1 − z/s_k)` over the selection.
    pub s2: GeneratingFunction,
    /// `G₁(z) = Π(1 − z/s̃_k)`.
    pub g1: GeneratingFunction,
    pub samples: Vec<BoundSample>,
    /// `|S₂(iy)| ≤ |G₁(iy)|` at every sample.
    pub lower_bound_holds: bool,
    /// Smallest `C` with `|G₁(iy)| ≤ C|y S₂(iy)|` on the samples.
    pub upper_constant: f64,
    /// Range of `|G₁/S₂|(is_k) / (s_k β(s_k)^{1/2})`.
    pub ratio_range: (f64, f64),
    /// Relative size of `Σ a_n b_n [G₁/S₂](t_n)/(z − t_n)` at each `s̃_k`.
    pub lambda1_residuals: Vec<f64>,
}

/// `β(y) = (Σ μ_n/(t_n² + y²))^{1/2}` over the stored nodes.
pub fn beta(data: &crate::SpectralData, y: f64) -> f64 {
    data.t
        .iter()
        .zip(&data.mu)
        .map(|(t, m)| m / (t * t + y * y))
        .collect::<CompensatedSum>()
        .value()
        .sqrt()
}

/// `[G₁/S₂](t_n)`, with `1 − t_n/s_k = (s_k − t_n)/s_k` taken from the anchored zero.
fn ratio_at_node(data: &crate::SpectralData, s: &[RealPoint], st: &[f64], n: usize) -> SignedLog {
    let x = data.t[n];
    let mut acc = SignedLog::new(1.0, 0.0);
    for (sk, tk) in s.iter().zip(st) {
        acc = acc * SignedLog::from_real((tk - x) / tk) / SignedLog::from_real(sk.minus_node(data, n) / sk.value);
    }
    acc
}

/// Needs at least 3 positive common zeros; selects `s_k` greedily so that
/// `s̃_k > 10 s_{k−1}` and `s_k > 10 s̃_k`.
pub fn build_generating_pair(cert: &Certificate) -> Result<GeneratingPair, ForgeError> {
    const REQUIRED: usize = 3;
    let mut order: Vec<usize> = (0..cert.zeros.len()).filter(|&i| cert.zeros[i].value > 0.0).collect();
    order.sort_by(|&i, &j| cert.zeros[i].value.total_cmp(&cert.zeros[j].value));
    if order.len() < REQUIRED {
        return Err(ForgeError::SubsequenceNeeded {
            selected: order.len(),
            required: REQUIRED,
        });
    }
    let data = &cert.data;
    let mut selected = vec![order[0]];
    let mut s = vec![cert.zeros[order[0]].value];
    let mut st = vec![s[0]];
    // Π_{m<k} s_m/s̃_m
    let mut prod = 1.0;
    for &i in &order[1..] {
        let sk = cert.zeros[i].value;
        let prev = *s.last().unwrap();
        let delta = beta(data, sk).powf(-0.5) * prod - prev;
        let cand = prev + delta;
        if cand > 10.0 * prev && sk > 10.0 * cand {
            selected.push(i);
            s.push(sk);
            st.push(cand);
            prod *= sk / cand;
        }
    }
    if selected.len() < REQUIRED {
        return Err(ForgeError::SubsequenceNeeded {
            selected: selected.len(),
            required: REQUIRED,
        });
    }
    let s2 = GeneratingFunction::from_zeros(s.iter().map(|&x| Complex64::new(x, 0.0)).collect());
    let g1 = GeneratingFunction::from_zeros(st.iter().map(|&x| Complex64::new(x, 0.0)).collect());

    let (lo, hi) = (s[0].ln(), (10.0 * s[s.len() - 1]).ln());
    let mut samples = Vec::new();
    for j in 0..10 {
        let y = (lo + (hi - lo) * j as f64 / 9.0).exp();
        let z = Complex64::new(0.0, y);
        let a = s2.eval_product(z).log_abs;
        let b = g1.eval_product(z).log_abs;
        samples.push(BoundSample {
            y,
            s2: a.exp(),
            g1: b.exp(),
            y_s2: (a + y.ln()).exp(),
        });
    }
    let lower_bound_holds = samples.iter().all(|p| p.s2 <= p.g1 * (1.0 + 1e-14));
    let upper_constant = samples.iter().map(|p| p.g1 / p.y_s2).fold(0.0, f64::max);
    let mut ratio_range = (f64::INFINITY, 0.0f64);
    for &sk in &s {
        let z = Complex64::new(0.0, sk);
        let r = (g1.eval_product(z).log_abs - s2.eval_product(z).log_abs).exp();
        let q = r / (sk * beta(data, sk).sqrt());
        ratio_range = (ratio_range.0.min(q), ratio_range.1.max(q));
    }
    let w = cert.s_weights();
    let s_points: Vec<RealPoint> = selected.iter().map(|&i| cert.zeros[i]).collect();
    let lambda1_residuals = st
        .iter()
        .map(|&z| {
            let mut acc = CompensatedSum::new();
            for (n, &wn) in w.iter().enumerate() {
                if wn == 0.0 {
                    continue;
                }
                let r = ratio_at_node(data, &s_points, &st, n);
                acc.add(wn * r.value() / (z - data.t[n]));
            }
            if acc.abs_sum() > 0.0 {
                acc.value().abs() / acc.abs_sum()
            } else {
                0.0
            }
        })
        .collect();
    Ok(GeneratingPair {
        selected,
        s,
        s_tilde: st,
        s2,
        g1,
        samples,
        lower_bound_holds,
        upper_constant,
        ratio_range,
        lambda1_residuals,
    })
}

/// `G/P_m` with `P_m` the product of the factors `1 − z/λ_j` (or `z` at 0) over
/// the `m` zeros of smallest modulus.
///
/// Whether the quotient lies in `H(E) + zH(E)` depends on the idealized infinite
/// data and is reported as undetermined.
pub fn divide_by_polynomial(g: &GeneratingFunction, m: usize) -> (GeneratingFunction, Tri) {
    let mut order: Vec<usize> = (0..g.zeros.len()).collect();
    order.sort_by(|&i, &j| g.zeros[i].norm().total_cmp(&g.zeros[j].norm()));
    let removed: Vec<usize> = order.into_iter().take(m).collect();
    let zeros = (0..g.zeros.len()).filter(|i| !removed.contains(i)).map(|i| g.zeros[i]).collect();
    let tags = g
        .tags
        .as_ref()
        .map(|t| (0..t.len()).filter(|i| !removed.contains(i)).map(|i| t[i]).collect());
    (
        GeneratingFunction {
            zeros,
            tags,
            residues: Vec::new(),
            scale: g.scale,
        },
        Tri::Undetermined,
    )
}

/// `G = G₁·h/S₂` with `Λ₁ = {s̃_k}` and `Λ₂` the unselected common zeros of the certificate.
///
/// Node values are `G(t_n)/A′(t_n) = a_n μ_n^{1/2}·[G₁/S₂](t_n)`; the zero list of `h`
/// beyond the certified zeros is not known, so `scale` is left at 1.
pub fn mixed_generating_function(cert: &Certificate, pair: &GeneratingPair) -> GeneratingFunction {
    let data = &cert.data;
    let s_points: Vec<RealPoint> = pair.selected.iter().map(|&i| cert.zeros[i]).collect();
    let residues = (0..data.len())
        .map(|n| {
            let w = cert.a[n] * data.mu[n].sqrt();
            if w == 0.0 {
                0.0
            } else {
                w * ratio_at_node(data, &s_points, &pair.s_tilde, n).value()
            }
        })
        .collect();
    let mut zeros: Vec<Complex64> = pair.s_tilde.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut tags = vec![ZeroTag::Lambda1; zeros.len()];
    for (i, z) in cert.zeros.iter().enumerate() {
        if !pair.selected.contains(&i) {
            zeros.push(Complex64::new(z.value, 0.0));
            tags.push(ZeroTag::Lambda2);
        }
    }
    GeneratingFunction {
        zeros,
        tags: Some(tags),
        residues,
        scale: SignedLog::new(1.0, 0.0),
    }
}
