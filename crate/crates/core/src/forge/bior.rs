//! Generating functions whose zero set carries a biorthogonal system of defect `N`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::genfn::{aberth_zeros, GeneratingFunction};
use super::ForgeError;
use crate::evaluator::find_real_roots;
use crate::spectral::{SpectralData, Tri};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiorResult {
    pub n: usize,
    /// Coefficients with `Σ a_n t_n^l μ_n^{1/2} = 0` for `l < N`, unit `ℓ²` norm.
    pub a: Vec<f64>,
    /// `G/A = Σ c_n/(z − t_n)` with `c_n = a_n t_n μ_n^{1/2}`.
    pub generating_function: GeneratingFunction,
    /// `max_l |Σ a τ^l μ^{1/2}| / Σ|a τ^l μ^{1/2}|` with `τ = t/max|t|`.
    pub moment_residual: f64,
    /// Convergence of `Σ t^{2N−2} μ` according to the tail model.
    pub hypothesis: Tri,
    pub real_zeros: usize,
    /// Zeros within `1e-12` relative distance of a node.
    pub zeros_on_nodes: usize,
    pub aberth_converged: bool,
    /// Product form versus residue form at 10 random points.
    pub representation_error: f64,
}

/// `Σ a_n t_n^N μ_n^{1/2}` is maximized over the unit sphere of the moment null space.
pub fn bior_construct(data: &SpectralData, n: usize) -> Result<BiorResult, ForgeError> {
    let hypothesis = if n == 0 {
        Tri::True
    } else {
        data.tail.weighted_mass_converges(2.0 * n as f64 - 2.0)
    };
    if hypothesis == Tri::False {
        return Err(ForgeError::HypothesisFailure(format!(
            "the tail makes Σ t^{} μ diverge",
            2 * n as i64 - 2
        )));
    }
    let k = data.len();
    if k <= n {
        return Err(ForgeError::DegenerateNullSpace);
    }
    let scale = data.t.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let tau: Vec<f64> = data.t.iter().map(|t| t / scale).collect();
    let sq: Vec<f64> = data.mu.iter().map(|m| m.sqrt()).collect();
    let moments = DMatrix::from_fn(k, n, |i, l| tau[i].powi(l as i32) * sq[i]);
    let v = DVector::from_fn(k, |i, _| tau[i].powi(n as i32) * sq[i]);
    let mut a = v.clone();
    if n > 0 {
        let q = moments.clone().qr().q();
        for _ in 0..3 {
            let proj = &q * (q.transpose() * &a);
            a -= proj;
        }
    }
    let norm = a.norm();
    if !(norm > 1e-12 * v.norm()) {
        return Err(ForgeError::DegenerateNullSpace);
    }
    a /= norm;
    if a.dot(&v) < 0.0 {
        a = -a;
    }
    let a: Vec<f64> = a.iter().copied().collect();
    let moment_residual = (0..n)
        .map(|l| {
            let terms: Vec<f64> = (0..k).map(|i| a[i] * tau[i].powi(l as i32) * sq[i]).collect();
            let s: f64 = terms.iter().sum();
            let m: f64 = terms.iter().map(|x| x.abs()).sum();
            s.abs() / m
        })
        .fold(0.0, f64::max);

    let c: Vec<f64> = (0..k).map(|i| a[i] * data.t[i] * sq[i]).collect();
    let degree = k - n;
    let min_abs = data.t.iter().fold(f64::INFINITY, |m, t| m.min(t.abs()));
    let mut zeros = Vec::new();
    if n >= 1 {
        zeros.push(Complex64::new(0.0, 0.0));
    }
    let mut real_zeros = zeros.len();
    if let Ok(roots) = find_real_roots(data, &c, f64::NEG_INFINITY, f64::INFINITY) {
        for r in roots {
            if n >= 1 && r.value.abs() <= 1e-6 * min_abs {
                continue;
            }
            zeros.push(Complex64::new(r.value, 0.0));
            real_zeros += 1;
        }
    }
    let (rest, aberth_converged) = aberth_zeros(data, &c, degree, &zeros);
    zeros.extend(rest);
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let zeros_on_nodes = zeros
        .iter()
        .filter(|z| z.im == 0.0 && data.t.iter().any(|&t| (z.re - t).abs() <= 1e-12 * t.abs()))
        .count();
    let mut g = GeneratingFunction {
        zeros,
        tags: None,
        residues: c,
        scale: crate::numeric::SignedLog::new(1.0, 0.0),
    };
    let gm = data.t.iter().map(|t| t.abs().ln()).sum::<f64>() / k as f64;
    g.fit_scale(data, Complex64::new(0.0, gm.exp()));
    let representation_error = g.representation_error(data, 10, 0x5eed);
    Ok(BiorResult {
        n,
        a,
        generating_function: g,
        moment_residual,
        hypothesis,
        real_zeros,
        zeros_on_nodes,
        aberth_converged,
        representation_error,
    })
}
