//! Entire functions given by their zero set and by their values on the nodes.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::evaluator::log_a_unchecked;
use crate::numeric::{ComplexSum, LogComplex, SignedLog};
use crate::spectral::SpectralData;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroTag {
    Lambda1,
    Lambda2,
}

/// `G(z) = scale · z^m · Π_{λ≠0}(1 − z/λ)` with `m` the multiplicity of 0 in `zeros`,
/// alongside the node values `g_n = G(t_n)/A′(t_n)`.
///
/// When `deg G < #T` the two forms agree: `G/A = Σ g_n/(z − t_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratingFunction {
    pub zeros: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tags: Option<Vec<ZeroTag>>,
    pub residues: Vec<f64>,
    pub scale: SignedLog,
}

impl GeneratingFunction {
    pub fn from_zeros(zeros: Vec<Complex64>) -> Self {
        Self {
            zeros,
            tags: None,
            residues: Vec::new(),
            scale: SignedLog::new(1.0, 0.0),
        }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Product form in log representation.
    pub fn eval_product(&self, z: Complex64) -> LogComplex {
        let mut acc = self.scale.to_log_complex();
        for &lam in &self.zeros {
            let f = if lam == Complex64::new(0.0, 0.0) { z } else { 1.0 - z / lam };
            acc = acc * LogComplex::from_complex(f);
        }
        acc
    }

    /// `A(z)·Σ g_n/(z − t_n)` in log representation.
    pub fn eval_residue(&self, data: &SpectralData, z: Complex64) -> LogComplex {
        let mut s = ComplexSum::new();
        for (n, &g) in self.residues.iter().enumerate() {
            if g != 0.0 {
                s.add(g / (z - data.t[n]));
            }
        }
        log_a_unchecked(data, z) * LogComplex::from_complex(s.value())
    }

    /// Chooses `scale` so that both forms agree at `z_ref`.
    pub fn fit_scale(&mut self, data: &SpectralData, z_ref: Complex64) {
        self.scale = SignedLog::new(1.0, 0.0);
        let r = self.eval_residue(data, z_ref) / self.eval_product(z_ref);
        let sign = if r.phase.abs() > std::f64::consts::FRAC_PI_2 { -1.0 } else { 1.0 };
        self.scale = SignedLog::new(sign, r.log_abs);
    }

    /// Node values `g_n = G(t_n)/A′(t_n)` from the product form.
    pub fn residues_from_product(&mut self, data: &SpectralData) {
        self.residues = (0..data.len())
            .map(|n| {
                let g = self.eval_product(Complex64::new(data.t[n], 0.0));
                let ap = crate::evaluator::a_prime_at_node(data, n).to_log_complex();
                let v = g / ap;
                v.to_complex().re
            })
            .collect();
    }

    /// Largest relative discrepancy between the two forms over `count` random
    /// points in the annulus spanned by the nodes, seeded deterministically.
    pub fn representation_error(&self, data: &SpectralData, count: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lo = data.t.iter().fold(f64::INFINITY, |m, t| m.min(t.abs())).ln();
        let hi = data.t.iter().fold(0.0f64, |m, t| m.max(t.abs())).ln();
        let mut worst: f64 = 0.0;
        for _ in 0..count {
            let r = rng.random_range(lo..=hi.max(lo + 1e-9)).exp();
            let th: f64 = rng.random_range(0.05..std::f64::consts::PI - 0.05);
            let th = if rng.random_bool(0.5) { th } else { -th };
            let z = Complex64::from_polar(r, th);
            let p = self.eval_product(z);
            let q = self.eval_residue(data, z);
            let ratio = (q / p).to_complex();
            worst = worst.max((ratio - 1.0).norm());
        }
        worst
    }
}

/// `p′/p` for `p(z) = A(z)·Σ c_n/(z − t_n)`.
fn log_derivative(data: &SpectralData, c: &[f64], z: Complex64) -> Complex64 {
    let mut f = ComplexSum::new();
    let mut fp = ComplexSum::new();
    let mut a = ComplexSum::new();
    for (n, &t) in data.t.iter().enumerate() {
        let inv = 1.0 / (z - t);
        a.add(inv);
        let cn = c.get(n).copied().unwrap_or(0.0);
        if cn != 0.0 {
            f.add(cn * inv);
            fp.add(-cn * inv * inv);
        }
    }
    a.value() + fp.value() / f.value()
}

/// Remaining `degree − known.len()` zeros of `A(z)·Σ c_n/(z − t_n)` by the
/// Aberth iteration with the known zeros deflated. Returns the zeros and
/// whether every correction fell below `1e-14|z|`.
pub fn aberth_zeros(data: &SpectralData, c: &[f64], degree: usize, known: &[Complex64]) -> (Vec<Complex64>, bool) {
    let m = degree.saturating_sub(known.len());
    if m == 0 {
        return (Vec::new(), true);
    }
    let mut abs: Vec<f64> = data.t.iter().map(|t| t.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let radius = abs[abs.len() / 2];
    let mut z: Vec<Complex64> = (0..m)
        .map(|i| {
            let th = std::f64::consts::PI * (2.0 * i as f64 + 0.5) / m as f64 + 0.4;
            Complex64::from_polar(radius * (1.0 + 0.1 * i as f64 / m as f64), th)
        })
        .collect();
    let mut converged = false;
    for _ in 0..2000 {
        let mut max_rel: f64 = 0.0;
        for i in 0..m {
            let mut l = log_derivative(data, c, z[i]);
            for &k in known {
                l -= 1.0 / (z[i] - k);
            }
            let mut rep = Complex64::new(0.0, 0.0);
            for j in 0..m {
                if j != i {
                    rep += 1.0 / (z[i] - z[j]);
                }
            }
            let w = 1.0 / (l - rep);
            if w.is_finite() {
                z[i] -= w;
                max_rel = max_rel.max(w.norm() / z[i].norm().max(f64::MIN_POSITIVE));
            }
        }
        if max_rel <= 1e-14 {
            converged = true;
            break;
        }
    }
    for zi in z.iter_mut() {
        if zi.im.abs() <= 1e-10 * zi.norm() {
            zi.im = 0.0;
        }
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    (z, converged)
}
