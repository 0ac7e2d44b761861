//! Rotation operators and radial Fock-type weights.
//!
//! Both tests run on finite truncations, where every quantity is finite. The output
//! is a trend across truncations, reported with stability flags.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::check_lacunary;
use crate::evaluator::{a_prime_at_node, log_a_unchecked};
use crate::numeric::quad::gauss_legendre;
use crate::spectral::{SpectralData, Tri};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("RotatedNodeCollision: e^(iθ)·t_{m} coincides with node {node}")]
    RotatedNodeCollision { m: usize, node: usize },
    #[error("BandOverlap: bands {n} and {next} overlap at ε = {epsilon}")]
    BandOverlap { n: usize, next: usize, epsilon: f64 },
    #[error("InvalidEpsilon: ε = {epsilon} is outside (0, 1)")]
    InvalidEpsilon { epsilon: f64 },
    #[error("ZeroNode: node {n} is at the origin")]
    ZeroNode { n: usize },
    #[error("QuadratureUnstable: relative change {change} after {doublings} doublings")]
    QuadratureUnstable { change: f64, doublings: usize },
}

impl FockError {
    pub fn name(&self) -> &'static str {
        match self {
            FockError::RotatedNodeCollision { .. } => "RotatedNodeCollision",
            FockError::BandOverlap { .. } => "BandOverlap",
            FockError::InvalidEpsilon { .. } => "InvalidEpsilon",
            FockError::ZeroNode { .. } => "ZeroNode",
            FockError::QuadratureUnstable { .. } => "QuadratureUnstable",
        }
    }
}

/// Matrix of `f ↦ f(e^{iθ}z)` in the normalized kernel basis `A·μ_n^{1/2}/(z − t_n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationMatrix {
    pub theta: f64,
    /// `entries[m][n]`: coefficient `m` of the rotated basis element `n`.
    pub entries: Vec<Vec<Complex64>>,
    /// `log‖column n‖₂`, assembled from the logarithms of the entries.
    pub column_log_norms: Vec<f64>,
}

impl RotationMatrix {
    pub fn column_norms(&self) -> Vec<f64> {
        self.column_log_norms.iter().map(|l| l.exp()).collect()
    }

    /// Least `C` with every column norm in `[1/C, C]`.
    pub fn bound(&self) -> f64 {
        self.column_log_norms
            .iter()
            .fold(0.0f64, |m, l| m.max(l.abs()))
            .exp()
    }
}

/// Rotation matrix over all stored nodes. `θ = 0` returns the identity exactly.
pub fn rotation_matrix(data: &SpectralData, theta: f64) -> Result<RotationMatrix, FockError> {
    let k = data.len();
    if theta == 0.0 {
        let entries = (0..k)
            .map(|m| (0..k).map(|n| Complex64::new(if m == n { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        return Ok(RotationMatrix {
            theta,
            entries,
            column_log_norms: vec![0.0; k],
        });
    }
    let rot = Complex64::from_polar(1.0, theta);
    let mut log_entries = vec![vec![(f64::NEG_INFINITY, 0.0); k]; k];
    for m in 0..k {
        let z = rot * data.t[m];
        for (node, &t) in data.t.iter().enumerate() {
            if (z - t).norm() <= 1e-14 * t.abs() {
                return Err(FockError::RotatedNodeCollision { m, node });
            }
        }
        // A(e^{iθ}t_m)/(A′(t_m)·μ_m^{1/2}) is shared by the whole row
        let la = log_a_unchecked(data, z);
        let ap = a_prime_at_node(data, m);
        let row_log = la.log_abs - ap.log_abs - 0.5 * data.mu[m].ln();
        let row_phase = la.phase + if ap.sign < 0.0 { PI } else { 0.0 };
        for n in 0..k {
            let d = z - data.t[n];
            log_entries[m][n] = (row_log + 0.5 * data.mu[n].ln() - d.norm().ln(), row_phase - d.arg());
        }
    }
    let entries = log_entries
        .iter()
        .map(|row| row.iter().map(|&(l, p)| Complex64::from_polar(l.exp(), p)).collect())
        .collect();
    let column_log_norms = (0..k)
        .map(|n| {
            let top = (0..k).map(|m| log_entries[m][n].0).fold(f64::NEG_INFINITY, f64::max);
            let s: f64 = (0..k).map(|m| (2.0 * (log_entries[m][n].0 - top)).exp()).sum();
            top + 0.5 * s.ln()
        })
        .collect();
    Ok(RotationMatrix {
        theta,
        entries,
        column_log_norms,
    })
}

/// Rotation column-norm bounds at each truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationTrend {
    pub theta: f64,
    pub truncations: Vec<usize>,
    pub min_norms: Vec<f64>,
    pub max_norms: Vec<f64>,
    pub bounds: Vec<f64>,
    /// Last bound over first bound.
    pub growth: f64,
}

pub fn rotation_trend(
    make: impl Fn(usize) -> SpectralData,
    theta: f64,
    truncations: &[usize],
) -> Result<RotationTrend, FockError> {
    let mut min_norms = Vec::new();
    let mut max_norms = Vec::new();
    let mut bounds = Vec::new();
    for &k in truncations {
        let r = rotation_matrix(&make(k), theta)?;
        let norms = r.column_norms();
        min_norms.push(norms.iter().copied().fold(f64::INFINITY, f64::min));
        max_norms.push(norms.iter().copied().fold(0.0, f64::max));
        bounds.push(r.bound());
    }
    let growth = match (bounds.first(), bounds.last()) {
        (Some(a), Some(b)) => b / a,
        _ => 1.0,
    };
    Ok(RotationTrend {
        theta,
        truncations: truncations.to_vec(),
        min_norms,
        max_norms,
        bounds,
        growth,
    })
}

/// Prefix-sum and tail-sum domination of a positive sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCheck {
    /// `max_n Σ_{m<n} c_m / c_n`.
    pub prefix_constant: f64,
    /// `max_n Σ_{m>n} c_m / c_n`.
    pub tail_constant: f64,
    /// The same constants on the first half of the sequence.
    pub prefix_constant_half: f64,
    pub tail_constant_half: f64,
    pub hypothesis_i: bool,
    pub hypothesis_ii: bool,
    /// Least-squares slope of `log₂ c_n`, signed.
    pub delta: f64,
}

/// Constants of the two domination hypotheses on the given prefix.
///
/// A hypothesis is reported as holding when its constant does not grow by more than
/// 25% from the first half of the sequence to the whole of it.
pub fn lemma_decay_check(c: &[f64]) -> DecayCheck {
    assert!(c.iter().all(|&x| x > 0.0), "values must be positive");
    let (pi, ti) = domination_constants(c);
    let (ph, th) = domination_constants(&c[..c.len().div_ceil(2)]);
    let n = c.len() as f64;
    let mean_x = (n - 1.0) / 2.0;
    let mean_y = c.iter().map(|x| x.log2()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, x) in c.iter().enumerate() {
        let dx = i as f64 - mean_x;
        sxy += dx * (x.log2() - mean_y);
        sxx += dx * dx;
    }
    let delta = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    DecayCheck {
        prefix_constant: pi,
        tail_constant: ti,
        prefix_constant_half: ph,
        tail_constant_half: th,
        hypothesis_i: pi <= 1.25 * ph + 1e-12,
        hypothesis_ii: ti <= 1.25 * th + 1e-12,
        delta,
    }
}

fn domination_constants(c: &[f64]) -> (f64, f64) {
    let total: f64 = c.iter().sum();
    let mut before = 0.0;
    let (mut p, mut t) = (0.0f64, 0.0f64);
    for &x in c {
        let after = total - before - x;
        p = p.max(before / x);
        t = t.max(after.max(0.0) / x);
        before += x;
    }
    (p, t)
}

/// One annulus `(1 − ε)|t_n| ≤ |z| ≤ (1 + ε)|t_n|` carrying `φ(r) = 2 log|A(ir)| + log μ_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub node: usize,
    pub inner: f64,
    pub outer: f64,
    pub log_mu: f64,
    /// `(r, φ(r))` at the radial Gauss–Legendre nodes of the default rule.
    pub table: Vec<(f64, f64)>,
}

/// Radial weight `e^{−φ(|z|)}` supported on the bands; `φ = ∞` elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockWeight {
    pub epsilon: f64,
    pub bands: Vec<Band>,
    pub outside_policy: String,
    /// `ν_d(band_n) = ∫ |A|² e^{−φ} dm` over each band.
    pub band_masses: Vec<f64>,
    /// `ν_d(band_n)·μ_n/t_n²`.
    pub mass_ratios: Vec<f64>,
    /// Least `C` with every mass ratio in `[1/C, C]`.
    pub mass_ratio_bound: f64,
    pub warnings: Vec<String>,
}

impl FockWeight {
    /// The weight restricted to the listed bands.
    pub fn subset(&self, keep: &[usize]) -> FockWeight {
        let pick = |v: &[f64]| keep.iter().map(|&i| v[i]).collect::<Vec<_>>();
        let mass_ratios = pick(&self.mass_ratios);
        FockWeight {
            epsilon: self.epsilon,
            bands: keep.iter().map(|&i| self.bands[i].clone()).collect(),
            outside_policy: self.outside_policy.clone(),
            band_masses: pick(&self.band_masses),
            mass_ratio_bound: ratio_bound(&mass_ratios),
            mass_ratios,
            warnings: self.warnings.clone(),
        }
    }
}

/// Radial and angular orders of the band quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadrature {
    pub radial: usize,
    pub angular: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            radial: 32,
            angular: 64,
        }
    }
}

impl Quadrature {
    fn doubled(self) -> Self {
        Quadrature {
            radial: 2 * self.radial,
            angular: 2 * self.angular,
        }
    }
}

/// Largest `ε` for which the bands around the stored nodes stay disjoint.
pub fn max_disjoint_epsilon(data: &SpectralData) -> f64 {
    let r = sorted_radii(data);
    r.windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].1 + w[0].1))
        .fold(1.0, f64::min)
}

fn sorted_radii(data: &SpectralData) -> Vec<(usize, f64)> {
    let mut r: Vec<(usize, f64)> = data.t.iter().map(|t| t.abs()).enumerate().collect();
    r.sort_by(|a, b| a.1.total_cmp(&b.1));
    r
}

pub fn build_fock_weight(data: &SpectralData, epsilon: f64) -> Result<FockWeight, FockError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(FockError::InvalidEpsilon { epsilon });
    }
    if let Some(n) = data.t.iter().position(|&t| t == 0.0) {
        return Err(FockError::ZeroNode { n });
    }
    let radii = sorted_radii(data);
    for w in radii.windows(2) {
        if (1.0 + epsilon) * w[0].1 >= (1.0 - epsilon) * w[1].1 {
            return Err(FockError::BandOverlap {
                n: w[0].0,
                next: w[1].0,
                epsilon,
            });
        }
    }
    let mut warnings = Vec::new();
    if check_lacunary(data).0 != Tri::True {
        warnings.push("EmitWarning: nodes are not certified lacunary".to_string());
    }
    let (x, _) = gauss_legendre(Quadrature::default().radial);
    let bands: Vec<Band> = radii
        .iter()
        .map(|&(node, r)| {
            let inner = (1.0 - epsilon) * r;
            let outer = (1.0 + epsilon) * r;
            let log_mu = data.mu[node].ln();
            let table = x
                .iter()
                .map(|&s| {
                    let rr = 0.5 * (inner + outer) + 0.5 * (outer - inner) * s;
                    (rr, phi(data, log_mu, rr))
                })
                .collect();
            Band {
                node,
                inner,
                outer,
                log_mu,
                table,
            }
        })
        .collect();
    let mut weight = FockWeight {
        epsilon,
        bands,
        outside_policy: "infinite".to_string(),
        band_masses: Vec::new(),
        mass_ratios: Vec::new(),
        mass_ratio_bound: 1.0,
        warnings,
    };
    let q = Quadrature::default();
    weight.band_masses = weight
        .bands
        .iter()
        .map(|b| {
            let mut mass = 0.0;
            for_band_grid(data, b, q, |_, w| mass += w);
            mass
        })
        .collect();
    weight.mass_ratios = weight
        .bands
        .iter()
        .zip(&weight.band_masses)
        .map(|(b, m)| m * data.mu[b.node] / (data.t[b.node] * data.t[b.node]))
        .collect();
    weight.mass_ratio_bound = ratio_bound(&weight.mass_ratios);
    Ok(weight)
}

fn ratio_bound(v: &[f64]) -> f64 {
    v.iter().fold(1.0f64, |m, x| m.max(*x).max(1.0 / x))
}

fn phi(data: &SpectralData, log_mu: f64, r: f64) -> f64 {
    2.0 * log_a_unchecked(data, Complex64::new(0.0, r)).log_abs + log_mu
}

/// Visits the grid points of a band with their weights `|A(z)|² e^{−φ(|z|)}·dm`.
fn for_band_grid(data: &SpectralData, band: &Band, q: Quadrature, mut f: impl FnMut(Complex64, f64)) {
    let (x, w) = gauss_legendre(q.radial);
    let half = 0.5 * (band.outer - band.inner);
    let mid = 0.5 * (band.outer + band.inner);
    let dalpha = 2.0 * PI / q.angular as f64;
    for (s, ws) in x.iter().zip(&w) {
        let r = mid + half * s;
        let ph = phi(data, band.log_mu, r);
        for j in 0..q.angular {
            let z = Complex64::from_polar(r, dalpha * j as f64);
            let la = log_a_unchecked(data, z).log_abs;
            f(z, (2.0 * la - ph).exp() * ws * half * r * dalpha);
        }
    }
}

/// Hermitian matrix `M` with `‖F‖²_{L²(ν)} = aᴴ M a` for `F = A·Σ a_n μ_n^{1/2}/(z − t_n)`.
pub fn weighted_gram(data: &SpectralData, weight: &FockWeight, q: Quadrature) -> DMatrix<Complex64> {
    let k = data.len();
    let sq: Vec<f64> = data.mu.iter().map(|m| m.sqrt()).collect();
    let mut m = DMatrix::<Complex64>::zeros(k, k);
    let mut v = vec![Complex64::new(0.0, 0.0); k];
    for band in &weight.bands {
        for_band_grid(data, band, q, |z, w| {
            for (j, vj) in v.iter_mut().enumerate() {
                *vj = sq[j] / (z - data.t[j]);
            }
            for c in 0..k {
                let vc = v[c] * w;
                for r in 0..k {
                    m[(r, c)] += v[r].conj() * vc;
                }
            }
        });
    }
    m
}

/// `‖F‖²_{L²(ν)}` for a single coefficient vector.
pub fn weighted_norm(data: &SpectralData, weight: &FockWeight, a: &[Complex64], q: Quadrature) -> f64 {
    quadratic_form(&weighted_gram(data, weight, q), a)
}

fn quadratic_form(m: &DMatrix<Complex64>, a: &[Complex64]) -> f64 {
    let k = a.len();
    let mut s = Complex64::new(0.0, 0.0);
    for c in 0..k {
        for r in 0..k {
            s += a[r] * m[(r, c)] * a[c].conj();
        }
    }
    s.re
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareConfig {
    pub trials: usize,
    pub seed: u64,
    pub quadrature: Quadrature,
    pub max_doublings: usize,
    pub refinement_tol: f64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            trials: 100,
            seed: 0,
            quadrature: Quadrature::default(),
            max_doublings: 3,
            refinement_tol: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub truncation: usize,
    pub trials: usize,
    /// `Q(F)/(π²‖a‖²)` per trial.
    pub ratios: Vec<f64>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub spread: f64,
    /// Ratios of the single basis elements.
    pub basis_ratios: Vec<f64>,
    /// Extreme eigenvalues of `M/π²`, the exact range of the ratio on the truncation.
    pub eigen_min: f64,
    pub eigen_max: f64,
    /// Orders at which the refinement check passed.
    pub quadrature: Quadrature,
    /// Largest relative change of a trial ratio between the last two orders.
    pub refinement_change: f64,
}

impl CompareReport {
    /// Least `C` with every trial ratio in `[1/C, C]`.
    pub fn bound(&self) -> f64 {
        ratio_bound(&self.ratios)
    }
}

/// Samples coefficient vectors with a random number of active entries.
pub fn sample_coefficients(k: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let active = rng.random_range(1..=k);
    let mut idx: Vec<usize> = (0..k).collect();
    for i in 0..active {
        let j = rng.random_range(i..k);
        idx.swap(i, j);
    }
    let mut a = vec![Complex64::new(0.0, 0.0); k];
    for &i in &idx[..active] {
        a[i] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    if a.iter().all(|x| x.norm() == 0.0) {
        a[idx[0]] = Complex64::new(1.0, 0.0);
    }
    a
}

/// Two-sided comparison of `‖F‖²_{L²(ν)}` with `‖F‖² = π²‖a‖²` over random `F`.
pub fn norm_compare(data: &SpectralData, weight: &FockWeight, cfg: &CompareConfig) -> Result<CompareReport, FockError> {
    let k = data.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<Vec<Complex64>> = (0..cfg.trials).map(|_| sample_coefficients(k, &mut rng)).collect();
    let ratios_for = |m: &DMatrix<Complex64>| -> Vec<f64> {
        samples
            .iter()
            .map(|a| {
                let n2: f64 = a.iter().map(|x| x.norm_sqr()).sum();
                quadratic_form(m, a) / (PI * PI * n2)
            })
            .collect()
    };
    let mut q = cfg.quadrature;
    let mut m = weighted_gram(data, weight, q);
    let mut ratios = ratios_for(&m);
    let mut change = f64::INFINITY;
    let mut doublings = 0;
    while doublings < cfg.max_doublings {
        let q2 = q.doubled();
        let m2 = weighted_gram(data, weight, q2);
        let r2 = ratios_for(&m2);
        change = ratios
            .iter()
            .zip(&r2)
            .map(|(a, b)| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        q = q2;
        m = m2;
        ratios = r2;
        doublings += 1;
        if change <= cfg.refinement_tol {
            break;
        }
    }
    if !(change <= cfg.refinement_tol) {
        return Err(FockError::QuadratureUnstable { change, doublings });
    }
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let basis_ratios = (0..k).map(|n| m[(n, n)].re / (PI * PI)).collect();
    let eig = nalgebra::SymmetricEigen::new(m.clone()).eigenvalues;
    let eigen_min = eig.iter().copied().fold(f64::INFINITY, f64::min) / (PI * PI);
    let eigen_max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max) / (PI * PI);
    Ok(CompareReport {
        truncation: k,
        trials: cfg.trials,
        spread: max_ratio / min_ratio,
        ratios,
        min_ratio,
        max_ratio,
        basis_ratios,
        eigen_min,
        eigen_max,
        quadrature: q,
        refinement_change: change,
    })
}
