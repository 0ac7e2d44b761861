//! Finite-truncation defects of mixed systems `{g_λ}_{Λ₁} ∪ {k_λ}_{Λ₂}`,
//! biorthogonality checks and the moment functionals `φ_l`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evaluator::{a_prime_at_node, inner_product, kernel_coeffs, log_a_unchecked, CoefficientVector};
use crate::forge::{bior_construct, ForgeError, GeneratingFunction};
use crate::numeric::{ComplexSum, LogComplex};
use crate::spectral::SpectralData;

#[derive(Debug, Error)]
pub enum DefectError {
    #[error("TruncationTooSmall: {columns} columns do not fit in truncation {k}")]
    TruncationTooSmall { k: usize, columns: usize },
    #[error("LambdaOnGrid: {lambda} coincides with node {node}")]
    LambdaOnGrid { lambda: f64, node: usize },
    #[error("{0}")]
    Forge(#[from] ForgeError),
}

impl DefectError {
    pub fn name(&self) -> &'static str {
        match self {
            DefectError::TruncationTooSmall { .. } => "TruncationTooSmall",
            DefectError::LambdaOnGrid { .. } => "LambdaOnGrid",
            DefectError::Forge(e) => e.name(),
        }
    }
}

/// Default threshold `σ < tol·σ_max` for the defect estimate.
pub const DEFECT_TOL: f64 = 1e-8;

/// Coefficients of `k_λ`; `λ ∉ T` is not required, nodes give a single entry.
pub fn kernel_column(data: &SpectralData, lambda: Complex64) -> CoefficientVector {
    kernel_coeffs(data, lambda)
}

/// Unit vector `coeffs` with the true column `exp(log_scale)·coeffs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledColumn {
    pub coeffs: CoefficientVector,
    pub log_scale: f64,
}

impl ScaledColumn {
    pub fn unscaled(&self) -> CoefficientVector {
        let s = self.log_scale.exp();
        self.coeffs.iter().map(|c| c * s).collect()
    }

    fn from_logs(logs: Vec<LogComplex>) -> Self {
        let top = logs.iter().map(|l| l.log_abs).fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return Self {
                coeffs: vec![Complex64::new(0.0, 0.0); logs.len()],
                log_scale: f64::NEG_INFINITY,
            };
        }
        let raw: Vec<Complex64> = logs
            .iter()
            .map(|l| LogComplex::new(l.log_abs - top, l.phase).to_complex())
            .collect();
        let n = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        Self {
            coeffs: raw.iter().map(|c| c / n).collect(),
            log_scale: top + n.ln(),
        }
    }
}

fn node_values(data: &SpectralData, g: &GeneratingFunction) -> Vec<f64> {
    if g.residues.len() == data.len() {
        g.residues.clone()
    } else {
        let mut g = g.clone();
        g.residues_from_product(data);
        g.residues
    }
}

fn off_grid(data: &SpectralData, lambda: Complex64) -> Result<(), DefectError> {
    if lambda.im == 0.0 {
        if let Some(node) = data
            .t
            .iter()
            .position(|&t| (t - lambda.re).abs() <= 8.0 * f64::EPSILON * t.abs().max(1.0))
        {
            return Err(DefectError::LambdaOnGrid { lambda: lambda.re, node });
        }
    }
    Ok(())
}

/// `a_n(g_λ) = G(t_n)/((t_n − λ) A′(t_n) μ_n^{1/2})` assembled in log form.
pub fn biorthogonal_column(data: &SpectralData, g: &GeneratingFunction, lambda: Complex64) -> Result<ScaledColumn, DefectError> {
    off_grid(data, lambda)?;
    let gn = node_values(data, g);
    let logs = (0..data.len())
        .map(|n| {
            LogComplex::from_real(gn[n])
                / LogComplex::from_complex(data.t[n] - lambda)
                / LogComplex::new(0.5 * data.mu[n].ln(), 0.0)
        })
        .collect();
    Ok(ScaledColumn::from_logs(logs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Kernel,
    Biorthogonal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnLabel {
    pub lambda: Complex64,
    pub kind: ColumnKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub truncation: usize,
    pub labels: Vec<ColumnLabel>,
    /// Inner products of the unit-normalized columns, `π²` included.
    pub gram: Vec<Vec<Complex64>>,
    pub min_gram_eigenvalue: f64,
    /// Of the `K × |Λ|` column matrix, padded with zeros to length `K`.
    pub singular_values: Vec<f64>,
    pub tol: f64,
    pub defect_estimate: usize,
    /// Agreement with the estimate at truncation `2K`, when the data allow it.
    pub stable: Option<bool>,
    /// Estimates at `K` and `2K`.
    pub defect_range: (usize, usize),
}

fn columns(
    data: &SpectralData,
    g: &GeneratingFunction,
    lambda1: &[Complex64],
    lambda2: &[Complex64],
) -> Result<(Vec<ColumnLabel>, Vec<CoefficientVector>), DefectError> {
    let mut labels = Vec::new();
    let mut cols = Vec::new();
    for &l in lambda1 {
        cols.push(biorthogonal_column(data, g, l)?.coeffs);
        labels.push(ColumnLabel {
            lambda: l,
            kind: ColumnKind::Biorthogonal,
        });
    }
    for &l in lambda2 {
        let c = kernel_column(data, l);
        let n = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols.push(c.iter().map(|x| x / n).collect());
        labels.push(ColumnLabel {
            lambda: l,
            kind: ColumnKind::Kernel,
        });
    }
    Ok((labels, cols))
}

fn spectrum(cols: &[CoefficientVector], k: usize) -> (Vec<f64>, DMatrix<Complex64>) {
    let m = DMatrix::from_fn(k, cols.len(), |i, j| {
        let c = &cols[j][..k];
        let n = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if n > 0.0 {
            c[i] / n
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut sv: Vec<f64> = if cols.is_empty() {
        Vec::new()
    } else {
        m.clone().svd(false, false).singular_values.iter().copied().collect()
    };
    sv.sort_by(|a, b| b.total_cmp(a));
    sv.resize(k, 0.0);
    (sv, m)
}

fn count_below(sv: &[f64], tol: f64) -> usize {
    let top = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| s < tol * top).count()
}

/// Numerical defect of the mixed system in the first `K` coefficients.
pub fn mixed_gram(
    data: &SpectralData,
    g: &GeneratingFunction,
    lambda1: &[Complex64],
    lambda2: &[Complex64],
    k: usize,
    tol: f64,
) -> Result<GramReport, DefectError> {
    let count = lambda1.len() + lambda2.len();
    let k_eff = k.min(data.len());
    if k_eff < count || k_eff == 0 {
        return Err(DefectError::TruncationTooSmall { k, columns: count });
    }
    let (labels, cols) = columns(data, g, lambda1, lambda2)?;
    let (sv, m) = spectrum(&cols, k_eff);
    let gram_m = m.adjoint() * &m * Complex64::new(PI * PI, 0.0);
    let min_gram_eigenvalue = if count == 0 {
        0.0
    } else {
        SymmetricEigen::new(gram_m.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    };
    // (F, G) = π² Σ a conj(b), entry (i, j) = (col_j, col_i)
    let gram = (0..count)
        .map(|i| (0..count).map(|j| gram_m[(i, j)]).collect())
        .collect();
    let defect_estimate = count_below(&sv, tol);
    let (stable, defect_range) = if data.len() >= 2 * k_eff {
        let (sv2, _) = spectrum(&cols, 2 * k_eff);
        let d2 = count_below(&sv2, tol);
        (Some(d2 == defect_estimate), (defect_estimate.min(d2), defect_estimate.max(d2)))
    } else {
        (None, (defect_estimate, defect_estimate))
    };
    Ok(GramReport {
        truncation: k_eff,
        labels,
        gram,
        min_gram_eigenvalue,
        singular_values: sv,
        tol,
        defect_estimate,
        stable,
        defect_range,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectProfile {
    pub n: usize,
    pub truncations: Vec<usize>,
    pub estimates: Vec<usize>,
    pub smallest_ratios: Vec<Vec<f64>>,
    /// `max |φ_l(g_λ)| / Σ|terms|` over `λ ∈ Λ` and `l < N` at each truncation.
    pub annihilation: Vec<f64>,
    /// The estimate is the same at every truncation.
    pub stable: bool,
}

/// Runs the biorthogonal construction of defect `n` at each truncation, with every
/// zero of `G` in `Λ₁`, and compares the resulting defect estimates.
pub fn bior_defect_profile(
    make: impl Fn(usize) -> SpectralData,
    n: usize,
    truncations: &[usize],
    tol: f64,
) -> Result<DefectProfile, DefectError> {
    let mut estimates = Vec::new();
    let mut smallest_ratios = Vec::new();
    let mut annihilation = Vec::new();
    for &k in truncations {
        let data = make(k);
        let r = bior_construct(&data, n)?;
        let lambda: Vec<Complex64> = r.generating_function.zeros.clone();
        let report = mixed_gram(&data, &r.generating_function, &lambda, &[], k, tol)?;
        let top = report.singular_values[0];
        let tail = report.singular_values.len().saturating_sub(n + 2);
        smallest_ratios.push(report.singular_values[tail..].iter().map(|s| s / top).collect());
        estimates.push(report.defect_estimate);
        let mut worst: f64 = 0.0;
        for &l in &lambda {
            let col = biorthogonal_column(&data, &r.generating_function, l)?;
            for j in 0..n as u32 {
                let terms = col.coeffs.iter().zip(&data.t).zip(&data.mu).map(|((c, t), m)| c * t.powi(j as i32) * m.sqrt());
                worst = worst.max(relative_sum(terms));
            }
        }
        annihilation.push(worst);
    }
    let stable = estimates.windows(2).all(|w| w[0] == w[1]);
    Ok(DefectProfile {
        n,
        truncations: truncations.to_vec(),
        estimates,
        smallest_ratios,
        annihilation,
        stable,
    })
}

/// `(g_λ, k_{λ'})` for all pairs, divided by the product of the column norms.
pub fn biorthogonality_matrix(
    data: &SpectralData,
    g: &GeneratingFunction,
    lambda: &[Complex64],
) -> Result<Vec<Vec<Complex64>>, DefectError> {
    let bior: Vec<ScaledColumn> = lambda
        .iter()
        .map(|&l| biorthogonal_column(data, g, l))
        .collect::<Result<_, _>>()?;
    Ok(bior
        .iter()
        .map(|b| {
            lambda
                .iter()
                .map(|&l2| {
                    let k = kernel_column(data, l2);
                    let kn = k.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                    inner_product(&b.coeffs, &k) / (PI * PI * kn)
                })
                .collect()
        })
        .collect())
}

/// `φ_l(f) = Σ c_n t_n^l μ_n^{1/2}`.
pub fn moment_functional(data: &SpectralData, f: &[Complex64], l: u32) -> Complex64 {
    let s: ComplexSum = f
        .iter()
        .zip(&data.t)
        .zip(&data.mu)
        .map(|((c, t), m)| c * t.powi(l as i32) * m.sqrt())
        .collect();
    s.value()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiLadder {
    pub l: u32,
    /// `(y, y^{l+1} F(iy)/A(iy))`.
    pub values: Vec<(f64, Complex64)>,
    /// Relative change between the last two rungs; small values suggest a limit.
    pub trend: f64,
    pub certified: bool,
}

/// `ψ_l(f) = lim y^{l+1} F(iy)/A(iy)` sampled on `y = 10^j`; never certified.
pub fn psi_ladder(data: &SpectralData, f: &[Complex64], l: u32, ys: &[f64]) -> PsiLadder {
    let values: Vec<(f64, Complex64)> = ys
        .iter()
        .map(|&y| {
            let z = Complex64::new(0.0, y);
            let s: ComplexSum = f
                .iter()
                .zip(&data.t)
                .zip(&data.mu)
                .map(|((c, t), m)| c * m.sqrt() / (z - t))
                .collect();
            (y, s.value() * y.powi(l as i32 + 1))
        })
        .collect();
    let trend = match values.len() {
        0 | 1 => f64::NAN,
        n => {
            let (a, b) = (values[n - 2].1, values[n - 1].1);
            (b - a).norm() / b.norm().max(a.norm())
        }
    };
    PsiLadder {
        l,
        values,
        trend,
        certified: false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpolationReport {
    /// `|Σ b_n g_n/(μ_n^{1/2}(λ − t_n))| / Σ|·|` at each `λ ∈ Λ₁`.
    pub lambda1: Vec<f64>,
    /// `|Σ conj(a_n) μ_n^{1/2}/(λ − t_n)| / Σ|·|` at each `λ ∈ Λ₂`.
    pub lambda2: Vec<f64>,
    /// `|S(t_n) − A′(t_n) conj(a_n) b_n| / |A′(t_n) a_n b_n|` where a product form of `S` is given.
    pub nodal: Option<Vec<f64>>,
    pub max_residual: f64,
}

fn relative_sum(terms: impl Iterator<Item = Complex64>) -> f64 {
    let mut s = ComplexSum::new();
    let mut m = 0.0;
    for t in terms {
        m += t.norm();
        s.add(t);
    }
    if m > 0.0 {
        s.value().norm() / m
    } else {
        0.0
    }
}

/// Residuals of the interpolation equations behind exactness of the mixed system.
pub fn interpolation_residual(
    data: &SpectralData,
    g: &GeneratingFunction,
    a: &[Complex64],
    b: &[Complex64],
    lambda1: &[Complex64],
    lambda2: &[Complex64],
    s_hint: Option<&GeneratingFunction>,
) -> Result<InterpolationReport, DefectError> {
    let gn = node_values(data, g);
    let mut out1 = Vec::new();
    for &l in lambda1 {
        off_grid(data, l)?;
        out1.push(relative_sum((0..data.len()).map(|n| b[n] * gn[n] / (data.mu[n].sqrt() * (l - data.t[n])))));
    }
    let mut out2 = Vec::new();
    for &l in lambda2 {
        off_grid(data, l)?;
        out2.push(relative_sum((0..data.len()).map(|n| a[n].conj() * data.mu[n].sqrt() / (l - data.t[n]))));
    }
    let nodal = s_hint.map(|s| {
        (0..data.len())
            .filter(|&n| a[n] * b[n] != Complex64::new(0.0, 0.0))
            .map(|n| {
                let sv = s.eval_product(Complex64::new(data.t[n], 0.0));
                let ap = a_prime_at_node(data, n).to_log_complex();
                let expect = ap * LogComplex::from_complex(a[n].conj() * b[n]);
                ((sv / expect).to_complex() - 1.0).norm()
            })
            .collect::<Vec<f64>>()
    });
    let max_residual = out1
        .iter()
        .chain(&out2)
        .chain(nodal.iter().flatten())
        .copied()
        .fold(0.0, f64::max);
    Ok(InterpolationReport {
        lambda1: out1,
        lambda2: out2,
        nodal,
        max_residual,
    })
}

/// `g_λ(z) = G(z)/(z − λ)` evaluated from the coefficient column.
pub fn eval_column(data: &SpectralData, coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let s: ComplexSum = coeffs
        .iter()
        .zip(&data.t)
        .zip(&data.mu)
        .map(|((c, t), m)| c * m.sqrt() / (z - t))
        .collect();
    (log_a_unchecked(data, z) * LogComplex::from_complex(s.value())).to_complex()
}
