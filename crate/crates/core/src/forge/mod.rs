//! Explicit constructions of generating functions `h`, `S` with common zeros,
//! certificates that can be re-checked, and the auxiliary generating functions
//! used for biorthogonal systems.

mod bior;
mod case_ii;
mod case_iii;
mod case_iv;
mod cod;
mod genfn;
mod layout;
mod lift;
mod seed;
pub mod system;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::{check_power_separated, ClassifierConfig};
use crate::evaluator::{cauchy_real, EvalError, RealPoint};
use crate::numeric::CompensatedSum;
use crate::spectral::{restrict, SpectralData, SpectralError};

pub use bior::{bior_construct, BiorResult};
pub use case_ii::{case_ii_with_blocks, forge_case_ii, forge_case_ii_restricted};
pub use case_iii::{case_iii_with_blocks, forge_case_iii, forge_case_iii_restricted};
pub use case_iv::{case_iv_roots, case_iv_with_blocks, forge_case_iv, forge_case_iv_restricted};
pub use cod::{beta, build_generating_pair, divide_by_polynomial, mixed_generating_function, GeneratingPair};
pub use genfn::{aberth_zeros, GeneratingFunction, ZeroTag};
pub use layout::Layout;
pub use lift::lift_via_submu;
pub use seed::{infinite_defect_seed, SeedResult};
pub use system::{BlockSystem, SolverDiagnostics};

#[derive(Debug, Error)]
pub enum ForgeError {
    #[error("contraction factor {factor:.3e} does not meet the target {target:.3e}")]
    ContractionFailure { factor: f64, target: f64 },
    #[error("no admissible block for k = {k}: {reason}")]
    WitnessNotFound { k: usize, reason: String },
    #[error("sign condition fails: {value:.6e}")]
    SignConditionFailure { value: f64 },
    #[error("no zero of h/A in the bracket of block {k}")]
    RootNotFound { k: usize },
    #[error("dominance margin too small: off-diagonal total {total:.3e} exceeds {bound:.3e}")]
    DominanceFailure { total: f64, bound: f64 },
    #[error("common zeros do not satisfy the growth margin; {selected} selected, {required} required")]
    SubsequenceNeeded { selected: usize, required: usize },
    #[error("hypothesis fails: {0}")]
    HypothesisFailure(String),
    #[error("moment constraints leave no admissible direction")]
    DegenerateNullSpace,
    #[error("zero {zero} of D coincides with node {node}")]
    NodeCollision { zero: f64, node: usize },
    #[error("deg D = {degree} is too high for {nodes} nodes")]
    DegreeTooHigh { degree: usize, nodes: usize },
    #[error("support does not match the parent data: {0}")]
    IndexMismatch(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

impl ForgeError {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ContractionFailure { .. } => "ContractionFailure",
            Self::WitnessNotFound { .. } => "WitnessNotFound",
            Self::SignConditionFailure { .. } => "SignConditionFailure",
            Self::RootNotFound { .. } => "RootNotFound",
            Self::DominanceFailure { .. } => "DominanceFailure",
            Self::SubsequenceNeeded { .. } => "SubsequenceNeeded",
            Self::HypothesisFailure(_) => "HypothesisFailure",
            Self::DegenerateNullSpace => "DegenerateNullSpace",
            Self::NodeCollision { .. } => "NodeCollision",
            Self::DegreeTooHigh { .. } => "DegreeTooHigh",
            Self::IndexMismatch(_) => "IndexMismatch",
            Self::Eval(_) => "EvaluationError",
            Self::Spectral(e) => e.name(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    II,
    III,
    IV,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum IvVariant {
    /// Cluster of heavy mass before the pivot.
    #[default]
    PrefixDominated,
    /// Cluster of heavy weighted mass `μ/t²` after the pivot.
    TailDominated,
    /// Prefix first, tail variant when no prefix block exists.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForgeConfig {
    /// Target for `‖D⁻¹O‖∞` during greedy sparsification.
    pub epsilon: f64,
    /// Drop every cross-block term.
    pub mask_cross_terms: bool,
    pub max_iterations: usize,
    /// Relative residual accepted for `h(s_k) = S(s_k) = 0`.
    pub residual_tol: f64,
    /// Case II: `d_{n_k} ≤ t_{n_k} k^{-p}`.
    pub ii_gap_exponent: f64,
    /// Case III: `d_{n_k} ≤ t_{n_k}^{-p}`.
    pub iii_gap_power: f64,
    /// Case III: `k^p t_{n_j} < ε t_{n_k}` for `j < k`.
    pub iii_sparsity_exponent: f64,
    /// Case III: lower bound on the near mass.
    pub iii_mass_floor: f64,
    /// Case IV: cluster mass exceeds `k^p μ_{n_k}`.
    pub iv_mass_exponent: f64,
    /// Case IV: bound on the total off-diagonal mass of the `b` system.
    pub iv_dominance_total: f64,
    /// Case IV: `|s_k − t_{n_k}| ≤ ratio·|t_{n_k}|`.
    pub iv_offset_ratio: f64,
    /// Case IV: bound on the earlier/later cluster smallness ratios.
    pub iv_smallness: f64,
    pub iv_variant: IvVariant,
    /// Upper limit on candidate pivots examined per block.
    pub max_candidates: usize,
    pub classifier: ClassifierConfig,
}

impl Default for ForgeConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.125,
            mask_cross_terms: false,
            max_iterations: 10_000,
            residual_tol: 1e-10,
            ii_gap_exponent: 6.0,
            iii_gap_power: 2.0,
            iii_sparsity_exponent: 6.0,
            iii_mass_floor: 1e-3,
            iv_mass_exponent: 6.0,
            iv_dominance_total: 0.01,
            iv_offset_ratio: 0.1,
            iv_smallness: 0.25,
            iv_variant: IvVariant::PrefixDominated,
            max_candidates: 4096,
            classifier: ClassifierConfig::default(),
        }
    }
}

impl ForgeConfig {
    fn relaxations(&self, case: CaseTag) -> Vec<Relaxation> {
        let mut out = Vec::new();
        let mut push = |name: &str, required: f64, used: f64| {
            if used != required {
                out.push(Relaxation {
                    name: name.to_string(),
                    required,
                    used,
                });
            }
        };
        match case {
            CaseTag::II => push("gap-exponent", 6.0, self.ii_gap_exponent),
            CaseTag::III => {
                push("gap-power", 2.0, self.iii_gap_power);
                push("sparsity-exponent", 6.0, self.iii_sparsity_exponent);
            }
            CaseTag::IV => {
                push("mass-exponent", 6.0, self.iv_mass_exponent);
                push("dominance-total", 0.01, self.iv_dominance_total);
            }
        }
        out
    }
}

/// A hypothesis used with a weaker constant than the asymptotic argument asks for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Relaxation {
    pub name: String,
    pub required: f64,
    pub used: f64,
}

/// Block of a construction; every index refers to `Certificate::data`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BlockSpec {
    /// Case II: zero inside `(t_left, t_right)`; `mirrored` when `μ_left > μ_right`.
    Pair {
        k: usize,
        left: usize,
        right: usize,
        mirrored: bool,
    },
    /// Case III: zero at distance 1 from `near` on the side away from `far`.
    NearFar { k: usize, near: usize, far: usize },
    /// Case IV: cluster `first..=last` and pivot.
    Cluster {
        k: usize,
        first: usize,
        last: usize,
        pivot: usize,
    },
}

impl BlockSpec {
    pub fn k(&self) -> usize {
        match *self {
            Self::Pair { k, .. } | Self::NearFar { k, .. } | Self::Cluster { k, .. } => k,
        }
    }

    pub fn nodes(&self) -> Vec<usize> {
        match *self {
            Self::Pair { left, right, .. } => vec![left, right],
            Self::NearFar { near, far, .. } => vec![near.min(far), near.max(far)],
            Self::Cluster { first, last, pivot, .. } => {
                let mut v: Vec<usize> = (first..=last).collect();
                v.push(pivot);
                v.sort_unstable();
                v.dedup();
                v
            }
        }
    }

    fn map(&self, f: impl Fn(usize) -> usize) -> Self {
        match *self {
            Self::Pair { k, left, right, mirrored } => Self::Pair {
                k,
                left: f(left),
                right: f(right),
                mirrored,
            },
            Self::NearFar { k, near, far } => Self::NearFar {
                k,
                near: f(near),
                far: f(far),
            },
            Self::Cluster { k, first, last, pivot } => Self::Cluster {
                k,
                first: f(first),
                last: f(last),
                pivot: f(pivot),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockParameters {
    pub k: usize,
    pub r: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroResidual {
    pub k: usize,
    /// `|h/A(s)| / Σ|a_n μ_n^{1/2}/(s − t_n)|`.
    pub h: f64,
    /// `|S/A(s)| / Σ|a_n b_n/(s − t_n)|`.
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationCheck {
    /// Exponent `M` in `dist(s_k, T) ≳ |s_k|^{-M}`.
    pub exponent: u32,
    pub distances: Vec<f64>,
    /// `min_k dist(s_k,T)·max(|s_k|,1)^M`.
    pub min_scaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub row_sums: Vec<f64>,
    pub total_off_diagonal: f64,
    /// `1/max row sum`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    pub dot_ab: f64,
    pub residuals: Vec<ZeroResidual>,
    pub separation: SeparationCheck,
    /// `(y, |y·h(iy)/A(iy)|)`.
    pub h_lower: Vec<(f64, f64)>,
    /// Case III: `a_0 μ_0^{1/2} + Σ D_k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign_condition: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dominance: Option<DominanceReport>,
    /// Case IV: the free terms `u_k`, and `|u_k|·t_{n_k}/(k²Δ_k)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<(f64, f64)>>,
    /// Case IV: earlier-cluster and later-cluster smallness ratios.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smallness: Option<Vec<(f64, f64)>>,
    /// Case IV: sign changes of `h/A` in each root bracket.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_counts: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub case: CaseTag,
    pub data: SpectralData,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub zeros: Vec<RealPoint>,
    pub blocks: Vec<BlockSpec>,
    /// Case III anchor node with `a = b = 10`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<usize>,
    /// Indices of the construction set `𝒩` in `data`.
    pub support: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameters: Vec<BlockParameters>,
    pub solver: SolverDiagnostics,
    pub checks: Checks,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relaxations: Vec<Relaxation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub masked: bool,
    /// Largest residual on the restricted grid before lifting.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_residual: Option<f64>,
}

impl Certificate {
    pub fn max_residual(&self) -> f64 {
        self.checks
            .residuals
            .iter()
            .map(|r| r.h.max(r.s))
            .fold(0.0, f64::max)
    }

    /// Weights `a_n μ_n^{1/2}` of `h/A`.
    pub fn h_weights(&self) -> Vec<f64> {
        self.a.iter().zip(&self.data.mu).map(|(a, m)| a * m.sqrt()).collect()
    }

    /// Weights `a_n b_n` of `S/A`.
    pub fn s_weights(&self) -> Vec<f64> {
        self.a.iter().zip(&self.b).map(|(a, b)| a * b).collect()
    }
}

fn rel_value(data: &SpectralData, w: &[f64], p: &RealPoint) -> f64 {
    match cauchy_real(data, w, p) {
        Ok((v, scale)) if scale > 0.0 => v.abs() / scale,
        Ok((v, _)) => v.abs(),
        Err(_) => f64::NAN,
    }
}

/// `|y·Σ w_n/(iy − t_n)|`; the real part is `−Σ w t/(t²+y²)` and the imaginary part `−Σ w y/(t²+y²)`.
fn h_lower_at(data: &SpectralData, w: &[f64], y: f64) -> f64 {
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for (n, &wn) in w.iter().enumerate() {
        if wn == 0.0 {
            continue;
        }
        let t = data.t[n];
        let den = t * t + y * y;
        re.add(-wn * t * y / den);
        im.add(-wn * y * y / den);
    }
    re.value().hypot(im.value())
}

fn h_lower_ladder(data: &SpectralData) -> Vec<f64> {
    let tmax = data.t.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let mut ys = vec![1e2, 1e4, 1e6, 10.0 * tmax, 1e4 * tmax];
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    ys
}

pub(crate) fn common_checks(
    data: &SpectralData,
    a: &[f64],
    b: &[f64],
    zeros: &[RealPoint],
    cfg: &ClassifierConfig,
) -> Checks {
    let hw: Vec<f64> = a.iter().zip(&data.mu).map(|(a, m)| a * m.sqrt()).collect();
    let sw: Vec<f64> = a.iter().zip(b).map(|(a, b)| a * b).collect();
    let dot_ab = sw.iter().copied().collect::<CompensatedSum>().value();
    let residuals = zeros
        .iter()
        .enumerate()
        .map(|(i, p)| ZeroResidual {
            k: i + 1,
            h: rel_value(data, &hw, p),
            s: rel_value(data, &sw, p),
        })
        .collect();
    let exponent = check_power_separated(data, cfg).n.unwrap_or(cfg.n_max) + 1;
    let distances: Vec<f64> = zeros.iter().map(|p| p.dist_to_nodes(data)).collect();
    let min_scaled = zeros
        .iter()
        .zip(&distances)
        .map(|(p, d)| d * p.value.abs().max(1.0).powi(exponent as i32))
        .fold(f64::INFINITY, f64::min);
    let h_lower = h_lower_ladder(data)
        .into_iter()
        .map(|y| (y, h_lower_at(data, &hw, y)))
        .collect();
    Checks {
        dot_ab,
        residuals,
        separation: SeparationCheck {
            exponent,
            distances,
            min_scaled,
        },
        h_lower,
        sign_condition: None,
        dominance: None,
        u: None,
        smallness: None,
        root_counts: None,
    }
}

/// Outcome of re-deriving every certificate property from `(data, a, b, s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub failures: Vec<String>,
    pub max_residual: f64,
    pub dot_ab: f64,
    pub contraction_factor: f64,
    pub min_separation: f64,
}

/// Re-checks a certificate without trusting any stored diagnostic.
pub fn verify(cert: &Certificate, tol: f64) -> VerifyReport {
    let mut failures = Vec::new();
    let data = &cert.data;
    let n = data.len();
    if cert.a.len() != n || cert.b.len() != n {
        failures.push(format!("coefficient length {}/{} for {} nodes", cert.a.len(), cert.b.len(), n));
        return VerifyReport {
            passed: false,
            failures,
            max_residual: f64::NAN,
            dot_ab: f64::NAN,
            contraction_factor: f64::NAN,
            min_separation: f64::NAN,
        };
    }
    let checks = common_checks(data, &cert.a, &cert.b, &cert.zeros, &ClassifierConfig::default());
    let max_residual = checks.residuals.iter().map(|r| r.h.max(r.s)).fold(0.0, f64::max);
    if !(max_residual <= tol) {
        failures.push(format!("common-zero residual {max_residual:.3e} exceeds {tol:.3e}"));
    }
    if !(checks.dot_ab > 0.0) {
        failures.push(format!("Σ a_n b_n = {:.6e} is not positive", checks.dot_ab));
    }
    let min_sep = checks.separation.distances.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min_sep > 0.0) {
        failures.push("a common zero lies on a node".to_string());
    }
    if checks.h_lower.iter().any(|&(_, v)| !(v > 0.0)) {
        failures.push("|h(iy)| vanishes on the sample ladder".to_string());
    }
    if !cert.a.iter().chain(&cert.b).all(|x| x.is_finite()) {
        failures.push("non-finite coefficient".to_string());
    }
    let outside: Vec<usize> = (0..n)
        .filter(|i| !cert.support.contains(i) && (cert.a[*i] != 0.0 || cert.b[*i] != 0.0))
        .collect();
    if !outside.is_empty() {
        failures.push(format!("non-zero coefficients off the support at {outside:?}"));
    }

    let mut contraction_factor = f64::NAN;
    match rebuild(cert) {
        Ok((layout, sub, support)) => {
            let a: Vec<f64> = support.iter().map(|&i| cert.a[i]).collect();
            let b: Vec<f64> = support.iter().map(|&i| cert.b[i]).collect();
            contraction_factor = layout.system(&sub, cert.masked).contraction();
            if !(contraction_factor < 0.5) {
                failures.push(format!("contraction factor {contraction_factor:.3e} is not below 1/2"));
            }
            for (k, r, q) in layout.params_from(&a, &b) {
                if !(r > 0.5 && r < 1.5 && q > 0.5 && q < 1.5) {
                    failures.push(format!("block {k}: (r, q) = ({r:.6}, {q:.6}) outside (1/2, 3/2)"));
                }
            }
            if let Err(e) = layout_consistent(&layout, &a, &b) {
                failures.push(e);
            }
            if cert.case == CaseTag::III {
                let v = case_iii::sign_condition(&sub, &a);
                if !(v > 0.0) {
                    failures.push(format!("sign condition a_0 μ_0^(1/2) + Σ D_k = {v:.6e}"));
                }
            }
            if cert.case == CaseTag::IV {
                if b.iter().any(|&x| !(x > 0.0)) {
                    failures.push("b has a non-positive entry on the support".to_string());
                }
                let counts = case_iv::root_counts(&sub, &a, &layout.blocks);
                for (i, c) in counts.iter().enumerate() {
                    if *c != 1 {
                        failures.push(format!("block {}: {c} sign changes of h/A in the root bracket", i + 1));
                    }
                }
            }
        }
        Err(e) => failures.push(format!("layout cannot be rebuilt: {e}")),
    }
    VerifyReport {
        passed: failures.is_empty(),
        failures,
        max_residual,
        dot_ab: checks.dot_ab,
        contraction_factor,
        min_separation: checks.separation.min_scaled,
    }
}

/// Fixed coefficients of the layout must match the certificate exactly.
fn layout_consistent(layout: &Layout, a: &[f64], b: &[f64]) -> Result<(), String> {
    for (n, c) in layout.coefs.iter().enumerate() {
        let fixed_a = c.a.var.is_none();
        let fixed_b = c.b.var.is_none();
        let rel = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs());
        if (fixed_a && !rel(c.a.constant, a[n])) || (fixed_b && !rel(c.b.constant, b[n])) {
            return Err(format!("node {n}: coefficients differ from the block layout"));
        }
    }
    Ok(())
}

/// Block system of a certificate on its support, with the unknowns read back from `(a, b)`.
pub fn certificate_system(cert: &Certificate) -> Result<(BlockSystem, Vec<f64>), ForgeError> {
    let (layout, sub, support) = rebuild(cert)?;
    let mut x = vec![f64::NAN; layout.n_vars];
    for (j, c) in layout.coefs.iter().enumerate() {
        let n = support[j];
        for (aff, val) in [(c.a, cert.a[n]), (c.b, cert.b[n])] {
            if let Some((v, coef)) = aff.var {
                x[v] = (val - aff.constant) / coef;
            }
        }
    }
    Ok((layout.system(&sub, cert.masked), x))
}

/// Layout on the restricted data together with zeros in local coordinates.
fn rebuild(cert: &Certificate) -> Result<(Layout, SpectralData, Vec<usize>), ForgeError> {
    let mut support = cert.support.clone();
    support.sort_unstable();
    support.dedup();
    if support.is_empty() {
        return Err(ForgeError::IndexMismatch("empty support".into()));
    }
    let r = restrict(&cert.data, &support)?;
    let pos = |i: usize| -> Result<usize, ForgeError> {
        support
            .binary_search(&i)
            .map_err(|_| ForgeError::IndexMismatch(format!("block node {i} not in the support")))
    };
    let mut blocks = Vec::new();
    for b in &cert.blocks {
        for node in b.nodes() {
            pos(node)?;
        }
        blocks.push(b.map(|i| pos(i).unwrap()));
    }
    let zeros: Vec<RealPoint> = cert
        .zeros
        .iter()
        .map(|p| match p.anchor {
            Some(a) => match support.binary_search(&a) {
                Ok(j) => RealPoint::near(&r.data, j, p.offset),
                Err(_) => RealPoint::anchored(&r.data, p.value),
            },
            None => RealPoint::anchored(&r.data, p.value),
        })
        .collect();
    let anchor = match cert.anchor {
        Some(a) => Some(pos(a)?),
        None => None,
    };
    let layout = match cert.case {
        CaseTag::II => layout::layout_ii(&r.data, &blocks)?,
        CaseTag::III => layout::layout_iii(&r.data, anchor, &blocks)?,
        CaseTag::IV => layout::layout_iv(&r.data, &blocks, &zeros)?,
    };
    Ok((layout, r.data, support))
}

/// Contractive fixed-point solve of a layout's block system.
pub(crate) fn solve_layout(
    data: &SpectralData,
    layout: &Layout,
    cfg: &ForgeConfig,
) -> Result<(Vec<f64>, Vec<f64>, SolverDiagnostics), ForgeError> {
    let system = layout.system(data, cfg.mask_cross_terms);
    let factor = system.contraction();
    if !(factor < 1.0) {
        return Err(ForgeError::ContractionFailure { factor, target: 1.0 });
    }
    let (x, diag) = system.fixed_point(cfg.max_iterations);
    let (a, b) = layout.coefficients(&x);
    Ok((a, b, diag))
}

/// Assembles a certificate on `data` with every node in the support.
pub(crate) fn finish(
    case: CaseTag,
    data: &SpectralData,
    layout: &Layout,
    anchor: Option<usize>,
    (a, b, solver): (Vec<f64>, Vec<f64>, SolverDiagnostics),
    cfg: &ForgeConfig,
) -> Certificate {
    let checks = common_checks(data, &a, &b, &layout.zeros, &cfg.classifier);
    let parameters = layout
        .params_from(&a, &b)
        .into_iter()
        .map(|(k, r, q)| BlockParameters { k, r, q })
        .collect();
    Certificate {
        case,
        data: data.clone(),
        a,
        b,
        zeros: layout.zeros.clone(),
        blocks: layout.blocks.clone(),
        anchor,
        support: (0..data.len()).collect(),
        parameters,
        solver,
        checks,
        relaxations: cfg.relaxations(case),
        variant: None,
        masked: cfg.mask_cross_terms,
        sub_residual: None,
    }
}

pub(crate) fn params_ok(cert: &Certificate) -> bool {
    cert.parameters
        .iter()
        .all(|p| p.r > 0.5 && p.r < 1.5 && p.q > 0.5 && p.q < 1.5)
}
