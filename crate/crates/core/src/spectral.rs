//! Spectral data `(T, μ)`: validation, generators, restriction and the tail model.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Kind tag of the idealized continuation beyond the stored prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TailKind {
    #[default]
    None,
    Geometric,
    Power,
}

/// Continuation of the stored prefix past its last node.
///
/// * `geometric`: `t_{K+j} = t_K·ratio^j`, `μ_{K+j} = μ_K·mass_ratio^j`.
/// * `power`: with 1-based index `n > K`, `t_n = t_K·(n/K)^exponent` and
///   `μ_n = μ_K·(n/K)^mass_ratio`; here `mass_ratio` is a growth exponent, default 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct TailModel {
    pub kind: TailKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
}

/// Convergence status of a series under the tail model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tri {
    True,
    False,
    Undetermined,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

impl TailModel {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn geometric(ratio: f64, mass_ratio: f64) -> Self {
        Self {
            kind: TailKind::Geometric,
            ratio: Some(ratio),
            mass_ratio: Some(mass_ratio),
            exponent: None,
        }
    }

    pub fn power(exponent: f64, mass_exponent: f64) -> Self {
        Self {
            kind: TailKind::Power,
            ratio: None,
            mass_ratio: Some(mass_exponent),
            exponent: Some(exponent),
        }
    }

    pub fn is_none(&self) -> bool {
        self.kind == TailKind::None
    }

    fn q(&self) -> f64 {
        self.ratio.unwrap_or(f64::NAN)
    }

    fn rho(&self) -> f64 {
        match self.kind {
            TailKind::Geometric => self.mass_ratio.unwrap_or(1.0),
            _ => self.mass_ratio.unwrap_or(0.0),
        }
    }

    fn p(&self) -> f64 {
        self.exponent.unwrap_or(f64::NAN)
    }

    /// Growth of `t_{n+1}/t_n` along the tail: `q` for geometric, 1 for power.
    pub fn asymptotic_ratio(&self) -> Option<f64> {
        match self.kind {
            TailKind::None => None,
            TailKind::Geometric => Some(self.q()),
            TailKind::Power => Some(1.0),
        }
    }

    /// Convergence of `Σ_tail t^{2j} μ` for a given power `j` (may be negative).
    pub fn weighted_mass_converges(&self, two_j: f64) -> Tri {
        match self.kind {
            TailKind::None => Tri::Undetermined,
            TailKind::Geometric => Tri::from_bool(self.rho() * self.q().powf(two_j) < 1.0),
            TailKind::Power => Tri::from_bool(self.rho() + self.p() * two_j < -1.0),
        }
    }

    /// Closed-form `Σ_{j≥1} μ_{K+j}·t_{K+j}^{power}` given the last stored node, or ∞.
    ///
    /// Exact for geometric tails; for power tails an upper bound by the integral test.
    pub fn weighted_tail_sum(&self, t_last: f64, mu_last: f64, power: f64, count: usize) -> f64 {
        match self.kind {
            TailKind::None => 0.0,
            TailKind::Geometric => {
                let g = self.rho() * self.q().powf(power);
                if g < 1.0 {
                    mu_last * t_last.powf(power) * g / (1.0 - g)
                } else {
                    f64::INFINITY
                }
            }
            TailKind::Power => {
                let e = self.rho() + self.p() * power;
                if e < -1.0 {
                    let k = count as f64;
                    mu_last * t_last.powf(power) * k / (-e - 1.0)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// First `count` continuation nodes `(t, μ)` after the stored prefix.
    pub fn extend(&self, t_last: f64, mu_last: f64, stored: usize, count: usize) -> Vec<(f64, f64)> {
        match self.kind {
            TailKind::None => Vec::new(),
            TailKind::Geometric => (1..=count)
                .map(|j| {
                    (
                        t_last * self.q().powi(j as i32),
                        mu_last * self.rho().powi(j as i32),
                    )
                })
                .collect(),
            TailKind::Power => {
                let k = stored as f64;
                (1..=count)
                    .map(|j| {
                        let s = (k + j as f64) / k;
                        (t_last * s.powf(self.p()), mu_last * s.powf(self.rho()))
                    })
                    .collect()
            }
        }
    }
}

/// Increasing real nodes with positive masses and a declared tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralData {
    pub t: Vec<f64>,
    pub mu: Vec<f64>,
    #[serde(default)]
    pub tail: TailModel,
    /// Index of the node labelled `n = 0` for two-sided grids.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<i64>,
}

/// One violated invariant of spectral data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "PascalCase")]
pub enum Violation {
    LengthMismatch { t: usize, mu: usize },
    Empty,
    NonFinite { index: usize },
    NonIncreasingNodes { index: usize },
    ZeroNode { index: usize },
    NonPositiveMass { index: usize },
    DivergentTail { reason: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::LengthMismatch { t, mu } => write!(f, "LengthMismatch: {t} nodes, {mu} masses"),
            Violation::Empty => write!(f, "Empty: no nodes"),
            Violation::NonFinite { index } => write!(f, "NonFinite at index {index}"),
            Violation::NonIncreasingNodes { index } => write!(f, "NonIncreasingNodes at index {index}"),
            Violation::ZeroNode { index } => write!(f, "ZeroNode at index {index}"),
            Violation::NonPositiveMass { index } => write!(f, "NonPositiveMass at index {index}"),
            Violation::DivergentTail { reason } => write!(f, "DivergentTail: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("invalid spectral data: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("InvalidRatio: lacunary ratio must exceed 1, got {0}")]
    InvalidRatio(f64),
    #[error("InvalidExponent: {0}")]
    InvalidExponent(String),
    #[error("EmptySelection: index set is empty")]
    EmptySelection,
    #[error("IndexOutOfRange: {index} not below {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("InvalidMassRule: {0}")]
    InvalidMassRule(String),
}

impl SpectralError {
    /// Short machine-readable name of the error.
    pub fn name(&self) -> &'static str {
        match self {
            SpectralError::Invalid(v) => match v.first() {
                Some(Violation::NonIncreasingNodes { .. }) => "NonIncreasingNodes",
                Some(Violation::ZeroNode { .. }) => "ZeroNode",
                Some(Violation::NonPositiveMass { .. }) => "NonPositiveMass",
                Some(Violation::DivergentTail { .. }) => "DivergentTail",
                _ => "InvalidData",
            },
            SpectralError::InvalidRatio(_) => "InvalidRatio",
            SpectralError::InvalidExponent(_) => "InvalidExponent",
            SpectralError::EmptySelection => "EmptySelection",
            SpectralError::IndexOutOfRange { .. } => "IndexOutOfRange",
            SpectralError::InvalidMassRule(_) => "InvalidMassRule",
        }
    }
}

/// Validates raw node and mass lists, collecting every violated invariant.
pub fn validate(t: Vec<f64>, mu: Vec<f64>, tail: TailModel) -> Result<SpectralData, SpectralError> {
    SpectralData {
        t,
        mu,
        tail,
        origin: None,
    }
    .validated()
}

impl SpectralData {
    /// Builds and validates data with the given tail.
    pub fn new(t: Vec<f64>, mu: Vec<f64>, tail: TailModel) -> Result<Self, SpectralError> {
        validate(t, mu, tail)
    }

    /// Consumes unchecked data (for example freshly deserialized) and validates it.
    pub fn validated(self) -> Result<Self, SpectralError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(SpectralError::Invalid(v))
        }
    }

    pub fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.t.len() != self.mu.len() {
            v.push(Violation::LengthMismatch {
                t: self.t.len(),
                mu: self.mu.len(),
            });
        }
        if self.t.is_empty() {
            v.push(Violation::Empty);
        }
        for (i, &x) in self.t.iter().enumerate() {
            if !x.is_finite() {
                v.push(Violation::NonFinite { index: i });
            } else if x == 0.0 {
                v.push(Violation::ZeroNode { index: i });
            }
            if i > 0 && !(x > self.t[i - 1]) {
                v.push(Violation::NonIncreasingNodes { index: i });
            }
        }
        for (i, &m) in self.mu.iter().enumerate() {
            if !(m > 0.0) || !m.is_finite() {
                v.push(Violation::NonPositiveMass { index: i });
            }
        }
        if let Some(reason) = self.tail_problem() {
            v.push(Violation::DivergentTail { reason });
        }
        v
    }

    fn tail_problem(&self) -> Option<String> {
        let tail = &self.tail;
        match tail.kind {
            TailKind::None => None,
            TailKind::Geometric => {
                let q = tail.ratio?;
                let rho = tail.mass_ratio.unwrap_or(1.0);
                if tail.exponent.is_some() {
                    return Some("geometric tail takes no exponent".into());
                }
                if !(q > 1.0) || !q.is_finite() {
                    return Some(format!("geometric ratio {q} must exceed 1"));
                }
                if !(rho > 0.0) || !rho.is_finite() {
                    return Some(format!("mass ratio {rho} must be positive"));
                }
                if self.t.last().is_some_and(|&t| t < 0.0) {
                    return Some("geometric tail needs a positive last node".into());
                }
                if rho / (q * q) >= 1.0 {
                    return Some(format!(
                        "sum of mu/(t^2+1) diverges: mass_ratio/ratio^2 = {} >= 1",
                        rho / (q * q)
                    ));
                }
                None
            }
            TailKind::Power => {
                let Some(p) = tail.exponent else {
                    return Some("power tail needs an exponent".into());
                };
                if tail.ratio.is_some() {
                    return Some("power tail takes no ratio".into());
                }
                let m = tail.mass_ratio.unwrap_or(0.0);
                if !(p > 0.0) || !p.is_finite() || !m.is_finite() {
                    return Some(format!("power exponent {p} must be positive"));
                }
                if self.t.last().is_some_and(|&t| t < 0.0) {
                    return Some("power tail needs a positive last node".into());
                }
                if m - 2.0 * p >= -1.0 {
                    return Some(format!(
                        "sum of mu/(t^2+1) diverges: mass growth {m} - 2*{p} >= -1"
                    ));
                }
                None
            }
        }
        .or_else(|| {
            (tail.kind == TailKind::Geometric && tail.ratio.is_none())
                .then(|| "geometric tail needs a ratio".to_string())
        })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Gap `d_n = t_{n+1} − t_n`.
    pub fn gap(&self, n: usize) -> f64 {
        self.t[n + 1] - self.t[n]
    }

    /// Number of nodes strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        self.t.partition_point(|&t| t < x)
    }

    /// Index of the node closest to `x` (ties go to the lower node).
    pub fn nearest_node(&self, x: f64) -> usize {
        let i = self.count_below(x);
        if i == 0 {
            return 0;
        }
        if i == self.t.len() {
            return i - 1;
        }
        if (x - self.t[i - 1]) <= (self.t[i] - x) {
            i - 1
        } else {
            i
        }
    }

    /// Index of `x` if it is exactly a node.
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let i = self.count_below(x);
        (i < self.t.len() && self.t[i] == x).then_some(i)
    }

    /// Returns a copy with every mass multiplied by `c`.
    pub fn scaled_masses(&self, c: f64) -> SpectralData {
        SpectralData {
            mu: self.mu.iter().map(|m| m * c).collect(),
            ..self.clone()
        }
    }

    /// Returns the prefix of the first `k` nodes (clamped), keeping the tail only when nothing is cut.
    pub fn prefix(&self, k: usize) -> SpectralData {
        let k = k.min(self.len());
        SpectralData {
            t: self.t[..k].to_vec(),
            mu: self.mu[..k].to_vec(),
            tail: if k == self.len() {
                self.tail
            } else {
                TailModel::none()
            },
            origin: self.origin.filter(|&o| (o as usize) < k),
        }
    }
}

/// Mass assignment rule for generated grids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassRule {
    /// `μ_n = c`.
    Constant(f64),
    /// `μ_n = t_n`.
    ProportionalToT,
    /// `μ_n = t_n² / P(|t_n|)` with polynomial coefficients in ascending order.
    ProportionalToTSquaredOver(Vec<f64>),
    /// `μ_n = |t_n|^e`.
    PowerOfT(f64),
    /// Explicit list, one per node.
    Custom(Vec<f64>),
}

impl MassRule {
    /// Parses `const:C`, `prop-t`, `t2-over:P0,P1,..`, `pow:E`, `list:M1,M2,..`.
    pub fn parse(s: &str) -> Result<Self, SpectralError> {
        let bad = || SpectralError::InvalidMassRule(s.to_string());
        let nums = |rest: &str| -> Result<Vec<f64>, SpectralError> {
            rest.split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
                .collect()
        };
        if s == "prop-t" {
            return Ok(MassRule::ProportionalToT);
        }
        let (head, rest) = s.split_once(':').ok_or_else(bad)?;
        match head {
            "const" => Ok(MassRule::Constant(rest.parse().map_err(|_| bad())?)),
            "pow" => Ok(MassRule::PowerOfT(rest.parse().map_err(|_| bad())?)),
            "t2-over" => Ok(MassRule::ProportionalToTSquaredOver(nums(rest)?)),
            "list" => Ok(MassRule::Custom(nums(rest)?)),
            _ => Err(bad()),
        }
    }

    fn masses(&self, t: &[f64]) -> Result<Vec<f64>, SpectralError> {
        Ok(match self {
            MassRule::Constant(c) => vec![*c; t.len()],
            MassRule::ProportionalToT => t.iter().map(|x| x.abs()).collect(),
            MassRule::ProportionalToTSquaredOver(p) => {
                if p.is_empty() {
                    return Err(SpectralError::InvalidMassRule("empty polynomial".into()));
                }
                t.iter()
                    .map(|&x| {
                        let ax = x.abs();
                        let den = p.iter().rev().fold(0.0, |acc, c| acc * ax + c);
                        x * x / den
                    })
                    .collect()
            }
            MassRule::PowerOfT(e) => t.iter().map(|x| x.abs().powf(*e)).collect(),
            MassRule::Custom(m) => {
                if m.len() != t.len() {
                    return Err(SpectralError::InvalidMassRule(format!(
                        "{} masses for {} nodes",
                        m.len(),
                        t.len()
                    )));
                }
                m.clone()
            }
        })
    }

    /// Exponent `e` such that `μ ~ t^e` asymptotically, when the rule determines one.
    fn growth_in_t(&self, masses: &[f64], t: &[f64]) -> f64 {
        match self {
            MassRule::Constant(_) => 0.0,
            MassRule::ProportionalToT => 1.0,
            MassRule::ProportionalToTSquaredOver(p) => {
                let deg = p.iter().rposition(|c| *c != 0.0).unwrap_or(0);
                2.0 - deg as f64
            }
            MassRule::PowerOfT(e) => *e,
            MassRule::Custom(_) => {
                let k = masses.len();
                if k < 2 {
                    0.0
                } else {
                    (masses[k - 1] / masses[k - 2]).ln() / (t[k - 1] / t[k - 2]).abs().ln()
                }
            }
        }
    }
}

/// Geometric grid `t_n = first·q^{n−1}`, `n = 1..count`, with a geometric tail.
pub fn gen_lacunary(ratio: f64, count: usize, first: f64, mass: &MassRule) -> Result<SpectralData, SpectralError> {
    if !(ratio > 1.0) || !ratio.is_finite() {
        return Err(SpectralError::InvalidRatio(ratio));
    }
    if count == 0 {
        return Err(SpectralError::EmptySelection);
    }
    let t: Vec<f64> = (0..count).map(|n| first * ratio.powi(n as i32)).collect();
    let mu = mass.masses(&t)?;
    let e = mass.growth_in_t(&mu, &t);
    let tail = TailModel::geometric(ratio, ratio.powf(e));
    validate(t, mu, tail)
}

/// Power grid `t_n = n^ρ`, `n = 1..count`, with a power tail.
///
/// Grids that collapse in floating point are rejected rather than deduplicated.
pub fn gen_power_separated(exponent: f64, count: usize, mass: &MassRule) -> Result<SpectralData, SpectralError> {
    if !(exponent > 0.0) || !exponent.is_finite() {
        return Err(SpectralError::InvalidExponent(format!(
            "exponent must be positive, got {exponent}"
        )));
    }
    if count == 0 {
        return Err(SpectralError::EmptySelection);
    }
    let t: Vec<f64> = (1..=count).map(|n| (n as f64).powf(exponent)).collect();
    if let Some(i) = t.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(SpectralError::InvalidExponent(format!(
            "nodes {} and {} collide in double precision",
            i,
            i + 1
        )));
    }
    let mu = mass.masses(&t)?;
    let e = mass.growth_in_t(&mu, &t);
    let tail = TailModel::power(exponent, e * exponent);
    validate(t, mu, tail)
}

/// Sub-data on a selected index set together with the bookkeeping needed for lifting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Restriction {
    pub data: SpectralData,
    /// Indices into the parent data, increasing.
    pub support: Vec<usize>,
    /// Parent indices not selected.
    pub complement: Vec<usize>,
}

/// Restricts data to the given indices (order and duplicates are normalized).
pub fn restrict(data: &SpectralData, indices: &[usize]) -> Result<Restriction, SpectralError> {
    if indices.is_empty() {
        return Err(SpectralError::EmptySelection);
    }
    let mut support = indices.to_vec();
    support.sort_unstable();
    support.dedup();
    if let Some(&bad) = support.iter().find(|&&i| i >= data.len()) {
        return Err(SpectralError::IndexOutOfRange {
            index: bad,
            len: data.len(),
        });
    }
    let mut keep = vec![false; data.len()];
    for &i in &support {
        keep[i] = true;
    }
    let complement = (0..data.len()).filter(|&i| !keep[i]).collect();
    let keeps_last = keep[data.len() - 1];
    let origin = data
        .origin
        .and_then(|o| support.iter().position(|&i| i as i64 == o))
        .map(|p| p as i64);
    let sub = SpectralData {
        t: support.iter().map(|&i| data.t[i]).collect(),
        mu: support.iter().map(|&i| data.mu[i]).collect(),
        tail: if keeps_last { data.tail } else { TailModel::none() },
        origin,
    };
    Ok(Restriction {
        data: sub,
        support,
        complement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_examples() {
        assert!(validate(vec![1.0, 2.0, 4.0], vec![1.0; 3], TailModel::none()).is_ok());
        let e = validate(vec![1.0, 1.0, 2.0], vec![1.0; 3], TailModel::none()).unwrap_err();
        assert_eq!(e.name(), "NonIncreasingNodes");
        let e = validate(vec![0.0, 1.0], vec![1.0; 2], TailModel::none()).unwrap_err();
        assert_eq!(e.name(), "ZeroNode");
    }

    #[test]
    fn validate_lists_every_violation() {
        let e = validate(vec![0.0, -1.0, 2.0], vec![1.0, -1.0, 0.0], TailModel::geometric(2.0, 8.0))
            .unwrap_err();
        let SpectralError::Invalid(v) = e else { panic!() };
        assert_eq!(v.len(), 5);
    }

    #[test]
    fn lacunary_examples() {
        let d = gen_lacunary(2.0, 5, 2.0, &MassRule::ProportionalToT).unwrap();
        assert_eq!(d.t, vec![2.0, 4.0, 8.0, 16.0, 32.0]);
        assert_eq!(d.mu, d.t);
        assert_eq!(d.tail, TailModel::geometric(2.0, 2.0));
        assert_eq!(
            gen_lacunary(1.0, 5, 2.0, &MassRule::Constant(1.0)),
            Err(SpectralError::InvalidRatio(1.0))
        );
        let d = gen_lacunary(2.0, 3, 1.0, &MassRule::Constant(1.0)).unwrap();
        assert_eq!(d.mu, vec![1.0; 3]);
    }

    #[test]
    fn power_examples() {
        let d = gen_power_separated(1.0, 4, &MassRule::Constant(1.0)).unwrap();
        assert_eq!(d.t, vec![1.0, 2.0, 3.0, 4.0]);
        let d = gen_power_separated(2.0, 3, &MassRule::Constant(1.0)).unwrap();
        assert_eq!(d.t, vec![1.0, 4.0, 9.0]);
        assert!(matches!(
            gen_power_separated(1e-300, 3, &MassRule::Constant(1.0)),
            Err(SpectralError::InvalidExponent(_))
        ));
    }

    #[test]
    fn power_tail_with_constant_mass_diverges_for_half_exponent() {
        let e = gen_power_separated(0.5, 10, &MassRule::Constant(1.0)).unwrap_err();
        assert_eq!(e.name(), "DivergentTail");
    }

    #[test]
    fn restrict_examples() {
        let d = validate(vec![1.0, 2.0, 4.0], vec![1.0; 3], TailModel::none()).unwrap();
        let r = restrict(&d, &[0, 2]).unwrap();
        assert_eq!(r.data.t, vec![1.0, 4.0]);
        assert_eq!(r.complement, vec![1]);
        let r = restrict(&d, &[2, 1, 0]).unwrap();
        assert_eq!(r.data, d);
        assert_eq!(restrict(&d, &[]), Err(SpectralError::EmptySelection));
    }

    #[test]
    fn json_schema_rejects_unknown_fields() {
        let ok = r#"{"t":[1,2],"mu":[1,1],"tail":{"kind":"geometric","ratio":2,"mass_ratio":1}}"#;
        let d: SpectralData = serde_json::from_str(ok).unwrap();
        assert!(d.validated().is_ok());
        let bad = r#"{"t":[1,2],"mu":[1,1],"extra":3}"#;
        assert!(serde_json::from_str::<SpectralData>(bad).is_err());
        let bad_tail = r#"{"t":[1,2],"mu":[1,1],"tail":{"kind":"none","q":2}}"#;
        assert!(serde_json::from_str::<SpectralData>(bad_tail).is_err());
    }

    #[test]
    fn mass_rule_parsing() {
        assert_eq!(MassRule::parse("const:1").unwrap(), MassRule::Constant(1.0));
        assert_eq!(MassRule::parse("prop-t").unwrap(), MassRule::ProportionalToT);
        assert_eq!(
            MassRule::parse("t2-over:1,0,1").unwrap(),
            MassRule::ProportionalToTSquaredOver(vec![1.0, 0.0, 1.0])
        );
        assert!(MassRule::parse("weird").is_err());
    }
}
