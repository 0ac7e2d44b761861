//! Strong M-basis dichotomy: verdicts, constants of condition (1.1) and failure-case witnesses.

use serde::{Deserialize, Serialize};

use crate::numeric::CompensatedSum;
use crate::spectral::{SpectralData, TailKind, Tri};

/// Failure case of a non-strong space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
    III,
    IV,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    StrongViaFiniteMeasure,
    StrongViaLacunary,
    NotStrong(Case),
    Undetermined,
}

/// Grid and floor of the power-separation search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    /// Largest exponent `N` tried.
    pub n_max: u32,
    /// A gap profile counts as separated with exponent `N` when `min d_n·max(|t_n|,1)^N ≥ c_floor`.
    pub c_floor: f64,
    /// Tail nodes materialized when taking suprema over the continuation.
    pub tail_terms: usize,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            n_max: 6,
            c_floor: 1e-3,
            tail_terms: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassSum {
    pub partial: f64,
    /// Closed-form tail contribution; `None` without a tail model, `inf` when divergent.
    pub tail_bound: Option<f64>,
    pub converges: Tri,
}

impl MassSum {
    pub fn total(&self) -> Option<f64> {
        self.tail_bound.map(|t| self.partial + t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeparation {
    pub power_separated: Tri,
    /// Least exponent on the grid satisfying the floor, prefix and tail combined.
    pub n: Option<u32>,
    /// `min d_n·max(|t_n|,1)^N` at the fitted `N` (or at `n_max` when none fits).
    pub c: f64,
    /// Exponent the tail model needs on its own.
    pub tail_exponent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationProfile {
    pub gaps: Vec<f64>,
    #[serde(flatten)]
    pub fit: PowerSeparation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupC {
    pub prefix_max: f64,
    /// Supremum over the materialized tail and its limit, when a tail is declared.
    pub tail_sup: Option<f64>,
    pub bounded: Tri,
}

/// Indices justifying a failure case, re-checkable from the data alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub case: Case,
    pub indices: Vec<usize>,
    /// The sequence whose trend is the witness (masses, `d_n/t_n`, `d_n|t_n|^N` or `C_n`).
    pub values: Vec<f64>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub mass_sum: MassSum,
    pub inf_mass: f64,
    pub inf_mass_zero: Tri,
    pub lacunarity_inf: Option<f64>,
    pub lacunary: Tri,
    #[serde(rename = "C_constants")]
    pub c_constants: Vec<f64>,
    pub sup_c: SupC,
    pub separation: SeparationProfile,
    pub witnesses: Option<Witness>,
    pub tail: crate::spectral::TailModel,
    pub caveats: Vec<String>,
}

/// Condition (i): `Σμ_n < ∞`, with the partial sum and closed-form tail bound.
pub fn check_condition_i(data: &SpectralData) -> (Tri, MassSum) {
    let partial = crate::numeric::sum::sum(&data.mu);
    let k = data.len();
    let tail = &data.tail;
    if tail.is_none() {
        return (
            Tri::Undetermined,
            MassSum {
                partial,
                tail_bound: None,
                converges: Tri::Undetermined,
            },
        );
    }
    let tb = tail.weighted_tail_sum(data.t[k - 1], data.mu[k - 1], 0.0, k);
    let conv = Tri::from_bool(tb.is_finite());
    (
        conv,
        MassSum {
            partial,
            tail_bound: Some(tb),
            converges: conv,
        },
    )
}

/// Lacunarity: minimum of `t_{n+1}/t_n` over consecutive positive nodes, combined with the tail.
pub fn check_lacunary(data: &SpectralData) -> (Tri, Option<f64>) {
    let prefix = data
        .t
        .windows(2)
        .filter(|w| w[0] > 0.0)
        .map(|w| w[1] / w[0])
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.min(r))));
    let inf = match (prefix, data.tail.asymptotic_ratio()) {
        (Some(p), Some(q)) => Some(p.min(q)),
        (p, q) => p.or(q),
    };
    let verdict = match data.tail.kind {
        TailKind::None => Tri::Undetermined,
        TailKind::Power => Tri::False,
        TailKind::Geometric => Tri::from_bool(inf.unwrap_or(f64::INFINITY) > 1.0),
    };
    (verdict, inf)
}

/// Per-node constants `C_n` of condition (1.1), including the tail's contribution.
pub fn condition_ii_constants(data: &SpectralData) -> Vec<f64> {
    let k = data.len();
    let tail_second = data
        .tail
        .weighted_tail_sum(data.t[k - 1], data.mu[k - 1], -2.0, k);
    constants_with_tail(&data.t, &data.mu, tail_second)
}

fn constants_with_tail(t: &[f64], mu: &[f64], tail_second: f64) -> Vec<f64> {
    let k = t.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| t[a].abs().total_cmp(&t[b].abs()));
    // prefix[i]: Σ μ over the i smallest |t|; suffix[i]: Σ μ/t² over the rest
    let mut prefix = vec![0.0; k + 1];
    let mut acc = CompensatedSum::new();
    for (i, &n) in order.iter().enumerate() {
        acc.add(mu[n]);
        prefix[i + 1] = acc.value();
    }
    let mut suffix = vec![0.0; k + 1];
    let mut acc = CompensatedSum::new();
    suffix[k] = 0.0;
    for i in (0..k).rev() {
        let n = order[i];
        acc.add(mu[n] / (t[n] * t[n]));
        suffix[i] = acc.value();
    }
    let mut c = vec![0.0; k];
    let mut i = 0;
    while i < k {
        // group equal |t| so ties fall in the first sum
        let mut j = i;
        while j + 1 < k && t[order[j + 1]].abs() == t[order[i]].abs() {
            j += 1;
        }
        for &n in &order[i..=j] {
            let tn2 = t[n] * t[n];
            c[n] = (prefix[j + 1] + tn2 * (suffix[j + 1] + tail_second)) / mu[n];
        }
        i = j + 1;
    }
    c
}

fn sup_c(data: &SpectralData, c: &[f64], cfg: &ClassifierConfig) -> SupC {
    let prefix_max = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k = data.len();
    let tail = &data.tail;
    match tail.kind {
        TailKind::None => SupC {
            prefix_max,
            tail_sup: None,
            bounded: Tri::Undetermined,
        },
        TailKind::Power => SupC {
            prefix_max,
            tail_sup: Some(f64::INFINITY),
            bounded: Tri::False,
        },
        TailKind::Geometric => {
            let q = tail.ratio.unwrap();
            let rho = tail.mass_ratio.unwrap_or(1.0);
            let g = rho / (q * q);
            let bounded = rho > 1.0 && g < 1.0;
            // extended grid: stored prefix plus materialized tail nodes
            let ext = tail.extend(data.t[k - 1], data.mu[k - 1], k, cfg.tail_terms);
            let mut t = data.t.clone();
            let mut mu = data.mu.clone();
            for (x, m) in &ext {
                t.push(*x);
                mu.push(*m);
            }
            let (tl, ml) = *ext.last().unwrap_or(&(data.t[k - 1], data.mu[k - 1]));
            let beyond = if g < 1.0 { ml / (tl * tl) * g / (1.0 - g) } else { f64::INFINITY };
            let all = constants_with_tail(&t, &mu, beyond);
            let mut s = all[k..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if bounded {
                s = s.max(rho / (rho - 1.0) + g / (1.0 - g));
            } else {
                s = f64::INFINITY;
            }
            SupC {
                prefix_max,
                tail_sup: Some(s),
                bounded: Tri::from_bool(bounded),
            }
        }
    }
}

fn sep_scale(t: f64) -> f64 {
    t.abs().max(1.0)
}

/// Least `N` in `0..=n_max` with `d_n·max(|t_n|,1)^N ≥ c_floor` on the prefix and
/// compatible with the tail's own gap decay.
pub fn check_power_separated(data: &SpectralData, cfg: &ClassifierConfig) -> PowerSeparation {
    let tail_exponent = match data.tail.kind {
        TailKind::None => None,
        TailKind::Geometric => Some(0.0),
        TailKind::Power => {
            let p = data.tail.exponent.unwrap();
            Some(if p >= 1.0 { 0.0 } else { (1.0 - p) / p })
        }
    };
    let min_at = |n: u32| -> f64 {
        (0..data.len().saturating_sub(1))
            .map(|i| data.gap(i) * sep_scale(data.t[i]).powi(n as i32))
            .fold(f64::INFINITY, f64::min)
    };
    for n in 0..=cfg.n_max {
        if tail_exponent.is_some_and(|e| (n as f64) < e - 1e-12) {
            continue;
        }
        let c = min_at(n);
        if c >= cfg.c_floor {
            return PowerSeparation {
                power_separated: if data.tail.is_none() { Tri::Undetermined } else { Tri::True },
                n: Some(n),
                c,
                tail_exponent,
            };
        }
    }
    PowerSeparation {
        power_separated: Tri::False,
        n: None,
        c: min_at(cfg.n_max),
        tail_exponent,
    }
}

fn record_lows(xs: &[(usize, f64)]) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::new();
    for &(i, x) in xs {
        if out.last().is_none_or(|&(_, m)| x < m) {
            out.push((i, x));
        }
    }
    out
}

fn record_highs(xs: &[(usize, f64)]) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::new();
    for &(i, x) in xs {
        if out.last().is_none_or(|&(_, m)| x > m) {
            out.push((i, x));
        }
    }
    out
}

fn inf_mass(data: &SpectralData) -> (f64, Tri) {
    let m = data.mu.iter().copied().fold(f64::INFINITY, f64::min);
    let z = match data.tail.kind {
        TailKind::None => Tri::Undetermined,
        TailKind::Geometric => Tri::from_bool(data.tail.mass_ratio.unwrap_or(1.0) < 1.0),
        TailKind::Power => Tri::from_bool(data.tail.mass_ratio.unwrap_or(0.0) < 0.0),
    };
    (m, z)
}

/// Full dichotomy verdict with constants and witnesses.
pub fn classify(data: &SpectralData) -> ClassificationReport {
    classify_with(data, &ClassifierConfig::default())
}

pub fn classify_with(data: &SpectralData, cfg: &ClassifierConfig) -> ClassificationReport {
    let (cond_i, mass_sum) = check_condition_i(data);
    let (lacunary, lacunarity_inf) = check_lacunary(data);
    let c_constants = condition_ii_constants(data);
    let sup = sup_c(data, &c_constants, cfg);
    let fit = check_power_separated(data, cfg);
    let gaps: Vec<f64> = (0..data.len().saturating_sub(1)).map(|i| data.gap(i)).collect();
    let (inf_m, inf_zero) = inf_mass(data);
    let mut caveats = vec![format!(
        "finite prefix of {} nodes; tail model {:?} resolves liminf and sup",
        data.len(),
        data.tail.kind
    )];
    if data.t[0] < 0.0 {
        caveats.push("two-sided grid: |t_k| ordering as printed, tail continues the positive end only".into());
    }
    let verdict;
    let mut witnesses = None;
    if cond_i == Tri::True {
        verdict = Verdict::StrongViaFiniteMeasure;
    } else if data.tail.is_none() {
        verdict = Verdict::Undetermined;
        caveats.push("no tail model: verdict not guessed".into());
    } else if lacunary == Tri::True && sup.bounded == Tri::True {
        verdict = Verdict::StrongViaLacunary;
    } else {
        let case = if inf_zero == Tri::True {
            Case::I
        } else if fit.power_separated == Tri::False {
            Case::III
        } else if lacunary == Tri::False {
            Case::II
        } else {
            Case::IV
        };
        verdict = Verdict::NotStrong(case);
        witnesses = Some(witness_for(data, case, &c_constants, &fit, cfg));
    }
    ClassificationReport {
        verdict,
        mass_sum,
        inf_mass: inf_m,
        inf_mass_zero: inf_zero,
        lacunarity_inf,
        lacunary,
        c_constants,
        sup_c: sup,
        separation: SeparationProfile { gaps, fit },
        witnesses,
        tail: data.tail,
        caveats,
    }
}

fn witness_for(data: &SpectralData, case: Case, c: &[f64], fit: &PowerSeparation, cfg: &ClassifierConfig) -> Witness {
    let k = data.len();
    let (pairs, description) = match case {
        Case::I => (
            record_lows(&data.mu.iter().copied().enumerate().collect::<Vec<_>>()),
            "record lows of mu_n (inf mu = 0, sum mu = inf under the tail)".to_string(),
        ),
        Case::III => {
            let n = cfg.n_max as i32;
            let xs: Vec<(usize, f64)> = (0..k - 1)
                .map(|i| (i, data.gap(i) * sep_scale(data.t[i]).powi(n)))
                .filter(|&(_, v)| v < cfg.c_floor)
                .collect();
            (
                xs,
                format!("gaps with d_n*|t_n|^{n} below {}", cfg.c_floor),
            )
        }
        Case::II => {
            let xs: Vec<(usize, f64)> = (0..k - 1)
                .filter(|&i| data.t[i] > 0.0)
                .map(|i| (i, data.gap(i) / data.t[i]))
                .collect();
            (
                record_lows(&xs),
                format!(
                    "record lows of d_n/t_n with d_n*|t_n|^{} >= {:.3e}",
                    fit.n.unwrap_or(0),
                    fit.c
                ),
            )
        }
        Case::IV => (
            record_highs(&c.iter().copied().enumerate().collect::<Vec<_>>()),
            "record highs of C_n (condition (1.1) reversed)".to_string(),
        ),
    };
    let (indices, values) = pairs.into_iter().unzip();
    Witness {
        case,
        indices,
        values,
        description,
    }
}

impl Witness {
    /// Re-derives the witness values from the data and checks their trend.
    pub fn recheck(&self, data: &SpectralData, cfg: &ClassifierConfig) -> bool {
        if self.indices.is_empty() || self.indices.len() != self.values.len() {
            return false;
        }
        let c = condition_ii_constants(data);
        let fresh: Option<Vec<f64>> = self
            .indices
            .iter()
            .map(|&i| {
                if i >= data.len() {
                    return None;
                }
                Some(match self.case {
                    Case::I => data.mu[i],
                    Case::II => data.gap(i).max(0.0) / data.t[i],
                    Case::III => data.gap(i) * sep_scale(data.t[i]).powi(cfg.n_max as i32),
                    Case::IV => c[i],
                })
            })
            .collect();
        let Some(fresh) = fresh else { return false };
        let same = fresh
            .iter()
            .zip(&self.values)
            .all(|(a, b)| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()));
        let trend = match self.case {
            Case::I | Case::II => fresh.windows(2).all(|w| w[1] < w[0]),
            Case::III => fresh.iter().all(|&v| v < cfg.c_floor),
            Case::IV => fresh.windows(2).all(|w| w[1] > w[0]),
        };
        same && trend
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{gen_lacunary, gen_power_separated, MassRule, TailModel};

    #[test]
    fn condition_i_examples() {
        let d = gen_lacunary(2.0, 30, 2.0, &MassRule::PowerOfT(-1.0)).unwrap();
        let (v, s) = check_condition_i(&d);
        assert_eq!(v, Tri::True);
        assert!((s.total().unwrap() - 1.0).abs() < 1e-15);
        let d = gen_lacunary(2.0, 10, 1.0, &MassRule::Constant(1.0)).unwrap();
        assert_eq!(check_condition_i(&d).0, Tri::False);
        let d = SpectralData::new(vec![1.0, 2.0], vec![1.0, 1.0], TailModel::none()).unwrap();
        let (v, s) = check_condition_i(&d);
        assert_eq!(v, Tri::Undetermined);
        assert_eq!(s.partial, 2.0);
    }

    #[test]
    fn lacunary_examples() {
        let d = gen_lacunary(2.0, 10, 1.0, &MassRule::Constant(1.0)).unwrap();
        assert_eq!(check_lacunary(&d), (Tri::True, Some(2.0)));
        let d = gen_power_separated(1.0, 10, &MassRule::Constant(1.0)).unwrap();
        assert_eq!(check_lacunary(&d).0, Tri::False);
        let d = SpectralData::new(vec![1.0, 2.0, 4.0, 5.0], vec![1.0; 4], TailModel::none()).unwrap();
        assert_eq!(check_lacunary(&d), (Tri::Undetermined, Some(1.25)));
    }

    #[test]
    fn single_node_constant_is_one() {
        let d = SpectralData::new(vec![3.0], vec![2.0], TailModel::none()).unwrap();
        assert_eq!(condition_ii_constants(&d), vec![1.0]);
    }

    #[test]
    fn power_separation_examples() {
        let cfg = ClassifierConfig::default();
        let d = gen_power_separated(1.0, 50, &MassRule::Constant(1.0)).unwrap();
        let p = check_power_separated(&d, &cfg);
        assert_eq!((p.n, p.c), (Some(0), 1.0));
        let mut t = Vec::new();
        for n in 1..=30 {
            t.push(n as f64);
            t.push(n as f64 + (-(n as f64)).exp());
        }
        let d = SpectralData::new(t.clone(), vec![1.0; t.len()], TailModel::geometric(2.0, 1.0)).unwrap();
        let p = check_power_separated(&d, &cfg);
        assert_eq!(p.power_separated, Tri::False);
    }
}
