//! Lacunary data where heavy clusters dominate single pivots: `a` is fixed and
//! positive, the zeros of `h` are located numerically, and the pivot values of
//! `b` solve a diagonally dominant system.

use super::layout::{iv_fixed_coefs, layout_iv};
use super::{
    finish, solve_layout, BlockSpec, CaseTag, Certificate, DominanceReport, ForgeConfig, ForgeError, IvVariant,
};
use crate::evaluator::{count_sign_changes, find_real_roots, RealPoint};
use crate::forge::lift_via_submu;
use crate::spectral::{restrict, Restriction, SpectralData};

/// Parent-index cluster `first..=last` with its pivot.
type Cluster = (usize, usize, usize);

/// Nodes bracketing the zero of `h/A` assigned to a block.
pub(crate) fn bracket(blk: &BlockSpec) -> Option<(usize, usize)> {
    match *blk {
        BlockSpec::Cluster { first, pivot, .. } if first > pivot => Some((pivot, pivot + 1)),
        BlockSpec::Cluster { pivot, .. } => Some((pivot - 1, pivot)),
        _ => None,
    }
}

fn h_weights(data: &SpectralData, a: &[f64]) -> Vec<f64> {
    a.iter().zip(&data.mu).map(|(a, m)| a * m.sqrt()).collect()
}

/// Zeros `s_k` of `h/A` for the fixed case IV coefficients, one per block bracket.
pub fn case_iv_roots(data: &SpectralData, blocks: &[BlockSpec]) -> Result<Vec<RealPoint>, ForgeError> {
    let coefs = iv_fixed_coefs(data, blocks)?;
    let a: Vec<f64> = coefs.iter().map(|c| c.a.constant).collect();
    let c = h_weights(data, &a);
    let mut out = Vec::with_capacity(blocks.len());
    for blk in blocks {
        let (lo, hi) = bracket(blk).ok_or_else(|| ForgeError::IndexMismatch("cluster block expected".into()))?;
        let roots = find_real_roots(data, &c, data.t[lo], data.t[hi]).map_err(|_| ForgeError::RootNotFound { k: blk.k() })?;
        out.push(roots[0]);
    }
    Ok(out)
}

/// Sign changes of `h/A` inside each root bracket on a 1000-point grid.
pub(crate) fn root_counts(data: &SpectralData, a: &[f64], blocks: &[BlockSpec]) -> Vec<usize> {
    let c = h_weights(data, a);
    blocks
        .iter()
        .filter_map(bracket)
        .map(|(lo, hi)| count_sign_changes(data, &c, &RealPoint::near(data, lo, 0.0), &RealPoint::near(data, hi, 0.0), 1000))
        .collect()
}

fn restricted(data: &SpectralData, clusters: &[Cluster]) -> Result<(Restriction, Vec<BlockSpec>), ForgeError> {
    let mut idx = Vec::new();
    for &(f, l, p) in clusters {
        idx.extend(f..=l);
        idx.push(p);
    }
    let r = restrict(data, &idx)?;
    let pos = |i: usize| r.support.binary_search(&i).unwrap();
    let blocks = clusters
        .iter()
        .enumerate()
        .map(|(i, &(f, l, p))| BlockSpec::Cluster {
            k: i + 1,
            first: pos(f),
            last: pos(l),
            pivot: pos(p),
        })
        .collect();
    Ok((r, blocks))
}

fn validate_clusters(data: &SpectralData, clusters: &[Cluster]) -> Result<(), ForgeError> {
    let mut prev_end: Option<usize> = None;
    for &(f, l, p) in clusters {
        let ok = f <= l && l < data.len() && p < data.len() && (l + 1 == p || p + 1 == f);
        let lo = f.min(p);
        let hi = l.max(p);
        if !ok || prev_end.is_some_and(|e| lo <= e) {
            return Err(ForgeError::IndexMismatch(format!(
                "cluster {f}..={l} with pivot {p} must be adjacent to its pivot and follow the previous block"
            )));
        }
        prev_end = Some(hi);
    }
    Ok(())
}

/// Certificate on the restriction to the given clusters; no greedy search.
pub fn case_iv_with_blocks(data: &SpectralData, clusters: &[Cluster], cfg: &ForgeConfig) -> Result<Certificate, ForgeError> {
    validate_clusters(data, clusters)?;
    let (r, blocks) = restricted(data, clusters)?;
    let sub = &r.data;
    let zeros = case_iv_roots(sub, &blocks)?;
    let layout = layout_iv(sub, &blocks, &zeros)?;
    let system = layout.system(sub, cfg.mask_cross_terms);
    let row_sums = system.row_sums();
    let (_, u) = system.iteration();
    let solved = solve_layout(sub, &layout, cfg)?;
    let mut cert = finish(CaseTag::IV, sub, &layout, None, solved, cfg);
    let total: f64 = row_sums.iter().sum();
    let max_row = row_sums.iter().copied().fold(0.0, f64::max);
    cert.checks.dominance = Some(DominanceReport {
        row_sums,
        total_off_diagonal: total,
        margin: if max_row > 0.0 { 1.0 / max_row } else { f64::INFINITY },
    });
    let mut us = Vec::new();
    let mut small = Vec::new();
    let hw = h_weights(sub, &cert.a);
    for (i, blk) in blocks.iter().enumerate() {
        let BlockSpec::Cluster { k, first, last, pivot } = *blk else { unreachable!() };
        let kf = k as f64;
        let delta = zeros[i].minus_node(sub, pivot).abs();
        let tp = sub.t[pivot].abs();
        us.push((u[i], u[i].abs() * tp / (kf * kf * delta)));
        let tail = first > pivot;
        let sigma: f64 = (first..=last)
            .map(|l| if tail { sub.mu[l] / (sub.t[l] * sub.t[l]) } else { sub.mu[l] })
            .sum();
        let lo = first.min(pivot);
        let hi = last.max(pivot);
        let before = (0..lo).map(|n| hw[n].abs()).fold(0.0, |x, y| x + y);
        let after = (hi + 1..sub.len()).map(|n| hw[n].abs() / sub.t[n].abs()).fold(0.0, |x, y| x + y);
        small.push((before * kf / sigma.sqrt(), after * kf * tp));
    }
    cert.checks.u = Some(us);
    cert.checks.smallness = Some(small);
    cert.checks.root_counts = Some(root_counts(sub, &cert.a, &blocks));
    if blocks.iter().any(|b| matches!(*b, BlockSpec::Cluster { first, pivot, .. } if first > pivot)) {
        cert.variant = Some("analogous-variant".into());
    }
    Ok(cert)
}

fn admissible(cert: &Certificate, cfg: &ForgeConfig) -> bool {
    let dom = cert.checks.dominance.as_ref().unwrap();
    let offsets_ok = cert.blocks.iter().zip(&cert.zeros).all(|(b, z)| {
        let BlockSpec::Cluster { pivot, .. } = *b else { return false };
        z.minus_node(&cert.data, pivot).abs() <= cfg.iv_offset_ratio * cert.data.t[pivot].abs()
    });
    let counts_ok = cert.checks.root_counts.as_ref().unwrap().iter().all(|&c| c == 1);
    let small_ok = cert
        .checks
        .smallness
        .as_ref()
        .unwrap()
        .iter()
        .all(|&(x, y)| x <= cfg.iv_smallness && y <= cfg.iv_smallness);
    dom.row_sums.iter().all(|&r| r <= cfg.epsilon)
        && offsets_ok
        && counts_ok
        && small_ok
        && cert.b.iter().all(|&b| b > 0.0)
        && cert.max_residual() <= cfg.residual_tol
}

/// Candidate clusters for pivot `n` in the order they are tried.
fn candidates(data: &SpectralData, n: usize, start: usize, k: usize, cfg: &ForgeConfig, tail: bool) -> Vec<Cluster> {
    let need_scale = (k as f64).powf(cfg.iv_mass_exponent);
    let mut out = Vec::new();
    let mut sum = 0.0;
    if !tail {
        let need = need_scale * data.mu[n];
        for m in (start..n).rev() {
            sum += data.mu[m];
            if sum > need {
                out.push((m, n - 1, n));
                if out.len() >= 8 {
                    break;
                }
            }
        }
    } else {
        let w = |i: usize| data.mu[i] / (data.t[i] * data.t[i]);
        let need = need_scale * w(n);
        for m in n + 1..data.len() {
            sum += w(m);
            if sum > need {
                out.push((n + 1, m, n));
                if out.len() >= 8 {
                    break;
                }
            }
        }
    }
    out
}

fn greedy(
    data: &SpectralData,
    k_blocks: usize,
    cfg: &ForgeConfig,
    tail: bool,
) -> Result<(Certificate, Restriction), ForgeError> {
    let mut chosen: Vec<Cluster> = Vec::new();
    let mut start = 0;
    let mut tried = 0;
    let mut found_any = false;
    let mut best_dominance = f64::INFINITY;
    let mut n = if tail { 0 } else { 1 };
    while n < data.len() && chosen.len() < k_blocks && tried < cfg.max_candidates {
        if n < start || !(data.t[n] > 0.0) {
            n += 1;
            continue;
        }
        let k = chosen.len() + 1;
        let mut accepted = false;
        for cl in candidates(data, n, start, k, cfg, tail) {
            found_any = true;
            tried += 1;
            let mut cand = chosen.clone();
            cand.push(cl);
            let Ok(cert) = case_iv_with_blocks(data, &cand, cfg) else { continue };
            if admissible(&cert, cfg) {
                chosen = cand;
                start = cl.1.max(cl.2) + 1;
                accepted = true;
                break;
            }
            let dom = cert.checks.dominance.as_ref().unwrap();
            best_dominance = best_dominance.min(dom.row_sums.iter().copied().fold(0.0, f64::max));
        }
        n = if accepted { start + usize::from(!tail) } else { n + 1 };
    }
    if chosen.len() < k_blocks {
        if found_any && best_dominance.is_finite() && best_dominance > cfg.epsilon {
            return Err(ForgeError::DominanceFailure {
                total: best_dominance,
                bound: cfg.epsilon,
            });
        }
        return Err(ForgeError::WitnessNotFound {
            k: chosen.len() + 1,
            reason: format!(
                "no {} cluster with mass above k^{}·(pivot mass) passes the offset, root and dominance checks",
                if tail { "trailing" } else { "leading" },
                cfg.iv_mass_exponent
            ),
        });
    }
    let cert = case_iv_with_blocks(data, &chosen, cfg)?;
    let total = cert.checks.dominance.as_ref().unwrap().total_off_diagonal;
    if total > cfg.iv_dominance_total {
        return Err(ForgeError::DominanceFailure {
            total,
            bound: cfg.iv_dominance_total,
        });
    }
    let (r, _) = restricted(data, &chosen)?;
    Ok((cert, r))
}

/// Greedy case IV construction on the restricted data.
pub fn forge_case_iv_restricted(
    data: &SpectralData,
    k_blocks: usize,
    cfg: &ForgeConfig,
) -> Result<(Certificate, Restriction), ForgeError> {
    match cfg.iv_variant {
        IvVariant::PrefixDominated => greedy(data, k_blocks, cfg, false),
        IvVariant::TailDominated => greedy(data, k_blocks, cfg, true),
        IvVariant::Auto => match greedy(data, k_blocks, cfg, false) {
            Err(ForgeError::WitnessNotFound { .. }) => greedy(data, k_blocks, cfg, true),
            other => other,
        },
    }
}

pub fn forge_case_iv(data: &SpectralData, k_blocks: usize, cfg: &ForgeConfig) -> Result<Certificate, ForgeError> {
    let (cert, r) = forge_case_iv_restricted(data, k_blocks, cfg)?;
    lift_via_submu(&cert, data, &r.support)
}
