//! Non-lacunary power-separated data: pairs of close nodes carry one common zero each.

use super::layout::layout_ii;
use super::{finish, params_ok, solve_layout, BlockSpec, CaseTag, Certificate, ForgeConfig, ForgeError};
use crate::classifier::check_power_separated;
use crate::forge::lift_via_submu;
use crate::spectral::{restrict, Restriction, SpectralData, Tri};

fn pair_blocks(data: &SpectralData, lefts: &[usize]) -> Vec<BlockSpec> {
    lefts
        .iter()
        .enumerate()
        .map(|(i, &n)| BlockSpec::Pair {
            k: i + 1,
            left: 2 * i,
            right: 2 * i + 1,
            mirrored: data.mu[n] > data.mu[n + 1],
        })
        .collect()
}

fn restricted(data: &SpectralData, lefts: &[usize]) -> Result<Restriction, ForgeError> {
    let idx: Vec<usize> = lefts.iter().flat_map(|&n| [n, n + 1]).collect();
    Ok(restrict(data, &idx)?)
}

/// Certificate on the restriction to the pairs `(n, n+1)` for each given `n`.
pub fn case_ii_with_blocks(data: &SpectralData, lefts: &[usize], cfg: &ForgeConfig) -> Result<Certificate, ForgeError> {
    if lefts.windows(2).any(|w| w[1] < w[0] + 2) || lefts.last().is_some_and(|&n| n + 1 >= data.len()) {
        return Err(ForgeError::IndexMismatch("pairs must be disjoint, increasing and inside the data".into()));
    }
    let r = restricted(data, lefts)?;
    let layout = layout_ii(&r.data, &pair_blocks(data, lefts))?;
    let solved = solve_layout(&r.data, &layout, cfg)?;
    Ok(finish(CaseTag::II, &r.data, &layout, None, solved, cfg))
}

/// Greedy search for `K` pairs, returning the certificate on the restricted data.
pub fn forge_case_ii_restricted(
    data: &SpectralData,
    k_blocks: usize,
    cfg: &ForgeConfig,
) -> Result<(Certificate, Restriction), ForgeError> {
    let sep = check_power_separated(data, &cfg.classifier);
    if sep.power_separated == Tri::False {
        return Err(ForgeError::WitnessNotFound {
            k: 1,
            reason: "data are not power separated".into(),
        });
    }
    let mut lefts: Vec<usize> = Vec::new();
    let mut best_factor = f64::INFINITY;
    let mut contraction_blocked = false;
    let mut tried = 0;
    for n in 0..data.len().saturating_sub(1) {
        if lefts.len() == k_blocks || tried >= cfg.max_candidates {
            break;
        }
        let k = lefts.len() + 1;
        let t = data.t[n];
        if !(t > 0.0) || data.gap(n) > t * (k as f64).powf(-cfg.ii_gap_exponent) {
            continue;
        }
        if let Some(&prev) = lefts.last() {
            if n < prev + 2 || t <= 2.0 * data.t[prev] {
                continue;
            }
        }
        tried += 1;
        let mut cand = lefts.clone();
        cand.push(n);
        let r = restricted(data, &cand)?;
        let layout = layout_ii(&r.data, &pair_blocks(data, &cand))?;
        let factor = layout.system(&r.data, cfg.mask_cross_terms).contraction();
        if factor > cfg.epsilon {
            best_factor = best_factor.min(factor);
            contraction_blocked = true;
            continue;
        }
        let cert = finish(CaseTag::II, &r.data, &layout, None, solve_layout(&r.data, &layout, cfg)?, cfg);
        if params_ok(&cert) && cert.max_residual() <= cfg.residual_tol {
            lefts = cand;
        }
    }
    if lefts.len() < k_blocks {
        if contraction_blocked {
            return Err(ForgeError::ContractionFailure {
                factor: best_factor,
                target: cfg.epsilon,
            });
        }
        return Err(ForgeError::WitnessNotFound {
            k: lefts.len() + 1,
            reason: format!("no pair with d_n ≤ t_n k^-{} beyond the chosen ones", cfg.ii_gap_exponent),
        });
    }
    let cert = case_ii_with_blocks(data, &lefts, cfg)?;
    Ok((cert, restricted(data, &lefts)?))
}

/// Greedy case II construction lifted back to the full data.
pub fn forge_case_ii(data: &SpectralData, k_blocks: usize, cfg: &ForgeConfig) -> Result<Certificate, ForgeError> {
    let (cert, r) = forge_case_ii_restricted(data, k_blocks, cfg)?;
    lift_via_submu(&cert, data, &r.support)
}
