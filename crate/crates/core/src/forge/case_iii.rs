//! Super-polynomially close pairs: the common zero sits at distance 1 outside
//! each pair, which forces `a` to change sign.

use super::layout::layout_iii;
use super::{finish, params_ok, solve_layout, BlockSpec, CaseTag, Certificate, ForgeConfig, ForgeError};
use crate::forge::lift_via_submu;
use crate::numeric::CompensatedSum;
use crate::spectral::{restrict, Restriction, SpectralData};

/// `a_0 μ_0^{1/2} + Σ_k D_k`, which equals `Σ_n a_n μ_n^{1/2}` over the construction set.
pub fn sign_condition(data: &SpectralData, a: &[f64]) -> f64 {
    a.iter()
        .zip(&data.mu)
        .map(|(a, m)| a * m.sqrt())
        .collect::<CompensatedSum>()
        .value()
}

fn restricted(data: &SpectralData, anchor: usize, lefts: &[usize]) -> Result<Restriction, ForgeError> {
    let mut idx = vec![anchor];
    idx.extend(lefts.iter().flat_map(|&n| [n, n + 1]));
    Ok(restrict(data, &idx)?)
}

/// Near node is the lighter one; ties go to the left node.
fn blocks_for(r: &Restriction, lefts: &[usize]) -> Vec<BlockSpec> {
    lefts
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let l = r.support.binary_search(&n).unwrap();
            let (near, far) = if r.data.mu[l] <= r.data.mu[l + 1] { (l, l + 1) } else { (l + 1, l) };
            BlockSpec::NearFar { k: i + 1, near, far }
        })
        .collect()
}

/// Certificate on the restriction to the anchor and the pairs `(n, n+1)`.
pub fn case_iii_with_blocks(
    data: &SpectralData,
    anchor: usize,
    lefts: &[usize],
    cfg: &ForgeConfig,
) -> Result<Certificate, ForgeError> {
    if lefts.windows(2).any(|w| w[1] < w[0] + 2)
        || lefts.iter().any(|&n| n == anchor || n + 1 == anchor || n + 1 >= data.len())
    {
        return Err(ForgeError::IndexMismatch("pairs must be disjoint from each other and from the anchor".into()));
    }
    let r = restricted(data, anchor, lefts)?;
    let local_anchor = r.support.binary_search(&anchor).unwrap();
    let layout = layout_iii(&r.data, Some(local_anchor), &blocks_for(&r, lefts))?;
    let solved = solve_layout(&r.data, &layout, cfg)?;
    let mut cert = finish(CaseTag::III, &r.data, &layout, Some(local_anchor), solved, cfg);
    let v = sign_condition(&r.data, &cert.a);
    cert.checks.sign_condition = Some(v);
    if !(v > 0.0) {
        return Err(ForgeError::SignConditionFailure { value: v });
    }
    Ok(cert)
}

/// Greedy search for `K` pairs with node 0 as the anchor.
pub fn forge_case_iii_restricted(
    data: &SpectralData,
    k_blocks: usize,
    cfg: &ForgeConfig,
) -> Result<(Certificate, Restriction), ForgeError> {
    let anchor = 0;
    let mut lefts: Vec<usize> = Vec::new();
    let mut best_factor = f64::INFINITY;
    let mut contraction_blocked = false;
    let mut sign_blocked = None;
    let mut tried = 0;
    for n in 1..data.len().saturating_sub(1) {
        if lefts.len() == k_blocks || tried >= cfg.max_candidates {
            break;
        }
        let k = lefts.len() + 1;
        let t = data.t[n];
        if !(t > 0.0) || data.gap(n) > t.max(1.0).powf(-cfg.iii_gap_power) {
            continue;
        }
        if data.mu[n].min(data.mu[n + 1]) < cfg.iii_mass_floor {
            continue;
        }
        let spread = (k as f64).powf(cfg.iii_sparsity_exponent);
        let prev_t = lefts.last().map_or(data.t[anchor].abs(), |&p| data.t[p]);
        if spread * prev_t >= cfg.epsilon * t {
            continue;
        }
        if let Some(&prev) = lefts.last() {
            if n < prev + 2 || t <= 2.0 * data.t[prev + 1] {
                continue;
            }
        }
        tried += 1;
        let mut cand = lefts.clone();
        cand.push(n);
        let r = restricted(data, anchor, &cand)?;
        let local_anchor = r.support.binary_search(&anchor).unwrap();
        let layout = layout_iii(&r.data, Some(local_anchor), &blocks_for(&r, &cand))?;
        let factor = layout.system(&r.data, cfg.mask_cross_terms).contraction();
        if factor > cfg.epsilon {
            best_factor = best_factor.min(factor);
            contraction_blocked = true;
            continue;
        }
        let cert = finish(
            CaseTag::III,
            &r.data,
            &layout,
            Some(local_anchor),
            solve_layout(&r.data, &layout, cfg)?,
            cfg,
        );
        let v = sign_condition(&r.data, &cert.a);
        if !(v > 0.0) {
            sign_blocked = Some(v);
            continue;
        }
        if params_ok(&cert) && cert.max_residual() <= cfg.residual_tol {
            lefts = cand;
        }
    }
    if lefts.len() < k_blocks {
        if let Some(value) = sign_blocked {
            return Err(ForgeError::SignConditionFailure { value });
        }
        if contraction_blocked {
            return Err(ForgeError::ContractionFailure {
                factor: best_factor,
                target: cfg.epsilon,
            });
        }
        return Err(ForgeError::WitnessNotFound {
            k: lefts.len() + 1,
            reason: format!(
                "no pair with d_n ≤ t_n^-{}, sparse enough for k^{} growth",
                cfg.iii_gap_power, cfg.iii_sparsity_exponent
            ),
        });
    }
    let cert = case_iii_with_blocks(data, anchor, &lefts, cfg)?;
    Ok((cert, restricted(data, anchor, &lefts)?))
}

pub fn forge_case_iii(data: &SpectralData, k_blocks: usize, cfg: &ForgeConfig) -> Result<Certificate, ForgeError> {
    let (cert, r) = forge_case_iii_restricted(data, k_blocks, cfg)?;
    lift_via_submu(&cert, data, &r.support)
}
