use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{m_at_infinity, phase, phase_derivative, EvalError};
use crate::spectral::{SpectralData, Tri};

/// Clark spectral data on the level set `{Θ = α}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClarkData {
    pub alpha: Complex64,
    pub nodes: Vec<f64>,
    pub masses: Vec<f64>,
    /// Level index `n` of each node in `φ(t) = arg(α)/2 + πn`.
    pub levels: Vec<i64>,
    /// The exceptional value of `α`, present when the total mass is finite under the tail model.
    pub exceptional_alpha: Option<Complex64>,
    /// Whether the requested `α` is (numerically) the exceptional value.
    pub exceptional: bool,
}

/// `exp(2i·atan(m_∞))`, the limit of `Θ` at infinity; exceptional when `Σμ < ∞`.
pub fn exceptional_alpha(data: &SpectralData, r: f64) -> Option<Complex64> {
    if data.tail.weighted_mass_converges(0.0) != Tri::True {
        return None;
    }
    Some(Complex64::from_polar(1.0, 2.0 * m_at_infinity(data, r).atan()))
}

/// Nodes `t_{α,n}` solving `φ(t) = arg(α)/2 + πn`, with masses `π/φ′`.
pub fn clark_data(data: &SpectralData, r: f64, alpha: Complex64) -> Result<ClarkData, EvalError> {
    let base = 0.5 * alpha.arg();
    let atan_inf = m_at_infinity(data, r).atan();
    let lo = atan_inf;
    let hi = PI * data.len() as f64 + atan_inf;
    let mut nodes = Vec::new();
    let mut masses = Vec::new();
    let mut levels = Vec::new();
    let n_start = ((lo - base) / PI).floor() as i64 - 1;
    let n_end = ((hi - base) / PI).ceil() as i64 + 1;
    for n in n_start..=n_end {
        let target = base + PI * n as f64;
        let margin = 1e-13 * (1.0 + target.abs());
        if !(target > lo + margin && target < hi - margin) {
            continue;
        }
        let x = solve_level(data, r, target)?;
        nodes.push(x);
        masses.push(PI / phase_derivative(data, r, x));
        levels.push(n);
    }
    let exc = exceptional_alpha(data, r);
    let exceptional = exc.is_some_and(|a| (a - alpha).norm() < 1e-12);
    Ok(ClarkData {
        alpha,
        nodes,
        masses,
        levels,
        exceptional_alpha: exc,
        exceptional,
    })
}

fn solve_level(data: &SpectralData, r: f64, target: f64) -> Result<f64, EvalError> {
    let k = data.len() as i64;
    let j = ((target - FRAC_PI_2) / PI).floor() as i64;
    let fail = || EvalError::PhaseBracketFailure { target };
    if (0..k).contains(&j) && phase(data, r, data.t[j as usize]) == target {
        return Ok(data.t[j as usize]);
    }
    let mut lo = if j >= 0 && j < k {
        data.t[j as usize]
    } else if j >= k {
        data.t[(k - 1) as usize]
    } else {
        let t0 = data.t[0];
        let mut w = t0.abs().max(1.0);
        loop {
            let x = t0 - w;
            if !x.is_finite() {
                return Err(fail());
            }
            if phase(data, r, x) < target {
                break x;
            }
            w *= 2.0;
        }
    };
    let mut hi = if j + 1 < k && j + 1 >= 0 {
        data.t[(j + 1) as usize]
    } else if j + 1 < 0 {
        data.t[0]
    } else {
        let tl = data.t[(k - 1) as usize];
        let mut w = tl.abs().max(1.0);
        loop {
            let x = tl + w;
            if !x.is_finite() {
                return Err(fail());
            }
            if phase(data, r, x) > target {
                break x;
            }
            w *= 2.0;
        }
    };
    if !(phase(data, r, lo) <= target && phase(data, r, hi) >= target) {
        return Err(fail());
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let p = phase(data, r, mid);
        if p == target {
            return Ok(mid);
        }
        if p < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (pl, ph) = (phase(data, r, lo), phase(data, r, hi));
    Ok(if target - pl <= ph - target { lo } else { hi })
}
