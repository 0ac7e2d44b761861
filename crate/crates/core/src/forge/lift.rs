//! Lifting a certificate from restricted data back to the parent grid by zero padding.

use super::{common_checks, Certificate, ForgeError};
use crate::spectral::SpectralData;

/// Pads `a`, `b` with zeros off `support` and re-derives every check on `parent`.
///
/// `support[i]` is the parent index of node `i` of `cert.data`.
pub fn lift_via_submu(cert: &Certificate, parent: &SpectralData, support: &[usize]) -> Result<Certificate, ForgeError> {
    if support.len() != cert.data.len() {
        return Err(ForgeError::IndexMismatch(format!(
            "{} support indices for {} nodes",
            support.len(),
            cert.data.len()
        )));
    }
    if support.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ForgeError::IndexMismatch("support must be strictly increasing".into()));
    }
    for (i, &p) in support.iter().enumerate() {
        if p >= parent.len() {
            return Err(ForgeError::IndexMismatch(format!("index {p} outside {} parent nodes", parent.len())));
        }
        if parent.t[p] != cert.data.t[i] || parent.mu[p] != cert.data.mu[i] {
            return Err(ForgeError::IndexMismatch(format!(
                "node {i} (t = {}, μ = {}) differs from parent node {p}",
                cert.data.t[i], cert.data.mu[i]
            )));
        }
    }
    let mut a = vec![0.0; parent.len()];
    let mut b = vec![0.0; parent.len()];
    for (i, &p) in support.iter().enumerate() {
        a[p] = cert.a[i];
        b[p] = cert.b[i];
    }
    let zeros: Vec<_> = cert.zeros.iter().map(|z| z.remap(support)).collect();
    let checks = common_checks(parent, &a, &b, &zeros, &Default::default());
    Ok(Certificate {
        data: parent.clone(),
        a,
        b,
        zeros,
        blocks: cert.blocks.iter().map(|b| b.map(|i| support[i])).collect(),
        anchor: cert.anchor.map(|i| support[i]),
        support: cert.support.iter().map(|&i| support[i]).collect(),
        checks: super::Checks {
            sign_condition: cert.checks.sign_condition,
            dominance: cert.checks.dominance.clone(),
            u: cert.checks.u.clone(),
            smallness: cert.checks.smallness.clone(),
            root_counts: cert.checks.root_counts.clone(),
            ..checks
        },
        sub_residual: Some(cert.max_residual()),
        ..cert.clone()
    })
}
