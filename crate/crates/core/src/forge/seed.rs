//! Seed data for systems with infinite defect: masses chosen so that `zD(z)`
//! has prescribed values on a finite node set.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::genfn::GeneratingFunction;
use super::ForgeError;
use crate::evaluator::{a_prime_at_node, log_a_unchecked};
use crate::numeric::{ComplexSum, LogComplex, SignedLog};
use crate::spectral::{SpectralData, TailModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedResult {
    /// Nodes `T⁰` with `μ_n = n²|D(t_n)|²/|A⁰′(t_n)|²`, `n` counted from 1.
    pub data: SpectralData,
    /// `G⁰(z) = z·D(z)`.
    pub generating_function: GeneratingFunction,
    /// Worst relative error of `G⁰/A⁰ = Σ g_n/(z − t_n)` at 20 random points,
    /// the sum taken in exact rational arithmetic on the `f64` inputs.
    pub identity_error: f64,
    /// Same comparison with the sum taken in `f64` from the stored `g_n`.
    pub float_identity_error: f64,
    /// Largest `Σ|g_n/(z − t_n)| / |G⁰(z)/A⁰(z)|` over the sample points.
    pub cancellation: f64,
    pub max_mass: f64,
}

fn log_d(d: &[f64], z: Complex64) -> LogComplex {
    d.iter()
        .fold(LogComplex::ONE, |acc, &dj| acc * LogComplex::from_complex(1.0 - z / dj))
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

/// `t_n D(t_n)/A⁰′(t_n)` with `A⁰′(t_n) = −t_n^{-1} Π_{k≠n}(1 − t_n/t_k)`.
fn exact_residues(t: &[BigRational], d: &[BigRational]) -> Vec<BigRational> {
    let one = BigRational::one();
    t.iter()
        .enumerate()
        .map(|(n, tn)| {
            let mut num = tn.clone();
            for dj in d {
                num *= &one - tn / dj;
            }
            let mut den = -(&one / tn);
            for (k, tk) in t.iter().enumerate() {
                if k != n {
                    den *= &one - tn / tk;
                }
            }
            num / den
        })
        .collect()
}

/// `Σ g_n/(z − t_n)` for `z = x + iy`, `y ≠ 0`, rounded once at the end.
fn exact_sum(t: &[BigRational], g: &[BigRational], z: Complex64) -> Complex64 {
    let (x, y) = (exact(z.re), exact(z.im));
    let mut re = BigRational::zero();
    let mut im = BigRational::zero();
    for (tn, gn) in t.iter().zip(g) {
        let dx = &x - tn;
        let den = &dx * &dx + &y * &y;
        re += gn * &dx / &den;
        im -= gn * &y / &den;
    }
    Complex64::new(re.to_f64().unwrap_or(f64::NAN), im.to_f64().unwrap_or(f64::NAN))
}

pub fn infinite_defect_seed(t0: &[f64], d_zeros: &[f64]) -> Result<SeedResult, ForgeError> {
    let base = SpectralData::new(t0.to_vec(), vec![1.0; t0.len()], TailModel::none())?;
    if d_zeros.len() + 2 > t0.len() {
        return Err(ForgeError::DegreeTooHigh {
            degree: d_zeros.len(),
            nodes: t0.len(),
        });
    }
    for &dj in d_zeros {
        if let Some(node) = base
            .t
            .iter()
            .position(|&t| (t - dj).abs() <= 1e-14 * t.abs().max(dj.abs()))
        {
            return Err(ForgeError::NodeCollision { zero: dj, node });
        }
        if dj == 0.0 || !dj.is_finite() {
            return Err(ForgeError::NodeCollision { zero: dj, node: usize::MAX });
        }
    }
    let mut mu = Vec::with_capacity(t0.len());
    let mut g = Vec::with_capacity(t0.len());
    for (i, &t) in base.t.iter().enumerate() {
        let dv = log_d(d_zeros, Complex64::new(t, 0.0));
        let ap = a_prime_at_node(&base, i);
        let n = (i + 1) as f64;
        mu.push((2.0 * n.ln() + 2.0 * dv.log_abs - 2.0 * ap.log_abs).exp());
        let gv = LogComplex::from_real(t) * dv / ap.to_log_complex();
        g.push(gv.to_complex().re);
    }
    let data = SpectralData::new(base.t.clone(), mu, TailModel::none())?;
    let mut zeros = vec![Complex64::new(0.0, 0.0)];
    zeros.extend(d_zeros.iter().map(|&d| Complex64::new(d, 0.0)));
    let gf = GeneratingFunction {
        zeros,
        tags: None,
        residues: g.clone(),
        scale: SignedLog::new(1.0, 0.0),
    };

    let tq: Vec<BigRational> = base.t.iter().map(|&x| exact(x)).collect();
    let dq: Vec<BigRational> = d_zeros.iter().map(|&x| exact(x)).collect();
    let gq = exact_residues(&tq, &dq);

    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let lo = base.t.iter().fold(f64::INFINITY, |m, t| m.min(t.abs())).ln();
    let hi = base.t.iter().fold(0.0f64, |m, t| m.max(t.abs())).ln();
    let mut identity_error: f64 = 0.0;
    let mut float_identity_error: f64 = 0.0;
    let mut cancellation: f64 = 0.0;
    for _ in 0..20 {
        let r = rng.random_range(lo - 1.0..hi + 1.0).exp();
        let th: f64 = rng.random_range(0.1..std::f64::consts::PI - 0.1);
        let z = Complex64::from_polar(r, if rng.random_bool(0.5) { th } else { -th });
        let lhs = LogComplex::from_complex(z) * log_d(d_zeros, z) / log_a_unchecked(&base, z);
        let rel = |v: Complex64| (LogComplex::from_complex(v) / lhs).to_complex() - 1.0;
        identity_error = identity_error.max(rel(exact_sum(&tq, &gq, z)).norm());
        let mut s = ComplexSum::new();
        let mut abs = 0.0;
        for (n, &gn) in g.iter().enumerate() {
            let term = gn / (z - base.t[n]);
            abs += term.norm();
            s.add(term);
        }
        float_identity_error = float_identity_error.max(rel(s.value()).norm());
        cancellation = cancellation.max((abs.ln() - lhs.log_abs).exp());
    }
    let max_mass = data.mu.iter().copied().fold(0.0, f64::max);
    Ok(SeedResult {
        data,
        generating_function: gf,
        identity_error,
        float_identity_error,
        cancellation,
        max_mass,
    })
}
