use num_complex::Complex64;

use super::{EvalError, RealPoint};
use crate::numeric::{CompensatedSum, LogComplex, SignedLog};
use crate::numeric::logval::wrap_phase;
use crate::spectral::SpectralData;

/// `log A(z)` for `A(z) = Π(1 − z/t_n)` over the stored nodes.
pub fn log_a(data: &SpectralData, z: Complex64) -> Result<LogComplex, EvalError> {
    if z.im == 0.0 {
        if let Some(index) = data.node_index(z.re) {
            return Err(EvalError::EvaluationAtNode { index });
        }
    }
    Ok(log_a_unchecked(data, z))
}

/// `log A(z)` without the node check; returns `ZERO` at a node.
pub fn log_a_unchecked(data: &SpectralData, z: Complex64) -> LogComplex {
    let mut log_abs = CompensatedSum::new();
    let mut phase = 0.0;
    for &t in &data.t {
        let (la, ph) = log_factor(t, z);
        if la == f64::NEG_INFINITY {
            return LogComplex::ZERO;
        }
        log_abs.add(la);
        phase += ph;
    }
    LogComplex::new(log_abs.value(), wrap_phase(phase))
}

/// `log(1 − z/t)` split into modulus and argument.
fn log_factor(t: f64, z: Complex64) -> (f64, f64) {
    let s = t.signum();
    let w = z / t;
    let la = if w.norm_sqr() < 0.25 {
        0.5 * (w.re * w.re - 2.0 * w.re + w.im * w.im).ln_1p()
    } else {
        let d = Complex64::new(t - z.re, -z.im);
        d.norm().ln() - t.abs().ln()
    };
    (la, (-z.im * s).atan2((t - z.re) * s))
}

/// `log|A(x)|` and the sign of `A(x)` at a real point.
pub fn log_a_real(data: &SpectralData, p: &RealPoint) -> SignedLog {
    let mut la = CompensatedSum::new();
    let mut sign = 1.0;
    for (k, &t) in data.t.iter().enumerate() {
        // 1 − x/t = −(x − t)/t
        let d = p.minus_node(data, k);
        if d == 0.0 {
            return SignedLog::from_real(0.0);
        }
        let w = p.value / t;
        if w.abs() < 0.5 {
            la.add((-w).ln_1p());
        } else {
            la.add(d.abs().ln() - t.abs().ln());
        }
        if -d / t < 0.0 {
            sign = -sign;
        }
    }
    SignedLog::new(sign, la.value())
}

/// `A′(t_n) = (−1/t_n)·Π_{k≠n}(1 − t_n/t_k)`, as a signed logarithm.
pub fn a_prime_at_node(data: &SpectralData, n: usize) -> SignedLog {
    let tn = data.t[n];
    let mut la = CompensatedSum::new();
    la.add(-tn.abs().ln());
    let mut sign = -tn.signum();
    for (k, &tk) in data.t.iter().enumerate() {
        if k == n {
            continue;
        }
        let w = tn / tk;
        if w.abs() < 0.5 {
            la.add((-w).ln_1p());
        } else {
            la.add((tk - tn).abs().ln() - tk.abs().ln());
        }
        if (tk - tn) / tk < 0.0 {
            sign = -sign;
        }
    }
    SignedLog::new(sign, la.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TailModel;

    fn data(t: &[f64]) -> SpectralData {
        SpectralData::new(t.to_vec(), vec![1.0; t.len()], TailModel::none()).unwrap()
    }

    #[test]
    fn two_node_product() {
        let d = data(&[1.0, 2.0]);
        let a = log_a(&d, Complex64::new(3.0, 0.0)).unwrap();
        assert!(a.log_abs.abs() < 1e-15);
        assert!((a.to_complex() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(
            log_a(&d, Complex64::new(1.0, 0.0)),
            Err(EvalError::EvaluationAtNode { index: 0 })
        );
    }

    #[test]
    fn derivative_at_nodes() {
        let d = data(&[1.0, 2.0]);
        assert!((a_prime_at_node(&d, 0).value() + 0.5).abs() < 1e-15);
        assert!((a_prime_at_node(&d, 1).value() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn real_product_sign_and_size() {
        let d = data(&[1.0, 2.0, 4.0]);
        for x in [-3.0, 0.5, 1.5, 3.0, 7.0] {
            let direct: f64 = d.t.iter().map(|t| 1.0 - x / t).product();
            let s = log_a_real(&d, &RealPoint::plain(x));
            assert!((s.value() - direct).abs() <= 1e-14 * direct.abs());
        }
    }
}
