use std::f64::consts::PI;

use num_complex::Complex64;

use super::{a_prime_at_node, log_a, CoefficientVector, EvalError, RealPoint};
use crate::numeric::{CompensatedSum, ComplexSum, LogComplex, SignedLog};
use crate::spectral::SpectralData;

fn check_len(data: &SpectralData, got: usize) -> Result<(), EvalError> {
    if got > data.len() {
        return Err(EvalError::LengthMismatch {
            got,
            len: data.len(),
        });
    }
    Ok(())
}

/// `Σ w_n/(z − t_n)` with compensated summation; `w` may be shorter than `T`.
pub fn cauchy_transform(data: &SpectralData, w: &[Complex64], z: Complex64) -> Result<Complex64, EvalError> {
    check_len(data, w.len())?;
    if z.im == 0.0 {
        if let Some(index) = data.node_index(z.re) {
            if index < w.len() && w[index] != Complex64::new(0.0, 0.0) {
                return Err(EvalError::EvaluationAtNode { index });
            }
        }
    }
    let mut s = ComplexSum::new();
    for (n, &wn) in w.iter().enumerate() {
        if wn == Complex64::new(0.0, 0.0) {
            continue;
        }
        s.add(wn / (z - data.t[n]));
    }
    Ok(s.value())
}

/// `Σ w_n/(x − t_n)` at a real point, together with the scale `Σ|w_n|/|x − t_n|`.
pub fn cauchy_real(data: &SpectralData, w: &[f64], p: &RealPoint) -> Result<(f64, f64), EvalError> {
    check_len(data, w.len())?;
    let mut s = CompensatedSum::new();
    for (n, &wn) in w.iter().enumerate() {
        if wn == 0.0 {
            continue;
        }
        let d = p.minus_node(data, n);
        if d == 0.0 {
            return Err(EvalError::EvaluationAtNode { index: n });
        }
        s.add(wn / d);
    }
    Ok((s.value(), s.abs_sum()))
}

/// `d/dx Σ w_n/(x − t_n) = −Σ w_n/(x − t_n)²`.
pub fn cauchy_derivative_real(data: &SpectralData, w: &[f64], p: &RealPoint) -> f64 {
    let mut s = CompensatedSum::new();
    for (n, &wn) in w.iter().enumerate() {
        if wn != 0.0 {
            let d = p.minus_node(data, n);
            s.add(-wn / (d * d));
        }
    }
    s.value()
}

/// Space element `F(z) = A(z)·Σ a_n μ_n^{1/2}/(z − t_n)`.
#[derive(Debug, Clone)]
pub struct SpaceElement<'a> {
    pub data: &'a SpectralData,
    pub coeffs: CoefficientVector,
}

impl<'a> SpaceElement<'a> {
    pub fn new(data: &'a SpectralData, coeffs: CoefficientVector) -> Result<Self, EvalError> {
        check_len(data, coeffs.len())?;
        Ok(Self { data, coeffs })
    }

    /// Residue weights `a_n μ_n^{1/2}`.
    pub fn weights(&self) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .zip(&self.data.mu)
            .map(|(a, m)| a * m.sqrt())
            .collect()
    }

    /// `Σ a_n μ_n^{1/2}/(z − t_n)`.
    pub fn cauchy_eval(&self, z: Complex64) -> Result<Complex64, EvalError> {
        cauchy_transform(self.data, &self.weights(), z)
    }

    /// `F(z)` in log form; at a node the residue identity `F(t_n) = A′(t_n)a_n μ_n^{1/2}` is used.
    pub fn f_eval(&self, z: Complex64) -> LogComplex {
        if z.im == 0.0 {
            if let Some(n) = self.data.node_index(z.re) {
                let an = self.coeffs.get(n).copied().unwrap_or_default();
                let ap = a_prime_at_node(self.data, n).to_log_complex();
                return ap * LogComplex::from_complex(an * self.data.mu[n].sqrt());
            }
        }
        let la = log_a(self.data, z).expect("off-node point");
        let c = self.cauchy_eval(z).expect("off-node point");
        la * LogComplex::from_complex(c)
    }

    /// `‖F‖ = π‖a‖₂`.
    pub fn norm(&self) -> f64 {
        PI * self.coeffs.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Recovers `a_n = F(t_n)/(A′(t_n) μ_n^{1/2})` from nodal values.
    pub fn coefficient_from_value(&self, n: usize) -> Complex64 {
        let f = self.f_eval(Complex64::new(self.data.t[n], 0.0));
        let ap = a_prime_at_node(self.data, n).to_log_complex();
        (f / ap).to_complex() / self.data.mu[n].sqrt()
    }
}

/// `B/A(z) = r + (1/π)Σ(1/(t_n − z) − t_n/(t_n² + 1))μ_n`.
pub fn b_over_a(data: &SpectralData, r: f64, z: Complex64) -> Result<Complex64, EvalError> {
    if z.im == 0.0 {
        if let Some(index) = data.node_index(z.re) {
            return Err(EvalError::EvaluationAtNode { index });
        }
    }
    let mut s = ComplexSum::new();
    for (&t, &m) in data.t.iter().zip(&data.mu) {
        s.add(m / (t - z));
        s.add(Complex64::new(-m * t / (t * t + 1.0), 0.0));
    }
    Ok(Complex64::new(r, 0.0) + s.value() / PI)
}

/// `B(t_n) = −μ_n A′(t_n)/π`, the residue identity of `B/A`.
pub fn b_at_node(data: &SpectralData, n: usize) -> SignedLog {
    let ap = a_prime_at_node(data, n);
    SignedLog::new(-ap.sign, ap.log_abs + (data.mu[n] / PI).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TailModel;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn single_node_cauchy() {
        let d = SpectralData::new(vec![1.0], vec![4.0], TailModel::none()).unwrap();
        let f = SpaceElement::new(&d, vec![c(1.0)]).unwrap();
        assert!((f.cauchy_eval(c(3.0)).unwrap() - c(1.0)).norm() < 1e-15);
        let zero = SpaceElement::new(&d, vec![c(0.0)]).unwrap();
        assert_eq!(zero.cauchy_eval(c(1.0)).unwrap(), c(0.0));
    }

    #[test]
    fn symmetric_pair_cancels() {
        let d = SpectralData::new(vec![1.0, 3.0], vec![1.0, 1.0], TailModel::none()).unwrap();
        let f = SpaceElement::new(&d, vec![c(1.0), c(1.0)]).unwrap();
        assert_eq!(f.cauchy_eval(c(2.0)).unwrap(), c(0.0));
    }

    #[test]
    fn herglotz_single_term_and_linearity() {
        let d = SpectralData::new(vec![1.0], vec![PI], TailModel::none()).unwrap();
        let m0 = b_over_a(&d, 0.0, c(2.0)).unwrap();
        assert!((m0 - c(-1.5)).norm() < 1e-15);
        let m1 = b_over_a(&d, 1.0, c(2.0)).unwrap();
        assert!((m1 - m0 - c(1.0)).norm() < 1e-15);
    }
}
