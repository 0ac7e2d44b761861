//! Overflow-safe representations of large or tiny values.

use std::f64::consts::PI;
use std::ops::{Div, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Wraps an angle into (−π, π].
pub fn wrap_phase(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let mut r = theta.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    if r <= -PI {
        r += 2.0 * PI;
    }
    r
}

/// Nonzero complex number stored as `exp(log_abs + i·phase)`; zero has `log_abs = −∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_abs: f64,
    pub phase: f64,
}

impl LogComplex {
    pub const ONE: LogComplex = LogComplex {
        log_abs: 0.0,
        phase: 0.0,
    };
    pub const ZERO: LogComplex = LogComplex {
        log_abs: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn new(log_abs: f64, phase: f64) -> Self {
        Self {
            log_abs,
            phase: wrap_phase(phase),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        Self::new(z.norm().ln(), z.arg())
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_abs.exp(), self.phase)
    }

    pub fn abs(&self) -> f64 {
        self.log_abs.exp()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.log_abs, -self.phase)
    }

    pub fn powi(&self, n: i32) -> Self {
        Self::new(self.log_abs * n as f64, self.phase * n as f64)
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_abs + rhs.log_abs, self.phase + rhs.phase)
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() {
            return LogComplex::ZERO;
        }
        LogComplex::new(self.log_abs - rhs.log_abs, self.phase - rhs.phase)
    }
}

/// Nonzero real number stored as `sign · exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignedLog {
    pub sign: f64,
    pub log_abs: f64,
}

impl SignedLog {
    pub fn new(sign: f64, log_abs: f64) -> Self {
        Self {
            sign: if sign < 0.0 { -1.0 } else { 1.0 },
            log_abs,
        }
    }

    pub fn from_real(x: f64) -> Self {
        if x == 0.0 {
            return Self {
                sign: 1.0,
                log_abs: f64::NEG_INFINITY,
            };
        }
        Self::new(x.signum(), x.abs().ln())
    }

    pub fn value(&self) -> f64 {
        self.sign * self.log_abs.exp()
    }

    pub fn to_log_complex(&self) -> LogComplex {
        LogComplex::new(self.log_abs, if self.sign < 0.0 { PI } else { 0.0 })
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;
    fn mul(self, rhs: SignedLog) -> SignedLog {
        SignedLog::new(self.sign * rhs.sign, self.log_abs + rhs.log_abs)
    }
}

impl Div for SignedLog {
    type Output = SignedLog;
    fn div(self, rhs: SignedLog) -> SignedLog {
        SignedLog::new(self.sign * rhs.sign, self.log_abs - rhs.log_abs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_keeps_pi_and_maps_minus_pi() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_phase(0.5 + 4.0 * PI) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn round_trip_complex() {
        let z = Complex64::new(-3.0, 4.0);
        let l = LogComplex::from_complex(z);
        assert!((l.to_complex() - z).norm() < 1e-14);
        let w = l * l.conj();
        assert!((w.to_complex() - Complex64::new(25.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn signed_log_products() {
        let a = SignedLog::from_real(-2.0);
        let b = SignedLog::from_real(8.0);
        assert!(((a * b).value() + 16.0).abs() < 1e-13);
        assert!(((b / a).value() + 4.0).abs() < 1e-14);
    }
}
