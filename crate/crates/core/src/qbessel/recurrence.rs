use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qseries::{QParam, Truncation};

use super::hahn_exton::hahn_exton_j_exp;

/// Parameters of `p_k(x;n) = (-1)^k q^{-k/2} J_{2nα+β}(x q^{-k/2}; q)` with
/// `q = c^{1/n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceFamily {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
    pub n: u32,
}

impl RecurrenceFamily {
    pub fn new(alpha: f64, beta: f64, c: f64, n: u32) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::Domain(format!("alpha must be positive, got {}", alpha)));
        }
        if !(beta > -1.0) {
            return Err(Error::Domain(format!("beta must exceed -1, got {}", beta)));
        }
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::Domain(format!("c must lie in (0,1), got {}", c)));
        }
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        Ok(RecurrenceFamily { alpha, beta, c, n })
    }

    /// `q = c^{1/n}`.
    pub fn q(&self) -> QParam {
        QParam::new(self.c.powf(1.0 / self.n as f64)).expect("c in (0,1) gives q in (0,1)")
    }

    /// The Bessel order `2nα + β`.
    pub fn order(&self) -> f64 {
        2.0 * self.n as f64 * self.alpha + self.beta
    }
}

/// `(a_{k,n}, b_{k,n}) = (q^{k - 1/2 + nα + β/2}, q^k (1 + q^{2nα+β}))`.
pub fn recurrence_coeffs(k: usize, fam: &RecurrenceFamily) -> (f64, f64) {
    let q = fam.q();
    let n = fam.n as f64;
    let kf = k as f64;
    let a = q.pow(kf - 0.5 + n * fam.alpha + 0.5 * fam.beta);
    let b = q.pow(kf) * (1.0 + q.pow(fam.order()));
    (a, b)
}

/// `p_k(x;n) = (-1)^k q^{-k/2} J_{2nα+β}(x q^{-k/2}; q)` evaluated directly.
pub fn p_k(k: usize, x: Complex64, fam: &RecurrenceFamily, trunc: &Truncation) -> Result<Complex64> {
    let q = fam.q();
    let kf = k as f64;
    let order = Complex64::new(fam.order(), 0.0);
    if x == Complex64::new(0.0, 0.0) {
        let j = super::hahn_exton::hahn_exton_j(order, x, q, trunc)?;
        return Ok(j.value);
    }
    let ln_arg = x.ln() - 0.5 * kf * q.ln();
    let j = hahn_exton_j_exp(order, ln_arg, q, trunc)?;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(j.value * (sign * q.pow(-0.5 * kf)))
}
