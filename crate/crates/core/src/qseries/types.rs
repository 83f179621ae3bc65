use num_complex::Complex64;

use crate::error::{Error, Result};

/// The base `q` of every q-series, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QParam(f64);

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && q > 0.0 && q < 1.0 {
            Ok(QParam(q))
        } else {
            Err(Error::InvalidQ(q))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn ln(self) -> f64 {
        self.0.ln()
    }

    /// `q^t` for real `t`.
    #[inline]
    pub fn pow(self, t: f64) -> f64 {
        (t * self.ln()).exp()
    }

    /// `q^t = exp(t ln q)` for complex `t`.
    #[inline]
    pub fn cpow(self, t: Complex64) -> Complex64 {
        (t * self.ln()).exp()
    }
}

/// Truncation policy for every adaptive summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
    /// Initial half-width of a bilateral window.
    pub window_init: usize,
    /// Multiplicative growth of a lagging window side.
    pub window_growth: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            rel_tol: 1e-11,
            abs_tol: 1e-13,
            max_terms: 100_000,
            window_init: 8,
            window_growth: 2,
        }
    }
}

impl Truncation {
    pub fn new(rel_tol: f64, abs_tol: f64, max_terms: usize) -> Result<Self> {
        Truncation {
            rel_tol,
            abs_tol,
            max_terms,
            ..Truncation::default()
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidTruncation(format!("rel_tol = {}", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidTruncation(format!("abs_tol = {}", self.abs_tol)));
        }
        if self.max_terms < 1 {
            return Err(Error::InvalidTruncation("max_terms must be at least 1".into()));
        }
        if self.window_init < 1 || self.window_growth < 2 {
            return Err(Error::InvalidTruncation(format!(
                "window_init = {}, window_growth = {} (need >= 1 and >= 2)",
                self.window_init, self.window_growth
            )));
        }
        Ok(self)
    }

    /// Error budget for a value of the given magnitude.
    #[inline]
    pub fn tolerance(&self, magnitude: f64) -> f64 {
        (self.rel_tol * magnitude).max(self.abs_tol)
    }

    pub fn with_max_terms(mut self, max_terms: usize) -> Self {
        self.max_terms = max_terms;
        self
    }
}

/// A numerically evaluated quantity together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    /// Estimated absolute error (truncation plus accumulated rounding).
    pub est_error: f64,
    pub terms_used: usize,
    pub converged: bool,
}

impl SeriesValue {
    pub fn exact(value: Complex64) -> Self {
        SeriesValue {
            value,
            est_error: 0.0,
            terms_used: 0,
            converged: true,
        }
    }

    /// Rebuilds the convergence flag against a policy: finished summation and
    /// error within budget.
    pub fn judged(value: Complex64, est_error: f64, terms_used: usize, finished: bool, trunc: &Truncation) -> Self {
        let converged = finished && value.is_finite() && est_error <= trunc.tolerance(value.norm());
        SeriesValue {
            value,
            est_error,
            terms_used,
            converged,
        }
    }

    pub fn scale(self, c: Complex64) -> Self {
        SeriesValue {
            value: self.value * c,
            est_error: self.est_error * c.norm(),
            ..self
        }
    }

    /// Product with first-order error propagation.
    pub fn mul(self, other: SeriesValue) -> Self {
        SeriesValue {
            value: self.value * other.value,
            est_error: self.est_error * other.value.norm()
                + other.est_error * self.value.norm()
                + self.est_error * other.est_error,
            terms_used: self.terms_used + other.terms_used,
            converged: self.converged && other.converged,
        }
    }

    /// Quotient with first-order error propagation.
    pub fn div(self, other: SeriesValue) -> Self {
        let d = other.value.norm();
        let v = self.value / other.value;
        SeriesValue {
            value: v,
            est_error: (self.est_error + v.norm() * other.est_error) / d,
            terms_used: self.terms_used + other.terms_used,
            converged: self.converged && other.converged,
        }
    }

    pub fn relative_error(&self) -> f64 {
        let m = self.value.norm();
        if m > 0.0 {
            self.est_error / m
        } else if self.est_error == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}
