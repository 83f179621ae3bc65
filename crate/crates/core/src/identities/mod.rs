//! Verifiers for the q-Graf addition formula, the product formulas and the
//! identities used to derive them.
//!
//! Every verifier evaluates both sides independently and returns an
//! [`IdentityReport`]. Arguments of the form `R q^{t/2}` are passed to the
//! Bessel evaluators as `ln R + (t/2) ln q`, so `w^ν` factors split as
//! `R^ν q^{tν/2}` with the principal logarithm of `R` only.

mod classical;
mod graf;
mod orthogonality;
mod sums;

pub use classical::{verify_classical_graf, verify_classical_product};
pub use graf::{
    product_formula_via_expansion, replay_addition_via_orthogonality, verify_graf_addition, verify_product_formula,
};
pub use orthogonality::{verify_orthogonality, verify_quotient_expansion, verify_symmetry};
pub use sums::{verify_sum_formula, verify_sum_formula_specialized, verify_product_expansion};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qseries::{one_sided_sum, try_bilateral_sum, Decay, QParam, SeriesValue, TailHint, Truncation};

/// Parameters shared by the addition formula and the product formula.
///
/// `z_or_m` is the lattice index `z` for the addition formula and the
/// order shift `m` for the product formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrafParams {
    pub r: Complex64,
    pub x: Complex64,
    pub y: Complex64,
    pub nu: Complex64,
    pub z_or_m: i64,
    pub q: QParam,
}

impl GrafParams {
    pub fn new(r: Complex64, x: Complex64, y: Complex64, nu: Complex64, z_or_m: i64, q: QParam) -> Self {
        GrafParams { r, x, y, nu, z_or_m, q }
    }

    /// `q^{1 + Re x + Re y} |R|²`, which must stay below 1.
    pub fn domain_value(&self) -> f64 {
        self.q.pow(1.0 + self.x.re + self.y.re) * self.r.norm_sqr()
    }

    /// `Re x > -1`, `q^{1+Re x+Re y}|R|² < 1` and `R != 0`. The boundary
    /// counts as outside.
    pub fn domain_ok(&self) -> bool {
        self.x.re > -1.0 && self.domain_value() < 1.0 && self.r != Complex64::new(0.0, 0.0)
    }

    /// `q^{1+Re x+Re y}|R|² = 1` up to rounding.
    pub fn on_boundary(&self) -> bool {
        (self.domain_value() - 1.0).abs() <= 1e-12
    }

    fn check_domain(&self) -> Result<()> {
        self.check(false)
    }

    /// The product-formula sum converges for every `R` once `Re x > -1`;
    /// the strict inequality is needed only to interchange summations in
    /// its derivation, so the exact boundary is admitted there.
    fn check_product_domain(&self) -> Result<()> {
        self.check(true)
    }

    fn check(&self, allow_boundary: bool) -> Result<()> {
        if self.r == Complex64::new(0.0, 0.0) {
            return Err(Error::Domain("R must be nonzero".into()));
        }
        if !(self.x.re > -1.0) {
            return Err(Error::Domain(format!("Re x = {} must exceed -1", self.x.re)));
        }
        let d = self.domain_value();
        if !(d < 1.0 || (allow_boundary && self.on_boundary())) {
            return Err(Error::Domain(format!("q^(1+Re x+Re y)|R|^2 = {} must be below 1", d)));
        }
        Ok(())
    }

    fn entries(&self) -> Vec<(&'static str, Complex64)> {
        vec![
            ("R", self.r),
            ("x", self.x),
            ("y", self.y),
            ("nu", self.nu),
            ("z_or_m", Complex64::new(self.z_or_m as f64, 0.0)),
            ("q", Complex64::new(self.q.value(), 0.0)),
        ]
    }
}

/// The parameters a report was produced from.
#[derive(Debug, Clone, PartialEq)]
pub enum IdentityParams {
    Graf(GrafParams),
    Named(Vec<(&'static str, Complex64)>),
}

impl IdentityParams {
    /// Flat `(name, value)` list, integers and reals as complex numbers.
    pub fn entries(&self) -> Vec<(&'static str, Complex64)> {
        match self {
            IdentityParams::Graf(p) => p.entries(),
            IdentityParams::Named(v) => v.clone(),
        }
    }
}

/// Both sides of an identity with their diagnostics and residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity: &'static str,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_residual: f64,
    /// `abs_residual / max(|lhs|, |rhs|, abs_tol)`.
    pub rel_residual: f64,
    pub lhs_diag: SeriesValue,
    pub rhs_diag: SeriesValue,
    pub params: IdentityParams,
}

impl IdentityReport {
    pub fn new(
        identity: &'static str,
        lhs: SeriesValue,
        rhs: SeriesValue,
        trunc: &Truncation,
        params: IdentityParams,
    ) -> Self {
        let abs_residual = (lhs.value - rhs.value).norm();
        let den = lhs.value.norm().max(rhs.value.norm()).max(trunc.abs_tol);
        IdentityReport {
            identity,
            lhs: lhs.value,
            rhs: rhs.value,
            abs_residual,
            rel_residual: abs_residual / den,
            lhs_diag: lhs,
            rhs_diag: rhs,
            params,
        }
    }

    /// Both sides summed to their tolerance.
    pub fn converged(&self) -> bool {
        self.lhs_diag.converged && self.rhs_diag.converged
    }
}

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub(crate) fn ci(n: i64) -> Complex64 {
    Complex64::new(n as f64, 0.0)
}

/// Bilateral sum of terms that carry their own error estimates; those are
/// added to the truncation estimate of the sum.
pub(crate) fn sum_terms<F>(mut term: F, trunc: &Truncation, hint: TailHint) -> Result<SeriesValue>
where
    F: FnMut(i64) -> Result<SeriesValue>,
{
    let mut err = 0.0;
    let s = try_bilateral_sum(
        |k| {
            let t = term(k)?;
            err += t.est_error;
            Ok(t.value)
        },
        trunc,
        Some(hint),
    )?;
    Ok(with_term_errors(s, err, trunc))
}

/// One-sided counterpart of [`sum_terms`] over `n = 0, 1, ...`.
pub(crate) fn sum_terms_one_sided<F>(mut term: F, trunc: &Truncation, decay: Decay) -> Result<SeriesValue>
where
    F: FnMut(u64) -> Result<SeriesValue>,
{
    let mut err = 0.0;
    let s = one_sided_sum(
        |n| {
            let t = term(n)?;
            err += t.est_error;
            Ok(t.value)
        },
        trunc,
        Some(decay),
    )?;
    Ok(with_term_errors(s, err, trunc))
}

fn with_term_errors(s: SeriesValue, err: f64, trunc: &Truncation) -> SeriesValue {
    let est = s.est_error + err;
    SeriesValue {
        est_error: est,
        converged: s.converged && est <= trunc.tolerance(s.value.norm()),
        ..s
    }
}
