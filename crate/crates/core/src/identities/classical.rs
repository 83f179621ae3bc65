//! Graf's addition formula and the product formula for classical Bessel
//! functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{c, ci, IdentityParams, IdentityReport};
use crate::error::{Error, Result};
use crate::qbessel::{classical_bessel_j, BesselOrder};
use crate::qseries::{SeriesValue, Truncation};

fn check_domain(x: f64, y: f64, nu: Complex64) -> Result<()> {
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::InvalidParameter(format!("x = {}, y = {} must be finite", x, y)));
    }
    let integer = BesselOrder::new(nu)?.as_integer().is_some();
    if !integer && !(x > 0.0 && y.abs() < x) {
        return Err(Error::Domain(format!(
            "non-integer order needs 0 <= |y| < x, got x = {}, y = {}",
            x, y
        )));
    }
    Ok(())
}

/// `J_ν(r(ψ)) ((x - y e^{-iψ})/(x - y e^{iψ}))^{ν/2}` with
/// `r = sqrt(x² + y² - 2xy cos ψ)` and the principal power.
fn graf_kernel(x: f64, y: f64, psi: f64, nu: Complex64, trunc: &Truncation) -> Result<SeriesValue> {
    let w = c(x) - y * Complex64::from_polar(1.0, -psi);
    let r = w.norm();
    let j = classical_bessel_j(nu, c(r), trunc)?;
    if r == 0.0 {
        return Ok(j);
    }
    let factor = (0.5 * nu * (w / w.conj()).ln()).exp();
    Ok(j.scale(factor))
}

/// `J_ν(r) (...)^{ν/2}` against `Σ_{|m| <= m_max} J_{ν+m}(x) J_m(y) e^{imψ}`.
pub fn verify_classical_graf(
    x: f64,
    y: f64,
    psi: f64,
    nu: Complex64,
    m_max: u32,
    trunc: &Truncation,
) -> Result<IdentityReport> {
    check_domain(x, y, nu)?;
    if m_max == 0 {
        return Err(Error::InvalidParameter("m_max must be positive".into()));
    }
    let lhs = graf_kernel(x, y, psi, nu, trunc)?;
    let mut value = c(0.0);
    let mut err = 0.0;
    let mut converged = true;
    let mut terms = 0;
    let m_max = m_max as i64;
    for m in -m_max..=m_max {
        let t = classical_bessel_j(nu + ci(m), c(x), trunc)?
            .mul(classical_bessel_j(ci(m), c(y), trunc)?)
            .scale(Complex64::from_polar(1.0, m as f64 * psi));
        value += t.value;
        err += t.est_error;
        converged &= t.converged;
        terms += t.terms_used;
    }
    let rhs = SeriesValue {
        value,
        est_error: err,
        terms_used: terms,
        converged,
    };
    let params = IdentityParams::Named(vec![
        ("x", c(x)),
        ("y", c(y)),
        ("psi", c(psi)),
        ("nu", nu),
        ("m_max", ci(m_max)),
    ]);
    Ok(IdentityReport::new("classical_graf", lhs, rhs, trunc, params))
}

/// `J_{ν+m}(x) J_m(y)` against the `n_quad`-point trapezoid rule for
/// `(1/2π) ∫_0^{2π} J_ν(r(ψ)) (...)^{ν/2} e^{-imψ} dψ`.
pub fn verify_classical_product(x: f64, y: f64, nu: Complex64, m: i64, n_quad: u32) -> Result<IdentityReport> {
    check_domain(x, y, nu)?;
    if n_quad == 0 {
        return Err(Error::InvalidParameter("n_quad must be positive".into()));
    }
    let trunc = Truncation {
        rel_tol: 1e-15,
        abs_tol: 1e-300,
        ..Truncation::default()
    };
    let lhs = classical_bessel_j(nu + ci(m), c(x), &trunc)?.mul(classical_bessel_j(ci(m), c(y), &trunc)?);
    let n = n_quad as usize;
    let mut value = c(0.0);
    let mut err = 0.0;
    let mut converged = true;
    let mut terms = 0;
    for j in 0..n {
        let psi = 2.0 * PI * j as f64 / n as f64;
        let f = graf_kernel(x, y, psi, nu, &trunc)?.scale(Complex64::from_polar(1.0 / n as f64, -(m as f64) * psi));
        value += f.value;
        err += f.est_error;
        converged &= f.converged;
        terms += f.terms_used;
    }
    let rhs = SeriesValue {
        value,
        est_error: err + f64::EPSILON * n as f64 * value.norm(),
        terms_used: terms,
        converged,
    };
    let params = IdentityParams::Named(vec![
        ("x", c(x)),
        ("y", c(y)),
        ("nu", nu),
        ("m", ci(m)),
        ("n_quad", c(n_quad as f64)),
    ]);
    let report_trunc = Truncation::default();
    Ok(IdentityReport::new("classical_product", lhs, rhs, &report_trunc, params))
}
