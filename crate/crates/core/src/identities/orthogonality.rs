//! Orthogonality on the lattice `q^{Z/2}`, the order/argument symmetry and
//! the expansion of a quotient of lattice values.

use num_complex::Complex64;

use super::{c, ci, sum_terms, sum_terms_one_sided, IdentityParams, IdentityReport};
use crate::error::{Error, Result};
use crate::qbessel::{hahn_exton_j_direct_exp, hahn_exton_j_lattice, hahn_exton_j_lattice_ln};
use crate::qseries::{q_pochhammer, Decay, QParam, SeriesValue, TailHint, Truncation};

/// `Σ_m q^{m+z} J_x(q^{(z+m)/2}) J_x(q^{(l+m)/2}) = δ_{z,l}` for `Re x > -1`.
pub fn verify_orthogonality(x: Complex64, z: i64, l: i64, q: QParam, trunc: &Truncation) -> Result<IdentityReport> {
    if !(x.re > -1.0) {
        return Err(Error::Domain(format!("Re x = {} must exceed -1", x.re)));
    }
    let hint = TailHint::new(Decay::Geometric(q.pow(1.0 + x.re)), Decay::Gaussian);
    let lhs = sum_terms(
        |m| {
            let a = hahn_exton_j_lattice_ln(x, z + m, q, trunc)?;
            let b = hahn_exton_j_lattice_ln(x, l + m, q, trunc)?;
            Ok(a.mul(b).scale_ln(ci(m + z) * q.ln()).to_value(trunc))
        },
        trunc,
        hint,
    )?;
    let rhs = SeriesValue::exact(c(if z == l { 1.0 } else { 0.0 }));
    let params = IdentityParams::Named(vec![("x", x), ("z", ci(z)), ("l", ci(l)), ("q", c(q.value()))]);
    Ok(IdentityReport::new("orthogonality", lhs, rhs, trunc, params))
}

/// `J_α(q^{ν/2}) = J_ν(q^{α/2})`, both sides from the defining series.
pub fn verify_symmetry(alpha: Complex64, nu: Complex64, q: QParam, trunc: &Truncation) -> Result<IdentityReport> {
    let lhs = hahn_exton_j_direct_exp(alpha, 0.5 * nu * q.ln(), q, trunc)?;
    let rhs = hahn_exton_j_direct_exp(nu, 0.5 * alpha * q.ln(), q, trunc)?;
    let params = IdentityParams::Named(vec![("alpha", alpha), ("nu", nu), ("q", c(q.value()))]);
    Ok(IdentityReport::new("symmetry", lhs, rhs, trunc, params))
}

/// `J_x(q^{(z-k)/2})/J_{x-ν}(q^{z/2}) = q^{ν(z-k)/2} Σ_{m>=0} (q^ν;q)_m/(q;q)_m
/// q^{m(1+(x-ν)/2)} J_{x-ν}(q^{(z-k+m)/2})/J_{x-ν}(q^{z/2})`.
pub fn verify_quotient_expansion(
    x: Complex64,
    nu: Complex64,
    z: i64,
    k: i64,
    q: QParam,
    trunc: &Truncation,
) -> Result<IdentityReport> {
    let d = x - nu;
    if !(d.re > -1.0) {
        return Err(Error::Domain(format!("Re(x - nu) = {} must exceed -1", d.re)));
    }
    let den = hahn_exton_j_lattice(d, z, q, trunc)?;
    if den.value.norm() < trunc.abs_tol || den.value.norm() <= den.est_error {
        return Err(Error::NearZeroDenominator(format!(
            "J_(x-nu)(q^(z/2)) = {} is indistinguishable from zero",
            den.value
        )));
    }
    let lhs = hahn_exton_j_lattice(x, z - k, q, trunc)?.div(den);
    let qnu = q.cpow(nu);
    let step = q.cpow(1.0 + 0.5 * d);
    let s = sum_terms_one_sided(
        |m| {
            let m = m as usize;
            let coef = q_pochhammer(qnu, q, m) / q_pochhammer(c(q.value()), q, m) * step.powi(m as i32);
            if coef == c(0.0) {
                return Ok(SeriesValue::exact(coef));
            }
            Ok(hahn_exton_j_lattice(d, z - k + m as i64, q, trunc)?.scale(coef))
        },
        trunc,
        Decay::Geometric(q.pow(1.0 + d.re)),
    )?;
    let rhs = s.div(den).scale(q.cpow(0.5 * nu * ci(z - k)));
    let params = IdentityParams::Named(vec![
        ("x", x),
        ("nu", nu),
        ("z", ci(z)),
        ("k", ci(k)),
        ("q", c(q.value())),
    ]);
    Ok(IdentityReport::new("quotient_expansion", lhs, rhs, trunc, params))
}
