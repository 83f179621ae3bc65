//! The q-Graf addition formula and the product formula it is derived from.

use num_complex::Complex64;

use super::sums::product_expansion_rhs_exp;
use super::{ci, sum_terms, GrafParams, IdentityParams, IdentityReport};
use crate::error::Result;
use crate::qbessel::{hahn_exton_j_exp, hahn_exton_j_exp_ln, hahn_exton_j_lattice, hahn_exton_j_lattice_ln, LnValue};
use crate::qseries::{Decay, SeriesValue, TailHint, Truncation};

/// `ln(R q^{t/2})` in the branch convention of the module.
fn ln_arg(p: &GrafParams, t: Complex64) -> Complex64 {
    p.r.ln() + 0.5 * t * p.q.ln()
}

/// `J_ν(R q^{(y+z+ν)/2}) J_{x-ν}(q^{z/2}) = Σ_k J_k(R q^{(x+y+k)/2})
/// J_{ν+k}(R q^{(y+k+ν)/2}) J_x(q^{(z-k)/2})`.
pub fn verify_graf_addition(p: GrafParams, trunc: &Truncation) -> Result<IdentityReport> {
    p.check_domain()?;
    let q = p.q;
    let z = p.z_or_m;
    let lhs = hahn_exton_j_exp(p.nu, ln_arg(&p, p.y + ci(z) + p.nu), q, trunc)?
        .mul(hahn_exton_j_lattice(p.x - p.nu, z, q, trunc)?);
    let rhs = graf_rhs(&p, trunc)?;
    Ok(IdentityReport::new("graf_addition", lhs, rhs, trunc, IdentityParams::Graf(p)))
}

fn graf_rhs(p: &GrafParams, trunc: &Truncation) -> Result<SeriesValue> {
    let q = p.q;
    let z = p.z_or_m;
    let lower = q.pow(1.0 + p.x.re) * (p.r.norm_sqr() * q.pow(p.y.re)).max(1.0);
    let hint = TailHint::new(Decay::Gaussian, Decay::Geometric(lower));
    sum_terms(
        |k| {
            let a = hahn_exton_j_exp_ln(ci(k), ln_arg(p, p.x + p.y + ci(k)), q, trunc)?;
            let b = hahn_exton_j_exp_ln(p.nu + ci(k), ln_arg(p, p.y + ci(k) + p.nu), q, trunc)?;
            let c = hahn_exton_j_lattice_ln(p.x, z - k, q, trunc)?;
            Ok(a.mul(b).mul(c).to_value(trunc))
        },
        trunc,
        hint,
    )
}

fn sign(m: i64) -> f64 {
    if m.rem_euclid(2) == 1 {
        -1.0
    } else {
        1.0
    }
}

fn product_lhs(p: &GrafParams, trunc: &Truncation) -> Result<SeriesValue> {
    let q = p.q;
    let m = p.z_or_m;
    let a = hahn_exton_j_exp(ci(m), ln_arg(p, p.x + p.y), q, trunc)?;
    let b = hahn_exton_j_exp(p.nu - ci(m), ln_arg(p, p.y + p.nu - ci(m)), q, trunc)?;
    Ok(a.mul(b).scale(Complex64::new(sign(m) * q.pow(-0.5 * m as f64), 0.0)))
}

fn product_rhs(p: &GrafParams, trunc: &Truncation) -> Result<SeriesValue> {
    let q = p.q;
    let m = p.z_or_m;
    let hint = TailHint::new(Decay::Geometric(q.pow(1.0 + p.x.re)), Decay::Gaussian);
    sum_terms(
        |z| {
            let a = hahn_exton_j_lattice_ln(p.x, m + z, q, trunc)?;
            let b = hahn_exton_j_lattice_ln(p.x - p.nu, z, q, trunc)?;
            let c = hahn_exton_j_exp_ln(p.nu, ln_arg(p, p.y + p.nu + ci(z)), q, trunc)?;
            Ok(a.mul(b).mul(c).scale_ln(ci(z) * q.ln()).to_value(trunc))
        },
        trunc,
        hint,
    )
}

/// `(-1)^m q^{-m/2} J_m(R q^{(x+y)/2}) J_{ν-m}(R q^{(y+ν-m)/2}) =
/// Σ_z q^z J_x(q^{(m+z)/2}) J_{x-ν}(q^{z/2}) J_ν(R q^{(y+ν+z)/2})`.
pub fn verify_product_formula(p: GrafParams, trunc: &Truncation) -> Result<IdentityReport> {
    p.check_product_domain()?;
    let lhs = product_lhs(&p, trunc)?;
    let rhs = product_rhs(&p, trunc)?;
    Ok(IdentityReport::new("product_formula", lhs, rhs, trunc, IdentityParams::Graf(p)))
}

/// Multiplies the product-formula sum by `q^m J_x(q^{(l+m)/2})` and sums
/// over `m`; orthogonality collapses the double sum to the left side of the
/// addition formula at `z = l`. Here `p.z_or_m` is `l`.
pub fn replay_addition_via_orthogonality(p: GrafParams, trunc: &Truncation) -> Result<IdentityReport> {
    p.check_domain()?;
    let q = p.q;
    let l = p.z_or_m;
    let lhs = hahn_exton_j_exp(p.nu, ln_arg(&p, p.y + ci(l) + p.nu), q, trunc)?
        .mul(hahn_exton_j_lattice(p.x - p.nu, l, q, trunc)?);
    let hint = TailHint::new(Decay::Gaussian, Decay::Gaussian);
    let rhs = sum_terms(
        |m| {
            let inner = product_rhs(&GrafParams { z_or_m: m, ..p }, trunc)?;
            let w = hahn_exton_j_lattice_ln(p.x, l + m, q, trunc)?.scale_ln(ci(m) * q.ln());
            if w.is_zero() || inner.value == Complex64::new(0.0, 0.0) {
                return Ok(SeriesValue::exact(Complex64::new(0.0, 0.0)));
            }
            let ln_inner = LnValue {
                ln: inner.value.ln(),
                ln_err: inner.est_error.ln(),
                terms_used: inner.terms_used,
                finished: inner.converged,
            };
            Ok(ln_inner.mul(w).to_value(trunc))
        },
        trunc,
        hint,
    )?;
    Ok(IdentityReport::new("addition_replay", lhs, rhs, trunc, IdentityParams::Graf(p)))
}

/// Compares the sum side of the product formula with the same quantity
/// written through the product expansion of [`verify_product_expansion`](super::verify_product_expansion),
/// taking orders `m` and `ν - m`, `b = 1`, argument `R q^{(y+ν-m)/2}` and `a = q^{(x-ν+m)/2}`.
pub fn product_formula_via_expansion(p: GrafParams, trunc: &Truncation) -> Result<IdentityReport> {
    p.check_product_domain()?;
    let q = p.q;
    let m = p.z_or_m;
    let lhs = product_rhs(&p, trunc)?;
    let ln_a = 0.5 * (p.x - p.nu + ci(m)) * q.ln();
    let ln_x = ln_arg(&p, p.y + p.nu - ci(m));
    let rhs = product_expansion_rhs_exp(ln_a, Complex64::new(0.0, 0.0), ln_x, p.nu - ci(m), ci(m), q, trunc)?
        .scale(Complex64::new(sign(m) * q.pow(-0.5 * m as f64), 0.0));
    Ok(IdentityReport::new("product_via_expansion", lhs, rhs, trunc, IdentityParams::Graf(p)))
}
