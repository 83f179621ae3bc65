//! The bilateral sum formula behind the product formula, its lattice
//! specialization, and the product expansion in terminating 2φ1 series.

use num_complex::Complex64;

use super::{c, ci, sum_terms, sum_terms_one_sided, IdentityParams, IdentityReport};
use crate::error::{Error, Result};
use crate::qbessel::{hahn_exton_j_exp, hahn_exton_j_exp_ln, hahn_exton_j_lattice_ln};
use crate::qseries::{q_pochhammer, q_pochhammer_inf, Decay, QParam, SeriesValue, TailHint, Truncation};

const EPS: f64 = f64::EPSILON;

fn tight() -> Truncation {
    Truncation {
        rel_tol: 1e-16,
        abs_tol: 1e-300,
        ..Truncation::default()
    }
}

/// `(a;q)_∞` as a value with its error.
fn pinf(a: Complex64, q: QParam) -> SeriesValue {
    q_pochhammer_inf(a, q, &tight())
}

/// `y^m/(q;q)_∞ Σ_{k >= max(0,-m)} (u;q)_{m+k} (q^{m+k+1};q)_∞ (v;q)_k t^k/(q;q)_k`,
/// the closed side of the sum formula with `u = x/(sy)`, `v = y/(sx)` and
/// `t = sxy`. For `m < 0` the terms with `m + k < 0` vanish.
fn closed_side(u: Complex64, v: Complex64, t: Complex64, y_m: Complex64, m: i64, q: QParam, trunc: &Truncation) -> Result<SeriesValue> {
    let k0 = (-m).max(0) as u64;
    let qq = pinf(c(q.value()), q);
    let s = sum_terms_one_sided(
        |i| {
            let k = k0 + i;
            let mk = (m + k as i64) as usize;
            let tail = pinf(c(q.pow((mk + 1) as f64)), q);
            let head = q_pochhammer(u, q, mk) * q_pochhammer(v, q, k as usize) * t.powi(k as i32)
                / q_pochhammer(c(q.value()), q, k as usize);
            let value = head * tail.value;
            let err = head.norm() * tail.est_error + 4.0 * EPS * (mk + k as usize + 1) as f64 * value.norm();
            Ok(SeriesValue {
                value,
                est_error: err,
                terms_used: 1,
                converged: true,
            })
        },
        trunc,
        Decay::Geometric(t.norm()),
    )?;
    Ok(s.div(qq).scale(y_m))
}

/// `Σ_z s^z y^{m+z} (y²;q)_∞/(q;q)_∞ 1φ1(0;y²;q,q^{m+z+1}) · x^z (x²;q)_∞/(q;q)_∞ 1φ1(0;x²;q,q^{z+1})`,
/// whose factors are `q^{n/2} J_n(w q^{-1/2})` for integer `n`.
fn sum_side(x: Complex64, y: Complex64, s: Complex64, m: i64, q: QParam, trunc: &Truncation) -> Result<SeriesValue> {
    let lq = q.ln();
    let (ln_x, ln_y, ln_s) = (x.ln() - 0.5 * lq, y.ln() - 0.5 * lq, s.ln());
    let hint = TailHint::new(Decay::Geometric((s * x * y).norm()), Decay::Gaussian);
    sum_terms(
        |z| {
            let a = hahn_exton_j_exp_ln(ci(m + z), ln_y, q, trunc)?;
            let b = hahn_exton_j_exp_ln(ci(z), ln_x, q, trunc)?;
            let scale = ci(z) * ln_s + 0.5 * ci(m + 2 * z) * lq;
            Ok(a.mul(b).scale_ln(scale).to_value(trunc))
        },
        trunc,
        hint,
    )
}

/// The sum formula for `|sxy| < 1`: a terminating-or-convergent 2φ1
/// closed form against a bilateral sum of products of 1φ1 factors.
pub fn verify_sum_formula(
    x_arg: Complex64,
    y_arg: Complex64,
    s: Complex64,
    m: i64,
    q: QParam,
    trunc: &Truncation,
) -> Result<IdentityReport> {
    let zero = c(0.0);
    if s == zero || x_arg == zero || y_arg == zero {
        return Err(Error::ZeroArgument("the sum formula needs s, x and y nonzero".into()));
    }
    let t = s * x_arg * y_arg;
    if !(t.norm() < 1.0) {
        return Err(Error::Domain(format!("|sxy| = {} must be below 1", t.norm())));
    }
    let u = x_arg / (s * y_arg);
    let v = y_arg / (s * x_arg);
    let lhs = closed_side(u, v, t, y_arg.powi(m as i32), m, q, trunc)?;
    let rhs = sum_side(x_arg, y_arg, s, m, q, trunc)?;
    let params = IdentityParams::Named(vec![
        ("x", x_arg),
        ("y", y_arg),
        ("s", s),
        ("m", ci(m)),
        ("q", c(q.value())),
    ]);
    Ok(IdentityReport::new("sum_formula", lhs, rhs, trunc, params))
}

/// The sum formula at `x = q^{(x-ν+1)/2}`, `y = q^{(x+1)/2}`,
/// `s = q^{ν/2+n}`, divided by `q^{m/2}`:
/// `q^{mx/2} (...) 2φ1(q^{m-ν-n}, q^{-n}; q^{m+1}; q, q^{x+n+1}) =
/// Σ_z q^{z(n+1+ν/2)} J_x(q^{(m+z)/2}) J_{x-ν}(q^{z/2})`.
pub fn verify_sum_formula_specialized(
    x: Complex64,
    nu: Complex64,
    m: i64,
    n: u32,
    q: QParam,
    trunc: &Truncation,
) -> Result<IdentityReport> {
    if !(x.re > -1.0) {
        return Err(Error::Domain(format!("Re x = {} must exceed -1", x.re)));
    }
    let nf = n as f64;
    let u = q.cpow(-nu - nf);
    let v = c(q.pow(-nf));
    let t = q.cpow(x + nf + 1.0);
    let lhs = closed_side(u, v, t, q.cpow(0.5 * ci(m) * x), m, q, trunc)?;
    let hint = TailHint::new(Decay::Geometric(q.pow(nf + 1.0 + x.re)), Decay::Gaussian);
    let rhs = sum_terms(
        |z| {
            let a = hahn_exton_j_lattice_ln(x, m + z, q, trunc)?;
            let b = hahn_exton_j_lattice_ln(x - nu, z, q, trunc)?;
            let scale = ci(z) * (nf + 1.0 + 0.5 * nu) * q.ln();
            Ok(a.mul(b).scale_ln(scale).to_value(trunc))
        },
        trunc,
        hint,
    )?;
    let params = IdentityParams::Named(vec![
        ("x", x),
        ("nu", nu),
        ("m", ci(m)),
        ("n", c(nf)),
        ("q", c(q.value())),
    ]);
    Ok(IdentityReport::new("sum_formula_specialized", lhs, rhs, trunc, params))
}

/// Right side of `J_ν(ax) J_μ(bx) = a^ν b^μ x^{ν+μ}/(q;q)_∞² Σ_n (-1)^n (bx)^{2n}
/// q^{n(n+1)/2}/(q;q)_n (q^{μ+1+n};q)_∞ Σ_j (q^{-n};q)_j (q^{-n-μ};q)_j/(q;q)_j
/// (q^{ν+1+j};q)_∞ (q^{μ+n+1} a²/b²)^j`, from logarithms of `a`, `b`, `x`.
pub(super) fn product_expansion_rhs_exp(
    ln_a: Complex64,
    ln_b: Complex64,
    ln_x: Complex64,
    mu: Complex64,
    nu: Complex64,
    q: QParam,
    trunc: &Truncation,
) -> Result<SeriesValue> {
    let qv = q.value();
    let bx2 = (2.0 * (ln_b + ln_x)).exp();
    let ab2 = (2.0 * (ln_a - ln_b)).exp();
    let qq = pinf(c(qv), q);
    let pref = (nu * (ln_a + ln_x) + mu * (ln_b + ln_x)).exp();
    let s = sum_terms_one_sided(
        |n| {
            let n = n as usize;
            let nf = n as f64;
            // (q^{ν+1+j};q)_∞ for j = n, n-1, ..., 0
            let top = pinf(q.cpow(nu + 1.0 + nf), q);
            let mut tails = vec![top.value; n + 1];
            for j in (0..n).rev() {
                tails[j] = tails[j + 1] * (1.0 - q.cpow(nu + 1.0 + j as f64));
            }
            let a1 = c(q.pow(-nf));
            let a2 = q.cpow(-nf - mu);
            let r = q.cpow(mu + nf + 1.0) * ab2;
            let mut head = c(1.0);
            let mut inner = c(0.0);
            let mut inner_abs = 0.0;
            for (j, tail) in tails.iter().enumerate() {
                let t = head * tail;
                inner += t;
                inner_abs += t.norm();
                let qj = qv.powi(j as i32);
                head = head * (1.0 - a1 * qj) * (1.0 - a2 * qj) * r / (1.0 - qj * qv);
            }
            let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
            let outer = bx2.powi(n as i32) * sign * qv.powf(0.5 * nf * (nf + 1.0)) / q_pochhammer(c(qv), q, n);
            let mid = pinf(q.cpow(mu + 1.0 + nf), q);
            let value = outer * mid.value * inner;
            let rel = top.relative_error() + mid.relative_error();
            let err = (outer * mid.value).norm() * (4.0 * EPS * (n + 1) as f64 * inner_abs) + value.norm() * rel;
            Ok(SeriesValue {
                value,
                est_error: err,
                terms_used: n + 1,
                converged: true,
            })
        },
        trunc,
        Decay::Gaussian,
    )?;
    Ok(s.div(qq).div(qq).scale(pref))
}

/// `J_ν(ax) J_μ(bx)` against its expansion in terminating 2φ1 series.
/// Both sides use `ln a + ln x` and `ln b + ln x` for the arguments, so
/// the powers split as `a^ν x^ν` with principal logarithms of `a`, `b`
/// and `x`.
pub fn verify_product_expansion(
    a: Complex64,
    b: Complex64,
    x_arg: Complex64,
    mu: Complex64,
    nu: Complex64,
    q: QParam,
    trunc: &Truncation,
) -> Result<IdentityReport> {
    let zero = c(0.0);
    if a == zero || b == zero || x_arg == zero {
        return Err(Error::ZeroArgument("the product expansion needs a b x != 0".into()));
    }
    let (ln_a, ln_b, ln_x) = (a.ln(), b.ln(), x_arg.ln());
    let lhs = hahn_exton_j_exp(nu, ln_a + ln_x, q, trunc)?.mul(hahn_exton_j_exp(mu, ln_b + ln_x, q, trunc)?);
    let rhs = product_expansion_rhs_exp(ln_a, ln_b, ln_x, mu, nu, q, trunc)?;
    let params = IdentityParams::Named(vec![
        ("a", a),
        ("b", b),
        ("x", x_arg),
        ("mu", mu),
        ("nu", nu),
        ("q", c(q.value())),
    ]);
    Ok(IdentityReport::new("product_expansion", lhs, rhs, trunc, params))
}
