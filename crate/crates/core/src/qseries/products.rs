use num_complex::Complex64;

use super::types::{QParam, SeriesValue, Truncation};
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// Finite q-shifted factorial `(a;q)_k`.
pub fn q_pochhammer(a: Complex64, q: QParam, k: usize) -> Complex64 {
    let qv = q.value();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut aq = a;
    for _ in 0..k {
        prod *= 1.0 - aq;
        aq *= qv;
    }
    prod
}

/// Infinite q-shifted factorial `(a;q)_inf` by direct multiplication.
///
/// Multiplication stops once `|a| q^K < rel_tol (1-q)/2`; the omitted factors
/// then change the product by a relative amount of at most
/// `exp(t) - 1` with `t = |a| q^K / ((1-q)(1-|a|q^K))`.
pub fn q_pochhammer_inf(a: Complex64, q: QParam, trunc: &Truncation) -> SeriesValue {
    let qv = q.value();
    let stop = trunc.rel_tol * (1.0 - qv) / 2.0;
    let mut prod = Complex64::new(1.0, 0.0);
    let mut aq = a;
    let mut k = 0usize;
    while aq.norm() >= stop {
        if k >= trunc.max_terms {
            return tail_value(prod, aq.norm(), qv, k, false, trunc);
        }
        let f = 1.0 - aq;
        if f.norm() <= 1e-14 * aq.norm() {
            return SeriesValue {
                value: Complex64::new(0.0, 0.0),
                est_error: 0.0,
                terms_used: k + 1,
                converged: true,
            };
        }
        prod *= f;
        aq *= qv;
        k += 1;
    }
    tail_value(prod, aq.norm(), qv, k, true, trunc)
}

fn tail_value(prod: Complex64, edge: f64, qv: f64, k: usize, finished: bool, trunc: &Truncation) -> SeriesValue {
    let t = if edge < 1.0 {
        edge / ((1.0 - qv) * (1.0 - edge))
    } else {
        f64::INFINITY
    };
    let rel = t.exp_m1() + EPS * (k as f64 + 1.0);
    SeriesValue::judged(prod, rel * prod.norm(), k, finished, trunc)
}

/// `ln(1 + u)` for complex `u`, accurate when `u` is small.
pub fn cln1p(u: Complex64) -> Complex64 {
    if u.norm() > 0.5 {
        return (1.0 + u).ln();
    }
    let re = 0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p();
    let im = u.im.atan2(1.0 + u.re);
    Complex64::new(re, im)
}

/// A logarithm of an infinite product with its absolute error in the log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnProduct {
    pub ln: Complex64,
    pub err: f64,
    pub terms: usize,
    pub finished: bool,
}

/// `Σ_i ln(1 - a q^i)`, a logarithm of `(a;q)_inf` (branch unspecified,
/// the exponential is exact).
///
/// Returns `None` when a factor vanishes, i.e. `a = q^{-i}` to relative 1e-14.
pub fn ln_q_pochhammer_inf(a: Complex64, q: QParam, rel: f64, max_terms: usize) -> Option<LnProduct> {
    let qv = q.value();
    let stop = rel * (1.0 - qv) / 2.0;
    let mut s = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut aq = a;
    let mut k = 0usize;
    let mut finished = true;
    while aq.norm() >= stop {
        if k >= max_terms {
            finished = false;
            break;
        }
        if (1.0 - aq).norm() <= 1e-14 * aq.norm() {
            return None;
        }
        let t = cln1p(-aq);
        s += t;
        abs_sum += t.norm();
        aq *= qv;
        k += 1;
    }
    let edge = aq.norm();
    let tail = if edge < 0.5 {
        edge / ((1.0 - qv) * (1.0 - edge))
    } else {
        f64::INFINITY
    };
    Some(LnProduct {
        ln: s,
        err: tail + 2.0 * EPS * abs_sum,
        terms: k,
        finished,
    })
}

/// The q-gamma function `(q;q)_inf / (q^z;q)_inf * (1-q)^{1-z}`.
pub fn q_gamma(z: Complex64, q: QParam, trunc: &Truncation) -> Result<Complex64> {
    let n = z.re.round();
    if n <= 0.0 && (z - n).norm() <= 1e-14 * n.abs().max(1.0) {
        return Err(Error::Pole(format!("q-gamma at nonpositive integer {}", n)));
    }
    let rel = trunc.rel_tol.min(1e-16);
    let num = ln_q_pochhammer_inf(Complex64::new(q.value(), 0.0), q, rel, trunc.max_terms)
        .expect("(q;q)_inf has no vanishing factor");
    let den = ln_q_pochhammer_inf(q.cpow(z), q, rel, trunc.max_terms)
        .ok_or_else(|| Error::Pole(format!("q-gamma: (q^z;q)_inf vanishes at z = {}", z)))?;
    let ln = num.ln - den.ln + (1.0 - z) * (1.0 - q.value()).ln();
    let v = ln.exp();
    if !v.is_finite() {
        return Err(Error::NonFinite(format!("q-gamma({}) overflows", z)));
    }
    Ok(v)
}

/// `a / b` without forming `|b|²`, which overflows for `|b| > 1e154`.
pub(crate) fn cdiv(a: Complex64, b: Complex64) -> Complex64 {
    if b.re.abs() >= b.im.abs() {
        let r = b.im / b.re;
        let d = b.re + b.im * r;
        Complex64::new((a.re + a.im * r) / d, (a.im - a.re * r) / d)
    } else {
        let r = b.re / b.im;
        let d = b.re * r + b.im;
        Complex64::new((a.re * r + a.im) / d, (a.im * r - a.re) / d)
    }
}
