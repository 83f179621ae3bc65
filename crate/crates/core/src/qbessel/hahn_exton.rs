use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qseries::{ln_q_pochhammer_inf, phi_rs_raw, QParam, SeriesValue, Truncation};

const EPS: f64 = f64::EPSILON;
/// Internal relative stopping tolerance of the 1φ1 factor.
const INNER_REL: f64 = 1e-16;
/// Relative tolerance of the logarithmic infinite products.
const PRODUCT_REL: f64 = 1e-17;

/// An order `ν` of a Bessel function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(Complex64);

impl BesselOrder {
    pub fn new(order: Complex64) -> Result<Self> {
        if order.is_finite() {
            Ok(BesselOrder(order))
        } else {
            Err(Error::InvalidParameter(format!("order {} is not finite", order)))
        }
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    /// The nearest integer when the order is integral to relative 1e-12.
    pub fn as_integer(self) -> Option<i64> {
        let n = self.0.re.round();
        if (self.0 - n).norm() <= 1e-12 * n.abs().max(1.0) && n.abs() < 1e15 {
            Some(n as i64)
        } else {
            None
        }
    }
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `J = exp(ln_pref) · sum`, kept apart so that callers can rescale.
#[derive(Debug, Clone, Copy)]
struct Parts {
    ln_pref: Complex64,
    /// Relative error carried by the prefactor.
    pref_rel: f64,
    sum: Complex64,
    /// Absolute error of `sum` (tail plus rounding).
    sum_err: f64,
    terms: usize,
    finished: bool,
}

impl Parts {
    fn zero() -> Self {
        Parts {
            ln_pref: zero(),
            pref_rel: 0.0,
            sum: zero(),
            sum_err: 0.0,
            terms: 0,
            finished: true,
        }
    }

    fn value(&self) -> SeriesValueRaw {
        if self.sum == zero() {
            let err = if self.sum_err > 0.0 {
                (self.ln_pref.re + self.sum_err.ln()).exp()
            } else {
                0.0
            };
            return SeriesValueRaw { value: zero(), err };
        }
        let value = (self.ln_pref + self.sum.ln()).exp();
        let err = (self.ln_pref.re + self.sum_err.ln()).exp() + value.norm() * self.pref_rel;
        SeriesValueRaw { value, err }
    }
}

/// `J` as a logarithm, for products whose factors would overflow or
/// underflow on their own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnValue {
    /// `ln J`; real part `-inf` for an exact zero.
    pub ln: Complex64,
    /// Logarithm of the absolute error estimate.
    pub ln_err: f64,
    pub terms_used: usize,
    pub finished: bool,
}

fn log_add(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

impl LnValue {
    pub fn exact(value: Complex64) -> Self {
        LnValue {
            ln: cln(value),
            ln_err: f64::NEG_INFINITY,
            terms_used: 0,
            finished: true,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ln.re == f64::NEG_INFINITY
    }

    /// Product with first-order error propagation.
    pub fn mul(self, o: LnValue) -> Self {
        let ln = if self.is_zero() || o.is_zero() {
            Complex64::new(f64::NEG_INFINITY, 0.0)
        } else {
            self.ln + o.ln
        };
        let err = log_add(
            log_add(self.ln.re + o.ln_err, o.ln.re + self.ln_err),
            self.ln_err + o.ln_err,
        );
        LnValue {
            ln,
            ln_err: err,
            terms_used: self.terms_used + o.terms_used,
            finished: self.finished && o.finished,
        }
    }

    /// Multiplication by `exp(ln_c)`.
    pub fn scale_ln(self, ln_c: Complex64) -> Self {
        LnValue {
            ln: if self.is_zero() { self.ln } else { self.ln + ln_c },
            ln_err: self.ln_err + ln_c.re,
            ..self
        }
    }

    pub fn to_value(self, trunc: &Truncation) -> SeriesValue {
        let value = if self.is_zero() { zero() } else { self.ln.exp() };
        SeriesValue::judged(value, self.ln_err.exp(), self.terms_used, self.finished, trunc)
    }
}

/// `ln z` with `ln 0 = -inf`.
fn cln(z: Complex64) -> Complex64 {
    if z == zero() {
        Complex64::new(f64::NEG_INFINITY, 0.0)
    } else {
        z.ln()
    }
}

impl Parts {
    fn ln_value(&self) -> LnValue {
        let ln = if self.sum == zero() {
            Complex64::new(f64::NEG_INFINITY, 0.0)
        } else {
            self.ln_pref + self.sum.ln()
        };
        LnValue {
            ln,
            ln_err: log_add(self.ln_pref.re + self.sum_err.ln(), ln.re + self.pref_rel.ln()),
            terms_used: self.terms,
            finished: self.finished,
        }
    }
}

struct SeriesValueRaw {
    value: Complex64,
    err: f64,
}

fn ln_qq_inf(q: QParam, max_terms: usize) -> (f64, f64, bool) {
    let p = ln_q_pochhammer_inf(Complex64::new(q.value(), 0.0), q, PRODUCT_REL, max_terms)
        .expect("(q;q)_inf has no vanishing factor");
    (p.ln.re, p.err, p.finished)
}

/// `a = q^{-n}` for some `n >= 0`, to relative 1e-14.
fn is_neg_power(a: Complex64, q: QParam) -> bool {
    if a.norm() < 1.0 - 1e-14 {
        return false;
    }
    let n = (a.norm().ln() / -q.ln()).round();
    (a * q.pow(n) - 1.0).norm() <= 1e-14
}

/// Log-prefactor and 1φ1 factor of `J_alpha(exp(ln_w))`.
///
/// `swap` allows the equivalent representation
/// `w^α (qw²;q)_∞/(q;q)_∞ · 1φ1(0; qw²; q, q^{α+1})`, chosen when
/// `|qw²| > |q^{α+1}|` so that the series argument stays small.
fn parts(alpha: Complex64, ln_w: Complex64, q: QParam, trunc: &Truncation, swap: bool) -> Result<Parts> {
    let lnq = q.ln();
    if let Some(n) = BesselOrder(alpha).as_integer() {
        if n < 0 {
            let m = -n;
            let mut p = parts(Complex64::new(m as f64, 0.0), ln_w + 0.5 * m as f64 * lnq, q, trunc, swap)?;
            p.ln_pref += 0.5 * m as f64 * lnq;
            if m % 2 == 1 {
                p.sum = -p.sum;
            }
            return Ok(p);
        }
    }
    let integer = BesselOrder(alpha).as_integer();
    let alpha = match integer {
        Some(n) => Complex64::new(n as f64, 0.0),
        None => alpha,
    };
    let ln_w2q = 2.0 * ln_w + lnq;
    let w2q = ln_w2q.exp();
    let b = ((alpha + 1.0) * lnq).exp();
    let large = swap && w2q.norm() > b.norm();
    if large && is_neg_power(w2q, q) {
        // w² = q^s on the lattice, where the swapped product vanishes; use
        // J_α(q^{s/2}) = J_s(q^{α/2}) and carry the branch of w^α separately.
        let s = -(w2q.norm().ln() / -lnq).round() - 1.0;
        let mut p = parts(Complex64::new(s, 0.0), 0.5 * alpha * lnq, q, trunc, swap)?;
        p.ln_pref += alpha * (ln_w - 0.5 * s * lnq);
        return Ok(p);
    }
    let use_b = large;

    let (qq, qq_err, qq_done) = ln_qq_inf(q, trunc.max_terms);
    let (lower, arg, ln_ratio, ratio_err, ratio_done) = if use_b {
        match ln_q_pochhammer_inf(w2q, q, PRODUCT_REL, trunc.max_terms) {
            Some(p) => (w2q, b, p.ln - qq, p.err + qq_err, p.finished && qq_done),
            None => return Ok(Parts::zero()),
        }
    } else if let Some(n) = integer {
        // (q^{n+1};q)_∞/(q;q)_∞ = 1/(q;q)_n
        let mut s = 0.0;
        let mut qi = q.value();
        for _ in 0..n {
            s -= (-qi).ln_1p();
            qi *= q.value();
        }
        (b, w2q, Complex64::new(s, 0.0), 2.0 * EPS * s.abs(), true)
    } else {
        match ln_q_pochhammer_inf(b, q, PRODUCT_REL, trunc.max_terms) {
            Some(p) => (b, w2q, p.ln - qq, p.err + qq_err, p.finished && qq_done),
            None => return Ok(Parts::zero()),
        }
    };
    let zero_param = [zero()];
    let phi = phi_rs_raw(&zero_param, &[lower], q, arg, INNER_REL, 1e-300, trunc.max_terms)?;
    let ln_pref = alpha * ln_w + ln_ratio;
    let pref_rel = ratio_err + EPS * (1.0 + (alpha * ln_w).norm() + ln_ratio.norm());
    Ok(Parts {
        ln_pref,
        pref_rel,
        sum: phi.sum,
        sum_err: phi.trunc_err + EPS * phi.abs_sum,
        terms: phi.terms,
        finished: phi.finished && ratio_done,
    })
}

fn judge(p: Parts, trunc: &Truncation) -> Result<SeriesValue> {
    let raw = p.value();
    if raw.value.re.is_nan() || raw.value.im.is_nan() {
        return Err(Error::NonFinite("Hahn-Exton q-Bessel value is NaN".into()));
    }
    Ok(SeriesValue::judged(raw.value, raw.err, p.terms, p.finished, trunc))
}

fn check_order(alpha: Complex64) -> Result<()> {
    BesselOrder::new(alpha).map(|_| ())
}

/// `J_α(w;q)` with `w = exp(ln_w)`, so `w^α = exp(α ln_w)`.
///
/// Orders within 1e-12 of a negative integer `-n` use
/// `J_{-n}(w) = (-1)^n q^{n/2} J_n(w q^{n/2})`.
pub fn hahn_exton_j_exp(alpha: Complex64, ln_w: Complex64, q: QParam, trunc: &Truncation) -> Result<SeriesValue> {
    check_order(alpha)?;
    judge(parts(alpha, ln_w, q, trunc, true)?, trunc)
}

/// [`hahn_exton_j_exp`] returned as a logarithm.
pub fn hahn_exton_j_exp_ln(alpha: Complex64, ln_w: Complex64, q: QParam, trunc: &Truncation) -> Result<LnValue> {
    check_order(alpha)?;
    let v = parts(alpha, ln_w, q, trunc, true)?.ln_value();
    if v.ln.re.is_nan() || v.ln.im.is_nan() {
        return Err(Error::NonFinite("Hahn-Exton q-Bessel logarithm is NaN".into()));
    }
    Ok(v)
}

/// Same as [`hahn_exton_j_exp`] but always sums the defining 1φ1 series in
/// `qw²`, never the swapped representation.
pub fn hahn_exton_j_direct_exp(alpha: Complex64, ln_w: Complex64, q: QParam, trunc: &Truncation) -> Result<SeriesValue> {
    check_order(alpha)?;
    judge(parts(alpha, ln_w, q, trunc, false)?, trunc)
}

/// Value at `z = 0`, or `None` for `z != 0`.
fn at_origin(alpha: Complex64, z: Complex64) -> Option<Result<SeriesValue>> {
    if z != zero() {
        return None;
    }
    let one = Complex64::new(1.0, 0.0);
    Some(match BesselOrder(alpha).as_integer() {
        Some(0) => Ok(SeriesValue::exact(one)),
        Some(_) => Ok(SeriesValue::exact(zero())),
        None if alpha.re > 0.0 => Ok(SeriesValue::exact(zero())),
        None => Err(Error::Singular(format!("z^α at z = 0 with order {}", alpha))),
    })
}

/// The Hahn-Exton q-Bessel function with the principal branch of `z^α`.
pub fn hahn_exton_j(alpha: Complex64, z: Complex64, q: QParam, trunc: &Truncation) -> Result<SeriesValue> {
    check_order(alpha)?;
    if let Some(v) = at_origin(alpha, z) {
        return v;
    }
    hahn_exton_j_exp(alpha, z.ln(), q, trunc)
}

/// [`hahn_exton_j`] restricted to the defining series (no swapped form).
pub fn hahn_exton_j_direct(alpha: Complex64, z: Complex64, q: QParam, trunc: &Truncation) -> Result<SeriesValue> {
    check_order(alpha)?;
    if let Some(v) = at_origin(alpha, z) {
        return v;
    }
    hahn_exton_j_direct_exp(alpha, z.ln(), q, trunc)
}

/// `(-1)^n q^{n/2} J_n(z q^{n/2}; q)`, which equals `J_{-n}(z; q)`.
pub fn hahn_exton_j_neg_int(n: i64, z: Complex64, q: QParam, trunc: &Truncation) -> Result<SeriesValue> {
    let sign = if n.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    let factor = Complex64::new(sign * q.pow(0.5 * n as f64), 0.0);
    let order = Complex64::new(n as f64, 0.0);
    if z == zero() {
        return Ok(hahn_exton_j(order, z, q, trunc)?.scale(factor));
    }
    let ln_arg = z.ln() + 0.5 * n as f64 * q.ln();
    Ok(hahn_exton_j_exp(order, ln_arg, q, trunc)?.scale(factor))
}

/// `J_α(q^{s/2}; q)` on the lattice.
///
/// For `s < 0` the symmetry `J_α(q^{s/2}) = J_s(q^{α/2})` moves the large
/// argument into the order, where the negative-integer reduction leaves a
/// small argument.
pub fn hahn_exton_j_lattice(alpha: Complex64, s: i64, q: QParam, trunc: &Truncation) -> Result<SeriesValue> {
    check_order(alpha)?;
    if s >= 0 {
        hahn_exton_j_exp(alpha, Complex64::new(0.5 * s as f64 * q.ln(), 0.0), q, trunc)
    } else {
        hahn_exton_j_exp(Complex64::new(s as f64, 0.0), 0.5 * alpha * q.ln(), q, trunc)
    }
}

/// [`hahn_exton_j_lattice`] returned as a logarithm.
pub fn hahn_exton_j_lattice_ln(alpha: Complex64, s: i64, q: QParam, trunc: &Truncation) -> Result<LnValue> {
    if s >= 0 {
        hahn_exton_j_exp_ln(alpha, Complex64::new(0.5 * s as f64 * q.ln(), 0.0), q, trunc)
    } else {
        check_order(alpha)?;
        hahn_exton_j_exp_ln(Complex64::new(s as f64, 0.0), 0.5 * alpha * q.ln(), q, trunc)
    }
}

/// Runs the q-difference equation
/// `q^{α/2}(J(w q^{-1/2}) + J(w q^{1/2})) = (1 + q^α - w²) J(w)`
/// from seeds at `w q^{K/2}`, returning `J(w q^{-j/2})` for `j = 0, 1`.
fn ladder_once(alpha: Complex64, ln_w: Complex64, q: QParam, trunc: &Truncation, extra: usize) -> Result<[Complex64; 2]> {
    let lnq = q.ln();
    let qv = q.value();
    let w2 = (2.0 * ln_w).exp().norm();
    let target = 0.1 * (1.0 - qv) * (1.0 - qv);
    let mut k = 1usize;
    while w2 * qv.powi(k as i32) > target {
        k += 1;
    }
    k += extra;
    let seed = |j: usize| parts(alpha, ln_w + 0.5 * j as f64 * lnq, q, trunc, false);
    let pk = seed(k)?;
    let pk1 = seed(k - 1)?;
    let mut scale = pk.ln_pref;
    let mut f_next = pk.sum; // index j + 1
    let mut f_cur = pk1.sum * (pk1.ln_pref - pk.ln_pref).exp(); // index j
    let q_half = (-0.5 * alpha * lnq).exp();
    let q_alpha = (alpha * lnq).exp();
    let mut j = k as i64 - 1;
    while j > -1 {
        let wj2 = (2.0 * ln_w + j as f64 * lnq).exp();
        let f_prev = q_half * (1.0 + q_alpha - wj2) * f_cur - f_next;
        f_next = f_cur;
        f_cur = f_prev;
        j -= 1;
        let m = f_cur.norm().max(f_next.norm());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            f_cur /= m;
            f_next /= m;
            scale += m.ln();
        }
    }
    // f_next is index 0 (w), f_cur index -1 (w q^{-1/2})
    Ok([(scale + f_next.ln()).exp(), (scale + f_cur.ln()).exp()])
}

/// `J_α(w;q)` and `J_α(w q^{-1/2};q)` for `w = exp(ln_w)` through the
/// q-difference equation started at arguments small enough that the series
/// has no cancellation.
///
/// Near `q = 1` the defining series loses roughly `exp(|w|²/(1-q))` of
/// relative accuracy while this recursion, which grows the dominant
/// solution, stays accurate off the real axis. The error estimate is the
/// disagreement between two runs with different starting points.
pub fn hahn_exton_j_ladder(
    alpha: Complex64,
    ln_w: Complex64,
    q: QParam,
    trunc: &Truncation,
) -> Result<(SeriesValue, SeriesValue)> {
    check_order(alpha)?;
    if BesselOrder(alpha).as_integer().is_some_and(|n| n < 0) {
        return Err(Error::InvalidParameter(
            "ladder evaluation expects an order that is not a negative integer".into(),
        ));
    }
    let a = ladder_once(alpha, ln_w, q, trunc, 0)?;
    let b = ladder_once(alpha, ln_w, q, trunc, 8)?;
    let mk = |i: usize| {
        let err = (a[i] - b[i]).norm() + 8.0 * EPS * a[i].norm();
        SeriesValue::judged(a[i], err, 0, a[i].is_finite(), trunc)
    };
    Ok((mk(0), mk(1)))
}

