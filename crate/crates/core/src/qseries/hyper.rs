use num_complex::Complex64;

use super::products::cdiv;
use super::types::{QParam, SeriesValue, Truncation};
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// Unjudged result of a basic hypergeometric summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiRaw {
    pub sum: Complex64,
    /// Certified bound on the omitted tail.
    pub trunc_err: f64,
    /// `Σ |t_k|` over the summed terms, the scale of accumulated rounding.
    pub abs_sum: f64,
    pub terms: usize,
    pub finished: bool,
    pub terminating: bool,
}

/// `n >= 0` with `a = q^{-n}` to relative 1e-14, if any.
fn neg_power_index(a: Complex64, q: QParam, limit: usize) -> Option<usize> {
    if a.norm() < 1.0 - 1e-14 {
        return None;
    }
    let n = (a.norm().ln() / -q.ln()).round();
    if n < 0.0 || n > limit as f64 {
        return None;
    }
    let n = n as usize;
    let back = a * q.pow(n as f64);
    if (back - 1.0).norm() <= 1e-14 {
        Some(n)
    } else {
        None
    }
}

/// Sums `rφs(upper; lower; q, arg)` with stopping rule
/// `remainder <= max(stop_rel |S|, stop_abs)`.
///
/// The remainder after index `k` is bounded by `|t_{k+1}| / (1 - ρ)` where
/// `ρ` dominates every later term ratio.
pub fn phi_rs_raw(
    upper: &[Complex64],
    lower: &[Complex64],
    q: QParam,
    arg: Complex64,
    stop_rel: f64,
    stop_abs: f64,
    max_terms: usize,
) -> Result<PhiRaw> {
    let e = lower.len() as i32 - upper.len() as i32 + 1;
    let qv = q.value();

    let p = upper
        .iter()
        .filter_map(|&a| neg_power_index(a, q, max_terms))
        .min();
    for &b in lower {
        if let Some(n) = neg_power_index(b, q, max_terms) {
            if p.is_none_or(|p| p > n) {
                return Err(Error::Pole(format!(
                    "lower parameter {} equals q^-{} and the series does not terminate before it",
                    b, n
                )));
            }
        }
    }

    let finite = |v: Complex64, k: usize| -> Result<()> {
        if v.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(format!("term {} of basic hypergeometric series", k)))
        }
    };

    if arg == Complex64::new(0.0, 0.0) {
        return Ok(PhiRaw {
            sum: Complex64::new(1.0, 0.0),
            trunc_err: 0.0,
            abs_sum: 1.0,
            terms: 1,
            finished: true,
            terminating: true,
        });
    }
    if p.is_none() {
        if e < 0 {
            return Err(Error::Divergent(format!(
                "non-terminating series with s - r + 1 = {} and argument {}",
                e, arg
            )));
        }
        if e == 0 && arg.norm() >= 1.0 {
            return Err(Error::Divergent(format!(
                "non-terminating series with s - r + 1 = 0 needs |arg| < 1, got {}",
                arg.norm()
            )));
        }
    }

    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    let mut t = Complex64::new(1.0, 0.0);
    let mut qk: f64 = 1.0;
    let sign = if e.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    let mut k = 0usize;
    loop {
        finite(t, k)?;
        sum += t;
        abs_sum += t.norm();
        if let Some(p) = p {
            if k == p {
                return Ok(PhiRaw {
                    sum,
                    trunc_err: 0.0,
                    abs_sum,
                    terms: k + 1,
                    finished: true,
                    terminating: true,
                });
            }
        }
        if k + 1 >= max_terms {
            return Ok(PhiRaw {
                sum,
                trunc_err: f64::INFINITY,
                abs_sum,
                terms: k + 1,
                finished: false,
                terminating: p.is_some(),
            });
        }
        let mut num = arg * sign * qk.powi(e);
        for &a in upper {
            num *= 1.0 - a * qk;
        }
        let mut den = Complex64::new(1.0 - qk * qv, 0.0);
        for &b in lower {
            den *= 1.0 - b * qk;
        }
        t *= cdiv(num, den);
        k += 1;
        qk *= qv;

        if p.is_none() {
            // ratio bound for all indices >= k
            let mut rho = arg.norm() * qk.powi(e) / (1.0 - qk * qv);
            let mut valid = true;
            for &a in upper {
                rho *= 1.0 + a.norm() * qk;
            }
            for &b in lower {
                let d = 1.0 - b.norm() * qk;
                if d <= 0.0 {
                    valid = false;
                }
                rho /= d;
            }
            if valid && rho < 1.0 {
                let rem = t.norm() / (1.0 - rho);
                if rem <= (stop_rel * sum.norm()).max(stop_abs) {
                    return Ok(PhiRaw {
                        sum,
                        trunc_err: rem,
                        abs_sum,
                        terms: k,
                        finished: true,
                        terminating: false,
                    });
                }
            }
        }
    }
}

/// Basic hypergeometric series
/// `Σ_k (a_1..a_r;q)_k / ((q;q)_k (b_1..b_s;q)_k) arg^k ((-1)^k q^{k(k-1)/2})^{s-r+1}`.
///
/// A series with an upper parameter `q^{-p}` is summed exactly in `p + 1`
/// terms. `est_error` combines the certified tail bound with
/// `ε Σ|t_k|` for rounding.
pub fn phi_rs(
    upper: &[Complex64],
    lower: &[Complex64],
    q: QParam,
    arg: Complex64,
    trunc: &Truncation,
) -> Result<SeriesValue> {
    let raw = phi_rs_raw(
        upper,
        lower,
        q,
        arg,
        0.5 * trunc.rel_tol,
        0.5 * trunc.abs_tol,
        trunc.max_terms,
    )?;
    let est = raw.trunc_err + EPS * raw.abs_sum;
    Ok(SeriesValue::judged(raw.sum, est, raw.terms, raw.finished, trunc))
}
