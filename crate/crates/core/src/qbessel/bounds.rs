use num_complex::Complex64;

use crate::qseries::{q_pochhammer_inf, QParam, Truncation};

use super::BesselOrder;

/// Strict tolerance for the products inside the bound, independent of the
/// caller so the bound stays a bound.
const BOUND_REL: f64 = 1e-12;

fn product_bounds(order_re: f64, z_abs2: f64, q: QParam) -> f64 {
    let trunc = Truncation {
        rel_tol: BOUND_REL,
        abs_tol: 1e-300,
        ..Truncation::default()
    };
    let c = |a: f64| Complex64::new(a, 0.0);
    // (-a;q)_∞ with a > 0 exceeds every partial product: add the error.
    let upper = |a: f64| {
        let v = q_pochhammer_inf(c(-a), q, &trunc);
        v.value.re + v.est_error
    };
    let qq = q_pochhammer_inf(c(q.value()), q, &trunc);
    let den = qq.value.re - qq.est_error;
    upper(q.pow(order_re + 1.0)) * upper(q.value() * z_abs2) / den
}

/// Magnitude bound for `|J_ν(z;q)|`.
///
/// General order: `|z^ν| (-q^{Re ν + 1}, -q|z|²; q)_∞ / (q;q)_∞`.
/// Integer order `n`: `|z|^{|n|} (-q, -q|z|²; q)_∞ / (q;q)_∞`, times
/// `q^{n(n-1)/2}` for `n <= 0`.
pub fn tail_bound(order: Complex64, z: Complex64, q: QParam, integer_order: bool) -> f64 {
    if z == Complex64::new(0.0, 0.0) {
        return tail_bound_exp(order, Complex64::new(f64::NEG_INFINITY, 0.0), q, integer_order);
    }
    tail_bound_exp(order, z.ln(), q, integer_order)
}

/// [`tail_bound`] for an argument given by its logarithm, matching the
/// branch convention of the evaluators that take `ln z`.
pub fn tail_bound_exp(order: Complex64, ln_z: Complex64, q: QParam, integer_order: bool) -> f64 {
    let z_abs = ln_z.re.exp();
    let z_abs2 = z_abs * z_abs;
    if integer_order {
        let n = BesselOrder::new(order).ok().and_then(|o| o.as_integer()).unwrap_or(order.re.round() as i64);
        let base = if n == 0 { 1.0 } else { z_abs.powi(n.unsigned_abs() as i32) };
        let base = if base.is_finite() {
            base
        } else {
            (n.unsigned_abs() as f64 * ln_z.re).exp()
        };
        let extra = if n <= 0 {
            q.pow(0.5 * (n as f64) * (n as f64 - 1.0))
        } else {
            1.0
        };
        return base * extra * product_bounds(0.0, z_abs2, q);
    }
    let zpow = if ln_z.re == f64::NEG_INFINITY {
        if order.re > 0.0 {
            0.0
        } else if order == Complex64::new(0.0, 0.0) {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        (order * ln_z).re.exp()
    };
    zpow * product_bounds(order.re, z_abs2, q)
}
