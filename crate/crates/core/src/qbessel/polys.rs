use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qseries::{phi_rs, q_pochhammer, QParam, Truncation};

/// Wall polynomial
/// `w_p(x;b;q) = (-1)^p sqrt((b;q)_p / (b^p (q;q)_p)) · 2φ1(q^{-p}, 0; b; q, x)`
/// for `0 < b < 1`, with the positive square root.
pub fn wall_polynomial(p: usize, x: Complex64, b: f64, q: QParam) -> Result<Complex64> {
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::Domain(format!("Wall polynomial needs 0 < b < 1, got {}", b)));
    }
    let bc = Complex64::new(b, 0.0);
    let qc = Complex64::new(q.value(), 0.0);
    let radicand = q_pochhammer(bc, q, p).re / (b.powi(p as i32) * q_pochhammer(qc, q, p).re);
    let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    let upper = [Complex64::new(q.pow(-(p as f64)), 0.0), Complex64::new(0.0, 0.0)];
    let trunc = Truncation::default().with_max_terms(p + 2);
    let series = phi_rs(&upper, &[bc], q, x, &trunc)?;
    Ok(series.value * (sign * radicand.sqrt()))
}

/// Chebyshev polynomial of the first kind by its three-term recurrence.
pub fn chebyshev_t(k: usize, x: f64) -> f64 {
    let (mut t0, mut t1) = (1.0, x);
    if k == 0 {
        return t0;
    }
    for _ in 1..k {
        let t2 = 2.0 * x * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    t1
}
