use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qseries::{SeriesValue, Truncation};

use super::BesselOrder;

const EPS: f64 = f64::EPSILON;
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(z)` for `Re z >= 1/2` (Lanczos, g = 7).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// A logarithm of `Γ(z)`; the imaginary part is not normalised.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        ln_gamma_right(z)
    } else {
        // Γ(z) Γ(1-z) = π / sin(πz)
        Complex64::new(PI.ln(), 0.0) - (PI * z).sin().ln() - ln_gamma_right(1.0 - z)
    }
}

/// The gamma function; infinite at the poles.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (PI * z).sin();
        if s == Complex64::new(0.0, 0.0) || is_nonpositive_integer(z) {
            return Complex64::new(f64::INFINITY, 0.0);
        }
        return PI / (s * ln_gamma_right(1.0 - z).exp());
    }
    ln_gamma_right(z).exp()
}

/// `1/Γ(z)`, entire, zero at the nonpositive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        if is_nonpositive_integer(z) {
            return Complex64::new(0.0, 0.0);
        }
        return (PI * z).sin() * ln_gamma_right(1.0 - z).exp() / PI;
    }
    (-ln_gamma_right(z)).exp()
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    let n = z.re.round();
    n <= 0.0 && (z - n).norm() <= 1e-14 * n.abs().max(1.0)
}

/// Classical Bessel function `J_ν(z)` from its power series, principal
/// branch of `(z/2)^ν`.
pub fn classical_bessel_j(nu: Complex64, z: Complex64, trunc: &Truncation) -> Result<SeriesValue> {
    let order = BesselOrder::new(nu)?;
    if !z.is_finite() {
        return Err(Error::InvalidParameter(format!("argument {} is not finite", z)));
    }
    if z.norm() > 50.0 {
        return Err(Error::ArgumentTooLarge(z.norm()));
    }
    if let Some(n) = order.as_integer() {
        if n < 0 {
            let v = classical_bessel_j(Complex64::new(-n as f64, 0.0), z, trunc)?;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            return Ok(v.scale(Complex64::new(sign, 0.0)));
        }
    }
    let nu = match order.as_integer() {
        Some(n) => Complex64::new(n as f64, 0.0),
        None => nu,
    };
    let zero = Complex64::new(0.0, 0.0);
    if z == zero {
        return match order.as_integer() {
            Some(0) => Ok(SeriesValue::exact(Complex64::new(1.0, 0.0))),
            Some(_) => Ok(SeriesValue::exact(zero)),
            None if nu.re > 0.0 => Ok(SeriesValue::exact(zero)),
            None => Err(Error::Singular(format!("(z/2)^ν at z = 0 with order {}", nu))),
        };
    }
    let half = z / 2.0;
    let h2 = -(half * half);
    let mut t = (nu * half.ln()).exp() * rgamma(nu + 1.0);
    let mut sum = zero;
    let mut abs_sum = 0.0;
    let mut k = 0usize;
    loop {
        sum += t;
        abs_sum += t.norm();
        t = t * h2 / ((k as f64 + 1.0) * (nu + k as f64 + 1.0));
        k += 1;
        let kf = k as f64;
        if kf > nu.norm() + 1.0 {
            let rho = h2.norm() / ((kf + 1.0) * (kf + 1.0 - nu.norm()));
            if rho < 1.0 {
                let rem = t.norm() / (1.0 - rho);
                if rem <= 0.5 * trunc.tolerance(sum.norm()) || t == zero {
                    let est = rem + EPS * abs_sum;
                    return Ok(SeriesValue::judged(sum, est, k, true, trunc));
                }
            }
        }
        if k >= trunc.max_terms {
            return Ok(SeriesValue::judged(sum, f64::INFINITY, k, false, trunc));
        }
    }
}
