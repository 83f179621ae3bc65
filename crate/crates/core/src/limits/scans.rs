use num_complex::Complex64;

use super::{admit, check_q_list, rho_from_params, rho_from_sum, LimitScanConfig, ScanPoint, ScanReport};
use crate::error::{Error, Result};
use crate::identities::{c, ci, sum_terms, sum_terms_one_sided, IdentityParams, IdentityReport};
use crate::qbessel::{classical_bessel_j, hahn_exton_j, hahn_exton_j_ladder, hahn_exton_j_lattice_ln, RecurrenceFamily};
use crate::qseries::{Decay, QParam, SeriesValue, TailHint, Truncation};

/// `J_{2nα+β}(x c^{-1/(2n)} c^{-1/2}; c^{1/n}) / J_{2nα+β}(x c^{-1/2}; c^{1/n})`
/// against `ρ(x; α, c)` for each `n` of the configuration.
///
/// Both values come from one run of the q-difference equation, which stays
/// accurate where the defining series would cancel catastrophically.
pub fn ratio_limit_scan(x: Complex64, alpha: f64, beta: f64, c_base: f64, cfg: &LimitScanConfig) -> Result<ScanReport> {
    if x.im == 0.0 {
        return Err(Error::Domain(format!("x = {} must lie off the real axis", x)));
    }
    RecurrenceFamily::new(alpha, beta, c_base, 1)?;
    let rho = rho_from_params(x, alpha, c_base)?.rho;
    let trunc = Truncation::default();
    let ln_w = x.ln() - 0.5 * c_base.ln();
    let mut report = ScanReport::new("ratio_limit");
    report.target_tolerance = Some(cfg.target_tolerance);
    report.trend_required = cfg.trend_required;
    for &n in &cfg.n_values {
        let fam = RecurrenceFamily::new(alpha, beta, c_base, n)?;
        let q = fam.q();
        if !admit(&mut report, q.value()) {
            continue;
        }
        let (j0, j1) = hahn_exton_j_ladder(c(fam.order()), ln_w, q, &trunc)?;
        let ratio = j1.value / j0.value;
        let est = ratio.norm() * (j0.relative_error() + j1.relative_error());
        report.points.push(ScanPoint {
            n: Some(n),
            q: q.value(),
            value: ratio,
            reference: rho,
            error: (ratio - rho).norm(),
            est_error: est,
            converged: j0.converged && j1.converged && est.is_finite(),
        });
    }
    Ok(report)
}

/// `|J_ν(z(1-q)/2; q) - J_ν(z)|` for each `q`.
pub fn bessel_limit_scan(nu: Complex64, z: Complex64, q_values: &[f64], trunc: &Truncation) -> Result<ScanReport> {
    check_q_list(q_values)?;
    let reference = classical_bessel_j(nu, z, trunc)?;
    let mut report = ScanReport::new("bessel_limit");
    for &qv in q_values {
        if !admit(&mut report, qv) {
            continue;
        }
        let q = QParam::new(qv)?;
        let v = hahn_exton_j(nu, z * (0.5 * (1.0 - qv)), q, trunc)?;
        report.points.push(ScanPoint {
            n: None,
            q: qv,
            value: v.value,
            reference: reference.value,
            error: (v.value - reference.value).norm(),
            est_error: v.est_error + reference.est_error,
            converged: v.converged && reference.converged,
        });
    }
    Ok(report)
}

/// `Σ_{m>=0} (ν)_m/m! c^{mα} ρ^{k-m}` against `ρ^k (1 - c^α/ρ)^{-ν}` with
/// `ρ + 1/ρ = (1 + c^{2α} - c^{2γ})/c^α`.
pub fn geometric_resum_check(
    nu: f64,
    alpha: f64,
    gamma: Complex64,
    c_base: f64,
    k: i64,
    trunc: &Truncation,
) -> Result<IdentityReport> {
    if !(nu < 1.0) {
        return Err(Error::Domain(format!("nu must be below 1, got {}", nu)));
    }
    if !(c_base > 0.0 && c_base < 1.0) {
        return Err(Error::Domain(format!("c must lie in (0,1), got {}", c_base)));
    }
    let ca = c_base.powf(alpha);
    let c2g = (2.0 * gamma * c_base.ln()).exp();
    let rho = rho_from_sum((1.0 + ca * ca - c2g) / ca)?;
    let t = ca / rho;
    if !(t.norm() < 1.0) {
        return Err(Error::Divergent(format!("|c^alpha / rho| = {} is not below 1", t.norm())));
    }
    let rho_k = rho.powi(k as i32);
    let mut coef = c(1.0);
    let lhs = sum_terms_one_sided(
        |m| {
            let v = coef * rho_k;
            coef = coef * (nu + m as f64) / (m as f64 + 1.0) * t;
            Ok(SeriesValue {
                value: v,
                est_error: 2.0 * f64::EPSILON * (m + 1) as f64 * v.norm(),
                terms_used: 1,
                converged: true,
            })
        },
        trunc,
        Decay::Geometric(t.norm()),
    )?;
    let rhs_v = rho_k * (1.0 - t).powc(c(-nu));
    let rhs = SeriesValue {
        value: rhs_v,
        est_error: 8.0 * f64::EPSILON * rhs_v.norm() * (1.0 + k.unsigned_abs() as f64),
        terms_used: 1,
        converged: true,
    };
    let params = IdentityParams::Named(vec![
        ("nu", c(nu)),
        ("alpha", c(alpha)),
        ("gamma", gamma),
        ("c", c(c_base)),
        ("k", ci(k)),
        ("rho", rho),
    ]);
    Ok(IdentityReport::new("geometric_resum", lhs, rhs, trunc, params))
}

fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `(1/π) ∫_0^π (B + 2A cos θ)^r cos(kθ) dθ
///  = Σ_j C(r,j) B^{r-j} A^j C(j, (j-k)/2)`, the sum over `j >= k` with
/// `j - k` even.
pub fn moment_continuous_side(r: u32, k: u32, alpha: f64, c_base: f64) -> f64 {
    let a = c_base.powf(1.0 + alpha);
    let b = c_base * (1.0 + c_base.powf(2.0 * alpha));
    (k..=r)
        .filter(|j| (j - k).is_multiple_of(2))
        .map(|j| binomial(r, j) * b.powi((r - j) as i32) * a.powi(j as i32) * binomial(j, (j - k) / 2))
        .sum()
}

/// `∫ x^{2r} p_n(x;n) p_{k+n}(x;n) dm_q(x)` with `q = c^{1/n}` and `β = 0`,
/// against the limiting Chebyshev moment of [`moment_continuous_side`].
pub fn moment_limit_check(
    r: u32,
    k: u32,
    alpha: f64,
    c_base: f64,
    n_values: &[u32],
    trunc: &Truncation,
) -> Result<ScanReport> {
    if n_values.is_empty() {
        return Err(Error::InvalidParameter("empty list of n values".into()));
    }
    let reference = c(moment_continuous_side(r, k, alpha, c_base));
    let mut report = ScanReport::new("moment_limit");
    for &n in n_values {
        let fam = RecurrenceFamily::new(alpha, 0.0, c_base, n)?;
        let q = fam.q();
        if !admit(&mut report, q.value()) {
            continue;
        }
        let order = c(fam.order());
        let ni = n as i64;
        let ki = k as i64;
        let lq = q.ln();
        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        // q^z x^{2r} p_n p_{n+k} at x = q^{z/2}
        let hint = TailHint::new(Decay::Geometric(q.pow(1.0 + r as f64 + fam.order())), Decay::Gaussian);
        let s = sum_terms(
            |z| {
                let a = hahn_exton_j_lattice_ln(order, z - ni, q, trunc)?;
                let b = hahn_exton_j_lattice_ln(order, z - ni - ki, q, trunc)?;
                let scale = ((1.0 + r as f64) * z as f64 - 0.5 * (2 * ni + ki) as f64) * lq;
                Ok(a.mul(b).scale_ln(c(scale)).to_value(trunc).scale(c(sign)))
            },
            trunc,
            hint,
        )?;
        report.points.push(ScanPoint {
            n: Some(n),
            q: q.value(),
            value: s.value,
            reference,
            error: (s.value - reference).norm(),
            est_error: s.est_error,
            converged: s.converged,
        });
    }
    Ok(report)
}
