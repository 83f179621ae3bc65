use num_complex::Complex64;

use super::{admit, rho_from_sum, ScanPoint, ScanReport};
use crate::error::{Error, Result};
use crate::identities::{c, ci, sum_terms, verify_graf_addition, GrafParams, IdentityParams, IdentityReport};
use crate::qbessel::{classical_bessel_j, hahn_exton_j_lattice};
use crate::qseries::{Decay, QParam, TailHint, Truncation};

/// The limit scan of the q-Graf formula divided by `J_{x-ν}(q^{z/2})`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrafLimitReport {
    /// Right side of the divided q-formula at each `n` against
    /// `J_ν(R c^{η+γ})`.
    pub scan: ScanReport,
    /// Relative residual of the q-formula itself at each evaluated `n`.
    pub q_residuals: Vec<f64>,
    /// The limiting classical identity at the requested `γ`.
    pub classical: IdentityReport,
    /// Points where `2nγ` had to be rounded to an integer `z`.
    pub notes: Vec<String>,
}

fn limit_rho(alpha: f64, gamma: Complex64, c_base: f64) -> Result<Complex64> {
    let ca = c_base.powf(alpha);
    let c2g = (2.0 * gamma * c_base.ln()).exp();
    rho_from_sum((1.0 + ca * ca - c2g) / ca)
}

/// `Σ_k ρ^k J_k(R c^{α+η}) J_{ν+k}(R c^η)` against
/// `c^{-νγ} (1 - c^α/ρ)^ν J_ν(R c^{η+γ})` with
/// `ρ + 1/ρ = (1 + c^{2α} - c^{2γ})/c^α` and `|ρ| > 1`.
///
/// For `k → -∞` the terms behave like `(c^α/ρ)^{|k|}`, so the check needs
/// `|c^α/ρ| < 1`.
pub fn graf_limit_classical(
    nu: f64,
    alpha: f64,
    gamma: Complex64,
    eta: f64,
    r: Complex64,
    c_base: f64,
    trunc: &Truncation,
) -> Result<IdentityReport> {
    if !(c_base > 0.0 && c_base < 1.0) {
        return Err(Error::Domain(format!("c must lie in (0,1), got {}", c_base)));
    }
    let rho = limit_rho(alpha, gamma, c_base)?;
    let ca = c_base.powf(alpha);
    let ratio = ca / rho;
    if !(ratio.norm() < 1.0) {
        return Err(Error::Divergent(format!("|c^alpha / rho| = {} is not below 1", ratio.norm())));
    }
    let a = r * c_base.powf(alpha + eta);
    let b = r * c_base.powf(eta);
    let hint = TailHint::new(Decay::Gaussian, Decay::Geometric(ratio.norm()));
    let lhs = sum_terms(
        |k| {
            let jk = classical_bessel_j(ci(k), a, trunc)?;
            let jnk = classical_bessel_j(c(nu) + ci(k), b, trunc)?;
            Ok(jk.mul(jnk).scale(rho.powi(k as i32)))
        },
        trunc,
        hint,
    )?;
    let arg = r * ((eta + gamma) * c_base.ln()).exp();
    let pref = (-nu * gamma * c_base.ln()).exp() * (1.0 - ratio).powc(c(nu));
    let rhs = classical_bessel_j(c(nu), arg, trunc)?.scale(pref);
    let params = IdentityParams::Named(vec![
        ("nu", c(nu)),
        ("alpha", c(alpha)),
        ("gamma", gamma),
        ("eta", c(eta)),
        ("R", r),
        ("c", c(c_base)),
        ("rho", rho),
    ]);
    Ok(IdentityReport::new("graf_limit_classical", lhs, rhs, trunc, params))
}

/// Evaluates the q-Graf formula at `x = 2nα`, `y = 2nη`, `z = 2nγ`,
/// `q = c^{1/n}` and argument `R(1-q)/2`, divides by `J_{x-ν}(q^{z/2})` and
/// compares the right side with the classical limit `J_ν(R c^{η+γ})`.
///
/// The formula needs an integer `z`; `2nγ` is rounded and each rounding is
/// recorded in the notes. The classical identity is checked at the `γ`
/// given, with `ρ` from real data when `γ` is real.
#[allow(clippy::too_many_arguments)]
pub fn graf_limit_scan(
    nu: f64,
    alpha: f64,
    gamma: Complex64,
    eta: f64,
    r: Complex64,
    c_base: f64,
    n_values: &[u32],
    trunc: &Truncation,
) -> Result<GrafLimitReport> {
    if n_values.is_empty() || n_values.contains(&0) {
        return Err(Error::InvalidParameter("n values must be positive".into()));
    }
    let classical = graf_limit_classical(nu, alpha, gamma, eta, r, c_base, trunc)?;
    let arg = r * ((eta + gamma) * c_base.ln()).exp();
    let reference = classical_bessel_j(c(nu), arg, trunc)?;
    let mut scan = ScanReport::new("graf_limit");
    let mut q_residuals = Vec::new();
    let mut notes = Vec::new();
    for &n in n_values {
        let nf = n as f64;
        let q = QParam::new(c_base.powf(1.0 / nf))?;
        if !admit(&mut scan, q.value()) {
            continue;
        }
        let z_exact = 2.0 * nf * gamma;
        let z = z_exact.re.round() as i64;
        if (z_exact - z as f64).norm() > 1e-9 {
            notes.push(format!("n = {}: 2n*gamma = {} rounded to z = {}", n, z_exact, z));
        }
        let x = c(2.0 * nf * alpha);
        let p = GrafParams::new(r * (0.5 * (1.0 - q.value())), x, c(2.0 * nf * eta), c(nu), z, q);
        let rep = verify_graf_addition(p, trunc)?;
        let den = hahn_exton_j_lattice(x - nu, z, q, trunc)?;
        let v = rep.rhs_diag.div(den);
        q_residuals.push(rep.rel_residual);
        scan.points.push(ScanPoint {
            n: Some(n),
            q: q.value(),
            value: v.value,
            reference: reference.value,
            error: (v.value - reference.value).norm(),
            est_error: v.est_error + reference.est_error,
            converged: v.converged && rep.converged(),
        });
    }
    Ok(GrafLimitReport {
        scan,
        q_residuals,
        classical,
        notes,
    })
}
