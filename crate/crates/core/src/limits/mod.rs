//! Numerical drivers for the q → 1 limit transitions.
//!
//! With `q = c^{1/n}` and `n` growing, ratios of Hahn-Exton functions of
//! order `2nα + β` tend to the root `ρ` of `ρ + 1/ρ = S`, the q-Bessel
//! function with rescaled argument tends to the classical one, and the
//! q-Graf addition formula turns into Graf's formula. The limits are only
//! formal, so every scan reports the observed errors and their trend
//! rather than asserting a rate.
//!
//! Scans stop short of `q > 0.9999`: such points are listed in
//! [`ScanReport::capped`] instead of being evaluated.

mod graf;
mod scans;

pub use graf::{graf_limit_classical, graf_limit_scan, GrafLimitReport};
pub use scans::{bessel_limit_scan, geometric_resum_check, moment_continuous_side, moment_limit_check, ratio_limit_scan};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest `q` a scan evaluates.
pub const Q_CAP: f64 = 0.9999;
/// Above this `q` a scan still evaluates but attaches a precision warning.
pub const Q_WARN: f64 = 0.999;

/// The `n` values of a scan and what counts as success.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitScanConfig {
    pub n_values: Vec<u32>,
    pub target_tolerance: f64,
    pub trend_required: bool,
}

impl LimitScanConfig {
    /// At least three positive, strictly increasing `n`.
    pub fn new(n_values: Vec<u32>, target_tolerance: f64, trend_required: bool) -> Result<Self> {
        if n_values.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "a limit scan needs at least 3 values of n, got {}",
                n_values.len()
            )));
        }
        if n_values[0] == 0 || n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "n values must be positive and strictly increasing".into(),
            ));
        }
        if !(target_tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "target tolerance must be positive, got {}",
                target_tolerance
            )));
        }
        Ok(LimitScanConfig {
            n_values,
            target_tolerance,
            trend_required,
        })
    }
}

/// One evaluated point of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    /// Scan index; `None` when the scan runs over `q` directly.
    pub n: Option<u32>,
    pub q: f64,
    pub value: Complex64,
    pub reference: Complex64,
    /// `|value - reference|`.
    pub error: f64,
    /// Numerical error estimate of `value`.
    pub est_error: f64,
    pub converged: bool,
}

/// Errors along a scan, ordered as requested.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub scan: &'static str,
    pub points: Vec<ScanPoint>,
    /// `q` values skipped because they exceed [`Q_CAP`].
    pub capped: Vec<f64>,
    pub warnings: Vec<String>,
    pub target_tolerance: Option<f64>,
    pub trend_required: bool,
}

impl ScanReport {
    fn new(scan: &'static str) -> Self {
        ScanReport {
            scan,
            points: Vec::new(),
            capped: Vec::new(),
            warnings: Vec::new(),
            target_tolerance: None,
            trend_required: false,
        }
    }

    pub fn errors(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.error).collect()
    }

    /// Every error is below its predecessor, or zero.
    pub fn decreasing(&self) -> bool {
        self.points.len() >= 2
            && self
                .points
                .windows(2)
                .all(|w| w[1].error < w[0].error || w[1].error == 0.0)
    }

    pub fn final_error(&self) -> Option<f64> {
        self.points.last().map(|p| p.error)
    }

    /// Final error below the target, when one was set.
    pub fn target_met(&self) -> Option<bool> {
        let t = self.target_tolerance?;
        Some(self.final_error().is_some_and(|e| e < t))
    }

    /// Target met (if any) and trend present (if required). Capped points
    /// only produce warnings.
    pub fn passed(&self) -> bool {
        self.target_met().unwrap_or(true) && (!self.trend_required || self.decreasing())
    }
}

/// The root `ρ` of `ρ + 1/ρ = (c(1+c^{2α}) - x²)/c^{1+α}` with `|ρ| > 1`,
/// together with the data it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoValue {
    pub rho: Complex64,
    pub alpha: f64,
    pub c: f64,
    pub x: Complex64,
}

impl RhoValue {
    /// `A = c^{1+α}`.
    pub fn a(&self) -> f64 {
        self.c.powf(1.0 + self.alpha)
    }

    /// `B = c(1 + c^{2α})`.
    pub fn b(&self) -> f64 {
        self.c * (1.0 + self.c.powf(2.0 * self.alpha))
    }

    /// `S = (B - x²)/A`.
    pub fn s(&self) -> Complex64 {
        (self.b() - self.x * self.x) / self.a()
    }
}

/// Root of `ρ² - Sρ + 1 = 0` outside the unit circle.
pub fn rho_from_sum(s: Complex64) -> Result<Complex64> {
    if !s.is_finite() {
        return Err(Error::NonFinite(format!("S = {}", s)));
    }
    if s.im == 0.0 && s.re.abs() <= 2.0 {
        return Err(Error::Degenerate(format!(
            "S = {} is real with |S| <= 2, both roots lie on the unit circle",
            s.re
        )));
    }
    let d = (s * s - 4.0).sqrt();
    let (r1, r2) = (0.5 * (s + d), 0.5 * (s - d));
    // The larger root is computed without cancellation; 1/ρ follows from Vieta.
    let rho = if r1.norm() >= r2.norm() { r1 } else { r2 };
    if !(rho.norm() > 1.0 + 1e-14) {
        return Err(Error::Degenerate(format!(
            "roots of rho + 1/rho = {} are numerically on the unit circle",
            s
        )));
    }
    Ok(rho)
}

/// `ρ(x; α, c)` for the recurrence family with `A = c^{1+α}`,
/// `B = c(1+c^{2α})`.
pub fn rho_from_params(x: Complex64, alpha: f64, c: f64) -> Result<RhoValue> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("c must lie in (0,1), got {}", c)));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha = {}", alpha)));
    }
    let mut v = RhoValue {
        rho: Complex64::new(0.0, 0.0),
        alpha,
        c,
        x,
    };
    v.rho = rho_from_sum(v.s())?;
    Ok(v)
}

fn check_q_list(q_values: &[f64]) -> Result<()> {
    if q_values.is_empty() {
        return Err(Error::InvalidParameter("empty list of q values".into()));
    }
    if let Some(q) = q_values.iter().find(|q| !(**q > 0.0 && **q < 1.0)) {
        return Err(Error::InvalidQ(*q));
    }
    if q_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("q values must be strictly increasing".into()));
    }
    Ok(())
}

/// Capping and warnings for one `q`; `false` means skip.
fn admit(report: &mut ScanReport, q: f64) -> bool {
    if q > Q_CAP {
        report.capped.push(q);
        report
            .warnings
            .push(format!("q = {} exceeds the cap {}; point not evaluated", q, Q_CAP));
        return false;
    }
    if q > Q_WARN {
        report
            .warnings
            .push(format!("q = {} is close to 1; expect reduced precision", q));
    }
    true
}
