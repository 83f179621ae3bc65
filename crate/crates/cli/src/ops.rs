//! Turning grid points into evaluation tasks.
//!
//! Building a task checks names and types of every parameter, so a bad
//! configuration is rejected before anything is evaluated.

use num_complex::Complex64;
use qgraf_core::identities::{
    product_formula_via_expansion, replay_addition_via_orthogonality, verify_classical_graf,
    verify_classical_product, verify_graf_addition, verify_orthogonality, verify_product_formula,
    verify_quotient_expansion, verify_sum_formula, verify_sum_formula_specialized, verify_product_expansion,
    verify_symmetry, GrafParams, IdentityReport,
};
use qgraf_core::limits::{
    bessel_limit_scan, geometric_resum_check, graf_limit_scan, moment_limit_check, ratio_limit_scan,
    LimitScanConfig, ScanReport,
};
use qgraf_core::qbessel::{classical_bessel_j, hahn_exton_j, wall_polynomial};
use qgraf_core::qseries::{phi_rs, q_gamma, QParam, SeriesValue, Truncation};
use qgraf_core::Error;

use crate::config::Command;
use crate::error::{config, CliError};
use crate::params::{
    bool_or, check_names, complex, complex_list, int, real, real_list, real_or, uint, uint_list, Point,
};

pub const EVAL_NAMES: [&str; 5] = ["hahn_exton_j", "classical_bessel_j", "q_gamma", "phi_rs", "wall_polynomial"];
pub const VERIFY_NAMES: [&str; 12] = [
    "graf_addition",
    "product_formula",
    "orthogonality",
    "product_expansion",
    "symmetry",
    "quotient_expansion",
    "sum_formula",
    "classical_graf",
    "classical_product",
    "sum_formula_specialized",
    "addition_replay",
    "product_via_expansion",
];
pub const SCAN_NAMES: [&str; 5] = ["bessel_limit", "ratio_limit", "moment_limit", "graf_limit", "geometric_resum"];

/// Default pass threshold on `rel_residual` for `verify`.
pub const DEFAULT_VERIFY_THRESHOLD: f64 = 1e-7;
/// Errors at this level carry no trend; a scan whose errors all sit there
/// has already reached its limit.
const SETTLED: f64 = 1e-12;

/// A value in an output row.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Complex(Complex64),
    Real(f64),
    Int(i64),
    Bool(bool),
    Null,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowOut {
    pub status: String,
    pub fields: Vec<(&'static str, Field)>,
}

/// Result of one grid point: one row for `eval` and `verify`, one row per
/// scanned value for `scan`.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub rows: Vec<RowOut>,
    pub passed: bool,
    pub skipped: bool,
    pub rel_residual: Option<f64>,
    pub abs_residual: Option<f64>,
    pub warnings: Vec<String>,
    /// A violated precondition that makes the whole run a configuration
    /// error.
    pub fatal: Option<String>,
}

impl Outcome {
    fn single(row: RowOut, passed: bool) -> Self {
        Outcome {
            rows: vec![row],
            passed,
            skipped: false,
            rel_residual: None,
            abs_residual: None,
            warnings: Vec::new(),
            fatal: None,
        }
    }

    fn error(e: &Error) -> Self {
        Outcome::single(
            RowOut {
                status: format!("error: {}", e),
                fields: Vec::new(),
            },
            false,
        )
    }

    fn fatal(e: &Error) -> Self {
        Outcome {
            fatal: Some(e.to_string()),
            ..Outcome::error(e)
        }
    }
}

pub type Task = Box<dyn Fn(&Truncation) -> Outcome + Send + Sync>;

fn qparam(p: &Point) -> Result<QParam, CliError> {
    let q = real(p, "q")?;
    QParam::new(q).map_err(|e| CliError::Config(e.to_string()))
}

fn series_outcome(v: Result<SeriesValue, Error>) -> Outcome {
    match v {
        Ok(s) => Outcome::single(
            RowOut {
                status: if s.converged { "ok" } else { "not converged" }.into(),
                fields: vec![
                    ("value", Field::Complex(s.value)),
                    ("est_error", Field::Real(s.est_error)),
                    ("terms_used", Field::Int(s.terms_used as i64)),
                    ("converged", Field::Bool(s.converged)),
                ],
            },
            s.converged,
        ),
        Err(e) => Outcome::error(&e),
    }
}

fn plain_outcome(v: Result<Complex64, Error>) -> Outcome {
    match v {
        Ok(value) => {
            let ok = value.is_finite();
            Outcome::single(
                RowOut {
                    status: if ok { "ok" } else { "not converged" }.into(),
                    fields: vec![
                        ("value", Field::Complex(value)),
                        ("est_error", Field::Null),
                        ("terms_used", Field::Null),
                        ("converged", Field::Bool(ok)),
                    ],
                },
                ok,
            )
        }
        Err(e) => Outcome::error(&e),
    }
}

fn eval_task(name: &str, p: &Point) -> Result<Task, CliError> {
    Ok(match name {
        "hahn_exton_j" => {
            check_names(p, &["alpha", "z", "q"], &[])?;
            let (a, z, q) = (complex(p, "alpha")?, complex(p, "z")?, qparam(p)?);
            Box::new(move |t| series_outcome(hahn_exton_j(a, z, q, t)))
        }
        "classical_bessel_j" => {
            check_names(p, &["nu", "z"], &[])?;
            let (nu, z) = (complex(p, "nu")?, complex(p, "z")?);
            Box::new(move |t| series_outcome(classical_bessel_j(nu, z, t)))
        }
        "q_gamma" => {
            check_names(p, &["z", "q"], &[])?;
            let (z, q) = (complex(p, "z")?, qparam(p)?);
            Box::new(move |t| plain_outcome(q_gamma(z, q, t)))
        }
        "phi_rs" => {
            check_names(p, &["z", "q"], &["upper", "lower"])?;
            let (upper, lower) = (complex_list(p, "upper")?, complex_list(p, "lower")?);
            let (z, q) = (complex(p, "z")?, qparam(p)?);
            Box::new(move |t| series_outcome(phi_rs(&upper, &lower, q, z, t)))
        }
        "wall_polynomial" => {
            check_names(p, &["p", "x", "b", "q"], &[])?;
            let (n, x, b, q) = (uint(p, "p")? as usize, complex(p, "x")?, real(p, "b")?, qparam(p)?);
            Box::new(move |_| plain_outcome(wall_polynomial(n, x, b, q)))
        }
        _ => return config(format!("unknown function {:?} for eval", name)),
    })
}

/// Which residual the threshold applies to.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Gate {
    Relative,
    /// For targets of unit scale such as `δ_{z,l}`, where a relative
    /// residual of an exact zero only measures rounding.
    Absolute,
}

fn identity_outcome(r: Result<IdentityReport, Error>, threshold: f64) -> Outcome {
    gated_outcome(r, threshold, Gate::Relative)
}

fn gated_outcome(r: Result<IdentityReport, Error>, threshold: f64, gate: Gate) -> Outcome {
    match r {
        Ok(rep) => {
            let passed = match gate {
                Gate::Relative => rep.rel_residual < threshold,
                Gate::Absolute => rep.abs_residual < threshold,
            };
            let mut o = Outcome::single(
                RowOut {
                    status: if passed { "pass" } else { "fail" }.into(),
                    fields: vec![
                        ("lhs", Field::Complex(rep.lhs)),
                        ("rhs", Field::Complex(rep.rhs)),
                        ("abs_residual", Field::Real(rep.abs_residual)),
                        ("rel_residual", Field::Real(rep.rel_residual)),
                        ("lhs_est_error", Field::Real(rep.lhs_diag.est_error)),
                        ("rhs_est_error", Field::Real(rep.rhs_diag.est_error)),
                        ("converged", Field::Bool(rep.converged())),
                    ],
                },
                passed,
            );
            o.rel_residual = Some(rep.rel_residual);
            o.abs_residual = Some(rep.abs_residual);
            o
        }
        Err(Error::Domain(_)) | Err(Error::ZeroArgument(_)) => Outcome {
            skipped: true,
            ..Outcome::single(
                RowOut {
                    status: "skipped: domain".into(),
                    fields: Vec::new(),
                },
                true,
            )
        },
        Err(e) => Outcome::error(&e),
    }
}

fn graf_params(p: &Point, index: &str) -> Result<GrafParams, CliError> {
    check_names(p, &["R", "x", "y", "nu", index, "q"], &[])?;
    Ok(GrafParams::new(
        complex(p, "R")?,
        complex(p, "x")?,
        complex(p, "y")?,
        complex(p, "nu")?,
        int(p, index)?,
        qparam(p)?,
    ))
}

fn verify_task(name: &str, p: &Point, threshold: f64) -> Result<Task, CliError> {
    let th = threshold;
    Ok(match name {
        "graf_addition" => {
            let g = graf_params(p, "z")?;
            Box::new(move |t| identity_outcome(verify_graf_addition(g, t), th))
        }
        "addition_replay" => {
            let g = graf_params(p, "z")?;
            Box::new(move |t| identity_outcome(replay_addition_via_orthogonality(g, t), th))
        }
        "product_formula" => {
            let g = graf_params(p, "m")?;
            Box::new(move |t| identity_outcome(verify_product_formula(g, t), th))
        }
        "product_via_expansion" => {
            let g = graf_params(p, "m")?;
            Box::new(move |t| identity_outcome(product_formula_via_expansion(g, t), th))
        }
        "orthogonality" => {
            check_names(p, &["x", "z", "l", "q"], &[])?;
            let (x, z, l, q) = (complex(p, "x")?, int(p, "z")?, int(p, "l")?, qparam(p)?);
            Box::new(move |t| gated_outcome(verify_orthogonality(x, z, l, q, t), th, Gate::Absolute))
        }
        "product_expansion" => {
            check_names(p, &["a", "b", "x", "mu", "nu", "q"], &[])?;
            let (a, b, x) = (complex(p, "a")?, complex(p, "b")?, complex(p, "x")?);
            let (mu, nu, q) = (complex(p, "mu")?, complex(p, "nu")?, qparam(p)?);
            Box::new(move |t| identity_outcome(verify_product_expansion(a, b, x, mu, nu, q, t), th))
        }
        "symmetry" => {
            check_names(p, &["alpha", "nu", "q"], &[])?;
            let (a, nu, q) = (complex(p, "alpha")?, complex(p, "nu")?, qparam(p)?);
            Box::new(move |t| identity_outcome(verify_symmetry(a, nu, q, t), th))
        }
        "quotient_expansion" => {
            check_names(p, &["x", "nu", "z", "k", "q"], &[])?;
            let (x, nu, z, k, q) = (complex(p, "x")?, complex(p, "nu")?, int(p, "z")?, int(p, "k")?, qparam(p)?);
            Box::new(move |t| identity_outcome(verify_quotient_expansion(x, nu, z, k, q, t), th))
        }
        "sum_formula" => {
            check_names(p, &["x", "y", "s", "m", "q"], &[])?;
            let (x, y, s, m, q) = (complex(p, "x")?, complex(p, "y")?, complex(p, "s")?, int(p, "m")?, qparam(p)?);
            Box::new(move |t| identity_outcome(verify_sum_formula(x, y, s, m, q, t), th))
        }
        "sum_formula_specialized" => {
            check_names(p, &["x", "nu", "m", "n", "q"], &[])?;
            let (x, nu, m, n, q) = (complex(p, "x")?, complex(p, "nu")?, int(p, "m")?, uint(p, "n")?, qparam(p)?);
            Box::new(move |t| identity_outcome(verify_sum_formula_specialized(x, nu, m, n, q, t), th))
        }
        "classical_graf" => {
            check_names(p, &["x", "y", "psi", "nu", "m_max"], &[])?;
            let (x, y, psi) = (real(p, "x")?, real(p, "y")?, real(p, "psi")?);
            let (nu, m_max) = (complex(p, "nu")?, uint(p, "m_max")?);
            Box::new(move |t| identity_outcome(verify_classical_graf(x, y, psi, nu, m_max, t), th))
        }
        "classical_product" => {
            check_names(p, &["x", "y", "nu", "m", "n_quad"], &[])?;
            let (x, y, nu) = (real(p, "x")?, real(p, "y")?, complex(p, "nu")?);
            let (m, n_quad) = (int(p, "m")?, uint(p, "n_quad")?);
            Box::new(move |_| identity_outcome(verify_classical_product(x, y, nu, m, n_quad), th))
        }
        _ => return config(format!("unknown identity {:?} for verify", name)),
    })
}

fn settled(rep: &ScanReport) -> bool {
    !rep.points.is_empty()
        && rep
            .points
            .iter()
            .all(|p| p.error <= SETTLED * p.reference.norm().max(1.0))
}

/// Decreasing errors, or errors already at rounding level.
fn trend_ok(rep: &ScanReport) -> bool {
    rep.decreasing() || settled(rep)
}

fn final_below(rep: &ScanReport, threshold: Option<f64>) -> bool {
    match threshold {
        Some(t) => rep.final_error().is_some_and(|e| e < t),
        None => true,
    }
}

fn scan_rows(rep: &ScanReport, passed: bool, extra: &[f64]) -> Vec<RowOut> {
    let trend = rep.decreasing();
    rep.points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut fields = vec![
                ("n", p.n.map_or(Field::Null, |n| Field::Int(n as i64))),
                ("q", Field::Real(p.q)),
                ("value", Field::Complex(p.value)),
                ("reference", Field::Complex(p.reference)),
                ("error", Field::Real(p.error)),
                ("est_error", Field::Real(p.est_error)),
                ("converged", Field::Bool(p.converged)),
                ("decreasing", Field::Bool(trend)),
                ("scan_passed", Field::Bool(passed)),
            ];
            if let Some(r) = extra.get(i) {
                fields.push(("q_rel_residual", Field::Real(*r)));
            }
            RowOut {
                status: "ok".into(),
                fields,
            }
        })
        .collect()
}

fn scan_outcome(rep: &ScanReport, passed: bool, extra: &[f64], mut warnings: Vec<String>) -> Outcome {
    warnings.extend(rep.warnings.iter().cloned());
    Outcome {
        rows: scan_rows(rep, passed, extra),
        passed,
        skipped: false,
        rel_residual: None,
        abs_residual: None,
        warnings,
        fatal: None,
    }
}

/// Precondition failures of a scan make the configuration invalid.
fn scan_error(e: Error) -> Outcome {
    match e {
        Error::Domain(_) | Error::InvalidParameter(_) | Error::Degenerate(_) | Error::InvalidQ(_) => {
            Outcome::fatal(&e)
        }
        other => Outcome::error(&other),
    }
}

fn scan_task(name: &str, p: &Point, threshold: Option<f64>) -> Result<Task, CliError> {
    Ok(match name {
        "bessel_limit" => {
            check_names(p, &["nu", "z", "q_values"], &[])?;
            let (nu, z, qs) = (complex(p, "nu")?, complex(p, "z")?, real_list(p, "q_values")?);
            Box::new(move |t| match bessel_limit_scan(nu, z, &qs, t) {
                Ok(rep) => {
                    let passed = trend_ok(&rep) && final_below(&rep, threshold);
                    scan_outcome(&rep, passed, &[], Vec::new())
                }
                Err(e) => scan_error(e),
            })
        }
        "ratio_limit" => {
            check_names(p, &["x", "alpha", "c", "n_values"], &["beta", "target_tolerance", "trend_required"])?;
            let x = complex(p, "x")?;
            if x.im == 0.0 {
                return config(format!("ratio_limit needs x off the real axis, got {}", x));
            }
            let (alpha, beta, c) = (real(p, "alpha")?, real_or(p, "beta", 0.0)?, real(p, "c")?);
            let target = real_or(p, "target_tolerance", threshold.unwrap_or(1e-2))?;
            let cfg = LimitScanConfig::new(uint_list(p, "n_values")?, target, bool_or(p, "trend_required", true)?)
                .map_err(|e| CliError::Config(e.to_string()))?;
            Box::new(move |_| match ratio_limit_scan(x, alpha, beta, c, &cfg) {
                Ok(rep) => scan_outcome(&rep, rep.passed(), &[], Vec::new()),
                Err(e) => scan_error(e),
            })
        }
        "moment_limit" => {
            check_names(p, &["r", "k", "alpha", "c", "n_values"], &[])?;
            let (r, k) = (uint(p, "r")?, uint(p, "k")?);
            let (alpha, c, ns) = (real(p, "alpha")?, real(p, "c")?, uint_list(p, "n_values")?);
            Box::new(move |t| match moment_limit_check(r, k, alpha, c, &ns, t) {
                Ok(rep) => {
                    let passed = trend_ok(&rep) && final_below(&rep, threshold);
                    scan_outcome(&rep, passed, &[], Vec::new())
                }
                Err(e) => scan_error(e),
            })
        }
        "graf_limit" => {
            check_names(p, &["nu", "alpha", "gamma", "eta", "R", "c", "n_values"], &[])?;
            let (nu, alpha, gamma) = (real(p, "nu")?, real(p, "alpha")?, complex(p, "gamma")?);
            let (eta, r, c) = (real(p, "eta")?, complex(p, "R")?, real(p, "c")?);
            let ns = uint_list(p, "n_values")?;
            let th = threshold.unwrap_or(1e-8);
            Box::new(move |t| match graf_limit_scan(nu, alpha, gamma, eta, r, c, &ns, t) {
                Ok(rep) => {
                    let classical = rep.classical.rel_residual;
                    let passed = trend_ok(&rep.scan) && classical < th;
                    let mut notes = rep.notes.clone();
                    notes.push(format!("classical limit identity rel_residual = {:e}", classical));
                    scan_outcome(&rep.scan, passed, &rep.q_residuals, notes)
                }
                Err(e) => scan_error(e),
            })
        }
        "geometric_resum" => {
            check_names(p, &["nu", "alpha", "gamma", "c", "k"], &[])?;
            let (nu, alpha, gamma) = (real(p, "nu")?, real(p, "alpha")?, complex(p, "gamma")?);
            let (c, k) = (real(p, "c")?, int(p, "k")?);
            let th = threshold.unwrap_or(1e-10);
            Box::new(move |t| match geometric_resum_check(nu, alpha, gamma, c, k, t) {
                Ok(rep) => identity_outcome(Ok(rep), th),
                Err(e) => scan_error(e),
            })
        }
        _ => return config(format!("unknown scan {:?}", name)),
    })
}

/// The task for one grid point; `threshold` is the command-line or file
/// value, if any.
pub fn build_task(command: Command, name: &str, p: &Point, threshold: Option<f64>) -> Result<Task, CliError> {
    match command {
        Command::Eval => eval_task(name, p),
        Command::Verify => verify_task(name, p, threshold.unwrap_or(DEFAULT_VERIFY_THRESHOLD)),
        Command::Scan => scan_task(name, p, threshold),
    }
}

/// Whether `name` is an operation of `command`.
pub fn known(command: Command, name: &str) -> bool {
    match command {
        Command::Eval => EVAL_NAMES.contains(&name),
        Command::Verify => VERIFY_NAMES.contains(&name),
        Command::Scan => SCAN_NAMES.contains(&name),
    }
}
