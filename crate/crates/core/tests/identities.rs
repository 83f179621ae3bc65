use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qgraf_core::identities::*;
use qgraf_core::qbessel::{classical_bessel_j, hahn_exton_j_exp, hahn_exton_j_lattice};
use qgraf_core::qseries::{QParam, Truncation};
use qgraf_core::Error;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ci(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn q(v: f64) -> QParam {
    QParam::new(v).unwrap()
}

fn tr() -> Truncation {
    Truncation::default()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

/// `J_α(exp(ln_w))` from the defining series, summed naively.
fn oracle_j(alpha: Complex64, ln_w: Complex64, qv: f64) -> Complex64 {
    let b = ((alpha + 1.0) * qv.ln()).exp();
    let mut pref = c(1.0);
    let mut f = 1.0;
    while f > 1e-20 {
        pref *= (1.0 - b * f) / (1.0 - qv * f);
        f *= qv;
    }
    let arg = qv * (2.0 * ln_w).exp();
    let mut sum = c(0.0);
    let mut t = c(1.0);
    let mut qk = 1.0;
    for k in 0..400 {
        sum += t;
        t = t * (-qk) * arg / ((1.0 - qk * qv) * (1.0 - b * qk));
        qk *= qv;
        if t.norm() < 1e-22 * sum.norm() && k > 3 {
            break;
        }
    }
    (alpha * ln_w).exp() * pref * sum
}

fn graf(r: Complex64, x: Complex64, y: Complex64, nu: Complex64, z: i64, qv: f64) -> GrafParams {
    GrafParams::new(r, x, y, nu, z, q(qv))
}

#[test]
fn graf_addition_examples() {
    let rep = verify_graf_addition(graf(c(0.5), c(0.0), c(0.0), c(0.0), 0, 0.5), &tr()).unwrap();
    assert!(rep.rel_residual < 1e-8, "{:?}", rep);
    assert!(rep.converged());

    let p = graf(c(0.3), c(1.2), c(-0.4), ci(0.7, 0.2), 2, 0.4);
    let rep = verify_graf_addition(p, &tr()).unwrap();
    assert!(rep.rel_residual < 1e-7, "{:?}", rep);

    // fixed wide window, plain loop
    let lq = 0.4f64.ln();
    let ln_r = p.r.ln();
    let mut oracle = c(0.0);
    for k in -80i64..=80 {
        let kc = c(k as f64);
        let a = hahn_exton_j_exp(kc, ln_r + 0.5 * (p.x + p.y + kc) * lq, p.q, &tr()).unwrap().value;
        let b = hahn_exton_j_exp(p.nu + kc, ln_r + 0.5 * (p.y + kc + p.nu) * lq, p.q, &tr()).unwrap().value;
        let w = hahn_exton_j_lattice(p.x, 2 - k, p.q, &tr()).unwrap().value;
        oracle += a * b * w;
    }
    assert!(rel(oracle, rep.rhs) < 1e-9, "{} vs {}", oracle, rep.rhs);
    let lhs = oracle_j(p.nu, ln_r + 0.5 * (p.y + 2.0 + p.nu) * lq, 0.4) * oracle_j(p.x - p.nu, c(lq), 0.4);
    assert!(rel(lhs, rep.lhs) < 1e-12);
}

#[test]
fn graf_addition_rejects_outside_domain() {
    // q^{1+Re x+Re y}|R|² = 1.2
    let qv: f64 = 0.5;
    let r = (1.2 / qv).sqrt();
    let p = graf(c(r), c(0.0), c(0.0), c(0.0), 0, qv);
    assert!((p.domain_value() - 1.2).abs() < 1e-12);
    assert!(!p.domain_ok());
    assert!(matches!(verify_graf_addition(p, &tr()), Err(Error::Domain(_))));
    // the boundary itself is outside
    let p = graf(c((1.0 / qv).sqrt()), c(0.0), c(0.0), c(0.0), 0, qv);
    assert!(!p.domain_ok() || p.domain_value() < 1.0);
    let p = graf(c(0.0), c(0.0), c(0.0), c(0.0), 0, qv);
    assert!(matches!(verify_graf_addition(p, &tr()), Err(Error::Domain(_))));
}

#[test]
fn product_formula_examples() {
    for qv in [0.3f64, 0.5, 0.8] {
        let r = c(qv.powf(-0.5));
        let rep = verify_product_formula(graf(r, c(0.0), c(0.0), c(0.0), 0, qv), &tr()).unwrap();
        assert!(rep.rel_residual < 1e-8, "q={} {:?}", qv, rep);
    }
    let p = graf(ci(0.4, 0.3), ci(0.6, -0.2), ci(0.3, 0.5), ci(-0.8, 0.4), 2, 0.55);
    assert!(p.domain_ok());
    let rep = verify_product_formula(p, &tr()).unwrap();
    assert!(rep.rel_residual < 1e-7, "{:?}", rep);
    let above = graf(c(1.01 * 0.5f64.powf(-0.5)), c(0.0), c(0.0), c(0.0), 0, 0.5);
    assert!(matches!(verify_product_formula(above, &tr()), Err(Error::Domain(_))));
    let bad = graf(c(0.5), c(-1.5), c(0.0), c(0.0), 0, 0.5);
    assert!(matches!(verify_product_formula(bad, &tr()), Err(Error::Domain(_))));
}

#[test]
fn product_formula_lhs_matches_naive_series() {
    let p = graf(ci(0.4, 0.3), ci(0.6, -0.2), ci(0.3, 0.5), ci(-0.8, 0.4), 2, 0.55);
    let rep = verify_product_formula(p, &tr()).unwrap();
    let lq = 0.55f64.ln();
    let ln_r = p.r.ln();
    let want = oracle_j(c(2.0), ln_r + 0.5 * (p.x + p.y) * lq, 0.55)
        * oracle_j(p.nu - 2.0, ln_r + 0.5 * (p.y + p.nu - 2.0) * lq, 0.55)
        * 0.55f64.powf(-1.0);
    assert!(rel(want, rep.lhs) < 1e-12);
}

#[test]
fn orthogonality_examples() {
    let rep = verify_orthogonality(c(0.0), 0, 0, q(0.5), &tr()).unwrap();
    assert!(rep.abs_residual < 1e-10, "{:?}", rep);
    let rep = verify_orthogonality(c(0.0), 1, 0, q(0.5), &tr()).unwrap();
    assert!(rep.abs_residual < 1e-10, "{:?}", rep);
    let rep = verify_orthogonality(ci(0.3, 0.1), -2, -2, q(0.7), &tr()).unwrap();
    assert!(rep.abs_residual < 1e-9, "{:?}", rep);
    assert!(matches!(verify_orthogonality(c(-1.0), 0, 0, q(0.5), &tr()), Err(Error::Domain(_))));
}

#[test]
fn product_expansion_examples() {
    let rep = verify_product_expansion(c(1.0), c(1.0), c(0.3), c(0.0), c(0.0), q(0.5), &tr()).unwrap();
    assert!(rep.rel_residual < 1e-9, "{:?}", rep);
    let want = oracle_j(c(0.0), c(0.3f64.ln()), 0.5).powi(2);
    assert!(rel(want, rep.lhs) < 1e-13);

    let rep = verify_product_expansion(c(0.5), c(0.7), c(0.4), c(0.3), c(1.1), q(0.6), &tr()).unwrap();
    assert!(rep.rel_residual < 1e-8, "{:?}", rep);
    let want = oracle_j(c(1.1), c(0.2f64.ln()), 0.6) * oracle_j(c(0.3), c(0.28f64.ln()), 0.6);
    assert!(rel(want, rep.lhs) < 1e-12);

    assert!(matches!(
        verify_product_expansion(c(0.0), c(1.0), c(0.3), c(0.0), c(0.0), q(0.5), &tr()),
        Err(Error::ZeroArgument(_))
    ));
}

#[test]
fn product_expansion_complex_parameters() {
    let rep = verify_product_expansion(ci(0.6, 0.2), ci(0.9, -0.3), ci(0.8, 0.1), ci(-0.4, 0.3), ci(0.7, -0.5), q(0.45), &tr())
        .unwrap();
    assert!(rep.rel_residual < 1e-9, "{:?}", rep);
}

#[test]
fn symmetry_examples() {
    let rep = verify_symmetry(c(1.0), c(1.0), q(0.5), &tr()).unwrap();
    assert_eq!(rep.abs_residual, 0.0);
    let rep = verify_symmetry(c(0.0), c(2.0), q(0.5), &tr()).unwrap();
    assert!(rep.rel_residual < 1e-11, "{:?}", rep);
    let rep = verify_symmetry(ci(0.5, 0.5), c(1.5), q(0.3), &tr()).unwrap();
    assert!(rep.rel_residual < 1e-10, "{:?}", rep);
    // naive series on both sides
    let lq = 0.3f64.ln();
    let a = oracle_j(ci(0.5, 0.5), c(0.75 * lq), 0.3);
    let b = oracle_j(c(1.5), ci(0.25 * lq, 0.25 * lq), 0.3);
    assert!(rel(a, b) < 1e-12);
    assert!(rel(a, rep.lhs) < 1e-12);
}

#[test]
fn quotient_expansion_examples() {
    let rep = verify_quotient_expansion(c(1.3), c(0.0), 2, 1, q(0.5), &tr()).unwrap();
    assert_eq!(rep.lhs, rep.rhs);
    let rep = verify_quotient_expansion(c(1.0), c(0.4), 1, 0, q(0.5), &tr()).unwrap();
    assert!(rep.rel_residual < 1e-8, "{:?}", rep);
    let rep = verify_quotient_expansion(c(2.0), c(1.0), 3, 1, q(0.4), &tr()).unwrap();
    assert!(rep.rel_residual < 1e-8, "{:?}", rep);
    // quotient of naive lattice values
    let lq = 0.4f64.ln();
    let want = oracle_j(c(2.0), c(lq), 0.4) / oracle_j(c(1.0), c(1.5 * lq), 0.4);
    assert!(rel(want, rep.lhs) < 1e-12);
    assert!(matches!(
        verify_quotient_expansion(c(0.0), c(1.5), 0, 0, q(0.5), &tr()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn sum_formula_examples() {
    let rep = verify_sum_formula(c(0.3), c(0.4), c(0.5), 1, q(0.5), &tr()).unwrap();
    assert!(rep.rel_residual < 1e-8, "{:?}", rep);
    for m in [-3, -1, 0, 2] {
        let rep = verify_sum_formula(ci(0.7, 0.2), ci(-0.5, 0.6), ci(0.9, -0.4), m, q(0.35), &tr()).unwrap();
        assert!(rep.rel_residual < 1e-8, "m={} {:?}", m, rep);
    }
    assert!(matches!(
        verify_sum_formula(c(0.3), c(0.4), c(0.0), 0, q(0.5), &tr()),
        Err(Error::ZeroArgument(_))
    ));
    assert!(matches!(
        verify_sum_formula(c(2.0), c(2.0), c(0.5), 0, q(0.5), &tr()),
        Err(Error::Domain(_))
    ));
}

/// The closed side as a plain 2φ1 loop for `m >= 0`.
fn oracle_closed(x: Complex64, y: Complex64, s: Complex64, m: i32, qv: f64) -> Complex64 {
    let poch = |a: Complex64, n: usize| (0..n).fold(c(1.0), |p, i| p * (1.0 - a * qv.powi(i as i32)));
    let pinf = |a: Complex64| poch(a, 2000);
    let u = x / (s * y);
    let v = y / (s * x);
    let t = s * x * y;
    let qm = qv.powi(m);
    let pref = y.powi(m) * pinf(u) * pinf(c(qm * qv)) / (pinf(u * qm) * pinf(c(qv)));
    let mut sum = c(0.0);
    for k in 0..300 {
        sum += poch(u * qm, k) * poch(v, k) / (poch(c(qm * qv), k) * poch(c(qv), k)) * t.powi(k as i32);
    }
    pref * sum
}

#[test]
fn sum_formula_closed_side_matches_plain_series() {
    let (x, y, s) = (ci(0.7, 0.2), ci(-0.5, 0.6), ci(0.9, -0.4));
    let rep = verify_sum_formula(x, y, s, 2, q(0.35), &tr()).unwrap();
    assert!(rel(oracle_closed(x, y, s, 2, 0.35), rep.lhs) < 1e-12);
}

#[test]
fn sum_formula_specialized_instance() {
    let rep = verify_sum_formula_specialized(c(1.0), c(0.5), 0, 1, q(0.5), &tr()).unwrap();
    assert!(rep.rel_residual < 1e-8, "{:?}", rep);
    // same point through the general formula
    let lq = 0.5f64.ln();
    let x = c((0.5 * (1.0 - 0.5 + 1.0) * lq).exp());
    let y = c((0.5 * (1.0 + 1.0) * lq).exp());
    let s = c(((0.25 + 1.0) * lq).exp());
    let general = verify_sum_formula(x, y, s, 0, q(0.5), &tr()).unwrap();
    assert!(rel(general.lhs, rep.lhs) < 1e-12);
    for m in [-2, 1, 3] {
        let rep = verify_sum_formula_specialized(ci(0.4, 0.3), ci(-0.6, 0.8), m, 2, q(0.6), &tr()).unwrap();
        assert!(rep.rel_residual < 1e-8, "m={} {:?}", m, rep);
    }
}

#[test]
fn classical_graf_examples() {
    let tight = Truncation::new(1e-15, 1e-16, 100_000).unwrap();
    let rep = verify_classical_graf(2.0, 1.0, 0.0, c(0.0), 40, &tight).unwrap();
    let j01 = classical_bessel_j(c(0.0), c(1.0), &tight).unwrap().value;
    assert!(rel(rep.lhs, j01) < 1e-14);
    assert!(rep.rel_residual < 1e-12, "{:?}", rep);

    let rep = verify_classical_graf(2.0, 0.0, 0.4, c(0.3), 5, &tr()).unwrap();
    let j = classical_bessel_j(c(0.3), c(2.0), &tr()).unwrap().value;
    assert!(rel(rep.lhs, j) < 1e-14 && rel(rep.rhs, j) < 1e-14);

    let mut last = f64::INFINITY;
    for m_max in [10, 20, 40] {
        let rep = verify_classical_graf(2.0, 1.0, 0.7, c(0.3), m_max, &tr()).unwrap();
        assert!(rep.rel_residual < last, "m_max={} {:?}", m_max, rep);
        last = rep.rel_residual;
    }
    assert!(last < 1e-10);
    assert!(matches!(
        verify_classical_graf(1.0, 2.0, 0.7, c(0.3), 40, &tr()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn classical_product_examples() {
    let rep = verify_classical_product(0.3, 0.2, c(0.0), 25, 512).unwrap();
    assert!(rep.lhs.norm() < 1e-12 && rep.rhs.norm() < 1e-12);
    let rep = verify_classical_product(2.0, 1.0, c(0.0), 0, 256).unwrap();
    assert!(rep.rel_residual < 1e-10, "{:?}", rep);
    let rep = verify_classical_product(3.0, 0.5, c(0.4), 2, 512).unwrap();
    assert!(rep.rel_residual < 1e-9, "{:?}", rep);
}

#[test]
fn orthogonality_replay_reproduces_addition_lhs() {
    let p = graf(ci(0.4, 0.3), ci(0.6, -0.2), ci(0.3, 0.5), ci(-0.8, 0.4), 1, 0.55);
    let rep = replay_addition_via_orthogonality(p, &tr()).unwrap();
    assert!(rep.rel_residual < 1e-7, "{:?}", rep);
    let direct = verify_graf_addition(p, &tr()).unwrap();
    assert!(rel(direct.lhs, rep.lhs) < 1e-14);
}

#[test]
fn product_formula_agrees_with_expansion_route() {
    let points = [
        graf(ci(0.4, 0.3), ci(0.6, -0.2), ci(0.3, 0.5), ci(-0.8, 0.4), 2, 0.55),
        graf(c(0.5f64.powf(-0.5)), c(0.0), c(0.0), c(0.0), 0, 0.5),
        graf(ci(1.1, -0.2), c(1.5), ci(-0.3, 0.2), ci(0.6, 0.1), -1, 0.4),
        graf(c(0.7), ci(0.2, 0.4), c(0.1), c(1.3), 3, 0.7),
        graf(ci(-0.3, 0.5), ci(-0.5, 0.1), ci(0.8, -0.6), ci(0.2, -1.1), -2, 0.3),
    ];
    for p in points {
        assert!(p.domain_ok() || p.on_boundary());
        let rep = product_formula_via_expansion(p, &tr()).unwrap();
        assert!(rep.rel_residual < 1e-7, "{:?}", rep);
    }
}

#[test]
fn report_residual_definition() {
    let rep = verify_symmetry(c(0.2), c(0.9), q(0.5), &tr()).unwrap();
    assert_eq!(rep.abs_residual, (rep.lhs - rep.rhs).norm());
    let den = rep.lhs.norm().max(rep.rhs.norm()).max(tr().abs_tol);
    assert_eq!(rep.rel_residual, rep.abs_residual / den);
}

fn in_domain() -> impl Strategy<Value = GrafParams> {
    (
        0.2f64..0.9,
        (-0.9f64..2.0, -1.0f64..1.0),
        (-1.0f64..1.0, -1.0f64..1.0),
        (0.0f64..2.0, -PI..PI),
        (0.05f64..1.0, -PI..PI),
        -4i64..=4,
    )
        .prop_map(|(qv, (xr, xi), (yr, yi), (nr, na), (rf, ra), z)| {
            let bound = (0.8 / qv.powf(1.0 + xr + yr)).sqrt();
            graf(
                Complex64::from_polar(rf * bound, ra),
                ci(xr, xi),
                ci(yr, yi),
                Complex64::from_polar(nr, na),
                z,
                qv,
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn addition_and_product_hold_in_domain(p in in_domain()) {
        // no absolute floor, so convergence means relative accuracy
        let t = Truncation::new(1e-11, 1e-300, 100_000).unwrap();
        for rep in [verify_graf_addition(p, &t).unwrap(), verify_product_formula(p, &t).unwrap()] {
            if rep.converged() {
                prop_assert!(rep.rel_residual < 100.0 * t.rel_tol, "{:?}", rep);
            }
        }
    }

    #[test]
    fn outside_domain_is_rejected(qv in 0.2f64..0.9, excess in 1.0f64..3.0, z in -4i64..=4) {
        let r = (excess / qv).sqrt();
        let p = graf(c(r), c(0.0), c(0.0), c(0.3), z, qv);
        prop_assert!(matches!(verify_graf_addition(p, &tr()), Err(Error::Domain(_))));
        prop_assert!(matches!(verify_product_formula(p, &tr()), Err(Error::Domain(_))));
    }
}
