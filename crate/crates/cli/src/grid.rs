//! Grids: explicit lists of tuples or seeded random draws.
//!
//! Random grids draw every parameter from its range in name order with a
//! ChaCha8 generator and keep a point only if it lies in the domain of the
//! requested operation (with the configured margin). The number of kept
//! points is exactly `count`, and a fixed seed gives the same grid on every
//! platform.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Command, RangeSpec, RandomSpec, RunConfig};
use crate::error::{config, CliError};
use crate::params::{resolve, resolve_tuple, Point, Value};

/// Draw attempts allowed per requested point before giving up.
const MAX_ATTEMPTS_PER_POINT: usize = 10_000;

fn check_range(r: [f64; 2], what: &str, name: &str) -> Result<(), CliError> {
    if !(r[0].is_finite() && r[1].is_finite() && r[0] <= r[1]) {
        return config(format!("range {} of {} must be finite with lo <= hi", what, name));
    }
    Ok(())
}

fn validate(name: &str, r: &RangeSpec) -> Result<(), CliError> {
    let shapes = [
        r.uniform.is_some(),
        r.re.is_some(),
        r.abs.is_some(),
        r.int.is_some(),
        r.value.is_some(),
    ];
    if shapes.iter().filter(|s| **s).count() != 1 {
        return config(format!(
            "range of {} needs exactly one of uniform, re/im, abs/arg, int, value",
            name
        ));
    }
    if r.im.is_some() && r.re.is_none() {
        return config(format!("range of {}: im requires re", name));
    }
    if r.arg.is_some() && r.abs.is_none() {
        return config(format!("range of {}: arg requires abs", name));
    }
    for (v, what) in [(r.uniform, "uniform"), (r.re, "re"), (r.im, "im"), (r.abs, "abs"), (r.arg, "arg")] {
        if let Some(v) = v {
            check_range(v, what, name)?;
        }
    }
    if let Some([lo, hi]) = r.int {
        if lo > hi {
            return config(format!("int range of {} must have lo <= hi", name));
        }
    }
    if let Some(v) = &r.value {
        resolve(v, name)?;
    }
    Ok(())
}

fn uniform(rng: &mut ChaCha8Rng, r: [f64; 2]) -> f64 {
    r[0] + (r[1] - r[0]) * rng.gen::<f64>()
}

fn draw(rng: &mut ChaCha8Rng, name: &str, r: &RangeSpec) -> Result<Value, CliError> {
    if let Some(u) = r.uniform {
        return Ok(Value::Scalar(Complex64::new(uniform(rng, u), 0.0)));
    }
    if let Some(re) = r.re {
        let x = uniform(rng, re);
        let y = r.im.map_or(0.0, |im| uniform(rng, im));
        return Ok(Value::Scalar(Complex64::new(x, y)));
    }
    if let Some(abs) = r.abs {
        let m = uniform(rng, abs);
        let t = uniform(rng, r.arg.unwrap_or([-PI, PI]));
        return Ok(Value::Scalar(Complex64::from_polar(m, t)));
    }
    if let Some([lo, hi]) = r.int {
        return Ok(Value::Scalar(Complex64::new(rng.gen_range(lo..=hi) as f64, 0.0)));
    }
    match &r.value {
        Some(v) => resolve(v, name),
        None => config(format!("empty range for {}", name)),
    }
}

fn get(p: &Point, name: &str) -> Option<Complex64> {
    match p.get(name) {
        Some(Value::Scalar(z)) => Some(*z),
        _ => None,
    }
}

fn is_integer(z: Complex64) -> bool {
    z.im == 0.0 && (z.re - z.re.round()).abs() <= 1e-12 * z.re.abs().max(1.0)
}

/// Whether a drawn point lies in the domain of the operation, with
/// `margin` shrinking strict inequalities of the form `value < 1`.
/// Points missing a parameter pass; building the task reports them.
pub fn in_domain(command: Command, name: &str, p: &Point, margin: f64) -> bool {
    if let Some(q) = get(p, "q") {
        if !(q.im == 0.0 && q.re > 0.0 && q.re < 1.0) {
            return false;
        }
    }
    if command != Command::Verify {
        return true;
    }
    let g = |n: &str| get(p, n);
    let zero = Complex64::new(0.0, 0.0);
    match name {
        "graf_addition" | "addition_replay" | "product_formula" | "product_via_expansion" => {
            match (g("R"), g("x"), g("y"), g("q")) {
                (Some(r), Some(x), Some(y), Some(q)) => {
                    x.re > -1.0 && r != zero && q.re.powf(1.0 + x.re + y.re) * r.norm_sqr() < margin
                }
                _ => true,
            }
        }
        "orthogonality" | "sum_formula_specialized" => g("x").is_none_or(|x| x.re > -1.0),
        "quotient_expansion" => match (g("x"), g("nu")) {
            (Some(x), Some(nu)) => (x - nu).re > -1.0,
            _ => true,
        },
        "sum_formula" => match (g("x"), g("y"), g("s")) {
            (Some(x), Some(y), Some(s)) => x != zero && y != zero && s != zero && (s * x * y).norm() < margin,
            _ => true,
        },
        "product_expansion" => ["a", "b", "x"].iter().all(|n| g(n) != Some(zero)),
        "classical_graf" | "classical_product" => match (g("x"), g("y"), g("nu")) {
            (Some(x), Some(y), Some(nu)) => is_integer(nu) || (x.re > 0.0 && y.re.abs() < margin * x.re),
            _ => true,
        },
        _ => true,
    }
}

fn random_grid(command: Command, name: &str, spec: &RandomSpec, seed: u64) -> Result<Vec<Point>, CliError> {
    if spec.count == 0 {
        return config("random grid count must be positive");
    }
    let margin = spec.margin.unwrap_or(1.0);
    if !(margin > 0.0 && margin <= 1.0) {
        return config(format!("margin must lie in (0, 1], got {}", margin));
    }
    for (k, r) in &spec.domain {
        validate(k, r)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(spec.count);
    let limit = spec.count.saturating_mul(MAX_ATTEMPTS_PER_POINT);
    let mut attempts = 0;
    while out.len() < spec.count {
        if attempts == limit {
            return config(format!(
                "only {} of {} random points fell in the domain after {} draws",
                out.len(),
                spec.count,
                attempts
            ));
        }
        attempts += 1;
        let mut p = Point::new();
        for (k, r) in &spec.domain {
            p.insert(k.clone(), draw(&mut rng, k, r)?);
        }
        if in_domain(command, name, &p, margin) {
            out.push(p);
        }
    }
    Ok(out)
}

/// The grid of a configuration; `seed` from the command line wins over the
/// seeds in the file.
pub fn build_grid(cfg: &RunConfig, command: Command, seed: Option<u64>) -> Result<Vec<Point>, CliError> {
    let grid = match (&cfg.random, cfg.grid.is_empty()) {
        (Some(_), false) => return config("give either grid or random, not both"),
        (None, true) => return config("the grid is empty"),
        (None, false) => cfg.grid.iter().map(resolve_tuple).collect::<Result<Vec<_>, _>>()?,
        (Some(spec), true) => {
            let seed = match seed.or(cfg.seed).or(spec.seed) {
                Some(s) => s,
                None => return config("a random grid needs a seed"),
            };
            random_grid(command, &cfg.name, spec, seed)?
        }
    };
    Ok(grid)
}
