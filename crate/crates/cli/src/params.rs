//! Resolved parameter tuples and typed access to them.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::complex::parse_complex;
use crate::config::RawValue;
use crate::error::{config, CliError};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Bool(bool),
    Scalar(Complex64),
    List(Vec<Complex64>),
}

/// One grid point, ordered by parameter name.
pub type Point = BTreeMap<String, Value>;

fn scalar(raw: &RawValue, name: &str) -> Result<Complex64, CliError> {
    match raw {
        RawValue::Number(x) if x.is_finite() => Ok(Complex64::new(*x, 0.0)),
        RawValue::Text(s) => parse_complex(s).map_err(|e| CliError::Config(format!("parameter {}: {}", name, e))),
        _ => config(format!("parameter {} must be a number or a complex string", name)),
    }
}

pub fn resolve(raw: &RawValue, name: &str) -> Result<Value, CliError> {
    match raw {
        RawValue::Bool(b) => Ok(Value::Bool(*b)),
        RawValue::List(items) => Ok(Value::List(
            items.iter().map(|r| scalar(r, name)).collect::<Result<_, _>>()?,
        )),
        other => Ok(Value::Scalar(scalar(other, name)?)),
    }
}

pub fn resolve_tuple(raw: &BTreeMap<String, RawValue>) -> Result<Point, CliError> {
    raw.iter().map(|(k, v)| Ok((k.clone(), resolve(v, k)?))).collect()
}

/// Rejects names outside `allowed` and reports missing required ones.
pub fn check_names(p: &Point, required: &[&str], optional: &[&str]) -> Result<(), CliError> {
    for k in p.keys() {
        if !required.contains(&k.as_str()) && !optional.contains(&k.as_str()) {
            return config(format!("unknown parameter {:?}", k));
        }
    }
    for r in required {
        if !p.contains_key(*r) {
            return config(format!("missing parameter {:?}", r));
        }
    }
    Ok(())
}

pub fn complex(p: &Point, name: &str) -> Result<Complex64, CliError> {
    match p.get(name) {
        Some(Value::Scalar(z)) => Ok(*z),
        Some(_) => config(format!("parameter {} must be a single number", name)),
        None => config(format!("missing parameter {:?}", name)),
    }
}

pub fn real(p: &Point, name: &str) -> Result<f64, CliError> {
    let z = complex(p, name)?;
    if z.im != 0.0 {
        return config(format!("parameter {} must be real, got {}", name, z));
    }
    Ok(z.re)
}

pub fn real_or(p: &Point, name: &str, default: f64) -> Result<f64, CliError> {
    if p.contains_key(name) {
        real(p, name)
    } else {
        Ok(default)
    }
}

fn as_int(x: f64, name: &str) -> Result<i64, CliError> {
    if x.fract() != 0.0 || x.abs() > 1e15 {
        return config(format!("parameter {} must be an integer, got {}", name, x));
    }
    Ok(x as i64)
}

pub fn int(p: &Point, name: &str) -> Result<i64, CliError> {
    as_int(real(p, name)?, name)
}

pub fn uint(p: &Point, name: &str) -> Result<u32, CliError> {
    let v = int(p, name)?;
    u32::try_from(v).map_err(|_| CliError::Config(format!("parameter {} must be a nonnegative integer, got {}", name, v)))
}

pub fn complex_list(p: &Point, name: &str) -> Result<Vec<Complex64>, CliError> {
    match p.get(name) {
        Some(Value::List(v)) => Ok(v.clone()),
        Some(Value::Scalar(z)) => Ok(vec![*z]),
        Some(Value::Bool(_)) => config(format!("parameter {} must be a list of numbers", name)),
        None => Ok(Vec::new()),
    }
}

pub fn real_list(p: &Point, name: &str) -> Result<Vec<f64>, CliError> {
    if !p.contains_key(name) {
        return config(format!("missing parameter {:?}", name));
    }
    complex_list(p, name)?
        .into_iter()
        .map(|z| {
            if z.im != 0.0 {
                config(format!("parameter {} must hold real numbers", name))
            } else {
                Ok(z.re)
            }
        })
        .collect()
}

pub fn uint_list(p: &Point, name: &str) -> Result<Vec<u32>, CliError> {
    real_list(p, name)?
        .into_iter()
        .map(|x| {
            let v = as_int(x, name)?;
            u32::try_from(v).map_err(|_| CliError::Config(format!("parameter {} must hold nonnegative integers", name)))
        })
        .collect()
}

pub fn bool_or(p: &Point, name: &str, default: bool) -> Result<bool, CliError> {
    match p.get(name) {
        Some(Value::Bool(b)) => Ok(*b),
        Some(_) => config(format!("parameter {} must be true or false", name)),
        None => Ok(default),
    }
}
