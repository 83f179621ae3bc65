//! Complex numbers written as `"re+imi"` strings.

use num_complex::Complex64;

fn real_part(s: &str, whole: &str) -> Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|_| format!("cannot parse {:?} as a complex number", whole))?;
    if !v.is_finite() {
        return Err(format!("{:?} is not finite", whole));
    }
    Ok(v)
}

fn imag_part(s: &str, whole: &str) -> Result<f64, String> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => real_part(s, whole),
    }
}

/// Parses `"1.5"`, `"-2i"`, `"0.3+0.7i"`, `"1e-3-2.5e-2i"` and the like.
/// Whitespace is ignored; `j` is accepted in place of `i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let body = match t.strip_suffix('i').or_else(|| t.strip_suffix('j')) {
        Some(b) => b,
        None => return Ok(Complex64::new(real_part(&t, s)?, 0.0)),
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => Ok(Complex64::new(real_part(&body[..i], s)?, imag_part(&body[i..], s)?)),
        None => Ok(Complex64::new(0.0, imag_part(body, s)?)),
    }
}

/// Inverse of [`parse_complex`] using the shortest round-trip form of each part.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("1.5").unwrap(), c(1.5, 0.0));
        assert_eq!(parse_complex("-2i").unwrap(), c(0.0, -2.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("0.3+0.7i").unwrap(), c(0.3, 0.7));
        assert_eq!(parse_complex("0.3 - 0.7i").unwrap(), c(0.3, -0.7));
        assert_eq!(parse_complex("1e-3-2.5e-2i").unwrap(), c(1e-3, -2.5e-2));
        assert_eq!(parse_complex("-1E+2+3e-1j").unwrap(), c(-100.0, 0.3));
        assert_eq!(parse_complex("2e-3i").unwrap(), c(0.0, 2e-3));
        assert_eq!(parse_complex("1-i").unwrap(), c(1.0, -1.0));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1+", "1+2", "1++2i", "inf", "nan+1i", "1+2ii", "i1"] {
            assert!(parse_complex(s).is_err(), "{}", s);
        }
    }

    #[test]
    fn round_trip() {
        for z in [Complex64::new(0.1, -0.2), Complex64::new(-3.0, 1e-300), Complex64::new(2.5, 0.0)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }
}
