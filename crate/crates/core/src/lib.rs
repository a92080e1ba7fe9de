//! Unextendible product bases, completely entangled subspaces and their
//! perturbations, with numerical enumeration of the product vectors a
//! subspace contains.

pub mod constructions;
pub mod error;
pub mod polyrep;
pub mod product;
pub mod roots;
pub mod states;
pub mod subspace;
pub mod tensor;
pub mod tolerances;
pub mod verify;
pub use error::{Error, Result};
pub use tensor::{SystemShape, TensorVector, C64};
pub use tolerances::Tolerances;

/// Real number with at most nine decimals, trailing zeros removed.
fn format_real(x: f64) -> String {
    let s = format!("{x:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" => "0".to_string(),
        _ => s.to_string(),
    }
}

/// Compact human-readable complex number: `1`, `-0.5`, `2i`, `-i`, `1+2i`.
/// Parts below `5e-10` in modulus are dropped.
pub fn format_complex(c: C64) -> String {
    let clean = |x: f64| if x.abs() < 5e-10 { 0.0 } else { x };
    let (re, im) = (clean(c.re), clean(c.im));
    let imag = |x: f64| match format_real(x).as_str() {
        "1" => "i".to_string(),
        "-1" => "-i".to_string(),
        s => format!("{s}i"),
    };
    match (re == 0.0, im == 0.0) {
        (_, true) => format_real(re),
        (true, false) => imag(im),
        (false, false) if im > 0.0 => format!("{}+{}", format_real(re), imag(im)),
        (false, false) => format!("{}{}", format_real(re), imag(im)),
    }
}

/// Parses `a`, `bi`, `i`, `-i`, `a+bi` or `a-bi` (exponents allowed).
pub fn parse_complex(text: &str) -> Result<C64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot parse complex number {text:?}"));
    let real = |t: &str| t.parse::<f64>().map_err(|_| bad());
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(C64::new(real(&s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(p) => (&body[..p], &body[p..]),
        None => ("", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => real(t)?,
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        real(re_part)?
    };
    Ok(C64::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_text_roundtrip() {
        for (c, text) in [
            (C64::new(1.0, 0.0), "1"),
            (C64::new(-0.5, 0.0), "-0.5"),
            (C64::new(0.0, 2.0), "2i"),
            (C64::new(0.0, -1.0), "-i"),
            (C64::new(0.0, 1.0), "i"),
            (C64::new(1.0, 2.0), "1+2i"),
            (C64::new(1.5, -0.25), "1.5-0.25i"),
            (C64::new(0.0, 0.0), "0"),
        ] {
            assert_eq!(format_complex(c), text);
            assert_eq!(parse_complex(text).unwrap(), c);
        }
        assert_eq!(parse_complex("1e-3+2e+1i").unwrap(), C64::new(1e-3, 20.0));
        assert_eq!(parse_complex(" -2 ").unwrap(), C64::new(-2.0, 0.0));
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1+x").is_err());
        assert!(parse_complex("ii").is_err());
    }
}
