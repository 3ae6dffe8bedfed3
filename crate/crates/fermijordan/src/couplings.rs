//! Coupling vectors from files and from a seeded generator.
//!
//! File format: one rational per line (`num/den` or an integer), exactly
//! `ell - 1` values. `#` starts a comment; blank lines are ignored.

use std::path::Path;
use std::str::FromStr;

use fermijordan_core::{Couplings, Rational};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;

pub fn parse_couplings(text: &str, ell: usize) -> Result<Couplings, CliError> {
    let mut values = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        let value = parse_rational(line).ok_or_else(|| {
            CliError::Usage(format!(
                "line {lineno}: cannot parse {line:?} as a rational"
            ))
        })?;
        if value.is_zero() {
            return Err(CliError::Usage(format!(
                "line {lineno}: coupling must be nonzero"
            )));
        }
        values.push(value);
    }
    let expected = ell.saturating_sub(1);
    if values.len() != expected {
        return Err(CliError::Usage(format!(
            "expected {expected} couplings for {ell} sites, found {}",
            values.len()
        )));
    }
    Ok(Couplings::new(values)?)
}

pub fn read_couplings(path: &Path, ell: usize) -> Result<Couplings, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_couplings(&text, ell)
        .map_err(|e| CliError::Usage(format!("{}: {}", path.display(), strip_usage(e))))
}

fn strip_usage(e: CliError) -> String {
    match e {
        CliError::Usage(m) | CliError::Integrity(m) => m,
    }
}

/// `num/den` or a bare integer. A zero denominator is rejected.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = num_bigint::BigInt::from_str(n.trim()).ok()?;
        let d = num_bigint::BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        num_bigint::BigInt::from_str(s)
            .ok()
            .map(Rational::from_integer)
    }
}

/// `ell - 1` couplings with numerator uniform in `[-9, 9] \ {0}` and
/// denominator uniform in `[1, 9]`, drawn from ChaCha8 seeded with `seed`.
pub fn random_couplings(ell: usize, seed: u64) -> Couplings {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (1..ell)
        .map(|_| {
            let n: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let d: i64 = rng.gen_range(1..=9);
            Rational::new(n.into(), d.into())
        })
        .collect();
    Couplings::new(values).expect("numerators are nonzero")
}

/// `num/den`, always with an explicit denominator.
pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_file_with_comments() {
        let text = "# couplings for 4 sites\n1/2\n\n-3   # strong bond\n 22/7 \n";
        let c = parse_couplings(text, 4).unwrap();
        assert_eq!(c.values(), &[q(1, 2), q(-3, 1), q(22, 7)]);
    }

    #[test]
    fn zero_coupling_reports_line() {
        let err = parse_couplings("1\n0/5\n", 3).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn malformed_and_miscounted() {
        assert!(parse_couplings("1\nabc\n", 3)
            .unwrap_err()
            .to_string()
            .contains("line 2"));
        assert!(parse_couplings("1/0\n1\n", 3).is_err());
        assert!(parse_couplings("1\n", 3)
            .unwrap_err()
            .to_string()
            .contains("expected 2"));
        assert!(parse_couplings("", 1).unwrap().is_empty());
    }

    #[test]
    fn random_couplings_are_reproducible() {
        let a = random_couplings(8, 7);
        assert_eq!(a, random_couplings(8, 7));
        assert_ne!(a, random_couplings(8, 8));
        assert_eq!(a.len(), 7);
        for v in a.values() {
            let n: i64 = v.numer().try_into().unwrap();
            let d: i64 = v.denom().try_into().unwrap();
            assert!(n != 0 && n.abs() <= 9 && (1..=9).contains(&d));
        }
    }

    #[test]
    fn rational_format() {
        assert_eq!(format_rational(&q(-2, 4)), "-1/2");
        assert_eq!(format_rational(&q(3, 1)), "3/1");
        assert_eq!(parse_rational("-1/2"), Some(q(-1, 2)));
        assert_eq!(parse_rational("6/4"), Some(q(3, 2)));
    }
}
