//! Exact rational and integer linear algebra.

mod lattice;
mod matrix;

pub use lattice::{hnf, hnf_with_transform, lattice_intersect, IntLattice};
pub use matrix::{clear_denominators, kernel_rational, primitive_integer_vector, solve_rational, RatMatrix};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

pub fn qvec(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn qvec_big(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

pub fn lcm_of_denominators(v: &[Q]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
}

/// Converts an integral rational vector to `i64`, if it fits.
pub fn to_i64_vec(v: &[Q]) -> Option<Vec<i64>> {
    v.iter()
        .map(|e| {
            if e.is_integer() {
                i64::try_from(e.to_integer()).ok()
            } else {
                None
            }
        })
        .collect()
}

pub fn fmt_vector<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Parses `p`, `p/q` or a decimal such as `-0.125`.
pub fn parse_rational(tok: &str) -> Result<Q> {
    let tok = tok.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {tok:?}"));
    if let Some((int, frac)) = tok.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let digits: BigInt = format!("{}{frac}", int.trim_start_matches(['-', '+'])).parse().map_err(|_| bad())?;
        let v = Q::new(digits, num_traits::pow(BigInt::from(10), frac.len()));
        return Ok(if neg { -v } else { v });
    }
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (tok, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

/// Parses `[a,b,...]` where entries are integers or fractions `p/q`.
pub fn parse_vector(text: &str) -> Result<Vec<Q>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::InvalidInput(format!("expected [..] vector, got {t:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(parse_rational).collect()
}

/// Parses a bracketed row-major matrix such as `[[1,0],[0,-1/2]]`.
pub fn parse_matrix(text: &str) -> Result<RatMatrix> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::InvalidInput(format!("expected [[..],..] matrix, got {text:?}")))?;
    let mut rows = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let end = rest
            .find(']')
            .ok_or_else(|| Error::InvalidInput("unbalanced brackets in matrix".into()))?;
        rows.push(parse_vector(&rest[..=end])?);
        rest = rest[end + 1..].trim_start_matches(',');
    }
    RatMatrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let m = parse_matrix("[[1, 0], [0, -1/2]]").unwrap();
        assert_eq!(m.to_string(), "[[1,0],[0,-1/2]]");
        assert_eq!(parse_matrix(&m.to_string()).unwrap(), m);
        assert_eq!(parse_vector("[3,5]").unwrap(), qvec(&[3, 5]));
        assert!(parse_vector("[1,x]").is_err());
        assert_eq!(parse_rational("-0.125").unwrap(), Q::new((-1).into(), 8.into()));
        assert_eq!(parse_rational("2.50").unwrap(), Q::new(5.into(), 2.into()));
        assert!(parse_rational("1.").is_err());
        assert!(parse_matrix("[[1,0],[1]]").is_err());
    }

    #[test]
    fn denominators() {
        let v = vec![Q::new(1.into(), 4.into()), Q::new(5.into(), 6.into())];
        assert_eq!(lcm_of_denominators(&v), BigInt::from(12));
    }
}
