use std::fs;
use std::path::Path;

use alignlab::largeness::FiniteSet;
use alignlab::linalg::{parse_matrix, parse_rational, parse_vector, to_i64_vec};
use alignlab::{RatMatrix, Q};

use crate::failure::{usage, CliResult, Failure};

/// The argument itself, or the contents of the file it names.
pub fn arg_text(arg: &str) -> CliResult<String> {
    let p = Path::new(arg);
    if p.is_file() {
        return fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{arg}: {e}")));
    }
    Ok(arg.to_string())
}

pub fn rational(arg: &str) -> CliResult<Q> {
    Ok(parse_rational(arg)?)
}

pub fn q_vector(arg: &str) -> CliResult<Vec<Q>> {
    Ok(parse_vector(arg_text(arg)?.trim())?)
}

pub fn int_vector(arg: &str) -> CliResult<Vec<i64>> {
    let v = q_vector(arg)?;
    to_i64_vec(&v).ok_or_else(|| Failure::Usage(format!("expected an integer vector, got {arg:?}")))
}

pub fn matrix(arg: &str) -> CliResult<RatMatrix> {
    Ok(parse_matrix(&arg_text(arg)?)?)
}

/// `[[..],..]` row lists or the one-vector-per-line set format.
pub fn vectors(arg: &str) -> CliResult<Vec<Vec<i64>>> {
    let text = arg_text(arg)?;
    if text.trim_start().starts_with('[') {
        let m = parse_matrix(&text)?;
        return m
            .to_rows()
            .iter()
            .map(|r| to_i64_vec(r).ok_or_else(|| Failure::Usage(format!("expected integer vectors in {arg:?}"))))
            .collect();
    }
    Ok(FiniteSet::parse(&text)?.elements().to_vec())
}

pub fn set(arg: &str) -> CliResult<FiniteSet> {
    let text = arg_text(arg)?;
    if text.trim_start().starts_with('[') {
        let pts = vectors(arg)?;
        let Some(first) = pts.first() else {
            return usage(format!("{arg:?} has no vectors; cannot infer dimension"));
        };
        return Ok(FiniteSet::new(first.len(), pts)?);
    }
    Ok(FiniteSet::parse(&text)?)
}
