//! Multiplication spec files.
//!
//! ```toml
//! version = 1
//! label = "gauss"
//! dim = 2
//! kind = "polynomial"
//!
//! [payload]
//! coefficients = [1, 0, 1]
//! ```
//!
//! `coefficients` lists `p(x)` in ascending order with the leading 1 last.
//! JSON files with the same fields are accepted as well.

use std::fs;
use std::path::Path;

use alignlab::catalog::{from_polynomial, quaternion, scaled_z, MonicPoly};
use alignlab::linalg::parse_rational;
use alignlab::{Multiplication, RatMatrix, Q};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::failure::{usage, CliResult, Failure};

pub const SPEC_VERSION: u32 = 1;

/// An integer, or a rational written as text (`"-1/2"`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl Num {
    pub fn from_q(q: &Q) -> Num {
        match i64::try_from(q.to_integer()) {
            Ok(v) if q.is_integer() => Num::Int(v),
            _ => Num::Text(q.to_string()),
        }
    }

    pub fn to_q(&self) -> CliResult<Q> {
        match self {
            Num::Int(v) => Ok(Q::from_integer((*v).into())),
            Num::Text(t) => Ok(parse_rational(t)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Kind {
    Polynomial { coefficients: Vec<i64> },
    Quaternion,
    ScaledZ { n: i64 },
    /// `tensor[i][j][k]` is the `e_k` coefficient of `e_i ∘ e_j`.
    Raw { tensor: Vec<Vec<Vec<Num>>> },
    Acted { base: Box<MultSpec>, matrix: Vec<Vec<Num>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultSpec {
    pub dim: usize,
    #[serde(flatten)]
    pub kind: Kind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub spec: MultSpec,
}

pub fn num_matrix(m: &RatMatrix) -> Vec<Vec<Num>> {
    m.to_rows().iter().map(|r| r.iter().map(Num::from_q).collect()).collect()
}

pub fn matrix_from_nums(rows: &[Vec<Num>]) -> CliResult<RatMatrix> {
    let rows: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(Num::to_q).collect::<CliResult<_>>())
        .collect::<CliResult<_>>()?;
    Ok(RatMatrix::from_rows(rows)?)
}

impl MultSpec {
    pub fn build(&self) -> CliResult<Multiplication> {
        let m = match &self.kind {
            Kind::Polynomial { coefficients } => from_polynomial(&MonicPoly::from_ascending(coefficients)?),
            Kind::Quaternion => quaternion(),
            Kind::ScaledZ { n } => scaled_z(*n)?,
            Kind::Raw { tensor } => {
                let sc: Vec<Vec<Vec<Q>>> = tensor
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|v| v.iter().map(Num::to_q).collect::<CliResult<Vec<Q>>>())
                            .collect::<CliResult<Vec<_>>>()
                    })
                    .collect::<CliResult<_>>()?;
                Multiplication::raw_nested(&sc)?
            }
            Kind::Acted { base, matrix } => base.build()?.act(&matrix_from_nums(matrix)?)?,
        };
        if m.dim() != self.dim {
            return usage(format!("spec declares dim {} but the multiplication has dim {}", self.dim, m.dim()));
        }
        Ok(m)
    }
}

impl SpecFile {
    pub fn new(label: Option<String>, spec: MultSpec) -> Self {
        SpecFile {
            version: SPEC_VERSION,
            label,
            spec,
        }
    }

    /// Builds the multiplication and runs the associativity check.
    pub fn build(&self) -> CliResult<Multiplication> {
        if self.version != SPEC_VERSION {
            return usage(format!("unsupported spec version {}", self.version));
        }
        let mut m = self.spec.build()?;
        if !m.check_associative() {
            return usage("the multiplication is not associative");
        }
        Ok(m)
    }
}

/// A spec file read from disk together with its content hash.
pub struct Loaded {
    pub path: String,
    pub sha256: String,
    pub file: SpecFile,
    pub mult: Multiplication,
}

impl Loaded {
    pub fn label(&self) -> String {
        self.file.label.clone().unwrap_or_else(|| self.path.clone())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn parse_doc<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> CliResult<T> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| Failure::Usage(format!("{what}: {e}")))
    } else {
        toml::from_str(text).map_err(|e| Failure::Usage(format!("{what}: {e}")))
    }
}

pub fn load(path: &str) -> CliResult<Loaded> {
    load_from(path, Path::new(path))
}

/// Loads `fs_path` but records it under the name `path`.
pub fn load_from(path: &str, fs_path: &Path) -> CliResult<Loaded> {
    let bytes = fs::read(fs_path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::Usage(format!("{path}: not UTF-8")))?;
    let file: SpecFile = parse_doc(&text, path)?;
    let mult = file.build()?;
    Ok(Loaded {
        path: path.to_string(),
        sha256: sha256_hex(&bytes),
        file,
        mult,
    })
}

pub fn load_all(paths: &[String]) -> CliResult<Vec<Loaded>> {
    paths.iter().map(|p| load(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_and_json_agree() {
        let t = "version = 1\nlabel = \"g\"\ndim = 2\nkind = \"polynomial\"\n\n[payload]\ncoefficients = [1, 0, 1]\n";
        let j = r#"{"version":1,"label":"g","dim":2,"kind":"polynomial","payload":{"coefficients":[1,0,1]}}"#;
        let a: SpecFile = parse_doc(t, "t").unwrap();
        let b: SpecFile = parse_doc(j, "j").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.build().unwrap(), alignlab::catalog::gaussian());
        assert_eq!(toml::to_string(&a).unwrap(), t);
    }

    #[test]
    fn unit_and_nested_kinds() {
        let q: SpecFile = parse_doc("version = 1\ndim = 4\nkind = \"quaternion\"\n", "q").unwrap();
        assert_eq!(q.build().unwrap(), quaternion());
        let acted = SpecFile::new(
            None,
            MultSpec {
                dim: 2,
                kind: Kind::Acted {
                    base: Box::new(MultSpec {
                        dim: 2,
                        kind: Kind::Polynomial {
                            coefficients: vec![1, 0, 1],
                        },
                    }),
                    matrix: vec![vec![Num::Int(0), Num::Int(1)], vec![Num::Int(1), Num::Int(0)]],
                },
            },
        );
        let back: SpecFile = parse_doc(&toml::to_string(&acted).unwrap(), "a").unwrap();
        assert_eq!(back, acted);
        assert!(back.build().unwrap().is_integral());
    }

    #[test]
    fn bad_specs() {
        let wrong_dim: SpecFile = parse_doc("version = 1\ndim = 3\nkind = \"quaternion\"\n", "q").unwrap();
        assert!(matches!(wrong_dim.build(), Err(Failure::Usage(_))));
        let raw = r#"{"version":1,"dim":2,"kind":"raw","payload":{"tensor":[[[0,1],[1,0]],[[1,0],[0,"1/2"]]]}}"#;
        let f: SpecFile = parse_doc(raw, "r").unwrap();
        assert!(f.build().is_err());
    }
}
