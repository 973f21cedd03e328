use std::fs;
use std::path::Path;

use alignlab::catalog::quadratic_catalog;
use alignlab::{ZeroDivisorSearch, ZeroDivisorStatus};
use serde::Serialize;

use crate::emit::{mat, note, qs, Output};
use crate::failure::{usage, CliResult, Failure};
use crate::input;
use crate::spec::{self, num_matrix, Kind, MultSpec, Num, SpecFile};
use crate::{KindArg, RingCmd};

pub fn run(cmd: RingCmd, out: Output) -> CliResult<()> {
    match cmd {
        RingCmd::Define {
            kind,
            coeffs,
            b,
            c,
            n,
            tensor,
            act,
            label,
        } => define(kind, coeffs, b, c, n, tensor, act, label, out),
        RingCmd::Show { spec, zd_bound } => show(&spec, zd_bound, out),
        RingCmd::Catalog {
            c,
            b,
            quaternion,
            scaled,
            out_dir,
        } => catalog(&c, &b, quaternion, &scaled, out_dir.as_deref(), out),
    }
}

pub fn quadratic_label(b: i64, c: i64) -> String {
    let mut s = String::from("x^2");
    match b {
        0 => {}
        1 => s.push_str("-x"),
        -1 => s.push_str("+x"),
        b if b > 0 => s.push_str(&format!("-{b}x")),
        b => s.push_str(&format!("+{}x", -b)),
    }
    match c {
        0 => {}
        c if c > 0 => s.push_str(&format!("-{c}")),
        c => s.push_str(&format!("+{}", -c)),
    }
    s
}

fn quadratic_spec(b: i64, c: i64) -> MultSpec {
    MultSpec {
        dim: 2,
        kind: Kind::Polynomial {
            coefficients: vec![-c, -b, 1],
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn define(
    kind: KindArg,
    coeffs: Vec<i64>,
    b: Option<i64>,
    c: Option<i64>,
    n: Option<i64>,
    tensor: Option<String>,
    act: Option<String>,
    label: Option<String>,
    out: Output,
) -> CliResult<()> {
    let (mut ms, default_label) = match kind {
        KindArg::Polynomial => {
            if coeffs.len() < 2 {
                return usage("--coeffs needs at least two ascending coefficients");
            }
            let ms = MultSpec {
                dim: coeffs.len() - 1,
                kind: Kind::Polynomial { coefficients: coeffs },
            };
            (ms, None)
        }
        KindArg::Quadratic => {
            let (Some(b), Some(c)) = (b, c) else {
                return usage("quadratic needs --b and --c");
            };
            (quadratic_spec(b, c), Some(quadratic_label(b, c)))
        }
        KindArg::Quaternion => (
            MultSpec {
                dim: 4,
                kind: Kind::Quaternion,
            },
            Some("quaternion".to_string()),
        ),
        KindArg::ScaledZ => {
            let Some(n) = n else { return usage("scaled-z needs --n") };
            (
                MultSpec {
                    dim: 1,
                    kind: Kind::ScaledZ { n },
                },
                Some(format!("scaled{n}")),
            )
        }
        KindArg::Raw => {
            let Some(t) = tensor else { return usage("raw needs --tensor") };
            let tensor: Vec<Vec<Vec<Num>>> = serde_json::from_str(&input::arg_text(&t)?)
                .map_err(|e| Failure::Usage(format!("--tensor: {e}")))?;
            (
                MultSpec {
                    dim: tensor.len(),
                    kind: Kind::Raw { tensor },
                },
                None,
            )
        }
    };
    if let Some(a) = act {
        let m = input::matrix(&a)?;
        ms = MultSpec {
            dim: ms.dim,
            kind: Kind::Acted {
                base: Box::new(ms),
                matrix: num_matrix(&m),
            },
        };
    }
    let file = SpecFile::new(label.or(default_label), ms);
    let m = file.build()?;
    note(format!(
        "defined {}: dim {}, {}, proper: {}",
        file.label.as_deref().unwrap_or("(unlabelled)"),
        m.dim(),
        m.provenance(),
        if m.is_proven_proper() { "proven" } else { "not certified" }
    ));
    out.doc(&file)
}

#[derive(Serialize)]
struct Central {
    c: String,
    w: Vec<String>,
}

#[derive(Serialize)]
struct ShowDoc {
    label: String,
    sha256: String,
    dim: usize,
    provenance: String,
    integral: bool,
    associative: bool,
    commutative: bool,
    left_amenable: bool,
    zero_divisors: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    identity: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    central_scalar: Option<Central>,
    /// `products[i][j]` is `e_{i+1} ∘ e_{j+1}`.
    products: Vec<Vec<Vec<String>>>,
    left_basis: Vec<Vec<Vec<String>>>,
}

fn show(path: &str, zd_bound: i64, out: Output) -> CliResult<()> {
    let l = spec::load(path)?;
    let m = &l.mult;
    let d = m.dim();
    let zero_divisors = match m.zero_divisor_status() {
        ZeroDivisorStatus::ProvenFree => "proven-free".to_string(),
        ZeroDivisorStatus::Witness(x, y) => format!("witness {x:?} {y:?}"),
        ZeroDivisorStatus::Unknown => match m.zero_divisor_search(zd_bound) {
            ZeroDivisorSearch::ProvenFree => "proven-free".into(),
            ZeroDivisorSearch::Witness(x, y) => format!("witness {x:?} {y:?}"),
            ZeroDivisorSearch::NoneInBox(r) => format!("unknown (none in box of radius {r})"),
        },
    };
    let central_scalar = m.central_scalar().ok().map(|(c, w)| Central {
        c: c.to_string(),
        w: w.iter().map(ToString::to_string).collect(),
    });
    let reps = m.reps();
    let doc = ShowDoc {
        label: l.label(),
        sha256: l.sha256.clone(),
        dim: d,
        provenance: m.provenance().to_string(),
        integral: m.is_integral(),
        associative: m.is_associative(),
        commutative: m.is_commutative(),
        left_amenable: m.is_left_amenable(),
        zero_divisors,
        identity: m.rational_identity().map(|e| qs(&e)),
        central_scalar,
        products: (0..d).map(|i| (0..d).map(|j| qs(m.basis_product(i, j))).collect()).collect(),
        left_basis: reps.left.iter().map(mat).collect(),
    };
    note(format!(
        "{}: dim {}, {}, zero divisors {}",
        doc.label,
        d,
        if doc.commutative { "commutative" } else { "non-commutative" },
        doc.zero_divisors
    ));
    out.doc(&doc)
}

#[derive(Serialize)]
struct CatalogEntry {
    label: String,
    dim: usize,
    commutative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    file: Option<String>,
}

#[derive(Serialize)]
struct CatalogDoc {
    rings: Vec<CatalogEntry>,
    skipped: Vec<String>,
}

fn catalog(cs: &[i64], bs: &[i64], quaternion: bool, scaled: &[i64], dir: Option<&str>, out: Output) -> CliResult<()> {
    let mut specs: Vec<(String, String, MultSpec)> = Vec::new();
    let mut skipped = Vec::new();
    for &b in bs {
        for &c in cs {
            match quadratic_catalog(&[c], &[b]) {
                Ok(_) => specs.push((quadratic_label(b, c), format!("quad_b{b}_c{c}"), quadratic_spec(b, c))),
                Err(alignlab::Error::InvalidInput(msg)) => {
                    note(format!("skipping b={b}, c={c}: {msg}"));
                    skipped.push(quadratic_label(b, c));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    if quaternion {
        specs.push((
            "quaternion".into(),
            "quaternion".into(),
            MultSpec {
                dim: 4,
                kind: Kind::Quaternion,
            },
        ));
    }
    for &n in scaled {
        specs.push((
            format!("scaled{n}"),
            format!("scaled{n}"),
            MultSpec {
                dim: 1,
                kind: Kind::ScaledZ { n },
            },
        ));
    }
    if let Some(d) = dir {
        fs::create_dir_all(d)?;
    }
    let ext = if out.json { "json" } else { "toml" };
    let mut rings = Vec::new();
    for (label, stem, ms) in specs {
        let file = SpecFile::new(Some(label.clone()), ms);
        let m = file.build()?;
        let written = match dir {
            Some(d) => {
                let p = Path::new(d).join(format!("{stem}.{ext}"));
                fs::write(&p, out.render(&file)?)?;
                Some(p.to_string_lossy().into_owned())
            }
            None => None,
        };
        rings.push(CatalogEntry {
            label,
            dim: m.dim(),
            commutative: m.is_commutative(),
            file: written,
        });
    }
    note(format!("{} ring(s), {} skipped", rings.len(), skipped.len()));
    out.doc(&CatalogDoc { rings, skipped })
}
