use alignlab::structure::{
    are_aligned, decompose_normalizer, enumerate_integral_automorphisms, enumerate_integral_iso_to_opposite,
    in_centralizer, in_normalizer, is_automorphism, preserves_class, AlignmentCertificate, LargenessClass,
};
use serde::Serialize;

use crate::cert::{Certificate, Claim, InputRef};
use crate::emit::{mat, note, qs, Output};
use crate::failure::CliResult;
use crate::input;
use crate::spec;

#[derive(Serialize)]
struct ReprDoc {
    vector: Vec<String>,
    left: Vec<Vec<String>>,
    right: Vec<Vec<String>>,
}

pub fn repr(path: &str, vector: &str, out: Output) -> CliResult<()> {
    let l = spec::load(path)?;
    let x = input::q_vector(vector)?;
    let doc = ReprDoc {
        vector: qs(&x),
        left: mat(&l.mult.left_rep(&x)?),
        right: mat(&l.mult.right_rep(&x)?),
    };
    note(format!("representations of {} under {}", alignlab::linalg::fmt_vector(&x), l.label()));
    out.doc(&doc)
}

pub fn align(pa: &str, pb: &str, out: Output) -> CliResult<()> {
    let a = spec::load(pa)?;
    let b = spec::load(pb)?;
    let claim = match are_aligned(&a.mult, &b.mult)? {
        AlignmentCertificate::Aligned { v, w, t } => {
            note(format!("{} and {} are aligned", a.label(), b.label()));
            Claim::Aligned {
                v: v.iter().map(ToString::to_string).collect(),
                w: w.iter().map(ToString::to_string).collect(),
                t: mat(&t),
            }
        }
        AlignmentCertificate::NotAligned {
            rank,
            scale,
            intersection,
        } => {
            note(format!(
                "{} and {} are not aligned: image intersection has rank {rank}",
                a.label(),
                b.label()
            ));
            Claim::NotAligned {
                rank,
                scale: scale.to_string(),
                intersection: intersection
                    .basis()
                    .iter()
                    .map(|r| r.iter().map(ToString::to_string).collect())
                    .collect(),
            }
        }
    };
    out.doc(&Certificate::new(vec![InputRef::spec("a", &a), InputRef::spec("b", &b)], claim))
}

pub fn normalizer(path: &str, matrix: &str, out: Output) -> CliResult<()> {
    let l = spec::load(path)?;
    let t = input::matrix(matrix)?;
    let member = in_normalizer(&l.mult, &t)?;
    let (automorphism, v) = if member {
        let (a, v) = decompose_normalizer(&l.mult, &t)?;
        (Some(mat(&a)), Some(qs(&v)))
    } else {
        (None, None)
    };
    note(format!("normalizer of {}: {member}", l.label()));
    let claim = Claim::Normalizer {
        matrix: mat(&t),
        member,
        automorphism,
        v,
    };
    out.doc(&Certificate::new(vec![InputRef::spec("ring", &l)], claim))
}

pub fn centralizer(path: &str, matrix: &str, out: Output) -> CliResult<()> {
    let l = spec::load(path)?;
    let t = input::matrix(matrix)?;
    let v = in_centralizer(&l.mult, &t)?;
    note(format!("centralizer of {}: {}", l.label(), v.is_some()));
    let claim = Claim::Centralizer {
        matrix: mat(&t),
        member: v.is_some(),
        v: v.map(|v| qs(&v)),
    };
    out.doc(&Certificate::new(vec![InputRef::spec("ring", &l)], claim))
}

#[derive(Serialize)]
struct EnumerationDoc {
    target: String,
    entry_bound: i64,
    count: usize,
    matrices: Vec<Vec<Vec<i64>>>,
}

pub fn automorphism(path: &str, matrix: Option<&str>, enumerate: Option<i64>, opposite: bool, out: Output) -> CliResult<()> {
    let l = spec::load(path)?;
    if let Some(bound) = enumerate {
        let matrices = if opposite {
            enumerate_integral_iso_to_opposite(&l.mult, bound)?
        } else {
            enumerate_integral_automorphisms(&l.mult, bound)?
        };
        let target = if opposite { "opposite" } else { "self" };
        note(format!("{} integral isomorphism(s) onto {target} with entries in [-{bound},{bound}]", matrices.len()));
        return out.doc(&EnumerationDoc {
            target: target.into(),
            entry_bound: bound,
            count: matrices.len(),
            matrices,
        });
    }
    let Some(matrix) = matrix else {
        return crate::failure::usage("give a matrix or --enumerate <bound>");
    };
    let t = input::matrix(matrix)?;
    let holds = is_automorphism(&t, &l.mult)?;
    note(format!("automorphism of {}: {holds}", l.label()));
    let claim = Claim::Automorphism { matrix: mat(&t), holds };
    out.doc(&Certificate::new(vec![InputRef::spec("ring", &l)], claim))
}

pub fn preserves(path: &str, matrix: &str, class: &str, out: Output) -> CliResult<()> {
    let l = spec::load(path)?;
    let t = input::matrix(matrix)?;
    let class: LargenessClass = class.parse()?;
    let (holds, reason) = preserves_class(&l.mult, &t, class)?;
    note(format!("{class} preserved: {holds} ({reason})"));
    let claim = Claim::Preserves {
        matrix: mat(&t),
        class: class.to_string(),
        holds,
        reason,
    };
    out.doc(&Certificate::new(vec![InputRef::spec("ring", &l)], claim))
}
