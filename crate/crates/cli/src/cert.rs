//! Certificates and their search-free re-verification.

use std::path::{Path, PathBuf};

use alignlab::constructions::{
    verify_avoiding, verify_ip_order_separating, verify_ip_separating, NormRecord, Stage, StagedKind, StagedSet,
};
use alignlab::largeness::{fp_set, fs_set, FiniteSet, Membership, Operation};
use alignlab::linalg::{hnf, parse_rational};
use alignlab::points::cube;
use alignlab::structure::{
    in_centralizer, in_normalizer, is_automorphism, preserves_class, verify_alignment, AlignmentCertificate,
    LargenessClass,
};
use alignlab::{Multiplication, RatMatrix, Q};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::emit::ReportDoc;
use crate::failure::{usage, CliResult, Failure};
use crate::input;
use crate::spec::{self, sha256_hex, Loaded};

pub const CERT_FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputRef {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

impl InputRef {
    pub fn spec(role: &str, l: &Loaded) -> Self {
        InputRef {
            role: role.into(),
            path: l.path.clone(),
            sha256: l.sha256.clone(),
        }
    }

    pub fn file(role: &str, path: &str) -> CliResult<Self> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
        Ok(InputRef {
            role: role.into(),
            path: path.into(),
            sha256: sha256_hex(&bytes),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Incidence {
    pub candidates: usize,
    pub max_incidence: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageDoc {
    pub n: usize,
    pub mult: usize,
    pub x: Vec<i64>,
    pub size: usize,
    pub min_norm_sq: String,
    pub max_norm_sq: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Claim {
    Aligned {
        v: Vec<String>,
        w: Vec<String>,
        t: Vec<Vec<String>>,
    },
    NotAligned {
        rank: usize,
        scale: String,
        intersection: Vec<Vec<String>>,
    },
    Normalizer {
        matrix: Vec<Vec<String>>,
        member: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        automorphism: Option<Vec<Vec<String>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        v: Option<Vec<String>>,
    },
    Centralizer {
        matrix: Vec<Vec<String>>,
        member: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        v: Option<Vec<String>>,
    },
    Automorphism {
        matrix: Vec<Vec<String>>,
        holds: bool,
    },
    Preserves {
        matrix: Vec<Vec<String>>,
        class: String,
        holds: bool,
        reason: String,
    },
    AvoidingDilator {
        g: Vec<Vec<i64>>,
        x: Vec<i64>,
        incidences: Vec<Incidence>,
    },
    Staged {
        kind: String,
        stages: Vec<StageDoc>,
    },
    IpSeparating {
        generators: Vec<Vec<i64>>,
        candidates: Vec<Vec<i64>>,
        scale_log: Vec<i64>,
        triples_checked: usize,
    },
    IpOrder {
        generators: Vec<Vec<i64>>,
        candidates: Vec<Vec<i64>>,
        scale_log: Vec<i64>,
        triples_checked: usize,
        solved: Vec<[u32; 3]>,
    },
    Syndetic {
        operation: String,
        window: i64,
        kmax: usize,
        candidates: Vec<Vec<i64>>,
        report: ReportDoc,
    },
    Thick {
        operation: String,
        f: Vec<Vec<i64>>,
        search_box: i64,
        report: ReportDoc,
    },
    PsStar {
        operation: String,
        f: Vec<Vec<i64>>,
        radius: i64,
        samples: Vec<Vec<i64>>,
        report: ReportDoc,
    },
    IpR {
        operation: String,
        r: usize,
        gen_box: i64,
        report: ReportDoc,
    },
    Density {
        operation: String,
        f: Vec<Vec<i64>>,
        sample_box: i64,
        ratio: String,
        shift: Vec<i64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: u32,
    pub inputs: Vec<InputRef>,
    pub claim: Claim,
}

impl Certificate {
    pub fn new(inputs: Vec<InputRef>, claim: Claim) -> Self {
        Certificate {
            format: CERT_FORMAT,
            inputs,
            claim,
        }
    }
}

#[derive(Serialize)]
pub struct Verification {
    pub verified: bool,
    pub claim: String,
    pub checks: Vec<String>,
}

enum Resolved {
    Spec(Loaded),
    Set(FiniteSet),
}

struct Inputs {
    items: Vec<(String, Resolved)>,
}

impl Inputs {
    fn specs(&self, role: &str) -> Vec<&Multiplication> {
        self.items
            .iter()
            .filter(|(r, _)| r == role)
            .filter_map(|(_, v)| match v {
                Resolved::Spec(l) => Some(&l.mult),
                Resolved::Set(_) => None,
            })
            .collect()
    }

    fn spec(&self, role: &str) -> CliResult<&Multiplication> {
        match self.specs(role)[..] {
            [m] => Ok(m),
            _ => usage(format!("certificate needs exactly one {role:?} input")),
        }
    }

    fn set(&self) -> CliResult<&FiniteSet> {
        self.items
            .iter()
            .find_map(|(r, v)| match v {
                Resolved::Set(s) if r == "set" => Some(s),
                _ => None,
            })
            .ok_or_else(|| Failure::Usage("certificate has no set input".into()))
    }

    fn op(&self, operation: &str) -> CliResult<Operation<'_>> {
        match operation {
            "additive" => Ok(Operation::Additive),
            "multiplicative" => Ok(Operation::Mult(self.spec("mult")?)),
            other => usage(format!("unknown operation {other:?}")),
        }
    }
}

fn locate(path: &str, base: &Path) -> PathBuf {
    let p = PathBuf::from(path);
    if p.is_file() || p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

fn resolve(inputs: &[InputRef], base: &Path) -> CliResult<Inputs> {
    let mut items = Vec::new();
    for i in inputs {
        let p = locate(&i.path, base);
        let bytes = std::fs::read(&p).map_err(|e| Failure::Usage(format!("{}: {e}", i.path)))?;
        if sha256_hex(&bytes) != i.sha256 {
            return usage(format!("{}: content hash does not match the certificate", i.path));
        }
        let v = if i.role == "set" {
            let text = String::from_utf8(bytes).map_err(|_| Failure::Usage(format!("{}: not UTF-8", i.path)))?;
            Resolved::Set(FiniteSet::parse(&text)?)
        } else {
            Resolved::Spec(spec::load_from(&i.path, &p)?)
        };
        items.push((i.role.clone(), v));
    }
    Ok(Inputs { items })
}

fn q_list(v: &[String]) -> CliResult<Vec<Q>> {
    v.iter().map(|s| Ok(parse_rational(s)?)).collect()
}

fn big_list(v: &[String]) -> CliResult<Vec<BigInt>> {
    v.iter()
        .map(|s| s.parse::<BigInt>().map_err(|_| Failure::Usage(format!("not an integer: {s:?}"))))
        .collect()
}

fn matrix_of(rows: &[Vec<String>]) -> CliResult<RatMatrix> {
    Ok(RatMatrix::from_rows(rows.iter().map(|r| q_list(r)).collect::<CliResult<_>>()?)?)
}

fn all_in(a: &FiniteSet, pts: impl IntoIterator<Item = Vec<i64>>) -> bool {
    pts.into_iter().all(|p| a.membership(&p) == Some(true))
}

fn require_witnessed(report: &ReportDoc) -> CliResult<()> {
    if report.verdict != "witnessed" {
        return usage(format!(
            "a {} verdict comes from an exhaustive search and has no search-free certificate",
            report.verdict
        ));
    }
    Ok(())
}

fn claim_name(c: &Claim) -> &'static str {
    match c {
        Claim::Aligned { .. } => "aligned",
        Claim::NotAligned { .. } => "not-aligned",
        Claim::Normalizer { .. } => "normalizer",
        Claim::Centralizer { .. } => "centralizer",
        Claim::Automorphism { .. } => "automorphism",
        Claim::Preserves { .. } => "preserves",
        Claim::AvoidingDilator { .. } => "avoiding-dilator",
        Claim::Staged { .. } => "staged",
        Claim::IpSeparating { .. } => "ip-separating",
        Claim::IpOrder { .. } => "ip-order",
        Claim::Syndetic { .. } => "syndetic",
        Claim::Thick { .. } => "thick",
        Claim::PsStar { .. } => "ps-star",
        Claim::IpR { .. } => "ip-r",
        Claim::Density { .. } => "density",
    }
}

/// Re-checks `cert` against its inputs. Relative input paths are tried as
/// given first, then relative to `base`.
pub fn verify(cert: &Certificate, base: &Path) -> CliResult<Verification> {
    if cert.format != CERT_FORMAT {
        return usage(format!("unsupported certificate format {}", cert.format));
    }
    let inputs = resolve(&cert.inputs, base)?;
    let mut checks = vec![format!("{} input hash(es) match", cert.inputs.len())];
    let ok = check_claim(&cert.claim, &inputs, &mut checks)?;
    Ok(Verification {
        verified: ok,
        claim: claim_name(&cert.claim).into(),
        checks,
    })
}

fn check_claim(claim: &Claim, inp: &Inputs, checks: &mut Vec<String>) -> CliResult<bool> {
    match claim {
        Claim::Aligned { v, w, t } => {
            let c = AlignmentCertificate::Aligned {
                v: big_list(v)?,
                w: big_list(w)?,
                t: matrix_of(t)?,
            };
            checks.push("witness identities on all basis pairs".into());
            Ok(verify_alignment(inp.spec("a")?, inp.spec("b")?, &c)?)
        }
        Claim::NotAligned {
            rank,
            scale,
            intersection,
        } => {
            let a = inp.spec("a")?;
            let d = a.dim();
            let basis: Vec<Vec<BigInt>> = intersection.iter().map(|r| big_list(r)).collect::<CliResult<_>>()?;
            let c = AlignmentCertificate::NotAligned {
                rank: *rank,
                scale: scale
                    .parse()
                    .map_err(|_| Failure::Usage(format!("not an integer: {scale:?}")))?,
                intersection: hnf(d * d, &basis)?,
            };
            checks.push("no alignment vector; image intersection recomputed".into());
            Ok(verify_alignment(a, inp.spec("b")?, &c)?)
        }
        Claim::Normalizer {
            matrix,
            member,
            automorphism,
            v,
        } => {
            let m = inp.spec("ring")?;
            let t = matrix_of(matrix)?;
            match (member, automorphism, v) {
                (true, Some(a), Some(v)) => {
                    let a = matrix_of(a)?;
                    let s = m.right_rep(&q_list(v)?)?;
                    checks.push("automorphism factor, right-multiplication factor, product".into());
                    Ok(is_automorphism(&a, m)? && in_centralizer(m, &s)?.is_some() && &a * &s == t)
                }
                (false, _, _) => {
                    checks.push("normalizer membership recomputed".into());
                    Ok(!in_normalizer(m, &t)?)
                }
                _ => usage("normalizer certificate lacks its factorization"),
            }
        }
        Claim::Centralizer { matrix, member, v } => {
            let m = inp.spec("ring")?;
            let t = matrix_of(matrix)?;
            match (member, v) {
                (true, Some(v)) => {
                    checks.push("matrix equals right multiplication by v".into());
                    Ok(m.right_rep(&q_list(v)?)? == t)
                }
                (false, _) => {
                    checks.push("commutation with the left representation recomputed".into());
                    Ok(in_centralizer(m, &t)?.is_none())
                }
                _ => usage("centralizer certificate lacks v"),
            }
        }
        Claim::Automorphism { matrix, holds } => {
            checks.push("homomorphism identities on basis pairs".into());
            Ok(is_automorphism(&matrix_of(matrix)?, inp.spec("ring")?)? == *holds)
        }
        Claim::Preserves {
            matrix, class, holds, ..
        } => {
            let class: LargenessClass = class.parse()?;
            checks.push(format!("class {class} dispatch recomputed"));
            Ok(preserves_class(inp.spec("ring")?, &matrix_of(matrix)?, class)?.0 == *holds)
        }
        Claim::AvoidingDilator { g, x, incidences } => {
            let base = inp.spec("base")?;
            let others = inp.specs("avoid");
            if others.len() != incidences.len() {
                return Ok(false);
            }
            let gs = FiniteSet::new(base.dim(), g.clone())?;
            let h = FiniteSet::new(base.dim(), g.iter().map(|f| base.mul_int(f, x)).collect::<Result<Vec<_>, _>>()?)?;
            checks.push(format!("exact incidence check against {} multiplication(s)", others.len()));
            for (o, inc) in others.iter().zip(incidences) {
                let r = verify_avoiding(&h, &gs, o)?;
                if !r.avoiding || r.candidates != inc.candidates || r.max_incidence != inc.max_incidence {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Claim::Staged { kind, stages } => {
            let (kind, mults, avoid) = match kind.as_str() {
                "thick-avoiding" => (StagedKind::ThickAvoiding, inp.specs("thick-for"), inp.specs("avoid")),
                "ipstar-nonsyndetic" => (StagedKind::IpStarNonSyndetic, inp.specs("mult"), Vec::new()),
                other => return usage(format!("unknown staged kind {other:?}")),
            };
            let Some(first) = mults.first() else {
                return usage("staged certificate has no multiplications");
            };
            let dim = first.dim();
            let mut st = Vec::new();
            let mut log = Vec::new();
            for s in stages {
                let Some(m) = mults.get(s.mult) else { return Ok(false) };
                let pts = cube(dim, s.n as i64)
                    .iter()
                    .map(|f| m.mul_int(f, &s.x))
                    .collect::<Result<Vec<_>, _>>()?;
                let h = FiniteSet::new(dim, pts)?;
                if h.len() != s.size {
                    return Ok(false);
                }
                st.push(Stage {
                    n: s.n,
                    mult_index: s.mult,
                    x: s.x.clone(),
                    h,
                });
                let parse = |t: &str| t.parse::<i128>().map_err(|_| Failure::Usage(format!("bad norm {t:?}")));
                log.push(NormRecord {
                    min_sq: parse(&s.min_norm_sq)?,
                    max_sq: parse(&s.max_norm_sq)?,
                });
            }
            let set = StagedSet {
                kind,
                dim,
                mults: mults.into_iter().cloned().collect(),
                avoid: avoid.into_iter().cloned().collect(),
                stages: st,
                norm_log: log,
            };
            checks.push(format!("{} stage(s) re-derived; norm conditions and avoidance rechecked", stages.len()));
            Ok(set.check_invariants()?)
        }
        Claim::IpSeparating { generators, .. } => {
            let r = verify_ip_separating(inp.spec("a")?, inp.spec("b")?, generators)?;
            checks.push(format!("{} triples checked exhaustively", r.triples_checked));
            Ok(r.ok)
        }
        Claim::IpOrder { generators, .. } => {
            let r = verify_ip_order_separating(inp.spec("m")?, generators)?;
            checks.push(format!("{} triples checked exhaustively", r.triples_checked));
            Ok(r.ok)
        }
        Claim::Syndetic {
            operation,
            window,
            kmax,
            candidates,
            report,
        } => {
            require_witnessed(report)?;
            let a = inp.set()?;
            let op = inp.op(operation)?;
            let shifts = &report.witness;
            if shifts.len() > *kmax || !shifts.iter().all(|s| candidates.contains(s)) {
                return Ok(false);
            }
            checks.push(format!("window of radius {window} covered pointwise"));
            for p in op.points(a.dim(), *window) {
                let mut hit = false;
                for s in shifts {
                    if a.membership(&op.apply(s, &p)?) == Some(true) {
                        hit = true;
                        break;
                    }
                }
                if !hit {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Claim::Thick { operation, f, report, .. } => {
            require_witnessed(report)?;
            let a = inp.set()?;
            let op = inp.op(operation)?;
            if f.is_empty() {
                return Ok(true);
            }
            let Some(x) = report.witness.first() else { return Ok(false) };
            checks.push("F dilated by the witness lies in A".into());
            Ok(all_in(a, f.iter().map(|g| op.apply(g, x)).collect::<Result<Vec<_>, _>>()?))
        }
        Claim::PsStar {
            operation,
            f,
            radius,
            samples,
            report,
        } => {
            require_witnessed(report)?;
            let a = inp.set()?;
            let op = inp.op(operation)?;
            if f.is_empty() {
                return Ok(true);
            }
            if report.witness.len() != samples.len() {
                return Ok(false);
            }
            checks.push(format!("{} sample(s) re-checked", samples.len()));
            for (x, z) in samples.iter().zip(&report.witness) {
                if z.iter().map(|c| c.abs()).max().unwrap_or(0) > *radius || z.iter().all(|&c| c == 0) {
                    return Ok(false);
                }
                let pts = f
                    .iter()
                    .map(|g| op.apply(&op.apply(g, z)?, x))
                    .collect::<Result<Vec<_>, _>>()?;
                if !all_in(a, pts) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Claim::IpR {
            operation, r, report, ..
        } => {
            require_witnessed(report)?;
            let a = inp.set()?;
            if report.witness.len() != *r {
                return Ok(false);
            }
            let fp = match inp.op(operation)? {
                Operation::Additive => fs_set(&report.witness)?,
                Operation::Mult(m) => fp_set(m, &report.witness)?,
            };
            checks.push(format!("all {} finite products lie in A", fp.len()));
            Ok(all_in(a, fp.elements().to_vec()))
        }
        Claim::Density {
            operation,
            f,
            ratio,
            shift,
            ..
        } => {
            let a = inp.set()?;
            let op = inp.op(operation)?;
            if f.is_empty() {
                return Ok(false);
            }
            let mut count = 0usize;
            for g in f {
                if a.membership(&op.apply(g, shift)?) == Some(true) {
                    count += 1;
                }
            }
            checks.push("count at the recorded shift; maximality over the box is not rechecked".into());
            let got = Q::new(count.into(), f.len().into());
            Ok(input::rational(ratio)? == got)
        }
    }
}
