use alignlab::constructions::{
    build_ip_order_separating, build_ip_separating, build_ipstar_nonsyndetic, build_thick_avoiding,
    find_avoiding_dilator_within, verify_avoiding, verify_difference_bound, verify_ip_order_separating,
    verify_ip_separating, StagedSet,
};
use alignlab::largeness::FiniteSet;
use alignlab::linalg::fmt_vector;
use alignlab::Multiplication;

use crate::cert::{Certificate, Claim, Incidence, InputRef, StageDoc};
use crate::emit::{note, Output};
use crate::failure::{CliResult, Failure};
use crate::spec::{self, Loaded};
use crate::{input, ConstructCmd};

fn mults(ls: &[Loaded]) -> Vec<Multiplication> {
    ls.iter().map(|l| l.mult.clone()).collect()
}

fn refs(role: &str, ls: &[Loaded]) -> Vec<InputRef> {
    ls.iter().map(|l| InputRef::spec(role, l)).collect()
}

fn stage_docs(b: &StagedSet) -> Vec<StageDoc> {
    b.stages
        .iter()
        .zip(&b.norm_log)
        .map(|(s, r)| StageDoc {
            n: s.n,
            mult: s.mult_index,
            x: s.x.clone(),
            size: s.h.len(),
            min_norm_sq: r.min_sq.to_string(),
            max_norm_sq: r.max_sq.to_string(),
        })
        .collect()
}

fn summarize_stages(b: &StagedSet) {
    for s in &b.stages {
        note(format!("stage {}: x = {}, |H| = {}", s.n, fmt_vector(&s.x), s.h.len()));
    }
}

pub fn run(cmd: ConstructCmd, out: Output) -> CliResult<()> {
    match cmd {
        ConstructCmd::Avoid { base, avoid, g, bound } => {
            let base = spec::load(&base)?;
            let others = spec::load_all(&avoid)?;
            let g = input::set(&g)?;
            let x = find_avoiding_dilator_within(&base.mult, &mults(&others), &g, bound)?;
            let pts = g.iter().map(|f| base.mult.mul_int(f, &x)).collect::<Result<Vec<_>, _>>()?;
            let h = FiniteSet::new(g.dim(), pts)?;
            let mut incidences = Vec::new();
            for o in &others {
                let r = verify_avoiding(&h, &g, &o.mult)?;
                if !r.avoiding {
                    return Err(Failure::Usage(format!("dilator {} failed post-verification", fmt_vector(&x))));
                }
                incidences.push(Incidence {
                    candidates: r.candidates,
                    max_incidence: r.max_incidence,
                });
            }
            note(format!("avoiding dilator x = {}", fmt_vector(&x)));
            let mut inputs = vec![InputRef::spec("base", &base)];
            inputs.extend(refs("avoid", &others));
            let claim = Claim::AvoidingDilator {
                g: g.elements().to_vec(),
                x,
                incidences,
            };
            out.doc(&Certificate::new(inputs, claim))
        }
        ConstructCmd::Thick {
            thick_for,
            avoid,
            stages,
            bound,
        } => {
            let tf = spec::load_all(&thick_for)?;
            let av = spec::load_all(&avoid)?;
            let b = build_thick_avoiding(&mults(&tf), &mults(&av), stages, bound)?;
            summarize_stages(&b);
            let mut inputs = refs("thick-for", &tf);
            inputs.extend(refs("avoid", &av));
            let claim = Claim::Staged {
                kind: "thick-avoiding".into(),
                stages: stage_docs(&b),
            };
            out.doc(&Certificate::new(inputs, claim))
        }
        ConstructCmd::IpstarNonsyn {
            mult,
            stages,
            bound,
            window,
        } => {
            let ms = spec::load_all(&mult)?;
            let b = build_ipstar_nonsyndetic(&mults(&ms), stages, bound)?;
            summarize_stages(&b);
            if let Some(w) = window {
                let r = verify_difference_bound(&b, w)?;
                note(format!(
                    "difference check over cube({w}): {} shifts, max |B ∩ (B-x)| = {}, {} cross-stage incidence(s), same-stage bound {}, cross-stage bound {}",
                    r.shifts_checked,
                    r.max_intersection,
                    r.cross_stage.len(),
                    r.same_stage_ok,
                    r.cross_bound_ok
                ));
            }
            let claim = Claim::Staged {
                kind: "ipstar-nonsyndetic".into(),
                stages: stage_docs(&b),
            };
            out.doc(&Certificate::new(refs("mult", &ms), claim))
        }
        ConstructCmd::IpSep { a, b, n, bound } => {
            let a = spec::load(&a)?;
            let b = spec::load(&b)?;
            let seq = build_ip_separating(&a.mult, &b.mult, n, bound)?;
            let v = verify_ip_separating(&a.mult, &b.mult, &seq.generators)?;
            if !v.ok {
                return Err(Failure::Usage("sequence failed post-verification".into()));
            }
            note(format!("{} generator(s), {} triples verified", seq.generators.len(), v.triples_checked));
            let claim = Claim::IpSeparating {
                generators: seq.generators,
                candidates: seq.candidates,
                scale_log: seq.scale_log,
                triples_checked: v.triples_checked,
            };
            out.doc(&Certificate::new(vec![InputRef::spec("a", &a), InputRef::spec("b", &b)], claim))
        }
        ConstructCmd::IpOrder { m, n, bound } => {
            let m = spec::load(&m)?;
            let seq = build_ip_order_separating(&m.mult, n, bound)?;
            let v = verify_ip_order_separating(&m.mult, &seq.generators)?;
            if !v.ok {
                return Err(Failure::Usage("sequence failed post-verification".into()));
            }
            note(format!("{} generator(s), {} solved equation(s)", seq.generators.len(), v.solved.len()));
            let claim = Claim::IpOrder {
                generators: seq.generators,
                candidates: seq.candidates,
                scale_log: seq.scale_log,
                triples_checked: v.triples_checked,
                solved: v.solved.iter().map(|&(a, b, c)| [a, b, c]).collect(),
            };
            out.doc(&Certificate::new(vec![InputRef::spec("m", &m)], claim))
        }
    }
}
