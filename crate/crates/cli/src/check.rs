use alignlab::largeness::{
    contains_ipr, density_estimate, psstar_window_check, syndetic_witness, thick_witness, FiniteSet, IpSearchLimits,
    Operation,
};
use alignlab::points::cube;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cert::{Certificate, Claim, InputRef};
use crate::emit::{note, Output, ReportDoc};
use crate::failure::CliResult;
use crate::spec::{self, Loaded};
use crate::{input, CheckCmd, SetArgs};

struct Ctx {
    set: FiniteSet,
    mult: Option<Loaded>,
    inputs: Vec<InputRef>,
}

impl Ctx {
    fn load(s: &SetArgs) -> CliResult<Ctx> {
        let set = input::set(&s.set)?;
        let mut inputs = vec![InputRef::file("set", &s.set)?];
        let mult = match &s.mult {
            Some(p) => {
                let l = spec::load(p)?;
                inputs.push(InputRef::spec("mult", &l));
                Some(l)
            }
            None => None,
        };
        Ok(Ctx { set, mult, inputs })
    }

    fn op(&self) -> Operation<'_> {
        match &self.mult {
            Some(l) => Operation::Mult(&l.mult),
            None => Operation::Additive,
        }
    }

    fn operation(&self) -> String {
        if self.mult.is_some() { "multiplicative" } else { "additive" }.into()
    }

    fn emit(self, claim: Claim, out: Output) -> CliResult<()> {
        out.doc(&Certificate::new(self.inputs, claim))
    }
}

fn sample_points(d: usize, count: usize, radius: i64, seed: u64) -> Vec<Vec<i64>> {
    let pool = cube(d, radius);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.choose_multiple(&mut rng, count.min(pool.len())).cloned().collect()
}

pub fn run(cmd: CheckCmd, seed: u64, out: Output) -> CliResult<()> {
    match cmd {
        CheckCmd::Syndetic { s, shifts, window, kmax } => {
            let ctx = Ctx::load(&s)?;
            let shifts = input::set(&shifts)?;
            let r = syndetic_witness(&ctx.set, ctx.op(), &shifts, window, kmax)?;
            note(r.to_string());
            let claim = Claim::Syndetic {
                operation: ctx.operation(),
                window,
                kmax,
                candidates: shifts.elements().to_vec(),
                report: ReportDoc::from(&r),
            };
            ctx.emit(claim, out)
        }
        CheckCmd::Thick { s, f, search_box } => {
            let ctx = Ctx::load(&s)?;
            let f = input::set(&f)?;
            let r = thick_witness(&ctx.set, ctx.op(), &f, search_box)?;
            note(r.to_string());
            let claim = Claim::Thick {
                operation: ctx.operation(),
                f: f.elements().to_vec(),
                search_box,
                report: ReportDoc::from(&r),
            };
            ctx.emit(claim, out)
        }
        CheckCmd::Psstar {
            s,
            f,
            radius,
            samples,
            random,
            sample_box,
        } => {
            let ctx = Ctx::load(&s)?;
            let f = input::set(&f)?;
            let xs = match (samples, random) {
                (Some(sm), _) => input::vectors(&sm)?,
                (None, Some(k)) => sample_points(ctx.set.dim(), k, sample_box, seed),
                (None, None) => return crate::failure::usage("give --samples or --random"),
            };
            let r = psstar_window_check(&ctx.set, ctx.op(), &f, radius, &xs)?;
            note(r.to_string());
            let claim = Claim::PsStar {
                operation: ctx.operation(),
                f: f.elements().to_vec(),
                radius,
                samples: xs,
                report: ReportDoc::from(&r),
            };
            ctx.emit(claim, out)
        }
        CheckCmd::Ipr {
            s,
            r,
            gen_box,
            max_points,
        } => {
            let ctx = Ctx::load(&s)?;
            let limits = IpSearchLimits {
                max_points,
                ..IpSearchLimits::default()
            };
            let rep = contains_ipr(&ctx.set, ctx.op(), r, gen_box, limits)?;
            note(rep.to_string());
            let claim = Claim::IpR {
                operation: ctx.operation(),
                r,
                gen_box,
                report: ReportDoc::from(&rep),
            };
            ctx.emit(claim, out)
        }
        CheckCmd::Density { s, f, sample_box } => {
            let ctx = Ctx::load(&s)?;
            let f = input::set(&f)?;
            let (ratio, shift) = density_estimate(&ctx.set, ctx.op(), &f, sample_box)?;
            note(format!("density lower bound {ratio} at shift {}", alignlab::linalg::fmt_vector(&shift)));
            let claim = Claim::Density {
                operation: ctx.operation(),
                f: f.elements().to_vec(),
                sample_box,
                ratio: ratio.to_string(),
                shift,
            };
            ctx.emit(claim, out)
        }
    }
}
