use std::fs;

use alignlab::genpoly::{eval, fs_intersection_check, nearest_int_distance, parse, return_set_scan_with, Precision};
use serde::Serialize;

use crate::emit::{note, Output, ReportDoc};
use crate::failure::CliResult;
use crate::spec::sha256_hex;
use crate::{input, GenpolyCmd};

#[derive(Serialize)]
struct ParseDoc {
    canonical: String,
    depth: usize,
    variables: usize,
}

#[derive(Serialize)]
struct EvalDoc {
    expr: String,
    point: Vec<i64>,
    bits: u32,
    exact: bool,
    lower: String,
    upper: String,
    approx: f64,
    distance_lower: String,
    distance_upper: String,
}

#[derive(Serialize)]
struct ScanDoc {
    expr: String,
    eps: String,
    dim: usize,
    lo: i64,
    hi: i64,
    scanned: usize,
    members: usize,
    straddles: usize,
    set_file: String,
    set_sha256: String,
    straddle_file: String,
}

#[derive(Serialize)]
struct FsDoc {
    expr: String,
    eps: String,
    generators: Vec<Vec<i64>>,
    report: ReportDoc,
}

pub fn run(cmd: GenpolyCmd, out: Output) -> CliResult<()> {
    match cmd {
        GenpolyCmd::Parse { expr } => {
            let f = parse(&expr)?;
            note(format!("{f}"));
            out.doc(&ParseDoc {
                canonical: f.to_string(),
                depth: f.depth(),
                variables: f.num_vars(),
            })
        }
        GenpolyCmd::Eval { expr, point, bits } => {
            let f = parse(&expr)?;
            let x = input::int_vector(&point)?;
            let v = eval(&f, &x, bits)?;
            let d = nearest_int_distance(&f, &x, v.bits)?;
            note(format!("f{} = {v}", alignlab::linalg::fmt_vector(&x)));
            out.doc(&EvalDoc {
                expr: f.to_string(),
                point: x,
                bits: v.bits,
                exact: v.is_exact(),
                lower: v.lower().to_string(),
                upper: v.upper().to_string(),
                approx: v.midpoint_f64(),
                distance_lower: d.lower().to_string(),
                distance_upper: d.upper().to_string(),
            })
        }
        GenpolyCmd::Scan {
            expr,
            eps,
            dim,
            lo,
            hi,
            out: path,
            bits,
            cap_bits,
        } => {
            let f = parse(&expr)?;
            let e = input::rational(&eps)?;
            let prec = Precision {
                start_bits: bits,
                cap_bits,
            };
            let r = return_set_scan_with(&f, &e, dim, lo, hi, prec)?;
            let text = r.members.to_text();
            fs::write(&path, &text)?;
            let side = format!("{path}.straddles");
            let mut undecided = String::new();
            for p in &r.straddles {
                let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
                undecided.push_str(&parts.join(" "));
                undecided.push('\n');
            }
            fs::write(&side, undecided)?;
            note(format!(
                "{} of {} point(s) certified in the return set, {} undecided",
                r.members.len(),
                r.scanned,
                r.straddles.len()
            ));
            out.doc(&ScanDoc {
                expr: f.to_string(),
                eps: e.to_string(),
                dim,
                lo,
                hi,
                scanned: r.scanned,
                members: r.members.len(),
                straddles: r.straddles.len(),
                set_file: path,
                set_sha256: sha256_hex(text.as_bytes()),
                straddle_file: side,
            })
        }
        GenpolyCmd::Fs { expr, eps, gens } => {
            let f = parse(&expr)?;
            let e = input::rational(&eps)?;
            let g = input::vectors(&gens)?;
            let r = fs_intersection_check(&f, &e, &g)?;
            note(r.to_string());
            out.doc(&FsDoc {
                expr: f.to_string(),
                eps: e.to_string(),
                generators: g,
                report: ReportDoc::from(&r),
            })
        }
    }
}
