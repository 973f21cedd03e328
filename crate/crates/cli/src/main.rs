mod cert;
mod check;
mod construct;
mod emit;
mod failure;
mod input;
mod poly;
mod query;
mod ring;
mod spec;

use std::path::Path;
use std::process::ExitCode;

use alignlab::constructions::DEFAULT_SEARCH_BOUND;
use alignlab::genpoly::{DEFAULT_BITS, MAX_BITS};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::emit::Output;
use crate::failure::{CliResult, Failure};

pub const DEFAULT_SEED: u64 = 0x5EED;

/// Exact algebra of multiplications on Z^d.
///
/// Structured output goes to stdout (TOML, or JSON with --json), summaries
/// to stderr. Exit codes: 0 verdict computed, 1 usage error, 2 search
/// exhausted, 3 hypothesis violated or certificate rejected.
#[derive(Parser)]
#[command(name = "alignlab", version)]
struct Cli {
    /// Emit JSON instead of TOML.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Define, inspect and list multiplications.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Left and right representation matrices of a vector.
    Repr { spec: String, vector: String },
    /// Decide whether two multiplications are aligned.
    Align { a: String, b: String },
    /// Normalizer membership, with the automorphism-times-centralizer factorization.
    Normalizer { spec: String, matrix: String },
    /// Centralizer membership.
    Centralizer { spec: String, matrix: String },
    /// Check a matrix, or enumerate integral automorphisms.
    Automorphism {
        spec: String,
        matrix: Option<String>,
        /// Enumerate integral automorphisms with entries bounded by this value.
        #[arg(long)]
        enumerate: Option<i64>,
        /// Enumerate isomorphisms onto the opposite multiplication instead.
        #[arg(long, requires = "enumerate")]
        opposite: bool,
    },
    /// Whether a matrix preserves a largeness class (S, T, PS, PS*, D, D*, IP, IP*, IP_r, IP_r*, IP_0, IP_0*).
    Preserves { spec: String, matrix: String, class: String },
    /// Run a construction and emit its certificate.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Finite-window largeness checks on a set file.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Generalized polynomial parsing, certified evaluation and scans.
    #[command(subcommand)]
    Genpoly(GenpolyCmd),
    /// Re-verify a certificate without repeating its search.
    Verify { certificate: String },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum KindArg {
    Polynomial,
    Quadratic,
    Quaternion,
    ScaledZ,
    Raw,
}

#[derive(Subcommand)]
pub enum RingCmd {
    /// Print a spec file.
    #[command(allow_negative_numbers = true)]
    Define {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Ascending coefficients of p(x), leading 1 last.
        #[arg(long, value_delimiter = ',')]
        coeffs: Vec<i64>,
        /// Quadratic x^2 - b x - c.
        #[arg(long)]
        b: Option<i64>,
        #[arg(long)]
        c: Option<i64>,
        #[arg(long)]
        n: Option<i64>,
        /// Nested [[[..]]] structure constants.
        #[arg(long)]
        tensor: Option<String>,
        /// Wrap the result in an action by this matrix.
        #[arg(long)]
        act: Option<String>,
        #[arg(long)]
        label: Option<String>,
    },
    /// Properties of a multiplication.
    Show {
        spec: String,
        /// Box radius for the zero-divisor search when freeness is not certified.
        #[arg(long, default_value_t = 3)]
        zd_bound: i64,
    },
    /// The quadratic family, optionally written out as spec files.
    #[command(allow_negative_numbers = true)]
    Catalog {
        #[arg(long, value_delimiter = ',', default_value = "-1,2,-2,3,-3,5,-5,6,7")]
        c: Vec<i64>,
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        b: Vec<i64>,
        /// Also include the quaternions.
        #[arg(long)]
        quaternion: bool,
        /// Also include scaled multiplications on Z.
        #[arg(long, value_delimiter = ',')]
        scaled: Vec<i64>,
        #[arg(long)]
        out_dir: Option<String>,
    },
}

#[derive(Subcommand)]
pub enum ConstructCmd {
    /// Smallest dilator x with G∘x avoiding every multiplication given.
    Avoid {
        #[arg(long)]
        base: String,
        #[arg(long)]
        avoid: Vec<String>,
        #[arg(long = "G", visible_alias = "g")]
        g: String,
        #[arg(long, env = "ALIGNLAB_SEARCH_BOUND", default_value_t = DEFAULT_SEARCH_BOUND)]
        bound: i64,
    },
    /// Staged thick set avoiding the given multiplications.
    Thick {
        #[arg(long, required = true)]
        thick_for: Vec<String>,
        #[arg(long)]
        avoid: Vec<String>,
        #[arg(long)]
        stages: usize,
        #[arg(long, env = "ALIGNLAB_SEARCH_BOUND", default_value_t = DEFAULT_SEARCH_BOUND)]
        bound: i64,
    },
    /// Staged IP* set that is not syndetic.
    #[command(name = "ipstar-nonsyn")]
    IpstarNonsyn {
        #[arg(long, required = true)]
        mult: Vec<String>,
        #[arg(long)]
        stages: usize,
        #[arg(long, env = "ALIGNLAB_SEARCH_BOUND", default_value_t = DEFAULT_SEARCH_BOUND)]
        bound: i64,
        /// Also run the difference-set check over cube(window) (summary only).
        #[arg(long)]
        window: Option<i64>,
    },
    /// Generators whose FP set under A has no B-product triple.
    IpSep {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        n: usize,
        #[arg(long, env = "ALIGNLAB_SEARCH_BOUND", default_value_t = DEFAULT_SEARCH_BOUND)]
        bound: i64,
    },
    /// Generators whose solved product equations respect index order.
    IpOrder {
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: usize,
        #[arg(long, env = "ALIGNLAB_SEARCH_BOUND", default_value_t = DEFAULT_SEARCH_BOUND)]
        bound: i64,
    },
}

#[derive(Args)]
pub struct SetArgs {
    /// Set file, one vector per line.
    #[arg(long)]
    pub set: String,
    /// Multiplication spec; the additive group is used when omitted.
    #[arg(long)]
    pub mult: Option<String>,
}

#[derive(Subcommand)]
pub enum CheckCmd {
    Syndetic {
        #[command(flatten)]
        s: SetArgs,
        #[arg(long)]
        shifts: String,
        #[arg(long)]
        window: i64,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
    Thick {
        #[command(flatten)]
        s: SetArgs,
        #[arg(long = "F", visible_alias = "f")]
        f: String,
        #[arg(long = "box")]
        search_box: i64,
    },
    Psstar {
        #[command(flatten)]
        s: SetArgs,
        #[arg(long = "F", visible_alias = "f")]
        f: String,
        /// Dilators z range over cube(radius).
        #[arg(long)]
        radius: i64,
        /// Explicit samples x.
        #[arg(long, conflicts_with = "random")]
        samples: Option<String>,
        /// Draw this many samples from cube(sample-box) using --seed.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 50)]
        sample_box: i64,
    },
    Ipr {
        #[command(flatten)]
        s: SetArgs,
        #[arg(long)]
        r: usize,
        #[arg(long = "box")]
        gen_box: i64,
        #[arg(long, default_value_t = 1_000_000)]
        max_points: usize,
    },
    Density {
        #[command(flatten)]
        s: SetArgs,
        #[arg(long = "F", visible_alias = "f")]
        f: String,
        #[arg(long = "box")]
        sample_box: i64,
    },
}

#[derive(Subcommand)]
pub enum GenpolyCmd {
    Parse {
        expr: String,
    },
    Eval {
        expr: String,
        point: String,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: u32,
    },
    /// Certified return set {x in box : ||f(x)|| < eps}.
    #[command(allow_negative_numbers = true)]
    Scan {
        expr: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        lo: i64,
        #[arg(long)]
        hi: i64,
        /// Set file to write; undecided points go to <out>.straddles.
        #[arg(long)]
        out: String,
        #[arg(long, default_value_t = DEFAULT_BITS)]
        bits: u32,
        #[arg(long, default_value_t = MAX_BITS)]
        cap_bits: u32,
    },
    /// Finite-sum intersection with the return set.
    Fs {
        expr: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        gens: String,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    let out = Output { json: cli.json };
    match cli.cmd {
        Cmd::Ring(c) => ring::run(c, out),
        Cmd::Repr { spec, vector } => query::repr(&spec, &vector, out),
        Cmd::Align { a, b } => query::align(&a, &b, out),
        Cmd::Normalizer { spec, matrix } => query::normalizer(&spec, &matrix, out),
        Cmd::Centralizer { spec, matrix } => query::centralizer(&spec, &matrix, out),
        Cmd::Automorphism {
            spec,
            matrix,
            enumerate,
            opposite,
        } => query::automorphism(&spec, matrix.as_deref(), enumerate, opposite, out),
        Cmd::Preserves { spec, matrix, class } => query::preserves(&spec, &matrix, &class, out),
        Cmd::Construct(c) => construct::run(c, out),
        Cmd::Check(c) => check::run(c, cli.seed, out),
        Cmd::Genpoly(c) => poly::run(c, out),
        Cmd::Verify { certificate } => verify(&certificate, out),
    }
}

fn verify(path: &str, out: Output) -> CliResult<()> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    let c: cert::Certificate = spec::parse_doc(&text, path)?;
    let base = Path::new(path).parent().unwrap_or(Path::new("."));
    let v = cert::verify(&c, base)?;
    out.doc(&v)?;
    if v.verified {
        emit::note(format!("verified: {} certificate holds", v.claim));
        Ok(())
    } else {
        Err(Failure::Hypothesis(format!("{} certificate does not hold", v.claim)))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}
