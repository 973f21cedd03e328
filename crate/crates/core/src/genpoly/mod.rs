//! Constant-free generalized polynomials: parsing, printing and certified
//! evaluation of fractional parts and distances to the nearest integer.

mod interval;
mod parse;

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::largeness::{fs_set, FiniteSet, Verdict, WitnessReport};
use crate::linalg::Q;
use crate::points;

pub use interval::{eval_at, IntervalValue, DEFAULT_BITS, MAX_BITS};
pub use parse::parse;

/// A real constant appearing in a coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Int(BigInt),
    /// `digits / 10^scale`, `scale ≥ 1`.
    Dec { digits: BigInt, scale: u32 },
    Pi,
    E,
    Sqrt(u64),
    /// `k^(1/j)`.
    Root(u64, u32),
}

/// Expression tree. Every leaf is a linear form `c · x_k` with `c` a product
/// of atoms (empty product = 1), so `f(0) = 0` always holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Linear { coeff: Vec<Atom>, var: usize },
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Frac(Box<Expr>),
}

impl Expr {
    /// Tree depth, counting a leaf as 1; the expression lies in the
    /// generalized-polynomial class of that level.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Linear { .. } => 1,
            Expr::Add(a, b) | Expr::Mul(a, b) => 1 + a.depth().max(b.depth()),
            Expr::Frac(a) => 1 + a.depth(),
        }
    }

    /// One more than the largest variable index used.
    pub fn num_vars(&self) -> usize {
        match self {
            Expr::Linear { var, .. } => var + 1,
            Expr::Add(a, b) | Expr::Mul(a, b) => a.num_vars().max(b.num_vars()),
            Expr::Frac(a) => a.num_vars(),
        }
    }

    pub fn is_linear_leaf(&self) -> bool {
        matches!(self, Expr::Linear { .. })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Int(k) => write!(f, "{k}"),
            Atom::Dec { digits, scale } => {
                let neg = digits.sign() == num_bigint::Sign::Minus;
                let s = digits.magnitude().to_string();
                let scale = *scale as usize;
                let padded = if s.len() <= scale {
                    format!("{}{}", "0".repeat(scale + 1 - s.len()), s)
                } else {
                    s
                };
                let (int, frac) = padded.split_at(padded.len() - scale);
                write!(f, "{}{int}.{frac}", if neg { "-" } else { "" })
            }
            Atom::Pi => f.write_str("pi"),
            Atom::E => f.write_str("e"),
            Atom::Sqrt(k) => write!(f, "sqrt({k})"),
            Atom::Root(k, j) => write!(f, "root({k},{j})"),
        }
    }
}

fn var_name(i: usize) -> String {
    match i {
        0 => "n".into(),
        1 => "m".into(),
        _ => format!("x{}", i + 1),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Linear { coeff, var } => {
                for a in coeff {
                    write!(f, "{a}*")?;
                }
                f.write_str(&var_name(*var))
            }
            Expr::Add(a, b) => {
                write!(f, "{a} + ")?;
                if matches!(**b, Expr::Add(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Expr::Mul(a, b) => {
                if matches!(**a, Expr::Add(..)) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                f.write_str("*")?;
                if matches!(**b, Expr::Add(..) | Expr::Mul(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Expr::Frac(a) => write!(f, "[{a}]"),
        }
    }
}

/// Precision schedule for certified decisions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub start_bits: u32,
    pub cap_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            start_bits: DEFAULT_BITS,
            cap_bits: MAX_BITS,
        }
    }
}

impl Precision {
    fn levels(&self) -> impl Iterator<Item = u32> {
        let cap = self.cap_bits.min(MAX_BITS);
        let start = self.start_bits.clamp(1, cap);
        std::iter::successors(Some(start), move |&b| (b < cap).then(|| (b * 2).min(cap)))
    }
}

/// Enclosure of `f(x)`, doubling the precision while a fractional part
/// straddles an integer.
pub fn eval(f: &Expr, x: &[i64], bits: u32) -> Result<IntervalValue> {
    let prec = Precision {
        start_bits: bits,
        cap_bits: MAX_BITS.max(bits.min(MAX_BITS)),
    };
    let mut last = Error::Straddle { bits };
    for b in prec.levels() {
        match eval_at(f, x, b) {
            Ok(v) => return Ok(v),
            Err(e @ Error::Straddle { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Enclosure of `‖f(x)‖`, the distance to the nearest integer.
pub fn nearest_int_distance(f: &Expr, x: &[i64], bits: u32) -> Result<IntervalValue> {
    Ok(eval(f, x, bits)?.nearest_int_distance())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certified {
    Below,
    NotBelow,
    /// Undecided at the precision cap, or a fractional part straddled.
    Straddle,
}

/// Certifies `‖f(x)‖ < ε`.
pub fn certify_below(f: &Expr, x: &[i64], eps: &Q, prec: Precision) -> Result<Certified> {
    for b in prec.levels() {
        let v = match eval_at(f, x, b) {
            Ok(v) => v,
            Err(Error::Straddle { .. }) => continue,
            Err(e) => return Err(e),
        };
        let d = v.nearest_int_distance();
        if d.upper() < *eps {
            return Ok(Certified::Below);
        }
        if d.lower() >= *eps {
            return Ok(Certified::NotBelow);
        }
    }
    Ok(Certified::Straddle)
}

fn check_eps(eps: &Q) -> Result<()> {
    let half = Q::new(1.into(), 2.into());
    if *eps <= Q::from_integer(0.into()) || *eps > half {
        return Err(Error::InvalidInput("epsilon must lie in (0, 1/2]".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    /// Points with certified `‖f(x)‖ < ε`.
    pub members: FiniteSet,
    /// Points left undecided at the precision cap.
    pub straddles: Vec<Vec<i64>>,
    pub scanned: usize,
}

/// Largest `r` such that `cube(r)` and the origin lie in the box and hold no
/// straddle; `-1` when the box misses the origin.
fn faithful_radius(lo: i64, hi: i64, straddles: &[Vec<i64>]) -> i64 {
    let mut r = if lo <= 0 && hi >= 0 { (-lo).min(hi) } else { -1 };
    for s in straddles {
        r = r.min(points::sup_norm(s) - 1);
    }
    r
}

/// Every point of `[lo, hi]^dim` with certified `‖f(x)‖ < ε`.
pub fn return_set_scan(f: &Expr, eps: &Q, dim: usize, lo: i64, hi: i64) -> Result<ScanReport> {
    return_set_scan_with(f, eps, dim, lo, hi, Precision::default())
}

pub fn return_set_scan_with(f: &Expr, eps: &Q, dim: usize, lo: i64, hi: i64, prec: Precision) -> Result<ScanReport> {
    check_eps(eps)?;
    if dim < f.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: f.num_vars(),
            found: dim,
        });
    }
    let pts = points::box_points(dim, lo, hi);
    let verdicts: Vec<Certified> = pts
        .par_iter()
        .map(|x| certify_below(f, x, eps, prec))
        .collect::<Result<_>>()?;
    let mut members = Vec::new();
    let mut straddles = Vec::new();
    for (x, v) in pts.iter().zip(&verdicts) {
        match v {
            Certified::Below => members.push(x.clone()),
            Certified::Straddle => straddles.push(x.clone()),
            Certified::NotBelow => {}
        }
    }
    Ok(ScanReport {
        members: FiniteSet::new(dim, members)?.with_window(faithful_radius(lo, hi, &straddles)),
        straddles,
        scanned: pts.len(),
    })
}

/// Which elements of `FS(generators)` certify `‖f‖ < ε`.
pub fn fs_intersection_check(f: &Expr, eps: &Q, generators: &[Vec<i64>]) -> Result<WitnessReport> {
    check_eps(eps)?;
    let fs = fs_set(generators)?;
    if fs.dim() < f.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: f.num_vars(),
            found: fs.dim(),
        });
    }
    let mut below = Vec::new();
    let mut undecided = Vec::new();
    for x in fs.iter() {
        match certify_below(f, x, eps, Precision::default())? {
            Certified::Below => below.push(x.clone()),
            Certified::Straddle => undecided.push(x.clone()),
            Certified::NotBelow => {}
        }
    }
    let verdict = if !below.is_empty() {
        Verdict::Witnessed
    } else if undecided.is_empty() {
        Verdict::RefutedOnWindow
    } else {
        Verdict::Inconclusive
    };
    Ok(WitnessReport {
        property: "fs-intersection".into(),
        verdict,
        detail: format!("{} of {} sums certified below epsilon", below.len(), fs.len()),
        witness: below,
        failures: undecided,
        window: format!("FS of {} generator(s)", generators.len()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::largeness::Membership;

    fn rat(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn simple_evaluations() {
        let f = parse("[0.5*n]").unwrap();
        let v = eval(&f, &[3], 64).unwrap();
        assert!(v.is_exact());
        assert_eq!(v.lower(), rat(1, 2));
        let v = eval(&parse("[1*n]").unwrap(), &[7], 64).unwrap();
        assert_eq!((v.lower(), v.upper()), (rat(0, 1), rat(0, 1)));
        let d = nearest_int_distance(&parse("[0.5*n]").unwrap(), &[1], 64).unwrap();
        assert_eq!((d.lower(), d.upper()), (rat(1, 2), rat(1, 2)));
        let d = nearest_int_distance(&parse("sqrt(2)*n").unwrap(), &[0], 64).unwrap();
        assert!(d.is_exact() && d.upper() == rat(0, 1));
    }

    #[test]
    fn straddle_is_reported() {
        // [n] at an integer is exact; [sqrt(4)*n] encloses exactly as well
        let f = parse("[sqrt(4)*n]").unwrap();
        assert!(eval(&f, &[3], 64).unwrap().is_exact());
        // 0.1 is not dyadic, so [10*0.1*n] straddles at every precision
        let f = parse("[10*0.1*n]").unwrap();
        assert!(matches!(eval(&f, &[1], 64), Err(Error::Straddle { bits: 2048 })));
    }

    #[test]
    fn scan_trivia() {
        let f = parse("sqrt(2)*n").unwrap();
        let r = return_set_scan(&f, &rat(1, 2), 1, 1, 50).unwrap();
        assert_eq!(r.members.len(), 50);
        let r = return_set_scan(&f, &rat(1, 100), 1, -3, 3).unwrap();
        assert!(r.members.contains(&[0]));
        assert!(return_set_scan(&f, &rat(0, 1), 1, 1, 5).is_err());
    }

    #[test]
    fn fs_checks() {
        let f = parse("0.25*n").unwrap();
        let r = fs_intersection_check(&f, &rat(1, 10), &[vec![4], vec![8]]).unwrap();
        assert_eq!(r.verdict, Verdict::Witnessed);
        assert_eq!(r.witness.len(), 3);
        let r = fs_intersection_check(&f, &rat(1, 10), &[vec![2]]).unwrap();
        assert_eq!(r.verdict, Verdict::RefutedOnWindow);
    }

    #[test]
    fn scan_windows_cover_only_decided_boxes() {
        assert_eq!(faithful_radius(-5, 9, &[]), 5);
        assert_eq!(faithful_radius(1, 9, &[]), -1);
        assert_eq!(faithful_radius(-9, 9, &[vec![3, -4]]), 3);
        let f = parse("sqrt(2)*n").unwrap();
        let r = return_set_scan(&f, &rat(1, 100), 1, 1, 200).unwrap();
        assert_eq!(r.members.membership(&[-70]), None);
        assert_eq!(r.members.membership(&[70]), Some(true));
    }
}
