use std::collections::HashSet;

use crate::algebra::Multiplication;
use crate::error::{check_dim, Error, Result};
use crate::points;

use super::{narrow, widen, IMat, IntRep};

/// Generators `x_1..x_n` built by the inductive null-space-then-scale procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpSequence {
    pub generators: Vec<Vec<i64>>,
    /// The unscaled candidate chosen at each step.
    pub candidates: Vec<Vec<i64>>,
    /// The scale `c` with `x_n = c · candidate_n`.
    pub scale_log: Vec<i64>,
}

/// 1-based indices of a subset mask.
pub fn subset_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

/// `x_α` for every nonempty mask over the generators, increasing index order.
/// Index 0 is unused.
fn products(rep: &IntRep, gens: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let n = gens.len();
    let mut out = vec![Vec::new(); 1 << n];
    for mask in 1usize..(1 << n) {
        let top = usize::BITS - 1 - mask.leading_zeros();
        let rest = mask & !(1 << top);
        out[mask] = if rest == 0 {
            gens[top as usize].clone()
        } else {
            rep.mul(&out[rest], &gens[top as usize])?
        };
    }
    Ok(out)
}

/// Representation matrices of `x_α`; the empty mask maps to the identity.
fn rep_table(prods: &[Vec<i128>], d: usize, f: impl Fn(&[i128]) -> Result<IMat>) -> Result<Vec<IMat>> {
    let mut out = Vec::with_capacity(prods.len());
    out.push(IMat::identity(d));
    for p in &prods[1..] {
        out.push(f(p)?);
    }
    Ok(out)
}

fn hypotheses(ma: &Multiplication, mb: &Multiplication) -> Result<usize> {
    let d = ma.dim();
    check_dim(d, mb.dim())?;
    ma.require_proper()?;
    mb.require_proper()?;
    if mb == ma {
        return Err(Error::Hypothesis("the two multiplications coincide".into()));
    }
    if *mb == ma.opposite() {
        return Err(Error::Hypothesis("the second multiplication is the opposite of the first".into()));
    }
    Ok(d)
}

struct Tables {
    prods: Vec<Vec<i128>>,
    psi: Vec<IMat>,
    phi: Vec<IMat>,
    phir: Vec<IMat>,
}

impl Tables {
    fn new(ra: &IntRep, rb: &IntRep, d: usize, gens: &[Vec<i128>]) -> Result<Self> {
        let prods = products(ra, gens)?;
        Ok(Tables {
            psi: rep_table(&prods, d, |x| ra.left(x))?,
            phi: rep_table(&prods, d, |x| rb.left(x))?,
            phir: rep_table(&prods, d, |x| rb.right(x))?,
            prods,
        })
    }
}

/// Statements (1)–(3) of the separating induction for the current generators:
/// no `E`, `F`, `F_r`, `G` or `G_r` equation holds.
fn separating_state_ok(ra: &IntRep, rb: &IntRep, d: usize, t: &Tables) -> Result<bool> {
    let full = t.prods.len();
    let values: HashSet<&Vec<i128>> = t.prods[1..].iter().collect();
    for a in 1..full {
        for b in 1..full {
            if values.contains(&rb.mul(&t.prods[a], &t.prods[b])?) {
                return Ok(false);
            }
        }
    }
    let psis: HashSet<&IMat> = t.psi.iter().collect();
    for a in 1..full {
        for b in 0..full {
            if psis.contains(&t.phi[a].mul(&t.psi[b])?) || psis.contains(&t.phir[a].mul(&t.psi[b])?) {
                return Ok(false);
            }
        }
    }
    let basis: Vec<Vec<i128>> = (0..d)
        .map(|i| (0..d).map(|j| i128::from(i == j)).collect())
        .collect();
    for a in 0..full {
        let mut g = true;
        let mut gr = true;
        for e in &basis {
            let rhs = t.psi[a].mul(&ra.left(e)?)?;
            g &= rb.left(e)? == rhs;
            gr &= rb.right(e)? == rhs;
        }
        if g || gr {
            return Ok(false);
        }
    }
    Ok(true)
}

fn in_separating_null(ra: &IntRep, rb: &IntRep, t: &Tables, x: &[i128]) -> Result<bool> {
    let full = t.prods.len();
    for a in 0..full {
        for b in 0..full {
            for c in 0..full {
                if a != 0 {
                    for lhs in [&t.phi[a], &t.phir[a]] {
                        if lhs.mul(&t.psi[b])?.sub(&t.psi[c])?.mul_vec(x)?.iter().all(|&v| v == 0) {
                            return Ok(true);
                        }
                    }
                }
                let u = t.psi[a].mul_vec(x)?;
                let rhs = t.psi[c].mul(&ra.left(x)?)?;
                for left in [rb.left(&u)?, rb.right(&u)?] {
                    if left.mul(&t.psi[b])?.sub(&rhs)?.is_zero() {
                        return Ok(true);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Generators `x_1..x_n` such that `FP_{mA}(x_1..x_n)` contains no solution
/// of `a ⊙ b = c` for `⊙ = mB`.
///
/// Each step takes the first candidate outside the finitely many null spaces
/// that would make an equation homogeneous in `x_n` true, then the least
/// scale `c ≥ 1` for which every equation involving `x_n` is false.
pub fn build_ip_separating(ma: &Multiplication, mb: &Multiplication, n: usize, bound: i64) -> Result<IpSequence> {
    let d = hypotheses(ma, mb)?;
    let ra = IntRep::new(ma)?;
    let rb = IntRep::new(mb)?;
    build_inductive(
        d,
        n,
        bound,
        |gens| Tables::new(&ra, &rb, d, gens),
        |t, x| in_separating_null(&ra, &rb, t, x),
        |t| separating_state_ok(&ra, &rb, d, t),
    )
}

fn build_inductive(
    d: usize,
    n: usize,
    bound: i64,
    tables: impl Fn(&[Vec<i128>]) -> Result<Tables>,
    in_null: impl Fn(&Tables, &[i128]) -> Result<bool>,
    state_ok: impl Fn(&Tables) -> Result<bool>,
) -> Result<IpSequence> {
    if n == 0 || n > 16 {
        return Err(Error::InvalidInput("sequence length must be between 1 and 16".into()));
    }
    let mut seq = IpSequence {
        generators: Vec::new(),
        candidates: Vec::new(),
        scale_log: Vec::new(),
    };
    let mut gens: Vec<Vec<i128>> = Vec::new();
    for step in 1..=n {
        let t = tables(&gens)?;
        let mut chosen = None;
        'search: for r in 1..=bound {
            for cand in points::shell(d, r) {
                let x = widen(&cand);
                if in_null(&t, &x)? {
                    continue;
                }
                for c in 1..=bound {
                    let scaled: Vec<i128> = x.iter().map(|v| v * c as i128).collect();
                    gens.push(scaled);
                    let ok = state_ok(&tables(&gens)?)?;
                    let scaled = gens.pop().expect("just pushed");
                    if ok {
                        chosen = Some((cand, c, scaled));
                        break 'search;
                    }
                }
                return Err(Error::SearchExhausted {
                    stage: step,
                    bound,
                    constraint: "no scale makes every non-homogeneous equation false".into(),
                });
            }
        }
        let Some((cand, c, x)) = chosen else {
            return Err(Error::SearchExhausted {
                stage: step,
                bound,
                constraint: "every candidate lies in an excluded null space".into(),
            });
        };
        seq.generators.push(narrow(&x)?);
        seq.candidates.push(cand);
        seq.scale_log.push(c);
        gens.push(x);
    }
    Ok(seq)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationVerification {
    pub ok: bool,
    pub triples_checked: usize,
    /// Masks `(α, β, γ)` with `x_α ⊙ x_β = x_γ`.
    pub counterexample: Option<(u32, u32, u32)>,
}

/// Exhaustive over all nonempty `α, β, γ`: `x_α ⊙ x_β ≠ x_γ`, where `x_α` is
/// the increasing-order `mA`-product.
pub fn verify_ip_separating(ma: &Multiplication, mb: &Multiplication, gens: &[Vec<i64>]) -> Result<SeparationVerification> {
    if gens.is_empty() || gens.len() > 16 {
        return Err(Error::InvalidInput("between 1 and 16 generators are supported".into()));
    }
    let ra = IntRep::new(ma)?;
    let rb = IntRep::new(mb)?;
    let g: Vec<Vec<i128>> = gens.iter().map(|x| widen(x)).collect();
    let prods = products(&ra, &g)?;
    let full = prods.len();
    let mut out = SeparationVerification {
        ok: true,
        triples_checked: 0,
        counterexample: None,
    };
    for a in 1..full {
        for b in 1..full {
            let ab = rb.mul(&prods[a], &prods[b])?;
            for (c, pc) in prods.iter().enumerate().skip(1) {
                out.triples_checked += 1;
                if ab == *pc && out.counterexample.is_none() {
                    out.ok = false;
                    out.counterexample = Some((a as u32, b as u32, c as u32));
                }
            }
        }
    }
    Ok(out)
}

fn order_tables(r: &IntRep, d: usize, gens: &[Vec<i128>]) -> Result<Tables> {
    let prods = products(r, gens)?;
    Ok(Tables {
        psi: rep_table(&prods, d, |x| r.left(x))?,
        phi: Vec::new(),
        phir: rep_table(&prods, d, |x| r.right(x))?,
        prods,
    })
}

/// `max α < min β` for masks.
fn precedes(a: usize, b: usize) -> bool {
    let max_a = usize::BITS - 1 - a.leading_zeros();
    let min_b = b.trailing_zeros();
    max_a < min_b
}

fn order_state_ok(r: &IntRep, t: &Tables) -> Result<bool> {
    let full = t.prods.len();
    for a in 1..full {
        for b in 1..full {
            if precedes(a, b) {
                continue;
            }
            let ab = r.mul(&t.prods[a], &t.prods[b])?;
            if t.prods[1..].contains(&ab) {
                return Ok(false);
            }
        }
    }
    let psis: HashSet<&IMat> = t.psi.iter().collect();
    for a in 0..full {
        for b in 1..full {
            if psis.contains(&t.psi[a].mul(&t.phir[b])?) {
                return Ok(false);
            }
        }
    }
    for a in 1..full {
        for b in 1..full {
            if t.psi[a].mul(&t.psi[b])? == t.psi[0] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn in_order_null(r: &IntRep, t: &Tables, x: &[i128]) -> Result<bool> {
    let full = t.prods.len();
    let rx = r.right(x)?;
    let lx = r.left(x)?;
    for a in 0..full {
        for b in 0..full {
            if b != 0 {
                for c in 0..full {
                    if t.psi[a].mul(&t.phir[b])?.sub(&t.psi[c])?.mul_vec(x)?.iter().all(|&v| v == 0) {
                        return Ok(true);
                    }
                }
            }
            let lhs = t.psi[a].mul(&rx)?.mul(&t.phir[b])?;
            for c in 0..full {
                if lhs.sub(&t.psi[c].mul(&lx)?)?.is_zero() {
                    return Ok(true);
                }
            }
            if a != 0 && b != 0 && t.psi[a].mul(&t.psi[b])?.sub(&t.psi[0])?.mul_vec(x)?.iter().all(|&v| v == 0) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Generators such that `x_α ∘ x_β = x_γ` forces `max α < min β`.
pub fn build_ip_order_separating(m: &Multiplication, n: usize, bound: i64) -> Result<IpSequence> {
    m.require_proper()?;
    if m.is_commutative() {
        return Err(Error::Hypothesis("the multiplication is commutative".into()));
    }
    let d = m.dim();
    let r = IntRep::new(m)?;
    build_inductive(
        d,
        n,
        bound,
        |gens| order_tables(&r, d, gens),
        |t, x| in_order_null(&r, t, x),
        |t| order_state_ok(&r, t),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderVerification {
    pub ok: bool,
    pub triples_checked: usize,
    /// Every `(α, β, γ)` with `x_α ∘ x_β = x_γ`.
    pub solved: Vec<(u32, u32, u32)>,
}

/// Exhaustive: every solved `x_α ∘ x_β = x_γ` has `max α < min β`.
pub fn verify_ip_order_separating(m: &Multiplication, gens: &[Vec<i64>]) -> Result<OrderVerification> {
    if gens.is_empty() || gens.len() > 16 {
        return Err(Error::InvalidInput("between 1 and 16 generators are supported".into()));
    }
    let r = IntRep::new(m)?;
    let g: Vec<Vec<i128>> = gens.iter().map(|x| widen(x)).collect();
    let prods = products(&r, &g)?;
    let full = prods.len();
    let mut out = OrderVerification {
        ok: true,
        triples_checked: 0,
        solved: Vec::new(),
    };
    for a in 1..full {
        for b in 1..full {
            let ab = r.mul(&prods[a], &prods[b])?;
            for (c, pc) in prods.iter().enumerate().skip(1) {
                out.triples_checked += 1;
                if ab == *pc {
                    out.solved.push((a as u32, b as u32, c as u32));
                    if !precedes(a, b) {
                        out.ok = false;
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{gaussian, quadratic, quaternion, scaled_z};

    #[test]
    fn scaled_z_examples() {
        let one = scaled_z(1).unwrap();
        let two = scaled_z(2).unwrap();
        let v = verify_ip_separating(&one, &two, &[vec![3], vec![5], vec![7]]).unwrap();
        assert!(v.ok);
        assert_eq!(v.triples_checked, 343);
        let s = build_ip_separating(&one, &two, 1, 100).unwrap();
        assert_eq!(s.generators.len(), 1);
        let x = &s.generators[0];
        assert_ne!(two.mul_int(x, x).unwrap(), *x);
        let s = build_ip_separating(&one, &two, 3, 100).unwrap();
        assert!(verify_ip_separating(&one, &two, &s.generators).unwrap().ok);
    }

    #[test]
    fn hypothesis_gates() {
        let g = gaussian();
        assert!(matches!(build_ip_separating(&g, &g, 2, 10), Err(Error::Hypothesis(_))));
        let h = quaternion();
        assert!(matches!(build_ip_separating(&h, &h.opposite(), 2, 10), Err(Error::Hypothesis(_))));
        assert!(matches!(build_ip_order_separating(&g, 2, 10), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn separating_gaussian_vs_root_two() {
        let s = build_ip_separating(&gaussian(), &quadratic(0, 2), 3, 1000).unwrap();
        assert!(verify_ip_separating(&gaussian(), &quadratic(0, 2), &s.generators).unwrap().ok);
    }

    #[test]
    fn order_separating_small() {
        let h = quaternion();
        let s = build_ip_order_separating(&h, 2, 1000).unwrap();
        let v = verify_ip_order_separating(&h, &s.generators).unwrap();
        assert!(v.ok);
        assert_eq!(v.solved, vec![(1, 2, 3)]);
    }

    #[test]
    fn detects_counterexample() {
        let one = scaled_z(1).unwrap();
        let two = scaled_z(2).unwrap();
        // 2·1·1 = 2
        let v = verify_ip_separating(&one, &two, &[vec![1], vec![2]]).unwrap();
        assert!(!v.ok);
        assert_eq!(subset_indices(0b101), vec![1, 3]);
    }
}
