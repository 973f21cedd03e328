use std::collections::{BTreeSet, HashSet};

use crate::algebra::Multiplication;
use crate::error::{check_dim, Error, Result};
use crate::largeness::FiniteSet;
use crate::linalg::{qvec, to_i64_vec, RatMatrix, Q};
use crate::points;
use crate::structure::are_aligned;

use super::{reduce_fraction, to_fraction_matrix, widen, IMat, DEFAULT_SEARCH_BOUND};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvoidingViolation {
    pub z: Vec<i64>,
    /// `d` linearly independent elements of `G` whose dilates by `z` lie in `A`.
    pub f: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvoidingReport {
    pub avoiding: bool,
    /// Number of distinct nonzero integral `z` solving `f ⊙ z = a` for some `f ∈ G`, `a ∈ A`.
    pub candidates: usize,
    /// Largest `|{f ∈ G : f ⊙ z ∈ A}|` over the candidates.
    pub max_incidence: usize,
    pub violation: Option<AvoidingViolation>,
}

fn product(m: &Multiplication, x: &[i64], y: &[i64]) -> Result<Option<Vec<i64>>> {
    if m.is_integral() {
        return m.mul_int(x, y).map(Some);
    }
    Ok(to_i64_vec(&m.multiply(&qvec(x), &qvec(y))?))
}

/// Decides whether `A` is `(G, ⊙)`-avoiding.
///
/// Any `z` with `f ⊙ z ∈ A` solves `φ(f) z = a` for some `f ∈ G`, `a ∈ A`, so
/// only finitely many `z` need checking. For such `z` let
/// `I_z = {f ∈ G : f ⊙ z ∈ A}`; a subset of `G` in general position meeting
/// `A` in `d` points exists exactly when `I_z` has rank `d`.
pub fn verify_avoiding(a: &FiniteSet, g: &FiniteSet, other: &Multiplication) -> Result<AvoidingReport> {
    let d = other.dim();
    check_dim(d, a.dim())?;
    check_dim(d, g.dim())?;
    if g.iter().any(|f| f.iter().all(|&c| c == 0)) {
        return Err(Error::InvalidInput("G must not contain 0".into()));
    }
    let mut cands: BTreeSet<Vec<i64>> = BTreeSet::new();
    for f in g.iter() {
        let inv = other.left_rep(&qvec(f))?.inverse()?;
        for p in a.iter() {
            let z = inv.mul_vec(&qvec(p));
            if let Some(z) = to_i64_vec(&z) {
                if z.iter().any(|&c| c != 0) {
                    cands.insert(z);
                }
            }
        }
    }
    let mut report = AvoidingReport {
        avoiding: true,
        candidates: cands.len(),
        max_incidence: 0,
        violation: None,
    };
    for z in &cands {
        let mut hits = Vec::new();
        for f in g.iter() {
            if let Some(p) = product(other, f, z)? {
                if a.contains(&p) {
                    hits.push(f.clone());
                }
            }
        }
        report.max_incidence = report.max_incidence.max(hits.len());
        if hits.len() < d {
            continue;
        }
        // greedily collect independent rows
        let mut chosen: Vec<Vec<i64>> = Vec::new();
        for h in &hits {
            let mut trial = chosen.clone();
            trial.push(h.clone());
            let rows: Vec<Vec<Q>> = trial.iter().map(|r| qvec(r)).collect();
            if RatMatrix::from_rows(rows)?.rank() == trial.len() {
                chosen = trial;
                if chosen.len() == d {
                    break;
                }
            }
        }
        if chosen.len() == d && report.violation.is_none() {
            report.avoiding = false;
            report.violation = Some(AvoidingViolation { z: z.clone(), f: chosen });
        }
    }
    Ok(report)
}

/// The maps `T_{⊙,f,g} = φ(f)^{-1} ψ(g)` for each `⊙`, deduplicated.
/// A dilator `x` is admissible iff `T ↦ Tx` is injective on every family.
pub(crate) struct DilatorFilter {
    families: Vec<Vec<(IMat, i128)>>,
}

impl DilatorFilter {
    pub(crate) fn new(base: &Multiplication, others: &[Multiplication], g: &FiniteSet) -> Result<Self> {
        let psi: Vec<RatMatrix> = g
            .iter()
            .map(|x| base.left_rep(&qvec(x)))
            .collect::<Result<_>>()?;
        let mut families = Vec::with_capacity(others.len());
        for o in others {
            let mut seen = HashSet::new();
            let mut fam = Vec::new();
            for f in g.iter() {
                let inv = o.left_rep(&qvec(f))?.inverse()?;
                for p in &psi {
                    let t = to_fraction_matrix(&inv.try_mul(p)?)?;
                    if seen.insert(t.clone()) {
                        fam.push(t);
                    }
                }
            }
            families.push(fam);
        }
        Ok(DilatorFilter { families })
    }

    pub(crate) fn admits(&self, x: &[i64]) -> Result<bool> {
        let xw = widen(x);
        for fam in &self.families {
            let mut images = HashSet::with_capacity(fam.len());
            for (m, den) in fam {
                let key = reduce_fraction(m.mul_vec(&xw)?, *den);
                if !images.insert(key) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub(crate) fn check_not_aligned(base: &Multiplication, others: &[Multiplication]) -> Result<()> {
    for (i, o) in others.iter().enumerate() {
        check_dim(base.dim(), o.dim())?;
        if are_aligned(base, o)?.is_aligned() {
            return Err(Error::Hypothesis(format!(
                "multiplication #{} to avoid is aligned with the dilating multiplication",
                i + 1
            )));
        }
    }
    Ok(())
}

/// The first `x` in sup-norm then lexicographic order for which `G ∘ x` is
/// `(G, ⊙)`-avoiding for every `⊙` in `others`, chosen outside the null spaces
/// of all nonzero differences `T_{⊙,f,g} − T_{⊙,f',g'}`.
pub fn find_avoiding_dilator(base: &Multiplication, others: &[Multiplication], g: &FiniteSet) -> Result<Vec<i64>> {
    find_avoiding_dilator_within(base, others, g, DEFAULT_SEARCH_BOUND)
}

pub fn find_avoiding_dilator_within(
    base: &Multiplication,
    others: &[Multiplication],
    g: &FiniteSet,
    bound: i64,
) -> Result<Vec<i64>> {
    let d = base.dim();
    check_dim(d, g.dim())?;
    if g.is_empty() {
        return Err(Error::InvalidInput("G must be nonempty".into()));
    }
    if g.iter().any(|f| f.iter().all(|&c| c == 0)) {
        return Err(Error::InvalidInput("G must not contain 0".into()));
    }
    base.require_proper()?;
    check_not_aligned(base, others)?;
    let filter = DilatorFilter::new(base, others, g)?;
    for r in 1..=bound {
        for x in points::shell(d, r) {
            if !filter.admits(&x)? {
                continue;
            }
            let gx = dilate(base, g, &x)?;
            for o in others {
                let rep = verify_avoiding(&gx, g, o)?;
                assert!(rep.avoiding, "dilator outside every null space failed verification");
            }
            return Ok(x);
        }
    }
    Err(Error::SearchExhausted {
        stage: 1,
        bound,
        constraint: "no dilator outside the null spaces of the T-differences".into(),
    })
}

/// `G ∘ x`.
pub(crate) fn dilate(m: &Multiplication, g: &FiniteSet, x: &[i64]) -> Result<FiniteSet> {
    let pts = g.iter().map(|f| m.mul_int(f, x)).collect::<Result<Vec<_>>>()?;
    FiniteSet::new(m.dim(), pts)
}
