use std::collections::HashMap;

use crate::algebra::Multiplication;
use crate::error::{check_dim, Error, Result};
use crate::largeness::FiniteSet;
use crate::points::{self, norm_sq};

use super::avoiding::{check_not_aligned, dilate, verify_avoiding, DilatorFilter};
use super::{widen, IntRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StagedKind {
    /// `‖H_n‖_min > n ‖H_{n−1}‖_max`, each `H_n` avoiding `cube(n)`-dilates.
    ThickAvoiding,
    /// `‖cube(2n) ∘_n x_n‖_min > n` and `‖H_n‖_min > 2 ‖H_{n−1}‖_max`.
    IpStarNonSyndetic,
}

/// Squared Euclidean extremes of one stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormRecord {
    pub min_sq: i128,
    pub max_sq: i128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    pub n: usize,
    /// Index into [`StagedSet::mults`] of the multiplication `∘_n`.
    pub mult_index: usize,
    pub x: Vec<i64>,
    /// `H_n = cube(n) ∘_n x_n`.
    pub h: FiniteSet,
}

/// A truncated staged construction `H_1, …, H_N` with its norm log.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagedSet {
    pub kind: StagedKind,
    pub dim: usize,
    pub mults: Vec<Multiplication>,
    pub avoid: Vec<Multiplication>,
    pub stages: Vec<Stage>,
    pub norm_log: Vec<NormRecord>,
}

fn extremes(s: &FiniteSet) -> NormRecord {
    let mut min_sq = i128::MAX;
    let mut max_sq = 0;
    for p in s.iter() {
        let v = norm_sq(p);
        min_sq = min_sq.min(v);
        max_sq = max_sq.max(v);
    }
    NormRecord { min_sq, max_sq }
}

fn sq(n: usize) -> i128 {
    (n as i128) * (n as i128)
}

impl StagedSet {
    pub fn union(&self) -> FiniteSet {
        FiniteSet::new(self.dim, self.stages.iter().flat_map(|s| s.h.iter().cloned())).expect("consistent dimension")
    }

    /// Re-derives every `H_n` from `x_n` and re-checks the norm conditions from
    /// the raw sets, ignoring the stored log.
    pub fn check_invariants(&self) -> Result<bool> {
        let mut prev: Option<NormRecord> = None;
        for (i, st) in self.stages.iter().enumerate() {
            let n = i + 1;
            if st.n != n || st.mult_index >= self.mults.len() {
                return Ok(false);
            }
            let m = &self.mults[st.mult_index];
            let cube = FiniteSet::new(self.dim, points::cube(self.dim, n as i64))?;
            if dilate(m, &cube, &st.x)? != st.h {
                return Ok(false);
            }
            let ext = extremes(&st.h);
            if self.norm_log.get(i) != Some(&ext) {
                return Ok(false);
            }
            match self.kind {
                StagedKind::ThickAvoiding => {
                    if let Some(p) = prev {
                        if ext.min_sq <= sq(n) * p.max_sq {
                            return Ok(false);
                        }
                    }
                    let checked = self.stage_is_avoiding(st)?;
                    if !checked {
                        return Ok(false);
                    }
                }
                StagedKind::IpStarNonSyndetic => {
                    if let Some(p) = prev {
                        if ext.min_sq <= 4 * p.max_sq {
                            return Ok(false);
                        }
                    }
                    let big = FiniteSet::new(self.dim, points::cube(self.dim, 2 * n as i64))?;
                    if extremes(&dilate(m, &big, &st.x)?).min_sq <= sq(n) {
                        return Ok(false);
                    }
                }
            }
            prev = Some(ext);
        }
        Ok(true)
    }

    /// Whether `H_n` is `(cube(n), ⊙)`-avoiding for every `⊙` to avoid.
    pub fn stage_is_avoiding(&self, st: &Stage) -> Result<bool> {
        let cube = FiniteSet::new(self.dim, points::cube(self.dim, st.n as i64))?;
        for o in &self.avoid {
            if !verify_avoiding(&st.h, &cube, o)?.avoiding {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_mults(mults: &[Multiplication], what: &str) -> Result<usize> {
    let first = mults
        .first()
        .ok_or_else(|| Error::InvalidInput(format!("{what} must be nonempty")))?;
    let d = first.dim();
    for m in mults {
        check_dim(d, m.dim())?;
        m.require_proper()?;
        IntRep::new(m)?;
    }
    Ok(d)
}

/// Smallest radius `r` for which some `x` of sup-norm `r` could satisfy
/// `‖cube(n) ∘ x‖²_min > threshold`, using `‖ψ(f)x‖² ≤ ‖ψ(f)‖_F² d r²`.
fn first_radius(m: &Multiplication, d: usize, n: usize, threshold: i128) -> Result<i64> {
    let rep = IntRep::new(m)?;
    let mut fro = i128::MAX;
    for f in points::cube(d, n as i64) {
        fro = fro.min(rep.left(&widen(&f))?.frobenius_sq()?);
    }
    let per = fro.checked_mul(d as i128).ok_or(Error::Overflow)?;
    let mut r: i64 = ((threshold / per.max(1)) as f64).sqrt().floor() as i64;
    r = r.max(1);
    while r > 1 && per * sq(r as usize - 1) > threshold {
        r -= 1;
    }
    while per * sq(r as usize) <= threshold {
        r += 1;
    }
    Ok(r)
}

/// Stages `n = 1..N` with `H_n = cube(n) ∘_n x_n`, `∘_n` cycling through
/// `thick_for`, each `H_n` avoiding `cube(n)`-dilates for every multiplication
/// in `avoid`, and `‖H_n‖_min > n ‖H_{n−1}‖_max` in Euclidean norm.
pub fn build_thick_avoiding(
    thick_for: &[Multiplication],
    avoid: &[Multiplication],
    stages: usize,
    bound: i64,
) -> Result<StagedSet> {
    let d = check_mults(thick_for, "thick_for")?;
    if stages == 0 {
        return Err(Error::InvalidInput("at least one stage is required".into()));
    }
    for o in avoid {
        check_dim(d, o.dim())?;
        o.require_proper()?;
    }
    for t in thick_for {
        check_not_aligned(t, avoid)?;
    }
    let mut out = StagedSet {
        kind: StagedKind::ThickAvoiding,
        dim: d,
        mults: thick_for.to_vec(),
        avoid: avoid.to_vec(),
        stages: Vec::new(),
        norm_log: Vec::new(),
    };
    for n in 1..=stages {
        let idx = (n - 1) % thick_for.len();
        let m = &thick_for[idx];
        let cube = FiniteSet::new(d, points::cube(d, n as i64))?;
        let filter = DilatorFilter::new(m, avoid, &cube)?;
        let threshold = match out.norm_log.last() {
            Some(p) => sq(n).checked_mul(p.max_sq).ok_or(Error::Overflow)?,
            None => 0,
        };
        let start = first_radius(m, d, n, threshold)?;
        let found = search(d, start, bound, |x| {
            let h = dilate(m, &cube, x)?;
            if extremes(&h).min_sq <= threshold || !filter.admits(x)? {
                return Ok(None);
            }
            Ok(Some(h))
        })?;
        let Some((x, h)) = found else {
            return Err(Error::SearchExhausted {
                stage: n,
                bound,
                constraint: format!("norm growth ‖H_{n}‖² > {threshold} with the avoidance condition"),
            });
        };
        let stage = Stage { n, mult_index: idx, x, h };
        assert!(out.stage_is_avoiding(&stage)?, "stage {n} failed the avoidance verifier");
        out.norm_log.push(extremes(&stage.h));
        out.stages.push(stage);
    }
    Ok(out)
}

/// Stages with `‖cube(2n) ∘_n x_n‖_min > n` and `‖H_n‖_min > 2 ‖H_{n−1}‖_max`,
/// `∘_n` cycling through `mults`.
pub fn build_ipstar_nonsyndetic(mults: &[Multiplication], stages: usize, bound: i64) -> Result<StagedSet> {
    let d = check_mults(mults, "mults")?;
    if stages == 0 {
        return Err(Error::InvalidInput("at least one stage is required".into()));
    }
    let mut out = StagedSet {
        kind: StagedKind::IpStarNonSyndetic,
        dim: d,
        mults: mults.to_vec(),
        avoid: Vec::new(),
        stages: Vec::new(),
        norm_log: Vec::new(),
    };
    for n in 1..=stages {
        let idx = (n - 1) % mults.len();
        let m = &mults[idx];
        let cube = FiniteSet::new(d, points::cube(d, n as i64))?;
        let big = FiniteSet::new(d, points::cube(d, 2 * n as i64))?;
        let threshold = match out.norm_log.last() {
            Some(p) => p.max_sq.checked_mul(4).ok_or(Error::Overflow)?,
            None => 0,
        };
        let start = first_radius(m, d, n, threshold)?;
        let found = search(d, start, bound, |x| {
            let h = dilate(m, &cube, x)?;
            if extremes(&h).min_sq <= threshold || extremes(&dilate(m, &big, x)?).min_sq <= sq(n) {
                return Ok(None);
            }
            Ok(Some(h))
        })?;
        let Some((x, h)) = found else {
            return Err(Error::SearchExhausted {
                stage: n,
                bound,
                constraint: format!("norm conditions ‖H_{n}‖² > {threshold} and ‖cube({}) ∘ x‖² > {}", 2 * n, sq(n)),
            });
        };
        out.norm_log.push(extremes(&h));
        out.stages.push(Stage { n, mult_index: idx, x, h });
    }
    Ok(out)
}

fn search(
    d: usize,
    start: i64,
    bound: i64,
    mut accept: impl FnMut(&[i64]) -> Result<Option<FiniteSet>>,
) -> Result<Option<(Vec<i64>, FiniteSet)>> {
    for r in start..=bound {
        for x in points::shell(d, r) {
            if let Some(h) = accept(&x)? {
                return Ok(Some((x, h)));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceReport {
    /// Every incidence lies in a single stage `n` with `n < ‖x‖`, and no stage
    /// at or beyond the threshold `N(x)` contributes.
    pub ok: bool,
    pub shifts_checked: usize,
    /// Largest `|B ∩ (B − x)|` seen.
    pub max_intersection: usize,
    /// Same-stage incidences all satisfy `n < ‖x‖`.
    pub same_stage_ok: bool,
    /// Cross-stage incidences all satisfy `‖x‖ > ‖H_lo‖_max` and
    /// `2‖x‖ > ‖H_hi‖_min`, the bounds forced by the doubling condition.
    pub cross_bound_ok: bool,
    /// `(x, n, m)` with `h ∈ H_n` and `h + x ∈ H_m`, `n ≠ m`.
    pub cross_stage: Vec<(Vec<i64>, usize, usize)>,
    /// `(x, n, m)` with `max(n, m) ≥ N(x)`, where `N(x)` is the least stage
    /// with `N ≥ ‖x‖` and `‖H_N‖_min > ‖x‖`.
    pub beyond_threshold: Vec<(Vec<i64>, usize, usize)>,
}

/// For every nonzero `x` in `cube(window)`, enumerates `h, h + x ∈ B` and
/// classifies each incidence against the stage norms.
pub fn verify_difference_bound(b: &StagedSet, window: i64) -> Result<DifferenceReport> {
    let mut stage_of: HashMap<&[i64], usize> = HashMap::new();
    for st in &b.stages {
        for p in st.h.iter() {
            stage_of.insert(p.as_slice(), st.n);
        }
    }
    let ext: Vec<NormRecord> = b.stages.iter().map(|s| extremes(&s.h)).collect();
    let mut report = DifferenceReport {
        ok: true,
        shifts_checked: 0,
        max_intersection: 0,
        same_stage_ok: true,
        cross_bound_ok: true,
        cross_stage: Vec::new(),
        beyond_threshold: Vec::new(),
    };
    let mut y = vec![0i64; b.dim];
    for x in points::cube(b.dim, window) {
        report.shifts_checked += 1;
        let nx = norm_sq(&x);
        let threshold = (1..=b.stages.len())
            .find(|&n| sq(n) >= nx && ext[n - 1].min_sq > nx)
            .unwrap_or(b.stages.len() + 1);
        let mut count = 0;
        for st in &b.stages {
            for h in st.h.iter() {
                for ((o, a), c) in y.iter_mut().zip(h).zip(&x) {
                    *o = a.checked_add(*c).ok_or(Error::Overflow)?;
                }
                let Some(&m) = stage_of.get(y.as_slice()) else {
                    continue;
                };
                count += 1;
                let n = st.n;
                if n == m {
                    if sq(n) >= nx {
                        report.same_stage_ok = false;
                    }
                } else {
                    let (lo, hi) = (n.min(m), n.max(m));
                    if nx <= ext[lo - 1].max_sq || 4 * nx <= ext[hi - 1].min_sq {
                        report.cross_bound_ok = false;
                    }
                    report.cross_stage.push((x.clone(), n, m));
                }
                if n.max(m) >= threshold {
                    report.beyond_threshold.push((x.clone(), n, m));
                }
            }
        }
        report.max_intersection = report.max_intersection.max(count);
    }
    report.ok = report.same_stage_ok && report.cross_stage.is_empty() && report.beyond_threshold.is_empty();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{gaussian, quadratic, scaled_z};

    #[test]
    fn single_stage_without_avoidance() {
        let g = gaussian();
        let s = build_thick_avoiding(&[g.clone()], &[], 1, 100).unwrap();
        assert_eq!(s.stages[0].x, vec![-1, -1]);
        assert!(s.check_invariants().unwrap());
    }

    #[test]
    fn aligned_inputs_rejected() {
        let e = build_thick_avoiding(&[scaled_z(1).unwrap()], &[scaled_z(2).unwrap()], 2, 100);
        assert!(matches!(e, Err(Error::Hypothesis(_))));
    }

    #[test]
    fn ipstar_stages() {
        let s = build_ipstar_nonsyndetic(&[gaussian(), quadratic(0, 2)], 3, 10_000).unwrap();
        assert!(s.check_invariants().unwrap());
        let r = verify_difference_bound(&s, 6).unwrap();
        assert!(r.same_stage_ok);
        assert!(r.cross_bound_ok);
        // the first stages are close enough for small shifts to link them
        assert!(!r.cross_stage.is_empty());
        let one = build_ipstar_nonsyndetic(&[gaussian()], 1, 100).unwrap();
        assert_eq!(one.stages.len(), 1);
    }

    #[test]
    fn tampered_stage_fails_invariants() {
        let mut s = build_ipstar_nonsyndetic(&[gaussian()], 2, 10_000).unwrap();
        s.stages[1].x = s.stages[0].x.clone();
        assert!(!s.check_invariants().unwrap());
    }
}
