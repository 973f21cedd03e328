//! Alignment, centralizer/normalizer/automorphism membership, and the
//! class-preservation dispatch.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::Multiplication;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{
    hnf, lattice_intersect, lcm_of_denominators, solve_rational, IntLattice, RatMatrix, Q,
};

/// Outcome of an alignment decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlignmentCertificate {
    /// `x ∘ v ∘ y = x ⊙ w ⊙ y` for all `x, y`, and `φ = ψ ∘ t` with `t = ψ_r(v')`
    /// for the rational vector `v' = v / c`.
    Aligned {
        v: Vec<BigInt>,
        w: Vec<BigInt>,
        t: RatMatrix,
    },
    /// The representation images meet in a lattice of rank `< d`. The stored
    /// basis spans `scale · (ψ(Z^d) ∩ φ(Z^d))`, vectorized row-major.
    NotAligned {
        rank: usize,
        scale: BigInt,
        intersection: IntLattice,
    },
}

impl AlignmentCertificate {
    pub fn is_aligned(&self) -> bool {
        matches!(self, AlignmentCertificate::Aligned { .. })
    }
}

/// Solves `φ(e_i) = ψ(e_i) ψ(v)` for `v`; a solution exists iff the two
/// multiplications are aligned.
pub fn alignment_vector(m1: &Multiplication, m2: &Multiplication) -> Result<Option<Vec<Q>>> {
    check_dim(m1.dim(), m2.dim())?;
    let d = m1.dim();
    let r1 = m1.reps();
    let r2 = m2.reps();
    let cols: Vec<Vec<Q>> = (0..d)
        .map(|k| {
            r1.left
                .iter()
                .flat_map(|pi| (pi * &r1.left[k]).vectorize())
                .collect()
        })
        .collect();
    let a = RatMatrix::from_columns(&cols)?;
    let rhs: Vec<Q> = r2.left.iter().flat_map(RatMatrix::vectorize).collect();
    solve_rational(&a, &rhs)
}

/// `scale · (ψ(Z^d) ∩ φ(Z^d))` for the vectorized representation images,
/// where `scale` clears all denominators. Does not require properness.
pub fn image_lattice_intersection(m1: &Multiplication, m2: &Multiplication) -> Result<(BigInt, IntLattice)> {
    check_dim(m1.dim(), m2.dim())?;
    let d = m1.dim();
    let v1: Vec<Vec<Q>> = m1.reps().left.iter().map(RatMatrix::vectorize).collect();
    let v2: Vec<Vec<Q>> = m2.reps().left.iter().map(RatMatrix::vectorize).collect();
    let all: Vec<Q> = v1.iter().chain(&v2).flatten().cloned().collect();
    let scale = lcm_of_denominators(&all);
    let sq = Q::from_integer(scale.clone());
    let to_int = |v: &Vec<Q>| -> Vec<BigInt> { v.iter().map(|e| (e * &sq).to_integer()).collect() };
    let l1 = hnf(d * d, &v1.iter().map(to_int).collect::<Vec<_>>())?;
    let l2 = hnf(d * d, &v2.iter().map(to_int).collect::<Vec<_>>())?;
    Ok((scale, lattice_intersect(&l1, &l2)?))
}

/// Decides whether `m1` (⊛, representation ψ) and `m2` (⊙, representation φ)
/// are aligned.
pub fn are_aligned(m1: &Multiplication, m2: &Multiplication) -> Result<AlignmentCertificate> {
    check_dim(m1.dim(), m2.dim())?;
    m1.require_proper()?;
    m2.require_proper()?;
    match alignment_vector(m1, m2)? {
        Some(v) => {
            let w = m2
                .rational_identity()
                .ok_or_else(|| Error::UnverifiedProper("no identity element over Q".into()))?;
            let t = m1.right_rep(&v)?;
            let all: Vec<Q> = v.iter().chain(&w).cloned().collect();
            let c = Q::from_integer(lcm_of_denominators(&all));
            let vi: Vec<BigInt> = v.iter().map(|e| (e * &c).to_integer()).collect();
            let wi: Vec<BigInt> = w.iter().map(|e| (e * &c).to_integer()).collect();
            let g = vi.iter().chain(&wi).fold(BigInt::zero(), |g, e| g.gcd(e));
            Ok(AlignmentCertificate::Aligned {
                v: vi.iter().map(|e| e / &g).collect(),
                w: wi.iter().map(|e| e / &g).collect(),
                t,
            })
        }
        None => {
            let (scale, intersection) = image_lattice_intersection(m1, m2)?;
            Ok(AlignmentCertificate::NotAligned {
                rank: intersection.rank(),
                scale,
                intersection,
            })
        }
    }
}

/// Re-checks a certificate without searching: witness identities on all
/// basis pairs (exact by bilinearity), `φ = ψ ∘ t`, or the recomputed rank.
pub fn verify_alignment(m1: &Multiplication, m2: &Multiplication, cert: &AlignmentCertificate) -> Result<bool> {
    check_dim(m1.dim(), m2.dim())?;
    let d = m1.dim();
    match cert {
        AlignmentCertificate::Aligned { v, w, t } => {
            let vq: Vec<Q> = v.iter().map(|e| Q::from_integer(e.clone())).collect();
            let wq: Vec<Q> = w.iter().map(|e| Q::from_integer(e.clone())).collect();
            if crate::linalg::is_zero_vec(&vq) || crate::linalg::is_zero_vec(&wq) {
                return Ok(false);
            }
            let unit = |i: usize| {
                let mut e = vec![Q::zero(); d];
                e[i] = Q::one();
                e
            };
            for i in 0..d {
                let xv = m1.multiply(&unit(i), &vq)?;
                let xw = m2.multiply(&unit(i), &wq)?;
                for j in 0..d {
                    if m1.multiply(&xv, &unit(j))? != m2.multiply(&xw, &unit(j))? {
                        return Ok(false);
                    }
                }
                if m2.left_rep(&unit(i))? != m1.left_rep(&t.mul_vec(&unit(i)))? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        AlignmentCertificate::NotAligned {
            rank,
            scale,
            intersection,
        } => {
            if *rank >= d || alignment_vector(m1, m2)?.is_some() {
                return Ok(false);
            }
            let (s, l) = image_lattice_intersection(m1, m2)?;
            Ok(&s == scale && &l == intersection && l.rank() == *rank)
        }
    }
}

fn require_invertible(m: &Multiplication, t: &RatMatrix) -> Result<()> {
    if t.rows() != m.dim() || t.cols() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: t.rows(),
        });
    }
    if !t.is_invertible() {
        return Err(Error::Singular);
    }
    Ok(())
}

/// `Some(v)` with `t = ψ_r(v)` when `t` commutes with the image of ψ.
pub fn in_centralizer(m: &Multiplication, t: &RatMatrix) -> Result<Option<Vec<Q>>> {
    require_invertible(m, t)?;
    let reps = m.reps();
    let cols: Vec<Vec<Q>> = reps.right.iter().map(RatMatrix::vectorize).collect();
    let a = RatMatrix::from_columns(&cols)?;
    let Some(v) = solve_rational(&a, &t.vectorize())? else {
        return Ok(None);
    };
    // ψ_r(v) commutes with ψ(Q^d) by associativity; checked for non-proper inputs
    if reps.left.iter().all(|p| p.commutes_with(t)) {
        Ok(Some(v))
    } else {
        Ok(None)
    }
}

/// True iff `t^{-1} ψ(e_i) t` lies in the span of the `ψ(e_j)` for every `i`.
pub fn in_normalizer(m: &Multiplication, t: &RatMatrix) -> Result<bool> {
    require_invertible(m, t)?;
    let reps = m.reps();
    let tinv = t.inverse()?;
    let cols: Vec<Vec<Q>> = reps.left.iter().map(RatMatrix::vectorize).collect();
    let a = RatMatrix::from_columns(&cols)?;
    for p in &reps.left {
        let conj = &(&tinv * p) * t;
        if solve_rational(&a, &conj.vectorize())?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Writes a normalizer element as `t = a · ψ_r(v)` with `a` an automorphism.
pub fn decompose_normalizer(m: &Multiplication, t: &RatMatrix) -> Result<(RatMatrix, Vec<Q>)> {
    if !in_normalizer(m, t)? {
        return Err(Error::InvalidInput("matrix is not in the normalizer".into()));
    }
    let acted = m.act(t)?;
    let v = alignment_vector(m, &acted)?
        .ok_or_else(|| Error::InvalidInput("acted multiplication is not aligned".into()))?;
    let s = m.right_rep(&v)?;
    let a = t * &s.inverse()?;
    if !is_automorphism(&a, m)? || &a * &s != *t {
        return Err(Error::InvalidInput("normalizer decomposition failed its post-check".into()));
    }
    Ok((a, v))
}

/// `T(e_i ∘₁ e_j) = T e_i ∘₂ T e_j` for all basis pairs.
pub fn is_homomorphism(t: &RatMatrix, m1: &Multiplication, m2: &Multiplication) -> Result<bool> {
    let d = m1.dim();
    check_dim(d, m2.dim())?;
    if t.rows() != d || t.cols() != d {
        return Err(Error::DimensionMismatch { expected: d, found: t.rows() });
    }
    let cols: Vec<Vec<Q>> = (0..d).map(|i| t.column(i)).collect();
    for i in 0..d {
        for j in 0..d {
            let lhs = t.mul_vec(m1.basis_product(i, j));
            if lhs != m2.multiply(&cols[i], &cols[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_automorphism(t: &RatMatrix, m: &Multiplication) -> Result<bool> {
    Ok(t.is_invertible() && is_homomorphism(t, m, m)?)
}

pub fn is_iso_to_opposite(t: &RatMatrix, m: &Multiplication) -> Result<bool> {
    Ok(t.is_invertible() && is_homomorphism(t, m, &m.opposite())?)
}

/// Integer matrices `t` (row-major rows) with entries in `[-bound, bound]`,
/// `det t = ±1` and `t(x ∘₁ y) = t x ∘₂ t y`, lexicographically sorted.
///
/// Complete only within the entry bound.
pub fn enumerate_integral_isomorphisms(
    m1: &Multiplication,
    m2: &Multiplication,
    bound: i64,
) -> Result<Vec<Vec<Vec<i64>>>> {
    let d = m1.dim();
    check_dim(d, m2.dim())?;
    if bound < 1 {
        return Err(Error::InvalidInput("entry bound must be at least 1".into()));
    }
    let (Some(sc1), Some(_)) = (m1.int_tensor(), m2.int_tensor()) else {
        return Err(Error::InvalidInput("integral structure constants required".into()));
    };
    // pairs (i, j) become checkable once every column they mention is fixed
    let mut ready: Vec<Vec<(usize, usize)>> = vec![Vec::new(); d];
    for i in 0..d {
        for j in 0..d {
            let mut need = i.max(j);
            for k in 0..d {
                if sc1[(i * d + j) * d + k] != 0 {
                    need = need.max(k);
                }
            }
            ready[need].push((i, j));
        }
    }
    let candidates = crate::points::box_points(d, -bound, bound);
    let candidates: Vec<Vec<i64>> = candidates.into_iter().filter(|c| c.iter().any(|&x| x != 0)).collect();
    let mut cols: Vec<Vec<i64>> = Vec::with_capacity(d);
    let mut out = Vec::new();
    search_columns(m2, sc1, d, &ready, &candidates, &mut cols, &mut out)?;
    let mut mats: Vec<Vec<Vec<i64>>> = out
        .into_iter()
        .filter_map(|cols| {
            let rows: Vec<Vec<i64>> = (0..d).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
            let det = RatMatrix::from_i64_rows(&rows).ok()?.det().ok()?;
            (det.abs() == Q::one()).then_some(rows)
        })
        .collect();
    mats.sort();
    Ok(mats)
}

fn search_columns(
    m2: &Multiplication,
    sc1: &[i64],
    d: usize,
    ready: &[Vec<(usize, usize)>],
    candidates: &[Vec<i64>],
    cols: &mut Vec<Vec<i64>>,
    out: &mut Vec<Vec<Vec<i64>>>,
) -> Result<()> {
    let c = cols.len();
    if c == d {
        out.push(cols.clone());
        return Ok(());
    }
    let mut prod = vec![0i64; d];
    'cand: for cand in candidates {
        cols.push(cand.clone());
        for &(i, j) in &ready[c] {
            m2.mul_into(&cols[i], &cols[j], &mut prod)?;
            for (r, p) in prod.iter().enumerate() {
                let mut lhs: i64 = 0;
                for (k, col) in cols.iter().enumerate() {
                    let s = sc1[(i * d + j) * d + k];
                    if s != 0 {
                        lhs = s
                            .checked_mul(col[r])
                            .and_then(|t| t.checked_add(lhs))
                            .ok_or(Error::Overflow)?;
                    }
                }
                if lhs != *p {
                    cols.pop();
                    continue 'cand;
                }
            }
        }
        search_columns(m2, sc1, d, ready, candidates, cols, out)?;
        cols.pop();
    }
    Ok(())
}

pub fn enumerate_integral_automorphisms(m: &Multiplication, bound: i64) -> Result<Vec<Vec<Vec<i64>>>> {
    enumerate_integral_isomorphisms(m, m, bound)
}

pub fn enumerate_integral_iso_to_opposite(m: &Multiplication, bound: i64) -> Result<Vec<Vec<Vec<i64>>>> {
    enumerate_integral_isomorphisms(m, &m.opposite(), bound)
}

/// Largeness classes handled by the preservation dispatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LargenessClass {
    Syndetic,
    Thick,
    PiecewiseSyndetic,
    PiecewiseSyndeticStar,
    Density,
    DensityStar,
    Ip,
    IpStar,
    IpR(u32),
    IpRStar(u32),
    Ip0,
    Ip0Star,
}

impl FromStr for LargenessClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        use LargenessClass::*;
        let t = s.trim();
        Ok(match t {
            "S" => Syndetic,
            "T" => Thick,
            "PS" => PiecewiseSyndetic,
            "PS*" => PiecewiseSyndeticStar,
            "D" => Density,
            "D*" => DensityStar,
            "IP" => Ip,
            "IP*" => IpStar,
            "IP_0" | "IP0" => Ip0,
            "IP_0*" | "IP0*" => Ip0Star,
            _ => {
                let rest = t
                    .strip_prefix("IP_")
                    .ok_or_else(|| Error::InvalidInput(format!("unknown class {t:?}")))?;
                let (num, star) = match rest.strip_suffix('*') {
                    Some(n) => (n, true),
                    None => (rest, false),
                };
                let r: u32 = num
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("unknown class {t:?}")))?;
                if star {
                    IpRStar(r)
                } else {
                    IpR(r)
                }
            }
        })
    }
}

impl fmt::Display for LargenessClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use LargenessClass::*;
        match self {
            Syndetic => write!(f, "S"),
            Thick => write!(f, "T"),
            PiecewiseSyndetic => write!(f, "PS"),
            PiecewiseSyndeticStar => write!(f, "PS*"),
            Density => write!(f, "D"),
            DensityStar => write!(f, "D*"),
            Ip => write!(f, "IP"),
            IpStar => write!(f, "IP*"),
            IpR(r) => write!(f, "IP_{r}"),
            IpRStar(r) => write!(f, "IP_{r}*"),
            Ip0 => write!(f, "IP_0"),
            Ip0Star => write!(f, "IP_0*"),
        }
    }
}

/// Whether the integer matrix `t` maps the class into itself, with the
/// membership test that decided it.
pub fn preserves_class(m: &Multiplication, t: &RatMatrix, class: LargenessClass) -> Result<(bool, String)> {
    use LargenessClass::*;
    m.require_proper()?;
    if !t.is_integral() {
        return Err(Error::InvalidInput("matrix must have integer entries".into()));
    }
    require_invertible(m, t)?;
    match class {
        Syndetic | Thick | PiecewiseSyndetic | PiecewiseSyndeticStar => {
            let ok = in_normalizer(m, t)?;
            Ok((ok, format!("normalizer membership: {ok}")))
        }
        Density | DensityStar => {
            let ok = in_normalizer(m, t)?;
            let mut reason = format!("normalizer membership: {ok}");
            if !m.is_left_amenable() {
                reason.push_str("; note: density classes are defined only for amenable (commutative) multiplications");
            }
            Ok((ok, reason))
        }
        Ip | IpStar => {
            let ok = is_automorphism(t, m)?;
            Ok((ok, format!("automorphism: {ok}")))
        }
        IpR(r) | IpRStar(r) if r < 2 => Err(Error::InvalidInput(format!(
            "class {class} is outside the dispatch (r must be at least 2)"
        ))),
        IpR(_) | IpRStar(_) | Ip0 | Ip0Star => {
            let aut = is_automorphism(t, m)?;
            let op = is_iso_to_opposite(t, m)?;
            Ok((aut || op, format!("automorphism: {aut}; isomorphism to opposite: {op}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{gaussian, quadratic, quaternion, scaled_z};
    use crate::linalg::{q, qvec};

    fn mat(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn scaled_pair_witness() {
        let cert = are_aligned(&scaled_z(2).unwrap(), &scaled_z(3).unwrap()).unwrap();
        let AlignmentCertificate::Aligned { v, w, .. } = &cert else {
            panic!("expected aligned");
        };
        assert_eq!(v, &vec![BigInt::from(9)]);
        assert_eq!(w, &vec![BigInt::from(4)]);
        assert!(verify_alignment(&scaled_z(2).unwrap(), &scaled_z(3).unwrap(), &cert).unwrap());
    }

    #[test]
    fn sqrt2_sqrt3_not_aligned() {
        let cert = are_aligned(&quadratic(0, 2), &quadratic(0, 3)).unwrap();
        match &cert {
            AlignmentCertificate::NotAligned { rank, intersection, .. } => {
                assert_eq!(*rank, 1);
                // multiples of Id
                assert_eq!(intersection.basis()[0], vec![1, 0, 0, 1].into_iter().map(BigInt::from).collect::<Vec<_>>());
            }
            _ => panic!("expected not aligned"),
        }
        assert!(verify_alignment(&quadratic(0, 2), &quadratic(0, 3), &cert).unwrap());
    }

    #[test]
    fn reflexive_alignment_uses_identity() {
        let g = gaussian();
        match are_aligned(&g, &g).unwrap() {
            AlignmentCertificate::Aligned { v, w, .. } => {
                assert_eq!(v, vec![BigInt::one(), BigInt::zero()]);
                assert_eq!(w, v);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn centralizer() {
        let g = gaussian();
        let y = qvec(&[2, -3]);
        assert_eq!(in_centralizer(&g, &g.right_rep(&y).unwrap()).unwrap(), Some(y));
        assert_eq!(in_centralizer(&g, &mat(&[vec![1, 0], vec![0, -1]])).unwrap(), None);
        assert_eq!(in_centralizer(&g, &RatMatrix::scalar(2, q(5))).unwrap(), Some(qvec(&[5, 0])));
        assert_eq!(in_centralizer(&g, &RatMatrix::zeros(2, 2)), Err(Error::Singular));
    }

    #[test]
    fn normalizer_swap() {
        let swap = mat(&[vec![0, 1], vec![1, 0]]);
        assert!(in_normalizer(&gaussian(), &swap).unwrap());
        assert!(!in_normalizer(&quadratic(0, 2), &swap).unwrap());
        let h = quaternion();
        assert!(in_normalizer(&h, &h.right_rep(&qvec(&[1, 2, 0, -1])).unwrap()).unwrap());
    }

    #[test]
    fn decompositions() {
        let g = gaussian();
        let y = qvec(&[1, 1]);
        let (a, v) = decompose_normalizer(&g, &g.right_rep(&y).unwrap()).unwrap();
        assert!(a.is_identity());
        assert_eq!(v, y);
        let conj = mat(&[vec![1, 0], vec![0, -1]]);
        let (a, v) = decompose_normalizer(&g, &conj).unwrap();
        assert_eq!(a, conj);
        assert_eq!(v, qvec(&[1, 0]));
        assert!(decompose_normalizer(&quadratic(0, 2), &mat(&[vec![0, 1], vec![1, 0]])).is_err());
    }

    #[test]
    fn homomorphisms() {
        let h = quaternion();
        let conj = mat(&[vec![1, 0, 0, 0], vec![0, -1, 0, 0], vec![0, 0, -1, 0], vec![0, 0, 0, -1]]);
        assert!(is_homomorphism(&RatMatrix::identity(4), &h, &h).unwrap());
        assert!(is_homomorphism(&conj, &h, &h.opposite()).unwrap());
        assert!(!is_automorphism(&conj, &h).unwrap());
        assert!(!is_automorphism(&mat(&[vec![0, 1], vec![1, 0]]), &gaussian()).unwrap());
    }

    #[test]
    fn gaussian_automorphisms() {
        let auts = enumerate_integral_automorphisms(&gaussian(), 1).unwrap();
        assert_eq!(auts, vec![vec![vec![1, 0], vec![0, -1]], vec![vec![1, 0], vec![0, 1]]]);
    }

    #[test]
    fn class_dispatch() {
        use LargenessClass::*;
        let swap = mat(&[vec![0, 1], vec![1, 0]]);
        assert!(preserves_class(&gaussian(), &swap, PiecewiseSyndeticStar).unwrap().0);
        assert!(!preserves_class(&quadratic(0, 2), &swap, PiecewiseSyndeticStar).unwrap().0);
        let h = quaternion();
        let conj = mat(&[vec![1, 0, 0, 0], vec![0, -1, 0, 0], vec![0, 0, -1, 0], vec![0, 0, 0, -1]]);
        assert!(preserves_class(&h, &conj, "IP_2*".parse().unwrap()).unwrap().0);
        assert!(!preserves_class(&h, &conj, IpStar).unwrap().0);
        let (_, reason) = preserves_class(&h, &RatMatrix::identity(4), DensityStar).unwrap();
        assert!(reason.contains("amenable"));
        assert!(preserves_class(&h, &RatMatrix::identity(4), IpR(1)).is_err());
        let half = RatMatrix::scalar(2, Q::new(1.into(), 2.into()));
        assert!(preserves_class(&gaussian(), &half, Thick).is_err());
    }

    #[test]
    fn class_names_round_trip() {
        for s in ["S", "T", "PS", "PS*", "D", "D*", "IP", "IP*", "IP_3", "IP_2*", "IP_0", "IP_0*"] {
            let c: LargenessClass = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
        assert!("XY".parse::<LargenessClass>().is_err());
    }
}
