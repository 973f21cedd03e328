//! Explicit constructions with exact finite verifiers: avoiding dilators,
//! staged thick-but-small unions, the IP*-not-syndetic staged set, and
//! inductive IP-separating sequences.

mod avoiding;
mod ipseq;
mod staged;

pub use avoiding::{find_avoiding_dilator, find_avoiding_dilator_within, verify_avoiding, AvoidingReport, AvoidingViolation};
pub use ipseq::{
    build_ip_order_separating, build_ip_separating, subset_indices, verify_ip_order_separating,
    verify_ip_separating, IpSequence, OrderVerification, SeparationVerification,
};
pub use staged::{
    build_ipstar_nonsyndetic, build_thick_avoiding, verify_difference_bound, DifferenceReport, NormRecord, Stage,
    StagedKind, StagedSet,
};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::Multiplication;
use crate::error::{Error, Result};
use crate::linalg::{qvec, RatMatrix, Q};

/// Default sup-norm radius for dilator and candidate searches.
pub const DEFAULT_SEARCH_BOUND: i64 = 10_000;

/// Square integer matrix with checked `i128` arithmetic, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct IMat {
    d: usize,
    e: Vec<i128>,
}

impl IMat {
    pub(crate) fn identity(d: usize) -> Self {
        let mut e = vec![0; d * d];
        for i in 0..d {
            e[i * d + i] = 1;
        }
        IMat { d, e }
    }

    pub(crate) fn mul(&self, o: &IMat) -> Result<IMat> {
        let d = self.d;
        let mut e = vec![0i128; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.e[i * d + k];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let t = a.checked_mul(o.e[k * d + j]).ok_or(Error::Overflow)?;
                    e[i * d + j] = e[i * d + j].checked_add(t).ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(IMat { d, e })
    }

    pub(crate) fn sub(&self, o: &IMat) -> Result<IMat> {
        let e = self
            .e
            .iter()
            .zip(&o.e)
            .map(|(a, b)| a.checked_sub(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(IMat { d: self.d, e })
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.e.iter().all(|&v| v == 0)
    }

    pub(crate) fn mul_vec(&self, x: &[i128]) -> Result<Vec<i128>> {
        let d = self.d;
        (0..d)
            .map(|i| {
                let mut acc: i128 = 0;
                for j in 0..d {
                    let t = self.e[i * d + j].checked_mul(x[j]).ok_or(Error::Overflow)?;
                    acc = acc.checked_add(t).ok_or(Error::Overflow)?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// Squared Frobenius norm.
    pub(crate) fn frobenius_sq(&self) -> Result<i128> {
        self.e.iter().try_fold(0i128, |acc, &v| {
            v.checked_mul(v).and_then(|s| acc.checked_add(s)).ok_or(Error::Overflow)
        })
    }
}

/// Integer views of the representations of an integral multiplication.
pub(crate) struct IntRep<'a> {
    d: usize,
    sc: &'a [i64],
}

impl<'a> IntRep<'a> {
    pub(crate) fn new(m: &'a Multiplication) -> Result<Self> {
        let sc = m
            .int_tensor()
            .ok_or_else(|| Error::InvalidInput("constructions need integral structure constants".into()))?;
        Ok(IntRep { d: m.dim(), sc })
    }

    fn s(&self, i: usize, j: usize, k: usize) -> i128 {
        self.sc[(i * self.d + j) * self.d + k] as i128
    }

    /// ψ(x), with column `j` equal to `x ∘ e_j`.
    pub(crate) fn left(&self, x: &[i128]) -> Result<IMat> {
        let d = self.d;
        let mut e = vec![0i128; d * d];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                for k in 0..d {
                    let s = self.s(i, j, k);
                    if s != 0 {
                        let t = s.checked_mul(x[i]).ok_or(Error::Overflow)?;
                        e[k * d + j] = e[k * d + j].checked_add(t).ok_or(Error::Overflow)?;
                    }
                }
            }
        }
        Ok(IMat { d, e })
    }

    /// ψ_r(x), with column `i` equal to `e_i ∘ x`.
    pub(crate) fn right(&self, x: &[i128]) -> Result<IMat> {
        let d = self.d;
        let mut e = vec![0i128; d * d];
        for j in 0..d {
            if x[j] == 0 {
                continue;
            }
            for i in 0..d {
                for k in 0..d {
                    let s = self.s(i, j, k);
                    if s != 0 {
                        let t = s.checked_mul(x[j]).ok_or(Error::Overflow)?;
                        e[k * d + i] = e[k * d + i].checked_add(t).ok_or(Error::Overflow)?;
                    }
                }
            }
        }
        Ok(IMat { d, e })
    }

    pub(crate) fn mul(&self, x: &[i128], y: &[i128]) -> Result<Vec<i128>> {
        self.left(x)?.mul_vec(y)
    }
}

pub(crate) fn widen(x: &[i64]) -> Vec<i128> {
    x.iter().map(|&v| v as i128).collect()
}

pub(crate) fn narrow(x: &[i128]) -> Result<Vec<i64>> {
    x.iter().map(|&v| i64::try_from(v).map_err(|_| Error::Overflow)).collect()
}

fn induced_norm_bound(m: &RatMatrix) -> Q {
    let d = m.rows();
    let mut best = Q::zero();
    for i in 0..d {
        let row: Q = (0..m.cols()).map(|j| m.get(i, j).abs()).sum();
        let col: Q = (0..m.rows()).map(|j| m.get(j, i).abs()).sum();
        best = best.max(row).max(col);
    }
    best
}

/// A constant `K` with `K^{-1} max(‖x∘y‖, ‖y∘x‖) ≤ ‖x‖ ≤ K min(‖x∘y‖, ‖y∘x‖)`
/// for every `x`, Euclidean norms.
///
/// Each of `ψ(y)`, `ψ_r(y)` and their inverses has spectral norm at most
/// `sqrt(‖M‖_1 ‖M‖_∞) ≤ max(‖M‖_1, ‖M‖_∞)`; `K` is the largest of these.
pub fn norm_constant(m: &Multiplication, y: &[i64]) -> Result<Q> {
    if y.iter().all(|&v| v == 0) {
        return Err(Error::InvalidInput("y must be nonzero".into()));
    }
    m.require_proper()?;
    let yq = qvec(y);
    let l = m.left_rep(&yq)?;
    let r = m.right_rep(&yq)?;
    let mats = [l.inverse()?, r.inverse()?, l, r];
    Ok(mats.iter().map(induced_norm_bound).max().expect("four matrices"))
}

/// Exact check of both inequalities for one `x`, comparing squared norms.
pub fn check_norm_constant(m: &Multiplication, y: &[i64], k: &Q, x: &[i64]) -> Result<bool> {
    let xq = qvec(x);
    let yq = qvec(y);
    let sq = |v: &[Q]| -> Q { v.iter().map(|e| e * e).sum() };
    let a = sq(&m.multiply(&xq, &yq)?);
    let b = sq(&m.multiply(&yq, &xq)?);
    let nx = sq(&xq);
    let k2 = k * k;
    let hi = if a > b { a.clone() } else { b.clone() };
    let lo = if a < b { a } else { b };
    Ok(hi <= &k2 * &nx && nx <= &k2 * &lo)
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduces an integer vector over a positive denominator to lowest terms.
pub(crate) fn reduce_fraction(mut v: Vec<i128>, mut den: i128) -> (Vec<i128>, i128) {
    let g = v.iter().fold(den, |g, &e| gcd_i128(g, e));
    if g > 1 {
        for e in v.iter_mut() {
            *e /= g;
        }
        den /= g;
    }
    (v, den)
}

/// A rational matrix as (integer numerator, positive denominator) in lowest terms.
pub(crate) fn to_fraction_matrix(m: &RatMatrix) -> Result<(IMat, i128)> {
    let den = m.common_denominator();
    let scaled = m.scale(&Q::from_integer(den.clone()));
    let conv = |b: &BigInt| i128::try_from(b).map_err(|_| Error::Overflow);
    let e: Vec<i128> = scaled
        .entries()
        .iter()
        .map(|v| conv(&v.to_integer()))
        .collect::<Result<_>>()?;
    let (e, den) = reduce_fraction(e, conv(&den)?);
    Ok((IMat { d: m.rows(), e }, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{gaussian, quaternion, scaled_z};
    use crate::linalg::q;

    #[test]
    fn norm_constant_examples() {
        let g = gaussian();
        assert_eq!(norm_constant(&g, &[1, 0]).unwrap(), q(1));
        let k = norm_constant(&g, &[0, 1]).unwrap();
        assert!(k >= q(1));
        assert_eq!(norm_constant(&scaled_z(2).unwrap(), &[3]).unwrap(), q(6));
        assert!(norm_constant(&g, &[0, 0]).is_err());
        let h = quaternion();
        let y = [1, 2, -1, 3];
        let k = norm_constant(&h, &y).unwrap();
        for x in crate::points::cube(4, 1) {
            assert!(check_norm_constant(&h, &y, &k, &x).unwrap());
        }
    }

    #[test]
    fn int_rep_matches_rational() {
        let h = quaternion();
        let r = IntRep::new(&h).unwrap();
        let x = [2i64, -1, 0, 3];
        let l = r.left(&widen(&x)).unwrap();
        let lq = h.left_rep(&qvec(&x)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(q(l.e[i * 4 + j] as i64), *lq.get(i, j));
            }
        }
        let rr = r.right(&widen(&x)).unwrap();
        let rq = h.right_rep(&qvec(&x)).unwrap();
        assert_eq!(to_fraction_matrix(&rq).unwrap(), (rr, 1));
    }
}
