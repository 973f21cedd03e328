//! Constructors for the standard families: `Z[x]/(p)` for monic `p`, the
//! Lipschitz quaternions and the scaled multiplications on Z.

use num_integer::Roots;
use num_traits::Zero;

use crate::algebra::{Multiplication, Provenance, ZeroDivisorStatus};
use crate::error::{Error, Result};
use crate::linalg::{q, Q};

/// Monic integer polynomial `p(x) = x^d - Σ a_i x^i`.
///
/// For `d = 2` this is `x² - b x - c` with `a = [c, b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicPoly {
    a: Vec<i64>,
}

/// Outcome of the irreducibility check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// No factor exists; `factor_bound` is the coefficient bound searched
    /// (0 when the rational-root test alone is conclusive).
    Irreducible { factor_bound: i64 },
    /// `p = g·h` with both factors monic of positive degree, coefficients
    /// ascending.
    Reducible { g: Vec<i64>, h: Vec<i64> },
    /// Degree too large for the bounded search.
    Unverified,
}

impl MonicPoly {
    /// `x^d - Σ a_i x^i`.
    pub fn new(a: Vec<i64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidInput("polynomial degree must be at least 1".into()));
        }
        Ok(MonicPoly { a })
    }

    /// From the full coefficient list of `p` in ascending order, leading 1 last.
    pub fn from_ascending(coeffs: &[i64]) -> Result<Self> {
        match coeffs.split_last() {
            Some((1, rest)) if !rest.is_empty() => Ok(MonicPoly {
                a: rest.iter().map(|c| -c).collect(),
            }),
            _ => Err(Error::InvalidInput(
                "polynomial must be monic of degree >= 1 (ascending coefficients ending in 1)".into(),
            )),
        }
    }

    /// `x² - b x - c`.
    pub fn quadratic(b: i64, c: i64) -> Self {
        MonicPoly { a: vec![c, b] }
    }

    pub fn degree(&self) -> usize {
        self.a.len()
    }

    /// The reduction coefficients: `x^d ≡ Σ a_i x^i`.
    pub fn reduction(&self) -> &[i64] {
        &self.a
    }

    /// Ascending coefficients of `p`, ending in the leading 1.
    pub fn ascending(&self) -> Vec<i64> {
        let mut c: Vec<i64> = self.a.iter().map(|v| -v).collect();
        c.push(1);
        c
    }

    pub fn irreducibility(&self) -> Irreducibility {
        let p = self.ascending();
        let d = self.degree();
        if d == 1 {
            return Irreducibility::Irreducible { factor_bound: 0 };
        }
        if d > 4 {
            return Irreducibility::Unverified;
        }
        // linear factors x - r, r an integer root dividing p(0)
        let mut roots = Vec::new();
        if p[0] == 0 {
            roots.push(0);
        } else {
            for r in divisors(p[0]) {
                roots.push(-r);
                roots.push(r);
            }
            roots.sort();
        }
        for r in roots {
            if let Some(h) = divide(&p, &[-r, 1]) {
                return Irreducibility::Reducible { g: vec![-r, 1], h };
            }
        }
        if d < 4 {
            return Irreducibility::Irreducible { factor_bound: 0 };
        }
        // Quadratic factors x² + g1 x + g0: any factor's j-th coefficient is
        // bounded by binom(2, j) times the Euclidean norm of p.
        let norm_sq: i128 = p.iter().map(|&c| (c as i128) * (c as i128)).sum();
        let mut bound = norm_sq.sqrt();
        if bound * bound < norm_sq {
            bound += 1;
        }
        let bound = bound as i64;
        let mut g0s: Vec<i64> = divisors(p[0]).into_iter().flat_map(|v| [-v, v]).filter(|v| v.abs() <= bound).collect();
        g0s.sort();
        for g0 in g0s {
            for g1 in -2 * bound..=2 * bound {
                let g = [g0, g1, 1];
                if let Some(h) = divide(&p, &g) {
                    return Irreducibility::Reducible { g: g.to_vec(), h };
                }
            }
        }
        Irreducibility::Irreducible { factor_bound: 2 * bound }
    }
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(k as i64);
            if k * k != n {
                out.push((n / k) as i64);
            }
        }
        k += 1;
    }
    out.sort();
    out
}

/// Exact division of integer polynomials (ascending, `g` monic).
fn divide(p: &[i64], g: &[i64]) -> Option<Vec<i64>> {
    let mut rem: Vec<i128> = p.iter().map(|&c| c as i128).collect();
    let dg = g.len() - 1;
    if p.len() < g.len() {
        return None;
    }
    let mut quo = vec![0i128; p.len() - dg];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dg];
        quo[i] = c;
        for (j, &gj) in g.iter().enumerate() {
            rem[i + j] -= c * gj as i128;
        }
    }
    if rem.iter().any(|r| *r != 0) {
        return None;
    }
    quo.into_iter().map(|c| i64::try_from(c).ok()).collect()
}

/// Multiplication of `Z[x]/(p)` in the basis `1, x, …, x^{d-1}`.
pub fn from_polynomial(p: &MonicPoly) -> Multiplication {
    let d = p.degree();
    // powers[k] = coordinates of x^k reduced mod p, k < 2d - 1
    let mut powers: Vec<Vec<Q>> = Vec::with_capacity(2 * d);
    for k in 0..d {
        let mut v = vec![Q::zero(); d];
        v[k] = q(1);
        powers.push(v);
    }
    for _ in d..2 * d - 1 {
        let prev = powers.last().expect("nonempty");
        let top = prev[d - 1].clone();
        let mut v = vec![Q::zero(); d];
        for i in 1..d {
            v[i] = prev[i - 1].clone();
        }
        for i in 0..d {
            v[i] += &top * q(p.a[i]);
        }
        powers.push(v);
    }
    let mut sc = Vec::with_capacity(d * d * d);
    for i in 0..d {
        for j in 0..d {
            sc.extend(powers[i + j].iter().cloned());
        }
    }
    let irr = p.irreducibility();
    let irreducible = match irr {
        Irreducibility::Irreducible { .. } => Some(true),
        Irreducibility::Reducible { .. } => Some(false),
        Irreducibility::Unverified => None,
    };
    let provenance = Provenance::Polynomial {
        coeffs: p.ascending(),
        irreducible,
    };
    let mut m = Multiplication::unchecked(d, sc, provenance).expect("consistent shape");
    m.check_associative();
    let status = match irr {
        Irreducibility::Irreducible { .. } => ZeroDivisorStatus::ProvenFree,
        Irreducibility::Reducible { .. } if d == 2 => m.decide_small_dim(),
        Irreducibility::Reducible { g, h } => {
            let pad = |v: Vec<i64>| {
                let mut v = v;
                v.resize(d, 0);
                v
            };
            ZeroDivisorStatus::Witness(pad(g), pad(h))
        }
        Irreducibility::Unverified => ZeroDivisorStatus::Unknown,
    };
    m.with_status(status)
}

/// `⊛_{x² - b x - c}`.
pub fn quadratic(b: i64, c: i64) -> Multiplication {
    from_polynomial(&MonicPoly::quadratic(b, c))
}

/// The Gaussian integers `Z[i]`, i.e. `p = x² + 1`.
pub fn gaussian() -> Multiplication {
    quadratic(0, -1)
}

/// Lipschitz quaternions in the basis `1, i, j, k`.
pub fn quaternion() -> Multiplication {
    // (i, j, sign, k): e_i ∘ e_j = sign e_k
    const TABLE: [(usize, usize, i64, usize); 16] = [
        (0, 0, 1, 0),
        (0, 1, 1, 1),
        (0, 2, 1, 2),
        (0, 3, 1, 3),
        (1, 0, 1, 1),
        (1, 1, -1, 0),
        (1, 2, 1, 3),
        (1, 3, -1, 2),
        (2, 0, 1, 2),
        (2, 1, -1, 3),
        (2, 2, -1, 0),
        (2, 3, 1, 1),
        (3, 0, 1, 3),
        (3, 1, 1, 2),
        (3, 2, -1, 1),
        (3, 3, -1, 0),
    ];
    let mut sc = vec![Q::zero(); 64];
    for (i, j, s, k) in TABLE {
        sc[(i * 4 + j) * 4 + k] = q(s);
    }
    let mut m = Multiplication::unchecked(4, sc, Provenance::Quaternion).expect("shape");
    m.check_associative();
    m.with_status(ZeroDivisorStatus::ProvenFree)
}

/// `x ⊛_n y = n x y` on Z.
pub fn scaled_z(n: i64) -> Result<Multiplication> {
    if n == 0 {
        return Err(Error::InvalidInput("scaled multiplication needs n != 0".into()));
    }
    let mut m = Multiplication::unchecked(1, vec![q(n)], Provenance::ScaledZ(n))?;
    m.check_associative();
    Ok(m.with_status(ZeroDivisorStatus::ProvenFree))
}

/// The family `⊛_{x² - b x - c}` for `b ∈ b_values ⊆ {0, 1}` and the given `c`.
///
/// Values of `c` that are perfect squares are excluded from the classifying
/// family. Pairs whose polynomial is nevertheless reducible (possible for
/// `b = 1`, when `1 + 4c` is a square) are rejected as well, since those rings
/// have zero divisors.
pub fn quadratic_catalog(c_values: &[i64], b_values: &[i64]) -> Result<Vec<Multiplication>> {
    let mut out = Vec::new();
    for &b in b_values {
        if b != 0 && b != 1 {
            return Err(Error::InvalidInput(format!("b must be 0 or 1, got {b}")));
        }
        for &c in c_values {
            if c >= 0 && c.sqrt() * c.sqrt() == c {
                return Err(Error::InvalidInput(format!(
                    "c = {c} is a perfect square; the quadratic family excludes c ∈ {{0, 1, 4, 9, …}}"
                )));
            }
            let m = quadratic(b, c);
            if !m.is_proven_proper() {
                return Err(Error::InvalidInput(format!(
                    "x² - {b}x - {c} is reducible (discriminant {} is a square)",
                    b * b + 4 * c
                )));
            }
            out.push(m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qvec, RatMatrix};

    #[test]
    fn quadratic_left_rep_matches_formula() {
        for b in 0..=1 {
            for c in [-5, -1, 2, 3, 7] {
                let m = quadratic(b, c);
                for (x1, x2) in [(1, 0), (0, 1), (3, -2)] {
                    let expect = RatMatrix::from_i64_rows(&[vec![x1, c * x2], vec![x2, x1 + b * x2]]).unwrap();
                    assert_eq!(m.left_rep(&qvec(&[x1, x2])).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn golden_ratio_ring() {
        let m = quadratic(1, 1);
        assert_eq!(m.multiply(&qvec(&[0, 1]), &qvec(&[0, 1])).unwrap(), qvec(&[1, 1]));
    }

    #[test]
    fn reducible_quadratic() {
        let m = from_polynomial(&MonicPoly::from_ascending(&[-4, 0, 1]).unwrap());
        assert_eq!(
            m.zero_divisor_status(),
            &ZeroDivisorStatus::Witness(vec![-2, 1], vec![2, 1])
        );
        assert_eq!(MonicPoly::quadratic(0, 4).irreducibility(), Irreducibility::Reducible { g: vec![2, 1], h: vec![-2, 1] });
    }

    #[test]
    fn irreducibility_small_degrees() {
        // x^3 - 2
        assert!(matches!(
            MonicPoly::from_ascending(&[-2, 0, 0, 1]).unwrap().irreducibility(),
            Irreducibility::Irreducible { .. }
        ));
        // x^4 + 4 = (x² + 2x + 2)(x² - 2x + 2), no rational roots
        match MonicPoly::from_ascending(&[4, 0, 0, 0, 1]).unwrap().irreducibility() {
            Irreducibility::Reducible { g, h } => {
                assert_eq!(g.len(), 3);
                assert_eq!(h.len(), 3);
            }
            other => panic!("expected reducible, got {other:?}"),
        }
        // x^4 - 2 is Eisenstein
        assert!(matches!(
            MonicPoly::from_ascending(&[-2, 0, 0, 0, 1]).unwrap().irreducibility(),
            Irreducibility::Irreducible { factor_bound } if factor_bound > 0
        ));
        assert_eq!(
            MonicPoly::from_ascending(&[1, 0, 0, 0, 0, 1]).unwrap().irreducibility(),
            Irreducibility::Unverified
        );
    }

    #[test]
    fn reducible_quartic_witness_multiplies_to_zero() {
        let m = from_polynomial(&MonicPoly::from_ascending(&[4, 0, 0, 0, 1]).unwrap());
        let ZeroDivisorStatus::Witness(x, y) = m.zero_divisor_status().clone() else {
            panic!("expected witness");
        };
        assert_eq!(m.mul_int(&x, &y).unwrap(), vec![0; 4]);
    }

    #[test]
    fn cubic_ring_products() {
        // x^3 = 2: x * x^2 = 2
        let m = from_polynomial(&MonicPoly::from_ascending(&[-2, 0, 0, 1]).unwrap());
        assert_eq!(m.mul_int(&[0, 1, 0], &[0, 0, 1]).unwrap(), vec![2, 0, 0]);
        assert!(m.is_proven_proper());
    }

    #[test]
    fn quaternion_relations() {
        let h = quaternion();
        let e = |i: usize| {
            let mut v = vec![0i64; 4];
            v[i] = 1;
            v
        };
        assert_eq!(h.mul_int(&e(1), &e(2)).unwrap(), e(3));
        assert_eq!(h.mul_int(&e(2), &e(1)).unwrap(), vec![0, 0, 0, -1]);
        assert_eq!(h.mul_int(&e(2), &e(3)).unwrap(), e(1));
        assert_eq!(h.mul_int(&e(3), &e(1)).unwrap(), e(2));
        for i in 1..4 {
            assert_eq!(h.mul_int(&e(i), &e(i)).unwrap(), vec![-1, 0, 0, 0]);
        }
        assert!(h.is_associative());
        assert!(!h.is_commutative());
    }

    #[test]
    fn quaternion_reps_match_displayed_matrices() {
        let h = quaternion();
        let x = [2, 3, 5, 7];
        let [x1, x2, x3, x4] = x;
        let left = RatMatrix::from_i64_rows(&[
            vec![x1, -x2, -x3, -x4],
            vec![x2, x1, -x4, x3],
            vec![x3, x4, x1, -x2],
            vec![x4, -x3, x2, x1],
        ])
        .unwrap();
        let right = RatMatrix::from_i64_rows(&[
            vec![x1, -x2, -x3, -x4],
            vec![x2, x1, x4, -x3],
            vec![x3, -x4, x1, x2],
            vec![x4, x3, -x2, x1],
        ])
        .unwrap();
        assert_eq!(h.left_rep(&qvec(&x)).unwrap(), left);
        assert_eq!(h.right_rep(&qvec(&x)).unwrap(), right);
    }

    #[test]
    fn scaled() {
        assert_eq!(scaled_z(1).unwrap().mul_int(&[6], &[7]).unwrap(), vec![42]);
        assert_eq!(scaled_z(2).unwrap().mul_int(&[3], &[5]).unwrap(), vec![30]);
        assert_eq!(scaled_z(-3).unwrap().mul_int(&[2], &[2]).unwrap(), vec![-12]);
        assert!(scaled_z(0).is_err());
    }

    #[test]
    fn catalog_rejections() {
        assert_eq!(quadratic_catalog(&[-1, 2], &[0]).unwrap().len(), 2);
        assert!(quadratic_catalog(&[4], &[0]).is_err());
        assert!(quadratic_catalog(&[2], &[1]).is_err());
        assert!(quadratic_catalog(&[2], &[2]).is_err());
        assert_eq!(quadratic_catalog(&[-1], &[0]).unwrap()[0], gaussian());
    }
}
