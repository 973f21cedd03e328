use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{qvec_big, solve_rational, RatMatrix};
use crate::error::{check_dim, Result};

/// A finitely generated subgroup of Z^m, stored by its Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntLattice {
    ambient_dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl IntLattice {
    pub fn zero(ambient_dim: usize) -> Self {
        IntLattice {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn from_i64(ambient_dim: usize, generators: &[Vec<i64>]) -> Result<Self> {
        let gens: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        hnf(ambient_dim, &gens)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Membership by solving over Q and checking the coefficients are integers.
    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        check_dim(self.ambient_dim, v.len())?;
        if self.basis.is_empty() {
            return Ok(v.iter().all(Zero::is_zero));
        }
        let cols: Vec<_> = self.basis.iter().map(|b| qvec_big(b)).collect();
        let a = RatMatrix::from_columns(&cols)?;
        Ok(match solve_rational(&a, &qvec_big(v))? {
            Some(c) => c.iter().all(|e| e.is_integer()),
            None => false,
        })
    }
}

/// Row-style Hermite normal form together with a unimodular transform.
///
/// Returns `(h, u, rank)` with `u * m = h`; the first `rank` rows of `h` form
/// the echelon basis (positive pivots, entries above each pivot reduced into
/// `[0, pivot)`), and the remaining rows of `u` span the integer left kernel
/// of `m`.
pub fn hnf_with_transform(
    ncols: usize,
    m: &[Vec<BigInt>],
) -> Result<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, usize)> {
    for row in m {
        check_dim(ncols, row.len())?;
    }
    let k = m.len();
    let mut h: Vec<Vec<BigInt>> = m.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();

    fn sub_mul(rows: &mut [Vec<BigInt>], target: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        let (t, s) = if target < src {
            let (a, b) = rows.split_at_mut(src);
            (&mut a[target], &b[0])
        } else {
            let (a, b) = rows.split_at_mut(target);
            (&mut b[0], &a[src])
        };
        for (x, y) in t.iter_mut().zip(s) {
            *x -= f * y;
        }
    }

    let mut r = 0;
    for c in 0..ncols {
        if r == k {
            break;
        }
        loop {
            let pivot = (r..k)
                .filter(|&i| !h[i][c].is_zero())
                .min_by(|&a, &b| h[a][c].abs().cmp(&h[b][c].abs()).then(a.cmp(&b)));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..k {
                if h[i][c].is_zero() {
                    continue;
                }
                let f = h[i][c].div_floor(&h[r][c]);
                sub_mul(&mut h, i, r, &f);
                sub_mul(&mut u, i, r, &f);
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let f = h[i][c].div_floor(&h[r][c]);
            sub_mul(&mut h, i, r, &f);
            sub_mul(&mut u, i, r, &f);
        }
        r += 1;
    }
    Ok((h, u, r))
}

/// Hermite normal form of the lattice generated by the rows of `generators`.
pub fn hnf(ambient_dim: usize, generators: &[Vec<BigInt>]) -> Result<IntLattice> {
    let (h, _, r) = hnf_with_transform(ambient_dim, generators)?;
    Ok(IntLattice {
        ambient_dim,
        basis: h.into_iter().take(r).collect(),
    })
}

/// `L1 ∩ L2`, via the integer left kernel of the stacked basis matrix.
pub fn lattice_intersect(l1: &IntLattice, l2: &IntLattice) -> Result<IntLattice> {
    check_dim(l1.ambient_dim, l2.ambient_dim)?;
    let m = l1.ambient_dim;
    if l1.rank() == 0 || l2.rank() == 0 {
        return Ok(IntLattice::zero(m));
    }
    let stacked: Vec<Vec<BigInt>> = l1.basis.iter().chain(&l2.basis).cloned().collect();
    let (_, u, r) = hnf_with_transform(m, &stacked)?;
    let k1 = l1.rank();
    let gens: Vec<Vec<BigInt>> = u[r..]
        .iter()
        .map(|row| {
            let mut v = vec![BigInt::zero(); m];
            for (a, b) in row[..k1].iter().zip(&l1.basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += a * y;
                }
            }
            v
        })
        .collect();
    hnf(m, &gens)
}
