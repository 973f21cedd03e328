use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{lcm_of_denominators, Q};
use crate::error::{check_dim, Error, Result};

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Q>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Q>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput("matrix dimensions must be positive".into()));
        }
        check_dim(rows * cols, entries.len())?;
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Q::from_integer(v.into())).collect())
                .collect(),
        )
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Q>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::InvalidInput("ragged matrix columns".into()));
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for col in columns {
                entries.push(col[i].clone());
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        RatMatrix {
            rows,
            cols,
            entries: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Q::one())
    }

    pub fn scalar(n: usize, c: Q) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major flattening; matrices are housed in lattices this way.
    pub fn vectorize(&self) -> Vec<Q> {
        self.entries.clone()
    }

    pub fn entries(&self) -> &[Q] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &Q) -> Self {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integer())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    /// Entries as integers, if every entry is integral.
    pub fn to_integer_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.is_integral() {
            return None;
        }
        Some(
            (0..self.rows)
                .map(|i| self.row(i).iter().map(|e| e.to_integer()).collect())
                .collect(),
        )
    }

    pub fn common_denominator(&self) -> BigInt {
        lcm_of_denominators(&self.entries)
    }

    pub fn try_mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn try_mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        self.try_mul_vec(v).expect("matrix-vector dimension mismatch")
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn det(&self) -> Result<Q> {
        if !self.is_square() {
            return Err(Error::InvalidInput("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(Q::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det *= &pivot;
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c) / &pivot;
                for j in c..n {
                    let v = m.get(i, j) - &f * m.get(c, j);
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::InvalidInput("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Q::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn commutes_with(&self, other: &RatMatrix) -> bool {
        self * other == other * self
    }
}

impl<'a> Mul<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &'a RatMatrix) -> RatMatrix {
        self.try_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl<'a> Add<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;
    fn add(self, rhs: &'a RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a RatMatrix> for &'a RatMatrix {
    type Output = RatMatrix;
    fn sub(self, rhs: &'a RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &RatMatrix {
    type Output = RatMatrix;
    fn neg(self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", super::fmt_vector(self.row(i)))?;
        }
        write!(f, "]")
    }
}

/// Solves `a x = b` exactly. Returns `None` when the system is inconsistent;
/// free variables are set to zero.
pub fn solve_rational(a: &RatMatrix, b: &[Q]) -> Result<Option<Vec<Q>>> {
    check_dim(a.rows(), b.len())?;
    let (rows, cols) = (a.rows(), a.cols());
    let mut aug = RatMatrix::zeros(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, cols, b[i].clone());
    }
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![Q::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r.get(row, cols).clone();
    }
    Ok(Some(x))
}

/// Basis of the right null space; empty when the kernel is trivial.
pub fn kernel_rational(a: &RatMatrix) -> Vec<Vec<Q>> {
    let (r, pivots) = a.rref();
    let cols = a.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, f).clone();
            }
            v
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector whose first
/// nonzero entry is positive. Zero maps to zero.
pub fn primitive_integer_vector(v: &[Q]) -> Vec<BigInt> {
    let ints = clear_denominators(v);
    let sign = ints.iter().find(|e| !e.is_zero()).map_or(BigInt::one(), |e| e.signum());
    ints.into_iter().map(|e| e * &sign).collect()
}

/// Positive multiple of `v` that is a primitive integer vector (direction and
/// sign preserved). Zero maps to zero.
pub fn clear_denominators(v: &[Q]) -> Vec<BigInt> {
    let den = lcm_of_denominators(v);
    let ints: Vec<BigInt> = v.iter().map(|e| (e * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |g, e| num_integer::Integer::gcd(&g, e));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|e| e / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, qvec};

    fn m(rows: &[Vec<i64>]) -> RatMatrix {
        RatMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn solve_identity() {
        let x = solve_rational(&RatMatrix::identity(2), &qvec(&[3, 5])).unwrap();
        assert_eq!(x, Some(qvec(&[3, 5])));
    }

    #[test]
    fn solve_inconsistent() {
        let a = m(&[vec![1, 1], vec![2, 2]]);
        assert_eq!(solve_rational(&a, &qvec(&[1, 3])).unwrap(), None);
    }

    #[test]
    fn solve_diagonal() {
        let a = m(&[vec![2, 0], vec![0, 4]]);
        let x = solve_rational(&a, &qvec(&[1, 1])).unwrap().unwrap();
        assert_eq!(x, vec![Q::new(1.into(), 2.into()), Q::new(1.into(), 4.into())]);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let a = RatMatrix::identity(2);
        assert!(matches!(
            solve_rational(&a, &qvec(&[1, 2, 3])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn solve_underdetermined_sets_free_zero() {
        let a = m(&[vec![1, 1, 0]]);
        let x = solve_rational(&a, &qvec(&[4])).unwrap().unwrap();
        assert_eq!(x, qvec(&[4, 0, 0]));
    }

    #[test]
    fn kernels() {
        assert!(kernel_rational(&RatMatrix::identity(3)).is_empty());
        assert_eq!(kernel_rational(&RatMatrix::zeros(2, 2)).len(), 2);
        let k = kernel_rational(&m(&[vec![1, 1], vec![2, 2]]));
        assert_eq!(k.len(), 1);
        // proportional to (1, -1)
        assert_eq!(&k[0][0] + &k[0][1], q(0));
        assert!(!k[0][0].is_zero());
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[vec![2, 1], vec![7, 4]]);
        assert_eq!(a.det().unwrap(), q(1));
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert_eq!(m(&[vec![1, 2], vec![2, 4]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn primitive_vector() {
        let v = vec![Q::new((-2).into(), 3.into()), Q::new(4.into(), 3.into())];
        assert_eq!(primitive_integer_vector(&v), vec![BigInt::from(1), BigInt::from(-2)]);
    }
}
