//! Bilinear products on Z^d stored as structure-constant tensors, and the
//! representation machinery built on them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{
    clear_denominators, kernel_rational, lcm_of_denominators, primitive_integer_vector, q, solve_rational, RatMatrix, Q,
};
use crate::points;

/// Zero-divisor certificate of a multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroDivisorStatus {
    ProvenFree,
    Unknown,
    /// Nonzero integer vectors with `x ∘ y = 0`.
    Witness(Vec<i64>, Vec<i64>),
}

/// Result of a bounded zero-divisor search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroDivisorSearch {
    ProvenFree,
    Witness(Vec<i64>, Vec<i64>),
    NoneInBox(i64),
}

/// How a multiplication was constructed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `Z[x]/(p)`; `coeffs` are the coefficients of `p` in ascending order.
    Polynomial { coeffs: Vec<i64>, irreducible: Option<bool> },
    Quaternion,
    ScaledZ(i64),
    Raw,
    Acted { base: Box<Provenance>, matrix: RatMatrix },
    Opposite(Box<Provenance>),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Polynomial { coeffs, .. } => {
                write!(f, "polynomial {}", crate::linalg::fmt_vector(coeffs))
            }
            Provenance::Quaternion => write!(f, "quaternion"),
            Provenance::ScaledZ(n) => write!(f, "scaled_z {n}"),
            Provenance::Raw => write!(f, "raw"),
            Provenance::Acted { base, matrix } => write!(f, "acted({base}; {matrix})"),
            Provenance::Opposite(base) => write!(f, "opposite({base})"),
        }
    }
}

/// A bilinear product on Q^d with `e_i ∘ e_j = Σ_k sc[i][j][k] e_k`.
///
/// The tensor is the only stored data; representations are derived from it.
#[derive(Clone, Debug)]
pub struct Multiplication {
    dim: usize,
    sc: Vec<Q>,
    int_sc: Option<Vec<i64>>,
    assoc_checked: bool,
    zero_divisors: ZeroDivisorStatus,
    provenance: Provenance,
}

impl PartialEq for Multiplication {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.sc == other.sc
    }
}

impl Eq for Multiplication {}

impl Multiplication {
    /// Builds a multiplication from a flat tensor indexed `(i*d + j)*d + k`.
    /// Associativity is checked; for `d <= 2` properness is decided exactly.
    pub fn raw(dim: usize, sc: Vec<Q>) -> Result<Self> {
        let mut m = Self::unchecked(dim, sc, Provenance::Raw)?;
        m.check_associative();
        if dim <= 2 {
            m.zero_divisors = m.decide_small_dim();
        }
        Ok(m)
    }

    /// Tensor given as nested `sc[i][j]` rows of length `d`.
    pub fn raw_nested(sc: &[Vec<Vec<Q>>]) -> Result<Self> {
        let d = sc.len();
        let mut flat = Vec::with_capacity(d * d * d);
        for row in sc {
            check_dim(d, row.len())?;
            for v in row {
                check_dim(d, v.len())?;
                flat.extend(v.iter().cloned());
            }
        }
        Self::raw(d, flat)
    }

    pub(crate) fn unchecked(dim: usize, sc: Vec<Q>, provenance: Provenance) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        check_dim(dim * dim * dim, sc.len())?;
        let int_sc = sc
            .iter()
            .map(|e| if e.is_integer() { e.to_integer().to_i64() } else { None })
            .collect();
        Ok(Multiplication {
            dim,
            sc,
            int_sc,
            assoc_checked: false,
            zero_divisors: ZeroDivisorStatus::Unknown,
            provenance,
        })
    }

    pub(crate) fn with_status(mut self, status: ZeroDivisorStatus) -> Self {
        self.zero_divisors = status;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tensor(&self) -> &[Q] {
        &self.sc
    }

    /// `sc[i][j]`, the coordinates of `e_i ∘ e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Q] {
        let d = self.dim;
        &self.sc[(i * d + j) * d..(i * d + j + 1) * d]
    }

    pub fn nested_tensor(&self) -> Vec<Vec<Vec<Q>>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.basis_product(i, j).to_vec()).collect())
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.int_sc.is_some()
    }

    pub fn int_tensor(&self) -> Option<&[i64]> {
        self.int_sc.as_deref()
    }

    pub fn assoc_checked(&self) -> bool {
        self.assoc_checked
    }

    pub fn zero_divisor_status(&self) -> &ZeroDivisorStatus {
        &self.zero_divisors
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Associative and certified free of zero divisors.
    pub fn is_proven_proper(&self) -> bool {
        self.assoc_checked && self.zero_divisors == ZeroDivisorStatus::ProvenFree
    }

    pub(crate) fn require_proper(&self) -> Result<()> {
        if self.is_proven_proper() {
            Ok(())
        } else if !self.assoc_checked {
            Err(Error::UnverifiedProper("associativity fails".into()))
        } else {
            Err(Error::UnverifiedProper(match &self.zero_divisors {
                ZeroDivisorStatus::Witness(x, y) => format!(
                    "zero divisors {} and {}",
                    crate::linalg::fmt_vector(x),
                    crate::linalg::fmt_vector(y)
                ),
                _ => "zero-divisor freeness is not certified".into(),
            }))
        }
    }

    pub fn multiply(&self, x: &[Q], y: &[Q]) -> Result<Vec<Q>> {
        let d = self.dim;
        check_dim(d, x.len())?;
        check_dim(d, y.len())?;
        let mut out = vec![Q::zero(); d];
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let c = &x[i] * &y[j];
                for (o, s) in out.iter_mut().zip(self.basis_product(i, j)) {
                    if !s.is_zero() {
                        *o += &c * s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Integer product with overflow checking; requires an integral tensor.
    pub fn mul_int(&self, x: &[i64], y: &[i64]) -> Result<Vec<i64>> {
        let mut out = vec![0; self.dim];
        self.mul_into(x, y, &mut out)?;
        Ok(out)
    }

    /// Allocation-free variant of [`Multiplication::mul_int`].
    pub fn mul_into(&self, x: &[i64], y: &[i64], out: &mut [i64]) -> Result<()> {
        let d = self.dim;
        check_dim(d, x.len())?;
        check_dim(d, y.len())?;
        check_dim(d, out.len())?;
        let sc = self
            .int_sc
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("integer product needs integral structure constants".into()))?;
        for (k, o) in out.iter_mut().enumerate() {
            let mut acc: i128 = 0;
            for i in 0..d {
                if x[i] == 0 {
                    continue;
                }
                for j in 0..d {
                    let s = sc[(i * d + j) * d + k];
                    if s == 0 || y[j] == 0 {
                        continue;
                    }
                    let t = (x[i] as i128)
                        .checked_mul(y[j] as i128)
                        .and_then(|t| t.checked_mul(s as i128))
                        .ok_or(Error::Overflow)?;
                    acc = acc.checked_add(t).ok_or(Error::Overflow)?;
                }
            }
            *o = i64::try_from(acc).map_err(|_| Error::Overflow)?;
        }
        Ok(())
    }

    /// ψ(x): the matrix whose `j`-th column is `x ∘ e_j`.
    pub fn left_rep(&self, x: &[Q]) -> Result<RatMatrix> {
        let d = self.dim;
        check_dim(d, x.len())?;
        let mut m = RatMatrix::zeros(d, d);
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                for (k, s) in self.basis_product(i, j).iter().enumerate() {
                    if !s.is_zero() {
                        let v = m.get(k, j) + &x[i] * s;
                        m.set(k, j, v);
                    }
                }
            }
        }
        Ok(m)
    }

    /// ψ_r(x): the matrix whose `i`-th column is `e_i ∘ x`.
    pub fn right_rep(&self, x: &[Q]) -> Result<RatMatrix> {
        let d = self.dim;
        check_dim(d, x.len())?;
        let mut m = RatMatrix::zeros(d, d);
        for j in 0..d {
            if x[j].is_zero() {
                continue;
            }
            for i in 0..d {
                for (k, s) in self.basis_product(i, j).iter().enumerate() {
                    if !s.is_zero() {
                        let v = m.get(k, i) + &x[j] * s;
                        m.set(k, i, v);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Integer left representation, row-major, for integral tensors.
    pub fn left_rep_int(&self, x: &[i64]) -> Result<Vec<i64>> {
        let d = self.dim;
        check_dim(d, x.len())?;
        let sc = self
            .int_sc
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("integer representation needs integral structure constants".into()))?;
        let mut m = vec![0i64; d * d];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                for k in 0..d {
                    let s = sc[(i * d + j) * d + k];
                    if s != 0 {
                        let t = s.checked_mul(x[i]).ok_or(Error::Overflow)?;
                        m[k * d + j] = m[k * d + j].checked_add(t).ok_or(Error::Overflow)?;
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn reps(&self) -> RepPair {
        let d = self.dim;
        let unit = |i: usize| {
            let mut e = vec![Q::zero(); d];
            e[i] = Q::one();
            e
        };
        RepPair {
            left: (0..d).map(|i| self.left_rep(&unit(i)).expect("dimension")).collect(),
            right: (0..d).map(|i| self.right_rep(&unit(i)).expect("dimension")).collect(),
        }
    }

    /// Checks all `d^3` basis triples and records the outcome.
    pub fn check_associative(&mut self) -> bool {
        self.assoc_checked = self.is_associative();
        self.assoc_checked
    }

    pub fn is_associative(&self) -> bool {
        let d = self.dim;
        let unit = |i: usize| {
            let mut e = vec![Q::zero(); d];
            e[i] = Q::one();
            e
        };
        for i in 0..d {
            for j in 0..d {
                let ij = self.basis_product(i, j).to_vec();
                for k in 0..d {
                    let lhs = self.multiply(&ij, &unit(k)).expect("dimension");
                    let jk = self.basis_product(j, k).to_vec();
                    let rhs = self.multiply(&unit(i), &jk).expect("dimension");
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    /// For proper multiplications left amenability of `(Z^d \ {0}, ∘)` is
    /// equivalent to commutativity.
    pub fn is_left_amenable(&self) -> bool {
        self.is_commutative()
    }

    /// Exact decision of properness for `d <= 2` (assuming associativity).
    pub(crate) fn decide_small_dim(&self) -> ZeroDivisorStatus {
        match self.dim {
            1 => {
                if self.sc[0].is_zero() {
                    ZeroDivisorStatus::Witness(vec![1], vec![1])
                } else {
                    ZeroDivisorStatus::ProvenFree
                }
            }
            2 => self.decide_binary_form(),
            _ => ZeroDivisorStatus::Unknown,
        }
    }

    /// `det ψ(x)` is a binary quadratic form `a x1² + b x1 x2 + c x2²`; the
    /// ring has zero divisors iff the form has a nontrivial rational zero.
    fn decide_binary_form(&self) -> ZeroDivisorStatus {
        let p0 = self.left_rep(&[q(1), q(0)]).expect("dim 2");
        let p1 = self.left_rep(&[q(0), q(1)]).expect("dim 2");
        let det2 = |m: &RatMatrix| m.det().expect("square");
        let a = det2(&p0);
        let c = det2(&p1);
        let b = det2(&(&p0 + &p1)) - &a - &c;
        let root = if a.is_zero() {
            Some(vec![q(1), q(0)])
        } else {
            let disc = &b * &b - q(4) * &a * &c;
            rational_sqrt(&disc).map(|s| {
                let two_a = q(2) * &a;
                let r1 = (-&b - &s) / &two_a;
                let r2 = (-&b + &s) / &two_a;
                let t = if r1 <= r2 { r1 } else { r2 };
                vec![t, q(1)]
            })
        };
        let Some(x) = root else {
            return ZeroDivisorStatus::ProvenFree;
        };
        self.witness_from_singular(&x).unwrap_or(ZeroDivisorStatus::Unknown)
    }

    /// Given `x` with singular ψ(x), returns an integral witness pair.
    fn witness_from_singular(&self, x: &[Q]) -> Option<ZeroDivisorStatus> {
        let xi = clear_denominators(x);
        let xq: Vec<Q> = xi.iter().map(|v| Q::from_integer(v.clone())).collect();
        let k = kernel_rational(&self.left_rep(&xq).ok()?);
        let y = primitive_integer_vector(k.first()?);
        Some(ZeroDivisorStatus::Witness(to_i64(&xi)?, to_i64(&y)?))
    }

    /// Zero-divisor search. Exact for `d <= 2` and for multiplications whose
    /// construction certifies freeness; otherwise scans the sup-norm box.
    pub fn zero_divisor_search(&self, bound: i64) -> ZeroDivisorSearch {
        match &self.zero_divisors {
            ZeroDivisorStatus::ProvenFree => return ZeroDivisorSearch::ProvenFree,
            ZeroDivisorStatus::Witness(x, y) => return ZeroDivisorSearch::Witness(x.clone(), y.clone()),
            ZeroDivisorStatus::Unknown => {}
        }
        if self.dim <= 2 {
            return match self.decide_small_dim() {
                ZeroDivisorStatus::Witness(x, y) => ZeroDivisorSearch::Witness(x, y),
                ZeroDivisorStatus::ProvenFree => ZeroDivisorSearch::ProvenFree,
                ZeroDivisorStatus::Unknown => ZeroDivisorSearch::NoneInBox(bound),
            };
        }
        for x in points::cube(self.dim, bound) {
            let xq: Vec<Q> = x.iter().map(|&v| q(v)).collect();
            let m = self.left_rep(&xq).expect("dimension");
            if m.rank() < self.dim {
                if let Some(ZeroDivisorStatus::Witness(a, b)) = self.witness_from_singular(&xq) {
                    return ZeroDivisorSearch::Witness(a, b);
                }
            }
        }
        ZeroDivisorSearch::NoneInBox(bound)
    }

    /// Runs [`Multiplication::zero_divisor_search`] and records a witness if
    /// one is found.
    pub fn record_zero_divisor_search(&mut self, bound: i64) -> ZeroDivisorSearch {
        let r = self.zero_divisor_search(bound);
        match &r {
            ZeroDivisorSearch::ProvenFree => self.zero_divisors = ZeroDivisorStatus::ProvenFree,
            ZeroDivisorSearch::Witness(x, y) => {
                self.zero_divisors = ZeroDivisorStatus::Witness(x.clone(), y.clone())
            }
            ZeroDivisorSearch::NoneInBox(_) => {}
        }
        r
    }

    /// Least `b > 0` and integral `z` with `b ψ(x)^{-1} = ψ(z)`.
    pub fn reaches_identity(&self, x: &[Q]) -> Result<(BigInt, Vec<BigInt>)> {
        self.require_proper()?;
        check_dim(self.dim, x.len())?;
        if crate::linalg::is_zero_vec(x) {
            return Err(Error::InvalidInput("x must be nonzero".into()));
        }
        let px = self.left_rep(x)?;
        let reps = self.reps();
        let cols: Vec<Vec<Q>> = reps.left.iter().map(|m| (m * &px).vectorize()).collect();
        let a = RatMatrix::from_columns(&cols)?;
        let z0 = solve_rational(&a, &RatMatrix::identity(self.dim).vectorize())?
            .ok_or_else(|| Error::UnverifiedProper("ψ(x)^{-1} is not in the image of ψ".into()))?;
        let b = lcm_of_denominators(&z0);
        let z = z0.iter().map(|e| (e * Q::from_integer(b.clone())).to_integer()).collect();
        Ok((b, z))
    }

    /// The identity element of `(Q^d, ∘)`, if there is one.
    pub fn rational_identity(&self) -> Option<Vec<Q>> {
        let reps = self.reps();
        let d = self.dim;
        let cols: Vec<Vec<Q>> = (0..d)
            .map(|i| {
                let mut v = reps.left[i].vectorize();
                v.extend(reps.right[i].vectorize());
                v
            })
            .collect();
        let a = RatMatrix::from_columns(&cols).ok()?;
        let mut rhs = RatMatrix::identity(d).vectorize();
        rhs.extend(RatMatrix::identity(d).vectorize());
        solve_rational(&a, &rhs).ok().flatten()
    }

    /// Least `c > 0` and integral `w` with `ψ(w) = ψ_r(w) = c·Id`.
    pub fn central_scalar(&self) -> Result<(BigInt, Vec<BigInt>)> {
        self.require_proper()?;
        let u = self
            .rational_identity()
            .ok_or_else(|| Error::UnverifiedProper("no identity element over Q".into()))?;
        let c = lcm_of_denominators(&u);
        let cq = Q::from_integer(c.clone());
        let wq: Vec<Q> = u.iter().map(|e| e * &cq).collect();
        let target = RatMatrix::scalar(self.dim, cq);
        if self.left_rep(&wq)? != target || self.right_rep(&wq)? != target {
            return Err(Error::UnverifiedProper("central scalar post-check failed".into()));
        }
        Ok((c, wq.iter().map(|e| e.to_integer()).collect()))
    }

    /// `x ∘_op y = y ∘ x`.
    pub fn opposite(&self) -> Multiplication {
        let d = self.dim;
        let mut sc = Vec::with_capacity(d * d * d);
        for i in 0..d {
            for j in 0..d {
                sc.extend(self.basis_product(j, i).iter().cloned());
            }
        }
        let provenance = match &self.provenance {
            Provenance::Opposite(base) => (**base).clone(),
            p => Provenance::Opposite(Box::new(p.clone())),
        };
        let zero_divisors = match &self.zero_divisors {
            ZeroDivisorStatus::Witness(x, y) => ZeroDivisorStatus::Witness(y.clone(), x.clone()),
            s => s.clone(),
        };
        let mut m = Multiplication::unchecked(d, sc, provenance).expect("same shape");
        m.assoc_checked = self.assoc_checked;
        m.zero_divisors = zero_divisors;
        m
    }

    /// `x ∘_T y = T^{-1}(Tx ∘ Ty)`; a right action of `GL_d(Q)`.
    pub fn act(&self, t: &RatMatrix) -> Result<Multiplication> {
        let d = self.dim;
        if t.rows() != d || t.cols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: t.rows() });
        }
        let tinv = t.inverse()?;
        let cols: Vec<Vec<Q>> = (0..d).map(|i| t.column(i)).collect();
        let mut sc = Vec::with_capacity(d * d * d);
        for ci in &cols {
            for cj in &cols {
                sc.extend(tinv.mul_vec(&self.multiply(ci, cj)?));
            }
        }
        let zero_divisors = match &self.zero_divisors {
            ZeroDivisorStatus::ProvenFree => ZeroDivisorStatus::ProvenFree,
            ZeroDivisorStatus::Witness(x, y) => {
                let map = |v: &[i64]| {
                    let vq: Vec<Q> = v.iter().map(|&e| q(e)).collect();
                    to_i64(&primitive_integer_vector(&tinv.mul_vec(&vq)))
                };
                match (map(x), map(y)) {
                    (Some(a), Some(b)) => ZeroDivisorStatus::Witness(a, b),
                    _ => ZeroDivisorStatus::Unknown,
                }
            }
            ZeroDivisorStatus::Unknown => ZeroDivisorStatus::Unknown,
        };
        let provenance = Provenance::Acted {
            base: Box::new(self.provenance.clone()),
            matrix: t.clone(),
        };
        let mut m = Multiplication::unchecked(d, sc, provenance)?;
        m.check_associative();
        m.zero_divisors = zero_divisors;
        if m.zero_divisors == ZeroDivisorStatus::Unknown && d <= 2 {
            m.zero_divisors = m.decide_small_dim();
        }
        Ok(m)
    }
}

/// Left and right representations of the standard basis vectors.
#[derive(Clone, Debug)]
pub struct RepPair {
    pub left: Vec<RatMatrix>,
    pub right: Vec<RatMatrix>,
}

impl RepPair {
    fn combine(mats: &[RatMatrix], x: &[Q]) -> RatMatrix {
        let d = mats.len();
        let mut acc = RatMatrix::zeros(d, d);
        for (m, c) in mats.iter().zip(x) {
            if !c.is_zero() {
                acc = &acc + &m.scale(c);
            }
        }
        acc
    }

    pub fn left(&self, x: &[Q]) -> RatMatrix {
        Self::combine(&self.left, x)
    }

    pub fn right(&self, x: &[Q]) -> RatMatrix {
        Self::combine(&self.right, x)
    }
}

fn rational_sqrt(v: &Q) -> Option<Q> {
    if v.is_negative() {
        return None;
    }
    let n = num_integer::Roots::sqrt(v.numer());
    let d = num_integer::Roots::sqrt(v.denom());
    if &(&n * &n) == v.numer() && &(&d * &d) == v.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

fn to_i64(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(ToPrimitive::to_i64).collect()
}
