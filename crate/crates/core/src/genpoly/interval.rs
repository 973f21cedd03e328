//! Fixed-point interval arithmetic: a value at precision `p` is an integer
//! pair `[lo, hi]` standing for `[lo / 2^p, hi / 2^p]`, rounded outward.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Atom, Expr};
use crate::error::{Error, Result};
use crate::linalg::Q;

pub const DEFAULT_BITS: u32 = 128;
pub const MAX_BITS: u32 = 2048;

/// Working precision of the cached transcendental constants. Every lower
/// precision rounds the same enclosure outward, so enclosures nest.
const CONST_BITS: u32 = MAX_BITS + 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalValue {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

fn floor_shift(x: &BigInt, s: u32) -> BigInt {
    // arithmetic right shift on BigInt floors toward -inf
    x >> s
}

fn ceil_shift(x: &BigInt, s: u32) -> BigInt {
    -((-x) >> s)
}

impl IntervalValue {
    fn new(lo: BigInt, hi: BigInt, bits: u32) -> Self {
        debug_assert!(lo <= hi);
        IntervalValue { lo, hi, bits }
    }

    pub fn lower(&self) -> Q {
        Q::new(self.lo.clone(), pow2(self.bits))
    }

    pub fn upper(&self) -> Q {
        Q::new(self.hi.clone(), pow2(self.bits))
    }

    pub fn width(&self) -> Q {
        Q::new(&self.hi - &self.lo, pow2(self.bits))
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Whether `[lower, upper]` contains `other`'s interval.
    pub fn contains(&self, other: &IntervalValue) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn midpoint_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let mid = (self.lower() + self.upper()) / Q::from_integer(2.into());
        mid.to_f64().unwrap_or(f64::NAN)
    }

    /// Enclosure of the distance to the nearest integer.
    pub fn nearest_int_distance(&self) -> IntervalValue {
        let p = self.bits;
        if p == 0 {
            return IntervalValue::new(BigInt::zero(), BigInt::zero(), 0);
        }
        let one = pow2(p);
        let half = pow2(p - 1);
        let (lo, hi) = (self.lo.clone(), self.hi.clone());
        let dist = |y: &BigInt| -> BigInt {
            let r = y.mod_floor(&one);
            let s = &one - &r;
            r.min(s)
        };
        let contains_int = floor_shift(&lo, p) != floor_shift(&hi, p) || lo.mod_floor(&one).is_zero();
        let shifted_lo = &lo - &half;
        let shifted_hi = &hi - &half;
        let contains_half =
            floor_shift(&shifted_lo, p) != floor_shift(&shifted_hi, p) || shifted_lo.mod_floor(&one).is_zero();
        let (dl, dh) = (dist(&lo), dist(&hi));
        let low = if contains_int { BigInt::zero() } else { dl.clone().min(dh.clone()) };
        let high = if contains_half { half } else { dl.max(dh) };
        IntervalValue::new(low, high, p)
    }

    fn frac(self) -> Result<IntervalValue> {
        let p = self.bits;
        let fl = floor_shift(&self.lo, p);
        if fl != floor_shift(&self.hi, p) {
            return Err(Error::Straddle { bits: p });
        }
        let base = fl << p;
        Ok(IntervalValue::new(&self.lo - &base, &self.hi - &base, p))
    }

    fn add(self, o: IntervalValue) -> IntervalValue {
        IntervalValue::new(self.lo + o.lo, self.hi + o.hi, self.bits)
    }

    fn mul(self, o: IntervalValue) -> IntervalValue {
        let p = self.bits;
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let mn = c.iter().min().unwrap();
        let mx = c.iter().max().unwrap();
        IntervalValue::new(floor_shift(mn, p), ceil_shift(mx, p), p)
    }

    fn scale_int(self, k: &BigInt) -> IntervalValue {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if a <= b {
            IntervalValue::new(a, b, self.bits)
        } else {
            IntervalValue::new(b, a, self.bits)
        }
    }
}

impl std::fmt::Display for IntervalValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lower())
        } else {
            write!(f, "[{}, {}] @{} bits (~{:.12})", self.lower(), self.upper(), self.bits, self.midpoint_f64())
        }
    }
}

/// Rounds an enclosure at `CONST_BITS` outward to `p` bits.
fn round_const(c: &(BigInt, BigInt), p: u32) -> IntervalValue {
    let s = CONST_BITS - p;
    IntervalValue::new(floor_shift(&c.0, s), ceil_shift(&c.1, s), p)
}

/// `arctan(1/x) · 2^q` as `(approx, err)` with the true value in `approx ± err`.
fn arctan_inv(x: u32, q: u32) -> (BigInt, BigInt) {
    let x2 = BigInt::from(x) * x;
    let mut t = pow2(q) / x;
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !t.is_zero() {
        let term = &t / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        t /= &x2;
        k += 1;
    }
    // each term is off by < 2 units, the tail by < 1
    (sum, BigInt::from(2 * k + 1))
}

fn pi_enclosure() -> &'static (BigInt, BigInt) {
    static PI: OnceLock<(BigInt, BigInt)> = OnceLock::new();
    PI.get_or_init(|| {
        let g = 32;
        let q = CONST_BITS + g;
        let (a5, e5) = arctan_inv(5, q);
        let (a239, e239) = arctan_inv(239, q);
        let approx = a5 * 16 - a239 * 4;
        let err = e5 * 16 + e239 * 4;
        (floor_shift(&(&approx - &err), g), ceil_shift(&(&approx + &err), g))
    })
}

fn e_enclosure() -> &'static (BigInt, BigInt) {
    static E: OnceLock<(BigInt, BigInt)> = OnceLock::new();
    E.get_or_init(|| {
        let g = 32;
        let q = CONST_BITS + g;
        let mut t = pow2(q);
        let mut sum = BigInt::zero();
        let mut k: u64 = 0;
        while !t.is_zero() {
            sum += &t;
            k += 1;
            t /= k;
        }
        // floors lose < 1 unit per term; the tail is < 2 units
        let err = BigInt::from(k + 2);
        (floor_shift(&sum, g), ceil_shift(&(&sum + err), g))
    })
}

fn root_enclosure(k: u64, j: u32, p: u32) -> Result<IntervalValue> {
    if j == 0 {
        return Err(Error::InvalidInput("root index must be positive".into()));
    }
    let shifted = BigInt::from(k) << (p as usize * j as usize);
    let r = shifted.nth_root(j);
    let exact = r.pow(j) == shifted;
    let hi = if exact { r.clone() } else { &r + 1 };
    Ok(IntervalValue::new(r, hi, p))
}

fn atom_enclosure(a: &Atom, p: u32) -> Result<IntervalValue> {
    Ok(match a {
        Atom::Int(k) => IntervalValue::new(k << p, k << p, p),
        Atom::Dec { digits, scale } => {
            let num = digits << p;
            let den = BigInt::from(10u32).pow(*scale);
            let (q, r) = num.div_mod_floor(&den);
            let hi = if r.is_zero() { q.clone() } else { &q + 1 };
            IntervalValue::new(q, hi, p)
        }
        Atom::Pi => round_const(pi_enclosure(), p),
        Atom::E => round_const(e_enclosure(), p),
        Atom::Sqrt(k) => root_enclosure(*k, 2, p)?,
        Atom::Root(k, j) => root_enclosure(*k, *j, p)?,
    })
}

fn coeff_enclosure(coeff: &[Atom], p: u32) -> Result<IntervalValue> {
    let one = pow2(p);
    let mut acc = IntervalValue::new(one.clone(), one, p);
    for a in coeff {
        acc = acc.mul(atom_enclosure(a, p)?);
    }
    Ok(acc)
}

fn eval_rec(f: &Expr, x: &[BigInt], p: u32) -> Result<IntervalValue> {
    match f {
        Expr::Linear { coeff, var } => Ok(coeff_enclosure(coeff, p)?.scale_int(&x[*var])),
        Expr::Add(a, b) => Ok(eval_rec(a, x, p)?.add(eval_rec(b, x, p)?)),
        Expr::Mul(a, b) => Ok(eval_rec(a, x, p)?.mul(eval_rec(b, x, p)?)),
        Expr::Frac(a) => eval_rec(a, x, p)?.frac(),
    }
}

/// Enclosure of `f(x)` at exactly `bits` fractional bits, without retries.
pub fn eval_at(f: &Expr, x: &[i64], bits: u32) -> Result<IntervalValue> {
    if bits == 0 || bits > MAX_BITS {
        return Err(Error::InvalidInput(format!("precision must lie in 1..={MAX_BITS} bits")));
    }
    if x.len() < f.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: f.num_vars(),
            found: x.len(),
        });
    }
    let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
    eval_rec(f, &xb, bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genpoly::parse;

    #[test]
    fn pi_and_e_digits() {
        let pi = round_const(pi_enclosure(), 200);
        let lo = Q::new(314159265358979323846264338327u128.into(), BigInt::from(10u32).pow(29));
        let hi = Q::new(314159265358979323846264338328u128.into(), BigInt::from(10u32).pow(29));
        assert!(pi.lower() > lo && pi.upper() < hi);
        let e = round_const(e_enclosure(), 200);
        let lo = Q::new(271828182845904523536028747135u128.into(), BigInt::from(10u32).pow(29));
        let hi = Q::new(271828182845904523536028747136u128.into(), BigInt::from(10u32).pow(29));
        assert!(e.lower() > lo && e.upper() < hi);
        assert!(pi.hi.clone() - pi.lo.clone() <= BigInt::from(2));
    }

    #[test]
    fn sqrt2_width() {
        let v = eval_at(&parse("sqrt(2)*n").unwrap(), &[1], 64).unwrap();
        assert!(v.width() < Q::new(1.into(), pow2(60)));
        let two = Q::from_integer(2.into());
        assert!(v.lower() * v.lower() < two && v.upper() * v.upper() > two);
    }

    #[test]
    fn distance_enclosure() {
        let v = IntervalValue::new(BigInt::from(3), BigInt::from(5), 2); // [0.75, 1.25]
        let d = v.nearest_int_distance();
        assert_eq!((d.lower(), d.upper()), (Q::from_integer(0.into()), Q::new(1.into(), 4.into())));
        let v = IntervalValue::new(BigInt::from(-7), BigInt::from(-5), 3); // [-0.875, -0.625]
        let d = v.nearest_int_distance();
        assert_eq!((d.lower(), d.upper()), (Q::new(1.into(), 8.into()), Q::new(3.into(), 8.into())));
    }
}
