//! Field elements: exact rationals for the archimedean fields, capped
//! relative-precision expansions for p-adic and Laurent-series fields.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Absolute precision marker of an exact zero.
pub const EXACT: i64 = i64::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Unit {
    /// Residue of the unit part modulo p^prec.
    Int(BigInt),
    /// Coefficients of the unit power series, length = prec.
    Poly(Vec<u64>),
}

/// Element of Q_p or F_q((t)). `prec == 0` encodes zero; in that case
/// `val` holds the absolute precision to which it is known to vanish.
#[derive(Clone, Debug)]
pub struct LocalNum {
    pub(crate) p: u64,
    pub(crate) val: i64,
    pub(crate) prec: u32,
    pub(crate) unit: Unit,
}

#[derive(Clone, Debug)]
pub enum FieldElem {
    Rat(BigRational),
    Local(LocalNum),
}

pub(crate) fn ppow(p: u64, n: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), n as usize)
}

fn inv_mod_u64(a: u64, q: u64) -> u64 {
    let e = (a as i64).extended_gcd(&(q as i64));
    e.x.rem_euclid(q as i64) as u64
}

impl LocalNum {
    fn is_laurent(&self) -> bool {
        matches!(self.unit, Unit::Poly(_))
    }

    pub(crate) fn zero_with(p: u64, laurent: bool, abs: i64) -> Self {
        LocalNum {
            p,
            val: abs,
            prec: 0,
            unit: if laurent { Unit::Poly(Vec::new()) } else { Unit::Int(BigInt::zero()) },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.prec == 0
    }

    /// Absolute precision: the element is known modulo π^abs.
    pub fn abs_prec(&self) -> i64 {
        if self.prec == 0 {
            self.val
        } else {
            self.val.saturating_add(self.prec as i64)
        }
    }

    pub fn from_rational(p: u64, laurent: bool, r: &BigRational, prec: u32) -> Result<Self> {
        if r.is_zero() {
            return Ok(Self::zero_with(p, laurent, EXACT));
        }
        if laurent {
            let n = r.numer().mod_floor(&BigInt::from(p)).to_u64().unwrap_or(0);
            let d = r.denom().mod_floor(&BigInt::from(p)).to_u64().unwrap_or(0);
            if d == 0 {
                return Err(Error::Invalid(format!("{r} has no image in characteristic {p}")));
            }
            if n == 0 {
                return Ok(Self::zero_with(p, true, EXACT));
            }
            let mut c = vec![0u64; prec as usize];
            c[0] = n * inv_mod_u64(d, p) % p;
            return Ok(LocalNum { p, val: 0, prec, unit: Unit::Poly(c) });
        }
        let pb = BigInt::from(p);
        let (mut n, mut d) = (r.numer().clone(), r.denom().clone());
        let mut v = 0i64;
        while (&n % &pb).is_zero() {
            n /= &pb;
            v += 1;
        }
        while (&d % &pb).is_zero() {
            d /= &pb;
            v -= 1;
        }
        let m = ppow(p, prec);
        let dinv = d.extended_gcd(&m).x;
        let u = (n * dinv).mod_floor(&m);
        Ok(LocalNum { p, val: v, prec, unit: Unit::Int(u) })
    }

    /// Laurent series t^val * (c0 + c1 t + ...), coefficients mod q.
    pub fn laurent(q: u64, val: i64, coeffs: &[i64], prec: u32) -> Self {
        let mut c: Vec<u64> = (0..prec as usize)
            .map(|i| coeffs.get(i).map(|&x| x.rem_euclid(q as i64) as u64).unwrap_or(0))
            .collect();
        let shift = c.iter().position(|&x| x != 0);
        match shift {
            None => Self::zero_with(q, true, EXACT),
            Some(s) => {
                c.drain(0..s);
                c.resize(prec as usize, 0);
                LocalNum { p: q, val: val + s as i64, prec, unit: Unit::Poly(c) }
            }
        }
    }

    /// Residue of the unit part modulo π^k as an integer (p-adic) or the
    /// k-th coefficient list (Laurent).
    pub fn unit_int(&self) -> Option<&BigInt> {
        match &self.unit {
            Unit::Int(u) if self.prec > 0 => Some(u),
            _ => None,
        }
    }

    pub fn unit_coeffs(&self) -> Option<&[u64]> {
        match &self.unit {
            Unit::Poly(c) if self.prec > 0 => Some(c),
            _ => None,
        }
    }

    pub fn valuation(&self) -> Option<i64> {
        if self.prec == 0 {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn relative_precision(&self) -> u32 {
        self.prec
    }

    /// Builds a normalized number from `unit * π^val` known modulo π^abs.
    fn normalize(p: u64, val: i64, abs: i64, unit: Unit) -> Self {
        if abs == EXACT {
            // exact inputs never reach here with a finite unit expansion
            unreachable!("normalize called with exact absolute precision");
        }
        let n = (abs - val).max(0) as u32;
        match unit {
            Unit::Int(u) => {
                let pb = BigInt::from(p);
                let m = ppow(p, n);
                let mut u = u.mod_floor(&m);
                if u.is_zero() {
                    return Self::zero_with(p, false, abs);
                }
                let mut k = 0u32;
                while (&u % &pb).is_zero() {
                    u /= &pb;
                    k += 1;
                }
                LocalNum { p, val: val + k as i64, prec: n - k, unit: Unit::Int(u) }
            }
            Unit::Poly(mut c) => {
                c.truncate(n as usize);
                c.resize(n as usize, 0);
                match c.iter().position(|&x| x != 0) {
                    None => Self::zero_with(p, true, abs),
                    Some(k) => {
                        c.drain(0..k);
                        LocalNum { p, val: val + k as i64, prec: n - k as u32, unit: Unit::Poly(c) }
                    }
                }
            }
        }
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let laurent = self.is_laurent();
        let p = self.p;
        if other.is_zero() && other.val == EXACT {
            return self.clone();
        }
        if self.is_zero() && self.val == EXACT {
            return if negate_other { other.neg_impl() } else { other.clone() };
        }
        let abs = self.abs_prec().min(other.abs_prec());
        if self.is_zero() && other.is_zero() {
            return Self::zero_with(p, laurent, abs);
        }
        let v0 = match (self.is_zero(), other.is_zero()) {
            (true, _) => other.val,
            (_, true) => self.val,
            _ => self.val.min(other.val),
        };
        if abs <= v0 {
            return Self::zero_with(p, laurent, abs);
        }
        let n = (abs - v0) as u32;
        let unit = match (&self.unit, &other.unit) {
            (Unit::Int(a), Unit::Int(b)) => {
                let mut s = BigInt::zero();
                if !self.is_zero() {
                    s += a * ppow(p, (self.val - v0) as u32);
                }
                if !other.is_zero() {
                    let t = b * ppow(p, (other.val - v0) as u32);
                    if negate_other {
                        s -= t;
                    } else {
                        s += t;
                    }
                }
                Unit::Int(s)
            }
            (Unit::Poly(a), Unit::Poly(b)) => {
                let mut s = vec![0u64; n as usize];
                if !self.is_zero() {
                    let off = (self.val - v0) as usize;
                    for (i, &x) in a.iter().enumerate() {
                        if off + i < s.len() {
                            s[off + i] = (s[off + i] + x) % p;
                        }
                    }
                }
                if !other.is_zero() {
                    let off = (other.val - v0) as usize;
                    for (i, &x) in b.iter().enumerate() {
                        if off + i < s.len() {
                            let x = if negate_other { (p - x) % p } else { x };
                            s[off + i] = (s[off + i] + x) % p;
                        }
                    }
                }
                Unit::Poly(s)
            }
            _ => panic!("mixing p-adic and Laurent elements"),
        };
        Self::normalize(p, v0, abs, unit)
    }

    fn neg_impl(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let unit = match &self.unit {
            Unit::Int(u) => Unit::Int((-u).mod_floor(&ppow(self.p, self.prec))),
            Unit::Poly(c) => Unit::Poly(c.iter().map(|&x| (self.p - x) % self.p).collect()),
        };
        LocalNum { unit, ..self.clone() }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let laurent = self.is_laurent();
        let p = self.p;
        match (self.is_zero(), other.is_zero()) {
            (true, true) => {
                let abs = if self.val == EXACT || other.val == EXACT {
                    EXACT
                } else {
                    self.val + other.val
                };
                return Self::zero_with(p, laurent, abs);
            }
            (true, false) => {
                let abs = if self.val == EXACT { EXACT } else { self.val + other.val };
                return Self::zero_with(p, laurent, abs);
            }
            (false, true) => {
                let abs = if other.val == EXACT { EXACT } else { other.val + self.val };
                return Self::zero_with(p, laurent, abs);
            }
            _ => {}
        }
        let n = self.prec.min(other.prec);
        let unit = match (&self.unit, &other.unit) {
            (Unit::Int(a), Unit::Int(b)) => Unit::Int((a * b).mod_floor(&ppow(p, n))),
            (Unit::Poly(a), Unit::Poly(b)) => Unit::Poly(poly_mul(a, b, n as usize, p)),
            _ => panic!("mixing p-adic and Laurent elements"),
        };
        LocalNum { p, val: self.val + other.val, prec: n, unit }
    }

    fn inv_impl(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let unit = match &self.unit {
            Unit::Int(u) => {
                let m = ppow(self.p, self.prec);
                Unit::Int(u.extended_gcd(&m).x.mod_floor(&m))
            }
            Unit::Poly(c) => Unit::Poly(poly_inv(c, self.p)),
        };
        Ok(LocalNum { p: self.p, val: -self.val, prec: self.prec, unit })
    }

    /// Reduces the relative precision to at most `prec` digits.
    pub fn truncate(&self, prec: u32) -> Self {
        if self.is_zero() || self.prec <= prec {
            return self.clone();
        }
        let unit = match &self.unit {
            Unit::Int(u) => Unit::Int(u.mod_floor(&ppow(self.p, prec))),
            Unit::Poly(c) => Unit::Poly(c[..prec as usize].to_vec()),
        };
        LocalNum { prec, unit, ..self.clone() }
    }
}

fn poly_mul(a: &[u64], b: &[u64], n: usize, q: u64) -> Vec<u64> {
    let mut out = vec![0u64; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] = (out[i + j] + x * y) % q;
        }
    }
    out
}

fn poly_inv(a: &[u64], q: u64) -> Vec<u64> {
    let n = a.len();
    let a0inv = inv_mod_u64(a[0], q);
    let mut b = vec![0u64; n];
    b[0] = a0inv;
    for k in 1..n {
        let mut s = 0u64;
        for j in 1..=k {
            s = (s + a[j] * b[k - j]) % q;
        }
        b[k] = (q - s) % q * a0inv % q;
    }
    b
}

impl FieldElem {
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Local(l) => l.is_zero(),
        }
    }

    /// True only for zeros known exactly (as opposed to cancellation
    /// below the tracked precision).
    pub fn is_exact_zero(&self) -> bool {
        match self {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Local(l) => l.is_zero() && l.val == EXACT,
        }
    }

    /// Valuation for nonarchimedean elements; `None` for zero or for
    /// archimedean fields.
    pub fn valuation(&self) -> Option<i64> {
        match self {
            FieldElem::Rat(_) => None,
            FieldElem::Local(l) => l.valuation(),
        }
    }

    /// Ordering key for pivot selection: smaller is a better pivot.
    pub(crate) fn pivot_key(&self) -> Option<i64> {
        match self {
            FieldElem::Rat(r) if r.is_zero() => None,
            FieldElem::Rat(r) => {
                // prefer small heights for exact rationals
                let h = r.numer().bits() + r.denom().bits();
                Some(h as i64)
            }
            FieldElem::Local(l) => l.valuation(),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElem::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_local(&self) -> Option<&LocalNum> {
        match self {
            FieldElem::Local(l) => Some(l),
            _ => None,
        }
    }

    pub fn inv(&self) -> Result<FieldElem> {
        match self {
            FieldElem::Rat(r) => {
                if r.is_zero() {
                    Err(Error::ZeroElement)
                } else {
                    Ok(FieldElem::Rat(r.recip()))
                }
            }
            FieldElem::Local(l) => Ok(FieldElem::Local(l.inv_impl()?)),
        }
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> FieldElem {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub(crate) fn one_like(&self) -> FieldElem {
        match self {
            FieldElem::Rat(_) => FieldElem::Rat(BigRational::one()),
            FieldElem::Local(l) => {
                let unit = match &l.unit {
                    Unit::Int(_) => Unit::Int(BigInt::one()),
                    Unit::Poly(_) => {
                        let n = l.prec.max(1) as usize;
                        let mut c = vec![0; n];
                        c[0] = 1;
                        Unit::Poly(c)
                    }
                };
                let prec = match &unit {
                    Unit::Poly(c) => c.len() as u32,
                    Unit::Int(_) => l.prec.max(1),
                };
                FieldElem::Local(LocalNum { p: l.p, val: 0, prec, unit })
            }
        }
    }

    /// Sign of a real element.
    pub fn sign(&self) -> Option<i8> {
        match self {
            FieldElem::Rat(r) if r.is_positive() => Some(1),
            FieldElem::Rat(r) if r.is_negative() => Some(-1),
            _ => None,
        }
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => a == b,
            (FieldElem::Local(_), FieldElem::Local(_)) => (self - other).is_zero(),
            _ => false,
        }
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a + b),
            (FieldElem::Local(a), FieldElem::Local(b)) => FieldElem::Local(a.add_impl(b, false)),
            _ => panic!("adding elements of different fields"),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a - b),
            (FieldElem::Local(a), FieldElem::Local(b)) => FieldElem::Local(a.add_impl(b, true)),
            _ => panic!("subtracting elements of different fields"),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Rat(a), FieldElem::Rat(b)) => FieldElem::Rat(a * b),
            (FieldElem::Local(a), FieldElem::Local(b)) => FieldElem::Local(a.mul_impl(b)),
            _ => panic!("multiplying elements of different fields"),
        }
    }
}

impl<'a> Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    /// Panics on division by zero; use [`FieldElem::checked_div`] when the
    /// divisor may vanish.
    fn div(self, rhs: &FieldElem) -> FieldElem {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl<'a> Neg for &'a FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Rat(a) => FieldElem::Rat(-a),
            FieldElem::Local(a) => FieldElem::Local(a.neg_impl()),
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rat(r) => write!(f, "{r}"),
            FieldElem::Local(l) if l.is_zero() => {
                if l.val == EXACT {
                    write!(f, "0")
                } else {
                    write!(f, "O(π^{})", l.val)
                }
            }
            FieldElem::Local(l) => match &l.unit {
                Unit::Int(u) => write!(f, "{}^{} * {} + O(π^{})", l.p, l.val, u, l.abs_prec()),
                Unit::Poly(c) => {
                    let shown: Vec<String> = c.iter().take(6).map(|x| x.to_string()).collect();
                    write!(f, "t^{} * [{}..] + O(t^{})", l.val, shown.join(","), l.abs_prec())
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn padic(p: u64, n: i64, d: i64) -> FieldElem {
        FieldElem::Local(LocalNum::from_rational(p, false, &q(n, d), 20).unwrap())
    }

    #[test]
    fn padic_valuation_and_inverse() {
        let x = padic(5, 50, 3);
        assert_eq!(x.valuation(), Some(2));
        let y = x.inv().unwrap();
        assert_eq!(y.valuation(), Some(-2));
        let one = &x * &y;
        assert_eq!(one, padic(5, 1, 1));
    }

    #[test]
    fn padic_cancellation_loses_precision() {
        let a = padic(3, 1, 1);
        let b = padic(3, 1 + 81, 1);
        let d = &b - &a;
        assert_eq!(d.valuation(), Some(4));
        assert_eq!(d.as_local().unwrap().relative_precision(), 16);
        let z = &a - &a;
        assert!(z.is_zero());
        assert!(!z.is_exact_zero());
    }

    #[test]
    fn rational_arithmetic_matches_padic_image() {
        let a = padic(7, 22, 9);
        let b = padic(7, -5, 49);
        let s = &a + &b;
        assert_eq!(s, padic(7, 22 * 49 - 45, 441));
        let m = &a * &b;
        assert_eq!(m, padic(7, -110, 441));
    }

    #[test]
    fn laurent_arithmetic() {
        let t = FieldElem::Local(LocalNum::laurent(3, 1, &[1], 10));
        let one_plus_t = FieldElem::Local(LocalNum::laurent(3, 0, &[1, 1], 10));
        let inv = one_plus_t.inv().unwrap();
        let l = inv.as_local().unwrap();
        // 1/(1+t) = 1 - t + t^2 - ... over F_3
        assert_eq!(&l.unit_coeffs().unwrap()[..4], &[1, 2, 1, 2]);
        let x = &(&t * &t) - &t;
        assert_eq!(x.valuation(), Some(1));
        let three = FieldElem::Local(LocalNum::from_rational(3, true, &q(3, 1), 10).unwrap());
        assert!(three.is_exact_zero());
    }
}
