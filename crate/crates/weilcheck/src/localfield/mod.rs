//! Local fields R, C, Q_p and F_q((t)): elements, square classes, Hilbert
//! symbols and characters.

mod character;
mod elem;

pub use character::{psi_eval, AdditiveCharacter};
pub use elem::{FieldElem, LocalNum, EXACT};

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 48;
pub const MIN_PRECISION: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Real,
    Complex,
    Padic(u64),
    Laurent(u64),
}

/// A ground field together with the working precision.
///
/// `hilbert_flip` deliberately corrupts one entry of the Hilbert symbol
/// table; it exists only for negative-control runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundField {
    pub kind: FieldKind,
    pub precision: u32,
    pub hilbert_flip: Option<(u8, u8)>,
}

/// Element of F^×/(F^×)², stored as bits in a fixed F_2-basis:
/// Real: (−1); Q_p, F_q((t)) odd: (u, π); Q_2: (−1, 5, 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    pub kind: FieldKind,
    pub bits: u8,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn legendre(a: i64, p: u64) -> i8 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    let mut r = 1u64;
    let mut b = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

/// Least positive quadratic nonresidue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a as i64, p) == -1).expect("odd prime has a nonresidue")
}

impl FieldKind {
    pub fn class_bits(self) -> u8 {
        match self {
            FieldKind::Complex => 0,
            FieldKind::Real => 1,
            FieldKind::Padic(2) => 3,
            FieldKind::Padic(_) | FieldKind::Laurent(_) => 2,
        }
    }
}

impl GroundField {
    pub fn new(kind: FieldKind, precision: u32) -> Result<Self> {
        match kind {
            FieldKind::Padic(p) if !is_prime(p) => {
                return Err(Error::Invalid(format!("{p} is not prime")))
            }
            FieldKind::Laurent(q) if q == 2 || !is_prime(q) => {
                return Err(Error::Invalid(format!("residue field order {q} must be an odd prime")))
            }
            _ => {}
        }
        if precision < MIN_PRECISION {
            return Err(Error::Invalid(format!("precision {precision} below minimum {MIN_PRECISION}")));
        }
        Ok(GroundField { kind, precision, hilbert_flip: None })
    }

    pub fn real() -> Self {
        GroundField { kind: FieldKind::Real, precision: DEFAULT_PRECISION, hilbert_flip: None }
    }

    pub fn complex() -> Self {
        GroundField { kind: FieldKind::Complex, precision: DEFAULT_PRECISION, hilbert_flip: None }
    }

    pub fn padic(p: u64) -> Result<Self> {
        Self::new(FieldKind::Padic(p), DEFAULT_PRECISION)
    }

    pub fn laurent(q: u64) -> Result<Self> {
        Self::new(FieldKind::Laurent(q), DEFAULT_PRECISION)
    }

    pub fn with_precision(self, precision: u32) -> Result<Self> {
        let mut f = Self::new(self.kind, precision)?;
        f.hilbert_flip = self.hilbert_flip;
        Ok(f)
    }

    /// Same field with the Hilbert symbol of the classes `a`, `b` negated.
    pub fn with_mutated_hilbert(self, a: SquareClass, b: SquareClass) -> Self {
        GroundField { hilbert_flip: Some((a.bits, b.bits)), ..self }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self.kind, FieldKind::Real | FieldKind::Complex)
    }

    /// Residue characteristic p (or q) of a nonarchimedean field.
    pub fn residue_char(&self) -> Option<u64> {
        match self.kind {
            FieldKind::Padic(p) | FieldKind::Laurent(p) => Some(p),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self.kind {
            FieldKind::Laurent(q) => q,
            _ => 0,
        }
    }

    /// Order of the residue field.
    pub fn residue_order(&self) -> Option<u64> {
        self.residue_char()
    }

    /// Valuation of 2 (only nonzero for Q_2).
    pub fn v2(&self) -> u32 {
        if self.kind == FieldKind::Padic(2) {
            1
        } else {
            0
        }
    }

    pub fn nonresidue(&self) -> Option<u64> {
        match self.kind {
            FieldKind::Padic(p) | FieldKind::Laurent(p) if p != 2 => Some(least_nonresidue(p)),
            _ => None,
        }
    }

    pub fn descriptor(&self) -> String {
        match self.kind {
            FieldKind::Real => "R".into(),
            FieldKind::Complex => "C".into(),
            FieldKind::Padic(p) => format!("Qp:{p}"),
            FieldKind::Laurent(q) => format!("Fq((t)):{q}"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let kind = if s == "R" {
            FieldKind::Real
        } else if s == "C" {
            FieldKind::Complex
        } else if let Some(p) = s.strip_prefix("Qp:") {
            FieldKind::Padic(p.parse().map_err(|_| Error::Invalid(format!("bad field {s}")))?)
        } else if let Some(q) = s.strip_prefix("Fq((t)):") {
            FieldKind::Laurent(q.parse().map_err(|_| Error::Invalid(format!("bad field {s}")))?)
        } else {
            return Err(Error::Invalid(format!("unknown field descriptor {s}")));
        };
        Self::new(kind, DEFAULT_PRECISION)
    }

    // ----- elements -----

    pub fn rational(&self, r: &BigRational) -> Result<FieldElem> {
        match self.kind {
            FieldKind::Real | FieldKind::Complex => Ok(FieldElem::Rat(r.clone())),
            FieldKind::Padic(p) => Ok(FieldElem::Local(LocalNum::from_rational(p, false, r, self.precision)?)),
            FieldKind::Laurent(q) => Ok(FieldElem::Local(LocalNum::from_rational(q, true, r, self.precision)?)),
        }
    }

    pub fn frac(&self, n: i64, d: i64) -> Result<FieldElem> {
        self.rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Image of an integer. Never fails: integers always embed (possibly as 0).
    pub fn int(&self, n: i64) -> FieldElem {
        self.rational(&BigRational::from_integer(BigInt::from(n))).expect("integers embed")
    }

    pub fn zero(&self) -> FieldElem {
        self.int(0)
    }

    pub fn one(&self) -> FieldElem {
        self.int(1)
    }

    /// The uniformizer p or t.
    pub fn uniformizer(&self) -> Result<FieldElem> {
        match self.kind {
            FieldKind::Padic(p) => Ok(self.int(p as i64)),
            FieldKind::Laurent(q) => Ok(FieldElem::Local(LocalNum::laurent(q, 1, &[1], self.precision))),
            _ => Err(Error::Invalid("archimedean fields have no uniformizer".into())),
        }
    }

    /// π^k for any integer k.
    pub fn pi_pow(&self, k: i64) -> Result<FieldElem> {
        let pi = self.uniformizer()?;
        let base = if k < 0 { pi.inv()? } else { pi };
        Ok(base.pow(k.unsigned_abs() as u32))
    }

    /// Laurent series t^val (c0 + c1 t + ...).
    pub fn series(&self, val: i64, coeffs: &[i64]) -> Result<FieldElem> {
        match self.kind {
            FieldKind::Laurent(q) => Ok(FieldElem::Local(LocalNum::laurent(q, val, coeffs, self.precision))),
            _ => Err(Error::Invalid("series() needs a Laurent-series field".into())),
        }
    }

    // ----- square classes -----

    pub fn classes(&self) -> Vec<SquareClass> {
        let n = self.kind.class_bits();
        (0..(1u8 << n)).map(|bits| SquareClass { kind: self.kind, bits }).collect()
    }

    pub fn class_one(&self) -> SquareClass {
        SquareClass { kind: self.kind, bits: 0 }
    }

    pub fn class_minus_one(&self) -> SquareClass {
        self.square_class(&self.int(-1)).expect("-1 is a unit")
    }

    pub fn square_class(&self, x: &FieldElem) -> Result<SquareClass> {
        if x.is_zero() {
            return Err(if x.is_exact_zero() {
                Error::ZeroElement
            } else {
                Error::InsufficientPrecision("element vanishes to working precision".into())
            });
        }
        let bits = match (self.kind, x) {
            (FieldKind::Complex, _) => 0,
            (FieldKind::Real, FieldElem::Rat(r)) => u8::from(r < &BigRational::zero()),
            (FieldKind::Padic(2), FieldElem::Local(l)) => {
                if l.relative_precision() < 3 {
                    return Err(Error::InsufficientPrecision(format!(
                        "need 3 unit digits at p = 2, have {}",
                        l.relative_precision()
                    )));
                }
                let u8m = l.unit_int().expect("nonzero").mod_floor(&BigInt::from(8)).to_u64().unwrap();
                let neg = u8::from(u8m % 4 == 3);
                let five = u8::from(u8m == 3 || u8m == 5);
                let two = u8::from(l.val.rem_euclid(2) == 1);
                neg | (five << 1) | (two << 2)
            }
            (FieldKind::Padic(p), FieldElem::Local(l)) => {
                let r = l.unit_int().expect("nonzero").mod_floor(&BigInt::from(p)).to_i64().unwrap();
                u8::from(legendre(r, p) == -1) | (u8::from(l.val.rem_euclid(2) == 1) << 1)
            }
            (FieldKind::Laurent(q), FieldElem::Local(l)) => {
                let c0 = l.unit_coeffs().expect("nonzero")[0];
                u8::from(legendre(c0 as i64, q) == -1) | (u8::from(l.val.rem_euclid(2) == 1) << 1)
            }
            _ => return Err(Error::FieldMismatch),
        };
        Ok(SquareClass { kind: self.kind, bits })
    }

    /// Canonical representative of a square class as a field element.
    pub fn class_rep(&self, c: SquareClass) -> FieldElem {
        let (n, v) = self.class_rep_parts(c);
        match self.kind {
            FieldKind::Laurent(q) => FieldElem::Local(LocalNum::laurent(q, v, &[n], self.precision)),
            FieldKind::Padic(p) => self.int(n * (p as i64).pow(v as u32)),
            _ => self.int(n),
        }
    }

    /// (integer unit part, power of π) of the canonical representative.
    fn class_rep_parts(&self, c: SquareClass) -> (i64, i64) {
        let b = c.bits;
        match self.kind {
            FieldKind::Complex => (1, 0),
            FieldKind::Real => (if b & 1 == 1 { -1 } else { 1 }, 0),
            FieldKind::Padic(2) => {
                let mut n = 1i64;
                if b & 1 == 1 {
                    n = -n;
                }
                if b & 2 == 2 {
                    n *= 5;
                }
                (n, i64::from(b >> 2 & 1))
            }
            FieldKind::Padic(p) | FieldKind::Laurent(p) => {
                let n = if b & 1 == 1 { least_nonresidue(p) as i64 } else { 1 };
                (n, i64::from(b >> 1 & 1))
            }
        }
    }

    /// Display label of a class: "1", "-5", "10", "2t", ...
    pub fn class_label(&self, c: SquareClass) -> String {
        let (n, v) = self.class_rep_parts(c);
        match self.kind {
            FieldKind::Laurent(_) => match (n, v) {
                (1, 0) => "1".into(),
                (n, 0) => n.to_string(),
                (1, _) => "t".into(),
                (n, _) => format!("{n}t"),
            },
            FieldKind::Padic(p) => (n * (p as i64).pow(v as u32)).to_string(),
            _ => n.to_string(),
        }
    }

    pub fn parse_class(&self, s: &str) -> Result<SquareClass> {
        let s = s.trim();
        if let FieldKind::Laurent(_) = self.kind {
            if let Some(stripped) = s.strip_suffix('t') {
                let n: i64 = if stripped.is_empty() {
                    1
                } else {
                    stripped.parse().map_err(|_| Error::Invalid(format!("bad class {s}")))?
                };
                let x = &self.int(n) * &self.uniformizer()?;
                return self.square_class(&x);
            }
        }
        let n: BigRational = s
            .parse::<BigInt>()
            .map(BigRational::from_integer)
            .or_else(|_| BigRational::from_str(s))
            .map_err(|_| Error::Invalid(format!("bad class {s}")))?;
        self.square_class(&self.rational(&n)?)
    }

    // ----- Hilbert symbol -----

    /// Hilbert symbol (a, b) ∈ {+1, −1}.
    pub fn hilbert(&self, a: SquareClass, b: SquareClass) -> i8 {
        let bit = |x: u8, i: u8| (x >> i) & 1;
        let (x, y) = (a.bits, b.bits);
        let e = match self.kind {
            FieldKind::Complex => 0,
            FieldKind::Real => bit(x, 0) & bit(y, 0),
            FieldKind::Padic(2) => {
                // ε(u)ε(v) + α ω(v) + β ω(u) with ε = bit 0, ω = bit 1, α = bit 2
                (bit(x, 0) & bit(y, 0)) ^ (bit(x, 2) & bit(y, 1)) ^ (bit(y, 2) & bit(x, 1))
            }
            FieldKind::Padic(p) | FieldKind::Laurent(p) => {
                let eps = (((p - 1) / 2) % 2) as u8;
                (bit(x, 1) & bit(y, 1) & eps) ^ (bit(x, 0) & bit(y, 1)) ^ (bit(y, 0) & bit(x, 1))
            }
        };
        let mut s = if e == 1 { -1 } else { 1 };
        if let Some((fa, fb)) = self.hilbert_flip {
            if (fa, fb) == (x, y) || (fb, fa) == (x, y) {
                s = -s;
            }
        }
        s
    }

    /// χ_a(x) = (a, x): the quadratic character attached to F(√a).
    pub fn chi_eval(&self, a: SquareClass, x: &FieldElem) -> Result<i8> {
        Ok(self.hilbert(a, self.square_class(x)?))
    }
}

impl fmt::Display for GroundField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor())
    }
}

impl Serialize for GroundField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.descriptor())
    }
}

impl<'de> Deserialize<'de> for GroundField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        GroundField::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl SquareClass {
    pub fn is_trivial(&self) -> bool {
        self.bits == 0
    }

    pub fn mul(self, other: SquareClass) -> Result<SquareClass> {
        if self.kind != other.kind {
            return Err(Error::FieldMismatch);
        }
        Ok(SquareClass { kind: self.kind, bits: self.bits ^ other.bits })
    }

    /// Whether F(√a)/F is ramified (false for archimedean fields).
    pub fn is_ramified(&self) -> bool {
        match self.kind {
            FieldKind::Padic(2) => self.bits & 0b101 != 0,
            FieldKind::Padic(_) | FieldKind::Laurent(_) => self.bits & 0b10 != 0,
            _ => false,
        }
    }
}

/// A quadratic étale algebra F(√a), or F × F when a is trivial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub base: GroundField,
    pub a: SquareClass,
    pub ramified: bool,
}

impl QuadExt {
    pub fn new(base: GroundField, a: SquareClass) -> Result<Self> {
        if a.kind != base.kind {
            return Err(Error::FieldMismatch);
        }
        Ok(QuadExt { base, a, ramified: a.is_ramified() })
    }

    pub fn is_split(&self) -> bool {
        self.a.is_trivial()
    }

    /// All quadratic étale algebras over F (split one first).
    pub fn all(base: GroundField) -> Vec<QuadExt> {
        base.classes().into_iter().map(|a| QuadExt::new(base, a).expect("same field")).collect()
    }

    /// Whether x is a norm from E, by the norm criterion (a, x) = 1.
    pub fn is_norm(&self, x: &FieldElem) -> Result<bool> {
        Ok(self.base.chi_eval(self.a, x)? == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force solvability of a x² + b y² = z² with a primitive
    /// solution modulo p^k, for p-adic integers a, b.
    fn norm_equation_solvable_padic(p: u64, a: i64, b: i64, k: u32) -> bool {
        let m = (p as i64).pow(k);
        for x in 0..m {
            for y in 0..m {
                let lhs = (a * x % m * x % m + b * y % m * y % m).rem_euclid(m);
                for z in 0..m {
                    if (x % p as i64 == 0) && (y % p as i64 == 0) && (z % p as i64 == 0) {
                        continue;
                    }
                    if (z * z - lhs).rem_euclid(m) == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Polynomials over F_q of degree < k as coefficient vectors.
    fn polys(q: u64, k: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            let mut next = Vec::new();
            for p in &out {
                for c in 0..q {
                    let mut v = p.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    fn pmul(a: &[u64], b: &[u64], q: u64, k: usize) -> Vec<u64> {
        let mut o = vec![0; k];
        for i in 0..k {
            for j in 0..k - i {
                o[i + j] = (o[i + j] + a[i] * b[j]) % q;
            }
        }
        o
    }

    fn norm_equation_solvable_laurent(q: u64, a: &[u64], b: &[u64], k: usize) -> bool {
        let ps = polys(q, k);
        let sq: Vec<Vec<u64>> = ps.iter().map(|x| pmul(x, x, q, k)).collect();
        for (ix, _) in ps.iter().enumerate() {
            for (iy, _) in ps.iter().enumerate() {
                let ax = pmul(a, &sq[ix], q, k);
                let by = pmul(b, &sq[iy], q, k);
                let lhs: Vec<u64> = (0..k).map(|i| (ax[i] + by[i]) % q).collect();
                for (iz, z) in ps.iter().enumerate() {
                    if ps[ix][0] == 0 && ps[iy][0] == 0 && z[0] == 0 {
                        continue;
                    }
                    if sq[iz] == lhs {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn hilbert_matches_norm_oracle_odd_p() {
        for p in [3u64, 5, 7] {
            let f = GroundField::padic(p).unwrap();
            for a in f.classes() {
                for b in f.classes() {
                    let ai = f.class_rep_parts(a);
                    let bi = f.class_rep_parts(b);
                    let av = ai.0 * (p as i64).pow(ai.1 as u32);
                    let bv = bi.0 * (p as i64).pow(bi.1 as u32);
                    let oracle = norm_equation_solvable_padic(p, av, bv, 3);
                    assert_eq!(f.hilbert(a, b) == 1, oracle, "p={p} a={av} b={bv}");
                }
            }
        }
    }

    #[test]
    fn hilbert_matches_norm_oracle_p2() {
        let f = GroundField::padic(2).unwrap();
        for a in f.classes() {
            for b in f.classes() {
                let ai = f.class_rep_parts(a);
                let bi = f.class_rep_parts(b);
                let av = ai.0 * 2i64.pow(ai.1 as u32);
                let bv = bi.0 * 2i64.pow(bi.1 as u32);
                let oracle = norm_equation_solvable_padic(2, av, bv, 5);
                assert_eq!(f.hilbert(a, b) == 1, oracle, "a={av} b={bv}");
            }
        }
    }

    #[test]
    fn hilbert_matches_norm_oracle_laurent() {
        for q in [3u64, 5] {
            let f = GroundField::laurent(q).unwrap();
            let u = least_nonresidue(q);
            for a in f.classes() {
                for b in f.classes() {
                    let enc = |c: SquareClass| {
                        let n = if c.bits & 1 == 1 { u } else { 1 };
                        let mut v = vec![0u64; 3];
                        v[(c.bits >> 1 & 1) as usize] = n;
                        v
                    };
                    let k = if q == 3 { 3 } else { 2 };
                    let (mut av, mut bv) = (enc(a), enc(b));
                    av.truncate(k.max(2));
                    bv.truncate(k.max(2));
                    av.resize(k, 0);
                    bv.resize(k, 0);
                    let oracle = norm_equation_solvable_laurent(q, &av, &bv, k);
                    assert_eq!(f.hilbert(a, b) == 1, oracle, "q={q} a={:?} b={:?}", a.bits, b.bits);
                }
            }
        }
    }

    #[test]
    fn square_class_examples() {
        let r = GroundField::real();
        assert_eq!(r.class_label(r.square_class(&r.int(-3)).unwrap()), "-1");
        let f5 = GroundField::padic(5).unwrap();
        assert_eq!(f5.class_label(f5.square_class(&f5.int(7)).unwrap()), "2");
        let f3 = GroundField::padic(3).unwrap();
        assert_eq!(f3.class_label(f3.square_class(&f3.int(18)).unwrap()), "2");
        let u = f5.parse_class("2").unwrap();
        let p = f5.parse_class("5").unwrap();
        assert_eq!(f5.hilbert(u, p), -1);
        assert_eq!(f5.chi_eval(p, &f5.int(2)).unwrap(), -1);
        assert_eq!(r.hilbert(r.class_minus_one(), r.class_minus_one()), -1);
    }

    #[test]
    fn class_group_orders() {
        assert_eq!(GroundField::complex().classes().len(), 1);
        assert_eq!(GroundField::real().classes().len(), 2);
        assert_eq!(GroundField::padic(3).unwrap().classes().len(), 4);
        assert_eq!(GroundField::laurent(5).unwrap().classes().len(), 4);
        assert_eq!(GroundField::padic(2).unwrap().classes().len(), 8);
    }

    #[test]
    fn representatives_reduce_to_themselves() {
        for f in [
            GroundField::real(),
            GroundField::padic(2).unwrap(),
            GroundField::padic(7).unwrap(),
            GroundField::laurent(3).unwrap(),
        ] {
            for c in f.classes() {
                assert_eq!(f.square_class(&f.class_rep(c)).unwrap(), c);
                assert_eq!(f.parse_class(&f.class_label(c)).unwrap(), c);
            }
        }
    }

    #[test]
    fn hilbert_nondegenerate() {
        for f in [
            GroundField::real(),
            GroundField::padic(2).unwrap(),
            GroundField::padic(3).unwrap(),
            GroundField::laurent(5).unwrap(),
        ] {
            for a in f.classes().into_iter().filter(|c| !c.is_trivial()) {
                assert!(f.classes().into_iter().any(|b| f.hilbert(a, b) == -1));
            }
        }
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(GroundField::laurent(2).is_err());
        assert!(GroundField::padic(9).is_err());
        assert!(GroundField::new(FieldKind::Padic(3), 4).is_err());
        assert!(GroundField::parse("Qp:5").is_ok());
        assert!(GroundField::parse("Fq((t)):3").is_ok());
    }

    #[test]
    fn insufficient_precision_is_reported() {
        let f = GroundField::padic(3).unwrap();
        let a = f.int(1);
        let z = &a - &a;
        assert!(matches!(f.square_class(&z), Err(Error::InsufficientPrecision(_))));
        assert!(matches!(f.square_class(&f.zero()), Err(Error::ZeroElement)));
    }
}
