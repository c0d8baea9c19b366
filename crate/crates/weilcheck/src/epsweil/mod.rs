//! Local epsilon factors of quadratic characters, the reduction of
//! virtual orthogonal representations to their (w₁, w₂) classes, and
//! Weil indices of quadratic spaces.

mod gauss;

use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

pub use gauss::{weil_gauss_oracle, GaussOracle, OracleMethod, DIRECT_LIMIT};

use crate::br2s::Br2sElem;
use crate::error::{Error, Result};
use crate::localfield::{psi_eval, AdditiveCharacter, FieldKind, GroundField, SquareClass};
use crate::quadform::QuadSpace;

pub const SNAP_TOLERANCE: f64 = 1e-6;

/// An exact fourth root of unity i^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FourthRoot(u8);

impl FourthRoot {
    pub const ONE: FourthRoot = FourthRoot(0);
    pub const I: FourthRoot = FourthRoot(1);
    pub const MINUS_ONE: FourthRoot = FourthRoot(2);
    pub const MINUS_I: FourthRoot = FourthRoot(3);

    pub fn from_exponent(k: i64) -> Self {
        FourthRoot(k.rem_euclid(4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn sign(s: i8) -> Self {
        if s < 0 {
            Self::MINUS_ONE
        } else {
            Self::ONE
        }
    }

    pub fn mul(self, other: Self) -> Self {
        FourthRoot((self.0 + other.0) % 4)
    }

    pub fn inv(self) -> Self {
        FourthRoot((4 - self.0) % 4)
    }

    pub fn conj(self) -> Self {
        self.inv()
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    /// Nearest fourth root; fails unless z is within `SNAP_TOLERANCE` of it.
    pub fn snap(z: Complex64) -> Result<Self> {
        let (best, dist) = (0..4)
            .map(|k| (FourthRoot(k), (z - FourthRoot(k).to_complex()).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if dist < SNAP_TOLERANCE {
            Ok(best)
        } else {
            Err(Error::SnapFailure { re: z.re, im: z.im })
        }
    }

    pub fn label(self) -> &'static str {
        ["1", "i", "-1", "-i"][self.0 as usize]
    }
}

impl fmt::Display for FourthRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for FourthRoot {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

impl std::str::FromStr for FourthRoot {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Self::ONE),
            "i" => Ok(Self::I),
            "-1" => Ok(Self::MINUS_ONE),
            "-i" => Ok(Self::MINUS_I),
            _ => Err(Error::Invalid(format!("{s} is not a fourth root of unity"))),
        }
    }
}

/// Conductor exponent a(χ) of the quadratic character of F(√d).
pub fn conductor(chi: SquareClass) -> u32 {
    match chi.kind {
        FieldKind::Padic(2) => {
            // bits (−1, 5, 2): class 5 is unramified, ±1·5^? with 2 has a = 3
            if chi.bits & 0b100 != 0 {
                3
            } else if chi.bits & 0b001 != 0 {
                2
            } else {
                0
            }
        }
        FieldKind::Padic(_) | FieldKind::Laurent(_) => u32::from(chi.bits & 0b10 != 0),
        _ => 0,
    }
}

/// Unit residues modulo π^a, as field elements, with ψ_std(u/π^a).
fn unit_residues(f: &GroundField, a: u32) -> Result<Vec<(crate::localfield::FieldElem, Complex64)>> {
    let psi = AdditiveCharacter::standard(*f);
    let pia = f.pi_pow(-(a as i64))?;
    let mut out = Vec::new();
    match f.kind {
        FieldKind::Padic(p) => {
            let m = p.pow(a);
            for u in (1..m).filter(|u| u % p != 0) {
                let x = f.int(u as i64);
                let ph = psi_eval(&psi, &(&x * &pia))?;
                out.push((x, ph));
            }
        }
        FieldKind::Laurent(q) => {
            // a ≤ 1 for odd q
            let m = q.pow(a);
            for idx in 0..m {
                let coeffs: Vec<i64> = (0..a).map(|i| ((idx / q.pow(i)) % q) as i64).collect();
                if coeffs.first().is_some_and(|&c| c == 0) {
                    continue;
                }
                let x = f.series(0, &coeffs)?;
                let ph = psi_eval(&psi, &(&x * &pia))?;
                out.push((x, ph));
            }
        }
        _ => return Err(Error::FieldMismatch),
    }
    Ok(out)
}

/// ε_L(χ, ψ) as an unsnapped complex number: for ramified χ the normalized
/// Gauss sum χ(c)⁻¹·Σ_u χ(u)ψ(u/c) over units mod the conductor, with
/// v(c) = a(χ) − level(ψ); χ(π)^level when χ is unramified.
pub fn eps_quadratic_complex(chi: SquareClass, psi: &AdditiveCharacter) -> Result<Complex64> {
    let f = psi.field;
    if chi.kind != f.kind {
        return Err(Error::FieldMismatch);
    }
    if chi.is_trivial() {
        return Ok(Complex64::new(1.0, 0.0));
    }
    match f.kind {
        FieldKind::Complex => Ok(Complex64::new(1.0, 0.0)),
        FieldKind::Real => Ok(Complex64::new(0.0, f64::from(psi.real_frequency()))),
        FieldKind::Padic(_) | FieldKind::Laurent(_) => {
            let a = conductor(chi);
            let c_sign = f64::from(f.chi_eval(chi, &f.pi_pow(a as i64 - psi.level)?)?);
            if a == 0 {
                return Ok(Complex64::new(c_sign, 0.0));
            }
            let mut g = Complex64::new(0.0, 0.0);
            for (u, ph) in unit_residues(&f, a)? {
                g += ph * f64::from(f.chi_eval(chi, &u)?);
            }
            let n = g.norm();
            if n < 1e-9 {
                return Err(Error::SnapFailure { re: g.re, im: g.im });
            }
            Ok(g / n * c_sign)
        }
    }
}

pub fn eps_quadratic(chi: SquareClass, psi: &AdditiveCharacter) -> Result<FourthRoot> {
    FourthRoot::snap(eps_quadratic_complex(chi, psi)?)
}

/// ε_L of a degree-0 virtual orthogonal representation from its class
/// (w₁, w₂) ∈ Br₂(F)_s: ε_L(w₁, ψ)·(−1)^{w₂}.
pub fn eps_virtual(sw: &Br2sElem, psi: &AdditiveCharacter) -> Result<FourthRoot> {
    Ok(eps_quadratic(sw.chi, psi)?.mul(FourthRoot::sign(if sw.x == 1 { -1 } else { 1 })))
}

/// γ(Q, ψ) = ε_L(χ_Q, ψ)·ζ_Q, read off from Wall(Q).
pub fn weil_index(q: &QuadSpace, psi: &AdditiveCharacter) -> Result<FourthRoot> {
    if q.dim() % 2 == 1 {
        return Err(Error::OddRank(q.dim()));
    }
    if q.dim() > 0 && crate::linalg::det(&q.field, &q.gram)?.is_zero() {
        return Err(Error::DegenerateForm);
    }
    eps_virtual(&q.wall()?, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::QuadExt;

    fn nonarch() -> Vec<GroundField> {
        vec![
            GroundField::padic(2).unwrap(),
            GroundField::padic(3).unwrap(),
            GroundField::padic(5).unwrap(),
            GroundField::padic(7).unwrap(),
            GroundField::laurent(3).unwrap(),
            GroundField::laurent(5).unwrap(),
        ]
    }

    #[test]
    fn fourth_root_arithmetic() {
        assert_eq!(FourthRoot::I.mul(FourthRoot::I), FourthRoot::MINUS_ONE);
        assert_eq!(FourthRoot::MINUS_I.inv(), FourthRoot::I);
        assert_eq!(FourthRoot::snap(Complex64::new(1e-8, -1.0)).unwrap(), FourthRoot::MINUS_I);
        assert!(FourthRoot::snap(Complex64::from_polar(1.0, 0.3)).is_err());
        assert_eq!("-i".parse::<FourthRoot>().unwrap(), FourthRoot::MINUS_I);
    }

    #[test]
    fn trivial_and_unramified() {
        let f = GroundField::padic(5).unwrap();
        let psi = AdditiveCharacter::standard(f);
        assert_eq!(eps_quadratic(f.class_one(), &psi).unwrap(), FourthRoot::ONE);
        assert_eq!(eps_quadratic(f.parse_class("2").unwrap(), &psi).unwrap(), FourthRoot::ONE);
        let psi1 = AdditiveCharacter::new(f, 1);
        assert_eq!(eps_quadratic(f.parse_class("2").unwrap(), &psi1).unwrap(), FourthRoot::MINUS_ONE);
    }

    #[test]
    fn ramified_q5_is_classical_gauss_sum() {
        // Σ_{x mod 5} (x|5) e^{2πix/5} = √5
        let f = GroundField::padic(5).unwrap();
        let psi = AdditiveCharacter::standard(f);
        let mut g = Complex64::new(0.0, 0.0);
        for x in 1..5i64 {
            let leg = if [1, 4].contains(&x) { 1.0 } else { -1.0 };
            g += Complex64::from_polar(leg, 2.0 * std::f64::consts::PI * x as f64 / 5.0);
        }
        let expected = FourthRoot::snap(g / g.norm()).unwrap();
        assert_eq!(expected, FourthRoot::ONE);
        assert_eq!(eps_quadratic(f.parse_class("5").unwrap(), &psi).unwrap(), expected);
    }

    #[test]
    fn real_values() {
        let r = GroundField::real();
        assert_eq!(eps_quadratic(r.class_minus_one(), &AdditiveCharacter::new(r, 0)).unwrap(), FourthRoot::I);
        assert_eq!(eps_quadratic(r.class_minus_one(), &AdditiveCharacter::new(r, -1)).unwrap(), FourthRoot::MINUS_I);
        // Hamilton quaternions
        let h = QuadSpace::diagonal_ints(r, &[1, 1, 1, 1]);
        assert_eq!(weil_index(&h, &AdditiveCharacter::standard(r)).unwrap(), FourthRoot::MINUS_ONE);
        assert_eq!(weil_index(&h.dsum(&h), &AdditiveCharacter::standard(r)).unwrap(), FourthRoot::ONE);
    }

    #[test]
    fn virtual_examples() {
        let f = GroundField::padic(3).unwrap();
        let psi = AdditiveCharacter::standard(f);
        assert_eq!(eps_virtual(&Br2sElem::zero(f), &psi).unwrap(), FourthRoot::ONE);
        assert_eq!(eps_virtual(&Br2sElem::new(f, f.class_one(), 1), &psi).unwrap(), FourthRoot::MINUS_ONE);
        for d in f.classes() {
            assert_eq!(eps_virtual(&Br2sElem::new(f, d, 0), &psi).unwrap(), eps_quadratic(d, &psi).unwrap());
        }
    }

    #[test]
    fn hyperbolic_and_unramified_norm_form() {
        for f in nonarch() {
            for lvl in -1..=1 {
                let psi = AdditiveCharacter::new(f, lvl);
                assert_eq!(weil_index(&QuadSpace::hyperbolic(f), &psi).unwrap(), FourthRoot::ONE);
            }
        }
        let f = GroundField::padic(5).unwrap();
        let e = QuadExt::new(f, f.parse_class("2").unwrap()).unwrap();
        assert_eq!(weil_index(&QuadSpace::norm_form(&e), &AdditiveCharacter::standard(f)).unwrap(), FourthRoot::ONE);
    }

    #[test]
    fn eps_squares_to_chi_of_minus_one() {
        // ε(χ,ψ)² = χ(−1) for quadratic χ
        for f in nonarch() {
            for d in f.classes() {
                for lvl in -1..=1 {
                    let e = eps_quadratic(d, &AdditiveCharacter::new(f, lvl)).unwrap();
                    let s = f.chi_eval(d, &f.int(-1)).unwrap();
                    assert_eq!(e.mul(e), FourthRoot::sign(s), "{f} {}", f.class_label(d));
                }
            }
        }
    }
}
