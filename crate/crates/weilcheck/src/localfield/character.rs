use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::elem::{ppow, FieldElem, Unit};
use super::{FieldKind, GroundField};
use crate::error::{Error, Result};

/// ψ_n(x) = ψ(π^{-n} x) for the standard character ψ of the field.
///
/// For R the level only selects the frequency sign: x ↦ exp(2πi·s·x)
/// with s = −1 when `level < 0` and s = +1 otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdditiveCharacter {
    pub field: GroundField,
    pub level: i64,
}

impl AdditiveCharacter {
    pub fn new(field: GroundField, level: i64) -> Self {
        AdditiveCharacter { field, level }
    }

    pub fn standard(field: GroundField) -> Self {
        Self::new(field, 0)
    }

    pub fn real_frequency(&self) -> i8 {
        if self.level < 0 {
            -1
        } else {
            1
        }
    }

    /// The phase θ ∈ Q/Z with ψ(x) = exp(2πiθ), as an exact fraction in [0,1).
    pub fn phase(&self, x: &FieldElem) -> Result<BigRational> {
        if x.is_exact_zero() {
            return Ok(BigRational::zero());
        }
        match (self.field.kind, x) {
            (FieldKind::Real, FieldElem::Rat(r)) | (FieldKind::Complex, FieldElem::Rat(r)) => {
                let s = BigRational::from_integer(BigInt::from(self.real_frequency()));
                let t = r * s;
                Ok(&t - t.floor())
            }
            (FieldKind::Padic(p), FieldElem::Local(l)) => {
                // ψ(π^{-n} x): only digits of x below π^{n} matter
                let shift = l.val - self.level;
                if l.is_zero() {
                    if l.val >= self.level {
                        return Ok(BigRational::zero());
                    }
                    return Err(Error::InsufficientPrecision(format!(
                        "zero known only to π^{}; level {} needs more",
                        l.val, self.level
                    )));
                }
                if shift >= 0 {
                    return Ok(BigRational::zero());
                }
                let need = (-shift) as u32;
                if l.prec < need {
                    return Err(Error::InsufficientPrecision(format!(
                        "fractional part needs {need} digits, have {}",
                        l.prec
                    )));
                }
                let Unit::Int(u) = &l.unit else { unreachable!() };
                let m = ppow(p, need);
                let num = u.mod_floor(&m);
                Ok(BigRational::new(num, m))
            }
            (FieldKind::Laurent(q), FieldElem::Local(l)) => {
                // coefficient of t^{-1} in t^{-n} x, i.e. of t^{n-1} in x
                let target = self.level - 1;
                if l.is_zero() {
                    if l.val > target {
                        return Ok(BigRational::zero());
                    }
                    return Err(Error::InsufficientPrecision("zero of unknown residue".into()));
                }
                if target < l.val {
                    return Ok(BigRational::zero());
                }
                let idx = (target - l.val) as usize;
                let Unit::Poly(c) = &l.unit else { unreachable!() };
                if idx >= c.len() {
                    return Err(Error::InsufficientPrecision(format!(
                        "residue coefficient {idx} beyond precision {}",
                        c.len()
                    )));
                }
                Ok(BigRational::new(BigInt::from(c[idx]), BigInt::from(q)))
            }
            _ => Err(Error::FieldMismatch),
        }
    }
}

/// ψ(x) as a complex unit.
pub fn psi_eval(psi: &AdditiveCharacter, x: &FieldElem) -> Result<Complex64> {
    let th = psi.phase(x)?;
    let f = th.numer().to_f64().unwrap_or(0.0) / th.denom().to_f64().unwrap_or(1.0);
    Ok(Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn padic_standard_character() {
        let f = GroundField::padic(5).unwrap();
        let psi = AdditiveCharacter::standard(f);
        assert!(close(psi_eval(&psi, &f.zero()).unwrap(), Complex64::new(1.0, 0.0)));
        let x = f.frac(1, 5).unwrap();
        let e = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0);
        assert!(close(psi_eval(&psi, &x).unwrap(), e));
        assert!(close(psi_eval(&psi, &f.int(17)).unwrap(), Complex64::new(1.0, 0.0)));
        let psi1 = AdditiveCharacter::new(f, 1);
        assert!(close(psi_eval(&psi1, &f.int(1)).unwrap(), e));
    }

    #[test]
    fn padic_additivity() {
        let f = GroundField::padic(3).unwrap();
        let psi = AdditiveCharacter::new(f, -1);
        for (a, b) in [((2, 27), (5, 9)), ((7, 81), (-4, 3)), ((1, 1), (1, 2))] {
            let x = f.frac(a.0, a.1).unwrap();
            let y = f.frac(b.0, b.1).unwrap();
            let lhs = psi_eval(&psi, &(&x + &y)).unwrap();
            let rhs = psi_eval(&psi, &x).unwrap() * psi_eval(&psi, &y).unwrap();
            assert!(close(lhs, rhs));
        }
    }

    #[test]
    fn laurent_residue_character() {
        let f = GroundField::laurent(3).unwrap();
        let psi = AdditiveCharacter::standard(f);
        let x = f.series(-1, &[2, 1]).unwrap();
        let e = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 2.0 / 3.0);
        assert!(close(psi_eval(&psi, &x).unwrap(), e));
        assert!(close(psi_eval(&psi, &f.one()).unwrap(), Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn real_character_frequency() {
        let f = GroundField::real();
        let x = f.frac(1, 4).unwrap();
        assert!(close(psi_eval(&AdditiveCharacter::standard(f), &x).unwrap(), Complex64::new(0.0, 1.0)));
        assert!(close(psi_eval(&AdditiveCharacter::new(f, -1), &x).unwrap(), Complex64::new(0.0, -1.0)));
    }
}
