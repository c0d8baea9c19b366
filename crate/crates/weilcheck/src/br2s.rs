//! The little graded Brauer group Br₂(F)_s: pairs (χ, x) of a square
//! class and a 2-torsion Brauer class, with the cup-twisted addition.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::localfield::{FieldElem, GroundField, SquareClass};

/// Element of Br₂(F) ≅ ½Z/Z, as a bit.
pub type Br2 = u8;

/// χ ∪ χ′ ∈ Br₂(F), via the Hilbert symbol.
pub fn cup(f: &GroundField, a: SquareClass, b: SquareClass) -> Br2 {
    u8::from(f.hilbert(a, b) == -1)
}

/// The local symbol {χ, b} = χ ∪ class(b).
pub fn symbol(f: &GroundField, chi: SquareClass, b: &FieldElem) -> Result<Br2> {
    Ok(cup(f, chi, f.square_class(b)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Br2sElem {
    pub field: GroundField,
    pub chi: SquareClass,
    pub x: Br2,
}

impl Br2sElem {
    pub fn new(field: GroundField, chi: SquareClass, x: Br2) -> Self {
        Br2sElem { field, chi, x: x & 1 }
    }

    pub fn zero(field: GroundField) -> Self {
        Self::new(field, field.class_one(), 0)
    }

    /// z = (−1, 0), the invariant of the hyperbolic plane.
    pub fn z(field: GroundField) -> Self {
        Self::new(field, field.class_minus_one(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.chi.is_trivial() && self.x == 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.kind != other.field.kind {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let x = self.x ^ other.x ^ cup(&self.field, self.chi, other.chi);
        Ok(Self::new(self.field, self.chi.mul(other.chi)?, x))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.field, self.chi, self.x ^ cup(&self.field, self.chi, self.chi))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// n·self for an integer n.
    pub fn times(&self, n: i64) -> Self {
        let base = if n < 0 { self.neg() } else { *self };
        let mut acc = Self::zero(self.field);
        for _ in 0..n.unsigned_abs() {
            acc = acc.add(&base).expect("same field");
        }
        acc
    }

    pub fn chi_label(&self) -> String {
        self.field.class_label(self.chi)
    }
}

impl fmt::Display for Br2sElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.chi_label(), self.x)
    }
}

impl Serialize for Br2sElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Br2sElem", 2)?;
        st.serialize_field("chi", &self.chi_label())?;
        st.serialize_field("x", &self.x)?;
        st.end()
    }
}

/// All elements of Br₂(F)_s.
pub fn all_elements(field: GroundField) -> Vec<Br2sElem> {
    let mut out = Vec::new();
    for chi in field.classes() {
        for x in 0..=1u8 {
            if x == 1 && field.kind == crate::localfield::FieldKind::Complex {
                continue;
            }
            out.push(Br2sElem::new(field, chi, x));
        }
    }
    out
}

/// Exhaustive check of the abelian group axioms on Br₂(F)_s.
pub fn check_group_axioms(field: GroundField) -> Result<bool> {
    let els = all_elements(field);
    let zero = Br2sElem::zero(field);
    for a in &els {
        if a.add(&zero)? != *a || a.add(&a.neg())? != zero || a.sub(a)? != zero {
            return Ok(false);
        }
        for b in &els {
            if a.add(b)? != b.add(a)? {
                return Ok(false);
            }
            for c in &els {
                if a.add(b)?.add(c)? != a.add(&b.add(c)?)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
