//! Enumeration of the main-theorem instance matrix.

use serde::{Deserialize, Serialize};

use super::{algebra, InstanceSpec};
use crate::error::Result;
use crate::localfield::GroundField;
use crate::rootdata::{CartanType, Mutation};
use crate::torus::{faithful_weyl_classes, standard_frames};

pub const MATRIX_TYPES: [&str; 6] = ["A1", "A2", "C2", "B2", "A3", "G2"];
pub const MATRIX_FIELDS: [&str; 7] = ["Qp:3", "Qp:5", "Qp:7", "Qp:2", "R", "Fq((t)):5", "Fq((t)):3"];

/// Restricts the matrix to some types or fields (all when empty).
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct MatrixFilter {
    #[serde(default)]
    pub types: Vec<String>,
    #[serde(default)]
    pub fields: Vec<String>,
}

fn field_applies(t: CartanType, field: &str) -> bool {
    // characteristic 3 only for G₂, where it exercises char F = ℓ
    field != "Fq((t)):3" || t == CartanType::G2
}

/// One instance per (type, field, frame, W-class of faithful φ: Gal → W),
/// the split torus once per (type, field). φ₀ is trivial throughout.
pub fn matrix_instances(filter: &MatrixFilter) -> Result<Vec<InstanceSpec>> {
    let mut out = Vec::new();
    for ts in MATRIX_TYPES {
        if !filter.types.is_empty() && !filter.types.iter().any(|x| x == ts) {
            continue;
        }
        let t: CartanType = ts.parse()?;
        let alg = algebra(t, Mutation::default())?;
        for fs in MATRIX_FIELDS {
            if !field_applies(t, fs) || (!filter.fields.is_empty() && !filter.fields.iter().any(|x| x == fs)) {
                continue;
            }
            let f = GroundField::parse(fs)?;
            for frame in standard_frames(f) {
                for w in faithful_weyl_classes(&frame, &alg) {
                    let words: Vec<Vec<usize>> =
                        w.iter().map(|&x| alg.weyl.elements[x].word.iter().map(|i| i + 1).collect()).collect();
                    out.push(InstanceSpec {
                        field: fs.to_string(),
                        cartan_type: t,
                        frame: frame.spec.clone(),
                        phi0: vec![],
                        w: words,
                        w_tilde: None,
                        psi_level: 0,
                        e_sign: 1,
                        precision: None,
                        intermediates: true,
                        variant: 0,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_over_q5_has_four_tori() {
        let filt = MatrixFilter { types: vec!["A1".into()], fields: vec!["Qp:5".into()] };
        let inst = matrix_instances(&filt).unwrap();
        assert_eq!(inst.len(), 4);
        assert_eq!(inst.iter().filter(|s| s.w.is_empty()).count(), 1);
    }
}
