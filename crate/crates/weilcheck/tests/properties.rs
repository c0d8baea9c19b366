//! Randomized properties across modules.

use proptest::prelude::*;

use weilcheck::epsweil::{weil_gauss_oracle, weil_index, FourthRoot};
use weilcheck::harness::{matrix_instances, verify_main_theorem, MatrixFilter, VerifyOptions};
use weilcheck::linalg;
use weilcheck::localfield::{AdditiveCharacter, GroundField};
use weilcheck::quadform::QuadSpace;

const FIELDS: [&str; 5] = ["Qp:3", "Qp:5", "Qp:2", "Fq((t)):3", "R"];

fn form(f: &GroundField, diag: &[i64], off: &[i64]) -> Option<QuadSpace> {
    let n = diag.len();
    let mut g = vec![vec![0i64; n]; n];
    let mut k = 0;
    for i in 0..n {
        g[i][i] = 2 * diag[i];
        for j in i + 1..n {
            g[i][j] = off[k % off.len()];
            g[j][i] = g[i][j];
            k += 1;
        }
    }
    let q = QuadSpace::new(*f, linalg::from_ints(f, &g)).ok()?;
    let d = linalg::det(f, &q.gram).ok()?;
    (!d.is_zero()).then_some(q)
}

fn even_form() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (1usize..=2).prop_flat_map(|h| {
        (prop::collection::vec(-20i64..=20, 2 * h), prop::collection::vec(-6i64..=6, 1..8))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // γ(·, ψ) is a character of the even Witt group
    #[test]
    fn weil_index_is_multiplicative(fi in 0usize..FIELDS.len(), a in even_form(), b in even_form(), lvl in -1i64..=1) {
        let f = GroundField::parse(FIELDS[fi]).unwrap();
        let (Some(q1), Some(q2)) = (form(&f, &a.0, &a.1), form(&f, &b.0, &b.1)) else { return Ok(()) };
        let psi = AdditiveCharacter::new(f, lvl);
        let g = weil_index(&q1.dsum(&q2), &psi).unwrap();
        prop_assert_eq!(g, weil_index(&q1, &psi).unwrap().mul(weil_index(&q2, &psi).unwrap()));
        let neg = q1.scale(&f.int(-1)).unwrap();
        prop_assert_eq!(weil_index(&q1.dsum(&neg), &psi).unwrap(), FourthRoot::ONE);
    }

    // Wall-based γ agrees with the Gauss-sum oracle on binary forms
    #[test]
    fn weil_index_matches_gauss_sum(fi in 0usize..4, a in prop::collection::vec(-15i64..=15, 2), c in -5i64..=5, lvl in -1i64..=1) {
        let f = GroundField::parse(FIELDS[fi]).unwrap();
        let Some(q) = form(&f, &a, &[c]) else { return Ok(()) };
        let psi = AdditiveCharacter::new(f, lvl);
        let o = weil_gauss_oracle(&q, &psi).unwrap();
        prop_assert!((o.value() - weil_index(&q, &psi).unwrap().to_complex()).norm() < 1e-6);
    }

    // the Wall invariant does not see a change of basis
    #[test]
    fn wall_is_basis_free(fi in 0usize..FIELDS.len(), a in even_form(), p in prop::collection::vec(-3i64..=3, 6)) {
        let f = GroundField::parse(FIELDS[fi]).unwrap();
        let Some(q) = form(&f, &a.0, &a.1) else { return Ok(()) };
        let n = q.dim();
        let mut m = linalg::identity(&f, n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                m[i][j] = f.int(p[k % p.len()]);
                k += 1;
            }
        }
        prop_assert_eq!(q.change_basis(&m).wall().unwrap(), q.wall().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // the verdict of a matrix instance does not depend on ψ or precision
    #[test]
    fn verdict_is_stable(idx in any::<prop::sample::Index>(), lvl in -1i64..=1, prec in 24u32..80) {
        let inst = matrix_instances(&MatrixFilter { types: vec!["A2".into(), "C2".into(), "G2".into()], fields: vec![] }).unwrap();
        let s = idx.get(&inst);
        let opts = VerifyOptions { psi_level: Some(lvl), precision: Some(prec), ..Default::default() };
        match verify_main_theorem(s, &opts) {
            Ok(r) => prop_assert!(r.all_pass(), "{}", r.summary_line()),
            Err(weilcheck::Error::Obstructed(_)) => {}
            Err(e) => prop_assert!(false, "{}: {e}", s.key()),
        }
    }
}
