//! Nondegenerate quadratic spaces: diagonalization, discriminant,
//! Hasse-Witt and Wall invariants, relative invariants, Witt operations.

use serde::{Deserialize, Serialize};

use crate::br2s::{cup, symbol, Br2, Br2sElem};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::localfield::{FieldElem, GroundField, QuadExt, SquareClass};

/// A quadratic space given by the Gram matrix of its polar form,
/// `gram[i][j] = B(e_i, e_j)`, so that `Q(e_i) = gram[i][i] / 2`.
#[derive(Clone, Debug)]
pub struct QuadSpace {
    pub field: GroundField,
    pub gram: Mat,
}

/// Diagonal form Σ a_i x_i² recorded by the square classes of the a_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagForm {
    pub field: GroundField,
    pub coeffs: Vec<SquareClass>,
}

/// Literal form used in instance files.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuadLiteral {
    Gram { gram: Vec<Vec<String>> },
    Diag { diag: Vec<String> },
}

impl QuadSpace {
    pub fn new(field: GroundField, gram: Mat) -> Result<Self> {
        let n = gram.len();
        for row in &gram {
            if row.len() != n {
                return Err(Error::DimMismatch(n, row.len()));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Invalid("Gram matrix is not symmetric".into()));
                }
            }
        }
        Ok(QuadSpace { field, gram })
    }

    /// Σ a_i x_i² for the given values a_i = Q(e_i).
    pub fn diagonal(field: GroundField, values: &[FieldElem]) -> Self {
        let n = values.len();
        let mut gram = linalg::zeros(&field, n, n);
        for (i, a) in values.iter().enumerate() {
            gram[i][i] = a + a;
        }
        QuadSpace { field, gram }
    }

    pub fn diagonal_ints(field: GroundField, values: &[i64]) -> Self {
        let v: Vec<FieldElem> = values.iter().map(|&a| field.int(a)).collect();
        Self::diagonal(field, &v)
    }

    pub fn from_classes(field: GroundField, classes: &[SquareClass]) -> Self {
        let v: Vec<FieldElem> = classes.iter().map(|&c| field.class_rep(c)).collect();
        Self::diagonal(field, &v)
    }

    /// The hyperbolic plane Q(x, y) = xy.
    pub fn hyperbolic(field: GroundField) -> Self {
        let gram = vec![vec![field.zero(), field.one()], vec![field.one(), field.zero()]];
        QuadSpace { field, gram }
    }

    /// Norm form Q_E of a quadratic étale algebra E = F(√d): x² − d y².
    pub fn norm_form(e: &QuadExt) -> Self {
        if e.is_split() {
            return Self::hyperbolic(e.base);
        }
        let f = e.base;
        let d = f.class_rep(e.a);
        Self::diagonal(f, &[f.one(), -&d])
    }

    /// Norm form of the quaternion algebra D(E, a): Q_E ⊕ (−a)Q_E.
    pub fn quaternion_norm_form(e: &QuadExt, a: &FieldElem) -> Result<Self> {
        let qe = Self::norm_form(e);
        Ok(qe.dsum(&qe.scale(&-a)?))
    }

    pub fn from_literal(field: GroundField, lit: &QuadLiteral) -> Result<Self> {
        let parse = |s: &String| -> Result<FieldElem> {
            let r: num_rational::BigRational =
                s.trim().parse().map_err(|_| Error::Invalid(format!("bad entry {s}")))?;
            field.rational(&r)
        };
        match lit {
            QuadLiteral::Gram { gram } => {
                let g: Result<Mat> = gram.iter().map(|r| r.iter().map(parse).collect()).collect();
                Self::new(field, g?)
            }
            QuadLiteral::Diag { diag } => {
                let v: Result<Vec<FieldElem>> = diag.iter().map(parse).collect();
                Ok(Self::diagonal(field, &v?))
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn q(&self, v: &[FieldElem]) -> FieldElem {
        let b = linalg::bilinear(&self.field, &self.gram, v, v);
        b.checked_div(&self.field.int(2)).expect("char ≠ 2")
    }

    pub fn b(&self, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
        linalg::bilinear(&self.field, &self.gram, x, y)
    }

    pub fn scale(&self, a: &FieldElem) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let gram = self.gram.iter().map(|r| r.iter().map(|x| a * x).collect()).collect();
        Ok(QuadSpace { field: self.field, gram })
    }

    pub fn dsum(&self, other: &Self) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let mut gram = linalg::zeros(&self.field, n + m, n + m);
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                gram[n + i][n + j] = other.gram[i][j].clone();
            }
        }
        QuadSpace { field: self.field, gram }
    }

    /// Gram matrix in a new basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Mat) -> Self {
        let f = &self.field;
        let pt = linalg::transpose(p);
        let gram = linalg::mul(f, &linalg::mul(f, &pt, &self.gram), p);
        QuadSpace { field: self.field, gram }
    }

    /// Orthogonal basis: returns the Q-values a_i and the matrix whose
    /// columns are the new basis vectors.
    pub fn orthogonal_basis(&self) -> Result<(Vec<FieldElem>, Mat)> {
        let f = self.field;
        let n = self.dim();
        let mut g = self.gram.clone();
        let mut p = linalg::identity(&f, n);
        let two = f.int(2);
        let mut values = Vec::with_capacity(n);
        let mut done = vec![false; n];
        for _ in 0..n {
            let mut best: Option<(i64, usize)> = None;
            for i in (0..n).filter(|&i| !done[i]) {
                if let Some(k) = g[i][i].pivot_key() {
                    if best.map_or(true, |(bk, _)| k < bk) {
                        best = Some((k, i));
                    }
                }
            }
            let piv = match best {
                Some((_, i)) => i,
                None => {
                    // all remaining diagonal entries vanish: replace e_i by e_i + e_j
                    let mut found = None;
                    'outer: for i in (0..n).filter(|&i| !done[i]) {
                        for j in (0..n).filter(|&j| !done[j] && j != i) {
                            if !g[i][j].is_zero() {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    let Some((i, j)) = found else {
                        let exact = (0..n)
                            .filter(|&i| !done[i])
                            .all(|i| (0..n).filter(|&j| !done[j]).all(|j| g[i][j].is_exact_zero()));
                        return Err(if exact {
                            Error::DegenerateForm
                        } else {
                            Error::InsufficientPrecision("form degenerates at working precision".into())
                        });
                    };
                    for k in 0..n {
                        let v = &g[k][i] + &g[k][j];
                        g[k][i] = v;
                    }
                    for k in 0..n {
                        let v = &g[i][k] + &g[j][k];
                        g[i][k] = v;
                    }
                    for row in p.iter_mut() {
                        let v = &row[i] + &row[j];
                        row[i] = v;
                    }
                    i
                }
            };
            let d = g[piv][piv].clone();
            if d.is_zero() {
                return Err(Error::InsufficientPrecision("pivot vanished".into()));
            }
            let dinv = d.inv()?;
            for k in (0..n).filter(|&k| !done[k] && k != piv) {
                if g[k][piv].is_zero() {
                    continue;
                }
                let c = &g[k][piv] * &dinv;
                // e_k ← e_k − c e_piv
                for l in 0..n {
                    let v = &g[k][l] - &(&c * &g[piv][l]);
                    g[k][l] = v;
                }
                for l in 0..n {
                    let v = &g[l][k] - &(&c * &g[l][piv]);
                    g[l][k] = v;
                }
                for row in p.iter_mut() {
                    let v = &row[k] - &(&c * &row[piv]);
                    row[k] = v;
                }
            }
            done[piv] = true;
            values.push((piv, d.checked_div(&two)?));
        }
        let order: Vec<usize> = values.iter().map(|(i, _)| *i).collect();
        let vals = values.into_iter().map(|(_, v)| v).collect();
        let cols: Mat = p.iter().map(|row| order.iter().map(|&i| row[i].clone()).collect()).collect();
        Ok((vals, cols))
    }

    pub fn diagonalize(&self) -> Result<DiagForm> {
        let (vals, _) = self.orthogonal_basis()?;
        let coeffs: Result<Vec<SquareClass>> = vals.iter().map(|a| self.field.square_class(a)).collect();
        Ok(DiagForm { field: self.field, coeffs: coeffs? })
    }

    pub fn wall(&self) -> Result<Br2sElem> {
        if self.dim() % 2 == 1 {
            return Err(Error::OddRank(self.dim()));
        }
        self.diagonalize()?.wall()
    }

    pub fn sw(&self) -> Result<Br2sElem> {
        Ok(self.diagonalize()?.sw())
    }
}

impl DiagForm {
    pub fn disc(&self) -> SquareClass {
        self.coeffs.iter().fold(self.field.class_one(), |acc, &c| acc.mul(c).expect("same field"))
    }

    pub fn hw(&self) -> Br2 {
        let mut h = 0;
        for i in 0..self.coeffs.len() {
            for j in i + 1..self.coeffs.len() {
                h ^= cup(&self.field, self.coeffs[i], self.coeffs[j]);
            }
        }
        h
    }

    pub fn sw(&self) -> Br2sElem {
        Br2sElem::new(self.field, self.disc(), self.hw())
    }

    /// Wall(Q) = n·z − SW(Q) for rank 2n.
    pub fn wall(&self) -> Result<Br2sElem> {
        let dim = self.coeffs.len();
        if dim % 2 == 1 {
            return Err(Error::OddRank(dim));
        }
        Br2sElem::z(self.field).times((dim / 2) as i64).sub(&self.sw())
    }
}

/// HW(Q′, Q) = SW(Q′) − SW(Q).
pub fn hw_rel(qp: &QuadSpace, q: &QuadSpace) -> Result<Br2sElem> {
    if qp.field.kind != q.field.kind {
        return Err(Error::FieldMismatch);
    }
    if qp.dim() != q.dim() {
        return Err(Error::DimMismatch(qp.dim(), q.dim()));
    }
    qp.sw()?.sub(&q.sw()?)
}

/// Wall(aQ) − Wall(Q), predicted as (1, {χ_Q, a}).
pub fn scaling_defect(q: &QuadSpace, a: &FieldElem) -> Result<Br2> {
    symbol(&q.field, q.wall()?.chi, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fields() -> Vec<GroundField> {
        vec![
            GroundField::real(),
            GroundField::padic(2).unwrap(),
            GroundField::padic(3).unwrap(),
            GroundField::padic(5).unwrap(),
            GroundField::padic(7).unwrap(),
            GroundField::laurent(3).unwrap(),
        ]
    }

    #[test]
    fn hyperbolic_plane() {
        for f in fields() {
            let h = QuadSpace::hyperbolic(f);
            let d = h.diagonalize().unwrap();
            let mut labels: Vec<String> = d.coeffs.iter().map(|&c| f.class_label(c)).collect();
            labels.sort();
            let mut expect = vec![f.class_label(f.class_one()), f.class_label(f.class_minus_one())];
            expect.sort();
            assert_eq!(labels, expect);
            assert!(h.wall().unwrap().is_zero());
            assert_eq!(h.sw().unwrap(), Br2sElem::z(f));
        }
    }

    #[test]
    fn hamilton_form_over_reals() {
        let r = GroundField::real();
        let q = QuadSpace::diagonal_ints(r, &[1, 1, 1, 1]);
        assert_eq!(q.wall().unwrap(), Br2sElem::new(r, r.class_one(), 1));
        let m = QuadSpace::diagonal_ints(r, &[-1, -1]).diagonalize().unwrap();
        assert!(m.disc().is_trivial());
        assert_eq!(m.hw(), 1);
    }

    #[test]
    fn scaled_norm_forms() {
        for f in fields() {
            for e in QuadExt::all(f) {
                for a in f.classes() {
                    let av = f.class_rep(a);
                    let q = QuadSpace::norm_form(&e).scale(&av).unwrap();
                    let w = q.wall().unwrap();
                    assert_eq!(w.chi, e.a);
                    assert_eq!(w.x, cup(&f, e.a, a));
                }
            }
        }
    }

    #[test]
    fn hw_rel_examples() {
        let r = GroundField::real();
        let a = QuadSpace::diagonal_ints(r, &[1, -1]);
        let b = QuadSpace::diagonal_ints(r, &[1, 1]);
        assert_eq!(hw_rel(&a, &b).unwrap(), Br2sElem::new(r, r.class_minus_one(), 0));
        assert!(hw_rel(&a, &a).unwrap().is_zero());
        let c = QuadSpace::diagonal_ints(r, &[1, 1, 1, 1]);
        assert_eq!(hw_rel(&a, &c), Err(Error::DimMismatch(2, 4)));
    }

    #[test]
    fn unramified_norm_form_scaled_by_p() {
        let f = GroundField::padic(5).unwrap();
        let e = QuadExt::new(f, f.parse_class("2").unwrap()).unwrap();
        let q = QuadSpace::norm_form(&e);
        let w0 = q.wall().unwrap();
        let w1 = q.scale(&f.int(5)).unwrap().wall().unwrap();
        assert_eq!(w0.chi, w1.chi);
        assert_eq!(w0.x ^ w1.x, 1);
    }

    #[test]
    fn orthogonal_basis_is_orthogonal() {
        let f = GroundField::padic(2).unwrap();
        let g = linalg::from_ints(&f, &[vec![2, 1, 0, 0], vec![1, 2, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 4]]);
        let q = QuadSpace::new(f, g).unwrap();
        let (vals, p) = q.orthogonal_basis().unwrap();
        let d = q.change_basis(&p);
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    assert_eq!(d.gram[i][i], &vals[i] + &vals[i]);
                } else {
                    assert!(d.gram[i][j].is_zero());
                }
            }
        }
    }

    #[test]
    fn degenerate_is_rejected() {
        let f = GroundField::padic(3).unwrap();
        let g = linalg::from_ints(&f, &[vec![2, 2], vec![2, 2]]);
        let q = QuadSpace::new(f, g).unwrap();
        assert!(q.diagonalize().is_err());
        assert_eq!(QuadSpace::diagonal_ints(f, &[1, 2, 3]).wall(), Err(Error::OddRank(3)));
    }

    fn nonzero_int() -> impl Strategy<Value = i64> {
        prop_oneof![(1i64..500), (-500i64..-1)]
    }

    fn nonzero_in(f: &GroundField, v: &[i64]) -> bool {
        v.iter().all(|&x| !f.int(x).is_zero())
    }

    proptest! {
        #[test]
        fn wall_is_additive(a in proptest::collection::vec(nonzero_int(), 2..5), b in proptest::collection::vec(nonzero_int(), 2..5), fi in 0usize..6) {
            let f = fields()[fi];
            prop_assume!(nonzero_in(&f, &a) && nonzero_in(&f, &b));
            let mut a = a; let mut b = b;
            a.truncate(a.len() / 2 * 2);
            b.truncate(b.len() / 2 * 2);
            let qa = QuadSpace::diagonal_ints(f, &a);
            let qb = QuadSpace::diagonal_ints(f, &b);
            let lhs = qa.dsum(&qb).wall().unwrap();
            prop_assert_eq!(lhs, qa.wall().unwrap().add(&qb.wall().unwrap()).unwrap());
            let neg: Vec<i64> = a.iter().map(|x| -x).collect();
            prop_assert!(qa.dsum(&QuadSpace::diagonal_ints(f, &neg)).wall().unwrap().is_zero());
        }

        #[test]
        fn scaling_rule(a in proptest::collection::vec(nonzero_int(), 2..7), s in nonzero_int(), fi in 0usize..6) {
            let f = fields()[fi];
            prop_assume!(nonzero_in(&f, &a) && nonzero_in(&f, &[s]));
            let mut a = a;
            a.truncate(a.len() / 2 * 2);
            let q = QuadSpace::diagonal_ints(f, &a);
            let sq = q.scale(&f.int(s)).unwrap();
            let (w, ws) = (q.wall().unwrap(), sq.wall().unwrap());
            prop_assert_eq!(w.chi, ws.chi);
            prop_assert_eq!(w.x ^ ws.x, scaling_defect(&q, &f.int(s)).unwrap());
        }

        #[test]
        fn diagonalization_invariant_under_unimodular_change(g in proptest::collection::vec(-6i64..6, 6), u in proptest::collection::vec(-3i64..3, 3), fi in 0usize..6) {
            let f = fields()[fi];
            let gram = vec![vec![2 * g[0], g[1], g[2]], vec![g[1], 2 * g[3], g[4]], vec![g[2], g[4], 2 * g[5]]];
            let q = QuadSpace::new(f, linalg::from_ints(&f, &gram)).unwrap();
            prop_assume!(q.diagonalize().is_ok());
            // upper unitriangular change of basis
            let p = linalg::from_ints(&f, &[vec![1, u[0], u[1]], vec![0, 1, u[2]], vec![0, 0, 1]]);
            let q2 = q.change_basis(&p);
            let (d1, d2) = (q.diagonalize().unwrap(), q2.diagonalize().unwrap());
            prop_assert_eq!(d1.disc(), d2.disc());
            prop_assert_eq!(d1.hw(), d2.hw());
        }
    }
}
