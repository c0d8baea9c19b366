//! Dense matrices over a ground field, with valuation-aware pivoting.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::localfield::{FieldElem, GroundField};

pub type Mat = Vec<Vec<FieldElem>>;

pub fn zeros(f: &GroundField, r: usize, c: usize) -> Mat {
    vec![vec![f.zero(); c]; r]
}

pub fn identity(f: &GroundField, n: usize) -> Mat {
    let mut m = zeros(f, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = f.one();
    }
    m
}

pub fn from_ints(f: &GroundField, m: &[Vec<i64>]) -> Mat {
    m.iter().map(|r| r.iter().map(|&x| f.int(x)).collect()).collect()
}

pub fn from_rationals(f: &GroundField, m: &[Vec<BigRational>]) -> Result<Mat> {
    m.iter().map(|r| r.iter().map(|x| f.rational(x)).collect()).collect()
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mul(f: &GroundField, a: &Mat, b: &Mat) -> Mat {
    let (n, k) = (a.len(), b.len());
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(f, n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_exact_zero() {
                continue;
            }
            for j in 0..m {
                if b[l][j].is_exact_zero() {
                    continue;
                }
                out[i][j] = &out[i][j] + &(&a[i][l] * &b[l][j]);
            }
        }
    }
    out
}

pub fn mat_vec(f: &GroundField, a: &Mat, v: &[FieldElem]) -> Vec<FieldElem> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(f.zero(), |acc, (x, y)| {
                if x.is_exact_zero() || y.is_exact_zero() {
                    acc
                } else {
                    &acc + &(x * y)
                }
            })
        })
        .collect()
}

/// xᵀ G y.
pub fn bilinear(f: &GroundField, g: &Mat, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
    let gy = mat_vec(f, g, y);
    x.iter().zip(&gy).fold(f.zero(), |acc, (a, b)| &acc + &(a * b))
}

fn best_pivot(rows: &Mat, from: usize, cols: Option<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(i64, usize, usize)> = None;
    for (i, row) in rows.iter().enumerate().skip(from) {
        for (j, x) in row.iter().enumerate() {
            if cols.is_some_and(|c| j != c) {
                continue;
            }
            if let Some(k) = x.pivot_key() {
                if best.map_or(true, |(bk, _, _)| k < bk) {
                    best = Some((k, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Basis of the row space, by elimination with full pivoting on the
/// entry of least valuation (least height over Q).
pub fn row_space_basis(rows: &Mat) -> Mat {
    let mut m = rows.clone();
    let mut rank = 0;
    while let Some((pi, pj)) = best_pivot(&m, rank, None) {
        m.swap(rank, pi);
        let piv_inv = m[rank][pj].inv().expect("pivot is nonzero");
        for i in rank + 1..m.len() {
            if m[i][pj].is_zero() {
                continue;
            }
            let factor = &m[i][pj] * &piv_inv;
            let prow = m[rank].clone();
            for (x, p) in m[i].iter_mut().zip(&prow) {
                if !p.is_exact_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        rank += 1;
    }
    m.truncate(rank);
    m
}

/// Solves a·x = b for square invertible a.
pub fn solve(f: &GroundField, a: &Mat, b: &[FieldElem]) -> Result<Vec<FieldElem>> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::DimMismatch(n, b.len()));
    }
    let mut m: Mat = a.iter().zip(b).map(|(r, x)| {
        let mut r = r.clone();
        r.push(x.clone());
        r
    }).collect();
    let mut colperm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        // pivot among the coefficient block only
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            for (jj, &j) in colperm.iter().enumerate().skip(k) {
                if let Some(key) = row[j].pivot_key() {
                    if best.map_or(true, |(bk, _, _)| key < bk) {
                        best = Some((key, i, jj));
                    }
                }
            }
        }
        let Some((_, pi, pjj)) = best else {
            return Err(singular(&m, k));
        };
        m.swap(k, pi);
        colperm.swap(k, pjj);
        let pj = colperm[k];
        let piv_inv = m[k][pj].inv()?;
        for i in 0..n {
            if i == k || m[i][pj].is_zero() {
                continue;
            }
            let factor = &m[i][pj] * &piv_inv;
            let prow = m[k].clone();
            for (x, p) in m[i].iter_mut().zip(&prow) {
                if !p.is_exact_zero() {
                    *x = &*x - &(&factor * p);
                }
            }
        }
    }
    let mut x = vec![f.zero(); n];
    for k in 0..n {
        let pj = colperm[k];
        x[pj] = m[k][n].checked_div(&m[k][pj])?;
    }
    Ok(x)
}

fn singular(m: &Mat, k: usize) -> Error {
    let exact = m.iter().skip(k).all(|r| r.iter().all(|x| !x.is_zero() || x.is_exact_zero()));
    if exact {
        Error::DegenerateForm
    } else {
        Error::PrecisionLoss("matrix is singular to working precision".into())
    }
}

pub fn inverse(f: &GroundField, a: &Mat) -> Result<Mat> {
    let n = a.len();
    let id = identity(f, n);
    let cols: Result<Vec<Vec<FieldElem>>> = (0..n).map(|j| solve(f, a, &id[j])).collect();
    Ok(transpose(&cols?))
}

/// Determinant by elimination.
pub fn det(f: &GroundField, a: &Mat) -> Result<FieldElem> {
    let n = a.len();
    let mut m = a.clone();
    let mut d = f.one();
    for k in 0..n {
        let mut best: Option<(i64, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(k) {
            if let Some(key) = row[k].pivot_key() {
                if best.map_or(true, |(bk, _)| key < bk) {
                    best = Some((key, i));
                }
            }
        }
        let Some((_, pi)) = best else {
            let exact = m.iter().skip(k).all(|r| r[k].is_exact_zero());
            return if exact { Ok(f.zero()) } else { Err(Error::PrecisionLoss("determinant vanishes to working precision".into())) };
        };
        if pi != k {
            m.swap(k, pi);
            d = -&d;
        }
        d = &d * &m[k][k];
        let piv_inv = m[k][k].inv()?;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] * &piv_inv;
            let prow = m[k].clone();
            for (x, p) in m[i].iter_mut().zip(&prow).skip(k) {
                *x = &*x - &(&factor * p);
            }
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_inverse_padic() {
        let f = GroundField::padic(3).unwrap();
        let a = from_ints(&f, &[vec![3, 1, 0], vec![1, 9, 2], vec![0, 2, 27]]);
        let inv = inverse(&f, &a).unwrap();
        let id = mul(&f, &a, &inv);
        assert_eq!(id, identity(&f, 3));
    }

    #[test]
    fn determinant_and_rank() {
        let f = GroundField::real();
        let a = from_ints(&f, &[vec![2, 1], vec![4, 2]]);
        assert!(det(&f, &a).unwrap().is_exact_zero());
        assert_eq!(row_space_basis(&a).len(), 1);
        let b = from_ints(&f, &[vec![6, -3], vec![-3, 2]]);
        assert_eq!(det(&f, &b).unwrap(), f.int(3));
    }

    #[test]
    fn laurent_row_space() {
        let f = GroundField::laurent(3).unwrap();
        let t = f.uniformizer().unwrap();
        let rows = vec![vec![f.one(), t.clone()], vec![t.clone(), &t * &t], vec![f.zero(), t]];
        assert_eq!(row_space_basis(&rows).len(), 2);
    }
}
