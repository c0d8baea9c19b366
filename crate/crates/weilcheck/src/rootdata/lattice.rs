//! The Vinberg lattice X₊(𝕋), perpendicular lattices, Smith normal form,
//! and the reduced quadratic spaces over F_ℓ.

use num_integer::Integer;
use num_rational::Rational64;

use super::weyl::{OmegaElem, WeylGroup};
use super::{rat_inverse, PinnedRootDatum};
use crate::error::{Error, Result};

type IntMat = Vec<Vec<i64>>;

fn r(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

/// X₊(𝕋) = {(x₁, x₂) ∈ X₊(𝕋_ad)² : x₁ − x₂ ∈ X₊(𝕋_sc)} with basis
/// (α_i^∨, 0), then (ϖ_j^∨, ϖ_j^∨), and Q_𝕋(x₁, x₂) = Q₁(x₁) − Q₁(x₂).
#[derive(Clone, Debug)]
pub struct VinbergLattice {
    pub rank: usize,
    /// polar Gram B_𝕋 in the lattice basis
    pub gram: IntMat,
    coweights: Vec<Vec<Rational64>>,
    b1: IntMat,
}

impl VinbergLattice {
    pub fn build(d: &PinnedRootDatum, _w: &WeylGroup) -> Result<Self> {
        let n = d.rank;
        let b1 = d.b1();
        let coweights = d.fundamental_coweights();
        let mut gram = vec![vec![0i64; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = b1[i][j];
                // B₁(α_i^∨, ϖ_j^∨)
                let v: Rational64 = (0..n).map(|k| coweights[j][k] * b1[i][k]).sum();
                if !v.is_integer() {
                    return Err(Error::NotIntegral);
                }
                gram[i][n + j] = v.to_integer();
                gram[n + j][i] = v.to_integer();
            }
        }
        Ok(VinbergLattice { rank: n, gram, coweights, b1 })
    }

    pub fn dim(&self) -> usize {
        2 * self.rank
    }

    /// (x₁, x₂) in coroot coordinates.
    pub fn to_pair(&self, v: &[i64]) -> (Vec<Rational64>, Vec<Rational64>) {
        let n = self.rank;
        let mut x2 = vec![r(0); n];
        for j in 0..n {
            for k in 0..n {
                x2[k] += self.coweights[j][k] * v[n + j];
            }
        }
        let x1 = (0..n).map(|k| x2[k] + v[k]).collect();
        (x1, x2)
    }

    pub fn from_pair(&self, x1: &[Rational64], x2: &[Rational64]) -> Result<Vec<i64>> {
        let n = self.rank;
        // x₂ = Σ d_j ϖ_j^∨ with d_j = ⟨α_j, x₂⟩; read off via the inverse change of basis
        let cw: Vec<Vec<Rational64>> = (0..n).map(|k| (0..n).map(|j| self.coweights[j][k]).collect()).collect();
        let inv = rat_inverse(&cw).ok_or(Error::NotIntegral)?;
        let d: Vec<Rational64> = (0..n).map(|j| (0..n).map(|k| inv[j][k] * x2[k]).sum()).collect();
        let c: Vec<Rational64> = (0..n).map(|k| x1[k] - x2[k]).collect();
        c.iter()
            .chain(d.iter())
            .map(|x| if x.is_integer() { Ok(x.to_integer()) } else { Err(Error::NotIntegral) })
            .collect()
    }

    pub fn q1(&self, x: &[Rational64]) -> Rational64 {
        let mut s = r(0);
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += x[i] * x[j] * self.b1[i][j];
            }
        }
        s / 2
    }

    pub fn b(&self, x: &[Rational64], y: &[Rational64]) -> Rational64 {
        let n = self.dim();
        let mut s = r(0);
        for i in 0..n {
            for j in 0..n {
                s += x[i] * y[j] * self.gram[i][j];
            }
        }
        s
    }

    pub fn q(&self, x: &[Rational64]) -> Rational64 {
        self.b(x, x) / 2
    }

    /// Integer matrix of w·ω on the lattice: w acts on x₁, ω on both factors.
    pub fn ext_matrix(&self, weyl: &WeylGroup, g: OmegaElem) -> IntMat {
        let n = self.dim();
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                let (x1, x2) = self.to_pair(&e);
                let y1 = weyl.ext_apply(g, &x1);
                let y2 = weyl.ext_apply(OmegaElem { w: weyl.identity(), o: g.o }, &x2);
                self.from_pair(&y1, &y2).expect("Ω preserves the lattice")
            })
            .collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
    }

    /// (w₁, w₂) ∈ W × W acting factorwise.
    pub fn product_matrix(&self, weyl: &WeylGroup, w1: usize, w2: usize) -> IntMat {
        let n = self.dim();
        let cols: Vec<Vec<i64>> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                let (x1, x2) = self.to_pair(&e);
                self.from_pair(&weyl.apply_coweight(w1, &x1), &weyl.apply_coweight(w2, &x2))
                    .expect("W × W preserves the lattice")
            })
            .collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
    }

    pub fn act_mod2(&self, weyl: &WeylGroup, g: OmegaElem, m: &[u8]) -> Vec<u8> {
        let mat = self.ext_matrix(weyl, g);
        (0..self.dim())
            .map(|i| ((0..self.dim()).map(|j| mat[i][j] * i64::from(m[j])).sum::<i64>().rem_euclid(2)) as u8)
            .collect()
    }

    /// The root β as a vector y of Λ ⊗ Q with B_𝕋(y, x) = ⟨β, x₁⟩.
    pub fn root_vector(&self, d: &PinnedRootDatum, beta: usize) -> Result<Vec<Rational64>> {
        let n = self.dim();
        let g: Vec<Vec<Rational64>> = self.gram.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect();
        let inv = rat_inverse(&g).ok_or(Error::DegenerateForm)?;
        let f: Vec<Rational64> = (0..n)
            .map(|k| {
                let mut e = vec![0; n];
                e[k] = 1;
                let (x1, _) = self.to_pair(&e);
                d.pairing(&d.roots[beta], &x1)
            })
            .collect();
        Ok((0..n).map(|i| (0..n).map(|j| inv[i][j] * f[j]).sum()).collect())
    }

    /// (α^∨, 0) in lattice coordinates.
    pub fn coroot_vector(&self, d: &PinnedRootDatum, beta: usize) -> Vec<i64> {
        let mut v = d.coroot(beta);
        v.extend(std::iter::repeat(0).take(self.rank));
        v
    }

    pub fn triple(&self, ell: i64) -> LatticeTriple {
        LatticeTriple { gram: self.gram.clone(), ell }
    }
}

/// (Λ, Q, ℓ) given by the polar Gram matrix of Q on a basis of Λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeTriple {
    pub gram: IntMat,
    pub ell: i64,
}

/// A quadratic space over F_ℓ: polar Gram and the values Q(e_i), both mod ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedForm {
    pub ell: i64,
    pub gram: IntMat,
    pub values: Vec<i64>,
    /// basis vectors in Λ ⊗ Q coordinates, scaled by `scale`
    pub basis: IntMat,
    pub scale: i64,
}

/// Invariant factors of an integer matrix.
pub fn smith_diagonal(m: &[Vec<i64>]) -> Vec<i64> {
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry as pivot
        let mut best: Option<(i64, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.map_or(true, |(b, _, _)| a[i][j].abs() < b) {
                    best = Some((a[i][j].abs(), i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = Integer::div_floor(&a[i][t], &a[t][t]);
            if q != 0 {
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
            }
            if a[i][t] != 0 {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = Integer::div_floor(&a[t][j], &a[t][t]);
            if q != 0 {
                for i in t..rows {
                    a[i][j] -= q * a[i][t];
                }
            }
            if a[t][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility of the remaining block
        let p = a[t][t];
        let mut fixed = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if a[i][j] % p != 0 {
                    for k in t..cols {
                        a[t][k] += a[i][k];
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            diag.push(p.abs());
            t += 1;
        }
    }
    diag
}

fn modp(x: i64, p: i64) -> i64 {
    x.rem_euclid(p)
}

fn inv_mod(a: i64, p: i64) -> i64 {
    let e = a.extended_gcd(&p);
    modp(e.x, p)
}

/// Row-reduce vectors mod p; returns indices of a maximal independent subset.
fn independent_mod(vectors: &[Vec<i64>], p: i64) -> Vec<usize> {
    let mut basis: Vec<Vec<i64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut v: Vec<i64> = v.iter().map(|&x| modp(x, p)).collect();
        for (b, &pc) in basis.iter().zip(&pivots) {
            if v[pc] != 0 {
                let f = v[pc];
                for (x, y) in v.iter_mut().zip(b) {
                    *x = modp(*x - f * y, p);
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[pc], p);
            for x in v.iter_mut() {
                *x = modp(*x * inv, p);
            }
            basis.push(v);
            pivots.push(pc);
            chosen.push(idx);
        }
    }
    chosen
}

/// Solves Σ c_j cols_j ≡ target (mod p) for a basis `cols`.
pub(crate) fn solve_mod(cols: &[Vec<i64>], target: &[i64], p: i64) -> Option<Vec<i64>> {
    let n = target.len();
    let k = cols.len();
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = (0..k).map(|j| modp(cols[j][i], p)).collect();
            row.push(modp(target[i], p));
            row
        })
        .collect();
    let mut row = 0;
    let mut piv_cols = Vec::new();
    for c in 0..k {
        let Some(pr) = (row..n).find(|&i| m[i][c] != 0) else { continue };
        m.swap(row, pr);
        let inv = inv_mod(m[row][c], p);
        for x in m[row].iter_mut() {
            *x = modp(*x * inv, p);
        }
        for i in 0..n {
            if i != row && m[i][c] != 0 {
                let f = m[i][c];
                let prow = m[row].clone();
                for (x, y) in m[i].iter_mut().zip(&prow) {
                    *x = modp(*x - f * y, p);
                }
            }
        }
        piv_cols.push(c);
        row += 1;
    }
    if m[row..].iter().any(|r| r[k] != 0) {
        return None;
    }
    let mut sol = vec![0; k];
    for (i, &c) in piv_cols.iter().enumerate() {
        sol[c] = m[i][k];
    }
    Some(sol)
}

fn det_mod(m: &[Vec<i64>], p: i64) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&x| modp(x, p)).collect()).collect();
    let mut d = 1;
    for k in 0..n {
        let Some(pr) = (k..n).find(|&i| a[i][k] != 0) else { return 0 };
        if pr != k {
            a.swap(k, pr);
            d = modp(-d, p);
        }
        d = modp(d * a[k][k], p);
        let inv = inv_mod(a[k][k], p);
        for i in k + 1..n {
            let f = modp(a[i][k] * inv, p);
            for j in k..n {
                a[i][j] = modp(a[i][j] - f * a[k][j], p);
            }
        }
    }
    d
}

impl LatticeTriple {
    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    fn rat_gram(&self) -> Vec<Vec<Rational64>> {
        self.gram.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect()
    }

    /// Q integral on Λ: integer polar Gram with even diagonal.
    pub fn q_integral(&self) -> bool {
        (0..self.dim()).all(|i| self.gram[i][i] % 2 == 0)
    }

    /// Basis of Λ^⊥ = {x : B(x, Λ) ⊂ Z}: the columns of B⁻¹.
    pub fn perp_basis(&self) -> Result<Vec<Vec<Rational64>>> {
        let inv = rat_inverse(&self.rat_gram()).ok_or(Error::DegenerateForm)?;
        let n = self.dim();
        Ok((0..n).map(|j| (0..n).map(|i| inv[i][j]).collect()).collect())
    }

    /// ℓ·B⁻¹, which is the Gram of ℓB on Λ^⊥ and also ℓΛ^⊥ in Λ coordinates.
    fn ell_perp(&self) -> Result<IntMat> {
        let perp = self.perp_basis()?;
        let n = self.dim();
        let mut out = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let v = perp[j][i] * self.ell;
                if !v.is_integer() {
                    return Err(Error::NotIntegral);
                }
                out[i][j] = v.to_integer();
            }
        }
        Ok(out)
    }

    /// ℓΛ^⊥ ⊂ Λ ⊂ Λ^⊥ ⊂ ℓ⁻¹Λ, with Q integral on Λ and ℓQ integral on Λ^⊥.
    pub fn check_chain(&self) -> Result<()> {
        if !self.q_integral() {
            return Err(Error::NotIntegral);
        }
        let m = self.ell_perp()?;
        // ℓQ on Λ^⊥ has polar Gram ℓB⁻¹; its diagonal must be even
        if (0..self.dim()).any(|i| m[i][i] % 2 != 0) {
            return Err(Error::NotIntegral);
        }
        Ok(())
    }

    pub fn discriminant_order(&self) -> i64 {
        smith_diagonal(&self.gram).iter().product()
    }

    /// (dim Λ/ℓΛ^⊥, dim Λ^⊥/Λ) over F_ℓ.
    pub fn reduced_dims(&self) -> Result<(usize, usize)> {
        let m = self.ell_perp()?;
        let k = independent_mod(&transpose(&m), self.ell).len();
        Ok((self.dim() - k, k))
    }

    /// Q′ on Λ/ℓΛ^⊥ and Q″ = ℓQ on Λ^⊥/Λ, both over F_ℓ.
    pub fn reduced_forms(&self) -> Result<(ReducedForm, ReducedForm)> {
        if self.ell == 1 {
            // Λ^⊥ = Λ: both quotients vanish
            self.check_chain()?;
            let empty = ReducedForm { ell: 1, gram: vec![], values: vec![], basis: vec![], scale: 1 };
            return Ok((empty.clone(), empty));
        }
        if !crate::localfield::is_prime(self.ell as u64) {
            return Err(Error::EllNotPrime(self.ell));
        }
        self.check_chain()?;
        let p = self.ell;
        let n = self.dim();
        let m = self.ell_perp()?;
        let cols = transpose(&m);
        let sub = independent_mod(&cols, p);
        let u: IntMat = sub.iter().map(|&j| cols[j].clone()).collect();
        // complement of colspace(M) in F_ℓ^n, from standard basis vectors
        let mut all = u.clone();
        let mut comp = Vec::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            all.push(e.clone());
            if independent_mod(&all, p).len() == all.len() {
                comp.push(e);
            } else {
                all.pop();
            }
        }
        let bil = |x: &[i64], y: &[i64]| -> i64 {
            let mut s = 0;
            for i in 0..n {
                for j in 0..n {
                    s += x[i] * self.gram[i][j] * y[j];
                }
            }
            s
        };
        let qp = ReducedForm {
            ell: p,
            gram: comp.iter().map(|x| comp.iter().map(|y| modp(bil(x, y), p)).collect()).collect(),
            values: comp.iter().map(|x| modp(bil(x, x) / 2, p)).collect(),
            basis: comp.clone(),
            scale: 1,
        };
        // y = u/ℓ, and ℓB(y, y') = B(u, u')/ℓ
        let qpp = ReducedForm {
            ell: p,
            gram: u.iter().map(|x| u.iter().map(|y| modp(bil(x, y) / p, p)).collect()).collect(),
            values: u.iter().map(|x| modp(bil(x, x) / (2 * p), p)).collect(),
            basis: u,
            scale: p,
        };
        Ok((qp, qpp))
    }

    /// Matrices of an automorphism g of Λ on Λ/ℓΛ^⊥ and on Λ^⊥/Λ.
    pub fn reduced_action(&self, g: &IntMat, forms: &(ReducedForm, ReducedForm)) -> Result<(IntMat, IntMat)> {
        let p = self.ell;
        let n = self.dim();
        let apply = |v: &[i64]| -> Vec<i64> { (0..n).map(|i| (0..n).map(|j| g[i][j] * v[j]).sum()).collect() };
        let (qp, qpp) = forms;
        // Λ/ℓΛ^⊥: express g(e) in the complement basis modulo colspace(M)
        let mut full = qp.basis.clone();
        full.extend(qpp.basis.iter().cloned());
        let k1 = qp.basis.len();
        let mut a1 = vec![vec![0; k1]; k1];
        for (j, b) in qp.basis.iter().enumerate() {
            let c = solve_mod(&full, &apply(b), p).ok_or(Error::NotIntegral)?;
            for i in 0..k1 {
                a1[i][j] = c[i];
            }
        }
        let k2 = qpp.basis.len();
        let mut a2 = vec![vec![0; k2]; k2];
        for (j, b) in qpp.basis.iter().enumerate() {
            let c = solve_mod(&qpp.basis, &apply(b), p).ok_or(Error::NotIntegral)?;
            for i in 0..k2 {
                a2[i][j] = c[i];
            }
        }
        Ok((a1, a2))
    }
}

impl ReducedForm {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn q(&self, x: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.dim() {
            s += self.values[i] * x[i] * x[i];
            for j in i + 1..self.dim() {
                s += self.gram[i][j] * x[i] * x[j];
            }
        }
        modp(s, self.ell)
    }

    pub fn b(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                s += x[i] * self.gram[i][j] * y[j];
            }
        }
        modp(s, self.ell)
    }

    /// Nondegenerate: nonsingular polar form for odd ℓ; for ℓ = 2, Q is
    /// anisotropic on the radical of the polar form.
    pub fn is_nondegenerate(&self) -> bool {
        let n = self.dim();
        if n == 0 {
            return true;
        }
        if self.ell != 2 {
            return det_mod(&self.gram, self.ell) != 0;
        }
        (1..(1u32 << n)).all(|mask| {
            let x: Vec<i64> = (0..n).map(|i| i64::from((mask >> i) & 1)).collect();
            let radical = (0..n).all(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                self.b(&x, &e) == 0
            });
            !radical || self.q(&x) != 0
        })
    }

    /// Whether g acts as the reflection in v: x ↦ x − B(x, v)Q(v)⁻¹ v.
    pub fn is_reflection(&self, g: &IntMat, v: &[i64]) -> bool {
        let n = self.dim();
        let qv = self.q(v);
        if qv == 0 {
            return false;
        }
        let inv = inv_mod(qv, self.ell);
        (0..n).all(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            let c = modp(self.b(&e, v) * inv, self.ell);
            (0..n).all(|i| modp(g[i][j] - e[i] + c * v[i], self.ell) == 0)
        })
    }

    /// Coordinates mod ℓ of a Λ-vector (scaled by `scale`) in this basis,
    /// modulo `other` (the complementary subspace, for Λ/ℓΛ^⊥).
    pub fn coords(&self, v: &[i64], other: &ReducedForm) -> Option<Vec<i64>> {
        let mut full = self.basis.clone();
        if self.scale == 1 {
            full.extend(other.basis.iter().cloned());
        }
        let c = solve_mod(&full, v, self.ell)?;
        Some(c[..self.dim()].to_vec())
    }
}

fn transpose(m: &IntMat) -> IntMat {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

#[cfg(test)]
fn is_identity_mod(m: &IntMat, p: i64) -> bool {
    m.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| modp(x - i64::from(i == j), p) == 0))
}

#[cfg(test)]
fn abs_det(m: &IntMat) -> i64 {
    smith_diagonal(m).iter().product::<i64>().abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanType;

    fn setup(t: &str) -> (PinnedRootDatum, WeylGroup, VinbergLattice) {
        let d = PinnedRootDatum::build(t.parse::<CartanType>().unwrap()).unwrap();
        let w = WeylGroup::build(&d).unwrap();
        let v = VinbergLattice::build(&d, &w).unwrap();
        (d, w, v)
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_diagonal(&[vec![6, -3], vec![-3, 2]]), vec![1, 3]);
        assert_eq!(smith_diagonal(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(smith_diagonal(&[vec![4, -2], vec![-2, 2]]), vec![2, 2]);
    }

    #[test]
    fn g2_single_factor() {
        let (d, _, _) = setup("G2");
        let t = LatticeTriple { gram: d.b1(), ell: 3 };
        assert_eq!(t.discriminant_order(), 3);
        t.check_chain().unwrap();
        let (qp, qpp) = t.reduced_forms().unwrap();
        assert_eq!((qp.dim(), qpp.dim()), (1, 1));
        assert!(qp.is_nondegenerate() && qpp.is_nondegenerate());
    }

    #[test]
    fn c2_single_factor_dimensions() {
        let (d, _, _) = setup("C2");
        let t = LatticeTriple { gram: d.b1(), ell: 2 };
        let (a, b) = t.reduced_dims().unwrap();
        assert_eq!(a + b, 2);
        assert_eq!(t.check_chain(), Err(Error::NotIntegral));
    }

    #[test]
    fn simply_laced_chain_collapses() {
        let (_, _, v) = setup("A3");
        let t = v.triple(1);
        t.check_chain().unwrap();
        let (qp, qpp) = t.reduced_forms().unwrap();
        assert_eq!((qp.dim(), qpp.dim()), (0, 0));
    }

    #[test]
    fn vinberg_round_trip_and_form() {
        for t in ["A1", "A2", "C2", "B2", "A3", "G2"] {
            let (d, w, v) = setup(t);
            for k in 0..v.dim() {
                let mut e = vec![0; v.dim()];
                e[k] = 1;
                let (x1, x2) = v.to_pair(&e);
                assert_eq!(v.from_pair(&x1, &x2).unwrap(), e);
                let q = v.q(&e.iter().map(|&x| r(x)).collect::<Vec<_>>());
                assert_eq!(q, d.q1(&x1) - d.q1(&x2));
                assert!(q.is_integer());
            }
            let id = w.ext_identity();
            let m = v.ext_matrix(&w, id);
            assert!(is_identity_mod(&m, 1_000_003));
            assert_eq!(abs_det(&v.gram), (0..d.rank).map(|i| d.ell_coroot(d.simple(i))).product::<i64>().pow(2));
        }
        let (_, _, v) = setup("A1");
        assert_eq!(v.gram, vec![vec![2, 1], vec![1, 0]]);
    }

    #[test]
    fn vinberg_reduced_forms() {
        for t in ["B2", "C2", "G2"] {
            let (_, _, v) = setup(t);
            let tr = v.triple(if t == "G2" { 3 } else { 2 });
            tr.check_chain().unwrap();
            let (qp, qpp) = tr.reduced_forms().unwrap();
            assert_eq!(qp.dim() + qpp.dim(), 4);
            assert!(qp.is_nondegenerate(), "{t}");
            assert!(qpp.is_nondegenerate(), "{t}");
        }
    }
}
