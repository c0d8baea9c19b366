//! Chevalley basis of Lie(𝔾) over Z: structure constants, adjoint action
//! of Tits lifts, diagram automorphisms and 2-torsion of the torus, and the
//! invariant forms.

use num_rational::Rational64;
use num_traits::{One, Zero};

use super::lattice::VinbergLattice;
use super::weyl::{OmegaElem, WeylGroup};
use super::PinnedRootDatum;
use crate::error::{Error, Result};

pub type RMat = Vec<Vec<Rational64>>;

fn rzeros(n: usize) -> RMat {
    vec![vec![Rational64::zero(); n]; n]
}

fn rident(n: usize) -> RMat {
    let mut m = rzeros(n);
    for (i, r) in m.iter_mut().enumerate() {
        r[i] = Rational64::one();
    }
    m
}

pub fn rmul(a: &RMat, b: &RMat) -> RMat {
    let n = a.len();
    let mut out = rzeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

/// Element m(−1)·n(w)·ω of the normalizer, m ∈ X₊(𝕋)/2 in Vinberg coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormElem {
    pub m: Vec<u8>,
    pub g: OmegaElem,
}

/// Lie(𝔾) over Z with basis: the Vinberg basis of Lie(𝕋), then e_β for every root β.
#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    pub datum: PinnedRootDatum,
    pub weyl: WeylGroup,
    pub lattice: VinbergLattice,
    /// N_{α,β} with [e_α, e_β] = N_{α,β} e_{α+β}
    pub n: Vec<Vec<i64>>,
    /// c_β^ω with ω(e_β) = c_β e_{ωβ}, per element of Ω₀
    omega_signs: Vec<Vec<i64>>,
    ad_simple: Vec<RMat>,
}

pub type IMat = Vec<Vec<i64>>;

impl ChevalleyAlgebra {
    pub fn build(datum: &PinnedRootDatum) -> Result<Self> {
        let weyl = WeylGroup::build(datum)?;
        let lattice = VinbergLattice::build(datum, &weyl)?;
        let mut n = structure_constants(datum)?;
        if datum.mutation.flip_structure_constant {
            let np = datum.npos;
            'outer: for a in 0..np {
                for b in 0..np {
                    if n[a][b] != 0 {
                        n[a][b] = -n[a][b];
                        n[b][a] = -n[b][a];
                        break 'outer;
                    }
                }
            }
        }
        let mut alg = ChevalleyAlgebra { datum: datum.clone(), weyl, lattice, n, omega_signs: vec![], ad_simple: vec![] };
        alg.omega_signs = (0..alg.weyl.omega0.len()).map(|o| alg.compute_omega_signs(o)).collect();
        alg.ad_simple = (0..datum.rank).map(|i| alg.tits_generator(i)).collect();
        Ok(alg)
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn torus_dim(&self) -> usize {
        2 * self.datum.rank
    }

    pub fn dim(&self) -> usize {
        self.torus_dim() + self.datum.nroots()
    }

    pub fn root_basis(&self, beta: usize) -> usize {
        self.torus_dim() + beta
    }

    /// ⟨β, h⟩ for the torus basis vector h (root acts through x₁).
    pub fn weight(&self, beta: usize, h: usize) -> i64 {
        let r = self.rank();
        let b = &self.datum.roots[beta];
        if h < r {
            self.datum.root_coroot(b, h)
        } else {
            b[h - r]
        }
    }

    /// [x_a, x_b] as a sparse vector.
    pub fn bracket(&self, a: usize, b: usize) -> Vec<(usize, i64)> {
        let t = self.torus_dim();
        match (a < t, b < t) {
            (true, true) => vec![],
            (true, false) => vec![(b, self.weight(b - t, a))],
            (false, true) => vec![(a, -self.weight(a - t, b))],
            (false, false) => {
                let (x, y) = (a - t, b - t);
                if self.datum.neg(x) == y {
                    // [e_β, e_{−β}] = (β^∨, 0)
                    self.datum.coroot(x).into_iter().enumerate().filter(|(_, c)| *c != 0).collect()
                } else {
                    let s: Vec<i64> = self.datum.roots[x].iter().zip(&self.datum.roots[y]).map(|(p, q)| p + q).collect();
                    match self.datum.root_index(&s) {
                        Some(z) if self.n[x][y] != 0 => vec![(t + z, self.n[x][y])],
                        _ => vec![],
                    }
                }
            }
        }
    }

    pub fn ad(&self, a: usize) -> RMat {
        let d = self.dim();
        let mut m = rzeros(d);
        for j in 0..d {
            for (k, c) in self.bracket(a, j) {
                m[k][j] += Rational64::from_integer(c);
            }
        }
        m
    }

    fn exp_nilpotent(&self, x: &RMat) -> RMat {
        let d = self.dim();
        let mut out = rident(d);
        let mut term = rident(d);
        for k in 1..=d {
            term = rmul(&term, x);
            if term.iter().all(|r| r.iter().all(|c| c.is_zero())) {
                break;
            }
            let f = Rational64::from_integer(k as i64);
            for r in term.iter_mut() {
                for c in r.iter_mut() {
                    *c /= f;
                }
            }
            for (o, t) in out.iter_mut().zip(&term) {
                for (a, b) in o.iter_mut().zip(t) {
                    *a += *b;
                }
            }
        }
        out
    }

    /// Ad(n_i) = exp(ad e_i) exp(−ad f_i) exp(ad e_i).
    fn tits_generator(&self, i: usize) -> RMat {
        let a = self.datum.simple(i);
        let e = self.ad(self.root_basis(a));
        let mut f = self.ad(self.root_basis(self.datum.neg(a)));
        for r in f.iter_mut() {
            for c in r.iter_mut() {
                *c = -*c;
            }
        }
        let ee = self.exp_nilpotent(&e);
        let ef = self.exp_nilpotent(&f);
        rmul(&rmul(&ee, &ef), &ee)
    }

    pub fn ad_tits_simple(&self, i: usize) -> &RMat {
        &self.ad_simple[i]
    }

    /// Ad(n(w)) for the Tits section along the stored reduced word.
    pub fn ad_tits(&self, w: usize) -> RMat {
        let mut m = rident(self.dim());
        for &i in &self.weyl.elements[w].word {
            m = rmul(&m, &self.ad_simple[i]);
        }
        m
    }

    fn compute_omega_signs(&self, o: usize) -> Vec<i64> {
        let d = &self.datum;
        let p = &self.weyl.omega0[o];
        let perm = self.weyl.omega_root_perm(d, o);
        let mut c = vec![0i64; d.nroots()];
        for sign in [1i64, -1] {
            for x in 0..d.npos {
                let xi = if sign == 1 { x } else { d.neg(x) };
                let r = &d.roots[xi];
                let height: i64 = r.iter().sum::<i64>().abs();
                if height == 1 {
                    c[xi] = 1;
                    continue;
                }
                // extraspecial decomposition ξ = ±α_i + η
                let (ai, eta) = (0..d.rank)
                    .find_map(|i| {
                        let mut v = r.clone();
                        v[i] -= sign;
                        d.root_index(&v).map(|e| (i, e))
                    })
                    .expect("non-simple root decomposes");
                let mut av = vec![0; d.rank];
                av[ai] = sign;
                let a = d.root_index(&av).unwrap();
                let mut pav = vec![0; d.rank];
                pav[p[ai]] = sign;
                let pa = d.root_index(&pav).unwrap();
                let num = c[eta] * self.n[pa][perm[eta]];
                let den = self.n[a][eta];
                c[xi] = if den != 0 && num % den == 0 { num / den } else { 0 };
            }
        }
        c
    }

    pub fn ad_omega(&self, o: usize) -> RMat {
        let r = self.rank();
        let t = self.torus_dim();
        let p = &self.weyl.omega0[o];
        let perm = self.weyl.omega_root_perm(&self.datum, o);
        let mut m = rzeros(self.dim());
        for i in 0..r {
            m[p[i]][i] = Rational64::one();
            m[r + p[i]][r + i] = Rational64::one();
        }
        for b in 0..self.datum.nroots() {
            m[t + perm[b]][t + b] = Rational64::from_integer(self.omega_signs[o][b]);
        }
        m
    }

    /// Ad(m(−1)) for m ∈ X₊(𝕋)/2.
    pub fn ad_torsion(&self, m: &[u8]) -> RMat {
        let t = self.torus_dim();
        let mut out = rident(self.dim());
        for b in 0..self.datum.nroots() {
            let e: i64 = (0..t).map(|h| i64::from(m[h]) * self.weight(b, h)).sum();
            if e.rem_euclid(2) == 1 {
                out[t + b][t + b] = -Rational64::one();
            }
        }
        out
    }

    pub fn ad_norm_elem(&self, x: &NormElem) -> RMat {
        rmul(&rmul(&self.ad_torsion(&x.m), &self.ad_tits(x.g.w)), &self.ad_omega(x.g.o))
    }

    /// n(w)·n(v) = t(w, v)(−1)·n(wv); returns t mod 2.
    pub fn tits_defect(&self, w: usize, v: usize) -> Vec<u8> {
        let t = self.torus_dim();
        let mut m = vec![0u8; t];
        let mut cur = w;
        for &i in &self.weyl.elements[v].word {
            let a = self.datum.simple(i);
            let img = self.weyl.elements[cur].root_perm[a];
            if !self.datum.is_positive(img) {
                // w(α_i^∨), a coroot
                let c = self.datum.coroot(img);
                for (k, x) in c.iter().enumerate() {
                    m[k] ^= (x.rem_euclid(2)) as u8;
                }
            }
            cur = self.weyl.mul(cur, self.weyl.simple_reflection(i));
        }
        m
    }

    pub fn norm_identity(&self) -> NormElem {
        NormElem { m: vec![0; self.torus_dim()], g: self.weyl.ext_identity() }
    }

    pub fn norm_mul(&self, a: &NormElem, b: &NormElem) -> NormElem {
        let v = self.weyl.conj_by_omega(a.g.o, b.g.w);
        let moved = self.lattice.act_mod2(&self.weyl, a.g, &b.m);
        let d = self.tits_defect(a.g.w, v);
        let m = (0..self.torus_dim()).map(|k| a.m[k] ^ moved[k] ^ d[k]).collect();
        NormElem { m, g: self.weyl.ext_mul(a.g, b.g) }
    }

    /// Polar Gram of Q_𝕍 on the root part: B(e_β, e_{−β}) = 1.
    pub fn q_v_gram(&self) -> IMat {
        let nr = self.datum.nroots();
        let mut g = vec![vec![0; nr]; nr];
        for b in 0..nr {
            g[b][self.datum.neg(b)] = 1;
        }
        g
    }

    /// The invariant form on Lie(𝔾) extending B_𝕋, from
    /// B([e_β, e_{−β}], h) = ⟨β, h⟩ B(e_β, e_{−β}).
    pub fn q_g_gram(&self) -> Result<RMat> {
        let t = self.torus_dim();
        let bt = &self.lattice.gram;
        let mut g = rzeros(self.dim());
        for i in 0..t {
            for j in 0..t {
                g[i][j] = Rational64::from_integer(bt[i][j]);
            }
        }
        for b in 0..self.datum.nroots() {
            let h = (0..t).find(|&h| self.weight(b, h) != 0).ok_or(Error::DegenerateForm)?;
            let cor = self.datum.coroot(b);
            let lhs: i64 = (0..self.rank()).map(|k| cor[k] * bt[k][h]).sum();
            let v = Rational64::new(lhs, self.weight(b, h));
            g[t + b][t + self.datum.neg(b)] = v;
        }
        Ok(g)
    }

    /// Jacobi identity on all basis triples.
    pub fn check_jacobi(&self) -> bool {
        let d = self.dim();
        let br = |x: &[(usize, i64)], c: usize| -> Vec<i64> {
            let mut out = vec![0i64; d];
            for &(k, a) in x {
                for (l, b) in self.bracket(k, c) {
                    out[l] += a * b;
                }
            }
            out
        };
        for a in 0..d {
            for b in a + 1..d {
                let ab = self.bracket(a, b);
                for c in b + 1..d {
                    let bc = self.bracket(b, c);
                    let ca = self.bracket(c, a);
                    let s1 = br(&ab, c);
                    let s2 = br(&bc, a);
                    let s3 = br(&ca, b);
                    if (0..d).any(|k| s1[k] + s2[k] + s3[k] != 0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Whether a matrix is a Lie algebra automorphism (on basis pairs).
    pub fn is_automorphism(&self, m: &RMat) -> bool {
        let d = self.dim();
        let col = |j: usize| -> Vec<Rational64> { (0..d).map(|i| m[i][j]).collect() };
        let bracket_vec = |x: &[Rational64], y: &[Rational64]| -> Vec<Rational64> {
            let mut out = vec![Rational64::zero(); d];
            for (a, xa) in x.iter().enumerate() {
                if xa.is_zero() {
                    continue;
                }
                for (b, yb) in y.iter().enumerate() {
                    if yb.is_zero() {
                        continue;
                    }
                    for (k, c) in self.bracket(a, b) {
                        out[k] += *xa * *yb * c;
                    }
                }
            }
            out
        };
        for a in 0..d {
            for b in a + 1..d {
                let lhs = bracket_vec(&col(a), &col(b));
                let mut rhs = vec![Rational64::zero(); d];
                for (k, c) in self.bracket(a, b) {
                    for i in 0..d {
                        rhs[i] += m[i][k] * c;
                    }
                }
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Whether Ad(x) sends each root line to a root line with coefficient ±1.
    pub fn permutes_root_lines(&self, m: &RMat, perm: &[usize]) -> bool {
        let t = self.torus_dim();
        for b in 0..self.datum.nroots() {
            for i in 0..self.dim() {
                let v = m[i][t + b];
                let expect_line = i == t + perm[b];
                if expect_line {
                    if v != Rational64::one() && v != -Rational64::one() {
                        return false;
                    }
                } else if !v.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Structure constants from the extraspecial pairs with positive sign.
fn structure_constants(d: &PinnedRootDatum) -> Result<Vec<Vec<i64>>> {
    let nr = d.nroots();
    let mut n = vec![vec![0i64; nr]; nr];
    let add = |a: usize, b: usize| -> Option<usize> {
        let s: Vec<i64> = d.roots[a].iter().zip(&d.roots[b]).map(|(x, y)| x + y).collect();
        d.root_index(&s)
    };
    let sub = |a: usize, b: usize| -> Option<usize> {
        let s: Vec<i64> = d.roots[a].iter().zip(&d.roots[b]).map(|(x, y)| x - y).collect();
        d.root_index(&s)
    };
    // p = largest k with β − kα a root
    let pval = |a: usize, b: usize| -> i64 {
        let mut k = 0;
        let mut v = d.roots[b].clone();
        loop {
            for (x, y) in v.iter_mut().zip(&d.roots[a]) {
                *x -= y;
            }
            if d.root_index(&v).is_some() {
                k += 1;
            } else {
                return k;
            }
        }
    };
    let norm = |a: usize| d.norm(a);
    let bad = |msg: &str| Error::Invalid(format!("structure constants for {}: {msg}", d.ctype));
    // record N_{a,b} = v for a + b + c = 0, with all consequences
    let set_triple = |n: &mut Vec<Vec<i64>>, a: usize, b: usize, v: i64| -> Result<()> {
        let c = d.neg(add(a, b).ok_or_else(|| bad("sum is not a root"))?);
        let (na, nb, nc) = (norm(a), norm(b), norm(c));
        if (v * na) % nc != 0 || (v * nb) % nc != 0 {
            return Err(bad("inexact cyclic relation"));
        }
        for (x, y, val) in [(a, b, v), (b, c, v * na / nc), (c, a, v * nb / nc)] {
            n[x][y] = val;
            n[y][x] = -val;
            n[d.neg(x)][d.neg(y)] = -val;
            n[d.neg(y)][d.neg(x)] = val;
        }
        Ok(())
    };
    for xi in 0..d.npos {
        let h: i64 = d.roots[xi].iter().sum();
        if h == 1 {
            continue;
        }
        let (a, b) = (0..d.rank)
            .find_map(|i| {
                let a = d.simple(i);
                sub(xi, a).map(|b| (a, b))
            })
            .ok_or_else(|| bad("no extraspecial pair"))?;
        set_triple(&mut n, a, b, pval(a, b) + 1)?;
        let nxi = Rational64::from_integer(norm(xi));
        for z in 0..d.npos {
            let Some(eta) = sub(xi, z) else { continue };
            if eta <= z || !d.is_positive(eta) || (z, eta) == (a, b) || (eta, z) == (a, b) {
                continue;
            }
            if n[z][eta] != 0 {
                continue;
            }
            let mz = d.neg(z);
            let me = d.neg(eta);
            let mut acc = Rational64::zero();
            if let Some(bz) = sub(b, z) {
                acc += Rational64::new(n[b][mz] * n[a][me], norm(bz));
            }
            if let Some(az) = sub(a, z) {
                acc += Rational64::new(n[mz][a] * n[b][me], norm(az));
            }
            let v = nxi * acc / Rational64::from_integer(n[a][b]);
            if !v.is_integer() || v.to_integer().abs() != pval(z, eta) + 1 {
                return Err(bad("special pair magnitude"));
            }
            set_triple(&mut n, z, eta, v.to_integer())?;
        }
    }
    Ok(n)
}
