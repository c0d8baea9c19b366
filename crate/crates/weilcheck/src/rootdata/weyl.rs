//! Weyl groups as explicit integer matrices, diagram automorphisms, and
//! the extended group Ω = W ⋊ Ω₀.

use std::collections::{HashMap, VecDeque};

use num_rational::Rational64;

use super::PinnedRootDatum;
use crate::error::{Error, Result};

type IntMat = Vec<Vec<i64>>;

fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
}

fn identity(n: usize) -> IntMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct WeylElem {
    /// action on simple-coroot coordinates
    pub coweight_mat: IntMat,
    /// action on simple-root coordinates
    pub root_mat: IntMat,
    /// a reduced word (shortlex-first found by breadth-first search)
    pub word: Vec<usize>,
    pub root_perm: Vec<usize>,
}

/// W together with the diagram automorphism group Ω₀ (as permutations of
/// the simple roots).
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub rank: usize,
    pub elements: Vec<WeylElem>,
    index: HashMap<IntMat, usize>,
    pub omega0: Vec<Vec<usize>>,
    short_letter: Vec<bool>,
}

/// An element w·ω of Ω = W ⋊ Ω₀.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaElem {
    pub w: usize,
    pub o: usize,
}

pub const MAX_ENUMERATED_RANK: usize = 4;

impl WeylGroup {
    pub fn build(d: &PinnedRootDatum) -> Result<Self> {
        let n = d.rank;
        if n > MAX_ENUMERATED_RANK {
            return Err(Error::UnsupportedType(format!("{}: Weyl group enumeration above rank 4", d.ctype)));
        }
        let gens_cow: Vec<IntMat> = (0..n)
            .map(|i| {
                let mut m = identity(n);
                // (s_i x)_i = x_i − Σ_j A_ji x_j
                for j in 0..n {
                    m[i][j] -= d.cartan[j][i];
                }
                m
            })
            .collect();
        let gens_root: Vec<IntMat> = (0..n)
            .map(|i| {
                let mut m = identity(n);
                // s_i(β)_i = β_i − Σ_k β_k A_ik
                for k in 0..n {
                    m[i][k] -= d.cartan[i][k];
                }
                m
            })
            .collect();
        let mut elements = vec![WeylElem { coweight_mat: identity(n), root_mat: identity(n), word: vec![], root_perm: vec![] }];
        let mut index = HashMap::new();
        index.insert(identity(n), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for i in 0..n {
                let cm = mat_mul(&elements[k].coweight_mat, &gens_cow[i]);
                if index.contains_key(&cm) {
                    continue;
                }
                let rm = mat_mul(&elements[k].root_mat, &gens_root[i]);
                let mut word = elements[k].word.clone();
                word.push(i);
                index.insert(cm.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(WeylElem { coweight_mat: cm, root_mat: rm, word, root_perm: vec![] });
            }
        }
        for e in elements.iter_mut() {
            e.root_perm = (0..d.nroots())
                .map(|b| {
                    let img: Vec<i64> =
                        (0..n).map(|i| (0..n).map(|j| e.root_mat[i][j] * d.roots[b][j]).sum()).collect();
                    d.root_index(&img).expect("W permutes roots")
                })
                .collect();
        }
        let omega0 = diagram_automorphisms(&d.gram);
        let short_letter = (0..n).map(|i| !d.simple_is_long(i)).collect();
        Ok(WeylGroup { rank: n, elements, index, omega0, short_letter })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn find(&self, coweight_mat: &IntMat) -> Option<usize> {
        self.index.get(coweight_mat).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let m = mat_mul(&self.elements[a].coweight_mat, &self.elements[b].coweight_mat);
        self.index[&m]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.mul(a, b) == 0).expect("finite group")
    }

    pub fn from_word(&self, word: &[usize]) -> Result<usize> {
        let mut m = identity(self.rank);
        for &i in word {
            if i >= self.rank {
                return Err(Error::Invalid(format!("generator {i} out of range")));
            }
            m = mat_mul(&m, &self.elements[self.simple_reflection(i)].coweight_mat);
        }
        Ok(self.index[&m])
    }

    pub fn simple_reflection(&self, i: usize) -> usize {
        self.elements.iter().position(|e| e.word == [i]).expect("generator")
    }

    pub fn length(&self, a: usize) -> usize {
        self.elements[a].word.len()
    }

    /// The reflection s_β for a root index β.
    pub fn reflection(&self, d: &PinnedRootDatum, beta: usize) -> usize {
        let n = self.rank;
        let cor = d.coroot(beta);
        let mut m = identity(n);
        // x ↦ x − ⟨β, x⟩ β^∨
        for k in 0..n {
            for j in 0..n {
                let c: i64 = (0..n).map(|i| d.roots[beta][i] * d.cartan[j][i]).sum();
                m[k][j] -= cor[k] * c;
            }
        }
        self.index[&m]
    }

    pub fn apply_coweight(&self, a: usize, x: &[Rational64]) -> Vec<Rational64> {
        let m = &self.elements[a].coweight_mat;
        (0..self.rank).map(|i| (0..self.rank).map(|j| x[j] * m[i][j]).sum()).collect()
    }

    pub fn apply_coweight_int(&self, a: usize, x: &[i64]) -> Vec<i64> {
        let m = &self.elements[a].coweight_mat;
        (0..self.rank).map(|i| (0..self.rank).map(|j| x[j] * m[i][j]).sum()).collect()
    }

    /// ε(w) = det(w).
    pub fn eps(&self, a: usize) -> i8 {
        if self.length(a) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// ε″: −1 on reflections in short roots, +1 on long ones.
    pub fn eps2(&self, a: usize) -> i8 {
        let k = self.elements[a].word.iter().filter(|&&i| self.short_letter[i]).count();
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// ε′ = ε·ε″.
    pub fn eps1(&self, a: usize) -> i8 {
        self.eps(a) * self.eps2(a)
    }

    // ----- Ω₀ and Ω -----

    pub fn omega_identity(&self) -> usize {
        self.omega0.iter().position(|p| p.iter().enumerate().all(|(i, &j)| i == j)).expect("identity")
    }

    pub fn omega_mul(&self, a: usize, b: usize) -> usize {
        let (p, q) = (&self.omega0[a], &self.omega0[b]);
        let c: Vec<usize> = (0..self.rank).map(|i| p[q[i]]).collect();
        self.omega0.iter().position(|x| *x == c).expect("closed")
    }

    pub fn omega_inv(&self, a: usize) -> usize {
        let p = &self.omega0[a];
        let mut c = vec![0; self.rank];
        for (i, &j) in p.iter().enumerate() {
            c[j] = i;
        }
        self.omega0.iter().position(|x| *x == c).expect("closed")
    }

    /// ω w ω⁻¹.
    pub fn conj_by_omega(&self, o: usize, w: usize) -> usize {
        let p = &self.omega0[o];
        let word: Vec<usize> = self.elements[w].word.iter().map(|&i| p[i]).collect();
        self.from_word(&word).expect("valid word")
    }

    pub fn ext_mul(&self, a: OmegaElem, b: OmegaElem) -> OmegaElem {
        OmegaElem { w: self.mul(a.w, self.conj_by_omega(a.o, b.w)), o: self.omega_mul(a.o, b.o) }
    }

    pub fn ext_identity(&self) -> OmegaElem {
        OmegaElem { w: 0, o: self.omega_identity() }
    }

    /// Permutation of root indices induced by ω.
    pub fn omega_root_perm(&self, d: &PinnedRootDatum, o: usize) -> Vec<usize> {
        let p = &self.omega0[o];
        (0..d.nroots())
            .map(|b| {
                let mut img = vec![0; self.rank];
                for i in 0..self.rank {
                    img[p[i]] = d.roots[b][i];
                }
                d.root_index(&img).expect("Ω₀ permutes roots")
            })
            .collect()
    }

    pub fn ext_root_perm(&self, d: &PinnedRootDatum, a: OmegaElem) -> Vec<usize> {
        let op = self.omega_root_perm(d, a.o);
        let wp = &self.elements[a.w].root_perm;
        op.iter().map(|&b| wp[b]).collect()
    }

    /// Action of w·ω on coroot coordinates (rational, so coweights are allowed).
    pub fn ext_apply(&self, a: OmegaElem, x: &[Rational64]) -> Vec<Rational64> {
        let p = &self.omega0[a.o];
        let mut y = vec![Rational64::from_integer(0); self.rank];
        for i in 0..self.rank {
            y[p[i]] = x[i];
        }
        self.apply_coweight(a.w, &y)
    }

    pub fn ext_eps2(&self, a: OmegaElem) -> i8 {
        self.eps2(a.w)
    }
}

fn diagram_automorphisms(g: &[Vec<i64>]) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut out = Vec::new();
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(g: &[Vec<i64>], perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = g.len();
        let k = perm.len();
        if k == n {
            out.push(perm.clone());
            return;
        }
        for c in 0..n {
            if used[c] {
                continue;
            }
            if (0..k).all(|j| g[c][perm[j]] == g[k][j]) && g[c][c] == g[k][k] {
                used[c] = true;
                perm.push(c);
                rec(g, perm, used, out);
                perm.pop();
                used[c] = false;
            }
        }
    }
    rec(g, &mut perm, &mut used, &mut out);
    out
}
