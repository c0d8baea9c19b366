//! Pinned root data over the integers.
//!
//! Roots are integer vectors in the simple-root basis; cocharacters of the
//! simply connected torus are integer vectors in the simple-coroot basis.
//! Squared root lengths are 2 for short roots and 2ℓ for long ones.

mod chevalley;
mod lattice;
mod weyl;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use chevalley::{rmul, ChevalleyAlgebra, IMat, NormElem, RMat};
pub use lattice::{smith_diagonal, LatticeTriple, ReducedForm, VinbergLattice};
pub use weyl::{OmegaElem, WeylGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    E(usize),
    F4,
    G2,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B(n) => write!(f, "B{n}"),
            CartanType::C(n) => write!(f, "C{n}"),
            CartanType::D(n) => write!(f, "D{n}"),
            CartanType::E(n) => write!(f, "E{n}"),
            CartanType::F4 => write!(f, "F4"),
            CartanType::G2 => write!(f, "G2"),
        }
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnsupportedType(s.to_string());
        let s = s.trim();
        let (head, tail) = s.split_at(1.min(s.len()));
        let n: usize = tail.parse().map_err(|_| bad())?;
        let t = match (head, n) {
            ("A", n) if n >= 1 => CartanType::A(n),
            ("B", n) if n >= 2 => CartanType::B(n),
            ("C", n) if n >= 2 => CartanType::C(n),
            ("D", n) if n >= 4 => CartanType::D(n),
            ("E", n) if (6..=8).contains(&n) => CartanType::E(n),
            ("F", 4) => CartanType::F4,
            ("G", 2) => CartanType::G2,
            _ => return Err(bad()),
        };
        Ok(t)
    }
}

impl Serialize for CartanType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CartanType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl CartanType {
    pub fn rank(&self) -> usize {
        match *self {
            CartanType::A(n) | CartanType::B(n) | CartanType::C(n) | CartanType::D(n) | CartanType::E(n) => n,
            CartanType::F4 => 4,
            CartanType::G2 => 2,
        }
    }

    pub fn ell(&self) -> i64 {
        match self {
            CartanType::B(_) | CartanType::C(_) | CartanType::F4 => 2,
            CartanType::G2 => 3,
            _ => 1,
        }
    }

    /// Inner products (α_i, α_j) of simple roots.
    fn root_gram(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut g = vec![vec![0i64; n]; n];
        let link = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
            g[i][j] = v;
            g[j][i] = v;
        };
        match *self {
            CartanType::A(_) => {
                for i in 0..n {
                    g[i][i] = 2;
                }
                for i in 0..n.saturating_sub(1) {
                    link(&mut g, i, i + 1, -1);
                }
            }
            CartanType::B(_) => {
                for i in 0..n {
                    g[i][i] = 4;
                }
                g[n - 1][n - 1] = 2;
                for i in 0..n - 1 {
                    link(&mut g, i, i + 1, -2);
                }
            }
            CartanType::C(_) => {
                for i in 0..n {
                    g[i][i] = 2;
                }
                g[n - 1][n - 1] = 4;
                for i in 0..n - 2 {
                    link(&mut g, i, i + 1, -1);
                }
                link(&mut g, n - 2, n - 1, -2);
            }
            CartanType::D(_) => {
                for i in 0..n {
                    g[i][i] = 2;
                }
                for i in 0..n - 2 {
                    link(&mut g, i, i + 1, -1);
                }
                link(&mut g, n - 3, n - 1, -1);
            }
            CartanType::E(_) => {
                // 1-3-4-5-6-..., with 2 attached to 4
                for i in 0..n {
                    g[i][i] = 2;
                }
                link(&mut g, 0, 2, -1);
                link(&mut g, 1, 3, -1);
                for i in 2..n - 1 {
                    link(&mut g, i, i + 1, -1);
                }
            }
            CartanType::F4 => {
                g[0][0] = 4;
                g[1][1] = 4;
                g[2][2] = 2;
                g[3][3] = 2;
                link(&mut g, 0, 1, -2);
                link(&mut g, 1, 2, -2);
                link(&mut g, 2, 3, -1);
            }
            CartanType::G2 => {
                g[0][0] = 2;
                g[1][1] = 6;
                link(&mut g, 0, 1, -3);
            }
        }
        g
    }
}

/// Which pieces of a root datum to perturb in negative-control runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Mutation {
    /// Flip the sign of one structure constant without propagating it.
    pub flip_structure_constant: bool,
}

#[derive(Clone, Debug)]
pub struct PinnedRootDatum {
    pub ctype: CartanType,
    pub rank: usize,
    pub ell: i64,
    /// (α_i, α_j)
    pub gram: Vec<Vec<i64>>,
    /// A_ij = ⟨α_j, α_i^∨⟩ = 2(α_i, α_j)/(α_i, α_i)
    pub cartan: Vec<Vec<i64>>,
    /// positive roots first (by height), then their negatives in the same order
    pub roots: Vec<Vec<i64>>,
    pub npos: usize,
    index: HashMap<Vec<i64>, usize>,
    pub mutation: Mutation,
}

impl PinnedRootDatum {
    pub fn build(ctype: CartanType) -> Result<Self> {
        Self::build_mutated(ctype, Mutation::default())
    }

    pub fn build_mutated(ctype: CartanType, mutation: Mutation) -> Result<Self> {
        let rank = ctype.rank();
        let gram = ctype.root_gram();
        let cartan: Vec<Vec<i64>> =
            (0..rank).map(|i| (0..rank).map(|j| 2 * gram[i][j] / gram[i][i]).collect()).collect();
        let mut pos: Vec<Vec<i64>> = (0..rank).map(|i| unit(rank, i)).collect();
        let mut k = 0;
        // standard string algorithm: β + α_i is a root iff q > 0
        while k < pos.len() {
            let beta = pos[k].clone();
            for i in 0..rank {
                let mut p = 0;
                let mut v = beta.clone();
                loop {
                    v[i] -= 1;
                    if pos.contains(&v) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..rank).map(|j| beta[j] * cartan[i][j]).sum();
                let q = p - pairing;
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !pos.contains(&up) {
                        pos.push(up);
                    }
                }
            }
            k += 1;
        }
        pos.sort_by_key(|v| (v.iter().sum::<i64>(), v.iter().rev().map(|x| -x).collect::<Vec<_>>()));
        let npos = pos.len();
        let mut roots = pos.clone();
        roots.extend(pos.iter().map(|v| v.iter().map(|x| -x).collect::<Vec<_>>()));
        let index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        Ok(PinnedRootDatum { ctype, rank, ell: ctype.ell(), gram, cartan, roots, npos, index, mutation })
    }

    pub fn nroots(&self) -> usize {
        self.roots.len()
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn neg(&self, i: usize) -> usize {
        if i < self.npos {
            i + self.npos
        } else {
            i - self.npos
        }
    }

    pub fn simple(&self, i: usize) -> usize {
        self.root_index(&unit(self.rank, i)).expect("simple root")
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.npos
    }

    /// (a, b) for vectors in the simple-root basis.
    pub fn ip(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += a[i] * self.gram[i][j] * b[j];
            }
        }
        s
    }

    pub fn norm(&self, i: usize) -> i64 {
        let r = &self.roots[i];
        self.ip(r, r)
    }

    /// Long roots exist only when ℓ > 1.
    pub fn is_long(&self, i: usize) -> bool {
        self.ell > 1 && self.norm(i) == 2 * self.ell
    }

    pub fn simple_is_long(&self, i: usize) -> bool {
        self.ell > 1 && self.gram[i][i] == 2 * self.ell
    }

    /// ℓ(α): ℓ for long roots, 1 for short roots.
    pub fn ell_root(&self, i: usize) -> i64 {
        if self.is_long(i) {
            self.ell
        } else {
            1
        }
    }

    /// ℓ(α^∨) = Q₁(α^∨): 1 for long roots, ℓ for short roots.
    pub fn ell_coroot(&self, i: usize) -> i64 {
        if self.is_long(i) || self.ell == 1 {
            1
        } else {
            self.ell
        }
    }

    /// α^∨ in the simple-coroot basis.
    pub fn coroot(&self, i: usize) -> Vec<i64> {
        let n = self.norm(i);
        (0..self.rank).map(|j| self.roots[i][j] * self.gram[j][j] / n).collect()
    }

    /// ⟨β, x⟩ for a root index β and x in simple-coroot coordinates.
    pub fn pairing(&self, beta: &[i64], x: &[Rational64]) -> Rational64 {
        let mut s = Rational64::from_integer(0);
        for j in 0..self.rank {
            let c: i64 = (0..self.rank).map(|i| beta[i] * self.cartan[j][i]).sum();
            s += x[j] * c;
        }
        s
    }

    pub fn pairing_int(&self, beta: &[i64], x: &[i64]) -> i64 {
        (0..self.rank).map(|j| x[j] * (0..self.rank).map(|i| beta[i] * self.cartan[j][i]).sum::<i64>()).sum()
    }

    /// ⟨β, α_i^∨⟩
    pub fn root_coroot(&self, beta: &[i64], i: usize) -> i64 {
        (0..self.rank).map(|k| beta[k] * self.cartan[i][k]).sum()
    }

    /// s_i(β) in root coordinates.
    pub fn reflect_root(&self, i: usize, beta: &[i64]) -> Vec<i64> {
        let c = self.root_coroot(beta, i);
        let mut v = beta.to_vec();
        v[i] -= c;
        v
    }

    /// s_i(x) = x − ⟨α_i, x⟩α_i^∨ in coroot coordinates.
    pub fn reflect_coweight(&self, i: usize, x: &[Rational64]) -> Vec<Rational64> {
        let c = self.pairing(&unit(self.rank, i), x);
        let mut v = x.to_vec();
        v[i] -= c;
        v
    }

    /// B₁(α_i^∨, α_j^∨) = 4ℓ(α_i, α_j)/(N_i N_j).
    pub fn b1(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        (0..n)
            .map(|i| (0..n).map(|j| 4 * self.ell * self.gram[i][j] / (self.gram[i][i] * self.gram[j][j])).collect())
            .collect()
    }

    /// Q₁(x) for x in simple-coroot coordinates.
    pub fn q1(&self, x: &[Rational64]) -> Rational64 {
        let b = self.b1();
        let mut s = Rational64::from_integer(0);
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += x[i] * x[j] * b[i][j];
            }
        }
        s / 2
    }

    /// Fundamental coweights ϖ_j^∨ in coroot coordinates: (Aᵀ)⁻¹ e_j.
    pub fn fundamental_coweights(&self) -> Vec<Vec<Rational64>> {
        let n = self.rank;
        let at: Vec<Vec<Rational64>> =
            (0..n).map(|i| (0..n).map(|j| Rational64::from_integer(self.cartan[j][i])).collect()).collect();
        let inv = rat_inverse(&at).expect("Cartan matrix is invertible");
        (0..n).map(|j| (0..n).map(|i| inv[i][j]).collect()).collect()
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub(crate) fn rat_inverse(a: &[Vec<Rational64>]) -> Option<Vec<Vec<Rational64>>> {
    let n = a.len();
    let zero = Rational64::from_integer(0);
    let mut m: Vec<Vec<Rational64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| Rational64::from_integer(i64::from(i == j))));
            r
        })
        .collect();
    for k in 0..n {
        let piv = (k..n).find(|&i| m[i][k] != zero)?;
        m.swap(k, piv);
        let p = m[k][k];
        for x in m[k].iter_mut() {
            *x /= p;
        }
        for i in 0..n {
            if i != k && m[i][k] != zero {
                let f = m[i][k];
                let row = m[k].clone();
                for (x, y) in m[i].iter_mut().zip(&row) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn root_counts() {
        for (t, n) in [("A1", 2), ("A2", 6), ("A3", 12), ("B2", 8), ("C2", 8), ("B3", 18), ("C3", 18), ("D4", 24), ("G2", 12), ("F4", 48), ("E6", 72)] {
            let d = PinnedRootDatum::build(t.parse().unwrap()).unwrap();
            assert_eq!(d.nroots(), n, "{t}");
        }
    }

    #[test]
    fn long_and_short() {
        let c2 = PinnedRootDatum::build(CartanType::C(2)).unwrap();
        let long = (0..8).filter(|&i| c2.is_long(i)).count();
        assert_eq!((long, c2.ell), (4, 2));
        let a1 = PinnedRootDatum::build(CartanType::A(1)).unwrap();
        assert_eq!((a1.npos, a1.ell), (1, 1));
        let g2 = PinnedRootDatum::build(CartanType::G2).unwrap();
        assert_eq!(g2.b1(), vec![vec![6, -3], vec![-3, 2]]);
    }

    #[test]
    fn q1_values_on_coroots() {
        for t in ["A2", "B2", "C2", "B3", "C3", "G2", "D4", "F4"] {
            let d = PinnedRootDatum::build(t.parse().unwrap()).unwrap();
            for i in 0..d.nroots() {
                let c: Vec<Rational64> = d.coroot(i).into_iter().map(r).collect();
                assert_eq!(d.q1(&c), r(d.ell_coroot(i)), "{t} root {i}");
                assert_eq!(d.ell_coroot(i) * d.ell_root(i), d.ell);
            }
            assert_eq!(d.q1(&vec![r(0); d.rank]), r(0));
        }
        let g2 = PinnedRootDatum::build(CartanType::G2).unwrap();
        assert_eq!(g2.q1(&[r(0), r(1)]), r(1));
        assert_eq!(g2.q1(&[r(1), r(0)]), r(3));
    }

    #[test]
    fn coweights_are_dual() {
        for t in ["A3", "C3", "G2", "D4"] {
            let d = PinnedRootDatum::build(t.parse().unwrap()).unwrap();
            let w = d.fundamental_coweights();
            for i in 0..d.rank {
                for (j, wj) in w.iter().enumerate() {
                    assert_eq!(d.pairing(&unit(d.rank, i), wj), r(i64::from(i == j)));
                }
            }
        }
    }

    #[test]
    fn parse_types() {
        assert_eq!("G2".parse::<CartanType>().unwrap(), CartanType::G2);
        assert!("B1".parse::<CartanType>().is_err());
        assert!("X3".parse::<CartanType>().is_err());
    }
}
