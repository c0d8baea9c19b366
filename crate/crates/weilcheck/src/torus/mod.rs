//! Maximal tori of the quasi-split group: Galois frames, cocycles in the
//! normalizer built from Tits lifts and 2-torsion, Galois descent of the
//! blocks of Lie(𝔾) ⊗ K, and Stiefel-Whitney classes.

pub mod frame;
mod sw;

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use frame::{standard_frames, FiniteGroup, Frame, FrameSpec, KElem};
pub use sw::{
    deg_on_short_block, descend_torus_lattice, dihedral_sw, hw_torus_binary_check, spinor_norm_zassenhaus, sw_bar, sw_bar_frohlich,
    sw_bar_modular, sw_of_representation, sw_virtual, xi, BinaryCheck,
};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::localfield::{GroundField, SquareClass};
use crate::quadform::QuadSpace;
use crate::rootdata::{ChevalleyAlgebra, NormElem, OmegaElem, RMat, ReducedForm};

/// Blocks of Lie(𝔾) that can be descended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    /// the torus part with Q_𝕋
    T,
    /// all root spaces with Q_𝕍
    V,
    /// long root spaces (all of them when ℓ = 1)
    VLong,
    /// short root spaces
    VShort,
    /// Λ/ℓΛ^⊥ with Q′ (char F = ℓ)
    TPrime,
    /// Λ^⊥/Λ with Q″ (char F = ℓ)
    TDoublePrime,
    /// the whole algebra with Q_𝔾
    G,
}

/// A maximal torus given by a resolved cocycle σ ↦ n_σ in the normalizer.
#[derive(Clone, Debug)]
pub struct TorusDatum {
    pub frame: Arc<Frame>,
    pub alg: Arc<ChevalleyAlgebra>,
    /// φ(σ) = w_σ·φ₀(σ) ∈ W ⋊ Ω₀ for each group element
    pub phi: Vec<OmegaElem>,
    /// n_σ = t_σ(−1)·n(w_σ)·φ₀(σ)
    pub cocycle: Vec<NormElem>,
}

impl TorusDatum {
    pub fn field(&self) -> GroundField {
        self.frame.base
    }

    /// The split torus over the given frame.
    pub fn split(frame: Arc<Frame>, alg: Arc<ChevalleyAlgebra>) -> Self {
        let n = frame.order();
        TorusDatum { phi: vec![alg.weyl.ext_identity(); n], cocycle: vec![alg.norm_identity(); n], frame, alg }
    }

    /// n_σ·n_τ = n_{στ} for all σ, τ (Galois acts trivially on these points).
    pub fn check_cocycle(&self) -> bool {
        let g = &self.frame.group;
        (0..g.order()).all(|s| {
            (0..g.order()).all(|t| self.alg.norm_mul(&self.cocycle[s], &self.cocycle[t]) == self.cocycle[g.mul(s, t)])
        }) && self.cocycle.iter().zip(&self.phi).all(|(n, p)| n.g == *p)
    }

    /// The same check on the adjoint matrices: Ad(n_σ)Ad(n_τ) = Ad(n_{στ}).
    pub fn check_adjoint_cocycle(&self) -> bool {
        let mats = self.adjoint_matrices();
        let g = &self.frame.group;
        (0..g.order()).all(|s| (0..g.order()).all(|t| crate::rootdata::rmul(&mats[s], &mats[t]) == mats[g.mul(s, t)]))
    }

    pub fn adjoint_matrices(&self) -> Vec<RMat> {
        self.cocycle.iter().map(|n| self.alg.ad_norm_elem(n)).collect()
    }

    /// Integer matrices of φ(σ) on X₊(𝕋).
    pub fn lattice_matrices(&self) -> Vec<Vec<Vec<i64>>> {
        self.phi.iter().map(|&g| self.alg.lattice.ext_matrix(&self.alg.weyl, g)).collect()
    }

    fn character_class(&self, ch: &[i8]) -> Result<SquareClass> {
        self.frame.class_of_character(ch)
    }

    /// Class of det(φ) on X₊(𝕋).
    pub fn det_character(&self) -> Result<SquareClass> {
        let ch: Vec<i8> = self.phi.iter().map(|g| self.alg.weyl.eps(g.w)).collect();
        self.character_class(&ch)
    }

    /// Classes of (ε∘φ, ε′∘φ, ε″∘φ).
    pub fn epsilon_characters(&self) -> Result<(SquareClass, SquareClass, SquareClass)> {
        let w = &self.alg.weyl;
        let e: Vec<i8> = self.phi.iter().map(|g| w.eps(g.w)).collect();
        let e1: Vec<i8> = self.phi.iter().map(|g| w.eps1(g.w)).collect();
        let e2: Vec<i8> = self.phi.iter().map(|g| w.ext_eps2(*g)).collect();
        Ok((self.character_class(&e)?, self.character_class(&e1)?, self.character_class(&e2)?))
    }

    /// Class of ε″(φ̃(σ)φ(σ)⁻¹) for another torus over the same frame.
    pub fn relative_eps2(&self, other: &TorusDatum) -> Result<SquareClass> {
        let w = &self.alg.weyl;
        let ch: Vec<i8> = self.phi.iter().zip(&other.phi).map(|(a, b)| w.eps2(a.w) * w.eps2(b.w)).collect();
        self.character_class(&ch)
    }

    pub fn ell_invertible(&self) -> bool {
        let ell = self.alg.datum.ell as u64;
        ell == 1 || self.field().characteristic() != ell
    }

    fn root_indices(&self, block: Block) -> Vec<usize> {
        let d = &self.alg.datum;
        let t = self.alg.torus_dim();
        (0..d.nroots())
            .filter(|&b| match block {
                Block::VLong => d.ell == 1 || d.is_long(b),
                Block::VShort => d.ell != 1 && !d.is_long(b),
                _ => true,
            })
            .map(|b| t + b)
            .collect()
    }

    /// Reduced forms over F_ℓ of the Vinberg lattice (char F = ℓ only).
    pub fn reduced_forms(&self) -> Result<(ReducedForm, ReducedForm)> {
        self.alg.lattice.triple(self.alg.datum.ell).reduced_forms()
    }

    /// Gram matrix over F and the action matrices of the block.
    pub fn block_data(&self, block: Block) -> Result<(Mat, Vec<Mat>)> {
        let f = self.field();
        let ell = self.alg.datum.ell;
        match block {
            Block::TPrime | Block::TDoublePrime => {
                if ell == 1 || f.characteristic() != ell as u64 {
                    return Err(Error::WrongCharacteristic(format!("Q′, Q″ need char F = ℓ = {ell}")));
                }
                let triple = self.alg.lattice.triple(ell);
                let forms = triple.reduced_forms()?;
                let form = if block == Block::TPrime { &forms.0 } else { &forms.1 };
                let n = form.dim();
                let gram: Mat = (0..n)
                    .map(|i| (0..n).map(|j| f.int(if i == j { 2 * form.values[i] } else { form.gram[i][j] })).collect())
                    .collect();
                let mut acts = Vec::new();
                for g in self.lattice_matrices() {
                    let (a1, a2) = triple.reduced_action(&g, &forms)?;
                    let a = if block == Block::TPrime { a1 } else { a2 };
                    acts.push(linalg::from_ints(&f, &a));
                }
                Ok((gram, acts))
            }
            Block::T | Block::G if !self.ell_invertible() => {
                Err(Error::WrongCharacteristic(format!("Q_𝕋 degenerates when ℓ = {ell} = char F")))
            }
            _ => {
                let full = self.alg.q_g_gram()?;
                let idx: Vec<usize> = match block {
                    Block::T => (0..self.alg.torus_dim()).collect(),
                    Block::G => (0..self.alg.dim()).collect(),
                    b => self.root_indices(b),
                };
                let t = self.alg.torus_dim();
                let qv = self.alg.q_v_gram();
                let entry = |i: usize, j: usize| -> Rational64 {
                    if block == Block::G || (i < t && j < t) {
                        full[i][j]
                    } else if i >= t && j >= t {
                        Rational64::from_integer(qv[i - t][j - t])
                    } else {
                        Rational64::zero()
                    }
                };
                let gram = rat_block(&f, &idx, &idx, entry)?;
                let mut acts = Vec::new();
                for m in self.adjoint_matrices() {
                    // the block must be stable
                    for &i in (0..m.len()).filter(|i| !idx.contains(i)).collect::<Vec<_>>().iter() {
                        if idx.iter().any(|&j| !m[i][j].is_zero()) {
                            return Err(Error::Invalid(format!("block {block:?} is not stable under the cocycle")));
                        }
                    }
                    acts.push(rat_block(&f, &idx, &idx, |i, j| m[i][j])?);
                }
                Ok((gram, acts))
            }
        }
    }
}

fn rat_block<E: Fn(usize, usize) -> Rational64>(
    f: &GroundField,
    rows: &[usize],
    cols: &[usize],
    entry: E,
) -> Result<Mat> {
    rows.iter()
        .map(|&i| {
            cols.iter()
                .map(|&j| {
                    let r = entry(i, j);
                    f.rational(&num_rational::BigRational::new((*r.numer()).into(), (*r.denom()).into()))
                })
                .collect()
        })
        .collect()
}

/// Builds φ from generator images and solves for the 2-torsion correction
/// t_σ making σ ↦ t_σ(−1)·n(w_σ)·φ₀(σ) a cocycle. `variant` selects the
/// values of the free variables of the F₂ system (0: all free variables zero).
pub fn resolve_cocycle_variant(
    frame: Arc<Frame>,
    alg: Arc<ChevalleyAlgebra>,
    phi0: &[usize],
    w: &[usize],
    variant: u64,
) -> Result<TorusDatum> {
    let g = &frame.group;
    if phi0.len() != g.gens.len() || w.len() != g.gens.len() {
        return Err(Error::Invalid(format!(
            "frame {} has {} generators; got {} Ω₀ images and {} Weyl images",
            frame.label,
            g.gens.len(),
            phi0.len(),
            w.len()
        )));
    }
    let weyl = &alg.weyl;
    let gen_imgs: Vec<OmegaElem> = phi0.iter().zip(w).map(|(&o, &wi)| OmegaElem { w: wi, o }).collect();
    let phi = g
        .extend_hom(&gen_imgs, weyl.ext_identity(), |a, b| weyl.ext_mul(*a, *b))
        .ok_or_else(|| Error::Invalid("φ = w·φ₀ is not a homomorphism on the frame group".into()))?;
    let n = g.order();
    let t = alg.torus_dim();
    let nvars = n * t;
    if nvars > 128 {
        return Err(Error::Invalid("F₂ system too large".into()));
    }
    let var = |s: usize, k: usize| s * t + k;
    let mats: Vec<Vec<Vec<i64>>> = phi.iter().map(|&p| alg.lattice.ext_matrix(weyl, p)).collect();
    // rows: (mask, rhs)
    let mut rows: Vec<(u128, u8)> = Vec::new();
    for s in 0..n {
        for u in 0..n {
            let su = g.mul(s, u);
            let bare = |p: OmegaElem| NormElem { m: vec![0; t], g: p };
            let d = alg.norm_mul(&bare(phi[s]), &bare(phi[u])).m;
            for k in 0..t {
                let mut mask: u128 = 0;
                mask ^= 1 << var(s, k);
                for j in 0..t {
                    if mats[s][k][j].rem_euclid(2) == 1 {
                        mask ^= 1 << var(u, j);
                    }
                }
                mask ^= 1 << var(su, k);
                rows.push((mask, d[k]));
            }
        }
    }
    let sol = solve_f2(&mut rows, nvars, variant).ok_or_else(|| {
        Error::Obstructed(format!(
            "no 2-torsion correction makes the Tits lift of φ a cocycle (frame {}, Weyl images {:?})",
            frame.label, w
        ))
    })?;
    let cocycle: Vec<NormElem> = (0..n)
        .map(|s| NormElem { m: (0..t).map(|k| ((sol >> var(s, k)) & 1) as u8).collect(), g: phi[s] })
        .collect();
    let td = TorusDatum { frame, alg, phi, cocycle };
    if !td.check_cocycle() {
        return Err(Error::Obstructed("resolved system does not satisfy the cocycle condition".into()));
    }
    Ok(td)
}

pub fn resolve_cocycle(frame: Arc<Frame>, alg: Arc<ChevalleyAlgebra>, phi0: &[usize], w: &[usize]) -> Result<TorusDatum> {
    resolve_cocycle_variant(frame, alg, phi0, w, 0)
}

/// Number of free variables of the F₂ system (log₂ of the number of resolutions).
pub fn resolution_freedom(td: &TorusDatum) -> usize {
    let g = &td.frame.group;
    let n = g.order();
    let t = td.alg.torus_dim();
    let mats = td.lattice_matrices();
    let mut rows: Vec<(u128, u8)> = Vec::new();
    for s in 0..n {
        for u in 0..n {
            for k in 0..t {
                let mut mask: u128 = 1 << (s * t + k);
                for j in 0..t {
                    if mats[s][k][j].rem_euclid(2) == 1 {
                        mask ^= 1 << (u * t + j);
                    }
                }
                mask ^= 1 << (g.mul(s, u) * t + k);
                rows.push((mask, 0));
            }
        }
    }
    let rank = f2_rank(&mut rows, n * t);
    n * t - rank
}

fn f2_rank(rows: &mut [(u128, u8)], nvars: usize) -> usize {
    let mut rank = 0;
    for c in 0..nvars {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].0 >> c & 1 == 1) else { continue };
        rows.swap(rank, p);
        let piv = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r.0 >> c & 1 == 1 {
                r.0 ^= piv.0;
                r.1 ^= piv.1;
            }
        }
        rank += 1;
    }
    rank
}

/// Gauss-Jordan over F₂; free variables take the bits of `variant` in order.
fn solve_f2(rows: &mut Vec<(u128, u8)>, nvars: usize, variant: u64) -> Option<u128> {
    let rank = f2_rank(rows, nvars);
    if rows[rank..].iter().any(|r| r.0 == 0 && r.1 == 1) {
        return None;
    }
    let pivots: Vec<usize> = rows[..rank].iter().map(|r| r.0.trailing_zeros() as usize).collect();
    let mut sol: u128 = 0;
    let mut k = 0;
    for c in 0..nvars {
        if !pivots.contains(&c) {
            if variant >> k & 1 == 1 {
                sol |= 1 << c;
            }
            k += 1;
        }
    }
    for (i, &c) in pivots.iter().enumerate() {
        let r = rows[i];
        let others = (r.0 & !(1u128 << c)) & sol;
        let bit = (others.count_ones() as u8 & 1) ^ r.1;
        if bit == 1 {
            sol |= 1 << c;
        }
    }
    Some(sol)
}

/// F-rational points of (V ⊗ K, σ* = A_σ ∘ (1 ⊗ σ)) with the restricted form.
///
/// Vectors of V ⊗ K are n×d coordinate matrices U; σ*(U) = A_σ·U·M_σᵀ.
/// The fixed space is spanned by the trace images of the unit matrices.
pub fn descend(frame: &Frame, gram: &Mat, acts: &[Mat]) -> Result<QuadSpace> {
    let f = frame.base;
    let n = gram.len();
    let d = frame.degree();
    if n == 0 {
        return QuadSpace::new(f, vec![]);
    }
    let mut traces: Mat = Vec::with_capacity(n * d);
    for i in 0..n {
        for j in 0..d {
            let mut v = vec![f.zero(); n * d];
            for (s, a) in acts.iter().enumerate() {
                let m = &frame.action[s];
                for r in 0..n {
                    if a[r][i].is_exact_zero() {
                        continue;
                    }
                    for k in 0..d {
                        if !m[k][j].is_exact_zero() {
                            v[r * d + k] = &v[r * d + k] + &(&a[r][i] * &m[k][j]);
                        }
                    }
                }
            }
            traces.push(v);
        }
    }
    let basis = linalg::row_space_basis(&traces);
    if basis.len() != n {
        return Err(Error::PrecisionLoss(format!(
            "fixed space has dimension {} instead of {n} at precision {}",
            basis.len(),
            f.precision
        )));
    }
    let vecs: Vec<Vec<KElem>> = basis.iter().map(|row| (0..n).map(|r| row[r * d..(r + 1) * d].to_vec()).collect()).collect();
    let nz: Vec<(usize, usize)> =
        (0..n).flat_map(|r| (0..n).map(move |s| (r, s))).filter(|&(r, s)| !gram[r][s].is_exact_zero()).collect();
    let mut out = linalg::zeros(&f, n, n);
    for a in 0..n {
        for b in a..n {
            let mut acc = f.zero();
            for &(r, s) in &nz {
                let prod = frame.mul_coord0(&vecs[a][r], &vecs[b][s]);
                acc = &acc + &(&gram[r][s] * &prod);
            }
            out[a][b] = acc.clone();
            out[b][a] = acc;
        }
    }
    let q = QuadSpace::new(f, out)?;
    let det = linalg::det(&f, &q.gram)?;
    if det.is_zero() {
        return Err(if det.is_exact_zero() {
            Error::DegenerateForm
        } else {
            Error::PrecisionLoss("descended form is degenerate to working precision".into())
        });
    }
    Ok(q)
}

/// The descended block with its quadratic form.
pub fn descend_quadspace(td: &TorusDatum, block: Block) -> Result<QuadSpace> {
    let (gram, acts) = td.block_data(block)?;
    descend(&td.frame, &gram, &acts)
}

/// The untwisted block over F (same Gram, trivial cocycle).
pub fn split_quadspace(td: &TorusDatum, block: Block) -> Result<QuadSpace> {
    let (gram, _) = td.block_data(block)?;
    QuadSpace::new(td.field(), gram)
}

/// Weyl element indices from 1-based simple-reflection words.
pub fn weyl_from_words(alg: &ChevalleyAlgebra, words: &[Vec<usize>]) -> Result<Vec<usize>> {
    words
        .iter()
        .map(|word| {
            if word.iter().any(|&i| i == 0 || i > alg.rank()) {
                return Err(Error::Invalid(format!("simple reflection indices are 1..={}", alg.rank())));
            }
            let w: Vec<usize> = word.iter().map(|&i| i - 1).collect();
            alg.weyl.from_word(&w)
        })
        .collect()
}

/// Ω₀ indices from 1-based permutations of the simple roots (empty = identity).
pub fn omega_from_perms(alg: &ChevalleyAlgebra, perms: &[Vec<usize>], ngens: usize) -> Result<Vec<usize>> {
    if perms.is_empty() {
        return Ok(vec![alg.weyl.omega_identity(); ngens]);
    }
    perms
        .iter()
        .map(|p| {
            if p.is_empty() {
                return Ok(alg.weyl.omega_identity());
            }
            let z: Vec<usize> = p.iter().map(|&i| i.wrapping_sub(1)).collect();
            alg.weyl
                .omega0
                .iter()
                .position(|x| *x == z)
                .ok_or_else(|| Error::Invalid(format!("{p:?} is not a diagram automorphism")))
        })
        .collect()
}

/// All injective homomorphisms G → W (φ₀ trivial), one per W-conjugacy
/// class, as generator images. Ordered deterministically.
pub fn faithful_weyl_classes(frame: &Frame, alg: &ChevalleyAlgebra) -> Vec<Vec<usize>> {
    let g = &frame.group;
    let weyl = &alg.weyl;
    let k = g.gens.len();
    let nw = weyl.order();
    let mut seen: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
    let mut out = Vec::new();
    if k == 0 {
        return vec![vec![]];
    }
    let mut idx = vec![0usize; k];
    loop {
        let imgs = idx.clone();
        if let Some(h) = g.extend_hom(&imgs, weyl.identity(), |a, b| weyl.mul(*a, *b)) {
            let injective = (1..g.order()).all(|s| h[s] != weyl.identity());
            if injective {
                let canon = (0..nw)
                    .map(|c| {
                        let ci = weyl.inv(c);
                        imgs.iter().map(|&x| weyl.mul(weyl.mul(c, x), ci)).collect::<Vec<_>>()
                    })
                    .min()
                    .unwrap();
                if seen.insert(canon.clone()) {
                    out.push(canon);
                }
            }
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == k {
                out.sort();
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < nw {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::hw_rel;
    use crate::rootdata::{CartanType, PinnedRootDatum};

    fn alg(t: &str) -> Arc<ChevalleyAlgebra> {
        let d = PinnedRootDatum::build(t.parse::<CartanType>().unwrap()).unwrap();
        Arc::new(ChevalleyAlgebra::build(&d).unwrap())
    }

    fn p5() -> GroundField {
        GroundField::padic(5).unwrap()
    }

    #[test]
    fn identity_cocycle_gives_hyperbolic_v() {
        let a = alg("B2");
        let fr = Arc::new(Frame::trivial(p5()));
        let td = resolve_cocycle(fr, a.clone(), &[], &[]).unwrap();
        assert!(td.cocycle.iter().all(|n| n.m.iter().all(|&x| x == 0)));
        let qv = descend_quadspace(&td, Block::V).unwrap();
        assert!(qv.wall().unwrap().is_zero());
    }

    #[test]
    fn a1_norm_one_torus() {
        let a = alg("A1");
        for d in ["2", "5", "10"] {
            let f = p5();
            let fr = Arc::new(Frame::quadratic(f, f.parse_class(d).unwrap()).unwrap());
            let td = resolve_cocycle(fr, a.clone(), &[0], &[1]).unwrap();
            assert!(td.check_adjoint_cocycle());
            assert_eq!(td.det_character().unwrap(), f.parse_class(d).unwrap());
            let qv = descend_quadspace(&td, Block::V).unwrap();
            assert_eq!(qv.dim(), 2);
            // Q_V is the norm form of F(√d) (the corrected lift swaps e, f with sign +1)
            let ne = QuadSpace::norm_form(&crate::localfield::QuadExt::new(f, f.parse_class(d).unwrap()).unwrap());
            assert!(hw_rel(&qv, &ne).unwrap().is_zero(), "{d}");
        }
    }

    #[test]
    fn descended_dimensions_match() {
        let f = GroundField::padic(7).unwrap();
        for t in ["A2", "B2", "G2"] {
            let a = alg(t);
            for fr in standard_frames(f) {
                let fr = Arc::new(fr);
                for w in faithful_weyl_classes(&fr, &a).into_iter().take(2) {
                    let phi0 = vec![a.weyl.omega_identity(); w.len()];
                    let td = match resolve_cocycle(fr.clone(), a.clone(), &phi0, &w) {
                        Ok(td) => td,
                        Err(Error::Obstructed(_)) => continue,
                        Err(e) => panic!("{e}"),
                    };
                    for b in [Block::T, Block::V, Block::G] {
                        let q = descend_quadspace(&td, b).unwrap();
                        let (gram, _) = td.block_data(b).unwrap();
                        assert_eq!(q.dim(), gram.len());
                    }
                }
            }
        }
    }

    #[test]
    fn faithful_classes_counts() {
        let f = p5();
        let a = alg("A1");
        let quad = Frame::quadratic(f, f.parse_class("2").unwrap()).unwrap();
        assert_eq!(faithful_weyl_classes(&quad, &a).len(), 1);
        let s3 = Frame::tame(f, 2, 3).unwrap();
        assert_eq!(faithful_weyl_classes(&s3, &alg("A2")).len(), 1);
        assert_eq!(faithful_weyl_classes(&s3, &a).len(), 0);
        // G₂: reflections fall in two classes, plus the central element
        assert_eq!(faithful_weyl_classes(&quad, &alg("G2")).len(), 3);
    }

    #[test]
    fn f2_solver_respects_variant() {
        let mut rows = vec![(0b011u128, 1u8), (0b110u128, 0u8)];
        let s0 = solve_f2(&mut rows.clone(), 3, 0).unwrap();
        let s1 = solve_f2(&mut rows, 3, 1).unwrap();
        for s in [s0, s1] {
            assert_eq!((s & 1) ^ (s >> 1 & 1), 1);
            assert_eq!((s >> 1 & 1) ^ (s >> 2 & 1), 0);
        }
        assert_ne!(s0, s1);
        let mut bad = vec![(0b1u128, 1u8), (0b1u128, 0u8)];
        assert!(solve_f2(&mut bad, 1, 0).is_none());
    }
}
