//! Finite Galois frames K/F: an F-basis of K with b₀ = 1, structure
//! constants, the Galois group as an abstract finite group, and its action
//! as F-matrices.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::localfield::{FieldElem, FieldKind, GroundField, SquareClass};

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub table: Vec<Vec<usize>>,
    pub gens: Vec<usize>,
    pub labels: Vec<String>,
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        FiniteGroup { table: vec![vec![0]], gens: vec![], labels: vec!["1".into()] }
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let gens = if n > 1 { vec![1] } else { vec![] };
        FiniteGroup { table, gens, labels: (0..n).map(|a| format!("s^{a}")).collect() }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order()).find(|&b| self.table[a][b] == 0).expect("group element has an inverse")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Direct product; element (a, b) has index a + |G₁|·b.
    pub fn product(g1: &FiniteGroup, g2: &FiniteGroup) -> Self {
        let (n1, n2) = (g1.order(), g2.order());
        let idx = |a: usize, b: usize| a + n1 * b;
        let mut table = vec![vec![0; n1 * n2]; n1 * n2];
        for a in 0..n1 {
            for b in 0..n2 {
                for c in 0..n1 {
                    for d in 0..n2 {
                        table[idx(a, b)][idx(c, d)] = idx(g1.mul(a, c), g2.mul(b, d));
                    }
                }
            }
        }
        let mut gens: Vec<usize> = g1.gens.iter().map(|&a| idx(a, 0)).collect();
        gens.extend(g2.gens.iter().map(|&b| idx(0, b)));
        let mut labels = vec![String::new(); n1 * n2];
        for a in 0..n1 {
            for b in 0..n2 {
                labels[idx(a, b)] = format!("({},{})", g1.labels[a], g2.labels[b]);
            }
        }
        FiniteGroup { table, gens, labels }
    }

    /// For every element, a word in the generators (indices into `gens`)
    /// found by breadth-first search.
    pub fn words(&self) -> Vec<Vec<usize>> {
        let mut words: Vec<Option<Vec<usize>>> = vec![None; self.order()];
        words[0] = Some(vec![]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (k, &s) in self.gens.iter().enumerate() {
                let b = self.mul(a, s);
                if words[b].is_none() {
                    let mut w = words[a].clone().unwrap();
                    w.push(k);
                    words[b] = Some(w);
                    queue.push_back(b);
                }
            }
        }
        words.into_iter().map(|w| w.expect("generators generate")).collect()
    }

    /// Extends images of the generators to a homomorphism into a group with
    /// multiplication `mul` and identity `id`; `None` if inconsistent.
    pub fn extend_hom<T, M>(&self, gen_images: &[T], id: T, mul: M) -> Option<Vec<T>>
    where
        T: Clone + PartialEq,
        M: Fn(&T, &T) -> T,
    {
        let mut img: Vec<Option<T>> = vec![None; self.order()];
        img[0] = Some(id);
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            let ia = img[a].clone().unwrap();
            for (k, &s) in self.gens.iter().enumerate() {
                let b = self.mul(a, s);
                let cand = mul(&ia, &gen_images[k]);
                match &img[b] {
                    Some(x) if *x != cand => return None,
                    Some(_) => {}
                    None => {
                        img[b] = Some(cand);
                        queue.push_back(b);
                    }
                }
            }
        }
        Some(img.into_iter().map(|x| x.unwrap()).collect())
    }

    /// All nontrivial homomorphisms G → {±1}, as value tables.
    pub fn sign_characters(&self) -> Vec<Vec<i8>> {
        let k = self.gens.len();
        let mut out = Vec::new();
        for mask in 1..(1u32 << k) {
            let imgs: Vec<i8> = (0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            if let Some(ch) = self.extend_hom(&imgs, 1i8, |a, b| a * b) {
                if ch.iter().any(|&x| x == -1) && !out.contains(&ch) {
                    out.push(ch);
                }
            }
        }
        out
    }

    /// Elements of a Sylow 2-subgroup (the one generated by the first
    /// involutions found, closed under multiplication).
    pub fn sylow2(&self) -> Vec<usize> {
        let n = self.order();
        let target = 1usize << n.trailing_zeros();
        let mut sub = vec![0usize];
        for a in 0..n {
            if sub.len() == target {
                break;
            }
            if self.element_order(a).is_power_of_two() && !sub.contains(&a) {
                let mut cand = sub.clone();
                cand.push(a);
                let closed = self.closure(&cand);
                if closed.len() <= target {
                    sub = closed;
                }
            }
        }
        sub
    }

    fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = vec![0usize];
        let mut i = 0;
        while i < set.len() {
            for &g in gens {
                let x = self.mul(set[i], g);
                if !set.contains(&x) {
                    set.push(x);
                }
            }
            i += 1;
        }
        set.sort_unstable();
        set
    }
}

/// Description of a frame in instance files.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadratic: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub biquadratic: Option<[String; 2]>,
}

impl FrameSpec {
    pub fn trivial() -> Self {
        FrameSpec::default()
    }

    pub fn tame(f: u32, e: u32) -> Self {
        FrameSpec { f: Some(f), e: Some(e), ..Default::default() }
    }

    pub fn quadratic(label: &str) -> Self {
        FrameSpec { quadratic: Some(label.into()), ..Default::default() }
    }

    pub fn biquadratic(a: &str, b: &str) -> Self {
        FrameSpec { biquadratic: Some([a.into(), b.into()]), ..Default::default() }
    }
}

/// A finite Galois extension K/F with explicit arithmetic.
#[derive(Clone, Debug)]
pub struct Frame {
    pub base: GroundField,
    pub label: String,
    pub spec: FrameSpec,
    pub group: FiniteGroup,
    /// b_j·b_k = Σ_m structure[j][k][m] b_m
    structure: Vec<Vec<Vec<FieldElem>>>,
    /// per group element: column j holds the coordinates of σ(b_j)
    pub action: Vec<Mat>,
    /// nontrivial sign characters of the group with the square class of
    /// the quadratic subextension each one cuts out
    pub quadratic_subfields: Vec<(Vec<i8>, SquareClass)>,
}

pub type KElem = Vec<FieldElem>;

impl Frame {
    pub fn degree(&self) -> usize {
        self.structure.len()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn trivial(base: GroundField) -> Self {
        let mut fr = Frame {
            base,
            label: "trivial".into(),
            spec: FrameSpec::trivial(),
            group: FiniteGroup::trivial(),
            structure: vec![vec![vec![base.one()]]],
            action: vec![linalg::identity(&base, 1)],
            quadratic_subfields: vec![],
        };
        fr.finish().expect("trivial frame");
        fr
    }

    /// F(√d) with basis (1, y), y² = the canonical representative of d.
    pub fn quadratic(base: GroundField, d: SquareClass) -> Result<Self> {
        if d.is_trivial() || base.kind == FieldKind::Complex {
            return Err(Error::Invalid("quadratic frame needs a nontrivial square class".into()));
        }
        let z = base.zero();
        let one = base.one();
        let rep = base.class_rep(d);
        let structure = vec![
            vec![vec![one.clone(), z.clone()], vec![z.clone(), one.clone()]],
            vec![vec![z.clone(), one.clone()], vec![rep, z.clone()]],
        ];
        let sigma = vec![vec![one.clone(), z.clone()], vec![z, -&one]];
        let mut fr = Frame {
            base,
            label: format!("quad({})", base.class_label(d)),
            spec: FrameSpec::quadratic(&base.class_label(d)),
            group: FiniteGroup::cyclic(2),
            structure,
            action: vec![linalg::identity(&base, 2), sigma],
            quadratic_subfields: vec![],
        };
        fr.finish()?;
        Ok(fr)
    }

    /// The tame extension F(x, ϖ) with F(x)/F unramified of degree f and
    /// ϖ^e = π; requires e | q^f − 1 and p ∤ e. The group is
    /// {(a, b) : a mod f, b mod e} with (a,b)(a′,b′) = (a+a′, b + q^a b′),
    /// acting by x ↦ Φ^a(x), ϖ ↦ ζ^b ϖ.
    pub fn tame(base: GroundField, f: usize, e: usize) -> Result<Self> {
        let q = base.residue_order().ok_or_else(|| Error::Invalid("tame frames need a nonarchimedean field".into()))?;
        if f == 0 || e == 0 || (e as u64) % q == 0 {
            return Err(Error::Invalid(format!("tame frame needs p ∤ e, got f = {f}, e = {e}")));
        }
        let qf = q.pow(f as u32);
        if (qf - 1) % e as u64 != 0 {
            return Err(Error::Invalid(format!("e = {e} does not divide q^f − 1 = {}", qf - 1)));
        }
        if f == 1 && e == 1 {
            return Ok(Self::trivial(base));
        }
        let gbar = irreducible_poly(q, f);
        let ku = PolyQuot::new(base, gbar.iter().map(|&c| base.int(c as i64)).collect());
        let frob = ku.frobenius_root(q)?;
        let zbar = root_of_unity_residue(q, &gbar, e).ok_or_else(|| Error::Invalid("no root of unity".into()))?;
        let zeta = ku.lift_root_of_unity(&zbar, e)?;
        let pi = base.uniformizer()?;
        let d = f * e;
        let idx = |i: usize, j: usize| i + f * j;
        let zero = base.zero();
        let mut structure = vec![vec![vec![zero.clone(); d]; d]; d];
        for j in 0..e {
            for jp in 0..e {
                for i in 0..f {
                    for ip in 0..f {
                        let xp = ku.x_pow(i + ip);
                        let (jj, wrap) = if j + jp >= e { (j + jp - e, true) } else { (j + jp, false) };
                        for (m, c) in xp.iter().enumerate() {
                            structure[idx(i, j)][idx(ip, jp)][idx(m, jj)] = if wrap { c * &pi } else { c.clone() };
                        }
                    }
                }
            }
        }
        // group table
        let gidx = |a: usize, b: usize| a + f * b;
        let mut table = vec![vec![0; d]; d];
        let mut labels = vec![String::new(); d];
        for a in 0..f {
            for b in 0..e {
                labels[gidx(a, b)] = format!("({a},{b})");
                for ap in 0..f {
                    for bp in 0..e {
                        let qa = (q % e as u64).pow(a as u32) as usize % e;
                        table[gidx(a, b)][gidx(ap, bp)] = gidx((a + ap) % f, (b + qa * bp) % e);
                    }
                }
            }
        }
        let mut gens = Vec::new();
        if f > 1 {
            gens.push(gidx(1, 0));
        }
        if e > 1 {
            gens.push(gidx(0, 1));
        }
        let group = FiniteGroup { table, gens, labels };
        // Φ^a(x) for each a
        let mut phis = vec![ku.x_pow(1)];
        for a in 1..f {
            let prev = phis[a - 1].clone();
            phis.push(ku.compose(&prev, &frob));
        }
        let mut action = Vec::with_capacity(d);
        for b in 0..e {
            for a in 0..f {
                let mut m = linalg::zeros(&base, d, d);
                for j in 0..e {
                    let zj = ku.pow(&zeta, (b * j) as u32);
                    for i in 0..f {
                        let img = ku.mul(&ku.pow(&phis[a], i as u32), &zj);
                        for (k, c) in img.into_iter().enumerate() {
                            m[idx(k, j)][idx(i, j)] = c;
                        }
                    }
                }
                action.push(m);
            }
        }
        let mut fr = Frame {
            base,
            label: format!("tame(f={f},e={e})"),
            spec: FrameSpec::tame(f as u32, e as u32),
            group,
            structure,
            action,
            quadratic_subfields: vec![],
        };
        fr.finish()?;
        Ok(fr)
    }

    /// Compositum of two linearly disjoint frames.
    pub fn tensor(k1: &Frame, k2: &Frame) -> Result<Self> {
        if k1.base != k2.base {
            return Err(Error::FieldMismatch);
        }
        let base = k1.base;
        let (d1, d2) = (k1.degree(), k2.degree());
        let d = d1 * d2;
        let idx = |a: usize, b: usize| a + d1 * b;
        let zero = base.zero();
        let mut structure = vec![vec![vec![zero.clone(); d]; d]; d];
        for j1 in 0..d1 {
            for j2 in 0..d2 {
                for k1i in 0..d1 {
                    for k2i in 0..d2 {
                        for m1 in 0..d1 {
                            let c1 = &k1.structure[j1][k1i][m1];
                            if c1.is_exact_zero() {
                                continue;
                            }
                            for m2 in 0..d2 {
                                let c2 = &k2.structure[j2][k2i][m2];
                                if !c2.is_exact_zero() {
                                    structure[idx(j1, j2)][idx(k1i, k2i)][idx(m1, m2)] = c1 * c2;
                                }
                            }
                        }
                    }
                }
            }
        }
        let group = FiniteGroup::product(&k1.group, &k2.group);
        let (n1, n2) = (k1.order(), k2.order());
        let mut action = vec![vec![]; n1 * n2];
        for a in 0..n1 {
            for b in 0..n2 {
                let (m1, m2) = (&k1.action[a], &k2.action[b]);
                let mut m = linalg::zeros(&base, d, d);
                for r1 in 0..d1 {
                    for r2 in 0..d2 {
                        for c1 in 0..d1 {
                            for c2 in 0..d2 {
                                if !m1[r1][c1].is_exact_zero() && !m2[r2][c2].is_exact_zero() {
                                    m[idx(r1, r2)][idx(c1, c2)] = &m1[r1][c1] * &m2[r2][c2];
                                }
                            }
                        }
                    }
                }
                action[a + n1 * b] = m;
            }
        }
        let spec = match (&k1.spec.quadratic, &k2.spec.quadratic) {
            (Some(a), Some(b)) => FrameSpec::biquadratic(a, b),
            _ => FrameSpec::default(),
        };
        let mut fr = Frame {
            base,
            label: format!("{}⊗{}", k1.label, k2.label),
            spec,
            group,
            structure,
            action,
            quadratic_subfields: vec![],
        };
        fr.finish()?;
        Ok(fr)
    }

    pub fn biquadratic(base: GroundField, a: SquareClass, b: SquareClass) -> Result<Self> {
        if a == b || a.is_trivial() || b.is_trivial() {
            return Err(Error::Invalid("biquadratic frame needs two distinct nontrivial classes".into()));
        }
        let mut fr = Self::tensor(&Self::quadratic(base, a)?, &Self::quadratic(base, b)?)?;
        fr.label = format!("biquad({},{})", base.class_label(a), base.class_label(b));
        Ok(fr)
    }

    pub fn from_spec(base: GroundField, spec: &FrameSpec) -> Result<Self> {
        if let Some(d) = &spec.quadratic {
            return Self::quadratic(base, base.parse_class(d)?);
        }
        if let Some([a, b]) = &spec.biquadratic {
            return Self::biquadratic(base, base.parse_class(a)?, base.parse_class(b)?);
        }
        match (spec.f, spec.e) {
            (None, None) | (Some(1), Some(1)) | (Some(1), None) | (None, Some(1)) => Ok(Self::trivial(base)),
            (f, e) => {
                let (f, e) = (f.unwrap_or(1) as usize, e.unwrap_or(1) as usize);
                if base.is_archimedean() {
                    if f * e == 2 && base.kind == FieldKind::Real {
                        return Self::quadratic(base, base.class_minus_one());
                    }
                    return Err(Error::Invalid("no such extension of an archimedean field".into()));
                }
                Self::tame(base, f, e)
            }
        }
    }

    fn finish(&mut self) -> Result<()> {
        let n = self.order();
        if self.action.len() != n || self.degree() != n {
            return Err(Error::Invalid(format!("frame {} is not Galois of the expected degree", self.label)));
        }
        let mut subs = Vec::new();
        for ch in self.group.sign_characters() {
            let class = self.class_of_character_by_resolvent(&ch)?;
            subs.push((ch, class));
        }
        self.quadratic_subfields = subs;
        Ok(())
    }

    /// Class d with K^{ker λ} = F(√d), from y = Σ λ(σ)σ(b) with y² ∈ F.
    fn class_of_character_by_resolvent(&self, ch: &[i8]) -> Result<SquareClass> {
        let d = self.degree();
        for j in 0..d {
            let mut y = vec![self.base.zero(); d];
            for (s, m) in self.action.iter().enumerate() {
                for k in 0..d {
                    let t = if ch[s] == 1 { m[k][j].clone() } else { -&m[k][j] };
                    y[k] = &y[k] + &t;
                }
            }
            if y.iter().all(|c| c.is_zero()) {
                continue;
            }
            let y2 = self.mul(&y, &y);
            if y2.iter().skip(1).any(|c| !c.is_zero()) {
                return Err(Error::PrecisionLoss(format!("resolvent square not in F for frame {}", self.label)));
            }
            return self.base.square_class(&y2[0]);
        }
        Err(Error::PrecisionLoss("all resolvents vanish".into()))
    }

    /// Square class attached to a sign character of the group (trivial
    /// class for the trivial character).
    pub fn class_of_character(&self, ch: &[i8]) -> Result<SquareClass> {
        if ch.iter().all(|&x| x == 1) {
            return Ok(self.base.class_one());
        }
        self.quadratic_subfields
            .iter()
            .find(|(c, _)| c.as_slice() == ch)
            .map(|(_, d)| *d)
            .ok_or_else(|| Error::Invalid("not a homomorphism to ±1".into()))
    }

    // ----- arithmetic in K -----

    pub fn k_one(&self) -> KElem {
        let mut v = vec![self.base.zero(); self.degree()];
        v[0] = self.base.one();
        v
    }

    pub fn embed(&self, x: &FieldElem) -> KElem {
        let mut v = vec![self.base.zero(); self.degree()];
        v[0] = x.clone();
        v
    }

    pub fn mul(&self, x: &KElem, y: &KElem) -> KElem {
        let d = self.degree();
        let mut out = vec![self.base.zero(); d];
        for j in 0..d {
            if x[j].is_exact_zero() {
                continue;
            }
            for k in 0..d {
                if y[k].is_exact_zero() {
                    continue;
                }
                let xy = &x[j] * &y[k];
                for m in 0..d {
                    let c = &self.structure[j][k][m];
                    if !c.is_exact_zero() {
                        out[m] = &out[m] + &(&xy * c);
                    }
                }
            }
        }
        out
    }

    /// Coordinate b₀ of x·y (the F-part when x·y ∈ F).
    pub fn mul_coord0(&self, x: &KElem, y: &KElem) -> FieldElem {
        let d = self.degree();
        let mut out = self.base.zero();
        for j in 0..d {
            if x[j].is_exact_zero() {
                continue;
            }
            for k in 0..d {
                let c = &self.structure[j][k][0];
                if c.is_exact_zero() || y[k].is_exact_zero() {
                    continue;
                }
                out = &out + &(&(&x[j] * &y[k]) * c);
            }
        }
        out
    }

    pub fn apply(&self, s: usize, x: &KElem) -> KElem {
        linalg::mat_vec(&self.base, &self.action[s], x)
    }

    /// Checks the action: each σ is a ring automorphism fixing F, and
    /// σ ↦ M_σ is a homomorphism matching the group table.
    pub fn check(&self) -> Result<bool> {
        let d = self.degree();
        let n = self.order();
        let basis: Vec<KElem> = (0..d)
            .map(|j| {
                let mut v = vec![self.base.zero(); d];
                v[j] = self.base.one();
                v
            })
            .collect();
        for s in 0..n {
            if self.apply(s, &self.k_one()) != self.k_one() && !diff_is_zero(&self.apply(s, &self.k_one()), &self.k_one()) {
                return Ok(false);
            }
            for a in &basis {
                for b in &basis {
                    let lhs = self.apply(s, &self.mul(a, b));
                    let rhs = self.mul(&self.apply(s, a), &self.apply(s, b));
                    if !diff_is_zero(&lhs, &rhs) {
                        return Ok(false);
                    }
                }
            }
            for t in 0..n {
                let st = self.group.mul(s, t);
                for a in &basis {
                    if !diff_is_zero(&self.apply(s, &self.apply(t, a)), &self.apply(st, a)) {
                        return Ok(false);
                    }
                }
            }
        }
        // faithful: only the identity fixes every basis vector
        for s in 1..n {
            if basis.iter().all(|a| diff_is_zero(&self.apply(s, a), a)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether x ∈ F^× is a norm from the quadratic subextension cut out by
    /// the character, via the Hilbert symbol with its class.
    pub fn is_norm_from_subfield(&self, ch: &[i8], x: &FieldElem) -> Result<bool> {
        let d = self.class_of_character(ch)?;
        Ok(self.base.chi_eval(d, x)? == 1)
    }
}

fn diff_is_zero(a: &[FieldElem], b: &[FieldElem]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).is_zero())
}

/// All frames used by the harness over a field.
pub fn standard_frames(base: GroundField) -> Vec<Frame> {
    let mut out = vec![Frame::trivial(base)];
    if base.kind == FieldKind::Complex {
        return out;
    }
    let classes: Vec<SquareClass> = base.classes().into_iter().filter(|c| !c.is_trivial()).collect();
    for &d in &classes {
        out.push(Frame::quadratic(base, d).expect("nontrivial class"));
    }
    if let Some(q) = base.residue_order() {
        let p = base.residue_char().unwrap();
        let mut tame = vec![(3usize, 1usize)];
        if p != 3 && q % 3 == 1 {
            tame.push((1, 3));
        }
        if p != 3 && q % 3 == 2 {
            tame.push((2, 3));
        }
        if p != 2 {
            tame.push((3, 2));
        }
        for (f, e) in tame {
            if let Ok(fr) = Frame::tame(base, f, e) {
                out.push(fr);
            }
        }
    }
    let mut seen: Vec<Vec<u8>> = Vec::new();
    for (i, &a) in classes.iter().enumerate() {
        for &b in &classes[i + 1..] {
            let mut sub = vec![a.bits, b.bits, a.bits ^ b.bits];
            sub.sort_unstable();
            if seen.contains(&sub) {
                continue;
            }
            seen.push(sub);
            out.push(Frame::biquadratic(base, a, b).expect("distinct classes"));
        }
    }
    out
}

// ----- the unramified part F[x]/(g) -----

/// F[x]/(g) for monic g with coefficients listed from the constant term.
#[derive(Clone, Debug)]
struct PolyQuot {
    f: GroundField,
    g: Vec<FieldElem>,
}

impl PolyQuot {
    fn new(f: GroundField, g: Vec<FieldElem>) -> Self {
        PolyQuot { f, g }
    }

    fn deg(&self) -> usize {
        self.g.len() - 1
    }

    fn reduce(&self, mut v: Vec<FieldElem>) -> Vec<FieldElem> {
        let n = self.deg();
        while v.len() > n {
            let top = v.pop().unwrap();
            let off = v.len() - n;
            for i in 0..n {
                v[off + i] = &v[off + i] - &(&top * &self.g[i]);
            }
        }
        while v.len() < n {
            v.push(self.f.zero());
        }
        v
    }

    fn mul(&self, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
        let mut out = vec![self.f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
        self.reduce(out)
    }

    fn one(&self) -> Vec<FieldElem> {
        self.reduce(vec![self.f.one()])
    }

    fn x_pow(&self, k: usize) -> Vec<FieldElem> {
        let mut v = vec![self.f.zero(); k + 1];
        v[k] = self.f.one();
        self.reduce(v)
    }

    fn pow(&self, a: &[FieldElem], mut e: u32) -> Vec<FieldElem> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// p(r) for a polynomial p given by coefficients.
    fn eval(&self, p: &[FieldElem], r: &[FieldElem]) -> Vec<FieldElem> {
        let mut acc = vec![self.f.zero(); self.deg()];
        for c in p.iter().rev() {
            acc = self.mul(&acc, r);
            acc[0] = &acc[0] + c;
        }
        acc
    }

    /// a(r) where a is an element (polynomial in x of degree < n).
    fn compose(&self, a: &[FieldElem], r: &[FieldElem]) -> Vec<FieldElem> {
        self.eval(a, r)
    }

    fn inv(&self, a: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let n = self.deg();
        // columns: a·x^j
        let cols: Vec<Vec<FieldElem>> = (0..n).map(|j| self.mul(a, &self.x_pow(j))).collect();
        let m: Mat = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        let mut e = vec![self.f.zero(); n];
        e[0] = self.f.one();
        linalg::solve(&self.f, &m, &e)
    }

    fn sub(&self, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    fn newton_iterations(&self) -> usize {
        (self.f.precision as f64).log2().ceil() as usize + 3
    }

    /// The root of g that reduces to x^q (the Frobenius image of x).
    fn frobenius_root(&self, q: u64) -> Result<Vec<FieldElem>> {
        let mut r = self.pow(&self.x_pow(1), q as u32);
        if matches!(self.f.kind, FieldKind::Laurent(_)) {
            // constant coefficients: x ↦ x^q is exact
            return Ok(r);
        }
        let dg: Vec<FieldElem> = (1..self.g.len()).map(|i| &self.g[i] * &self.f.int(i as i64)).collect();
        for _ in 0..self.newton_iterations() {
            let val = self.eval(&self.g, &r);
            if val.iter().all(|c| c.is_zero()) {
                break;
            }
            let der = self.eval(&dg, &r);
            r = self.sub(&r, &self.mul(&val, &self.inv(&der)?));
        }
        Ok(r)
    }

    /// Lifts a residue-field root of unity of order e (coefficients mod q).
    fn lift_root_of_unity(&self, zbar: &[u64], e: usize) -> Result<Vec<FieldElem>> {
        let mut z: Vec<FieldElem> = zbar.iter().map(|&c| self.f.int(c as i64)).collect();
        if matches!(self.f.kind, FieldKind::Laurent(_)) {
            return Ok(z);
        }
        let e_elem = self.f.int(e as i64);
        for _ in 0..self.newton_iterations() {
            let mut val = self.pow(&z, e as u32);
            val[0] = &val[0] - &self.f.one();
            if val.iter().all(|c| c.is_zero()) {
                break;
            }
            let der: Vec<FieldElem> = self.pow(&z, e as u32 - 1).iter().map(|c| c * &e_elem).collect();
            z = self.sub(&z, &self.mul(&val, &self.inv(&der)?));
        }
        Ok(z)
    }
}

// ----- residue field F_q[x]/(ḡ) with small integers -----

fn rp_mul(a: &[u64], b: &[u64], g: &[u64], q: u64) -> Vec<u64> {
    let n = g.len() - 1;
    let mut out = vec![0u64; 2 * n];
    for i in 0..n {
        for j in 0..n {
            out[i + j] = (out[i + j] + a[i] * b[j]) % q;
        }
    }
    for k in (n..2 * n).rev() {
        let top = out[k];
        if top == 0 {
            continue;
        }
        out[k] = 0;
        for i in 0..n {
            out[k - n + i] = (out[k - n + i] + (q - top) * g[i]) % q;
        }
    }
    out.truncate(n);
    out
}

/// Lexicographically first monic polynomial of degree f ≤ 3 over F_q
/// without roots (hence irreducible).
fn irreducible_poly(q: u64, f: usize) -> Vec<u64> {
    if f == 1 {
        return vec![0, 1];
    }
    let total = q.pow(f as u32);
    for code in 0..total {
        let mut c = Vec::with_capacity(f + 1);
        let mut x = code;
        for _ in 0..f {
            c.push(x % q);
            x /= q;
        }
        c.push(1);
        let has_root = (0..q).any(|t| c.iter().rev().fold(0u64, |acc, &k| (acc * t + k) % q) == 0);
        if !has_root {
            return c;
        }
    }
    unreachable!("irreducible polynomials of degree ≤ 3 exist")
}

fn root_of_unity_residue(q: u64, g: &[u64], e: usize) -> Option<Vec<u64>> {
    let n = g.len() - 1;
    let total = q.pow(n as u32);
    let one: Vec<u64> = (0..n).map(|i| u64::from(i == 0)).collect();
    let pow = |a: &[u64], k: usize| -> Vec<u64> {
        let mut acc = one.clone();
        for _ in 0..k {
            acc = rp_mul(&acc, a, g, q);
        }
        acc
    };
    for code in 1..total {
        let mut z = Vec::with_capacity(n);
        let mut x = code;
        for _ in 0..n {
            z.push(x % q);
            x /= q;
        }
        if pow(&z, e) != one {
            continue;
        }
        let exact = (1..e).filter(|d| e % d == 0).all(|d| pow(&z, d) != one);
        if exact {
            return Some(z);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields() -> Vec<GroundField> {
        vec![
            GroundField::real(),
            GroundField::padic(2).unwrap(),
            GroundField::padic(3).unwrap(),
            GroundField::padic(5).unwrap(),
            GroundField::padic(7).unwrap(),
            GroundField::laurent(3).unwrap(),
            GroundField::laurent(5).unwrap(),
        ]
    }

    #[test]
    fn all_standard_frames_are_galois() {
        for f in fields() {
            for fr in standard_frames(f) {
                assert!(fr.check().unwrap(), "{} over {}", fr.label, f);
                assert_eq!(fr.degree(), fr.order());
            }
        }
    }

    #[test]
    fn tame_groups_have_expected_shape() {
        let f = GroundField::padic(5).unwrap();
        let s3 = Frame::tame(f, 2, 3).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.group.is_abelian());
        assert_eq!(s3.quadratic_subfields.len(), 1);
        // the quadratic subfield of F(ζ₃, π^{1/3}) is the unramified one
        assert_eq!(s3.quadratic_subfields[0].1, f.parse_class("2").unwrap());
        let z6 = Frame::tame(f, 3, 2).unwrap();
        assert!(z6.group.is_abelian());
        assert_eq!(z6.group.element_order(z6.group.gens[0]), 3);
        // the quadratic subfield of the Z/6 frame is F(√π)
        assert_eq!(z6.quadratic_subfields[0].1, f.parse_class("5").unwrap());
        let c3 = Frame::tame(GroundField::padic(7).unwrap(), 1, 3).unwrap();
        assert!(c3.quadratic_subfields.is_empty());
    }

    #[test]
    fn quadratic_subfield_table_matches_class() {
        for f in fields() {
            for d in f.classes().into_iter().filter(|c| !c.is_trivial()) {
                let fr = Frame::quadratic(f, d).unwrap();
                assert_eq!(fr.quadratic_subfields, vec![(vec![1, -1], d)]);
            }
        }
    }

    #[test]
    fn biquadratic_table_is_multiplicative() {
        let f = GroundField::padic(2).unwrap();
        let fr = Frame::biquadratic(f, f.parse_class("-1").unwrap(), f.parse_class("2").unwrap()).unwrap();
        assert_eq!(fr.quadratic_subfields.len(), 3);
        for (c1, d1) in &fr.quadratic_subfields {
            for (c2, d2) in &fr.quadratic_subfields {
                let prod: Vec<i8> = c1.iter().zip(c2).map(|(a, b)| a * b).collect();
                assert_eq!(fr.class_of_character(&prod).unwrap(), d1.mul(*d2).unwrap());
            }
        }
    }

    #[test]
    fn sylow_subgroups() {
        let f = GroundField::padic(5).unwrap();
        assert_eq!(Frame::tame(f, 2, 3).unwrap().group.sylow2().len(), 2);
        assert_eq!(Frame::tame(f, 3, 1).unwrap().group.sylow2().len(), 1);
        let v4 = Frame::biquadratic(f, f.parse_class("2").unwrap(), f.parse_class("5").unwrap()).unwrap();
        assert_eq!(v4.group.sylow2().len(), 4);
    }

    #[test]
    fn extend_hom_detects_inconsistency() {
        let g = FiniteGroup::cyclic(3);
        assert!(g.extend_hom(&[-1i8], 1, |a, b| a * b).is_none());
        assert_eq!(g.extend_hom(&[1i8], 1, |a, b| a * b), Some(vec![1, 1, 1]));
    }
}
