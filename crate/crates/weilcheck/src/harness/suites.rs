//! Named verification suites and the aggregate suite report.

use std::sync::Arc;

use num_rational::Rational64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{algebra, field_with, matrix_instances, verify_main_theorem, MatrixFilter, VerifyOptions};
use crate::br2s::{check_group_axioms, cup, Br2sElem};
use crate::clifford::{spinor_norm_oracle, wall_via_clifford};
use crate::epsweil::{eps_quadratic, eps_quadratic_complex, weil_gauss_oracle, weil_index, FourthRoot};
use crate::error::{Error, Result};
use crate::linalg;
use crate::localfield::{AdditiveCharacter, FieldElem, GroundField, QuadExt, SquareClass};
use crate::quadform::{hw_rel, scaling_defect, DiagForm, QuadSpace};
use crate::rootdata::{CartanType, ChevalleyAlgebra, LatticeTriple, Mutation, OmegaElem};
use crate::torus::{
    deg_on_short_block, descend_torus_lattice, faithful_weyl_classes, hw_torus_binary_check, resolve_cocycle,
    spinor_norm_zassenhaus, standard_frames, sw_of_representation, xi, Frame, TorusDatum,
};

pub const SUITE_NAMES: [&str; 9] = [
    "algebraic-identities",
    "clifford-oracle",
    "jl",
    "combo",
    "froehlich",
    "lattice",
    "spinor",
    "torus-binary",
    "main-theorem-matrix",
];

const HARNESS_TYPES: [&str; 6] = ["A1", "A2", "C2", "B2", "A3", "G2"];
const MAX_LISTED_FAILURES: usize = 25;

/// Deliberate corruptions for negative-control runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Controls {
    /// negate one Chevalley structure constant
    #[serde(default)]
    pub flip_structure_constant: bool,
    /// negate the Hilbert symbol of one pair of square-class codes
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hilbert_flip: Option<[u8; 2]>,
}

fn default_seed() -> u64 {
    0x5eed
}

fn default_forms() -> usize {
    200
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suites: Vec<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// random forms per field for the algebraic-identities suite (combo uses half)
    #[serde(default = "default_forms")]
    pub random_forms: usize,
    #[serde(default)]
    pub matrix: MatrixFilter,
    #[serde(default)]
    pub controls: Controls,
}

impl SuiteConfig {
    pub fn all() -> Self {
        SuiteConfig {
            suites: SUITE_NAMES.iter().map(|s| s.to_string()).collect(),
            seed: default_seed(),
            random_forms: default_forms(),
            matrix: MatrixFilter::default(),
            controls: Controls::default(),
        }
    }

    pub fn only(name: &str) -> Self {
        SuiteConfig { suites: vec![name.to_string()], ..Self::all() }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("suite config: {e}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub checks: usize,
    pub failed: usize,
    pub skipped: usize,
    /// the first few failures
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult { name: name.into(), checks: 0, failed: 0, skipped: 0, failures: vec![], notes: vec![] }
    }

    pub fn pass(&self) -> bool {
        self.failed == 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.failed += 1;
        if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures.push(what);
        }
    }

    /// Records an error as a failed check.
    fn result<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.fail(format!("{}: {e}", what()));
                None
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema: &'static str,
    pub controls: Controls,
    pub suites: Vec<SuiteResult>,
    pub pass: bool,
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    for s in &config.suites {
        if !SUITE_NAMES.contains(&s.as_str()) {
            return Err(Error::Invalid(format!("unknown suite {s}; known: {}", SUITE_NAMES.join(", "))));
        }
    }
    let mut suites = Vec::new();
    for name in SUITE_NAMES.iter().filter(|n| config.suites.iter().any(|s| s == *n)) {
        let r = match *name {
            "algebraic-identities" => algebraic_identities(config),
            "clifford-oracle" => clifford_oracle(config),
            "jl" => norm_form_gauss_sums(config),
            "combo" => combo(config),
            "froehlich" => froehlich(config),
            "lattice" => lattice_lemmas(config),
            "spinor" => spinor(config),
            "torus-binary" => torus_binary(config),
            _ => main_theorem_matrix(config),
        };
        suites.push(r);
    }
    let pass = suites.iter().all(|s| s.pass());
    Ok(SuiteReport { schema: "weilcheck-suite/1", controls: config.controls, suites, pass })
}

fn fields(config: &SuiteConfig, names: &[&str]) -> Vec<GroundField> {
    names.iter().map(|n| field_with(n, None, &config.controls).expect("known field")).collect()
}

fn alg(config: &SuiteConfig, t: &str) -> Arc<ChevalleyAlgebra> {
    let m = Mutation { flip_structure_constant: config.controls.flip_structure_constant };
    algebra(t.parse::<CartanType>().expect("harness type"), m).expect("harness types build")
}

fn nonzero_int(rng: &mut StdRng, f: &GroundField) -> i64 {
    loop {
        let x: i64 = rng.gen_range(-60..=60);
        if x != 0 && !f.int(x).is_zero() {
            return x;
        }
    }
}

/// A random nondegenerate symmetric form with even diagonal (integral Q).
fn random_form(rng: &mut StdRng, f: &GroundField, n: usize) -> QuadSpace {
    loop {
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = 2 * rng.gen_range(-12..=12);
            for j in i + 1..n {
                let x = if rng.gen_bool(0.5) { rng.gen_range(-9..=9) } else { 0 };
                g[i][j] = x;
                g[j][i] = x;
            }
        }
        let q = QuadSpace::new(*f, linalg::from_ints(f, &g)).expect("symmetric");
        if linalg::det(f, &q.gram).map(|d| !d.is_zero()).unwrap_or(false) && q.diagonalize().is_ok() {
            return q;
        }
    }
}

// ----- 1, 3: Br₂(F)_s and Wall-invariant identities -----

fn algebraic_identities(config: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("algebraic-identities");
    let all = fields(config, &["R", "C", "Qp:2", "Qp:3", "Qp:5", "Fq((t)):3"]);
    for f in &all {
        let ok = check_group_axioms(*f);
        r.check(ok == Ok(true), || format!("{f}: Br₂(F)_s group axioms"));
    }
    let mut rng = StdRng::seed_from_u64(config.seed);
    for f in all.iter().filter(|f| !matches!(f.kind, crate::localfield::FieldKind::Complex)) {
        for _ in 0..config.random_forms {
            let n1 = 2 * rng.gen_range(1..=3);
            let n2 = 2 * rng.gen_range(1..=3);
            let q1 = random_form(&mut rng, f, n1);
            let q2 = random_form(&mut rng, f, n2);
            let (Some(w1), Some(w2)) = (r.result(q1.wall(), || format!("{f}: wall")), r.result(q2.wall(), || format!("{f}: wall")))
            else {
                continue;
            };
            // Wall is additive on orthogonal sums
            let sum = q1.dsum(&q2).wall();
            r.check(sum.as_ref().ok() == w1.add(&w2).ok().as_ref(), || format!("{f}: Wall(Q⊕Q′) ≠ Wall(Q)+Wall(Q′)"));
            // Q ⊕ (−Q) is hyperbolic
            let neg = q1.scale(&f.int(-1)).and_then(|m| q1.dsum(&m).wall());
            r.check(neg.map(|w| w.is_zero()).unwrap_or(false), || format!("{f}: Wall(Q ⊕ −Q) ≠ 0"));
            // scaling by a: Wall(aQ) − Wall(Q) = (1, {χ_Q, a})
            let a = f.int(nonzero_int(&mut rng, f));
            let scaled = q1.scale(&a).and_then(|s| s.wall()).and_then(|ws| ws.sub(&w1));
            let pred = scaling_defect(&q1, &a).map(|x| Br2sElem::new(*f, f.class_one(), x));
            r.check(scaled.is_ok() && scaled == pred, || format!("{f}: scaling rule"));
            // HW(Q′, Q) = Wall(Q) − Wall(Q′) for equal dimensions
            let q3 = random_form(&mut rng, f, n1);
            if let (Ok(hw), Ok(w3)) = (hw_rel(&q3, &q1), q3.wall()) {
                r.check(Ok(hw) == w1.sub(&w3), || format!("{f}: HW(Q′,Q) vs Wall"));
            }
            // invariance under a unimodular change of basis
            let mut p = linalg::identity(f, n1);
            for i in 0..n1 {
                for j in i + 1..n1 {
                    p[i][j] = f.int(rng.gen_range(-3..=3));
                }
            }
            r.check(q1.change_basis(&p).wall().ok() == Some(w1), || format!("{f}: Wall not basis independent"));
        }
    }
    r
}

// ----- 2: Clifford algebras -----

fn clifford_oracle(config: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("clifford-oracle");
    for f in fields(config, &["R", "Qp:2", "Qp:3", "Qp:5", "Fq((t)):3"]) {
        let cls = f.classes();
        let mut forms: Vec<Vec<SquareClass>> = Vec::new();
        for &a in &cls {
            for &b in &cls {
                forms.push(vec![a, b]);
                for &c in &cls {
                    for &d in &cls {
                        forms.push(vec![a, b, c, d]);
                    }
                }
            }
        }
        let results: Vec<(Vec<SquareClass>, bool)> = forms
            .into_par_iter()
            .map(|cs| {
                let d = DiagForm { field: f, coeffs: cs.clone() };
                let ok = matches!((wall_via_clifford(&d), d.wall()), (Ok(a), Ok(b)) if a == b);
                (cs, ok)
            })
            .collect();
        for (cs, ok) in results {
            r.check(ok, || format!("{f}: Clifford vs Wall on ⟨{}⟩", labels(&f, &cs)));
        }
        // graded quaternion algebras and norm forms of étale algebras
        for e in QuadExt::all(f) {
            let qe = QuadSpace::norm_form(&e);
            let we = qe.diagonalize().and_then(|d| wall_via_clifford(&d));
            r.check(we == Ok(Br2sElem::new(f, e.a, 0)), || format!("{f}: [C(Q_E)] for E = F(√{})", f.class_label(e.a)));
            for a in f.classes() {
                let av = f.class_rep(a);
                let Some(qd) = r.result(QuadSpace::quaternion_norm_form(&e, &av), || format!("{f}: Q_D")) else {
                    continue;
                };
                let wd = qd.diagonalize().and_then(|d| wall_via_clifford(&d));
                r.check(wd == Ok(Br2sElem::new(f, f.class_one(), cup(&f, e.a, a))), || {
                    format!("{f}: [C(Q_D)] for D = ({}, {})", f.class_label(e.a), f.class_label(a))
                });
                // Q_D = Q_E ⊕ (−a)Q_E at the level of invariants
                let split = qe.scale(&(-&av)).map(|m| qe.dsum(&m)).and_then(|s| s.wall());
                r.check(split.is_ok() && split == qd.wall(), || format!("{f}: Q_D vs Q_E ⊕ (−a)Q_E"));
            }
        }
    }
    r
}

fn labels(f: &GroundField, cs: &[SquareClass]) -> String {
    cs.iter().map(|c| f.class_label(*c)).collect::<Vec<_>>().join(", ")
}

// ----- 4: Gauss-sum Weil indices of norm forms against ε_L -----

const NONARCH: [&str; 6] = ["Qp:3", "Qp:5", "Qp:7", "Qp:2", "Fq((t)):3", "Fq((t)):5"];

fn norm_form_gauss_sums(config: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("jl");
    for f in fields(config, &NONARCH) {
        let mut n = 0;
        for e in QuadExt::all(f).into_iter().filter(|e| !e.is_split()) {
            for l in super::PSI_LEVELS {
                let psi = AdditiveCharacter::new(f, l);
                let what = || format!("{f}: E = F(√{}), level {l}", f.class_label(e.a));
                let Some(g) = r.result(weil_gauss_oracle(&QuadSpace::norm_form(&e), &psi), what) else { continue };
                let Some(eps) = r.result(eps_quadratic_complex(e.a, &psi), what) else { continue };
                let close = (g.value() - eps).norm() < 1e-6;
                let exact = FourthRoot::snap(g.value()).ok() == eps_quadratic(e.a, &psi).ok();
                r.check(close && exact, || format!("{}: γ = {:.6}, ε = {eps:.6}", what(), g.value()));
                n += 1;
            }
        }
        // nonsplit quaternion norm forms have γ = −1
        let mut m = 0;
        for e in QuadExt::all(f).into_iter().filter(|e| !e.is_split()) {
            for a in f.classes().into_iter().filter(|&a| cup(&f, e.a, a) == 1) {
                let psi = AdditiveCharacter::standard(f);
                let Ok(qd) = QuadSpace::quaternion_norm_form(&e, &f.class_rep(a)) else { continue };
                let g = weil_gauss_oracle(&qd, &psi).ok().and_then(|o| FourthRoot::snap(o.value()).ok());
                r.check(g == Some(FourthRoot::MINUS_ONE), || {
                    format!("{f}: γ(Q_D) for D = ({}, {}) is {g:?}", f.class_label(e.a), f.class_label(a))
                });
                m += 1;
            }
        }
        r.notes.push(format!("{f}: {n} étale checks, {m} quaternion checks"));
    }
    r
}

// ----- 5: Gauss-sum oracle against ε_L(χ_Q)ζ_Q -----

fn combo(config: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("combo");
    let per_field = (config.random_forms / 2).max(1);
    for (k, f) in fields(config, &NONARCH).into_iter().enumerate() {
        let mut rng = StdRng::seed_from_u64(config.seed ^ (k as u64 + 1) * 0x9e37);
        let jobs: Vec<(QuadSpace, i64)> = (0..per_field)
            .map(|_| {
                let n = 2 * rng.gen_range(1..=3);
                (random_form(&mut rng, &f, n), rng.gen_range(-1..=1))
            })
            .collect();
        let out: Vec<(usize, std::result::Result<bool, String>)> = jobs
            .par_iter()
            .map(|(q, l)| {
                let psi = AdditiveCharacter::new(f, *l);
                let res = (|| -> Result<bool> {
                    let o = weil_gauss_oracle(q, &psi)?;
                    let w = weil_index(q, &psi)?;
                    Ok((o.value() - w.to_complex()).norm() < 1e-6)
                })();
                (q.dim(), res.map_err(|e| e.to_string()))
            })
            .collect();
        for (i, (n, res)) in out.into_iter().enumerate() {
            match res {
                Ok(ok) => r.check(ok, || format!("{f}: form #{i} (dim {n})")),
                Err(e) => {
                    r.checks += 1;
                    r.fail(format!("{f}: form #{i} (dim {n}): {e}"));
                }
            }
        }
    }
    r
}

// ----- 6: HW(Q_φ, Q) = SW̄(φ) + ξ(δ∘φ) -----

/// Lattice vectors (α_i^∨, 0) of the letters of the reduced word of w.
fn reflection_vectors(a: &ChevalleyAlgebra, f: &GroundField, w: usize) -> Vec<Vec<FieldElem>> {
    a.weyl.elements[w]
        .word
        .iter()
        .map(|&i| a.lattice.coroot_vector(&a.datum, a.datum.simple(i)).iter().map(|&x| f.int(x)).collect())
        .collect()
}

fn froehlich(config: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("froehlich");
    for f in fields(config, &["Qp:3", "Qp:5", "R"]) {
        let frames: Vec<Arc<Frame>> =
            standard_frames(f).into_iter().filter(|fr| matches!(fr.order(), 1 | 2 | 3 | 6)).map(Arc::new).collect();
        for t in HARNESS_TYPES {
            let a = alg(config, t);
            let split = QuadSpace::new(f, linalg::from_ints(&f, &a.lattice.gram)).expect("symmetric");
            for fr in &frames {
                for w in faithful_weyl_classes(fr, &a) {
                    let phi0 = vec![a.weyl.omega_identity(); w.len()];
                    let what = || format!("{t}/{f}/{}/{w:?}", fr.label);
                    let Some(td) = r.result(resolve_cocycle(fr.clone(), a.clone(), &phi0, &w), what) else {
                        continue;
                    };
                    let Some(lhs) = r.result(descend_torus_lattice(&td).and_then(|q| hw_rel(&q, &split)), what) else {
                        continue;
                    };
                    let Some(rhs) = r.result(froehlich_rhs(&td, &split), what) else { continue };
                    match rhs {
                        Some(rhs) => r.check(lhs == rhs, || format!("{}: HW = {lhs}, SW̄ + ξ(δφ) = {rhs}", what())),
                        None => r.skipped += 1,
                    }
                }
            }
        }
    }
    r
}

/// SW̄(φ) from characters plus ξ of the spinor norm computed in the
/// Clifford algebra on a reflection factorization.
fn froehlich_rhs(td: &TorusDatum, split: &QuadSpace) -> Result<Option<Br2sElem>> {
    let f = td.field();
    let Some(sw) = sw_of_representation(td)? else { return Ok(None) };
    let delta: Vec<SquareClass> = td
        .phi
        .iter()
        .map(|g| spinor_norm_oracle(split, &reflection_vectors(&td.alg, &f, g.w)))
        .collect::<Result<_>>()?;
    Ok(Some(sw.add(&xi(&td.frame, &delta)?)?))
}

// ----- 7: integer lattice identities -----

fn lattice_lemmas(config: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("lattice");
    let ri = Rational64::from_integer;
    for t in HARNESS_TYPES {
        let a = alg(config, t);
        let d = &a.datum;
        let v = &a.lattice;
        let n = v.dim();
        let ell = d.ell;
        // Q on the Vinberg lattice is Q₁(x₁) − Q₁(x₂) and integral
        for k in 0..n {
            let mut e = vec![0; n];
            e[k] = 1;
            let (x1, x2) = v.to_pair(&e);
            let q = v.q(&e.iter().map(|&x| ri(x)).collect::<Vec<_>>());
            r.check(q == d.q1(&x1) - d.q1(&x2) && q.is_integer(), || format!("{t}: Q(e_{k}) = {q}"));
        }
        // W ⋊ Ω₀ preserves Q_𝕋
        for wi in 0..a.weyl.order() {
            for o in 0..a.weyl.omega0.len() {
                let m = v.ext_matrix(&a.weyl, OmegaElem { w: wi, o });
                r.check(is_isometry(&v.gram, &m), || format!("{t}: w·ω = ({wi},{o}) is not an isometry"));
            }
        }
        let tr = LatticeTriple { gram: v.gram.clone(), ell };
        r.check(tr.q_integral(), || format!("{t}: Q_𝕋 not integral"));
        // Q(α^∨) is 1 for long roots and ℓ for short ones; ⟨β, β^∨⟩ = 2
        for b in 0..d.nroots() {
            let cv: Vec<Rational64> = v.coroot_vector(d, b).iter().map(|&x| ri(x)).collect();
            let expect = if d.ell == 1 || d.is_long(b) { 1 } else { ell };
            r.check(v.q(&cv) == ri(expect), || format!("{t}: Q(β^∨) for root {b}"));
            match v.root_vector(d, b) {
                Ok(y) => r.check(v.b(&y, &cv) == ri(2), || format!("{t}: ⟨β, β^∨⟩ via B for root {b}")),
                Err(e) => r.fail(format!("{t}: root vector {b}: {e}")),
            }
        }
        // Q_G = Q_𝕋 ⊕ Q_𝕍′ ⊕ ℓQ_𝕍″
        match a.q_g_gram() {
            Ok(g) => {
                let tdim = a.torus_dim();
                let mut ok = (0..tdim).all(|i| (0..tdim).all(|j| g[i][j] == ri(v.gram[i][j])));
                for bi in 0..d.nroots() {
                    for bj in 0..d.nroots() {
                        let expect = if bj == d.neg(bi) { if d.ell == 1 || d.is_long(bi) { 1 } else { ell } } else { 0 };
                        ok &= g[tdim + bi][tdim + bj] == ri(expect);
                    }
                    ok &= (0..tdim).all(|h| g[tdim + bi][h] == ri(0) && g[h][tdim + bi] == ri(0));
                }
                r.check(ok, || format!("{t}: Q_G does not split as Q_𝕋 ⊕ Q_𝕍′ ⊕ ℓQ_𝕍″"));
            }
            Err(e) => r.fail(format!("{t}: Q_G: {e}")),
        }
        // ℓΛ^⊥ ⊂ Λ ⊂ Λ^⊥ and the reduced forms over F_ℓ
        if ell > 1 {
            r.check(tr.check_chain().is_ok(), || format!("{t}: lattice chain"));
            match tr.reduced_forms() {
                Ok((q1, q2)) => {
                    r.check(q1.dim() + q2.dim() == n, || format!("{t}: reduced dimensions"));
                    r.check(q1.is_nondegenerate() && q2.is_nondegenerate(), || format!("{t}: Q′ or Q″ degenerate"));
                }
                Err(e) => r.fail(format!("{t}: reduced forms: {e}")),
            }
        }
    }
    // the G₂ single-factor triple (Λ = coroot lattice, Q₁, ℓ = 3)
    let g2 = alg(config, "G2");
    let single = LatticeTriple { gram: g2.datum.b1(), ell: 3 };
    r.check(single.discriminant_order() == 3, || "G2: |Λ^⊥/Λ| ≠ 3".into());
    r.check(single.check_chain().is_ok(), || "G2 single factor: lattice chain".into());
    match single.reduced_forms() {
        Ok((q1, q2)) => r.check(q1.is_nondegenerate() && q2.is_nondegenerate(), || "G2 single factor: Q′/Q″".into()),
        Err(e) => r.fail(format!("G2 single factor: {e}")),
    }
    r
}

fn is_isometry(gram: &[Vec<i64>], g: &[Vec<i64>]) -> bool {
    let n = gram.len();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let s: i64 = (0..n).map(|a| (0..n).map(|b| g[a][i] * gram[a][b] * g[b][j]).sum::<i64>()).sum();
            s == gram[i][j]
        })
    })
}

// ----- 8: spinor norms of Weyl elements -----

fn spinor(config: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("spinor");
    for f in fields(config, &["Qp:3", "Qp:5", "Qp:7", "Qp:2"]) {
        for t in ["A1", "A2", "C2", "G2"] {
            let a = alg(config, t);
            let split = QuadSpace::new(f, linalg::from_ints(&f, &a.lattice.gram)).expect("symmetric");
            let ell = f.square_class(&f.int(a.datum.ell)).expect("nonzero");
            for w in 0..a.weyl.order() {
                let m = linalg::from_ints(&f, &a.lattice.ext_matrix(&a.weyl, OmegaElem { w, o: a.weyl.omega_identity() }));
                let z = spinor_norm_zassenhaus(&split, &m);
                let c = spinor_norm_oracle(&split, &reflection_vectors(&a, &f, w));
                let expect = if a.weyl.eps2(w) == -1 { ell } else { f.class_one() };
                r.check(z.is_ok() && z == c && z == Ok(expect), || {
                    format!("{t}/{f}: δ(w{:?}) Zassenhaus {z:?}, Clifford {c:?}", a.weyl.elements[w].word)
                });
            }
        }
    }
    // char F = ℓ: spinor norms on Q′, Q″ vanish
    let f = field_with("Fq((t)):3", None, &config.controls).expect("field");
    let a = alg(config, "G2");
    let tr = a.lattice.triple(3);
    match tr.reduced_forms() {
        Ok(forms) => {
            for (k, form) in [&forms.0, &forms.1].into_iter().enumerate() {
                let nd = form.dim();
                let gram: Vec<Vec<FieldElem>> = (0..nd)
                    .map(|i| (0..nd).map(|j| f.int(if i == j { 2 * form.values[i] } else { form.gram[i][j] })).collect())
                    .collect();
                let q = QuadSpace::new(f, gram).expect("symmetric");
                for w in 0..a.weyl.order() {
                    let g = a.lattice.ext_matrix(&a.weyl, OmegaElem { w, o: 0 });
                    let res = tr.reduced_action(&g, &forms).and_then(|(a1, a2)| {
                        let m = linalg::from_ints(&f, if k == 0 { &a1 } else { &a2 });
                        let z = spinor_norm_zassenhaus(&q, &m)?;
                        let c = spinor_norm_oracle(&q, &reflection_factors(&f, &tr, &a, w, &forms, k)?)?;
                        Ok(z.is_trivial() && c.is_trivial())
                    });
                    r.check(res == Ok(true), || format!("G2/{f}: spinor norm on reduced form {k} for w = {w}: {res:?}"));
                }
            }
        }
        Err(e) => r.fail(format!("G2 reduced forms: {e}")),
    }
    for t in ["A1", "A2", "C2", "B2", "G2"] {
        r.check(deg_on_short_block(&alg(config, t)), || format!("{t}: det on short root spaces ≠ ε″"));
    }
    r
}

/// Reflection vectors on a reduced form for the letters of w: each simple
/// reflection acts as a reflection or trivially.
fn reflection_factors(
    f: &GroundField,
    tr: &LatticeTriple,
    a: &ChevalleyAlgebra,
    w: usize,
    forms: &(crate::rootdata::ReducedForm, crate::rootdata::ReducedForm),
    k: usize,
) -> Result<Vec<Vec<FieldElem>>> {
    let mut out = Vec::new();
    for &i in &a.weyl.elements[w].word {
        let s = a.weyl.simple_reflection(i);
        let g = a.lattice.ext_matrix(&a.weyl, OmegaElem { w: s, o: 0 });
        let (a1, a2) = tr.reduced_action(&g, forms)?;
        let m = if k == 0 { a1 } else { a2 };
        let nd = m.len();
        let col = (0..nd).find(|&j| (0..nd).any(|i| (i64::from(i == j) - m[i][j]).rem_euclid(tr.ell) != 0));
        if let Some(j) = col {
            out.push((0..nd).map(|i| f.int((i64::from(i == j) - m[i][j]).rem_euclid(tr.ell))).collect());
        }
    }
    Ok(out)
}

// ----- 9: rank-two tori -----

fn torus_binary(config: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("torus-binary");
    for f in fields(config, &["R", "Qp:2", "Qp:3", "Fq((t)):5"]) {
        match hw_torus_binary_check(f) {
            Ok(cs) => {
                for c in cs {
                    r.check(c.pass, || format!("{}: E = F(√{}), a = {}: {} vs {}", c.field, c.d, c.a, c.computed, c.expected));
                }
            }
            Err(e) => r.fail(format!("{f}: {e}")),
        }
    }
    r
}

// ----- 10: the main theorem -----

fn main_theorem_matrix(config: &SuiteConfig) -> SuiteResult {
    let mut r = SuiteResult::new("main-theorem-matrix");
    let inst = match matrix_instances(&config.matrix) {
        Ok(i) => i,
        Err(e) => {
            r.fail(format!("enumeration: {e}"));
            return r;
        }
    };
    let opts = VerifyOptions { intermediates: true, robustness: true, controls: config.controls, ..Default::default() };
    let reports: Vec<_> = inst.par_iter().map(|s| (s.key(), verify_main_theorem(s, &opts))).collect();
    let mut resolved = 0;
    let mut xi_active = 0;
    let mut char_ell = 0;
    let mut g2 = 0;
    for (key, rep) in reports {
        match rep {
            Ok(rep) => {
                resolved += 1;
                if rep.details.get("xi_chi_ell").is_some_and(|x| x != "(1, 0)") {
                    xi_active += 1;
                }
                if rep.intermediates.contains_key("modular_equals_dihedral") {
                    char_ell += 1;
                }
                if rep.intermediates.contains_key("g2_dihedral") {
                    g2 += 1;
                }
                r.check(rep.all_pass(), || {
                    let bad: Vec<&String> = rep.intermediates.iter().filter(|(_, v)| !**v).map(|(k, _)| k).collect();
                    format!("{} (failed intermediates: {bad:?})", rep.summary_line())
                });
            }
            Err(Error::Obstructed(_)) => r.skipped += 1,
            Err(e) => r.fail(format!("{key}: {e}")),
        }
    }
    r.notes.push(format!("{} instances, {resolved} resolved, {} obstructed", inst.len(), r.skipped));
    r.notes.push(format!("{xi_active} instances with a nonzero ξ(χ⊗ℓ) correction"));
    r.notes.push(format!("{char_ell} instances in the char F = ℓ branch; {g2} G₂ instances check the dihedral formula"));
    r
}
