//! Instance files, end-to-end verification of e(G)·γ(Q_V, ψ) against
//! ε_L(X₊(T) − X₊(T₀), ψ), and the suite runner.

mod matrix;
mod suites;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

pub use matrix::{matrix_instances, MatrixFilter};
pub use suites::{run_suite, Controls, SuiteConfig, SuiteReport, SuiteResult, SUITE_NAMES};

use crate::br2s::Br2sElem;
use crate::epsweil::{eps_virtual, weil_gauss_oracle, weil_index, FourthRoot, GaussOracle};
use crate::error::{Error, Result};
use crate::localfield::{AdditiveCharacter, GroundField, SquareClass};
use crate::quadform::{hw_rel, QuadSpace};
use crate::rootdata::{CartanType, ChevalleyAlgebra, Mutation, PinnedRootDatum};
use crate::torus::{
    deg_on_short_block, descend_quadspace, descend_torus_lattice, dihedral_sw, omega_from_perms, resolve_cocycle_variant,
    sw_bar, sw_of_representation, weyl_from_words, xi, Block, Frame, FrameSpec, TorusDatum,
};

pub const REPORT_SCHEMA: &str = "weilcheck-report/1";
pub const PSI_LEVELS: [i64; 3] = [-1, 0, 1];

fn default_e_sign() -> i8 {
    1
}

/// One verification instance, as read from JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    /// "Qp:5", "Fq((t)):3", "R"
    pub field: String,
    #[serde(rename = "type")]
    pub cartan_type: CartanType,
    #[serde(default)]
    pub frame: FrameSpec,
    /// per frame generator, a permutation of the simple roots (1-based);
    /// empty means φ₀ trivial
    #[serde(default)]
    pub phi0: Vec<Vec<usize>>,
    /// per frame generator, a word in the simple reflections (1-based)
    #[serde(default)]
    pub w: Vec<Vec<usize>>,
    /// a second torus for the relative checks (default: T₀)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_tilde: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub psi_level: i64,
    /// e(G); +1 for quasi-split groups
    #[serde(default = "default_e_sign")]
    pub e_sign: i8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(default)]
    pub intermediates: bool,
    /// selects among the 2-torsion corrections of the cocycle
    #[serde(default)]
    pub variant: u64,
}

impl InstanceSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("instance file: {e}")))
    }

    pub fn key(&self) -> String {
        let words: Vec<String> =
            self.w.iter().map(|w| w.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("")).collect();
        format!("{}/{}/{}/w=[{}]", self.cartan_type, self.field, frame_label(&self.frame), words.join(","))
    }
}

fn frame_label(s: &FrameSpec) -> String {
    if let Some(d) = &s.quadratic {
        format!("quad({d})")
    } else if let Some([a, b]) = &s.biquadratic {
        format!("biquad({a},{b})")
    } else if s.f.is_some() || s.e.is_some() {
        format!("tame(f={},e={})", s.f.unwrap_or(1), s.e.unwrap_or(1))
    } else {
        "trivial".into()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub key: String,
    pub field: String,
    pub cartan_type: String,
    pub frame: String,
    pub psi_level: i64,
    pub e_sign: i8,
    pub precision: u32,
    /// e(G)·γ(Q_V, ψ)
    pub lhs: FourthRoot,
    /// ε_L(X₊(T) − X₊(T₀), ψ)
    pub rhs: FourthRoot,
    pub verdict: Verdict,
    /// Wall(Q_V), from the descended form
    pub wall_qv: Br2sElem,
    /// SW̄(φ) − SW̄(φ₀), from the lattice representation
    pub sw_virtual: Br2sElem,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauss_oracle: Option<GaussOracle>,
    /// verdict at each ψ level in {−1, 0, 1}
    pub psi_levels: BTreeMap<i64, Verdict>,
    /// verdict of a full rerun at twice the precision
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_doubled: Option<Verdict>,
    pub intermediates: BTreeMap<String, bool>,
    pub details: BTreeMap<String, String>,
    pub assumptions: Vec<String>,
}

impl VerificationReport {
    /// Verdict PASS, the same at every ψ level and doubled precision, and
    /// every intermediate identity holds.
    pub fn all_pass(&self) -> bool {
        self.verdict == Verdict::Pass
            && self.psi_levels.values().all(|v| *v == Verdict::Pass)
            && self.precision_doubled.map_or(true, |v| v == Verdict::Pass)
            && self.intermediates.values().all(|&b| b)
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} {}: lhs={} rhs={} wall(Q_V)={} SW={}",
            if self.all_pass() { "PASS" } else { "FAIL" },
            self.key,
            self.lhs,
            self.rhs,
            self.wall_qv,
            self.sw_virtual
        )
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    pub precision: Option<u32>,
    pub psi_level: Option<i64>,
    pub intermediates: bool,
    /// rerun at doubled precision and at every ψ level
    pub robustness: bool,
    pub controls: Controls,
}

type AlgKey = (CartanType, bool);

/// Chevalley algebras are built once per type.
pub fn algebra(t: CartanType, mutation: Mutation) -> Result<Arc<ChevalleyAlgebra>> {
    static CACHE: OnceLock<Mutex<HashMap<AlgKey, Arc<ChevalleyAlgebra>>>> = OnceLock::new();
    let key = (t, mutation.flip_structure_constant);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(a) = cache.lock().unwrap().get(&key) {
        return Ok(a.clone());
    }
    let d = PinnedRootDatum::build_mutated(t, mutation)?;
    let a = Arc::new(ChevalleyAlgebra::build(&d)?);
    cache.lock().unwrap().insert(key, a.clone());
    Ok(a)
}

pub(crate) fn field_with(descriptor: &str, precision: Option<u32>, controls: &Controls) -> Result<GroundField> {
    let mut f = GroundField::parse(descriptor)?;
    if let Some(p) = precision {
        f = f.with_precision(p)?;
    }
    f.hilbert_flip = controls.hilbert_flip.map(|[a, b]| (a, b));
    Ok(f)
}

/// The two tori of an instance: T (from w) and T₀ (φ₀ alone), plus T̃.
struct Tori {
    td: TorusDatum,
    td0: TorusDatum,
    tilde: TorusDatum,
}

fn build_tori(spec: &InstanceSpec, f: GroundField, controls: &Controls) -> Result<Tori> {
    let alg = algebra(spec.cartan_type, Mutation { flip_structure_constant: controls.flip_structure_constant })?;
    let frame = Arc::new(Frame::from_spec(f, &spec.frame)?);
    let ngens = frame.group.gens.len();
    let phi0 = omega_from_perms(&alg, &spec.phi0, ngens)?;
    let words = if spec.w.is_empty() { vec![vec![]; ngens] } else { spec.w.clone() };
    let w = weyl_from_words(&alg, &words)?;
    let id = vec![alg.weyl.identity(); ngens];
    let td = resolve_cocycle_variant(frame.clone(), alg.clone(), &phi0, &w, spec.variant)?;
    let td0 = resolve_cocycle_variant(frame.clone(), alg.clone(), &phi0, &id, 0)?;
    let tilde = match &spec.w_tilde {
        Some(wt) => resolve_cocycle_variant(frame, alg, &phi0, &weyl_from_words(&td.alg, wt)?, 0)?,
        None => td0.clone(),
    };
    Ok(Tori { td, td0, tilde })
}

/// LHS: descend Q_V along the cocycle, then γ from its Wall invariant.
/// Reads only the adjoint action on the root spaces.
pub fn lhs_pipeline(td: &TorusDatum) -> Result<QuadSpace> {
    descend_quadspace(td, Block::V)
}

/// RHS: SW̄(φ) − SW̄(φ₀) from the lattice representation and the frame.
/// Never touches the root spaces or the adjoint action.
pub fn rhs_pipeline(td: &TorusDatum, td0: &TorusDatum) -> Result<Br2sElem> {
    sw_bar(td)?.sub(&sw_bar(td0)?)
}

fn gamma(qv: &QuadSpace, psi: &AdditiveCharacter, e_sign: i8) -> Result<FourthRoot> {
    Ok(weil_index(qv, psi)?.mul(FourthRoot::sign(e_sign)))
}

struct Core {
    qv: QuadSpace,
    wall: Br2sElem,
    sw: Br2sElem,
}

fn run_core(tori: &Tori) -> Result<Core> {
    let qv = lhs_pipeline(&tori.td)?;
    let wall = qv.wall()?;
    let sw = rhs_pipeline(&tori.td, &tori.td0)?;
    Ok(Core { qv, wall, sw })
}

fn is_precision_error(e: &Error) -> bool {
    matches!(e, Error::PrecisionLoss(_) | Error::InsufficientPrecision(_))
}

/// Verifies e(G)·γ(Q_V, ψ) = ε_L(X₊(T) − X₊(T₀), ψ) for one instance.
pub fn verify_main_theorem(spec: &InstanceSpec, opts: &VerifyOptions) -> Result<VerificationReport> {
    let base_prec = opts.precision.or(spec.precision);
    match verify_at(spec, opts, base_prec) {
        Err(e) if is_precision_error(&e) => {
            let f = GroundField::parse(&spec.field)?;
            verify_at(spec, opts, Some(2 * base_prec.unwrap_or(f.precision)))
        }
        r => r,
    }
}

fn verify_at(spec: &InstanceSpec, opts: &VerifyOptions, precision: Option<u32>) -> Result<VerificationReport> {
    let f = field_with(&spec.field, precision, &opts.controls)?;
    let level = opts.psi_level.unwrap_or(spec.psi_level);
    let psi = AdditiveCharacter::new(f, level);
    let tori = build_tori(spec, f, &opts.controls)?;
    let core = run_core(&tori)?;
    let lhs = gamma(&core.qv, &psi, spec.e_sign)?;
    let rhs = eps_virtual(&core.sw, &psi)?;
    let mut details = BTreeMap::new();
    details.insert("cocycle_torsion".into(), format!("{:?}", tori.td.cocycle.iter().map(|n| &n.m).collect::<Vec<_>>()));
    details.insert("frame_order".into(), tori.td.frame.order().to_string());
    let mut report = VerificationReport {
        schema: REPORT_SCHEMA,
        key: spec.key(),
        field: f.descriptor(),
        cartan_type: spec.cartan_type.to_string(),
        frame: tori.td.frame.label.clone(),
        psi_level: level,
        e_sign: spec.e_sign,
        precision: f.precision,
        lhs,
        rhs,
        verdict: Verdict::of(lhs == rhs),
        wall_qv: core.wall,
        sw_virtual: core.sw,
        gauss_oracle: None,
        psi_levels: BTreeMap::new(),
        precision_doubled: None,
        intermediates: BTreeMap::new(),
        details,
        assumptions: vec![
            format!("e(G) = {} taken as input (quasi-split)", spec.e_sign),
            "ε_L normalized by the Gauss sum at v(c) = a(χ) − level(ψ); the degree-0 identity does not depend on it"
                .into(),
        ],
    };
    if opts.robustness {
        for l in PSI_LEVELS {
            let p = AdditiveCharacter::new(f, l);
            let ok = gamma(&core.qv, &p, spec.e_sign)? == eps_virtual(&core.sw, &p)?;
            report.psi_levels.insert(l, Verdict::of(ok));
        }
        let f2 = f.with_precision(2 * f.precision)?;
        let tori2 = build_tori(spec, f2, &opts.controls)?;
        let core2 = run_core(&tori2)?;
        let psi2 = AdditiveCharacter::new(f2, level);
        let ok = gamma(&core2.qv, &psi2, spec.e_sign)? == eps_virtual(&core2.sw, &psi2)?
            && core2.wall == with_field(core.wall, f2)
            && core2.sw == with_field(core.sw, f2);
        report.precision_doubled = Some(Verdict::of(ok));
    }
    if opts.intermediates || spec.intermediates {
        let oracle = weil_gauss_oracle(&core.qv, &psi)?;
        let snapped = FourthRoot::snap(oracle.value()).ok();
        report.intermediates.insert("gauss_oracle".into(), snapped.map(|z| z.mul(FourthRoot::sign(spec.e_sign))) == Some(lhs));
        report.gauss_oracle = Some(oracle);
        intermediates(&tori, &core, &mut report)?;
    }
    Ok(report)
}

fn with_field(x: Br2sElem, f: GroundField) -> Br2sElem {
    Br2sElem { field: f, ..x }
}

/// σ ↦ class(ℓ) where ε″(φ̃(σ)φ(σ)⁻¹) = −1, else 1.
fn chi_tensor_ell(td: &TorusDatum, other: &TorusDatum) -> Result<Vec<SquareClass>> {
    let f = td.field();
    let w = &td.alg.weyl;
    let ell = f.square_class(&f.int(td.alg.datum.ell))?;
    Ok(td
        .phi
        .iter()
        .zip(&other.phi)
        .map(|(a, b)| if w.ext_eps2(*a) * w.ext_eps2(*b) == -1 { ell } else { f.class_one() })
        .collect())
}

fn intermediates(tori: &Tori, core: &Core, report: &mut VerificationReport) -> Result<()> {
    let Tori { td, td0, tilde } = tori;
    let f = td.field();
    let ell = td.alg.datum.ell;
    let im = &mut report.intermediates;
    im.insert("cocycle_adjoint".into(), td.check_adjoint_cocycle());
    im.insert("short_block_det_is_eps2".into(), deg_on_short_block(&td.alg));
    let sw_t = sw_bar(td)?;
    let sw_tilde = sw_bar(tilde)?;
    let sw_0 = sw_bar(td0)?;
    for (name, t, s) in [("T", td, &sw_t), ("T_tilde", tilde, &sw_tilde)] {
        if let Some(ind) = sw_of_representation(t)? {
            im.insert(format!("sw_character_formula_{name}"), ind == *s);
        }
    }
    if td.alg.datum.ctype == CartanType::G2 {
        let dihedral = dihedral_sw(td)?.sub(&dihedral_sw(td0)?)?;
        im.insert("g2_dihedral".into(), dihedral == core.sw);
    }
    if td.ell_invertible() {
        let q0 = lhs_pipeline(td0)?;
        im.insert("wall_equals_sw".into(), core.wall.sub(&q0.wall()?)? == sw_t.sub(&sw_0)?);
        let qv_tilde = lhs_pipeline(tilde)?;
        im.insert("sw_goal".into(), hw_rel(&core.qv, &qv_tilde)? == sw_tilde.sub(&sw_t)?);
        let qt = descend_quadspace(td, Block::T)?;
        let qt_tilde = descend_quadspace(tilde, Block::T)?;
        im.insert("torus_block_matches_lattice".into(), hw_rel(&qt, &descend_torus_lattice(td)?)?.is_zero());
        let xi_chi = xi(&td.frame, &chi_tensor_ell(td, tilde)?)?;
        report.details.insert("xi_chi_ell".into(), xi_chi.to_string());
        im.insert("hw_torus_pair".into(), hw_rel(&qt, &qt_tilde)? == sw_t.sub(&sw_tilde)?.add(&xi_chi)?);
        let ellf = f.int(ell);
        if ell != 1 {
            let vs = descend_quadspace(td, Block::VShort)?;
            let vs_tilde = descend_quadspace(tilde, Block::VShort)?;
            let scaled = hw_rel(&vs.scale(&ellf)?, &vs_tilde.scale(&ellf)?)?;
            im.insert("hw_short_scaled".into(), scaled == hw_rel(&vs, &vs_tilde)?.add(&xi_chi)?);
        }
        let qg = descend_quadspace(td, Block::G)?;
        let mut parts = qt.wall()?.add(&descend_quadspace(td, Block::VLong)?.wall()?)?;
        if ell != 1 {
            parts = parts.add(&descend_quadspace(td, Block::VShort)?.scale(&ellf)?.wall()?)?;
        }
        im.insert("orthogonal_decomposition".into(), qg.wall()? == parts);
    } else {
        // char F = ℓ: the torus part is replaced by the reduced forms
        let (e, _, _) = td.epsilon_characters()?;
        im.insert("det_character".into(), sw_t.chi == e);
        im.insert("modular_equals_dihedral".into(), sw_t == dihedral_sw(td)?);
        let q0 = lhs_pipeline(td0)?;
        im.insert("wall_equals_sw".into(), core.wall.sub(&q0.wall()?)? == sw_t.sub(&sw_0)?);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(json: &str) -> InstanceSpec {
        InstanceSpec::from_json(json).unwrap()
    }

    fn full() -> VerifyOptions {
        VerifyOptions { intermediates: true, robustness: true, ..Default::default() }
    }

    #[test]
    fn split_torus_is_trivial() {
        let r = verify_main_theorem(&spec(r#"{"field":"Qp:5","type":"B2"}"#), &full()).unwrap();
        assert_eq!((r.lhs, r.rhs), (FourthRoot::ONE, FourthRoot::ONE));
        assert!(r.all_pass(), "{r:#?}");
    }

    #[test]
    fn a1_ramified_torus() {
        let s = spec(r#"{"field":"Qp:5","type":"A1","frame":{"quadratic":"5"},"w":[[1]]}"#);
        let r = verify_main_theorem(&s, &full()).unwrap();
        assert!(r.all_pass(), "{r:#?}");
    }

    #[test]
    fn g2_char_three_branch() {
        let s = spec(r#"{"field":"Fq((t)):3","type":"G2","frame":{"quadratic":"2"},"w":[[1]]}"#);
        let r = verify_main_theorem(&s, &full()).unwrap();
        assert!(r.intermediates.contains_key("modular_equals_dihedral"));
        assert!(r.all_pass(), "{r:#?}");
    }

    #[test]
    fn report_is_deterministic() {
        let s = spec(r#"{"field":"Qp:3","type":"C2","frame":{"quadratic":"3"},"w":[[2]]}"#);
        let a = serde_json::to_string(&verify_main_theorem(&s, &full()).unwrap()).unwrap();
        let b = serde_json::to_string(&verify_main_theorem(&s, &full()).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_words_are_rejected() {
        let s = spec(r#"{"field":"Qp:5","type":"A1","frame":{"quadratic":"5"},"w":[[2]]}"#);
        assert!(matches!(verify_main_theorem(&s, &VerifyOptions::default()), Err(Error::Invalid(_))));
    }
}
