//! Weil indices by brute-force Gauss sums: the phase of
//! Σ_{x ∈ (O/π^k)^n} ψ(π^{−k} Q(x)) for large even k.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::localfield::{AdditiveCharacter, FieldElem, FieldKind, GroundField};
use crate::quadform::QuadSpace;

/// Largest number of terms summed directly; bigger forms are diagonalized
/// and summed one variable at a time.
pub const DIRECT_LIMIT: u64 = 1 << 23;

const PHASE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OracleMethod {
    /// one sum over all of (O/π^k)^n
    Direct,
    /// product of one-variable sums over an orthogonal basis
    Factorized,
    /// e^{iπ(p−q)/4} from the signature (R only)
    Signature,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GaussOracle {
    pub re: f64,
    pub im: f64,
    /// truncation level (largest used when factorized)
    pub k: u32,
    pub method: OracleMethod,
}

impl GaussOracle {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// O/π^k with elements packed into a u64: integers mod p^k, or
/// polynomials of degree < k over F_q in base q.
#[derive(Clone, Copy, Debug)]
struct Residues {
    q: u64,
    k: u32,
    laurent: bool,
    size: u64,
}

impl Residues {
    fn new(f: &GroundField, k: u32) -> Result<Self> {
        let (q, laurent) = match f.kind {
            FieldKind::Padic(p) => (p, false),
            FieldKind::Laurent(q) => (q, true),
            _ => return Err(Error::FieldMismatch),
        };
        let size = q.checked_pow(k).ok_or_else(|| Error::Invalid("residue ring too large".into()))?;
        Ok(Residues { q, k, laurent, size })
    }

    fn digits(&self, mut a: u64) -> [u64; 24] {
        let mut d = [0u64; 24];
        for x in d.iter_mut().take(self.k as usize) {
            *x = a % self.q;
            a /= self.q;
        }
        d
    }

    fn pack(&self, d: &[u64]) -> u64 {
        d.iter().take(self.k as usize).rev().fold(0, |acc, &x| acc * self.q + x)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        if !self.laurent {
            return (a + b) % self.size;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = (0..self.k as usize).map(|i| (da[i] + db[i]) % self.q).collect();
        self.pack(&s)
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        if !self.laurent {
            return ((a as u128 * b as u128) % self.size as u128) as u64;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let k = self.k as usize;
        let mut s = vec![0u64; k];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k - i {
                s[i + j] = (s[i + j] + da[i] * db[j]) % self.q;
            }
        }
        self.pack(&s)
    }

    /// ψ_std(π^{−k} a) as a fraction of a turn.
    fn turn(&self, a: u64) -> f64 {
        if self.laurent {
            self.digits(a)[self.k as usize - 1] as f64 / self.q as f64
        } else {
            a as f64 / self.size as f64
        }
    }

    /// Residue of an integral element.
    fn residue(&self, x: &FieldElem) -> Result<u64> {
        let FieldElem::Local(l) = x else { return Err(Error::FieldMismatch) };
        let k = self.k as i64;
        if l.prec == 0 {
            return if l.val >= k {
                Ok(0)
            } else {
                Err(Error::InsufficientPrecision("zero known to too low a power of π".into()))
            };
        }
        if l.val < 0 {
            return Err(Error::NotIntegral);
        }
        if l.val >= k {
            return Ok(0);
        }
        let need = (k - l.val) as u32;
        if l.prec < need {
            return Err(Error::InsufficientPrecision(format!("need {need} digits for a residue mod π^{k}")));
        }
        if self.laurent {
            let c = l.unit_coeffs().expect("nonzero");
            let mut d = vec![0u64; self.k as usize];
            for i in 0..need as usize {
                d[l.val as usize + i] = c[i];
            }
            Ok(self.pack(&d))
        } else {
            let u = l.unit_int().expect("nonzero");
            let m = BigInt::from(self.size);
            let r = (u * BigInt::from(self.q).pow(l.val as u32)).mod_floor(&m);
            Ok(r.to_u64().unwrap())
        }
    }
}

/// Σ_x ψ(π^{−k}Q(x)) with Q(x) = Σ a_i x_i² + Σ_{i<j} b_ij x_i x_j.
fn direct_sum(r: &Residues, a: &[u64], b: &[Vec<u64>]) -> Complex64 {
    let n = a.len();
    let total = r.size.pow(n as u32);
    let chunk = r.size.pow(n.saturating_sub(1) as u32);
    (0..r.size)
        .into_par_iter()
        .map(|x0| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut x = vec![0u64; n];
            for rest in 0..chunk {
                x[0] = x0;
                let mut t = rest;
                for xi in x.iter_mut().skip(1) {
                    *xi = t % r.size;
                    t /= r.size;
                }
                let mut q = 0u64;
                for i in 0..n {
                    if x[i] == 0 {
                        continue;
                    }
                    q = r.add(q, r.mul(a[i], r.mul(x[i], x[i])));
                    for j in i + 1..n {
                        if x[j] != 0 && b[i][j] != 0 {
                            q = r.add(q, r.mul(b[i][j], r.mul(x[i], x[j])));
                        }
                    }
                }
                acc += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r.turn(q));
            }
            acc
        })
        .reduce(|| Complex64::new(0.0, 0.0), |s, t| s + t)
        * (1.0 / (total as f64).sqrt())
}

fn valuation(x: &FieldElem) -> Option<i64> {
    x.valuation()
}

/// Scales by an even power of π so that B and the values Q(e_i) are integral.
fn make_integral(q: &QuadSpace) -> Result<QuadSpace> {
    let f = q.field;
    let n = q.dim();
    let mut minv = i64::MAX;
    for i in 0..n {
        for j in 0..n {
            let x = if i == j { q.gram[i][i].checked_div(&f.int(2))? } else { q.gram[i][j].clone() };
            if let Some(v) = valuation(&x) {
                minv = minv.min(v);
            }
        }
    }
    if minv >= 0 {
        return Ok(q.clone());
    }
    let s = (-minv + 1) / 2;
    q.scale(&f.pi_pow(2 * s)?)
}

fn min_level(f: &GroundField, q: &QuadSpace) -> Result<u32> {
    let det = linalg::det(f, &q.gram)?;
    let vdet = valuation(&det).ok_or(Error::DegenerateForm)?;
    let v4 = if f.kind == FieldKind::Padic(2) { 2 } else { 0 };
    let k = (vdet + v4 + 2).max(2) as u32;
    Ok(k + k % 2)
}

/// Stabilized phase of the direct sum for an integral form; compares
/// truncation levels k and k + 2, phase and magnitude.
fn stabilized_phase(f: &GroundField, q: &QuadSpace) -> Result<(Complex64, u32)> {
    let n = q.dim();
    let k = min_level(f, q)?;
    let mut vals = Vec::new();
    for kk in [k, k + 2] {
        let r = Residues::new(f, kk)?;
        let half = f.frac(1, 2)?;
        let a: Vec<u64> = (0..n).map(|i| r.residue(&(&q.gram[i][i] * &half))).collect::<Result<_>>()?;
        let b: Vec<Vec<u64>> = (0..n)
            .map(|i| (0..n).map(|j| if j > i { r.residue(&q.gram[i][j]) } else { Ok(0) }).collect())
            .collect::<Result<_>>()?;
        vals.push(direct_sum(&r, &a, &b));
    }
    let (s0, s1) = (vals[0], vals[1]);
    let ph0 = s0 / s0.norm();
    let ph1 = s1 / s1.norm();
    // normalized by q^{nk/2}, the magnitude is constant once stable
    let ratio = s1.norm() / s0.norm();
    if s0.norm() < 1e-9 || (ph0 - ph1).norm() > PHASE_TOL || (ratio - 1.0).abs() > PHASE_TOL {
        return Err(Error::NotStabilized((ph0.re, ph0.im), (ph1.re, ph1.im)));
    }
    Ok((ph1, k + 2))
}

/// Weil index γ(Q, ψ) from Gauss sums, independent of any invariant
/// computation. R uses the signature rule; C gives 1.
pub fn weil_gauss_oracle(q: &QuadSpace, psi: &AdditiveCharacter) -> Result<GaussOracle> {
    let f = q.field;
    if psi.field.kind != f.kind {
        return Err(Error::FieldMismatch);
    }
    let n = q.dim();
    match f.kind {
        FieldKind::Complex => return Ok(GaussOracle { re: 1.0, im: 0.0, k: 0, method: OracleMethod::Signature }),
        FieldKind::Real => {
            let (vals, _) = q.orthogonal_basis()?;
            let sig: i64 = vals.iter().map(|v| i64::from(v.sign().unwrap_or(0))).sum();
            let z = Complex64::from_polar(
                1.0,
                std::f64::consts::PI * f64::from(psi.real_frequency()) * sig as f64 / 4.0,
            );
            return Ok(GaussOracle { re: z.re, im: z.im, k: 0, method: OracleMethod::Signature });
        }
        _ => {}
    }
    if n == 0 {
        return Ok(GaussOracle { re: 1.0, im: 0.0, k: 0, method: OracleMethod::Direct });
    }
    // γ(Q, ψ_n) = γ(π^{−n}Q, ψ_std) and π^{−n} ≡ π^{n mod 2} up to squares
    let shifted = q.scale(&f.pi_pow(psi.level.rem_euclid(2))?)?;
    let integral = make_integral(&shifted)?;
    let k = min_level(&f, &integral)?;
    let r = Residues::new(&f, 1)?;
    let terms = (r.size as f64).powf((n as u32 * (k + 2)) as f64);
    if terms <= DIRECT_LIMIT as f64 {
        let (z, k) = stabilized_phase(&f, &integral)?;
        return Ok(GaussOracle { re: z.re, im: z.im, k, method: OracleMethod::Direct });
    }
    let (vals, _) = integral.orthogonal_basis()?;
    let mut z = Complex64::new(1.0, 0.0);
    let mut kmax = 0;
    for a in vals {
        let v = valuation(&a).ok_or(Error::DegenerateForm)?;
        let a = &a * &f.pi_pow(-2 * Integer::div_floor(&v, &2))?;
        let one = QuadSpace::diagonal(f, &[a]);
        let (ph, k) = stabilized_phase(&f, &one)?;
        z *= ph;
        kmax = kmax.max(k);
    }
    Ok(GaussOracle { re: z.re, im: z.im, k: kmax, method: OracleMethod::Factorized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epsweil::{eps_quadratic_complex, weil_index, FourthRoot};
    use crate::localfield::QuadExt;

    #[test]
    fn unimodular_square_is_trivial() {
        let f = GroundField::padic(5).unwrap();
        let q = QuadSpace::diagonal_ints(f, &[1]);
        let o = weil_gauss_oracle(&q, &AdditiveCharacter::standard(f)).unwrap();
        assert!((o.value() - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn hyperbolic_over_q3() {
        let f = GroundField::padic(3).unwrap();
        for lvl in -1..=1 {
            let o = weil_gauss_oracle(&QuadSpace::hyperbolic(f), &AdditiveCharacter::new(f, lvl)).unwrap();
            assert_eq!(FourthRoot::snap(o.value()).unwrap(), FourthRoot::ONE);
        }
    }

    #[test]
    fn norm_forms_match_gauss_epsilon() {
        for f in [GroundField::padic(3).unwrap(), GroundField::padic(2).unwrap(), GroundField::laurent(3).unwrap()] {
            for e in QuadExt::all(f) {
                for lvl in -1..=1 {
                    let psi = AdditiveCharacter::new(f, lvl);
                    let g = weil_gauss_oracle(&QuadSpace::norm_form(&e), &psi).unwrap();
                    let eps = eps_quadratic_complex(e.a, &psi).unwrap();
                    assert!((g.value() - eps).norm() < 1e-6, "{f} {} level {lvl}: {:?} vs {eps}", f.class_label(e.a), g);
                }
            }
        }
    }

    #[test]
    fn quaternion_norm_form_is_minus_one() {
        let f = GroundField::padic(3).unwrap();
        // (−1, 3) is nonsplit over Q3: norm form <1, 1, −3, −3>
        let q = QuadSpace::diagonal_ints(f, &[1, 1, -3, -3]);
        let psi = AdditiveCharacter::standard(f);
        let o = weil_gauss_oracle(&q, &psi).unwrap();
        assert_eq!(FourthRoot::snap(o.value()).unwrap(), FourthRoot::MINUS_ONE);
        assert_eq!(weil_index(&q, &psi).unwrap(), FourthRoot::MINUS_ONE);
    }

    #[test]
    fn factorized_agrees_with_direct() {
        let f = GroundField::padic(3).unwrap();
        let q = QuadSpace::diagonal_ints(f, &[1, 3]);
        let psi = AdditiveCharacter::standard(f);
        let d = weil_gauss_oracle(&q, &psi).unwrap();
        assert_eq!(d.method, OracleMethod::Direct);
        let one = |a: i64| weil_gauss_oracle(&QuadSpace::diagonal_ints(f, &[a]), &psi).unwrap().value();
        assert!((d.value() - one(1) * one(3)).norm() < 1e-6);
    }
}
