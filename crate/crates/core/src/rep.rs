//! Finite-dimensional lowest-weight representations of sl_q(2), their
//! classical (q = 1) counterparts, the Casimir and the XXZ Lax operator.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclic::CyclicRepSpec;
use crate::error::{Error, Result};
use crate::linalg::{comm, diag, kron, max_abs, rel_residual, zeros, CMat};
use crate::qcore::{re, DeformationParameter};

/// Spin `ℓ` with `2ℓ` a nonnegative integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpinLabel {
    twice: u32,
}

impl SpinLabel {
    pub const HALF: SpinLabel = SpinLabel { twice: 1 };
    pub const ONE: SpinLabel = SpinLabel { twice: 2 };

    pub fn from_twice(twice: u32) -> Self {
        Self { twice }
    }

    pub fn from_f64(ell: f64) -> Result<Self> {
        let t = 2.0 * ell;
        if !t.is_finite() || t < -1e-12 || (t - t.round()).abs() > 1e-9 {
            return Err(Error::BadSpin(ell.to_string()));
        }
        Ok(Self { twice: t.round() as u32 })
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.twice as usize + 1
    }
}

impl fmt::Display for SpinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_multiple_of(2) {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for SpinLabel {
    type Err = Error;

    /// Accepts `1/2`, `3/2`, `1`, `0.5`, ...
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::BadSpin(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0.0 {
                return Err(bad());
            }
            return Self::from_f64(num / den);
        }
        Self::from_f64(s.parse().map_err(|_| bad())?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    /// `{x^k}`, ascending `k`.
    Monomial,
    /// Diagonal rescaling of the monomial basis with symmetric raising/lowering entries.
    Orthonormal,
    /// Cyclic basis `{θ_k}` at a root of unity.
    Theta,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RepSpec {
    LowestWeight(SpinLabel),
    Cyclic(CyclicRepSpec),
}

impl RepSpec {
    pub fn dim(&self) -> usize {
        match self {
            RepSpec::LowestWeight(s) => s.dim(),
            RepSpec::Cyclic(c) => c.order() as usize,
        }
    }
}

/// `S⁺`, `S⁻` and the diagonal family `q^{aS}` on a concrete basis.
///
/// `q^{aS}` is stored through the eigenvalues of `S` (`weights`), so it is
/// single-valued on the branch carried by `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTriple {
    pub sp: CMat,
    pub sm: CMat,
    weights: Vec<Complex64>,
    q: DeformationParameter,
    pub basis: Basis,
}

/// Maximal relative residuals of the defining relations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraResiduals {
    /// `q^S S⁺ q^{-S} = q S⁺`
    pub raise: f64,
    /// `q^S S⁻ q^{-S} = q^{-1} S⁻`
    pub lower: f64,
    /// `[S⁺, S⁻] = [2S]_q`
    pub commutator: f64,
    /// `q^{aS} q^{bS} = q^{(a+b)S}` at a few exponents
    pub group_law: f64,
}

impl AlgebraResiduals {
    pub fn max(&self) -> f64 {
        self.raise.max(self.lower).max(self.commutator).max(self.group_law)
    }
}

impl OperatorTriple {
    pub fn new(sp: CMat, sm: CMat, weights: Vec<Complex64>, q: DeformationParameter, basis: Basis) -> Result<Self> {
        let d = weights.len();
        if sp.shape() != (d, d) || sm.shape() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "S+ {:?}, S- {:?}, {} weights",
                sp.shape(),
                sm.shape(),
                d
            )));
        }
        Ok(Self { sp, sm, weights, q, basis })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn q(&self) -> &DeformationParameter {
        &self.q
    }

    /// Eigenvalues of `S`.
    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// `q^{aS}`.
    pub fn q_pow_s(&self, a: Complex64) -> CMat {
        let d: Vec<Complex64> = self.weights.iter().map(|w| self.q.pow(a * w)).collect();
        diag(&d)
    }

    pub fn q_pow_sf(&self, a: f64) -> CMat {
        self.q_pow_s(re(a))
    }

    /// `[S + shift]_q` as a diagonal matrix.
    pub fn bracket_s(&self, shift: f64) -> CMat {
        let d: Vec<Complex64> = self.weights.iter().map(|w| self.q.bracket(w + shift)).collect();
        diag(&d)
    }

    pub fn algebra_residuals(&self) -> AlgebraResiduals {
        let q = self.q.value();
        let k = self.q_pow_sf(1.0);
        let ki = self.q_pow_sf(-1.0);
        let raise = rel_residual(&(&k * &self.sp * &ki), &(&self.sp * q));
        let lower = rel_residual(&(&k * &self.sm * &ki), &(&self.sm / q));
        let rhs = (self.q_pow_sf(2.0) - self.q_pow_sf(-2.0)) / self.q.denom();
        let commutator = rel_residual(&comm(&self.sp, &self.sm), &rhs);
        let mut group_law: f64 = 0.0;
        for (a, b) in [(0.5, 0.5), (1.0, -1.0), (0.3, 1.7), (-2.0, 0.5)] {
            let lhs = self.q_pow_sf(a) * self.q_pow_sf(b);
            group_law = group_law.max(rel_residual(&lhs, &self.q_pow_sf(a + b)));
        }
        AlgebraResiduals { raise, lower, commutator, group_law }
    }

    /// Conjugate every generator by `diag(c)`: `M ↦ C⁻¹ M C`.
    pub fn rescaled(&self, c: &[Complex64], basis: Basis) -> Self {
        let ci: Vec<Complex64> = c.iter().map(|x| 1.0 / x).collect();
        let (cm, cim) = (diag(c), diag(&ci));
        Self {
            sp: &cim * &self.sp * &cm,
            sm: &cim * &self.sm * &cm,
            weights: self.weights.clone(),
            q: self.q,
            basis,
        }
    }
}

/// Monomial-to-orthonormal scaling `c_k` with `c₀ = 1`,
/// `c_{k+1} = c_k √([2ℓ-k]/[k+1])`; orthonormal generators are `C⁻¹ M C`.
pub fn orthonormal_scaling(spin: SpinLabel, q: &DeformationParameter) -> Vec<Complex64> {
    let two_l = spin.twice() as f64;
    let mut c = vec![re(1.0)];
    for k in 0..spin.twice() as usize {
        let kf = k as f64;
        let next = c[k] * (q.bracketf(two_l - kf) / q.bracketf(kf + 1.0)).sqrt();
        c.push(next);
    }
    c
}

/// Spin-`ℓ` representation: `S⁻x^k = [k]x^{k-1}`, `S⁺x^k = [2ℓ-k]x^{k+1}`,
/// `q^{aS}x^k = q^{a(k-ℓ)}x^k`.
pub fn build_spin_rep(spin: SpinLabel, q: &DeformationParameter, basis: Basis) -> Result<OperatorTriple> {
    let d = spin.dim();
    let two_l = spin.twice() as f64;
    let mut sp = zeros(d, d);
    let mut sm = zeros(d, d);
    for k in 0..d {
        let kf = k as f64;
        if k + 1 < d {
            sp[(k + 1, k)] = q.bracketf(two_l - kf);
        }
        if k > 0 {
            sm[(k - 1, k)] = q.bracketf(kf);
        }
    }
    let weights = (0..d).map(|k| re(k as f64 - spin.value())).collect();
    let mono = OperatorTriple::new(sp, sm, weights, *q, Basis::Monomial)?;
    match basis {
        Basis::Monomial => Ok(mono),
        Basis::Orthonormal => Ok(mono.rescaled(&orthonormal_scaling(spin, q), Basis::Orthonormal)),
        Basis::Theta => Err(Error::InvalidParameter("theta basis requires a cyclic representation".into())),
    }
}

/// Lowest-weight representation with complex `ℓ`, truncated to `cutoff`
/// basis vectors. The last column of `S⁺` is dropped, so the commutator
/// relation fails on the top vector unless `2ℓ + 1 = cutoff`.
pub fn build_truncated_rep(ell: Complex64, q: &DeformationParameter, cutoff: usize) -> Result<OperatorTriple> {
    if cutoff == 0 {
        return Err(Error::InvalidParameter("cutoff must be positive".into()));
    }
    let mut sp = zeros(cutoff, cutoff);
    let mut sm = zeros(cutoff, cutoff);
    for k in 0..cutoff {
        let kf = k as f64;
        if k + 1 < cutoff {
            sp[(k + 1, k)] = q.bracket(2.0 * ell - kf);
        }
        if k > 0 {
            sm[(k - 1, k)] = q.bracketf(kf);
        }
    }
    let weights = (0..cutoff).map(|k| k as f64 - ell).collect();
    OperatorTriple::new(sp, sm, weights, *q, Basis::Monomial)
}

/// `C = S⁺S⁻ + [S]_q[S-1]_q`.
pub fn casimir(rep: &OperatorTriple) -> CMat {
    &rep.sp * &rep.sm + rep.bracket_s(0.0) * rep.bracket_s(-1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CasimirReport {
    pub matrix: CMat,
    /// `[ℓ]_q[ℓ+1]_q`
    pub expected: Complex64,
    /// `max|C - expected·I|`, relative to `max(|expected|, 1)`.
    pub max_deviation: f64,
}

pub fn casimir_report(rep: &OperatorTriple, ell: Complex64) -> CasimirReport {
    let matrix = casimir(rep);
    let q = rep.q();
    let expected = q.bracket(ell) * q.bracket(ell + 1.0);
    let d = rep.dim();
    let dev = max_abs(&(&matrix - CMat::identity(d, d) * expected));
    CasimirReport { matrix, expected, max_deviation: dev / expected.norm().max(1.0) }
}

/// XXZ Lax operator, auxiliary space major (index `a·d + i`):
/// `[[q^{u+S} - q^{-u-S}, (q-q⁻¹)S⁻], [(q-q⁻¹)S⁺, q^{u-S} - q^{-u+S}]]`.
pub fn build_lax(rep: &OperatorTriple, u: Complex64) -> CMat {
    let q = rep.q();
    let d = rep.dim();
    let (qu, qmu) = (q.pow(u), q.pow(-u));
    let (k, ki) = (rep.q_pow_sf(1.0), rep.q_pow_sf(-1.0));
    let w = q.denom();
    let mut l = zeros(2 * d, 2 * d);
    l.view_mut((0, 0), (d, d)).copy_from(&(&k * qu - &ki * qmu));
    l.view_mut((0, d), (d, d)).copy_from(&(&rep.sm * w));
    l.view_mut((d, 0), (d, d)).copy_from(&(&rep.sp * w));
    l.view_mut((d, d), (d, d)).copy_from(&(&ki * qu - &k * qmu));
    l
}

/// Undeformed (q = 1) spin representation for the rational XXX chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalRep {
    pub sp: CMat,
    pub sm: CMat,
    pub sz: CMat,
}

impl ClassicalRep {
    pub fn dim(&self) -> usize {
        self.sz.nrows()
    }

    /// `[S⁺,S⁻] = 2S`, `[S, S^±] = ±S^±`.
    pub fn algebra_residual(&self) -> f64 {
        let a = rel_residual(&comm(&self.sp, &self.sm), &(&self.sz * re(2.0)));
        let b = rel_residual(&comm(&self.sz, &self.sp), &self.sp);
        let c = rel_residual(&comm(&self.sz, &self.sm), &(-&self.sm));
        a.max(b).max(c)
    }
}

/// `S⁻x^k = k x^{k-1}`, `S⁺x^k = (2ℓ-k)x^{k+1}`, `S x^k = (k-ℓ)x^k`.
pub fn build_classical_rep(spin: SpinLabel) -> ClassicalRep {
    let d = spin.dim();
    let two_l = spin.twice() as f64;
    let mut sp = zeros(d, d);
    let mut sm = zeros(d, d);
    for k in 0..d {
        if k + 1 < d {
            sp[(k + 1, k)] = re(two_l - k as f64);
        }
        if k > 0 {
            sm[(k - 1, k)] = re(k as f64);
        }
    }
    let w: Vec<Complex64> = (0..d).map(|k| re(k as f64 - spin.value())).collect();
    ClassicalRep { sp, sm, sz: diag(&w) }
}

/// XXX Lax operator `[[u+S, S⁻], [S⁺, u-S]]`, auxiliary space major.
pub fn build_classical_lax(rep: &ClassicalRep, u: Complex64) -> CMat {
    let d = rep.dim();
    let id = CMat::identity(d, d);
    let mut l = zeros(2 * d, 2 * d);
    l.view_mut((0, 0), (d, d)).copy_from(&(&id * u + &rep.sz));
    l.view_mut((0, d), (d, d)).copy_from(&rep.sm);
    l.view_mut((d, 0), (d, d)).copy_from(&rep.sp);
    l.view_mut((d, d), (d, d)).copy_from(&(&id * u - &rep.sz));
    l
}

/// `(S^±)^{2ℓ+1}` maximal entries; both vanish for finite spins.
pub fn nilpotency_defect(rep: &OperatorTriple) -> f64 {
    let n = rep.dim() as u32;
    let p = crate::linalg::matpow(&rep.sp, n);
    let m = crate::linalg::matpow(&rep.sm, n);
    max_abs(&p).max(max_abs(&m))
}

/// Tensor product generators of two classical reps (untwisted coproduct).
pub fn classical_tensor(a: &ClassicalRep, b: &ClassicalRep) -> ClassicalRep {
    let ia = CMat::identity(a.dim(), a.dim());
    let ib = CMat::identity(b.dim(), b.dim());
    ClassicalRep {
        sp: kron(&a.sp, &ib) + kron(&ia, &b.sp),
        sm: kron(&a.sm, &ib) + kron(&ia, &b.sm),
        sz: kron(&a.sz, &ib) + kron(&ia, &b.sz),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{c, Sampler};
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn spin_label_parsing() {
        assert_eq!("1/2".parse::<SpinLabel>().unwrap(), SpinLabel::HALF);
        assert_eq!("1.5".parse::<SpinLabel>().unwrap().twice(), 3);
        assert_eq!("2".parse::<SpinLabel>().unwrap().dim(), 5);
        assert!("1/3".parse::<SpinLabel>().is_err());
        assert!("-1/2".parse::<SpinLabel>().is_err());
        assert!("x".parse::<SpinLabel>().is_err());
        assert_eq!(SpinLabel::from_twice(3).to_string(), "3/2");
        assert_eq!(SpinLabel::ONE.to_string(), "1");
    }

    #[test]
    fn spin_half_matrices() {
        let q = DeformationParameter::generic(c(0.3, 0.4)).unwrap();
        for basis in [Basis::Monomial, Basis::Orthonormal] {
            let r = build_spin_rep(SpinLabel::HALF, &q, basis).unwrap();
            assert!(close(r.sp[(1, 0)], re(1.0)));
            assert!(close(r.sm[(0, 1)], re(1.0)));
            assert!(close(r.sp[(0, 1)], re(0.0)));
            let k = r.q_pow_sf(1.0);
            assert!(close(k[(0, 0)], q.powf(-0.5)));
            assert!(close(k[(1, 1)], q.powf(0.5)));
        }
    }

    #[test]
    fn spin_one_orthonormal_entries() {
        let q = DeformationParameter::generic(c(1.2, 0.3)).unwrap();
        let r = build_spin_rep(SpinLabel::ONE, &q, Basis::Orthonormal).unwrap();
        let s2 = (q.value() + 1.0 / q.value()).sqrt();
        for k in 0..2 {
            assert!(close(r.sp[(k + 1, k)], s2));
            assert!(close(r.sm[(k, k + 1)], s2));
        }
    }

    #[test]
    fn spin_zero_is_trivial() {
        let q = DeformationParameter::generic(c(0.8, 0.1)).unwrap();
        let r = build_spin_rep(SpinLabel::from_twice(0), &q, Basis::Monomial).unwrap();
        assert_eq!(r.dim(), 1);
        assert_eq!(r.sp[(0, 0)], re(0.0));
        assert!(close(r.q_pow_sf(1.0)[(0, 0)], re(1.0)));
        assert!(max_abs(&casimir(&r)) < 1e-14);
    }

    #[test]
    fn casimir_is_scalar() {
        let mut s = Sampler::new(3);
        for twice in 0..6 {
            let spin = SpinLabel::from_twice(twice);
            for _ in 0..5 {
                let q = s.generic_q();
                for basis in [Basis::Monomial, Basis::Orthonormal] {
                    let r = build_spin_rep(spin, &q, basis).unwrap();
                    let rep = casimir_report(&r, re(spin.value()));
                    assert!(rep.max_deviation < 1e-10, "{spin} {rep:?}");
                }
            }
        }
    }

    #[test]
    fn monomial_and_orthonormal_casimirs_agree() {
        let q = DeformationParameter::generic(c(0.7, -0.5)).unwrap();
        let a = build_spin_rep(SpinLabel::from_twice(3), &q, Basis::Monomial).unwrap();
        let b = build_spin_rep(SpinLabel::from_twice(3), &q, Basis::Orthonormal).unwrap();
        assert!(rel_residual(&casimir(&a), &casimir(&b)) < 1e-12);
    }

    #[test]
    fn nilpotent() {
        let q = DeformationParameter::generic(c(0.9, 0.6)).unwrap();
        for twice in 0..5 {
            let r = build_spin_rep(SpinLabel::from_twice(twice), &q, Basis::Monomial).unwrap();
            assert_eq!(nilpotency_defect(&r), 0.0);
        }
    }

    #[test]
    fn lax_spin_half_entries() {
        let q = DeformationParameter::generic(c(0.6, 0.9)).unwrap();
        let u = c(0.3, -0.2);
        let r = build_spin_rep(SpinLabel::HALF, &q, Basis::Monomial).unwrap();
        let l = build_lax(&r, u);
        // With w = u - 1/2 the entries are a(w), b(w), c of the fundamental R.
        let w = u - 0.5;
        let a = q.pow(w + 1.0) - q.pow(-w - 1.0);
        let b = q.pow(w) - q.pow(-w);
        let cc = q.denom();
        assert!(close(l[(1, 1)], a) && close(l[(2, 2)], a));
        assert!(close(l[(0, 0)], b) && close(l[(3, 3)], b));
        assert!(close(l[(0, 3)], cc) && close(l[(3, 0)], cc));
        assert!(close(l[(1, 2)], re(0.0)) && close(l[(2, 1)], re(0.0)));
    }

    #[test]
    fn lax_at_zero_spectral_parameter() {
        let q = DeformationParameter::generic(c(1.3, 0.2)).unwrap();
        let r = build_spin_rep(SpinLabel::HALF, &q, Basis::Monomial).unwrap();
        let l = build_lax(&r, re(0.0));
        let (k, ki) = (r.q_pow_sf(1.0), r.q_pow_sf(-1.0));
        assert!(rel_residual(&l.view((0, 0), (2, 2)).into_owned(), &(&k - &ki)) < 1e-14);
        assert!(rel_residual(&l.view((2, 2), (2, 2)).into_owned(), &(&ki - &k)) < 1e-14);
    }

    #[test]
    fn classical_rep_relations() {
        for twice in 0..6 {
            let r = build_classical_rep(SpinLabel::from_twice(twice));
            assert!(r.algebra_residual() < 1e-15);
        }
    }

    #[test]
    fn truncated_rep_matches_finite_when_cutoff_fits() {
        let q = DeformationParameter::generic(c(0.8, 0.5)).unwrap();
        let t = build_truncated_rep(re(1.5), &q, 4).unwrap();
        let f = build_spin_rep(SpinLabel::from_twice(3), &q, Basis::Monomial).unwrap();
        assert!(rel_residual(&t.sp, &f.sp) < 1e-15);
        assert!(t.algebra_residuals().max() < 1e-10);
        let g = build_truncated_rep(c(0.3, 0.2), &q, 4).unwrap();
        assert!(g.algebra_residuals().commutator > 1e-3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn algebra_relations_hold(twice in 0u32..7, r in 0.7f64..1.4, th in 0.25f64..2.9, basis in prop::bool::ANY) {
            let q = DeformationParameter::generic(Complex64::from_polar(r, th)).unwrap();
            let basis = if basis { Basis::Monomial } else { Basis::Orthonormal };
            let rep = build_spin_rep(SpinLabel::from_twice(twice), &q, basis).unwrap();
            prop_assert!(rep.algebra_residuals().max() < 1e-10);
        }

        #[test]
        fn bracket_symmetries(nr in -3.0f64..3.0, ni in -1.0f64..1.0, r in 0.7f64..1.4, th in 0.25f64..2.9) {
            let q = DeformationParameter::generic(Complex64::from_polar(r, th)).unwrap();
            let n = c(nr, ni);
            let b = q.bracket(n);
            prop_assert!((q.bracket(-n) + b).norm() < 1e-10 * b.norm().max(1.0));
            prop_assert!((q.inverse().bracket(n) - b).norm() < 1e-10 * b.norm().max(1.0));
        }
    }
}
