//! Representations at a primitive root of unity `q = exp(2πi/N)`, `N` odd:
//! Weyl pair, cyclic generators on the theta basis `θ_k` (indices mod `N`),
//! the extended center, twisted tensor products and the eigenstate families
//! `φ_m`, `φ̄_m` with their shift laws.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    diag, eye, matpow, max_abs, off_scalar, rank, rel_residual, rel_residual_vec, zeros, CMat, CVec,
};
use crate::qcore::{phi_product, re, DeformationParameter, QMode};
use crate::rep::{Basis, OperatorTriple, RepSpec};
use crate::tensorrep::{CoproductKind, TwistedCoproduct};

/// Off-scalar residual accepted for the central elements.
pub const CENTRAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CyclicRepSpec {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub lambda: Complex64,
    q: DeformationParameter,
}

impl CyclicRepSpec {
    /// Parameters at `q = exp(2πi/N)`.
    pub fn new(alpha: Complex64, beta: Complex64, lambda: Complex64, order: u32) -> Result<Self> {
        Self::with_q(alpha, beta, lambda, DeformationParameter::root_of_unity(order)?)
    }

    pub fn with_q(alpha: Complex64, beta: Complex64, lambda: Complex64, q: DeformationParameter) -> Result<Self> {
        match q.mode() {
            QMode::RootOfUnity(n) if n % 2 == 1 => Ok(Self { alpha, beta, lambda, q }),
            QMode::RootOfUnity(n) => Err(Error::EvenOrder(n)),
            QMode::Generic => Err(Error::WrongMode { expected: "root-of-unity" }),
        }
    }

    pub fn q(&self) -> &DeformationParameter {
        &self.q
    }

    pub fn order(&self) -> u32 {
        self.q.order().expect("root-of-unity mode")
    }

    /// `ℓ = (α + β)/2`.
    pub fn ell(&self) -> Complex64 {
        (self.alpha + self.beta) / 2.0
    }
}

/// `(X, Z)` with `Zθ_k = q^kθ_k`, `Xθ_k = θ_{k+1}`; `ZX = qXZ`.
pub fn weyl_generators(q: &DeformationParameter) -> Result<(CMat, CMat)> {
    let n = q.order().ok_or(Error::WrongMode { expected: "root-of-unity" })? as usize;
    let mut x = zeros(n, n);
    for k in 0..n {
        x[((k + 1) % n, k)] = re(1.0);
    }
    let z: Vec<Complex64> = (0..n).map(|k| q.powf(k as f64)).collect();
    Ok((x, diag(&z)))
}

/// Near-integer test used for degeneracy detection.
fn near_integer(z: Complex64) -> bool {
    z.im.abs() < 1e-10 && (z.re - z.re.round()).abs() < 1e-10
}

#[derive(Clone, Debug, PartialEq)]
pub struct CyclicRep {
    pub triple: OperatorTriple,
    pub spec: CyclicRepSpec,
    /// `α ∈ ℤ`: `S⁺` kills a basis vector (a highest weight appears).
    pub has_highest_weight: bool,
    /// `β ∈ ℤ`: `S⁻` kills a basis vector (a lowest weight appears).
    pub has_lowest_weight: bool,
}

/// `S⁻θ_k = q^{-λ/2}[k-β]θ_{k-1}`, `S⁺θ_k = q^{λ/2}[α-k]θ_{k+1}`,
/// `q^{aS}θ_k = q^{a(k-(α+β)/2)}θ_k`.
pub fn build_cyclic_rep(spec: &CyclicRepSpec) -> CyclicRep {
    let q = spec.q;
    let n = spec.order() as usize;
    let (up, down) = (q.pow(spec.lambda / 2.0), q.pow(-spec.lambda / 2.0));
    let mut sp = zeros(n, n);
    let mut sm = zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        sm[((k + n - 1) % n, k)] = down * q.bracket(re(kf) - spec.beta);
        sp[((k + 1) % n, k)] = up * q.bracket(spec.alpha - kf);
    }
    let ell = spec.ell();
    let weights = (0..n).map(|k| re(k as f64) - ell).collect();
    let triple = OperatorTriple::new(sp, sm, weights, q, Basis::Theta).expect("square by construction");
    CyclicRep {
        triple,
        spec: *spec,
        has_highest_weight: near_integer(spec.alpha),
        has_lowest_weight: near_integer(spec.beta),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CentralElements {
    /// `(S⁺)^N = alpha_plus · I`
    pub alpha_plus: Complex64,
    /// `(S⁻)^N = alpha_minus · I`
    pub alpha_minus: Complex64,
    /// `q^{NS} = qns_scalar · I`
    pub qns_scalar: Complex64,
    pub max_offscalar_residual: f64,
    /// `q^{-Nλ/2} Φ_N(1-N-β)`
    pub alpha_minus_phi: Complex64,
    /// `q^{-Nλ/2}(q-q⁻¹)^{-N}(q^{-Nβ}-q^{Nβ})`
    pub alpha_minus_closed: Complex64,
    /// `q^{Nλ/2}(q-q⁻¹)^{-N}(q^{Nα}-q^{-Nα})`
    pub alpha_plus_closed: Complex64,
    /// `q^{-N(α+β)/2}`
    pub qns_closed: Complex64,
    /// largest relative mismatch between matrix scalars and the closed forms
    pub closed_form_residual: f64,
}

/// Off-scalar residual of `m` with scale `max(|s|, max|m|, scale)`.
fn scalar_part(m: &CMat, scale: f64) -> (Complex64, f64) {
    let (s, _) = off_scalar(m);
    let n = m.nrows();
    let dev = max_abs(&(m - eye(n) * s));
    let sc = s.norm().max(max_abs(m)).max(scale);
    (s, if sc == 0.0 { 0.0 } else { dev / sc })
}

fn rel_scalar(a: Complex64, b: Complex64, scale: f64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(scale).max(1e-300)
}

pub fn central_elements(spec: &CyclicRepSpec) -> Result<CentralElements> {
    central_elements_with_tol(spec, CENTRAL_TOL)
}

pub fn central_elements_with_tol(spec: &CyclicRepSpec, tol: f64) -> Result<CentralElements> {
    let rep = build_cyclic_rep(spec);
    let t = &rep.triple;
    let q = spec.q;
    let n = spec.order();
    let nf = n as f64;
    let sp_scale = max_abs(&t.sp).powi(n as i32);
    let sm_scale = max_abs(&t.sm).powi(n as i32);
    let (alpha_plus, rp) = scalar_part(&matpow(&t.sp, n), sp_scale);
    let (alpha_minus, rm) = scalar_part(&matpow(&t.sm, n), sm_scale);
    let (qns_scalar, rq) = scalar_part(&t.q_pow_sf(nf), 0.0);
    let max_offscalar_residual = rp.max(rm).max(rq);
    for (what, r) in [("(S+)^N", rp), ("(S-)^N", rm), ("q^{NS}", rq)] {
        if r > tol {
            return Err(Error::NotScalar { what: what.into(), residual: r });
        }
    }
    let dn = q.denom().powu(n);
    let alpha_minus_phi = q.pow(-spec.lambda * nf / 2.0) * phi_product(re(1.0 - nf) - spec.beta, &q)?;
    let alpha_minus_closed =
        q.pow(-spec.lambda * nf / 2.0) * (q.pow(-spec.beta * nf) - q.pow(spec.beta * nf)) / dn;
    let alpha_plus_closed = q.pow(spec.lambda * nf / 2.0) * (q.pow(spec.alpha * nf) - q.pow(-spec.alpha * nf)) / dn;
    let qns_closed = q.pow(-spec.ell() * nf);
    let closed_form_residual = rel_scalar(alpha_minus, alpha_minus_closed, sm_scale)
        .max(rel_scalar(alpha_minus_phi, alpha_minus_closed, sm_scale))
        .max(rel_scalar(alpha_plus, alpha_plus_closed, sp_scale))
        .max(rel_scalar(qns_scalar, qns_closed, 1.0));
    Ok(CentralElements {
        alpha_plus,
        alpha_minus,
        qns_scalar,
        max_offscalar_residual,
        alpha_minus_phi,
        alpha_minus_closed,
        alpha_plus_closed,
        qns_closed,
        closed_form_residual,
    })
}

/// Twisted product of two cyclic representations on `θ_{k₁,k₂}`, index `k₁·N + k₂`.
pub fn cyclic_tensor(
    spec1: &CyclicRepSpec,
    spec2: &CyclicRepSpec,
    u: Complex64,
    kind: CoproductKind,
) -> Result<TwistedCoproduct> {
    if spec1.order() != spec2.order() {
        return Err(Error::OrderMismatch(spec1.order(), spec2.order()));
    }
    if spec1.q != spec2.q {
        return Err(Error::InvalidParameter("cyclic factors must share q".into()));
    }
    let r1 = build_cyclic_rep(spec1).triple;
    let r2 = build_cyclic_rep(spec2).triple;
    TwistedCoproduct::new(&r1, &r2, (RepSpec::Cyclic(*spec1), RepSpec::Cyclic(*spec2)), kind, u)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TensorPowerReport {
    pub minus_scalar: Complex64,
    pub plus_scalar: Complex64,
    /// Predicted from the single-factor central elements.
    pub minus_predicted: Complex64,
    pub plus_predicted: Complex64,
    pub max_offscalar_residual: f64,
    pub prediction_residual: f64,
}

/// `(S^±_u)^N` of a cyclic tensor product: scalarity and the closed values
/// `q^{sNu/2} a⁻₁ q^{-sNℓ₂} + q^{-sNu/2} q^{sNℓ₁} a⁻₂` (and the `S⁺` analogue),
/// `s = ±1` for `Δ`/`Δ̄`.
pub fn tensor_power_check(spec1: &CyclicRepSpec, spec2: &CyclicRepSpec, u: Complex64, kind: CoproductKind) -> Result<TensorPowerReport> {
    let cop = cyclic_tensor(spec1, spec2, u, kind)?;
    let n = spec1.order();
    let nf = n as f64;
    let q = *spec1.q();
    let s = match kind {
        CoproductKind::Delta => 1.0,
        CoproductKind::DeltaBar => -1.0,
    };
    let sp_scale = max_abs(&cop.gens.sp).powi(n as i32);
    let sm_scale = max_abs(&cop.gens.sm).powi(n as i32);
    let (minus_scalar, rm) = scalar_part(&matpow(&cop.gens.sm, n), sm_scale);
    let (plus_scalar, rp) = scalar_part(&matpow(&cop.gens.sp, n), sp_scale);
    let c1 = central_elements(spec1)?;
    let c2 = central_elements(spec2)?;
    let (l1, l2) = (spec1.ell(), spec2.ell());
    let tw = q.pow(u * (s * nf / 2.0));
    let twi = q.pow(-u * (s * nf / 2.0));
    let minus_predicted =
        tw * c1.alpha_minus_closed * q.pow(-l2 * (s * nf)) + twi * q.pow(l1 * (s * nf)) * c2.alpha_minus_closed;
    let plus_predicted =
        twi * c1.alpha_plus_closed * q.pow(-l2 * (s * nf)) + tw * q.pow(l1 * (s * nf)) * c2.alpha_plus_closed;
    Ok(TensorPowerReport {
        minus_scalar,
        plus_scalar,
        minus_predicted,
        plus_predicted,
        max_offscalar_residual: rm.max(rp),
        prediction_residual: rel_scalar(minus_scalar, minus_predicted, sm_scale)
            .max(rel_scalar(plus_scalar, plus_predicted, sp_scale)),
    })
}

/// `(q-q⁻¹)^{-N}[q^{N(u-α₂-β₂-λ₁)/2}(q^{-Nβ₁}-q^{Nβ₁}) + q^{N(-u+α₁+β₁-λ₂)/2}(q^{-Nβ₂}-q^{Nβ₂})]`,
/// the value of `(S⁻_u)^N` for `Δ_u`.
pub fn tensor_minus_power_closed(spec1: &CyclicRepSpec, spec2: &CyclicRepSpec, u: Complex64) -> Complex64 {
    let q = spec1.q;
    let nf = spec1.order() as f64;
    let (a1, b1, l1) = (spec1.alpha, spec1.beta, spec1.lambda);
    let (a2, b2, l2) = (spec2.alpha, spec2.beta, spec2.lambda);
    let t1 = q.pow((u - a2 - b2 - l1) * (nf / 2.0)) * (q.pow(-b1 * nf) - q.pow(b1 * nf));
    let t2 = q.pow((-u + a1 + b1 - l2) * (nf / 2.0)) * (q.pow(-b2 * nf) - q.pow(b2 * nf));
    (t1 + t2) / q.denom().powu(spec1.order())
}

/// Exponent `X` of the `φ_m` coefficient ratio `q^{u-2+X}`.
pub fn family_exponent(spec1: &CyclicRepSpec, spec2: &CyclicRepSpec) -> Complex64 {
    (spec1.beta + spec2.beta - spec1.alpha - spec2.alpha + spec2.lambda - spec1.lambda) / 2.0
}

/// Exponent `Y` of the `φ̄_m` coefficient ratio `q^{2-u+Y}`.
pub fn barred_family_exponent(spec1: &CyclicRepSpec, spec2: &CyclicRepSpec) -> Complex64 {
    (spec1.alpha + spec2.alpha - spec1.beta - spec2.beta + spec2.lambda - spec1.lambda) / 2.0
}

/// One shift relation at one `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftLaw {
    pub relation: &'static str,
    pub m: usize,
    pub prefactor: Complex64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CyclicEigenFamily {
    pub phi: Vec<CVec>,
    pub phibar: Vec<CVec>,
    pub ratio: Complex64,
    pub barred_ratio: Complex64,
    /// `max(|r^N - 1|, |s^N - 1|)`; the families are ladders only when this vanishes.
    pub closure_defect: f64,
    pub laws: Vec<ShiftLaw>,
    pub span_rank: usize,
}

impl CyclicEigenFamily {
    pub fn max_law_residual(&self) -> f64 {
        self.laws.iter().fold(0.0, |a, l| a.max(l.residual))
    }

    /// First law above `tol`, as an error.
    pub fn require(&self, tol: f64) -> Result<()> {
        match self.laws.iter().find(|l| l.residual.is_nan() || l.residual >= tol) {
            Some(l) => Err(Error::ShiftLawViolation { m: l.m, relation: l.relation, residual: l.residual }),
            None => Ok(()),
        }
    }
}

fn family_vector(n: usize, m: usize, exponent: Complex64, q: &DeformationParameter) -> CVec {
    let mut v = CVec::zeros(n * n);
    for k in 0..n {
        let k1 = (m + n - k) % n;
        v[k1 * n + k] = q.pow(exponent * k as f64);
    }
    v
}

/// `φ_m = Σ_k r^k θ_{m-k,k}` with `r = q^{u-2+X}` and `φ̄_m = Σ_k s^k θ_{m-k,k}`
/// with `s = q^{2-u+Y}`, checked against
///
/// - `S⁻_u φ_m = q^{-1+(u-λ₁+β₂-α₂)/2}[m+1-β₁-β₂] φ_{m-1}`
/// - `S⁺_u φ_m = q^{1-(u-λ₁+β₂-α₂)/2}[α₁+α₂+1-m] φ_{m+1}`
/// - `S̄⁻_u φ̄_m = q^{1-(u+λ₁+β₂-α₂)/2}[m+1-β₁-β₂] φ̄_{m-1}`
/// - `S̄⁺_u φ̄_m = q^{-1+(u+λ₁+β₂-α₂)/2}[α₁+α₂+1-m] φ̄_{m+1}`
pub fn eigenstate_family(spec1: &CyclicRepSpec, spec2: &CyclicRepSpec, u: Complex64) -> Result<CyclicEigenFamily> {
    let delta = cyclic_tensor(spec1, spec2, u, CoproductKind::Delta)?;
    let bar = cyclic_tensor(spec1, spec2, u, CoproductKind::DeltaBar)?;
    let q = *spec1.q();
    let n = spec1.order() as usize;
    let nf = n as f64;
    let ex = u - 2.0 + family_exponent(spec1, spec2);
    let ey = 2.0 - u + barred_family_exponent(spec1, spec2);
    let phi: Vec<CVec> = (0..n).map(|m| family_vector(n, m, ex, &q)).collect();
    let phibar: Vec<CVec> = (0..n).map(|m| family_vector(n, m, ey, &q)).collect();
    let closure_defect = (q.pow(ex * nf) - 1.0).norm().max((q.pow(ey * nf) - 1.0).norm());

    let (a1, b1, l1) = (spec1.alpha, spec1.beta, spec1.lambda);
    let (a2, b2) = (spec2.alpha, spec2.beta);
    let e_plain = (u - l1 + b2 - a2) / 2.0;
    let e_bar = (u + l1 + b2 - a2) / 2.0;
    let mut laws = Vec::with_capacity(4 * n);
    for m in 0..n {
        let mf = m as f64;
        let down = q.bracket(re(mf + 1.0) - b1 - b2);
        let up = q.bracket(a1 + a2 + 1.0 - mf);
        let (prev, next) = ((m + n - 1) % n, (m + 1) % n);
        let cases = [
            ("S_u^- phi_m", &delta.gens.sm, &phi[m], &phi[prev], q.pow(e_plain - 1.0) * down),
            ("S_u^+ phi_m", &delta.gens.sp, &phi[m], &phi[next], q.pow(1.0 - e_plain) * up),
            ("Sbar_u^- phibar_m", &bar.gens.sm, &phibar[m], &phibar[prev], q.pow(1.0 - e_bar) * down),
            ("Sbar_u^+ phibar_m", &bar.gens.sp, &phibar[m], &phibar[next], q.pow(e_bar - 1.0) * up),
        ];
        for (relation, g, v, w, prefactor) in cases {
            let residual = rel_residual_vec(&(g * v), &(w * prefactor));
            laws.push(ShiftLaw { relation, m, prefactor, residual });
        }
    }
    let stacked = CMat::from_columns(&phi.iter().chain(phibar.iter()).cloned().collect::<Vec<_>>());
    let span_rank = rank(&stacked, 1e-10);
    Ok(CyclicEigenFamily {
        ratio: q.pow(ex),
        barred_ratio: q.pow(ey),
        phi,
        phibar,
        closure_defect,
        laws,
        span_rank,
    })
}

/// `R_m = q^{m(2-u+α₂-β₂-λ₁)} R₀`, `m = 0..N-1`.
pub fn cyclic_r_eigenvalues(spec1: &CyclicRepSpec, spec2: &CyclicRepSpec, u: Complex64, r0: Complex64) -> Vec<Complex64> {
    let q = spec1.q;
    let e = cyclic_ratio_exponent(spec1, spec2, u);
    (0..spec1.order()).map(|m| r0 * q.pow(e * m as f64)).collect()
}

/// `2 - u + α₂ - β₂ - λ₁`.
pub fn cyclic_ratio_exponent(spec1: &CyclicRepSpec, spec2: &CyclicRepSpec, u: Complex64) -> Complex64 {
    2.0 - u + spec2.alpha - spec2.beta - spec1.lambda
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartialR {
    /// Acts as prescribed on the joint span and as zero on its orthogonal complement.
    pub matrix: CMat,
    pub span_rank: usize,
    pub dim: usize,
    /// Residual of the two defining relations.
    pub relation_residual: f64,
    /// `R S^±_u = S̄^±_{-u} R` on the span; diagnostic only.
    pub intertwining_residual: f64,
    pub eigenvalues: Vec<Complex64>,
}

/// `R φ_m(u) = R_m φ̄_m(-u)` and `R φ̄_m(u) = R_m φ_m(-u)` imposed on the
/// span of `{φ_m(u), φ̄_m(u)}`.
pub fn partial_r(spec1: &CyclicRepSpec, spec2: &CyclicRepSpec, u: Complex64, r0: Complex64) -> Result<PartialR> {
    let at_u = eigenstate_family(spec1, spec2, u)?;
    let at_mu = eigenstate_family(spec1, spec2, -u)?;
    let eigenvalues = cyclic_r_eigenvalues(spec1, spec2, u, r0);
    let n = spec1.order() as usize;
    let dim = n * n;
    let mut src = Vec::with_capacity(2 * n);
    let mut dst = Vec::with_capacity(2 * n);
    for ((v, w), &r) in at_u.phi.iter().zip(&at_mu.phibar).zip(&eigenvalues) {
        src.push(v.clone());
        dst.push(w * r);
    }
    for ((v, w), &r) in at_u.phibar.iter().zip(&at_mu.phi).zip(&eigenvalues) {
        src.push(v.clone());
        dst.push(w * r);
    }
    let v = CMat::from_columns(&src);
    let w = CMat::from_columns(&dst);
    // Exact solve on the span: SVD pseudo-inverse restricted to the nonzero singular values.
    let svd = v.clone().svd(true, true);
    let top = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let (uu, vt) = (svd.u.expect("u"), svd.v_t.expect("v_t"));
    let mut pinv = zeros(v.ncols(), v.nrows());
    let mut span_rank = 0;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > 1e-10 * top {
            span_rank += 1;
            pinv += vt.row(i).adjoint() * uu.column(i).adjoint() / Complex64::new(s, 0.0);
        }
    }
    let matrix = &w * &pinv;
    let relation_residual = rel_residual(&(&matrix * &v), &w);
    if span_rank < 2 * n && relation_residual > 1e-9 {
        return Err(Error::InconsistentConstraints(relation_residual));
    }
    let delta = cyclic_tensor(spec1, spec2, u, CoproductKind::Delta)?;
    let bar_mu = cyclic_tensor(spec1, spec2, -u, CoproductKind::DeltaBar)?;
    let mut intertwining_residual: f64 = 0.0;
    for (g, gb) in [(&delta.gens.sp, &bar_mu.gens.sp), (&delta.gens.sm, &bar_mu.gens.sm)] {
        let lhs = &matrix * g * &v;
        let rhs = gb * &matrix * &v;
        intertwining_residual = intertwining_residual.max(rel_residual(&lhs, &rhs));
    }
    Ok(PartialR { matrix, span_rank, dim, relation_residual, intertwining_residual, eigenvalues })
}
