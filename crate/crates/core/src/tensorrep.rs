//! Spectral-parameter twisted tensor products: the coproducts `Δ_u`, `Δ̄_u`,
//! lowest-weight vectors with their descendants, tensor Casimirs and the
//! lowering laws that tie `φ_N` and `φ̄_N` together.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    cosine_similarity, diag, eye, kron, max_abs, max_abs_vec, null_space, rank, rel_residual_vec, reversal, zeros,
    CMat, CVec,
};
use crate::qcore::{re, DeformationParameter};
use crate::rep::{build_spin_rep, casimir, orthonormal_scaling, Basis, OperatorTriple, RepSpec, SpinLabel};

/// Descendant chains stop once `|v|∞` falls below this.
pub const CHAIN_CUTOFF: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoproductKind {
    Delta,
    DeltaBar,
}

impl CoproductKind {
    fn sign(self) -> f64 {
        match self {
            CoproductKind::Delta => 1.0,
            CoproductKind::DeltaBar => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedCoproduct {
    pub kind: CoproductKind,
    pub u: Complex64,
    pub gens: OperatorTriple,
    pub parents: (RepSpec, RepSpec),
    pub dims: (usize, usize),
}

impl TwistedCoproduct {
    pub fn new(
        rep1: &OperatorTriple,
        rep2: &OperatorTriple,
        parents: (RepSpec, RepSpec),
        kind: CoproductKind,
        u: Complex64,
    ) -> Result<Self> {
        if parents.0.dim() != rep1.dim() || parents.1.dim() != rep2.dim() {
            return Err(Error::DimensionMismatch("parent specs do not match the representations".into()));
        }
        let gens = coproduct_generators(rep1, rep2, kind, u)?;
        Ok(Self { kind, u, gens, parents, dims: (rep1.dim(), rep2.dim()) })
    }

    /// Twisted product of two spin representations.
    pub fn spin(
        l1: SpinLabel,
        l2: SpinLabel,
        kind: CoproductKind,
        u: Complex64,
        q: &DeformationParameter,
        basis: Basis,
    ) -> Result<Self> {
        let r1 = build_spin_rep(l1, q, basis)?;
        let r2 = build_spin_rep(l2, q, basis)?;
        Self::new(&r1, &r2, (RepSpec::LowestWeight(l1), RepSpec::LowestWeight(l2)), kind, u)
    }
}

/// Generators of `Δ_u` (or `Δ̄_u`) on the product basis `x₁^j x₂^k`, index `j·d₂ + k`.
///
/// With `s = +1` for `Δ` and `s = -1` for `Δ̄`:
/// `S⁻ = q^{su/2} S₁⁻ ⊗ q^{sS₂} + q^{-su/2} q^{-sS₁} ⊗ S₂⁻`,
/// `S⁺ = q^{-su/2} S₁⁺ ⊗ q^{sS₂} + q^{su/2} q^{-sS₁} ⊗ S₂⁺`.
pub fn coproduct_generators(
    rep1: &OperatorTriple,
    rep2: &OperatorTriple,
    kind: CoproductKind,
    u: Complex64,
) -> Result<OperatorTriple> {
    let q = *rep1.q();
    if q != *rep2.q() {
        return Err(Error::InvalidParameter("tensor factors must share q and its branch".into()));
    }
    let s = kind.sign();
    let (tw, twi) = (q.pow(u * (s / 2.0)), q.pow(-u * (s / 2.0)));
    let k2 = rep2.q_pow_sf(s);
    let k1 = rep1.q_pow_sf(-s);
    let sm = kron(&rep1.sm, &k2) * tw + kron(&k1, &rep2.sm) * twi;
    let sp = kron(&rep1.sp, &k2) * twi + kron(&k1, &rep2.sp) * tw;
    let mut weights = Vec::with_capacity(rep1.dim() * rep2.dim());
    for a in rep1.weights() {
        for b in rep2.weights() {
            weights.push(a + b);
        }
    }
    OperatorTriple::new(sp, sm, weights, q, rep1.basis)
}

/// Coefficients of `φ_N(u) = ∏_{n=1}^N (q^{ℓ₁+1-n-u/2} x₁ - q^{u/2+n-1-ℓ₂} x₂)`
/// on the monomial product basis. The barred vector is the same with `q → q⁻¹`.
pub fn product_vector(l1: SpinLabel, l2: SpinLabel, n: usize, u: Complex64, q: &DeformationParameter) -> CVec {
    let (a1, a2) = (l1.value(), l2.value());
    // poly[j] = coefficient of x₁^j x₂^{deg-j}
    let mut poly = vec![re(1.0)];
    for k in 1..=n {
        let kf = k as f64;
        let a = q.pow(re(a1 + 1.0 - kf) - u / 2.0);
        let b = q.pow(u / 2.0 + (kf - 1.0 - a2));
        let mut next = vec![Complex64::default(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] += a * c;
            next[j] -= b * c;
        }
        poly = next;
    }
    let d2 = l2.dim();
    let mut v = CVec::zeros(l1.dim() * d2);
    for (j, c) in poly.into_iter().enumerate() {
        let k = n - j;
        if j < l1.dim() && k < d2 {
            v[j * d2 + k] = c;
        }
    }
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenSector {
    pub n: usize,
    pub lw_vector: CVec,
    /// `(S⁺_u)^m φ_N`, `m = 0, 1, ...`
    pub descendants: Vec<CVec>,
    pub barred_lw: CVec,
    /// `(S̄⁺_u)^m φ̄_N`
    pub barred_descendants: Vec<CVec>,
    /// `|S⁻_u φ_N|∞ / (|S⁻_u|∞ |φ_N|∞)`
    pub lw_residual: f64,
    pub barred_lw_residual: f64,
    /// `R_N` once attached by the R-operator assembly.
    pub eigenvalue: Option<Complex64>,
}

fn chain(raise: &CMat, start: &CVec, max_len: usize) -> Vec<CVec> {
    let mut out = vec![start.clone()];
    while out.len() < max_len {
        let next = raise * out.last().unwrap();
        if max_abs_vec(&next) < CHAIN_CUTOFF {
            break;
        }
        out.push(next);
    }
    out
}

fn lowering_residual(lower: &CMat, v: &CVec) -> f64 {
    let scale = max_abs(lower) * max_abs_vec(v);
    if scale == 0.0 {
        0.0
    } else {
        max_abs_vec(&(lower * v)) / scale
    }
}

/// All sectors `N = 0..=min(2ℓ₁, 2ℓ₂)` at spectral parameter `u` (monomial basis).
pub fn lowest_weight_vectors(
    l1: SpinLabel,
    l2: SpinLabel,
    u: Complex64,
    q: &DeformationParameter,
) -> Result<Vec<EigenSector>> {
    let delta = TwistedCoproduct::spin(l1, l2, CoproductKind::Delta, u, q, Basis::Monomial)?;
    let bar = TwistedCoproduct::spin(l1, l2, CoproductKind::DeltaBar, u, q, Basis::Monomial)?;
    let qi = q.inverse();
    let nmax = l1.twice().min(l2.twice()) as usize;
    let mut sectors = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let len = (l1.twice() + l2.twice()) as usize - 2 * n + 1;
        let lw = product_vector(l1, l2, n, u, q);
        let blw = product_vector(l1, l2, n, u, &qi);
        sectors.push(EigenSector {
            n,
            descendants: chain(&delta.gens.sp, &lw, len),
            barred_descendants: chain(&bar.gens.sp, &blw, len),
            lw_residual: lowering_residual(&delta.gens.sm, &lw),
            barred_lw_residual: lowering_residual(&bar.gens.sm, &blw),
            lw_vector: lw,
            barred_lw: blw,
            eigenvalue: None,
        });
    }
    let dim = l1.dim() * l2.dim();
    for barred in [false, true] {
        let cols: Vec<CVec> = sectors
            .iter()
            .flat_map(|s| if barred { s.barred_descendants.iter() } else { s.descendants.iter() })
            .cloned()
            .collect();
        let r = if cols.len() == dim { rank(&CMat::from_columns(&cols), 1e-10) } else { cols.len().min(dim) };
        if cols.len() != dim || r < dim {
            return Err(Error::CompletenessFailure { rank: r, dim });
        }
    }
    Ok(sectors)
}

/// Stacks the (barred) descendants of every sector as columns, sector-major.
pub fn stacked_basis(sectors: &[EigenSector], barred: bool) -> CMat {
    let cols: Vec<CVec> = sectors
        .iter()
        .flat_map(|s| if barred { s.barred_descendants.iter() } else { s.descendants.iter() })
        .cloned()
        .collect();
    CMat::from_columns(&cols)
}

/// Indices of the weight-`N` subspace `{x₁^j x₂^k : j + k = N}`.
pub fn weight_indices(l1: SpinLabel, l2: SpinLabel, n: usize) -> Vec<usize> {
    let d2 = l2.dim();
    (0..l1.dim()).filter(|&j| j <= n && n - j < d2).map(|j| j * d2 + (n - j)).collect()
}

/// Null space of `S⁻_u` restricted to the weight-`N` subspace, embedded back
/// into the full product space. Independent of the product formula.
pub fn null_space_lowest_weight(cop: &TwistedCoproduct, l1: SpinLabel, l2: SpinLabel, n: usize) -> Vec<CVec> {
    let idx = weight_indices(l1, l2, n);
    let dim = cop.gens.dim();
    let mut sub = zeros(dim, idx.len());
    for (c, &i) in idx.iter().enumerate() {
        sub.set_column(c, &cop.gens.sm.column(i));
    }
    let ns = null_space(&sub, 1e-10);
    (0..ns.ncols())
        .map(|c| {
            let mut v = CVec::zeros(dim);
            for (r, &i) in idx.iter().enumerate() {
                v[i] = ns[(r, c)];
            }
            v
        })
        .collect()
}

/// Cosine similarity between the product-formula vector and the null-space oracle.
pub fn lowest_weight_agreement(l1: SpinLabel, l2: SpinLabel, n: usize, u: Complex64, q: &DeformationParameter) -> Result<f64> {
    let cop = TwistedCoproduct::spin(l1, l2, CoproductKind::Delta, u, q, Basis::Monomial)?;
    let ns = null_space_lowest_weight(&cop, l1, l2, n);
    if ns.len() != 1 {
        return Err(Error::CompletenessFailure { rank: ns.len(), dim: 1 });
    }
    Ok(cosine_similarity(&product_vector(l1, l2, n, u, q), &ns[0]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectorCasimir {
    pub n: usize,
    /// `[N-ℓ₁-ℓ₂]_q [N-ℓ₁-ℓ₂-1]_q`
    pub expected: Complex64,
    /// `max_m |C v_m - expected v_m| / (|v_m| max(1, |expected|))`
    pub max_residual: f64,
    /// spread of the Rayleigh quotients over `m`
    pub spread: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TensorCasimirReport {
    pub matrix: CMat,
    pub sectors: Vec<SectorCasimir>,
}

impl TensorCasimirReport {
    pub fn max_residual(&self) -> f64 {
        self.sectors.iter().fold(0.0, |a, s| a.max(s.max_residual))
    }

    pub fn max_spread(&self) -> f64 {
        self.sectors.iter().fold(0.0, |a, s| a.max(s.spread))
    }
}

/// `C = S⁺_u S⁻_u + [S]_q[S-1]_q` with its per-sector eigenvalue check.
pub fn tensor_casimir(cop: &TwistedCoproduct, q: &DeformationParameter) -> Result<TensorCasimirReport> {
    let (l1, l2) = match &cop.parents {
        (RepSpec::LowestWeight(a), RepSpec::LowestWeight(b)) => (*a, *b),
        _ => return Err(Error::InvalidParameter("tensor Casimir spectrum needs two spin factors".into())),
    };
    let matrix = casimir(&cop.gens);
    let frame = frame_from_monomial(l1, l2, q, cop.gens.basis);
    let sectors = lowest_weight_vectors(l1, l2, cop.u, q)?;
    let mut out = Vec::with_capacity(sectors.len());
    for s in &sectors {
        let x = s.n as f64 - l1.value() - l2.value();
        let expected = q.bracketf(x) * q.bracketf(x - 1.0);
        let chain = match cop.kind {
            CoproductKind::Delta => &s.descendants,
            CoproductKind::DeltaBar => &s.barred_descendants,
        };
        let mut max_residual: f64 = 0.0;
        let mut quotients = Vec::with_capacity(chain.len());
        for v in chain {
            let v = &frame * v;
            let cv = &matrix * &v;
            let nv = v.norm();
            max_residual = max_residual.max((&cv - &v * expected).norm() / (nv * expected.norm().max(1.0)));
            quotients.push(v.dotc(&cv) / v.dotc(&v));
        }
        let spread = quotients.iter().flat_map(|a| quotients.iter().map(move |b| (a - b).norm())).fold(0.0, f64::max);
        out.push(SectorCasimir { n: s.n, expected, max_residual, spread });
    }
    Ok(TensorCasimirReport { matrix, sectors: out })
}

/// Maps monomial-basis product vectors into the basis of `basis`.
fn frame_from_monomial(l1: SpinLabel, l2: SpinLabel, q: &DeformationParameter, basis: Basis) -> CMat {
    match basis {
        Basis::Orthonormal => {
            let c = kron(&diag(&orthonormal_scaling(l1, q)), &diag(&orthonormal_scaling(l2, q)));
            c.map(|z| if z.norm() == 0.0 { z } else { 1.0 / z })
        }
        _ => eye(l1.dim() * l2.dim()),
    }
}

/// Conjugates a monomial-basis operator into the reference frame:
/// orthonormal scaling on each factor, then descending-weight order.
pub fn to_descending_frame(m: &CMat, l1: SpinLabel, l2: SpinLabel, q: &DeformationParameter) -> CMat {
    let c = kron(&diag(&orthonormal_scaling(l1, q)), &diag(&orthonormal_scaling(l2, q)));
    let ci = c.map(|z| if z.norm() == 0.0 { z } else { 1.0 / z });
    let p = reversal(m.nrows());
    &p * (ci * m * c) * &p
}

/// Residual of one lowering law at one sector.
#[derive(Clone, Debug, PartialEq)]
pub struct LawResidual {
    pub law: &'static str,
    pub n: usize,
    pub residual: f64,
}

fn subst_scale(l1: SpinLabel, l2: SpinLabel, v: &CVec, q: &DeformationParameter) -> CVec {
    // x₁ → q⁻¹x₁, x₂ → q x₂: coefficient of x₁^j x₂^k gains q^{k-j}.
    let d2 = l2.dim();
    let mut out = v.clone();
    for j in 0..l1.dim() {
        for k in 0..d2 {
            out[j * d2 + k] *= q.powf(k as f64 - j as f64);
        }
    }
    out
}

/// The action of `S⁻_u` (and of `S̄⁻_u`) on `φ_N(±u)`, `φ̄_N(±u)`:
///
/// - `S⁻_u φ_N(u) = 0`
/// - `S⁻_u φ̄_N(u) = -(q-q⁻¹)[N][ℓ₁+ℓ₂+1-N-u] φ̄_{N-1}(u)`
/// - `S⁻_u φ_N(-u) = (q-q⁻¹)[u][N] q^{ℓ₁-ℓ₂} φ_{N-1}(q⁻¹x₁, q x₂ | -u)`
/// - `S⁻_u φ̄_N(-u) = (q-q⁻¹)[N][N-1-ℓ₁-ℓ₂] φ̄_{N-1}(-u)`
///
/// and the same four with `q ↔ q⁻¹`, `φ ↔ φ̄`, `S⁻_u → S̄⁻_u`.
pub fn lowering_laws(l1: SpinLabel, l2: SpinLabel, u: Complex64, q: &DeformationParameter) -> Result<Vec<LawResidual>> {
    let qi = q.inverse();
    let delta = TwistedCoproduct::spin(l1, l2, CoproductKind::Delta, u, q, Basis::Monomial)?;
    let bar = TwistedCoproduct::spin(l1, l2, CoproductKind::DeltaBar, u, q, Basis::Monomial)?;
    let (a1, a2) = (l1.value(), l2.value());
    let nmax = l1.twice().min(l2.twice()) as usize;
    let mut out = Vec::new();
    let cases: [(&'static str, &CMat, &DeformationParameter, &DeformationParameter); 2] =
        [("", &delta.gens.sm, q, &qi), ("bar ", &bar.gens.sm, &qi, q)];
    for (tag, lower, own, other) in cases {
        let w = own.denom();
        for n in 0..=nmax {
            let nf = n as f64;
            let own_u = product_vector(l1, l2, n, u, own);
            out.push(LawResidual { law: law_name(tag, 0), n, residual: lowering_residual(lower, &own_u) });
            if n == 0 {
                continue;
            }
            let prev = |v_u: Complex64, p: &DeformationParameter| product_vector(l1, l2, n - 1, v_u, p);

            let lhs = lower * product_vector(l1, l2, n, u, other);
            let rhs = prev(u, other) * (-w * own.bracketf(nf) * own.bracket(re(a1 + a2 + 1.0 - nf) - u));
            out.push(LawResidual { law: law_name(tag, 1), n, residual: rel_residual_vec(&lhs, &rhs) });

            let lhs = lower * product_vector(l1, l2, n, -u, own);
            let rhs = subst_scale(l1, l2, &prev(-u, own), own) * (w * own.bracket(u) * own.bracketf(nf) * own.powf(a1 - a2));
            out.push(LawResidual { law: law_name(tag, 2), n, residual: rel_residual_vec(&lhs, &rhs) });

            let lhs = lower * product_vector(l1, l2, n, -u, other);
            let rhs = prev(-u, other) * (w * own.bracketf(nf) * own.bracketf(nf - 1.0 - a1 - a2));
            out.push(LawResidual { law: law_name(tag, 3), n, residual: rel_residual_vec(&lhs, &rhs) });
        }
    }
    Ok(out)
}

fn law_name(tag: &str, i: usize) -> &'static str {
    match (tag.is_empty(), i) {
        (true, 0) => "lower phi(u)",
        (true, 1) => "lower phibar(u)",
        (true, 2) => "lower phi(-u)",
        (true, 3) => "lower phibar(-u)",
        (false, 0) => "bar lower phibar(u)",
        (false, 1) => "bar lower phi(u)",
        (false, 2) => "bar lower phibar(-u)",
        _ => "bar lower phi(-u)",
    }
}
