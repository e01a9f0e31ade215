//! Universal R-operator: eigenvalue recurrences, spectral assembly of the
//! matrix on the product basis, and the closed forms for small spins.

use num_complex::Complex64;

use crate::dd::DdComplex;
use crate::error::{Error, Result};
use crate::linalg::{checked_inverse, diag, max_abs, normalize_by_max, rel_residual, CMat, CVec};
use crate::qcore::{re, DeformationParameter};
use crate::rep::{build_classical_rep, classical_tensor, SpinLabel};
use crate::tensorrep::{lowest_weight_vectors, stacked_basis, to_descending_frame, EigenSector, CHAIN_CUTOFF};

/// `|[·]_q|` below this marks a pole (or zero) of an eigenvalue ratio.
pub const POLE_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RMode {
    Xxz(DeformationParameter),
    /// Classical limit: plain numbers instead of q-numbers.
    Xxx,
}

impl RMode {
    fn bracket(&self, x: Complex64) -> Complex64 {
        match self {
            RMode::Xxz(q) => q.bracket(x),
            RMode::Xxx => x,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            RMode::Xxz(_) => "xxz",
            RMode::Xxx => "xxx",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct REigenvalues {
    pub values: Vec<Complex64>,
    pub r0: Complex64,
    pub mode: RMode,
}

fn sector_args(l1: SpinLabel, l2: SpinLabel, n: usize, u: Complex64) -> (Complex64, Complex64) {
    let a = l1.value() + l2.value() + 1.0 - n as f64;
    (re(a) - u, re(a) + u)
}

/// `R_N` for `N = 0..=nmax` from `R_N = -R_{N-1}[ℓ₁+ℓ₂+1-N-u]/[ℓ₁+ℓ₂+1-N+u]`.
pub fn eigenvalue_sequence(
    l1: SpinLabel,
    l2: SpinLabel,
    u: Complex64,
    mode: RMode,
    nmax: usize,
    r0: Complex64,
) -> Result<REigenvalues> {
    let mut values = vec![r0];
    let mut acc = DdComplex::from(r0);
    for n in 1..=nmax {
        let (num, den) = sector_args(l1, l2, n, u);
        let den = mode.bracket(den);
        if den.norm() < POLE_THRESHOLD {
            return Err(Error::PoleAtSector(n));
        }
        acc = acc.mul(DdComplex::from(mode.bracket(num))).div(DdComplex::from(den)).neg();
        values.push(acc.to_c64());
    }
    Ok(REigenvalues { values, r0, mode })
}

/// `R_N = (-1)^N R₀ ∏_{n=1}^N [ℓ₁+ℓ₂+1-n-u] / ∏_{n=1}^N [ℓ₁+ℓ₂+1-n+u]`,
/// numerator and denominator accumulated separately.
///
/// Both this and [`eigenvalue_sequence`] carry double-double intermediates, so
/// they agree to the last bit for the same bracket values.
pub fn eigenvalue_product(
    l1: SpinLabel,
    l2: SpinLabel,
    u: Complex64,
    mode: RMode,
    nmax: usize,
    r0: Complex64,
) -> Result<Vec<Complex64>> {
    (0..=nmax)
        .map(|big_n| {
            let mut num = DdComplex::from(r0);
            let mut den = DdComplex::from(re(1.0));
            for n in 1..=big_n {
                let (a, b) = sector_args(l1, l2, n, u);
                let b = mode.bracket(b);
                if b.norm() < POLE_THRESHOLD {
                    return Err(Error::PoleAtSector(n));
                }
                num = num.mul(DdComplex::from(mode.bracket(a)));
                den = den.mul(DdComplex::from(b));
            }
            let ratio = num.div(den);
            Ok(if big_n % 2 == 0 { ratio } else { ratio.neg() }.to_c64())
        })
        .collect()
}

/// Ratios `R_N / R₀` with spin powers taken from `q_spin` and `q^{±u}` from
/// `q_spectral`; both carry the same `q` but possibly different log branches.
pub fn eigenvalue_ratios_split(
    l1: SpinLabel,
    l2: SpinLabel,
    u: Complex64,
    q_spin: &DeformationParameter,
    q_spectral: &DeformationParameter,
    nmax: usize,
) -> Result<Vec<Complex64>> {
    let (qu, qmu) = (q_spectral.pow(u), q_spectral.pow(-u));
    let d = q_spin.denom();
    let mut out = vec![re(1.0)];
    for n in 1..=nmax {
        let a = l1.value() + l2.value() + 1.0 - n as f64;
        let (pa, ma) = (q_spin.powf(a), q_spin.powf(-a));
        let num = (pa * qmu - ma * qu) / d;
        let den = (pa * qu - ma * qmu) / d;
        if den.norm() < POLE_THRESHOLD {
            return Err(Error::PoleAtSector(n));
        }
        let prev = out[n - 1];
        out.push(-prev * num / den);
    }
    Ok(out)
}

/// Smallest `|[ℓ₁+ℓ₂+1-n±u]|` over the sectors; samples below
/// [`POLE_THRESHOLD`] are redrawn by the verification suites.
pub fn pole_margin(l1: SpinLabel, l2: SpinLabel, u: Complex64, mode: RMode) -> f64 {
    let nmax = l1.twice().min(l2.twice()) as usize;
    let mut m = f64::INFINITY;
    for n in 1..=nmax {
        for s in [1.0, -1.0] {
            let (a, b) = sector_args(l1, l2, n, u * s);
            m = m.min(mode.bracket(a).norm()).min(mode.bracket(b).norm());
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    /// Monomial product basis, `x₁`-major.
    pub matrix: CMat,
    pub u: Complex64,
    pub mode: RMode,
    pub spins: (SpinLabel, SpinLabel),
    pub eigenvalues: REigenvalues,
    pub normalization: String,
}

fn repeat_diag(sectors: &[EigenSector], values: &[Complex64]) -> CMat {
    let d: Vec<Complex64> = sectors
        .iter()
        .flat_map(|s| std::iter::repeat_n(values[s.n], s.descendants.len()))
        .collect();
    diag(&d)
}

/// Solves `R Φ(u) = Φ̄(-u) D` where the columns of `Φ(u)` are `(S⁺_u)^m φ_N(u)`,
/// those of `Φ̄(-u)` are `(S̄⁺_{-u})^m φ̄_N(-u)`, and `D` repeats `R_N` over `m`.
pub fn assemble_r(l1: SpinLabel, l2: SpinLabel, u: Complex64, mode: RMode, r0: Complex64) -> Result<RMatrix> {
    let nmax = l1.twice().min(l2.twice()) as usize;
    let eigenvalues = eigenvalue_sequence(l1, l2, u, mode, nmax, r0)?;
    let matrix = match mode {
        RMode::Xxz(q) => {
            let at_u = lowest_weight_vectors(l1, l2, u, &q)?;
            let at_mu = lowest_weight_vectors(l1, l2, -u, &q)?;
            let phi = stacked_basis(&at_u, false);
            let phibar = stacked_basis(&at_mu, true);
            let d = repeat_diag(&at_u, &eigenvalues.values);
            phibar * d * checked_inverse(&phi)?
        }
        RMode::Xxx => {
            let (phi, d) = classical_basis(l1, l2, &eigenvalues.values);
            &phi * d * checked_inverse(&phi)?
        }
    };
    Ok(RMatrix {
        matrix,
        u,
        mode,
        spins: (l1, l2),
        eigenvalues,
        normalization: format!("R0 = {r0}"),
    })
}

/// Columns `(S₁⁺ + S₂⁺)^m (x₁ - x₂)^N` of the classical product basis and the
/// matching eigenvalue diagonal.
pub fn classical_basis(l1: SpinLabel, l2: SpinLabel, values: &[Complex64]) -> (CMat, CMat) {
    let tensor = classical_tensor(&build_classical_rep(l1), &build_classical_rep(l2));
    let (d1, d2) = (l1.dim(), l2.dim());
    let nmax = l1.twice().min(l2.twice()) as usize;
    let mut cols = Vec::new();
    let mut d = Vec::new();
    for n in 0..=nmax {
        let mut v = CVec::zeros(d1 * d2);
        let mut binom = 1.0;
        for j in 0..=n {
            let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
            v[j * d2 + (n - j)] = re(sign * binom);
            binom = binom * (n - j) as f64 / (j + 1) as f64;
        }
        let len = (l1.twice() + l2.twice()) as usize - 2 * n + 1;
        for _ in 0..len {
            if crate::linalg::max_abs_vec(&v) < CHAIN_CUTOFF {
                break;
            }
            cols.push(v.clone());
            d.push(values[n]);
            v = &tensor.sp * v;
        }
    }
    (CMat::from_columns(&cols), diag(&d))
}

/// Residuals of `R(u)φ^m_N(u) = R_N φ̄^m_N(-u)` and `R(u)φ̄^m_N(u) = R_N φ^m_N(-u)`.
pub fn eigenproblem_residuals(r: &RMatrix) -> Result<(f64, f64)> {
    let q = match r.mode {
        RMode::Xxz(q) => q,
        RMode::Xxx => return Err(Error::WrongMode { expected: "generic (XXZ)" }),
    };
    let (l1, l2) = r.spins;
    let at_u = lowest_weight_vectors(l1, l2, r.u, &q)?;
    let at_mu = lowest_weight_vectors(l1, l2, -r.u, &q)?;
    let d = repeat_diag(&at_u, &r.eigenvalues.values);
    let fwd = rel_residual(&(&r.matrix * stacked_basis(&at_u, false)), &(stacked_basis(&at_mu, true) * &d));
    let bwd = rel_residual(&(&r.matrix * stacked_basis(&at_u, true)), &(stacked_basis(&at_mu, false) * &d));
    Ok((fwd, bwd))
}

/// `[R, q^{a(S₁+S₂)}]` relative residual at `a = 1`.
pub fn weight_commutation_residual(r: &RMatrix) -> f64 {
    let (l1, l2) = r.spins;
    let d2 = l2.dim();
    let w: Vec<Complex64> = (0..l1.dim() * d2)
        .map(|i| {
            let (j, k) = (i / d2, i % d2);
            let x = j as f64 - l1.value() + k as f64 - l2.value();
            match r.mode {
                RMode::Xxz(q) => q.powf(x),
                // e^{x} is a generic diagonal function of the weight.
                RMode::Xxx => re(x.exp()),
            }
        })
        .collect();
    let k = diag(&w);
    rel_residual(&(&r.matrix * &k), &(&k * &r.matrix))
}

/// The three known closed forms, in orthonormal descending-weight frame.
pub fn closed_form_r(l1: SpinLabel, l2: SpinLabel, u: Complex64, q: &DeformationParameter) -> Result<CMat> {
    let b = |x: Complex64| q.bracket(x);
    match (l1.twice(), l2.twice()) {
        (1, 1) => Ok(fundamental_r(u, q)),
        (1, 2) => {
            let mut m = CMat::zeros(6, 6);
            let s2 = b(re(2.0)).sqrt();
            m[(0, 0)] = b(u + 1.5);
            m[(5, 5)] = b(u + 1.5);
            m[(1, 1)] = b(u + 0.5);
            m[(4, 4)] = b(u + 0.5);
            m[(2, 2)] = b(u - 0.5);
            m[(3, 3)] = b(u - 0.5);
            for (i, j) in [(1, 3), (3, 1), (2, 4), (4, 2)] {
                m[(i, j)] = s2;
            }
            Ok(m)
        }
        (2, 2) => {
            let mut m = CMat::zeros(9, 9);
            let two = b(re(2.0));
            let (b0, b1, b2, bm1) = (b(u), b(u + 1.0), b(u + 2.0), b(u - 1.0));
            m[(0, 0)] = b1 * b2;
            m[(8, 8)] = b1 * b2;
            for i in [1, 3, 5, 7] {
                m[(i, i)] = b0 * b1;
            }
            for (i, j) in [(1, 3), (3, 1), (5, 7), (7, 5)] {
                m[(i, j)] = two * b1;
            }
            m[(2, 2)] = b0 * bm1;
            m[(6, 6)] = b0 * bm1;
            for (i, j) in [(2, 4), (4, 2), (4, 6), (6, 4)] {
                m[(i, j)] = two * b0;
            }
            m[(2, 6)] = two;
            m[(6, 2)] = two;
            m[(4, 4)] = b0 * b1 + two;
            Ok(m)
        }
        _ => Err(Error::UnsupportedPair(l1.to_string(), l2.to_string())),
    }
}

/// `[[a,0,0,0],[0,b,c,0],[0,c,b,0],[0,0,0,a]]` with `a = q^{u+1}-q^{-u-1}`,
/// `b = q^u-q^{-u}`, `c = q-q⁻¹`.
pub fn fundamental_r(u: Complex64, q: &DeformationParameter) -> CMat {
    let a = q.pow(u + 1.0) - q.pow(-u - 1.0);
    let b = q.pow(u) - q.pow(-u);
    abc_matrix(a, b, q.denom())
}

/// Rational `a = u+1`, `b = u`, `c = 1`.
pub fn fundamental_r_xxx(u: Complex64) -> CMat {
    abc_matrix(u + 1.0, u, re(1.0))
}

pub fn abc_matrix(a: Complex64, b: Complex64, c: Complex64) -> CMat {
    let z = Complex64::default();
    CMat::from_row_slice(4, 4, &[a, z, z, z, z, b, c, z, z, c, b, z, z, z, z, a])
}

/// Entrywise deviation between the assembled `R` (moved into the reference
/// frame) and the closed form, both divided by their largest entry.
pub fn golden_deviation(l1: SpinLabel, l2: SpinLabel, u: Complex64, q: &DeformationParameter) -> Result<f64> {
    let r = assemble_r(l1, l2, u, RMode::Xxz(*q), re(1.0))?;
    let framed = normalize_by_max(&to_descending_frame(&r.matrix, l1, l2, q));
    let gold = normalize_by_max(&closed_form_r(l1, l2, u, q)?);
    Ok(max_abs(&(framed - gold)))
}
