//! Identity checks producing [`ResidualReport`]s: Yang-Baxter (fundamental,
//! RLL, Lax form), the decomposed relations of R, unitarity, Casimir spectra,
//! root-of-unity identities and branch independence.
//!
//! Every sampled check draws its points from a stream keyed by
//! `(rng_seed, identity_id)`, so a report is reproducible from its id and the
//! configuration alone.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclic::{
    central_elements, eigenstate_family, cyclic_r_eigenvalues, cyclic_ratio_exponent, tensor_power_check,
    CyclicRepSpec,
};
use crate::error::{Error, Result};
use crate::linalg::{embed_13, eye, kron, max_abs, rel_residual, CMat};
use crate::qcore::{phi_identity_check, re, DeformationParameter, Sampler, ToleranceConfig};
use crate::rep::{
    build_classical_lax, build_classical_rep, build_lax, build_spin_rep, casimir, Basis, OperatorTriple, SpinLabel,
};
use crate::rop::{
    assemble_r, eigenvalue_product, eigenvalue_ratios_split, eigenvalue_sequence, fundamental_r, fundamental_r_xxx,
    pole_margin, RMatrix, RMode,
};
use crate::tensorrep::{lowest_weight_agreement, tensor_casimir, CoproductKind, TwistedCoproduct};

/// Samples closer than this to a pole or zero of an eigenvalue ratio are redrawn.
pub const SAMPLE_POLE_MARGIN: f64 = 1e-3;

/// Spin pairs with closed forms.
pub const GOLDEN_PAIRS: [(u32, u32); 3] = [(1, 1), (1, 2), (2, 2)];

fn pair(p: (u32, u32)) -> (SpinLabel, SpinLabel) {
    (SpinLabel::from_twice(p.0), SpinLabel::from_twice(p.1))
}

fn pair_name(p: (u32, u32)) -> String {
    let (a, b) = pair(p);
    format!("({a},{b})")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub q: [f64; 2],
    pub u: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub v: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub params: Vec<(String, [f64; 2])>,
    pub residual: f64,
}

fn pair_of(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl Sample {
    pub fn new(q: Complex64, u: Complex64, residual: f64) -> Self {
        Self { q: pair_of(q), u: pair_of(u), v: None, params: Vec::new(), residual }
    }

    pub fn with_v(mut self, v: Complex64) -> Self {
        self.v = Some(pair_of(v));
        self
    }

    pub fn with_param(mut self, name: &str, z: Complex64) -> Self {
        self.params.push((name.to_string(), pair_of(z)));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub identity_id: String,
    pub samples: Vec<Sample>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl ResidualReport {
    /// `verdict = pass` iff `max_residual < tolerance` (NaN fails).
    pub fn new(identity_id: impl Into<String>, samples: Vec<Sample>, tolerance: f64) -> Self {
        let max_residual = samples.iter().fold(0.0f64, |a, s| if s.residual.is_nan() { f64::NAN } else { a.max(s.residual) });
        let verdict = if max_residual < tolerance { Verdict::Pass } else { Verdict::Fail };
        Self { identity_id: identity_id.into(), samples, max_residual, tolerance, verdict }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn summary_line(&self) -> String {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        format!("{tag}  {:<52} max {:.3e}  tol {:.0e}  n={}", self.identity_id, self.max_residual, self.tolerance, self.samples.len())
    }
}

/// Entry perturbation applied to assembled R-matrices (negative controls).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Perturbation {
    pub epsilon: f64,
}

impl Perturbation {
    pub fn none() -> Self {
        Self { epsilon: 0.0 }
    }

    /// Adds `ε·max|R|` to the top-right entry, which breaks weight conservation.
    pub fn apply(&self, m: &CMat) -> CMat {
        let mut out = m.clone();
        if self.epsilon != 0.0 {
            let n = out.ncols();
            out[(0, n - 1)] += re(self.epsilon * max_abs(m));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// point checks

/// `R₁₂(u-v)R₁₃(u)R₂₃(v) = R₂₃(v)R₁₃(u)R₁₂(u-v)` for a 4×4 `R`.
pub fn fundamental_ybe_residual(r: &dyn Fn(Complex64) -> CMat, u: Complex64, v: Complex64) -> f64 {
    let i2 = eye(2);
    let r12 = kron(&r(u - v), &i2);
    let r13 = embed_13(&r(u), 2, 2, 2);
    let r23 = kron(&i2, &r(v));
    rel_residual(&(&r12 * &r13 * &r23), &(&r23 * &r13 * &r12))
}

fn rll_core(r: &CMat, la: &CMat, lb: &CMat, d: usize) -> f64 {
    // a ⊗ b ⊗ V: L_a acts on (a, V), L_b on (b, V).
    let la = embed_13(la, 2, 2, d);
    let lb = kron(&eye(2), lb);
    let rab = kron(r, &eye(d));
    rel_residual(&(&rab * &la * &lb), &(&lb * &la * &rab))
}

/// `R_ab(u-v) L_a(u) L_b(v) = L_b(v) L_a(u) R_ab(u-v)` with the XXZ Lax operator.
pub fn rll_residual(rep: &OperatorTriple, u: Complex64, v: Complex64) -> f64 {
    rll_core(&fundamental_r(u - v, rep.q()), &build_lax(rep, u), &build_lax(rep, v), rep.dim())
}

pub fn rll_residual_xxx(spin: SpinLabel, u: Complex64, v: Complex64) -> f64 {
    let rep = build_classical_rep(spin);
    rll_core(&fundamental_r_xxx(u - v), &build_classical_lax(&rep, u), &build_classical_lax(&rep, v), rep.dim())
}

/// `R(u-v) L₁(u) L₂(v) = L₂(v) L₁(u) R(u-v)` on `aux ⊗ V₁ ⊗ V₂`, with `R = r`
/// assembled at `u - v`.
pub fn lax_ybe_residual(r: &RMatrix, q: &DeformationParameter, v: Complex64) -> Result<f64> {
    let (l1, l2) = r.spins;
    let u = r.u + v;
    let r1 = build_spin_rep(l1, q, Basis::Monomial)?;
    let r2 = build_spin_rep(l2, q, Basis::Monomial)?;
    let (d1, d2) = (l1.dim(), l2.dim());
    let lax1 = kron(&build_lax(&r1, u), &eye(d2));
    let lax2 = embed_13(&build_lax(&r2, v), 2, d1, d2);
    let rr = kron(&eye(2), &r.matrix);
    Ok(rel_residual(&(&rr * &lax1 * &lax2), &(&lax2 * &lax1 * &rr)))
}

/// Residuals of the relations that make up the Yang-Baxter equation for
/// spins `(ℓ₁, ℓ₂, 1/2)`, plus Casimir intertwining.
#[derive(Clone, Debug, PartialEq)]
pub struct DecomposedResiduals {
    pub items: Vec<(&'static str, f64)>,
    /// The `K` relations hold whenever the symmetry relations do.
    pub k_conditional_ok: bool,
}

impl DecomposedResiduals {
    pub fn max(&self) -> f64 {
        self.items.iter().fold(0.0, |a, (_, r)| a.max(*r))
    }
}

const SYMMETRY_IDS: [&str; 5] = [
    "[R, q^(S1+S2)] = 0",
    "R S_u^- = Sbar_-u^- R",
    "R S_u^+ = Sbar_-u^+ R",
    "R Sbar_u^- = S_-u^- R",
    "R Sbar_u^+ = S_-u^+ R",
];

/// Checks `matrix` (monomial basis) against the relations at `u`.
pub fn decomposed_residuals(
    matrix: &CMat,
    l1: SpinLabel,
    l2: SpinLabel,
    u: Complex64,
    q: &DeformationParameter,
    tol: f64,
) -> Result<DecomposedResiduals> {
    let sp = |kind, w| TwistedCoproduct::spin(l1, l2, kind, w, q, Basis::Monomial);
    let d_u = sp(CoproductKind::Delta, u)?;
    let d_mu = sp(CoproductKind::Delta, -u)?;
    let b_u = sp(CoproductKind::DeltaBar, u)?;
    let b_mu = sp(CoproductKind::DeltaBar, -u)?;
    let r = matrix;
    let inter = |a: &CMat, b: &CMat| rel_residual(&(r * a), &(b * r));

    let k = d_u.gens.q_pow_sf(1.0);
    let mut items = vec![
        (SYMMETRY_IDS[0], inter(&k, &k)),
        (SYMMETRY_IDS[1], inter(&d_u.gens.sm, &b_mu.gens.sm)),
        (SYMMETRY_IDS[2], inter(&d_u.gens.sp, &b_mu.gens.sp)),
        (SYMMETRY_IDS[3], inter(&b_u.gens.sm, &d_mu.gens.sm)),
        (SYMMETRY_IDS[4], inter(&b_u.gens.sp, &d_mu.gens.sp)),
    ];

    let r1 = build_spin_rep(l1, q, Basis::Monomial)?;
    let r2 = build_spin_rep(l2, q, Basis::Monomial)?;
    let (i1, i2) = (eye(l1.dim()), eye(l2.dim()));
    let s1 = |m: &CMat| kron(m, &i2);
    let s2 = |m: &CMat| kron(&i1, m);
    // q^{±u + S₁ - S₂} etc. are diagonal: q^{±u} q^{S₁} q^{-S₂}
    let k12 = s1(&r1.q_pow_sf(1.0)) * s2(&r2.q_pow_sf(-1.0));
    let k21 = s1(&r1.q_pow_sf(-1.0)) * s2(&r2.q_pow_sf(1.0));
    let (qu, qmu) = (q.pow(u), q.pow(-u));
    let w2 = q.denom() * q.denom();
    let m1p2 = s1(&r1.sm) * s2(&r2.sp);
    let p1m2 = s1(&r1.sp) * s2(&r2.sm);
    let base_pm = &k12 * qu + &k21 * qmu;
    let base_mp = &k21 * qu + &k12 * qmu;
    items.push(("R K^{+-} = Kbar^{+-} R", inter(&(&base_pm - &m1p2 * w2), &(&base_pm - &p1m2 * w2))));
    items.push(("R K^{-+} = Kbar^{-+} R", inter(&(&base_mp - &p1m2 * w2), &(&base_mp - &m1p2 * w2))));

    items.push(("R C_u = Cbar_-u R", inter(&casimir(&d_u.gens), &casimir(&b_mu.gens))));
    items.push(("C_-u R = R Cbar_u", inter(&casimir(&b_u.gens), &casimir(&d_mu.gens))));

    let sym_ok = items[..5].iter().all(|(_, x)| *x < tol);
    let k_ok = items[5..7].iter().all(|(_, x)| *x < tol);
    Ok(DecomposedResiduals { items, k_conditional_ok: !sym_ok || k_ok })
}

/// `max|R(u)R(-u) - I|` relative to `max(1, max|R(u)R(-u)|)`.
pub fn unitarity_residual(build: &dyn Fn(Complex64) -> Result<CMat>, u: Complex64) -> Result<f64> {
    let a = build(u)?;
    let b = build(-u)?;
    let prod = &a * &b;
    Ok(rel_residual(&prod, &eye(prod.nrows())))
}

/// Largest relative change of `R_N/R₀` when spin powers are taken on the
/// branch `log q + 2πik`, `k = ±1`, with `q^u` held fixed.
pub fn branch_independence_residual(l1: SpinLabel, l2: SpinLabel, u: Complex64, q: &DeformationParameter) -> Result<f64> {
    let nmax = l1.twice().min(l2.twice()) as usize;
    let base = eigenvalue_ratios_split(l1, l2, u, q, q, nmax)?;
    let mut worst: f64 = 0.0;
    for k in [1, -1] {
        let other = eigenvalue_ratios_split(l1, l2, u, &q.with_branch_shift(k), q, nmax)?;
        for (a, b) in base.iter().zip(&other) {
            worst = worst.max((a - b).norm() / a.norm().max(b.norm()).max(1e-300));
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// sampled suites

/// A generic `q` and a `u` away from the poles of the pairs involved.
pub fn draw_point(s: &mut Sampler, pairs: &[(u32, u32)]) -> (DeformationParameter, Complex64) {
    loop {
        let q = s.generic_q();
        let u = s.spectral();
        let ok = pairs.iter().all(|&p| {
            let (a, b) = pair(p);
            pole_margin(a, b, u, RMode::Xxz(q)) > SAMPLE_POLE_MARGIN
                && pole_margin(a, b, u, RMode::Xxx) > SAMPLE_POLE_MARGIN
                && q.bracket(u).norm() > SAMPLE_POLE_MARGIN
        });
        if ok {
            return (q, u);
        }
    }
}

fn sampled<F>(id: &str, cfg: &ToleranceConfig, tol: f64, mut f: F) -> ResidualReport
where
    F: FnMut(&mut Sampler) -> Sample,
{
    let mut s = Sampler::for_identity(cfg.rng_seed, id);
    let samples = (0..cfg.sample_count).map(|_| f(&mut s)).collect();
    ResidualReport::new(id, samples, tol)
}

fn or_nan(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

pub fn check_fundamental_ybe(cfg: &ToleranceConfig) -> Vec<ResidualReport> {
    let xxz = sampled("ybe/fundamental/xxz", cfg, cfg.abs_tol, |s| {
        let q = s.generic_q();
        let (u, v) = (s.spectral(), s.spectral());
        Sample::new(q.value(), u, fundamental_ybe_residual(&|w| fundamental_r(w, &q), u, v)).with_v(v)
    });
    let xxx = sampled("ybe/fundamental/xxx", cfg, cfg.abs_tol, |s| {
        let (u, v) = (s.spectral(), s.spectral());
        Sample::new(re(1.0), u, fundamental_ybe_residual(&fundamental_r_xxx, u, v)).with_v(v)
    });
    vec![xxz, xxx]
}

pub fn check_rll(spin: SpinLabel, cfg: &ToleranceConfig) -> ResidualReport {
    sampled(&format!("rll/spin {spin}"), cfg, cfg.abs_tol, |s| {
        let q = s.generic_q();
        let (u, v) = (s.spectral(), s.spectral());
        let r = build_spin_rep(spin, &q, Basis::Monomial).map(|rep| rll_residual(&rep, u, v));
        Sample::new(q.value(), u, or_nan(r)).with_v(v)
    })
}

pub fn check_rll_xxx(spin: SpinLabel, cfg: &ToleranceConfig) -> ResidualReport {
    sampled(&format!("rll/xxx spin {spin}"), cfg, cfg.abs_tol, |s| {
        let (u, v) = (s.spectral(), s.spectral());
        Sample::new(re(1.0), u, rll_residual_xxx(spin, u, v)).with_v(v)
    })
}

pub fn check_rll_cyclic(order: u32, cfg: &ToleranceConfig) -> ResidualReport {
    sampled(&format!("rll/cyclic N={order}"), cfg, cfg.rel_tol, |s| {
        let (a, b, l) = (s.unit_complex(), s.unit_complex(), s.unit_complex());
        let (u, v) = (s.spectral(), s.spectral());
        let r = CyclicRepSpec::new(a, b, l, order).map(|spec| {
            let rep = crate::cyclic::build_cyclic_rep(&spec);
            rll_residual(&rep.triple, u, v)
        });
        Sample::new(DeformationParameter::root_of_unity(order).map(|q| q.value()).unwrap_or_default(), u, or_nan(r))
            .with_v(v)
            .with_param("alpha", a)
            .with_param("beta", b)
            .with_param("lambda", l)
    })
}

/// Decomposed relations (one report per relation and pair) and the Lax-form YBE.
pub fn check_decomposed_ybe(p: (u32, u32), cfg: &ToleranceConfig, perturb: Perturbation) -> Vec<ResidualReport> {
    let (l1, l2) = pair(p);
    let name = pair_name(p);
    let ids: Vec<&'static str> = {
        let mut v = SYMMETRY_IDS.to_vec();
        v.extend(["R K^{+-} = Kbar^{+-} R", "R K^{-+} = Kbar^{-+} R", "R C_u = Cbar_-u R", "C_-u R = R Cbar_u"]);
        v
    };
    let mut per_id: Vec<Vec<Sample>> = vec![Vec::new(); ids.len()];
    let mut lax = Vec::new();
    let mut cond = Vec::new();
    let mut s = Sampler::for_identity(cfg.rng_seed, &format!("decomposed/{name}"));
    for _ in 0..cfg.sample_count {
        let (q, u) = draw_point(&mut s, &[p]);
        let v = s.spectral();
        let r = assemble_r(l1, l2, u, RMode::Xxz(q), re(1.0)).map(|mut r| {
            r.matrix = perturb.apply(&r.matrix);
            r
        });
        match r {
            Ok(r) => {
                let d = decomposed_residuals(&r.matrix, l1, l2, u, &q, cfg.abs_tol);
                match d {
                    Ok(d) => {
                        for (i, (_, res)) in d.items.iter().enumerate() {
                            per_id[i].push(Sample::new(q.value(), u, *res));
                        }
                        cond.push(Sample::new(q.value(), u, if d.k_conditional_ok { 0.0 } else { 1.0 }));
                    }
                    Err(_) => per_id.iter_mut().for_each(|x| x.push(Sample::new(q.value(), u, f64::NAN))),
                }
                lax.push(Sample::new(q.value(), u, or_nan(lax_ybe_residual(&r, &q, v))).with_v(v));
            }
            Err(_) => {
                per_id.iter_mut().for_each(|x| x.push(Sample::new(q.value(), u, f64::NAN)));
                lax.push(Sample::new(q.value(), u, f64::NAN).with_v(v));
            }
        }
    }
    let mut out: Vec<ResidualReport> = ids
        .iter()
        .zip(per_id)
        .map(|(id, samples)| ResidualReport::new(format!("decomposed/{name} {id}"), samples, cfg.abs_tol))
        .collect();
    out.push(ResidualReport::new(format!("decomposed/{name} K follows symmetry"), cond, 0.5));
    out.push(ResidualReport::new(format!("ybe/lax {name}"), lax, cfg.abs_tol));
    out
}

fn golden_builder(l1: SpinLabel, l2: SpinLabel, q: DeformationParameter, perturb: Perturbation) -> impl Fn(Complex64) -> Result<CMat> {
    move |w| assemble_r(l1, l2, w, RMode::Xxz(q), re(1.0)).map(|r| perturb.apply(&r.matrix))
}

pub fn check_unitarity(p: (u32, u32), cfg: &ToleranceConfig, perturb: Perturbation) -> ResidualReport {
    let (l1, l2) = pair(p);
    sampled(&format!("unitarity/{}", pair_name(p)), cfg, cfg.rel_tol, |s| {
        let (q, u) = draw_point(s, &[p]);
        let b = golden_builder(l1, l2, q, perturb);
        Sample::new(q.value(), u, or_nan(unitarity_residual(&b, u)))
    })
}

pub fn check_unitarity_xxx(p: (u32, u32), cfg: &ToleranceConfig, perturb: Perturbation) -> ResidualReport {
    let (l1, l2) = pair(p);
    sampled(&format!("unitarity/xxx {}", pair_name(p)), cfg, cfg.rel_tol, |s| {
        let (_, u) = draw_point(s, &[p]);
        let b = move |w| assemble_r(l1, l2, w, RMode::Xxx, re(1.0)).map(|r| perturb.apply(&r.matrix));
        Sample::new(re(1.0), u, or_nan(unitarity_residual(&b, u)))
    })
}

pub fn check_casimir(p: (u32, u32), cfg: &ToleranceConfig) -> ResidualReport {
    let (l1, l2) = pair(p);
    sampled(&format!("casimir/{}", pair_name(p)), cfg, cfg.abs_tol, |s| {
        let (q, u) = draw_point(s, &[p]);
        let mut worst: f64 = 0.0;
        for kind in [CoproductKind::Delta, CoproductKind::DeltaBar] {
            let r = TwistedCoproduct::spin(l1, l2, kind, u, &q, Basis::Monomial).and_then(|c| tensor_casimir(&c, &q));
            worst = match r {
                Ok(rep) => {
                    let scale = rep.sectors.iter().fold(1.0f64, |a, x| a.max(x.expected.norm()));
                    worst.max(rep.max_residual()).max(rep.max_spread() / scale)
                }
                Err(_) => f64::NAN,
            };
        }
        Sample::new(q.value(), u, worst)
    })
}

pub fn check_branch_independence(p: (u32, u32), cfg: &ToleranceConfig) -> ResidualReport {
    let (l1, l2) = pair(p);
    sampled(&format!("branch/{}", pair_name(p)), cfg, cfg.abs_tol, |s| {
        let (q, u) = draw_point(s, &[p]);
        Sample::new(q.value(), u, or_nan(branch_independence_residual(l1, l2, u, &q)))
    })
}

pub fn check_recurrence(cfg: &ToleranceConfig) -> Vec<ResidualReport> {
    let one = |mode_xxx: bool| {
        let id = if mode_xxx { "eigenvalues/recurrence vs product xxx" } else { "eigenvalues/recurrence vs product xxz" };
        sampled(id, cfg, 1e-12, |s| {
            let q = s.generic_q();
            let u = s.spectral();
            let mode = if mode_xxx { RMode::Xxx } else { RMode::Xxz(q) };
            let mut worst: f64 = 0.0;
            for t1 in 0..=6 {
                for t2 in 0..=6 {
                    let (l1, l2) = (SpinLabel::from_twice(t1), SpinLabel::from_twice(t2));
                    let rec = eigenvalue_sequence(l1, l2, u, mode, 6, re(1.0));
                    let prod = eigenvalue_product(l1, l2, u, mode, 6, re(1.0));
                    match (rec, prod) {
                        (Ok(a), Ok(b)) => {
                            for (x, y) in a.values.iter().zip(&b) {
                                worst = worst.max((x - y).norm() / y.norm().max(1.0));
                            }
                        }
                        (Err(Error::PoleAtSector(_)), Err(Error::PoleAtSector(_))) => {}
                        _ => worst = f64::NAN,
                    }
                }
            }
            Sample::new(if mode_xxx { re(1.0) } else { q.value() }, u, worst)
        })
    };
    vec![one(false), one(true)]
}

pub fn check_lowest_weight_oracle(p: (u32, u32), cfg: &ToleranceConfig) -> ResidualReport {
    let (l1, l2) = pair(p);
    sampled(&format!("lowest-weight/{} null-space", pair_name(p)), cfg, cfg.abs_tol, |s| {
        let (q, u) = draw_point(s, &[p]);
        let mut worst: f64 = 0.0;
        for n in 0..=p.0.min(p.1) as usize {
            worst = worst.max(lowest_weight_agreement(l1, l2, n, u, &q).map(|c| 1.0 - c).unwrap_or(f64::NAN));
        }
        Sample::new(q.value(), u, worst)
    })
}

fn random_cyclic(s: &mut Sampler, n: u32) -> CyclicRepSpec {
    CyclicRepSpec::new(s.unit_complex(), s.unit_complex(), s.unit_complex(), n).expect("odd order")
}

/// Two specs and `u` on the locus where `φ_m` and `φ̄_m` both close.
pub fn closed_cyclic_pair(s: &mut Sampler, n: u32) -> (CyclicRepSpec, CyclicRepSpec, Complex64) {
    let (a1, b1, l1, a2) = (s.unit_complex(), s.unit_complex(), s.unit_complex(), s.unit_complex());
    let u = s.spectral();
    let l2 = l1 + 1.0;
    // u + X = 2 with λ₂ - λ₁ = 1 forces -u + Y = -1, so r = 1 and s = q.
    let b2 = (2.0 - u) * 2.0 - (b1 - a1 - a2 + l2 - l1);
    let q = DeformationParameter::root_of_unity(n).expect("odd order");
    let s1 = CyclicRepSpec::with_q(a1, b1, l1, q).expect("root of unity");
    let s2 = CyclicRepSpec::with_q(a2, b2, l2, q).expect("root of unity");
    (s1, s2, u)
}

pub fn check_cyclic(order: u32, cfg: &ToleranceConfig) -> Vec<ResidualReport> {
    let qv = DeformationParameter::root_of_unity(order).map(|q| q.value()).unwrap_or_default();
    let centrality = sampled(&format!("cyclic/N={order} centrality single"), cfg, cfg.abs_tol, |s| {
        let spec = random_cyclic(s, order);
        let r = central_elements(&spec).map(|c| c.max_offscalar_residual);
        Sample::new(qv, re(0.0), r.unwrap_or_else(|e| if let Error::NotScalar { residual, .. } = e { residual } else { f64::NAN }))
            .with_param("alpha", spec.alpha)
            .with_param("beta", spec.beta)
            .with_param("lambda", spec.lambda)
    });
    let closed = sampled(&format!("cyclic/N={order} central values vs closed forms"), cfg, cfg.abs_tol, |s| {
        let spec = random_cyclic(s, order);
        Sample::new(qv, re(0.0), or_nan(central_elements(&spec).map(|c| c.closed_form_residual)))
    });
    let tensor = sampled(&format!("cyclic/N={order} centrality tensor"), cfg, cfg.abs_tol, |s| {
        let (s1, s2) = (random_cyclic(s, order), random_cyclic(s, order));
        let u = s.spectral();
        let mut worst: f64 = 0.0;
        for kind in [CoproductKind::Delta, CoproductKind::DeltaBar] {
            worst = worst.max(or_nan(tensor_power_check(&s1, &s2, u, kind).map(|r| r.max_offscalar_residual)));
        }
        Sample::new(qv, u, worst)
    });
    let tensor_values = sampled(&format!("cyclic/N={order} tensor power values"), cfg, cfg.abs_tol, |s| {
        let (s1, s2) = (random_cyclic(s, order), random_cyclic(s, order));
        let u = s.spectral();
        let mut worst: f64 = 0.0;
        for kind in [CoproductKind::Delta, CoproductKind::DeltaBar] {
            worst = worst.max(or_nan(tensor_power_check(&s1, &s2, u, kind).map(|r| r.prediction_residual)));
        }
        Sample::new(qv, u, worst)
    });
    let phi = sampled(&format!("cyclic/N={order} Phi_N product vs closed form"), cfg, cfg.abs_tol, |s| {
        let q = DeformationParameter::root_of_unity(order).expect("odd order");
        let a = s.unit_complex();
        Sample::new(qv, re(0.0), or_nan(phi_identity_check(a, &q).map(|c| c.residual))).with_param("alpha", a)
    });
    let shifts = sampled(&format!("cyclic/N={order} shift laws"), cfg, cfg.rel_tol, |s| {
        let (s1, s2, u) = closed_cyclic_pair(s, order);
        let r = eigenstate_family(&s1, &s2, u).map(|f| f.max_law_residual());
        Sample::new(qv, u, or_nan(r))
    });
    let ratio = sampled(&format!("cyclic/N={order} eigenvalue ratio"), cfg, cfg.abs_tol, |s| {
        let (s1, s2) = (random_cyclic(s, order), random_cyclic(s, order));
        let u = s.spectral();
        let r = cyclic_r_eigenvalues(&s1, &s2, u, re(1.0));
        let expect = s1.q().pow(cyclic_ratio_exponent(&s1, &s2, u));
        let worst = r.windows(2).fold(0.0f64, |a, w| a.max((w[1] / w[0] - expect).norm() / expect.norm()));
        Sample::new(qv, u, worst)
    });
    vec![centrality, closed, tensor, tensor_values, phi, shifts, ratio]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ybe,
    Rll,
    Unitarity,
    Casimir,
    Cyclic,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ybe" => Suite::Ybe,
            "rll" => Suite::Rll,
            "unitarity" => Suite::Unitarity,
            "casimir" => Suite::Casimir,
            "cyclic" => Suite::Cyclic,
            "all" => Suite::All,
            other => return Err(Error::InvalidParameter(format!("unknown suite {other}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    /// Orders used by the root-of-unity suite.
    pub orders: Vec<u32>,
    pub perturb: Perturbation,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { orders: vec![3, 5, 7], perturb: Perturbation::none() }
    }
}

pub fn run_suite(suite: Suite, cfg: &ToleranceConfig, opts: &SuiteOptions) -> Result<Vec<ResidualReport>> {
    cfg.validate()?;
    for &n in &opts.orders {
        DeformationParameter::root_of_unity(n)?;
    }
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Ybe {
        out.extend(check_fundamental_ybe(cfg));
        for p in GOLDEN_PAIRS {
            out.extend(check_decomposed_ybe(p, cfg, opts.perturb));
        }
    }
    if all || suite == Suite::Rll {
        for t in 1..=3 {
            out.push(check_rll(SpinLabel::from_twice(t), cfg));
            out.push(check_rll_xxx(SpinLabel::from_twice(t), cfg));
        }
        out.push(check_rll_cyclic(3, cfg));
    }
    if all || suite == Suite::Unitarity {
        for p in GOLDEN_PAIRS {
            out.push(check_unitarity(p, cfg, opts.perturb));
            out.push(check_unitarity_xxx(p, cfg, opts.perturb));
        }
    }
    if all || suite == Suite::Casimir {
        for p in GOLDEN_PAIRS {
            out.push(check_casimir(p, cfg));
        }
    }
    if all || suite == Suite::Cyclic {
        for &n in &opts.orders {
            out.extend(check_cyclic(n, cfg));
        }
    }
    if all {
        out.extend(check_recurrence(cfg));
        for p in GOLDEN_PAIRS {
            out.push(check_branch_independence(p, cfg));
            out.push(check_lowest_weight_oracle(p, cfg));
        }
    }
    Ok(out)
}
