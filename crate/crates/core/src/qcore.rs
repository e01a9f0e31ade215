//! Complex scalar kernel: the deformation parameter with its fixed logarithm
//! branch, q-numbers, the root-of-unity product `Φ_N`, tolerances and seeded
//! sampling of test points.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default guard bound for the generic-mode root-of-unity check.
pub const ROOT_OF_UNITY_GUARD: u32 = 64;

// |q^n - 1| below this counts as "q is an n-th root of unity".
const ROOT_TOL: f64 = 1e-12;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QMode {
    Generic,
    /// Primitive root of unity of the given odd order.
    RootOfUnity(u32),
}

/// The deformation parameter `q` together with the logarithm used for every
/// fractional power. The branch is fixed at construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeformationParameter {
    value: Complex64,
    mode: QMode,
    log_branch: Complex64,
}

impl DeformationParameter {
    /// Generic `q` on the principal branch.
    pub fn generic(value: Complex64) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) || value.norm() == 0.0 {
            return Err(Error::InvalidDeformation(format!("q = {value} must be finite and nonzero")));
        }
        Self::generic_with_log(value.ln())
    }

    /// Generic `q = exp(log_branch)`; the given logarithm becomes the branch.
    pub fn generic_with_log(log_branch: Complex64) -> Result<Self> {
        let value = log_branch.exp();
        if !(value.re.is_finite() && value.im.is_finite()) || value.norm() == 0.0 {
            return Err(Error::InvalidDeformation(format!("exp({log_branch}) is not a valid q")));
        }
        let mut power = Complex64::new(1.0, 0.0);
        for n in 1..=ROOT_OF_UNITY_GUARD {
            power *= value;
            if (power - 1.0).norm() < ROOT_TOL {
                return Err(Error::InvalidDeformation(format!(
                    "q = {value} is a root of unity of order {n}; use root-of-unity mode"
                )));
            }
        }
        Ok(Self { value, mode: QMode::Generic, log_branch })
    }

    /// `q = exp(2πi/N)` for odd `N`.
    pub fn root_of_unity(order: u32) -> Result<Self> {
        Self::root_of_unity_power(order, 1)
    }

    /// `q = exp(2πi p/N)` with `gcd(p, N) = 1` and `N` odd.
    pub fn root_of_unity_power(order: u32, power: u32) -> Result<Self> {
        if order.is_multiple_of(2) {
            return Err(Error::EvenOrder(order));
        }
        if order < 3 {
            return Err(Error::InvalidDeformation(format!("root-of-unity order must be >= 3, got {order}")));
        }
        if gcd(power, order) != 1 {
            return Err(Error::InvalidDeformation(format!(
                "exp(2πi·{power}/{order}) is not a primitive root of unity"
            )));
        }
        let log_branch = I * (2.0 * PI * power as f64 / order as f64);
        Ok(Self { value: log_branch.exp(), mode: QMode::RootOfUnity(order), log_branch })
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn mode(&self) -> QMode {
        self.mode
    }

    pub fn log_branch(&self) -> Complex64 {
        self.log_branch
    }

    /// Order `N` in root-of-unity mode.
    pub fn order(&self) -> Option<u32> {
        match self.mode {
            QMode::RootOfUnity(n) => Some(n),
            QMode::Generic => None,
        }
    }

    /// `q^{-1}` with branch `-log q`, so that `inverse().pow(z) == pow(-z)`.
    pub fn inverse(&self) -> Self {
        Self { value: 1.0 / self.value, mode: self.mode, log_branch: -self.log_branch }
    }

    /// Same `q`, logarithm moved to another sheet: `log q + 2πi k`.
    pub fn with_branch_shift(&self, k: i32) -> Self {
        Self {
            value: self.value,
            mode: self.mode,
            log_branch: self.log_branch + I * (2.0 * PI * k as f64),
        }
    }

    /// `q^z = exp(z log q)` on the fixed branch.
    #[inline]
    pub fn pow(&self, z: Complex64) -> Complex64 {
        (z * self.log_branch).exp()
    }

    #[inline]
    pub fn powf(&self, x: f64) -> Complex64 {
        self.pow(re(x))
    }

    /// `q - q^{-1}`.
    #[inline]
    pub fn denom(&self) -> Complex64 {
        self.value - 1.0 / self.value
    }

    /// `[n]_q` without the degeneracy check; callers hold a validated `q`.
    #[inline]
    pub fn bracket(&self, n: Complex64) -> Complex64 {
        (self.pow(n) - self.pow(-n)) / self.denom()
    }

    #[inline]
    pub fn bracketf(&self, n: f64) -> Complex64 {
        self.bracket(re(n))
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Tolerance policy and sampling configuration shared by all checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub sample_count: usize,
    pub rng_seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-9, sample_count: 10, rng_seed: 42 }
    }
}

impl ToleranceConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { rng_seed: seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.abs_tol.is_nan() || self.rel_tol.is_nan() || self.abs_tol <= 0.0 || self.rel_tol <= 0.0 {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if self.sample_count == 0 {
            return Err(Error::InvalidParameter("sample_count must be at least 1".into()));
        }
        Ok(())
    }
}

/// `[n]_q = (q^n - q^{-n}) / (q - q^{-1})`.
pub fn qnum(n: Complex64, q: &DeformationParameter) -> Result<Complex64> {
    let d = q.denom();
    if d.norm() < ToleranceConfig::default().abs_tol {
        return Err(Error::DegenerateDenominator(d.norm()));
    }
    Ok(q.bracket(n))
}

/// `q^z` on the branch fixed in `q`.
pub fn qpow(q: &DeformationParameter, z: Complex64) -> Complex64 {
    q.pow(z)
}

/// `Φ_N(α) = ∏_{n=0}^{N-1} [α + n]_q` at a primitive `N`-th root of unity.
pub fn phi_product(alpha: Complex64, q: &DeformationParameter) -> Result<Complex64> {
    let n = q.order().ok_or(Error::WrongMode { expected: "root-of-unity" })?;
    Ok((0..n).map(|k| q.bracket(alpha + k as f64)).product())
}

/// Closed form `(q - q^{-1})^{-N} (q^{Nα} - q^{-Nα})` of [`phi_product`].
pub fn phi_closed_form(alpha: Complex64, q: &DeformationParameter) -> Result<Complex64> {
    let n = q.order().ok_or(Error::WrongMode { expected: "root-of-unity" })?;
    let nf = n as f64;
    Ok((q.pow(alpha * nf) - q.pow(-alpha * nf)) / q.denom().powu(n))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiCheck {
    pub product: Complex64,
    pub closed_form: Complex64,
    /// `|product - closed_form| / max(1, |closed_form|)`.
    pub residual: f64,
}

pub fn phi_identity_check(alpha: Complex64, q: &DeformationParameter) -> Result<PhiCheck> {
    let product = phi_product(alpha, q)?;
    let closed_form = phi_closed_form(alpha, q)?;
    let residual = (product - closed_form).norm() / closed_form.norm().max(1.0);
    Ok(PhiCheck { product, closed_form, residual })
}

/// Seeded source of sample points.
///
/// Generic `q` is drawn as `r e^{iθ}` with `r ∈ [0.7, 1.4]` and `θ` kept away
/// from `0` and `π`, so `[n]_q` stays well conditioned for small spins.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Independent stream derived from a seed and a label (one per identity).
    pub fn for_identity(seed: u64, identity_id: &str) -> Self {
        // FNV-1a over the label keeps streams stable across runs and platforms.
        let mut h: u64 = 0xcbf29ce484222325;
        for b in identity_id.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        Self::new(seed ^ h)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn complex_box(&mut self, re_half: f64, im_half: f64) -> Complex64 {
        let r = if re_half > 0.0 { self.uniform(-re_half, re_half) } else { 0.0 };
        let i = if im_half > 0.0 { self.uniform(-im_half, im_half) } else { 0.0 };
        c(r, i)
    }

    pub fn generic_q(&mut self) -> DeformationParameter {
        loop {
            let r = self.uniform(0.7, 1.4);
            let mut theta = self.uniform(0.25, PI - 0.25);
            if self.rng.gen_bool(0.5) {
                theta = -theta;
            }
            if let Ok(q) = DeformationParameter::generic(Complex64::from_polar(r, theta)) {
                return q;
            }
        }
    }

    /// Generic `q` on the unit circle.
    pub fn unimodular_q(&mut self) -> DeformationParameter {
        loop {
            let theta = self.uniform(0.25, PI - 0.25);
            if let Ok(q) = DeformationParameter::generic(Complex64::from_polar(1.0, theta)) {
                return q;
            }
        }
    }

    /// Spectral parameter with `|Re u| ≤ 1.5`, `|Im u| ≤ 0.5`.
    pub fn spectral(&mut self) -> Complex64 {
        self.complex_box(1.5, 0.5)
    }

    /// Unit-box complex number, used for cyclic parameters.
    pub fn unit_complex(&mut self) -> Complex64 {
        self.complex_box(1.0, 1.0)
    }
}
