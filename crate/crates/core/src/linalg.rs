//! Dense complex matrix helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Condition numbers above this make a basis "numerically singular".
pub const MAX_CONDITION: f64 = 1e12;

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn diag(d: &[Complex64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(d))
}

/// `a ⊗ b`, first factor major.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `max|a - b| / max(max|a|, max|b|)`; zero when both sides vanish.
pub fn rel_residual(a: &CMat, b: &CMat) -> f64 {
    let scale = max_abs(a).max(max_abs(b));
    if scale == 0.0 {
        return 0.0;
    }
    max_abs(&(a - b)) / scale
}

pub fn rel_residual_vec(a: &CVec, b: &CVec) -> f64 {
    let scale = max_abs_vec(a).max(max_abs_vec(b));
    if scale == 0.0 {
        return 0.0;
    }
    max_abs_vec(&(a - b)) / scale
}

/// Best scalar `s` with `m ≈ s·I` (mean of the diagonal) and the residual
/// `max|m - s·I| / max(|s|, max|m|)`.
pub fn off_scalar(m: &CMat) -> (Complex64, f64) {
    let n = m.nrows();
    let s = m.trace() / n as f64;
    let scale = s.norm().max(max_abs(m));
    let dev = max_abs(&(m - eye(n) * s));
    (s, if scale == 0.0 { 0.0 } else { dev / scale })
}

pub fn matpow(m: &CMat, k: u32) -> CMat {
    let mut out = eye(m.nrows());
    let mut base = m.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            out = &out * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    out
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with cutoff `tol · σ_max`.
pub fn rank(m: &CMat, tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > tol * top).count()
}

pub fn condition_number(m: &CMat) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Orthonormal basis (columns) of the right null space, cutoff `tol · σ_max`.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let (r, c) = m.shape();
    // Pad to square so the SVD returns a full set of right singular vectors.
    let mut a = zeros(r.max(c), c);
    a.view_mut((0, 0), (r, c)).copy_from(m);
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let top = svd.singular_values.iter().fold(0.0f64, |x, &y| x.max(y));
    let cols: Vec<CVec> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol * top.max(1e-300))
        .map(|(i, _)| vt.row(i).adjoint())
        .collect();
    if cols.is_empty() {
        return zeros(c, 0);
    }
    CMat::from_columns(&cols)
}

/// Inverse through LU after a conditioning check.
pub fn checked_inverse(m: &CMat) -> Result<CMat> {
    let cond = condition_number(m);
    if cond.is_nan() || cond >= MAX_CONDITION {
        return Err(Error::SingularBasis(cond));
    }
    m.clone().lu().try_inverse().ok_or(Error::SingularBasis(cond))
}

/// Divide by the entry of largest modulus.
pub fn normalize_by_max(m: &CMat) -> CMat {
    let pivot = m.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
    if pivot.norm() == 0.0 {
        return m.clone();
    }
    m.map(|z| z / pivot)
}

/// `|⟨a, b⟩| / (|a| |b|)`.
pub fn cosine_similarity(a: &CVec, b: &CVec) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    a.dotc(b).norm() / (na * nb)
}

/// Permutation reversing the basis order.
pub fn reversal(n: usize) -> CMat {
    let mut p = zeros(n, n);
    for i in 0..n {
        p[(i, n - 1 - i)] = Complex64::new(1.0, 0.0);
    }
    p
}

/// Swap `P: x ⊗ y ↦ y ⊗ x` from `V₁⊗V₂` (dims `d1, d2`) to `V₂⊗V₁`.
pub fn swap(d1: usize, d2: usize) -> CMat {
    let n = d1 * d2;
    let mut p = zeros(n, n);
    for j in 0..d1 {
        for k in 0..d2 {
            p[(k * d1 + j, j * d2 + k)] = Complex64::new(1.0, 0.0);
        }
    }
    p
}

/// Embeds an operator on factors 1 and 3 of `V₁⊗V₂⊗V₃` given as a matrix on `V₁⊗V₃`.
pub fn embed_13(r: &CMat, d1: usize, d2: usize, d3: usize) -> CMat {
    // P23 (R ⊗ I) P23 with P23 mapping V₁⊗V₃⊗V₂ to V₁⊗V₂⊗V₃.
    let p23 = kron(&eye(d1), &swap(d3, d2));
    &p23 * kron(r, &eye(d2)) * p23.transpose()
}

/// Commutator `ab - ba`.
pub fn comm(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn m(rows: usize, data: &[f64]) -> CMat {
        CMat::from_row_iterator(rows, data.len() / rows, data.iter().map(|&x| C::new(x, 0.0)))
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = m(2, &[1.0, 2.0, 3.0, 4.0]);
        let b = m(2, &[0.0, 1.0, 1.0, 0.0]);
        let k = kron(&a, &b);
        assert_eq!(k.shape(), (4, 4));
        assert_eq!(k[(0, 1)], C::new(1.0, 0.0));
        assert_eq!(k[(3, 2)], C::new(4.0, 0.0));
        assert_eq!(k[(2, 3)], C::new(4.0, 0.0));
    }

    #[test]
    fn swap_conjugates_kron() {
        let a = m(2, &[1.0, 2.0, 3.0, 4.0]);
        let b = m(3, &[1.0, 0.0, 2.0, 0.0, 5.0, 0.0, 7.0, 0.0, 1.0]);
        let p = swap(2, 3);
        let lhs = &p * kron(&a, &b) * p.transpose();
        assert!(rel_residual(&lhs, &kron(&b, &a)) < 1e-15);
    }

    #[test]
    fn embed_13_of_kron() {
        let a = m(2, &[1.0, 2.0, 3.0, 4.0]);
        let b = m(2, &[0.0, 1.0, 5.0, 0.0]);
        let e = embed_13(&kron(&a, &b), 2, 3, 2);
        let expect = kron(&kron(&a, &eye(3)), &b);
        assert!(rel_residual(&e, &expect) < 1e-15);
    }

    #[test]
    fn null_space_and_rank() {
        let a = m(2, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        assert_eq!(rank(&a, 1e-12), 1);
        let n = null_space(&a, 1e-12);
        assert_eq!(n.ncols(), 2);
        assert!(max_abs(&(&a * &n)) < 1e-12);
    }

    #[test]
    fn matpow_matches_repeated_product() {
        let a = m(2, &[1.0, 1.0, 0.0, 1.0]);
        let p = matpow(&a, 5);
        assert_eq!(p[(0, 1)], C::new(5.0, 0.0));
        assert_eq!(matpow(&a, 0), eye(2));
    }

    #[test]
    fn off_scalar_detects_scalar() {
        let (s, r) = off_scalar(&(eye(3) * C::new(2.0, -1.0)));
        assert_eq!(s, C::new(2.0, -1.0));
        assert_eq!(r, 0.0);
        let (_, r) = off_scalar(&m(2, &[1.0, 0.1, 0.0, 1.0]));
        assert!(r > 0.05);
    }

    #[test]
    fn singular_inverse_rejected() {
        let a = m(2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(checked_inverse(&a), Err(Error::SingularBasis(_))));
        let b = m(2, &[2.0, 1.0, 1.0, 1.0]);
        let bi = checked_inverse(&b).unwrap();
        assert!(rel_residual(&(&b * &bi), &eye(2)) < 1e-15);
    }

    #[test]
    fn normalization_and_cosine() {
        let a = m(1, &[1.0, -4.0, 2.0]);
        let n = normalize_by_max(&a);
        assert_eq!(n[(0, 1)], C::new(1.0, 0.0));
        let v = CVec::from_vec(vec![C::new(1.0, 0.0), C::new(0.0, 1.0)]);
        let w = &v * C::new(0.0, 3.0);
        assert!((cosine_similarity(&v, &w) - 1.0).abs() < 1e-15);
    }
}
