//! Truncated Fock space.
//!
//! Vectors hold the amplitudes on the number states `|0>, ..., |D-1>`. Ladder
//! operators act exactly on the retained levels; whatever `a+` pushes past the
//! top level is dropped.

use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
pub use crate::matrix::OperatorMatrix;

/// Largest `|alpha|^2` accepted by [`coherent_state`].
pub const COHERENT_GUARD: f64 = 300.0;

/// Default truncation tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Norm deviation above which [`number_expectation_checked`] refuses a state.
pub const NORMALIZED_SLACK: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amp: Vec<Complex64>,
}

impl FockVector {
    pub fn new(amp: Vec<Complex64>) -> Result<Self> {
        if amp.is_empty() {
            return Err(Error::InvalidArgument(
                "Fock dimension must be at least 1".into(),
            ));
        }
        Ok(Self { amp })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "Fock dimension must be at least 1");
        Self {
            amp: vec![ZERO; dim],
        }
    }

    /// The number state `|level>`.
    pub fn number_state(dim: usize, level: usize) -> Result<Self> {
        if level >= dim {
            return Err(Error::InvalidArgument(format!(
                "level {level} outside truncation dimension {dim}"
            )));
        }
        let mut v = Self::zeros(dim);
        v.amp[level] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amp
    }

    pub fn amp(&self, level: usize) -> Complex64 {
        self.amp[level]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            amp: self.amp.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "cannot normalize vector of norm {norm}"
            )));
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    /// Euclidean distance `||self - other||`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        check_dims(self, other)?;
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Largest per-level amplitude difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self, other)?;
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `self += factor * other`.
    pub fn axpy(&mut self, factor: Complex64, other: &Self) -> Result<()> {
        check_dims(self, other)?;
        for (a, b) in self.amp.iter_mut().zip(&other.amp) {
            *a += factor * b;
        }
        Ok(())
    }

    pub fn apply(&self, op: &OperatorMatrix) -> Result<Self> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: op.dim(),
                right: self.dim(),
            });
        }
        Ok(Self {
            amp: op.apply(&self.amp),
        })
    }
}

impl Add for &FockVector {
    type Output = FockVector;

    fn add(self, rhs: &FockVector) -> FockVector {
        assert_eq!(self.dim(), rhs.dim(), "Fock dimension mismatch");
        FockVector {
            amp: self.amp.iter().zip(&rhs.amp).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &FockVector {
    type Output = FockVector;

    fn sub(self, rhs: &FockVector) -> FockVector {
        assert_eq!(self.dim(), rhs.dim(), "Fock dimension mismatch");
        FockVector {
            amp: self.amp.iter().zip(&rhs.amp).map(|(a, b)| a - b).collect(),
        }
    }
}

fn check_dims(u: &FockVector, v: &FockVector) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(())
}

/// Smallest truncation `D` whose Poisson tail `sum_{m >= D} e^{-x} x^m / m!`
/// (with `x = alpha_abs^2`) is below `tol^2`, rounded up to a multiple of `n`
/// and never below `4n`.
pub fn truncation_dim(alpha_abs: f64, n: usize, tol: f64) -> Result<usize> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must lie in (0, 1), got {tol}"
        )));
    }
    if !(alpha_abs >= 0.0) || !alpha_abs.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "coherent amplitude must be finite and non-negative, got {alpha_abs}"
        )));
    }
    let n = n.max(1);
    let x = alpha_abs * alpha_abs;
    let target = tol * tol;

    // Poisson weights in log space, carried well past the mean until they
    // are negligible against the target.
    let ln_x = x.ln();
    let cutoff = target.ln() - 40.0;
    let mut log_p = -x;
    let mut weights = vec![log_p.exp()];
    let mut m = 0usize;
    while (m as f64) <= x || log_p > cutoff {
        log_p += ln_x - ((m + 1) as f64).ln();
        weights.push(log_p.exp());
        m += 1;
    }

    let mut tail = 0.0;
    let mut smallest = weights.len();
    for level in (0..weights.len()).rev() {
        tail += weights[level];
        if tail < target {
            smallest = level;
        } else {
            break;
        }
    }

    let rounded = smallest.div_ceil(n) * n;
    Ok(rounded.max(4 * n))
}

/// Glauber coherent state `e^{-|a|^2/2} sum_m a^m / sqrt(m!) |m>`,
/// renormalized after truncation.
pub fn coherent_state(alpha: Complex64, dim: usize) -> Result<FockVector> {
    let alpha_sq = alpha.norm_sqr();
    if !(alpha_sq <= COHERENT_GUARD) {
        return Err(Error::Overflow {
            magnitude: alpha_sq,
            limit: COHERENT_GUARD,
        });
    }
    if dim == 0 {
        return Err(Error::InvalidArgument(
            "Fock dimension must be at least 1".into(),
        ));
    }
    let mut amp = Vec::with_capacity(dim);
    let mut term = Complex64::new((-alpha_sq / 2.0).exp(), 0.0);
    for m in 0..dim {
        amp.push(term);
        term *= alpha / ((m + 1) as f64).sqrt();
    }
    FockVector { amp }.normalized()
}

/// `a v`: `out[m] = sqrt(m+1) v[m+1]`, top level zero.
pub fn apply_annihilation(v: &FockVector) -> FockVector {
    let dim = v.dim();
    let mut out = vec![ZERO; dim];
    for (m, (o, a)) in out.iter_mut().zip(&v.amp[1..]).enumerate() {
        *o = a * ((m + 1) as f64).sqrt();
    }
    FockVector { amp: out }
}

/// `a+ v`: `out[m] = sqrt(m) v[m-1]`; the top amplitude of `v` is lost.
pub fn apply_creation(v: &FockVector) -> FockVector {
    let dim = v.dim();
    let mut out = vec![ZERO; dim];
    for (m, (o, a)) in out[1..].iter_mut().zip(&v.amp).enumerate() {
        *o = a * ((m + 1) as f64).sqrt();
    }
    FockVector { amp: out }
}

/// `a^k v`.
pub fn apply_annihilation_power(v: &FockVector, k: usize) -> FockVector {
    (0..k).fold(v.clone(), |acc, _| apply_annihilation(&acc))
}

/// `<u|v>`, conjugate-linear in `u`.
pub fn inner_product(u: &FockVector, v: &FockVector) -> Result<Complex64> {
    check_dims(u, v)?;
    Ok(u.amp.iter().zip(&v.amp).map(|(a, b)| a.conj() * b).sum())
}

/// `sum_m m |v[m]|^2`.
pub fn number_expectation(v: &FockVector) -> f64 {
    v.amp
        .iter()
        .enumerate()
        .map(|(m, z)| m as f64 * z.norm_sqr())
        .sum()
}

/// [`number_expectation`] that rejects states whose norm is off by more than
/// [`NORMALIZED_SLACK`].
pub fn number_expectation_checked(v: &FockVector) -> Result<f64> {
    let deviation = (v.norm() - 1.0).abs();
    if deviation > NORMALIZED_SLACK {
        return Err(Error::InvalidArgument(format!(
            "state is not normalized (norm deviates by {deviation:e})"
        )));
    }
    Ok(number_expectation(v))
}

pub fn annihilation_matrix(dim: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(dim, |r, c| {
        if c == r + 1 {
            Complex64::new((c as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

pub fn creation_matrix(dim: usize) -> OperatorMatrix {
    annihilation_matrix(dim).adjoint()
}

pub fn number_matrix(dim: usize) -> OperatorMatrix {
    let diag: Vec<_> = (0..dim).map(|m| Complex64::new(m as f64, 0.0)).collect();
    OperatorMatrix::diagonal(&diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Poisson tail by forward summation of freshly computed weights.
    fn poisson_tail(x: f64, from: usize) -> f64 {
        (from..from + 400)
            .map(|m| {
                let log_fact: f64 = (1..=m).map(|j| (j as f64).ln()).sum();
                (-x + m as f64 * x.ln() - log_fact).exp()
            })
            .sum()
    }

    #[test]
    fn truncation_floor_for_vacuum() {
        assert_eq!(truncation_dim(0.0, 3, 1e-12).unwrap(), 12);
    }

    #[test]
    fn truncation_against_poisson_oracle() {
        for &(a, n, tol) in &[
            (1.0, 2, 1e-12),
            (2.0, 4, 1e-10),
            (2.5, 7, 1e-12),
            (0.3, 5, 1e-6),
        ] {
            let d = truncation_dim(a, n, tol).unwrap();
            assert_eq!(d % n, 0);
            assert!(d >= 4 * n);
            assert!(poisson_tail(a * a, d) < tol * tol, "a={a} n={n} d={d}");
            // one period less would either break the floor or the tail bound
            if d - n >= 4 * n {
                assert!(poisson_tail(a * a, d - n) >= tol * tol, "a={a} n={n} d={d}");
            }
        }
        let d = truncation_dim(1.0, 2, 1e-12).unwrap();
        assert!((24..=32).contains(&d), "{d}");
        let d = truncation_dim(2.0, 4, 1e-10).unwrap();
        assert!(d as f64 >= 4.0 + 8.0);
    }

    #[test]
    fn truncation_rejects_bad_tol() {
        assert!(truncation_dim(1.0, 2, 0.0).is_err());
        assert!(truncation_dim(1.0, 2, 1.0).is_err());
    }

    #[test]
    fn vacuum_coherent_state() {
        let v = coherent_state(c(0.0, 0.0), 5).unwrap();
        assert_eq!(v, FockVector::number_state(5, 0).unwrap());
    }

    #[test]
    fn coherent_overlap_modulus() {
        let d = 60;
        let a = coherent_state(c(1.0, 0.0), d).unwrap();
        let b = coherent_state(c(-1.0, 0.0), d).unwrap();
        let overlap = inner_product(&a, &b).unwrap().norm_sqr();
        assert!((overlap - (-4.0f64).exp()).abs() < 1e-12);
        assert!((overlap - 0.018315).abs() < 1e-6);
    }

    #[test]
    fn coherent_overlap_complex() {
        let alpha = c(0.5, 0.0);
        let beta = c(0.0, 0.5);
        let d = truncation_dim(0.5, 1, 1e-12).unwrap();
        let u = coherent_state(alpha, d).unwrap();
        let v = coherent_state(beta, d).unwrap();
        let expected =
            (-0.5 * alpha.norm_sqr() - 0.5 * beta.norm_sqr() + alpha.conj() * beta).exp();
        assert!((expected - c(-0.25, 0.25).exp()).norm() < 1e-15);
        assert!((inner_product(&u, &v).unwrap() - expected).norm() < 1e-10);
    }

    #[test]
    fn coherent_guard() {
        assert!(matches!(
            coherent_state(c(18.0, 0.0), 10),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn photon_number_of_coherent_states() {
        let d = truncation_dim(2.0, 1, 1e-12).unwrap();
        let v = coherent_state(c(2.0, 0.0), d).unwrap();
        assert!((number_expectation(&v) - 4.0).abs() < 1e-8);
        let d = truncation_dim(1.5, 1, 1e-12).unwrap();
        let v = coherent_state(c(1.5, 0.0), d).unwrap();
        assert!((number_expectation_checked(&v).unwrap() - 2.25).abs() < 1e-8);
        assert_eq!(
            number_expectation(&FockVector::number_state(4, 0).unwrap()),
            0.0
        );
        assert_eq!(
            number_expectation(&FockVector::number_state(4, 3).unwrap()),
            3.0
        );
        let unnormalized = FockVector::number_state(4, 1).unwrap().scale(c(2.0, 0.0));
        assert!(number_expectation_checked(&unnormalized).is_err());
    }

    #[test]
    fn ladder_on_number_states() {
        let vac = FockVector::number_state(6, 0).unwrap();
        assert_eq!(apply_annihilation(&vac).norm(), 0.0);
        let one = FockVector::number_state(6, 1).unwrap();
        assert_eq!(apply_annihilation(&one), vac);
        assert_eq!(apply_creation(&vac), one);
        let two = apply_creation(&apply_creation(&vac)).scale(c(1.0 / 2f64.sqrt(), 0.0));
        assert!(
            two.max_abs_diff(&FockVector::number_state(6, 2).unwrap())
                .unwrap()
                < 1e-15
        );
        let top = FockVector::number_state(6, 5).unwrap();
        assert_eq!(apply_creation(&top).norm(), 0.0);
    }

    #[test]
    fn coherent_is_annihilation_eigenstate() {
        let alpha = c(1.0, 0.0);
        let d = truncation_dim(1.0, 1, 1e-12).unwrap() + 8;
        let v = coherent_state(alpha, d).unwrap();
        let av = apply_annihilation(&v);
        assert!(av.distance(&v.scale(alpha)).unwrap() <= 1e-8);
    }

    #[test]
    fn ladder_matrices_match_actions() {
        let v = FockVector::new((0..7).map(|m| c(m as f64, 1.0 - m as f64)).collect()).unwrap();
        let by_matrix = v.apply(&annihilation_matrix(7)).unwrap();
        assert!(by_matrix.max_abs_diff(&apply_annihilation(&v)).unwrap() < 1e-15);
        let by_matrix = v.apply(&creation_matrix(7)).unwrap();
        assert!(by_matrix.max_abs_diff(&apply_creation(&v)).unwrap() < 1e-15);
        let n = &creation_matrix(7) * &annihilation_matrix(7);
        assert!(n.max_abs_diff(&number_matrix(7)) < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let u = FockVector::zeros(3);
        let v = FockVector::zeros(4);
        assert!(matches!(
            inner_product(&u, &v),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn vector(dim: usize) -> impl Strategy<Value = FockVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
            .prop_map(|v| FockVector::new(v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn hermitian_symmetry(u in vector(8), v in vector(8)) {
            let uv = inner_product(&u, &v).unwrap();
            let vu = inner_product(&v, &u).unwrap();
            prop_assert!((uv - vu.conj()).norm() < 1e-14);
        }

        #[test]
        fn positive_definite(v in vector(8)) {
            let vv = inner_product(&v, &v).unwrap();
            prop_assert!(vv.re >= 0.0);
            prop_assert!(vv.im.abs() < 1e-15);
            prop_assert_eq!(vv.re == 0.0, v.norm() == 0.0);
        }

        #[test]
        fn canonical_commutator_in_interior(head in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 10)) {
            // support below dim-2 keeps a a+ and a+ a inside the truncation
            let mut amp: Vec<_> = head.into_iter().map(|(a, b)| c(a, b)).collect();
            amp.extend([c(0.0, 0.0); 2]);
            let v = FockVector::new(amp).unwrap();
            let aad = apply_annihilation(&apply_creation(&v));
            let ada = apply_creation(&apply_annihilation(&v));
            prop_assert!((&aad - &ada).max_abs_diff(&v).unwrap() < 1e-13);
        }

        #[test]
        fn coherent_photon_number(re in -3.0f64..3.0, im in -3.0f64..3.0) {
            let alpha = c(re, im);
            prop_assume!(alpha.norm() <= 3.0);
            let tol = DEFAULT_TOL;
            let d = truncation_dim(alpha.norm(), 1, tol).unwrap();
            let v = coherent_state(alpha, d).unwrap();
            prop_assert!((number_expectation(&v) - alpha.norm_sqr()).abs() <= 10.0 * tol);
        }
    }
}
