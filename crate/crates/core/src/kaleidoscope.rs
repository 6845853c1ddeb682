//! The kaleidoscope basis `|s>_alpha`, `0 <= s < n`.
//!
//! Two independent constructions are provided:
//!
//! * [`build_state_qft`]: the Fourier superposition
//!   `sum_j w^(js) |q^(2j) alpha>` of the `n` rotated coherent states,
//!   normalized numerically in Fock space;
//! * [`build_state_direct`]: the generating-function form
//!   `f_s(alpha a+) |0> / sqrt(f_s(|alpha|^2))`, whose amplitudes are
//!   `alpha^m / sqrt(m!)` on levels `m = s (mod n)`.
//!
//! Phase convention: amplitudes carry the phase of `alpha^m`, so the state is
//! real and positive for real positive `alpha`. The Fourier route is rotated
//! onto this convention.

use num_complex::Complex64;

use crate::error::{check_order, check_residue, Error, Result};
use crate::fock::{
    apply_annihilation, apply_annihilation_power, coherent_state, inner_product, truncation_dim,
    FockVector, DEFAULT_TOL,
};
use crate::matrix::OperatorMatrix;
use crate::modexp::{ModExpFamily, RootOfUnity};

/// Multiples of `n * eps` below which a Fourier superposition is treated as
/// pure cancellation noise.
const CANCELLATION_FLOOR: f64 = 1e3;

/// `Q[j][k] = w^(jk) / sqrt(n)` with `w = exp(-2 pi i / n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QftMatrix {
    n: usize,
    matrix: OperatorMatrix,
}

impl QftMatrix {
    pub fn new(n: usize) -> Result<Self> {
        let root = RootOfUnity::new(n)?;
        let scale = (1.0 / n as f64).sqrt();
        let matrix = OperatorMatrix::from_fn(n, |j, k| root.w_pow((j * k) as i64) * scale);
        Ok(Self { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &OperatorMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> OperatorMatrix {
        self.matrix
    }

    /// `max(|Q Q+ - I|, |Q+ Q - I|)` entrywise.
    pub fn unitarity_residual(&self) -> f64 {
        let id = OperatorMatrix::identity(self.n);
        let adj = self.matrix.adjoint();
        let left = (&self.matrix * &adj).max_abs_diff(&id);
        let right = (&adj * &self.matrix).max_abs_diff(&id);
        left.max(right)
    }
}

pub fn qft_matrix(n: usize) -> Result<QftMatrix> {
    QftMatrix::new(n)
}

/// `N_s = e^(x/2) / (n sqrt(f_s(x)))`, the factor making
/// `N_s sum_j conj(q)^(2sj) |q^(2j) alpha>` a unit vector (`x = |alpha|^2`).
pub fn normalization_constant(n: usize, s: usize, alpha_sq: f64) -> Result<f64> {
    check_residue(n, s)?;
    if !(alpha_sq >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "|alpha|^2 must be non-negative, got {alpha_sq}"
        )));
    }
    let f = ModExpFamily::new(n)?.eval(s, alpha_sq)?;
    if f <= 0.0 {
        return Err(Error::Divergent { n, s, alpha_sq });
    }
    // e^(x/2) / sqrt(f) evaluated as 1 / sqrt(f e^-x) to stay finite
    Ok(1.0 / (n as f64 * (f * (-alpha_sq).exp()).sqrt()))
}

/// Raw generating-function amplitudes `alpha^m / sqrt(m!)` on the residue
/// class `m = s (mod n)`, zero elsewhere. Not normalized.
pub fn residue_amplitudes(
    n: usize,
    alpha: Complex64,
    s: usize,
    dim: usize,
) -> Result<Vec<Complex64>> {
    check_residue(n, s)?;
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    let mut term = Complex64::new(1.0, 0.0);
    for (m, slot) in out.iter_mut().enumerate() {
        if m % n == s {
            *slot = term;
        }
        term *= alpha / ((m + 1) as f64).sqrt();
    }
    Ok(out)
}

fn kitten(s: usize, dim: usize) -> Result<FockVector> {
    FockVector::number_state(dim, s)
}

/// `|s>_alpha` from the generating function `f_s(alpha a+) |0>`.
///
/// At `alpha = 0` this is the number state `|s>`.
pub fn build_state_direct(n: usize, alpha: Complex64, s: usize, dim: usize) -> Result<FockVector> {
    check_residue(n, s)?;
    if alpha == Complex64::new(0.0, 0.0) {
        return kitten(s, dim);
    }
    let f = ModExpFamily::new(n)?.eval(s, alpha.norm_sqr())?;
    let scale = Complex64::new(1.0 / f.sqrt(), 0.0);
    let amp = residue_amplitudes(n, alpha, s, dim)?
        .into_iter()
        .map(|z| z * scale)
        .collect();
    // the division by sqrt(f_s) leaves only the truncation tail to remove
    FockVector::new(amp)?.normalized()
}

/// `|s>_alpha` as the Fourier superposition of rotated coherent states.
pub fn build_state_qft(n: usize, alpha: Complex64, s: usize, dim: usize) -> Result<FockVector> {
    check_residue(n, s)?;
    if alpha == Complex64::new(0.0, 0.0) {
        return kitten(s, dim);
    }
    let root = RootOfUnity::new(n)?;
    let mut sum = FockVector::zeros(dim);
    for j in 0..n as i64 {
        let rotated = coherent_state(root.q2_pow(j) * alpha, dim)?;
        sum.axpy(root.w_pow(j * s as i64), &rotated)?;
    }
    let norm = sum.norm();
    if norm < CANCELLATION_FLOOR * n as f64 * f64::EPSILON {
        return Err(Error::Degenerate { s, norm });
    }
    let state = sum.normalized()?;
    Ok(fix_phase(state, alpha))
}

/// Rotates `v` so its dominant amplitude carries the phase of `alpha^m`.
fn fix_phase(v: FockVector, alpha: Complex64) -> FockVector {
    let (level, amp) = v
        .amplitudes()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(m, &z)| (m, z))
        .expect("Fock vectors are non-empty");
    let target = alpha.arg() * level as f64;
    let correction = Complex64::from_polar(1.0, target - amp.arg());
    v.scale(correction)
}

/// `q^(2N)`: multiplies level `m` by `q^(2m)`, `q = exp(i pi / n)`.
pub fn apply_parity(n: usize, v: &FockVector) -> Result<FockVector> {
    let root = RootOfUnity::new(n)?;
    let amp = v
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(m, &z)| root.q2_pow(m as i64) * z)
        .collect();
    FockVector::new(amp)
}

/// Which construction a [`KaleidoscopeBasis`] was built with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Direct,
    Fourier,
}

/// The `n` orthonormal states for fixed `(n, alpha)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KaleidoscopeBasis {
    n: usize,
    alpha: Complex64,
    dim: usize,
    states: Vec<FockVector>,
    norms: Vec<Option<f64>>,
}

impl KaleidoscopeBasis {
    /// Direct construction at the default truncation, see [`Self::auto_dim`].
    pub fn new(n: usize, alpha: Complex64) -> Result<Self> {
        let dim = Self::auto_dim(n, alpha, DEFAULT_TOL)?;
        Self::build(n, alpha, dim, Route::Direct)
    }

    /// Truncation for `(n, alpha)`: the Poisson-tail dimension plus one extra
    /// period of `n` levels, so `a^n` applied to a state still sees every
    /// level the tail bound covers.
    pub fn auto_dim(n: usize, alpha: Complex64, tol: f64) -> Result<usize> {
        check_order(n, 2)?;
        Ok(truncation_dim(alpha.norm(), n, tol)? + n)
    }

    pub fn build(n: usize, alpha: Complex64, dim: usize, route: Route) -> Result<Self> {
        check_order(n, 2)?;
        if dim < n {
            return Err(Error::InvalidArgument(format!(
                "truncation {dim} cannot hold {n} kaleidoscope states"
            )));
        }
        let states = (0..n)
            .map(|s| match route {
                Route::Direct => build_state_direct(n, alpha, s, dim),
                Route::Fourier => build_state_qft(n, alpha, s, dim),
            })
            .collect::<Result<Vec<_>>>()?;
        let alpha_sq = alpha.norm_sqr();
        let norms = (0..n)
            .map(|s| match normalization_constant(n, s, alpha_sq) {
                Ok(v) => Ok(Some(v)),
                Err(Error::Divergent { .. }) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            alpha,
            dim,
            states,
            norms,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn states(&self) -> &[FockVector] {
        &self.states
    }

    pub fn state(&self, s: usize) -> &FockVector {
        &self.states[s]
    }

    /// `N_s`; `None` where it diverges (`alpha = 0`, `s > 0`).
    pub fn norm_constant(&self, s: usize) -> Option<f64> {
        self.norms[s]
    }

    pub fn norms(&self) -> &[Option<f64>] {
        &self.norms
    }

    /// `sum_s c_s |s>_alpha`.
    pub fn superpose(&self, coeffs: &[Complex64]) -> Result<FockVector> {
        if coeffs.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: coeffs.len(),
                right: self.n,
            });
        }
        let mut out = FockVector::zeros(self.dim);
        for (c, state) in coeffs.iter().zip(&self.states) {
            out.axpy(*c, state)?;
        }
        Ok(out)
    }

    /// Largest amplitude outside the residue class `m = s (mod n)`.
    pub fn off_lattice_amplitude(&self, s: usize) -> f64 {
        self.states[s]
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(m, _)| m % self.n != s)
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max)
    }

    /// `||q^(2N)|s> - q^(2s)|s>||`.
    pub fn parity_residual(&self, s: usize) -> Result<f64> {
        let root = RootOfUnity::new(self.n)?;
        let image = apply_parity(self.n, &self.states[s])?;
        image.distance(&self.states[s].scale(root.q2_pow(s as i64)))
    }

    /// `||a|s> - alpha (N_s / N_{s-1}) |s-1>||`, indices mod `n`.
    pub fn flip_residual(&self, s: usize) -> Result<f64> {
        check_residue(self.n, s)?;
        let prev = (s + self.n - 1) % self.n;
        let (Some(ns), Some(np)) = (self.norms[s], self.norms[prev]) else {
            return Err(Error::Divergent {
                n: self.n,
                s: if self.norms[s].is_none() { s } else { prev },
                alpha_sq: self.alpha.norm_sqr(),
            });
        };
        let lowered = apply_annihilation(&self.states[s]);
        let target = self.states[prev].scale(self.alpha * (ns / np));
        lowered.distance(&target)
    }
}

/// `G[s][t] = <s|t>`.
pub fn gram_matrix(basis: &KaleidoscopeBasis) -> Result<OperatorMatrix> {
    let n = basis.n;
    let mut g = OperatorMatrix::zeros(n);
    for s in 0..n {
        for t in 0..n {
            g[(s, t)] = inner_product(&basis.states[s], &basis.states[t])?;
        }
    }
    Ok(g)
}

/// `||a^n |s> - alpha^n |s>||`.
pub fn check_power_eigenstate(basis: &KaleidoscopeBasis, s: usize) -> Result<f64> {
    check_residue(basis.n, s)?;
    let v = &basis.states[s];
    let lowered = apply_annihilation_power(v, basis.n);
    lowered.distance(&v.scale(basis.alpha.powu(basis.n as u32)))
}

/// `||a^n psi - alpha^n psi||` for an arbitrary state in the span.
pub fn power_eigen_residual(n: usize, alpha: Complex64, psi: &FockVector) -> Result<f64> {
    let lowered = apply_annihilation_power(psi, n);
    lowered.distance(&psi.scale(alpha.powu(n as u32)))
}

/// `|sum_k q^(2mk) - n delta_{m = 0 mod n}|`.
pub fn root_sum_residual(n: usize, m: i64) -> Result<f64> {
    let root = RootOfUnity::new(n)?;
    let expected = if m.rem_euclid(n as i64) == 0 {
        n as f64
    } else {
        0.0
    };
    Ok((root.power_sum(m) - expected).norm())
}
