//! The finite q-oscillator algebra on one `n x n` block.
//!
//! With `q = exp(i pi / n)` the dilatation `q^(2N)` restricted to a block is
//! the Sylvester clock matrix; the Fourier transform maps it to the cyclic
//! shift. q-numbers come in two flavours:
//!
//! * non-symmetric `[k] = (q^(2k) - 1) / (q^2 - 1)`, periodic mod `n`;
//! * symmetric `[k] = (q^(2k) - q^(-2k)) / (q^2 - q^(-2)) = sin(2 pi k/n) / sin(2 pi/n)`.
//!
//! `B` carries `sqrt([k])` on the superdiagonal and `B+` is its transpose, so
//! `B+ B = diag([0], ..., [n-1])` holds for complex and negative q-numbers
//! alike. Where every `[k] >= 0` the transpose is also the Hermitian adjoint.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{check_order, Error, Result};
use crate::kaleidoscope::QftMatrix;
use crate::matrix::OperatorMatrix;
use crate::modexp::RootOfUnity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QNumberKind {
    NonSymmetric,
    Symmetric,
}

impl QNumberKind {
    pub const ALL: [QNumberKind; 2] = [QNumberKind::NonSymmetric, QNumberKind::Symmetric];
}

impl fmt::Display for QNumberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QNumberKind::NonSymmetric => "nonsymmetric",
            QNumberKind::Symmetric => "symmetric",
        })
    }
}

impl FromStr for QNumberKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonsymmetric" | "non-symmetric" => Ok(QNumberKind::NonSymmetric),
            "symmetric" => Ok(QNumberKind::Symmetric),
            other => Err(Error::InvalidArgument(format!(
                "unknown q-number kind `{other}`"
            ))),
        }
    }
}

/// `[k]` for `q = exp(i pi / n)`.
///
/// The symmetric kind is evaluated from the real ratio of sines. At `n = 2`
/// both numerator and denominator vanish and the continuous limit
/// `k (-1)^(k+1)` is returned.
pub fn q_number(k: i64, n: usize, kind: QNumberKind) -> Result<Complex64> {
    check_order(n, 2)?;
    let value = match kind {
        QNumberKind::NonSymmetric => {
            let root = RootOfUnity::new(n)?;
            (root.q2_pow(k) - 1.0) / (root.q2_pow(1) - 1.0)
        }
        QNumberKind::Symmetric if n == 2 => {
            let sign = if k.rem_euclid(2) == 0 { -1.0 } else { 1.0 };
            Complex64::new(sign * k as f64, 0.0)
        }
        QNumberKind::Symmetric => {
            let theta = 2.0 * PI / n as f64;
            let reduced = k.rem_euclid(n as i64) as f64;
            Complex64::new((theta * reduced).sin() / theta.sin(), 0.0)
        }
    };
    Ok(value)
}

/// `e^(i pi (k-1)/n) sin(pi k/n) / sin(pi/n)`, the polar form of the
/// non-symmetric q-number.
pub fn nonsymmetric_polar(k: i64, n: usize) -> Result<Complex64> {
    check_order(n, 2)?;
    let step = PI / n as f64;
    let modulus = (step * k as f64).sin() / step.sin();
    Ok(Complex64::from_polar(1.0, step * (k - 1) as f64) * modulus)
}

/// `diag([offset], [offset+1], ..., [offset+n-1])`.
pub fn q_number_diagonal(n: usize, kind: QNumberKind, offset: i64) -> Result<OperatorMatrix> {
    let diag = (0..n as i64)
        .map(|k| q_number(k + offset, n, kind))
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorMatrix::diagonal(&diag))
}

/// `q^(2 power N)` on one block: `diag(1, q^(2 power), q^(4 power), ...)`.
pub fn dilatation(n: usize, power: i64) -> Result<OperatorMatrix> {
    let root = RootOfUnity::new(n)?;
    let diag: Vec<_> = (0..n as i64).map(|k| root.q2_pow(power * k)).collect();
    Ok(OperatorMatrix::diagonal(&diag))
}

/// Clock `q^(2N)` and shift on one `n x n` block.
#[derive(Debug, Clone, PartialEq)]
pub struct SylvesterPair {
    n: usize,
    root: RootOfUnity,
    clock: OperatorMatrix,
    shift: OperatorMatrix,
}

impl SylvesterPair {
    /// The shift has `shift[j][j-1 mod n] = 1`: ones below the diagonal and
    /// in the top-right corner, so `shift e_k = e_(k+1)`.
    pub fn new(n: usize) -> Result<Self> {
        check_order(n, 2)?;
        let root = RootOfUnity::new(n)?;
        let clock = dilatation(n, 1)?;
        let shift = OperatorMatrix::from_fn(n, |r, c| {
            if (c + 1) % n == r {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(Self {
            n,
            root,
            clock,
            shift,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clock(&self) -> &OperatorMatrix {
        &self.clock
    }

    pub fn shift(&self) -> &OperatorMatrix {
        &self.shift
    }

    /// `|shift clock - q^2 clock shift|_max`.
    pub fn q_commutation_residual(&self) -> f64 {
        let lhs = &self.shift * &self.clock;
        let rhs = (&self.clock * &self.shift).scale(self.root.q2_pow(1));
        lhs.max_abs_diff(&rhs)
    }

    /// `|clock shift - q^2 shift clock|_max`, the ordering this shift obeys.
    pub fn clock_first_commutation_residual(&self) -> f64 {
        let lhs = &self.clock * &self.shift;
        let rhs = (&self.shift * &self.clock).scale(self.root.q2_pow(1));
        lhs.max_abs_diff(&rhs)
    }

    /// `max(|shift^n - I|, |clock^n - I|)`.
    pub fn order_residual(&self) -> f64 {
        let id = OperatorMatrix::identity(self.n);
        let k = self.n as u32;
        self.shift
            .pow(k)
            .max_abs_diff(&id)
            .max(self.clock.pow(k).max_abs_diff(&id))
    }

    /// `|shift - Q clock Q+|_max`.
    pub fn conjugation_residual(&self) -> Result<f64> {
        let q = QftMatrix::new(self.n)?;
        let conj = &(q.matrix() * &self.clock) * &q.matrix().adjoint();
        Ok(self.shift.max_abs_diff(&conj))
    }
}

pub fn sylvester_pair(n: usize) -> Result<SylvesterPair> {
    SylvesterPair::new(n)
}

/// `B` (superdiagonal `sqrt([k])`, `k = 1..n-1`) and `B+` (its transpose).
///
/// Square roots take the principal branch, so negative symmetric q-numbers
/// give imaginary entries.
pub fn b_operators(n: usize, kind: QNumberKind) -> Result<(OperatorMatrix, OperatorMatrix)> {
    check_order(n, 2)?;
    let roots = (0..n as i64)
        .map(|k| q_number(k, n, kind).map(|v| v.sqrt()))
        .collect::<Result<Vec<_>>>()?;
    let b = OperatorMatrix::from_fn(n, |r, c| {
        if c == r + 1 {
            roots[c]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let b_plus = b.transpose();
    Ok((b, b_plus))
}

/// Deviation of `B B+ - c B+ B` from its expected diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationResidual {
    /// Largest deviation over rows and columns `0..n-1`.
    pub interior: f64,
    /// Largest deviation touching the top level `n-1`.
    pub boundary: f64,
}

fn split_residual(diff: &OperatorMatrix) -> RelationResidual {
    let n = diff.dim();
    let top = n - 1;
    let mut interior: f64 = 0.0;
    let mut boundary: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let d = diff[(r, c)].norm();
            if r == top || c == top {
                boundary = boundary.max(d);
            } else {
                interior = interior.max(d);
            }
        }
    }
    RelationResidual { interior, boundary }
}

/// Residuals of the four block relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraResiduals {
    /// `B B+ - q^2 B+ B = q^(-2N)` and `B B+ - q^(-2) B+ B = q^(2N)`.
    pub symmetric: [RelationResidual; 2],
    /// `B B+ - q^2 B+ B = I` and `B B+ - B+ B = q^(2N)`.
    pub nonsymmetric: [RelationResidual; 2],
}

impl AlgebraResiduals {
    pub fn max_interior(&self) -> f64 {
        self.symmetric
            .iter()
            .chain(&self.nonsymmetric)
            .map(|r| r.interior)
            .fold(0.0, f64::max)
    }
}

fn relation(
    n: usize,
    kind: QNumberKind,
    coefficient: Complex64,
    rhs: &OperatorMatrix,
) -> Result<RelationResidual> {
    let (b, b_plus) = b_operators(n, kind)?;
    let lhs = &(&b * &b_plus) - &(&b_plus * &b).scale(coefficient);
    Ok(split_residual(&(&lhs - rhs)))
}

pub fn algebra_residuals(n: usize) -> Result<AlgebraResiduals> {
    let root = RootOfUnity::new(n)?;
    let q2 = root.q2_pow(1);
    let q2_inv = root.q2_pow(-1);
    let symmetric = [
        relation(n, QNumberKind::Symmetric, q2, &dilatation(n, -1)?)?,
        relation(n, QNumberKind::Symmetric, q2_inv, &dilatation(n, 1)?)?,
    ];
    let nonsymmetric = [
        relation(
            n,
            QNumberKind::NonSymmetric,
            q2,
            &OperatorMatrix::identity(n),
        )?,
        relation(
            n,
            QNumberKind::NonSymmetric,
            Complex64::new(1.0, 0.0),
            &dilatation(n, 1)?,
        )?,
    ];
    Ok(AlgebraResiduals {
        symmetric,
        nonsymmetric,
    })
}

/// `|B+ B - diag([k])|_max`.
pub fn factorization_residual(n: usize, kind: QNumberKind) -> Result<f64> {
    let (b, b_plus) = b_operators(n, kind)?;
    Ok((&b_plus * &b).max_abs_diff(&q_number_diagonal(n, kind, 0)?))
}

/// `max(|B^n|, |(B+)^n|)`.
pub fn nilpotency_residual(n: usize, kind: QNumberKind) -> Result<f64> {
    let (b, b_plus) = b_operators(n, kind)?;
    Ok(b.pow(n as u32)
        .max_abs()
        .max(b_plus.pow(n as u32).max_abs()))
}

/// `H = (hbar omega / 2)([N] + [N + 1])` with symmetric q-numbers, diagonal
/// on the kaleidoscope states.
pub fn hamiltonian_matrix(n: usize, hbar_omega: f64) -> Result<OperatorMatrix> {
    let sum = &q_number_diagonal(n, QNumberKind::Symmetric, 0)?
        + &q_number_diagonal(n, QNumberKind::Symmetric, 1)?;
    Ok(sum.scale(Complex64::new(hbar_omega / 2.0, 0.0)))
}

/// `E_k = (hbar omega / 2) sin(2 pi (k + 1/2) / n) / sin(pi / n)`.
pub fn hamiltonian_spectrum(n: usize, hbar_omega: f64) -> Result<Vec<f64>> {
    check_order(n, 2)?;
    if !(hbar_omega > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "hbar*omega must be positive, got {hbar_omega}"
        )));
    }
    let nf = n as f64;
    Ok((0..n)
        .map(|k| hbar_omega / 2.0 * (2.0 * PI * (k as f64 + 0.5) / nf).sin() / (PI / nf).sin())
        .collect())
}

/// Largest `|H_kk - E_k| / max(|E_k|, hbar omega)` together with the largest
/// off-diagonal modulus of `H`.
pub fn spectrum_residual(n: usize, hbar_omega: f64) -> Result<f64> {
    let h = hamiltonian_matrix(n, hbar_omega)?;
    let e = hamiltonian_spectrum(n, hbar_omega)?;
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let d = if r == c {
                (h[(r, c)] - e[r]).norm() / e[r].abs().max(hbar_omega)
            } else {
                h[(r, c)].norm()
            };
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// The Hamiltonian diagonal on Fock levels `0..dim`: `(hbar omega / 2)([m] + [m+1])`.
pub fn fock_hamiltonian_diagonal(n: usize, dim: usize, hbar_omega: f64) -> Result<Vec<f64>> {
    (0..dim as i64)
        .map(|m| {
            let a = q_number(m, n, QNumberKind::Symmetric)?;
            let b = q_number(m + 1, n, QNumberKind::Symmetric)?;
            Ok(hbar_omega / 2.0 * (a + b).re)
        })
        .collect()
}
