//! Mod-n exponential functions.
//!
//! For a polygon order `n` the exponential series splits into `n` sub-series
//!
//! ```text
//! f_s(x) = sum_k x^(nk+s) / (nk+s)!,    0 <= s < n,
//! ```
//!
//! one per residue class of the power. `n = 2` gives `cosh`/`sinh`. The
//! functions cycle under differentiation (`f_s' = f_{s-1 mod n}`), so each
//! solves `f^(n) = f`.
//!
//! Three evaluation routes are provided: the term-recurrence series, the
//! finite superposition of rotated exponentials, and real closed forms for
//! `n` in `{2, 3, 4}`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_order, check_residue, Error, Result};

/// Largest `|x|` accepted before `e^|x|` leaves double range.
pub const OVERFLOW_GUARD: f64 = 700.0;

/// Default series stopping tolerance.
pub const DEFAULT_PRECISION: f64 = 1e-16;

/// The pair `(n, q)` with `q = exp(i pi / n)`, so `q^(2n) = 1`.
///
/// `w = conj(q^2) = exp(-2 pi i / n)` is the Fourier root used by the QFT.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOfUnity {
    n: usize,
    q: Complex64,
    w: Complex64,
}

impl RootOfUnity {
    pub fn new(n: usize) -> Result<Self> {
        check_order(n, 1)?;
        let q = Complex64::from_polar(1.0, PI / n as f64);
        let w = Complex64::from_polar(1.0, -2.0 * PI / n as f64);
        Ok(Self { n, q, w })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    /// `q^j` for any integer `j`, reduced modulo `2n` before evaluation so
    /// that high powers carry no accumulated round-off.
    pub fn q_pow(&self, j: i64) -> Complex64 {
        let period = 2 * self.n as i64;
        let r = j.rem_euclid(period);
        Complex64::from_polar(1.0, PI * r as f64 / self.n as f64)
    }

    /// `q^(2j)`, the rotation by `j` vertices of the regular n-gon.
    pub fn q2_pow(&self, j: i64) -> Complex64 {
        self.q_pow(2 * j)
    }

    /// `w^j = q^(-2j)`.
    pub fn w_pow(&self, j: i64) -> Complex64 {
        self.q2_pow(-j)
    }

    /// `sum_{k<n} q^(2mk)` accumulated by repeated multiplication.
    ///
    /// Equals `n` when `m = 0 (mod n)` and zero otherwise.
    pub fn power_sum(&self, m: i64) -> Complex64 {
        let step = self.q2_pow(m);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for _ in 0..self.n {
            sum += term;
            term *= step;
        }
        sum
    }
}

/// Evaluator for the `n` functions `f_s(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModExpFamily {
    root: RootOfUnity,
    precision: f64,
}

/// Outcome of [`ModExpFamily::ode_residual`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeResidual {
    /// `|f_s^(n)(x) - f_s(x)|` with the n-th derivative taken by re-indexing.
    pub cycling: f64,
    /// `|f_{s-1}(x) - (f_s(x+h) - f_s(x-h)) / 2h|`.
    pub finite_difference: f64,
}

impl ModExpFamily {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_precision(n, DEFAULT_PRECISION)
    }

    pub fn with_precision(n: usize, precision: f64) -> Result<Self> {
        if !(precision > 0.0 && precision < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "series precision must lie in (0, 1), got {precision}"
            )));
        }
        Ok(Self {
            root: RootOfUnity::new(n)?,
            precision,
        })
    }

    pub fn n(&self) -> usize {
        self.root.n
    }

    pub fn root(&self) -> &RootOfUnity {
        &self.root
    }

    pub fn precision(&self) -> f64 {
        self.precision
    }

    fn check(&self, s: usize, x: Complex64) -> Result<()> {
        check_residue(self.n(), s)?;
        let magnitude = x.norm();
        if !(magnitude <= OVERFLOW_GUARD) {
            return Err(Error::Overflow {
                magnitude,
                limit: OVERFLOW_GUARD,
            });
        }
        Ok(())
    }

    /// Sums the sub-series directly, building each term from the previous
    /// one by `t_{k+1} = t_k x^n / prod_{j=1..n} (nk+s+j)`.
    pub fn series(&self, s: usize, x: Complex64) -> Result<Complex64> {
        self.check(s, x)?;
        let n = self.n();
        let mut term = Complex64::new(1.0, 0.0);
        for j in 1..=s {
            term *= x / j as f64;
        }
        let xn = x.powu(n as u32);
        let abs_xn = xn.norm();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut k = 0usize;
        loop {
            sum += term;
            let base = n * k + s;
            let denom: f64 = (1..=n).map(|j| (base + j) as f64).product();
            term = term * xn / denom;
            k += 1;
            // terms only shrink monotonically once |x|^n < denom
            if term.norm() < self.precision * (1.0 + sum.norm()) && abs_xn < denom {
                break;
            }
        }
        Ok(sum)
    }

    /// `f_s(x) = (1/n) sum_k conj(q)^(2sk) exp(q^(2k) x)`.
    ///
    /// Exact in exact arithmetic but subject to cancellation whenever
    /// `|f_s(x)|` is much smaller than `e^|x|`.
    pub fn superposition(&self, s: usize, x: Complex64) -> Result<Complex64> {
        self.check(s, x)?;
        let n = self.n();
        let sum: Complex64 = (0..n as i64)
            .map(|k| self.root.q2_pow(-(s as i64) * k) * (self.root.q2_pow(k) * x).exp())
            .sum();
        Ok(sum / n as f64)
    }

    /// Real closed forms for `n` in `{2, 3, 4}`.
    pub fn closed(&self, s: usize, x: f64) -> Result<f64> {
        self.check(s, Complex64::new(x, 0.0))?;
        let value = match (self.n(), s) {
            (2, 0) => x.cosh(),
            (2, 1) => x.sinh(),
            (3, _) => {
                let phase = 3f64.sqrt() / 2.0 * x - 2.0 * PI * s as f64 / 3.0;
                (x.exp() + 2.0 * (-x / 2.0).exp() * phase.cos()) / 3.0
            }
            (4, 0) => (x.cosh() + x.cos()) / 2.0,
            (4, 1) => (x.sinh() + x.sin()) / 2.0,
            (4, 2) => (x.cosh() - x.cos()) / 2.0,
            (4, 3) => (x.sinh() - x.sin()) / 2.0,
            (n, _) => return Err(Error::UnsupportedOrder(n)),
        };
        Ok(value)
    }

    /// Real evaluation through the series route.
    pub fn eval(&self, s: usize, x: f64) -> Result<f64> {
        Ok(self.series(s, Complex64::new(x, 0.0))?.re)
    }

    /// `f_s` differentiated `order` times, obtained by re-indexing:
    /// `d^j f_s / dx^j = f_{(s - j) mod n}`.
    pub fn derivative(&self, s: usize, order: usize, x: Complex64) -> Result<Complex64> {
        check_residue(self.n(), s)?;
        let n = self.n();
        let index = (s + n - order % n) % n;
        self.series(index, x)
    }

    /// Term-by-term derivative of the series for `f_s`,
    /// `sum_k (nk+s) x^(nk+s-1) / (nk+s)!`, summed without re-indexing.
    pub fn series_derivative(&self, s: usize, x: Complex64) -> Result<Complex64> {
        self.check(s, x)?;
        let n = self.n();
        // the power p = nk+s contributes x^(p-1)/(p-1)!; the p = 0 term vanishes
        let mut power = if s == 0 { n } else { s };
        let mut term = Complex64::new(1.0, 0.0);
        for j in 1..power {
            term *= x / j as f64;
        }
        let xn = x.powu(n as u32);
        let abs_xn = xn.norm();
        let mut sum = Complex64::new(0.0, 0.0);
        loop {
            sum += term;
            let denom: f64 = (0..n).map(|j| (power + j) as f64).product();
            term = term * xn / denom;
            power += n;
            if term.norm() < self.precision * (1.0 + sum.norm()) && abs_xn < denom {
                break;
            }
        }
        Ok(sum)
    }

    /// Checks `f_s^(n) = f_s` at a real point.
    pub fn ode_residual(&self, s: usize, x: f64, h: f64) -> Result<OdeResidual> {
        if !(h > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "finite-difference step must be positive, got {h}"
            )));
        }
        let z = Complex64::new(x, 0.0);
        let nth = self.derivative(s, self.n(), z)?;
        let value = self.series(s, z)?;
        let first = self.derivative(s, 1, z)?;
        let ahead = self.eval(s, x + h)?;
        let behind = self.eval(s, x - h)?;
        let fd = (ahead - behind) / (2.0 * h);
        Ok(OdeResidual {
            cycling: (nth - value).norm(),
            finite_difference: (first.re - fd).abs(),
        })
    }
}

pub fn mod_exp_series(n: usize, s: usize, x: Complex64) -> Result<Complex64> {
    ModExpFamily::new(n)?.series(s, x)
}

pub fn mod_exp_superposition(n: usize, s: usize, x: Complex64) -> Result<Complex64> {
    ModExpFamily::new(n)?.superposition(s, x)
}

pub fn mod_exp_closed(n: usize, s: usize, x: f64) -> Result<f64> {
    ModExpFamily::new(n)?.closed(s, x)
}

pub fn ode_residual(n: usize, s: usize, x: f64, h: f64) -> Result<OdeResidual> {
    ModExpFamily::new(n)?.ode_residual(s, x, h)
}
