//! Mean photon number in kaleidoscope states.
//!
//! Lowering `|s>_alpha` lands on `|s-1>_alpha`, which gives
//! `<s|N|s> = |alpha|^2 f_{s-1}(|alpha|^2) / f_s(|alpha|^2)` (indices mod n).

use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{check_residue, Error, Result};
use crate::fock::{number_expectation, DEFAULT_TOL};
use crate::kaleidoscope::{build_state_direct, KaleidoscopeBasis};
use crate::modexp::{ModExpFamily, OVERFLOW_GUARD};

/// Below this `|alpha|^2` the ratio is taken from the series.
const SERIES_LIMIT: f64 = 30.0;

/// `f_s(x) e^-x` from the superposition, real part. The `k = 0` term is 1/n
/// and every other term decays like `e^{(cos(2 pi k/n) - 1) x}`.
fn scaled_superposition(family: &ModExpFamily, s: usize, x: f64) -> f64 {
    let root = family.root();
    let n = family.n();
    let sum: Complex64 = (0..n as i64)
        .map(|k| root.q2_pow(-(s as i64) * k) * ((root.q2_pow(k) - 1.0) * x).exp())
        .sum();
    sum.re / n as f64
}

fn mod_exp_ratio(family: &ModExpFamily, s: usize, x: f64) -> Result<f64> {
    let n = family.n();
    let prev = (s + n - 1) % n;
    if x <= SERIES_LIMIT {
        return Ok(family.eval(prev, x)? / family.eval(s, x)?);
    }
    if (2..=4).contains(&n) && x <= OVERFLOW_GUARD {
        return Ok(family.closed(prev, x)? / family.closed(s, x)?);
    }
    Ok(scaled_superposition(family, prev, x) / scaled_superposition(family, s, x))
}

/// `<s|N|s>` at `|alpha|^2 = alpha_sq`; returns the limit `s` at zero.
pub fn photon_expectation(n: usize, s: usize, alpha_sq: f64) -> Result<f64> {
    check_residue(n, s)?;
    if !(alpha_sq >= 0.0) || !alpha_sq.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "|alpha|^2 must be finite and non-negative, got {alpha_sq}"
        )));
    }
    if alpha_sq == 0.0 {
        return Ok(s as f64);
    }
    let family = ModExpFamily::new(n)?;
    Ok(alpha_sq * mod_exp_ratio(&family, s, alpha_sq)?)
}

/// `<N>` measured on the Fock-space state from [`build_state_direct`].
pub fn photon_expectation_fock(n: usize, s: usize, alpha_sq: f64) -> Result<f64> {
    if !(alpha_sq >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "|alpha|^2 must be non-negative, got {alpha_sq}"
        )));
    }
    let alpha = Complex64::new(alpha_sq.sqrt(), 0.0);
    let dim = KaleidoscopeBasis::auto_dim(n, alpha, DEFAULT_TOL)?;
    let state = build_state_direct(n, alpha, s, dim)?;
    Ok(number_expectation(&state))
}

/// Sampled `<s|N|s>` over `|alpha|^2` in `[0, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonCurve {
    pub n: usize,
    pub s: usize,
    /// `(alpha_sq, expectation)` pairs in increasing `alpha_sq`.
    pub points: Vec<(f64, f64)>,
}

impl PhotonCurve {
    pub fn header(&self) -> String {
        format!("alpha_sq,expectation_s{}", self.s)
    }

    /// CSV with one row per grid point. Numbers use the shortest
    /// representation that round-trips to the same double.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.header())?;
        for (x, y) in &self.points {
            writeln!(out, "{x},{y}")?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

/// `steps + 1` evenly spaced samples on `[0, x_max]`, endpoints included.
pub fn photon_curve(n: usize, s: usize, x_max: f64, steps: usize) -> Result<PhotonCurve> {
    if steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 steps, got {steps}"
        )));
    }
    if !(x_max > 0.0) || !x_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "x_max must be positive, got {x_max}"
        )));
    }
    let points = (0..=steps)
        .map(|i| {
            let x = x_max * i as f64 / steps as f64;
            photon_expectation(n, s, x).map(|y| (x, y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhotonCurve { n, s, points })
}

/// `|<s|alpha>|^2 = e^-x f_s(x)`, the weight of `|s>_alpha` in the coherent
/// state `|alpha>`.
pub fn coherent_weights(n: usize, alpha_sq: f64) -> Result<Vec<f64>> {
    let family = ModExpFamily::new(n)?;
    (0..n)
        .map(|s| Ok(family.eval(s, alpha_sq)? * (-alpha_sq).exp()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, inner_product};
    use proptest::prelude::*;

    #[test]
    fn kitten_limits() {
        assert_eq!(photon_expectation(2, 0, 0.0).unwrap(), 0.0);
        assert_eq!(photon_expectation(2, 1, 0.0).unwrap(), 1.0);
        assert!(photon_expectation(2, 0, 1e-9).unwrap() < 1e-8);
        assert!((photon_expectation(2, 1, 1e-9).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn cat_state_at_one() {
        let fock = photon_expectation_fock(2, 0, 1.0).unwrap();
        assert!((fock - 1f64.tanh()).abs() < 1e-10);
        assert!((fock - 0.76159).abs() < 1e-5);
        assert!((photon_expectation(2, 0, 1.0).unwrap() - fock).abs() < 1e-10);
    }

    #[test]
    fn quartet_at_two() {
        let fock = photon_expectation_fock(4, 1, 2.0).unwrap();
        let closed = 2.0 * (2f64.cosh() + 2f64.cos()) / (2f64.sinh() + 2f64.sin());
        assert!((fock - closed).abs() < 1e-10);
        assert!((closed - 1.475_28).abs() < 1e-5);
        assert!((photon_expectation(4, 1, 2.0).unwrap() - fock).abs() < 1e-10);
    }

    #[test]
    fn trinity_matches_cosine_form() {
        for &x in &[0.5, 1.0, 3.0, 6.0] {
            let r3 = 3f64.sqrt() / 2.0 * x;
            let damp = 2.0 * (-1.5 * x).exp();
            let third = 2.0 * std::f64::consts::PI / 3.0;
            let s0 = x * (1.0 + damp * (r3 + third).cos()) / (1.0 + damp * r3.cos());
            let s1 = x * (1.0 + damp * r3.cos()) / (1.0 + damp * (r3 - third).cos());
            let s2 = x * (1.0 + damp * (r3 - third).cos()) / (1.0 + damp * (r3 + third).cos());
            for (s, v) in [s0, s1, s2].into_iter().enumerate() {
                assert!((photon_expectation(3, s, x).unwrap() - v).abs() <= 1e-12 * v.max(1.0));
            }
        }
    }

    #[test]
    fn large_argument_routes() {
        // n <= 4 switches to the closed forms, larger n to the scaled superposition
        for n in 2..=8 {
            for s in 0..n {
                let below = photon_expectation(n, s, SERIES_LIMIT).unwrap();
                let above = photon_expectation(n, s, SERIES_LIMIT + 1e-9).unwrap();
                assert!((below - above).abs() < 1e-8, "n={n} s={s}");
                let far = photon_expectation(n, s, 1000.0).unwrap();
                assert!((far / 1000.0 - 1.0).abs() < 1e-2, "n={n} s={s}");
            }
        }
        for n in 2..=4 {
            for s in 0..n {
                let v = photon_expectation(n, s, 50.0).unwrap();
                assert!((v / 50.0 - 1.0).abs() <= 0.02);
            }
        }
    }

    #[test]
    fn curve_shape() {
        let curve = photon_curve(2, 0, 6.0, 100).unwrap();
        assert_eq!(curve.points.len(), 101);
        assert_eq!(curve.points[0], (0.0, 0.0));
        assert!(curve.points.windows(2).all(|w| w[1].1 > w[0].1));
        let (x, y) = curve.points[100];
        assert!((y - x * x.tanh()).abs() < 1e-12);
        assert!((y - x).abs() < 1e-4);

        let curve = photon_curve(3, 1, 6.0, 100).unwrap();
        assert_eq!(curve.points[0].1, 1.0);

        let curve = photon_curve(4, 3, 6.0, 100).unwrap();
        assert_eq!(curve.points[0].1, 3.0);
        let above = curve
            .points
            .iter()
            .skip(1)
            .take_while(|(x, y)| y > x)
            .count();
        assert!(above > 0 && above < 100);
        let crossed = &curve.points[above + 1];
        assert!(crossed.1 <= crossed.0);
    }

    #[test]
    fn curve_csv() {
        let curve = photon_curve(4, 3, 6.0, 2).unwrap();
        let csv = curve.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "alpha_sq,expectation_s3");
        assert_eq!(lines[1], "0,3");
        let (x, y) = lines[3].split_once(',').unwrap();
        assert_eq!(x.parse::<f64>().unwrap(), 6.0);
        assert_eq!(y.parse::<f64>().unwrap(), curve.points[2].1);
    }

    #[test]
    fn curve_rejects_bad_grid() {
        assert!(photon_curve(2, 0, 6.0, 1).is_err());
        assert!(photon_curve(2, 0, 0.0, 10).is_err());
    }

    #[test]
    fn coherent_weights_match_overlaps() {
        let n = 3;
        let alpha = Complex64::new(1.1, 0.4);
        let basis = KaleidoscopeBasis::new(n, alpha).unwrap();
        let coherent = coherent_state(alpha, basis.dim()).unwrap();
        let weights = coherent_weights(n, alpha.norm_sqr()).unwrap();
        for (s, w) in weights.iter().enumerate() {
            let overlap = inner_product(basis.state(s), &coherent).unwrap().norm_sqr();
            assert!((overlap - w).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closed_form_matches_fock(n in 2usize..=8, x in 0.0f64..6.0) {
            for s in 0..n {
                let closed = photon_expectation(n, s, x).unwrap();
                let fock = photon_expectation_fock(n, s, x).unwrap();
                prop_assert!((closed - fock).abs() <= 1e-8, "n={} s={} x={}", n, s, x);
                prop_assert!(closed >= 0.0);
            }
        }

        #[test]
        fn small_argument_limit(n in 2usize..=8) {
            for s in 0..n {
                prop_assert!((photon_expectation(n, s, 1e-6).unwrap() - s as f64).abs() <= 1e-5);
            }
        }

        #[test]
        fn coherent_mixture_recovers_mean(n in 2usize..=8, x in 0.01f64..6.0) {
            let weights = coherent_weights(n, x).unwrap();
            let total: f64 = (0..n)
                .map(|s| weights[s] * photon_expectation(n, s, x).unwrap())
                .sum();
            prop_assert!((total - x).abs() <= 1e-8);
        }
    }
}
