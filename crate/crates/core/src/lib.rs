//! Kaleidoscope coherent states.
//!
//! `n` coherent states placed on the vertices of a regular n-gon,
//! `|alpha>, |q^2 alpha>, ..., |q^(2(n-1)) alpha>` with `q = exp(i pi / n)`,
//! combine through the quantum Fourier transform into `n` orthonormal states
//! `|s>_alpha`. State `s` lives on the Fock levels `m = s (mod n)` and is
//! normalized by the mod-n exponential function `f_s(|alpha|^2)`.
//!
//! Modules:
//!
//! * [`modexp`]: the mod-n exponentials and the root of unity `q`.
//! * [`fock`]: truncated Fock-space vectors, ladder operators, coherent states.
//! * [`kaleidoscope`]: the orthonormal basis, built by two independent routes.
//! * [`photon`]: photon-number expectations and curves.
//! * [`qalgebra`]: clock/shift matrices, q-numbers, the `B`/`B+` ladder and the
//!   q-oscillator spectrum.
//! * [`cli`] and [`verify`]: the command-line front end and its check suite.

// argument checks are written as `!(x > 0.0)` so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fock;
pub mod kaleidoscope;
pub mod matrix;
pub mod modexp;
pub mod photon;
pub mod qalgebra;
pub mod verify;

pub use error::{Error, Result};
pub use fock::FockVector;

pub use kaleidoscope::{KaleidoscopeBasis, QftMatrix};
pub use matrix::OperatorMatrix;
pub use modexp::{ModExpFamily, RootOfUnity};
pub use num_complex::Complex64;
pub use photon::PhotonCurve;
pub use qalgebra::{QNumberKind, SylvesterPair};
