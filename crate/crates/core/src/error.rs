use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polygon order must be at least {min}, got {n}")]
    InvalidOrder { n: usize, min: usize },

    #[error("residue index {s} out of range for order {n}")]
    InvalidResidue { s: usize, n: usize },

    #[error("argument magnitude {magnitude} exceeds the overflow guard {limit}")]
    Overflow { magnitude: f64, limit: f64 },

    #[error("no closed form for order {0}; use the series or superposition route")]
    UnsupportedOrder(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("superposition for residue {s} cancels below the round-off floor (norm {norm:e})")]
    Degenerate { s: usize, norm: f64 },

    #[error("normalization diverges: mod-{n} exponential f_{s} vanishes at {alpha_sq}")]
    Divergent { n: usize, s: usize, alpha_sq: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub(crate) fn check_order(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidOrder { n, min });
    }
    Ok(())
}

pub(crate) fn check_residue(n: usize, s: usize) -> Result<()> {
    check_order(n, 1)?;
    if s >= n {
        return Err(Error::InvalidResidue { s, n });
    }
    Ok(())
}
