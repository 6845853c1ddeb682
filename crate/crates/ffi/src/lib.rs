//! C ABI for `qkaleido`.
//!
//! Every function returns a [`QkStatus`] and writes results through out
//! pointers. Kaleidoscope bases are exposed as an opaque [`QkBasis`] handle
//! owned by the caller and released with [`qk_basis_free`]. Panics never
//! cross the boundary; they surface as `QK_STATUS_PANIC`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qkaleido::kaleidoscope::{gram_matrix, Route};
use qkaleido::modexp::ModExpFamily;
use qkaleido::photon::photon_expectation;
use qkaleido::qalgebra::{b_operators, hamiltonian_matrix, hamiltonian_spectrum, SylvesterPair};
use qkaleido::{Complex64, Error, KaleidoscopeBasis, OperatorMatrix, QNumberKind, QftMatrix};

pub const QK_MATRIX_QFT: u32 = 0;
pub const QK_MATRIX_CLOCK: u32 = 1;
pub const QK_MATRIX_SHIFT: u32 = 2;
pub const QK_MATRIX_B_SYMMETRIC: u32 = 3;
pub const QK_MATRIX_BDAG_SYMMETRIC: u32 = 4;
pub const QK_MATRIX_B_NONSYMMETRIC: u32 = 5;
pub const QK_MATRIX_BDAG_NONSYMMETRIC: u32 = 6;
/// Hamiltonian with `hbar omega = 1`.
pub const QK_MATRIX_HAMILTONIAN: u32 = 7;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidOrder = 2,
    InvalidResidue = 3,
    InvalidArgument = 4,
    Overflow = 5,
    Divergent = 6,
    Degenerate = 7,
    DimensionMismatch = 8,
    BufferTooSmall = 9,
    Unsupported = 10,
    Panic = 11,
}

impl From<Error> for QkStatus {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidOrder { .. } => QkStatus::InvalidOrder,
            Error::InvalidResidue { .. } => QkStatus::InvalidResidue,
            Error::Overflow { .. } => QkStatus::Overflow,
            Error::UnsupportedOrder(_) => QkStatus::Unsupported,
            Error::DimensionMismatch { .. } => QkStatus::DimensionMismatch,
            Error::Degenerate { .. } => QkStatus::Degenerate,
            Error::Divergent { .. } => QkStatus::Divergent,
            Error::InvalidArgument(_) | Error::Io { .. } => QkStatus::InvalidArgument,
        }
    }
}

/// Opaque kaleidoscope basis.
pub struct QkBasis {
    inner: KaleidoscopeBasis,
}

fn guard(f: impl FnOnce() -> Result<(), QkStatus>) -> QkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QkStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => QkStatus::Panic,
    }
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, QkStatus> {
    p.as_mut().ok_or(QkStatus::NullPointer)
}

unsafe fn out_slice<'a>(p: *mut f64, len: usize, needed: usize) -> Result<&'a mut [f64], QkStatus> {
    if p.is_null() {
        return Err(QkStatus::NullPointer);
    }
    if len < needed {
        return Err(QkStatus::BufferTooSmall);
    }
    Ok(std::slice::from_raw_parts_mut(p, needed))
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn qk_status_message(status: QkStatus) -> *const c_char {
    let text: &'static CStr = match status {
        QkStatus::Ok => c"ok",
        QkStatus::NullPointer => c"null pointer argument",
        QkStatus::InvalidOrder => c"polygon order out of range",
        QkStatus::InvalidResidue => c"residue index out of range",
        QkStatus::InvalidArgument => c"invalid argument",
        QkStatus::Overflow => c"argument exceeds the overflow guard",
        QkStatus::Divergent => c"normalization diverges",
        QkStatus::Degenerate => c"superposition cancels below round-off",
        QkStatus::DimensionMismatch => c"dimension mismatch",
        QkStatus::BufferTooSmall => c"output buffer too small",
        QkStatus::Unsupported => c"unsupported order for this route",
        QkStatus::Panic => c"internal panic",
    };
    text.as_ptr()
}

#[no_mangle]
pub extern "C" fn qk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds the basis for `(n, alpha)`. `dim = 0` picks the truncation from
/// `tol` (pass `1e-12` for the library default). `route` is 0 for the
/// direct series construction and 1 for the Fourier superposition.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn qk_basis_new(
    n: usize,
    alpha_re: f64,
    alpha_im: f64,
    dim: usize,
    tol: f64,
    route: u32,
    out: *mut *mut QkBasis,
) -> QkStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let alpha = Complex64::new(alpha_re, alpha_im);
        let route = match route {
            0 => Route::Direct,
            1 => Route::Fourier,
            _ => return Err(QkStatus::InvalidArgument),
        };
        let dim = if dim == 0 {
            KaleidoscopeBasis::auto_dim(n, alpha, tol)?
        } else {
            dim
        };
        let inner = KaleidoscopeBasis::build(n, alpha, dim, route)?;
        *out = Box::into_raw(Box::new(QkBasis { inner }));
        Ok(())
    })
}

/// # Safety
/// `basis` must come from [`qk_basis_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qk_basis_free(basis: *mut QkBasis) {
    if !basis.is_null() {
        drop(Box::from_raw(basis));
    }
}

unsafe fn basis_ref<'a>(basis: *const QkBasis) -> Result<&'a KaleidoscopeBasis, QkStatus> {
    basis
        .as_ref()
        .map(|b| &b.inner)
        .ok_or(QkStatus::NullPointer)
}

/// # Safety
/// `basis` must be a live handle and `n`, `dim` valid out pointers.
#[no_mangle]
pub unsafe extern "C" fn qk_basis_shape(
    basis: *const QkBasis,
    n: *mut usize,
    dim: *mut usize,
) -> QkStatus {
    guard(|| {
        let b = basis_ref(basis)?;
        *out_ref(n)? = b.n();
        *out_ref(dim)? = b.dim();
        Ok(())
    })
}

/// Copies the Fock amplitudes of `|s>` into `re` and `im`, each of length
/// at least `dim`.
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qk_basis_amplitudes(
    basis: *const QkBasis,
    s: usize,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QkStatus {
    guard(|| {
        let b = basis_ref(basis)?;
        if s >= b.n() {
            return Err(QkStatus::InvalidResidue);
        }
        let amps = b.state(s).amplitudes();
        let re = out_slice(re, len, amps.len())?;
        let im = out_slice(im, len, amps.len())?;
        for (k, z) in amps.iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// `N_s`; `QK_STATUS_DIVERGENT` at `alpha = 0` for `s > 0`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qk_basis_norm(basis: *const QkBasis, s: usize, out: *mut f64) -> QkStatus {
    guard(|| {
        let b = basis_ref(basis)?;
        if s >= b.n() {
            return Err(QkStatus::InvalidResidue);
        }
        *out_ref(out)? = b.norm_constant(s).ok_or(QkStatus::Divergent)?;
        Ok(())
    })
}

/// `max |<s|t> - delta_st|`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qk_basis_orthonormality(basis: *const QkBasis, out: *mut f64) -> QkStatus {
    guard(|| {
        let b = basis_ref(basis)?;
        let g = gram_matrix(b)?;
        *out_ref(out)? = g.max_abs_diff(&OperatorMatrix::identity(b.n()));
        Ok(())
    })
}

/// Real mod-n exponential `f_s(x)` from the power series.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qk_mod_exp(n: usize, s: usize, x: f64, out: *mut f64) -> QkStatus {
    guard(|| {
        let v = ModExpFamily::new(n)?.eval(s, x)?;
        *out_ref(out)? = v;
        Ok(())
    })
}

/// `<s|N|s>` at `|alpha|^2 = alpha_sq`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qk_photon_expectation(
    n: usize,
    s: usize,
    alpha_sq: f64,
    out: *mut f64,
) -> QkStatus {
    guard(|| {
        let v = photon_expectation(n, s, alpha_sq)?;
        *out_ref(out)? = v;
        Ok(())
    })
}

fn matrix_for(n: usize, which: u32) -> Result<OperatorMatrix, QkStatus> {
    Ok(match which {
        QK_MATRIX_QFT => QftMatrix::new(n)?.into_matrix(),
        QK_MATRIX_CLOCK => SylvesterPair::new(n)?.clock().clone(),
        QK_MATRIX_SHIFT => SylvesterPair::new(n)?.shift().clone(),
        QK_MATRIX_B_SYMMETRIC => b_operators(n, QNumberKind::Symmetric)?.0,
        QK_MATRIX_BDAG_SYMMETRIC => b_operators(n, QNumberKind::Symmetric)?.1,
        QK_MATRIX_B_NONSYMMETRIC => b_operators(n, QNumberKind::NonSymmetric)?.0,
        QK_MATRIX_BDAG_NONSYMMETRIC => b_operators(n, QNumberKind::NonSymmetric)?.1,
        QK_MATRIX_HAMILTONIAN => hamiltonian_matrix(n, 1.0)?,
        _ => return Err(QkStatus::InvalidArgument),
    })
}

/// Writes the `n x n` matrix `which` (a `QK_MATRIX_*` constant) in row-major
/// order into `re` and `im`, each holding at least `n * n` doubles.
///
/// # Safety
/// `re` and `im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qk_matrix(
    n: usize,
    which: u32,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> QkStatus {
    guard(|| {
        let m = matrix_for(n, which)?;
        let entries = m.entries();
        let re = out_slice(re, len, entries.len())?;
        let im = out_slice(im, len, entries.len())?;
        for (k, z) in entries.iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// The `n` q-oscillator levels `E_0 .. E_(n-1)`.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qk_spectrum(
    n: usize,
    hbar_omega: f64,
    out: *mut f64,
    len: usize,
) -> QkStatus {
    guard(|| {
        let e = hamiltonian_spectrum(n, hbar_omega)?;
        out_slice(out, len, e.len())?.copy_from_slice(&e);
        Ok(())
    })
}
