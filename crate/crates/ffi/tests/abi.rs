use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use qkaleido_ffi::*;

fn new_basis(n: usize, re: f64, im: f64, route: u32) -> *mut QkBasis {
    let mut b = ptr::null_mut();
    let status = unsafe { qk_basis_new(n, re, im, 0, 1e-12, route, &mut b) };
    assert_eq!(status, QkStatus::Ok);
    assert!(!b.is_null());
    b
}

fn amplitudes(b: *const QkBasis, s: usize) -> (Vec<f64>, Vec<f64>) {
    let (mut n, mut dim) = (0, 0);
    assert_eq!(unsafe { qk_basis_shape(b, &mut n, &mut dim) }, QkStatus::Ok);
    let mut re = vec![0.0; dim];
    let mut im = vec![0.0; dim];
    let status = unsafe { qk_basis_amplitudes(b, s, re.as_mut_ptr(), im.as_mut_ptr(), dim) };
    assert_eq!(status, QkStatus::Ok);
    (re, im)
}

#[test]
fn basis_round_trip() {
    let b = new_basis(4, 1.0, 1.0, 0);
    let mut residual = 1.0;
    assert_eq!(
        unsafe { qk_basis_orthonormality(b, &mut residual) },
        QkStatus::Ok
    );
    assert!(residual < 1e-12);

    let (re, im) = amplitudes(b, 2);
    let norm: f64 = re.iter().zip(&im).map(|(a, c)| a * a + c * c).sum();
    assert!((norm - 1.0).abs() < 1e-12);
    for (m, (a, c)) in re.iter().zip(&im).enumerate() {
        if m % 4 != 2 {
            assert_eq!((*a, *c), (0.0, 0.0));
        }
    }

    let mut ns = 0.0;
    assert_eq!(unsafe { qk_basis_norm(b, 0, &mut ns) }, QkStatus::Ok);
    assert!(ns > 0.0);
    assert_eq!(
        unsafe { qk_basis_norm(b, 4, &mut ns) },
        QkStatus::InvalidResidue
    );
    unsafe { qk_basis_free(b) };
}

#[test]
fn routes_agree_through_the_abi() {
    let direct = new_basis(3, 1.2, -0.4, 0);
    let fourier = new_basis(3, 1.2, -0.4, 1);
    for s in 0..3 {
        let (a_re, a_im) = amplitudes(direct, s);
        let (b_re, b_im) = amplitudes(fourier, s);
        for k in 0..a_re.len() {
            assert!((a_re[k] - b_re[k]).abs() < 1e-12 && (a_im[k] - b_im[k]).abs() < 1e-12);
        }
    }
    unsafe {
        qk_basis_free(direct);
        qk_basis_free(fourier);
    }
}

#[test]
fn error_codes() {
    let mut b = ptr::null_mut();
    unsafe {
        assert_eq!(
            qk_basis_new(1, 1.0, 0.0, 0, 1e-12, 0, &mut b),
            QkStatus::InvalidOrder
        );
        assert!(b.is_null());
        assert_eq!(
            qk_basis_new(3, 1.0, 0.0, 0, 1e-12, 9, &mut b),
            QkStatus::InvalidArgument
        );
        assert_eq!(
            qk_basis_new(3, 1.0, 0.0, 0, 1e-12, 0, ptr::null_mut()),
            QkStatus::NullPointer
        );
        assert_eq!(
            qk_basis_new(8, 0.01, 0.0, 0, 1e-12, 1, &mut b),
            QkStatus::Degenerate
        );

        let mut v = 0.0;
        assert_eq!(
            qk_basis_shape(ptr::null(), ptr::null_mut(), ptr::null_mut()),
            QkStatus::NullPointer
        );
        assert_eq!(qk_mod_exp(3, 5, 1.0, &mut v), QkStatus::InvalidResidue);
        assert_eq!(
            qk_mod_exp(3, 0, 1.0, ptr::null_mut()),
            QkStatus::NullPointer
        );
        assert_eq!(
            qk_photon_expectation(2, 0, -1.0, &mut v),
            QkStatus::InvalidArgument
        );
        assert_eq!(qk_spectrum(3, 1.0, &mut v, 1), QkStatus::BufferTooSmall);
        let mut buf = [0.0; 4];
        assert_eq!(
            qk_matrix(2, 99, buf.as_mut_ptr(), buf.as_mut_ptr(), 4),
            QkStatus::InvalidArgument
        );
        qk_basis_free(ptr::null_mut());
    }
}

#[test]
fn divergent_norm_at_origin() {
    let b = new_basis(3, 0.0, 0.0, 0);
    let mut v = 0.0;
    unsafe {
        assert_eq!(qk_basis_norm(b, 0, &mut v), QkStatus::Ok);
        assert_eq!(qk_basis_norm(b, 1, &mut v), QkStatus::Divergent);
        qk_basis_free(b);
    }
}

#[test]
fn scalar_functions() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(qk_mod_exp(2, 1, 1.0, &mut v), QkStatus::Ok);
        assert!((v - 1f64.sinh()).abs() < 1e-15);
        assert_eq!(qk_photon_expectation(4, 3, 0.0, &mut v), QkStatus::Ok);
        assert_eq!(v, 3.0);
    }
    let mut e = [0.0; 4];
    assert_eq!(
        unsafe { qk_spectrum(4, 2.0, e.as_mut_ptr(), 4) },
        QkStatus::Ok
    );
    for (got, want) in e.iter().zip([1.0, 1.0, -1.0, -1.0]) {
        assert!((got - want).abs() < 1e-15);
    }
}

#[test]
fn matrices() {
    let mut re = [0.0; 9];
    let mut im = [0.0; 9];
    unsafe {
        assert_eq!(
            qk_matrix(3, QK_MATRIX_SHIFT, re.as_mut_ptr(), im.as_mut_ptr(), 9),
            QkStatus::Ok
        );
    }
    assert_eq!(re, [0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    unsafe {
        assert_eq!(
            qk_matrix(
                3,
                QK_MATRIX_BDAG_NONSYMMETRIC,
                re.as_mut_ptr(),
                im.as_mut_ptr(),
                9
            ),
            QkStatus::Ok
        );
    }
    assert_eq!((re[3], im[3]), (1.0, 0.0));
    assert_eq!(re[1], 0.0);
}

#[test]
fn messages() {
    for status in [QkStatus::Ok, QkStatus::Panic, QkStatus::BufferTooSmall] {
        let text = unsafe { CStr::from_ptr(qk_status_message(status)) };
        assert!(!text.to_bytes().is_empty());
    }
    let version = unsafe { CStr::from_ptr(qk_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_lists_every_export() {
    let header = std::fs::read_to_string(manifest_dir().join("include/qkaleido.h")).unwrap();
    let source = std::fs::read_to_string(manifest_dir().join("src/lib.rs")).unwrap();
    for line in source.lines() {
        if let Some(rest) = line.split("extern \"C\" fn ").nth(1) {
            let name = rest.split('(').next().unwrap();
            assert!(
                header.contains(&format!("{name}(")),
                "{name} missing from header"
            );
        }
    }
    assert!(header.contains("typedef struct QkBasis QkBasis;"));
}

fn static_library() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let lib = exe.parent()?.join("libqkaleido_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = static_library() else {
        eprintln!("static library not found next to the test binary; skipping C smoke test");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping C smoke test");
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("qkaleido_smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(manifest_dir().join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke test failed to compile");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
