//! C interface to `fockcycle`.
//!
//! Every fallible function returns an [`FcStatus`]; on failure the message is
//! available from [`fc_last_error_message`] on the same thread. Handles are
//! opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use fockcycle::cohomology::h1;
use fockcycle::fock::{enumerate_basis, FockBasis, ModeVector};
use fockcycle::gaussian_dynamics::{deformation_correlation_reduced, ps_vacuum_expectation};
use fockcycle::group_rep::{parse_representation, GroupPresentation, OrthogonalRep};
use fockcycle::wick::moment;
use fockcycle::Error;

/// Pass as `cap` to use the Poisson truncation budget.
pub const FC_CAP_AUTO: usize = !0;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    ResourceCap = 3,
    TruncationBudget = 4,
    Numerical = 5,
    Panic = 6,
}

/// A truncated Fock basis.
pub struct FcBasis {
    inner: Arc<FockBasis>,
}

/// A finitely presented group with an orthogonal representation.
pub struct FcRep {
    group: GroupPresentation,
    pi: OrthogonalRep,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(FcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::ResourceCap { .. } => FcStatus::ResourceCap,
            Error::TruncationBudget { .. } => FcStatus::TruncationBudget,
            Error::Convergence(_) | Error::EmptySpectralCut { .. } => FcStatus::Numerical,
            _ => FcStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FcStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FcStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            FcStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or valid for writes of `T`.
unsafe fn write<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    unsafe { p.write(value) };
    Ok(())
}

fn cap_arg(cap: usize) -> Option<usize> {
    (cap != FC_CAP_AUTO).then_some(cap)
}

/// Message of the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds the basis of the symmetric Fock space over `modes` modes, truncated
/// at total degree `cap`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fc_basis_new(modes: usize, cap: usize, out: *mut *mut FcBasis) -> FcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = enumerate_basis(modes, cap)?;
        unsafe { write(out, Box::into_raw(Box::new(FcBasis { inner })), "out") }
    })
}

/// # Safety
/// `basis` must be null or come from [`fc_basis_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn fc_basis_free(basis: *mut FcBasis) {
    if !basis.is_null() {
        drop(unsafe { Box::from_raw(basis) });
    }
}

/// Number of basis vectors; 0 for a null handle.
///
/// # Safety
/// `basis` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fc_basis_len(basis: *const FcBasis) -> usize {
    unsafe { basis.as_ref() }.map_or(0, |b| b.inner.len())
}

/// `⟨s(ξ)ⁿΩ, Ω⟩` for the real vector `xi[0..len]` on `basis`.
///
/// # Safety
/// `basis` must be a live handle, `xi` valid for `len` reads and `out` for a
/// write.
#[no_mangle]
pub unsafe extern "C" fn fc_moment(
    basis: *const FcBasis,
    xi: *const f64,
    len: usize,
    n: usize,
    out: *mut f64,
) -> FcStatus {
    guard(|| {
        let basis = unsafe { basis.as_ref() }.ok_or_else(|| null("basis"))?;
        if xi.is_null() {
            return Err(null("xi"));
        }
        let xi = ModeVector::real(unsafe { std::slice::from_raw_parts(xi, len) });
        let m = moment(&basis.inner, &xi, n)?;
        unsafe { write(out, m, "out") }
    })
}

/// `⟨ω Ω, Ω⟩` for `ω = exp(−i s(ξ))` with `‖ξ‖ = norm`. `cap` may be
/// [`FC_CAP_AUTO`]; the cap used is written to `out_cap` when non-null.
///
/// # Safety
/// The output pointers must be valid for writes (`out_cap` may be null).
#[no_mangle]
pub unsafe extern "C" fn fc_ps_trace(
    norm: f64,
    cap: usize,
    out_re: *mut f64,
    out_im: *mut f64,
    out_cap: *mut usize,
) -> FcStatus {
    guard(|| {
        let (v, used) = ps_vacuum_expectation(norm, cap_arg(cap))?;
        unsafe {
            write(out_re, v.re, "out_re")?;
            write(out_im, v.im, "out_im")?;
            if !out_cap.is_null() {
                out_cap.write(used);
            }
        }
        Ok(())
    })
}

/// Deformation correlation `⟨θ_t(ω⊗1)Ω, (ω⊗1)Ω⟩` for `‖b‖ = norm`; the
/// exact value is `exp(−(1 − cos t)·norm²)`.
///
/// # Safety
/// The output pointers must be valid for writes (`out_cap` may be null).
#[no_mangle]
pub unsafe extern "C" fn fc_deformation_correlation(
    norm: f64,
    t: f64,
    cap: usize,
    out_re: *mut f64,
    out_im: *mut f64,
    out_cap: *mut usize,
) -> FcStatus {
    guard(|| {
        let (v, used) = deformation_correlation_reduced(norm, t, cap_arg(cap))?;
        unsafe {
            write(out_re, v.re, "out_re")?;
            write(out_im, v.im, "out_im")?;
            if !out_cap.is_null() {
                out_cap.write(used);
            }
        }
        Ok(())
    })
}

/// Parses `{"generators", "relators", "matrices"}` JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fc_rep_from_json(json: *const c_char, out: *mut *mut FcRep) -> FcStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| Failure(FcStatus::InvalidInput, format!("json is not UTF-8: {e}")))?;
        let (group, pi) = parse_representation(text)?;
        unsafe { write(out, Box::into_raw(Box::new(FcRep { group, pi })), "out") }
    })
}

/// # Safety
/// `rep` must be null or come from [`fc_rep_from_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn fc_rep_free(rep: *mut FcRep) {
    if !rep.is_null() {
        drop(unsafe { Box::from_raw(rep) });
    }
}

/// Dimension of the representation space; 0 for a null handle.
///
/// # Safety
/// `rep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fc_rep_dim(rep: *const FcRep) -> usize {
    unsafe { rep.as_ref() }.map_or(0, |r| r.pi.dim())
}

/// `dim Z¹`, `dim B¹` and `dim H¹` of the representation.
///
/// # Safety
/// `rep` must be a live handle and the outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn fc_rep_h1(
    rep: *const FcRep,
    out_z1: *mut usize,
    out_b1: *mut usize,
    out_h1: *mut usize,
) -> FcStatus {
    guard(|| {
        let rep = unsafe { rep.as_ref() }.ok_or_else(|| null("rep"))?;
        let r = h1(&rep.pi, &rep.group)?;
        unsafe {
            write(out_z1, r.dim_z1, "out_z1")?;
            write(out_b1, r.dim_b1, "out_b1")?;
            write(out_h1, r.dim_h1, "out_h1")
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(fc_last_error_message()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn basis_round_trip() {
        let mut b = ptr::null_mut();
        assert_eq!(unsafe { fc_basis_new(2, 3, &mut b) }, FcStatus::Ok);
        // 1 + 2 + 3 + 4 occupation vectors
        assert_eq!(unsafe { fc_basis_len(b) }, 10);
        let xi = [0.6, 0.8];
        let mut m = 0.0;
        assert_eq!(unsafe { fc_moment(b, xi.as_ptr(), 2, 4, &mut m) }, FcStatus::Ok);
        assert!((m - 3.0).abs() < 1e-12);
        assert_eq!(unsafe { fc_moment(b, xi.as_ptr(), 3, 2, &mut m) }, FcStatus::InvalidInput);
        assert!(!last_error().is_empty());
        unsafe { fc_basis_free(b) };
        assert_eq!(unsafe { fc_basis_len(ptr::null()) }, 0);
    }

    #[test]
    fn null_pointers_are_reported() {
        assert_eq!(unsafe { fc_basis_new(1, 1, ptr::null_mut()) }, FcStatus::NullPointer);
        assert!(last_error().contains("out"));
        let mut m = 0.0;
        assert_eq!(
            unsafe { fc_moment(ptr::null(), [1.0].as_ptr(), 1, 2, &mut m) },
            FcStatus::NullPointer
        );
        assert_eq!(unsafe { fc_rep_from_json(ptr::null(), ptr::null_mut()) }, FcStatus::NullPointer);
    }

    #[test]
    fn traces_and_budgets() {
        let (mut re, mut im, mut cap) = (0.0, 0.0, 0usize);
        assert_eq!(unsafe { fc_ps_trace(1.0, FC_CAP_AUTO, &mut re, &mut im, &mut cap) }, FcStatus::Ok);
        assert!((re - (-0.5f64).exp()).abs() <= 1e-6 && im.abs() <= 1e-6);
        assert!(cap > 0);
        assert_eq!(unsafe { fc_ps_trace(2.0, 3, &mut re, &mut im, ptr::null_mut()) }, FcStatus::TruncationBudget);
        let t = std::f64::consts::PI;
        assert_eq!(
            unsafe { fc_deformation_correlation(1.0, t, FC_CAP_AUTO, &mut re, &mut im, ptr::null_mut()) },
            FcStatus::Ok
        );
        assert!((re - (-2.0f64).exp()).abs() <= 1e-5);
    }

    #[test]
    fn representation_cohomology() {
        let json = CString::new(r#"{"generators": 1, "relators": [], "matrices": [[[1.0]]]}"#).unwrap();
        let mut rep = ptr::null_mut();
        assert_eq!(unsafe { fc_rep_from_json(json.as_ptr(), &mut rep) }, FcStatus::Ok);
        assert_eq!(unsafe { fc_rep_dim(rep) }, 1);
        let (mut z, mut b, mut h) = (9, 9, 9);
        assert_eq!(unsafe { fc_rep_h1(rep, &mut z, &mut b, &mut h) }, FcStatus::Ok);
        assert_eq!((z, b, h), (1, 0, 1));
        unsafe { fc_rep_free(rep) };

        let bad = CString::new(r#"{"generators": 1}"#).unwrap();
        assert_eq!(unsafe { fc_rep_from_json(bad.as_ptr(), &mut rep) }, FcStatus::InvalidInput);
    }
}
