//! C ABI over `quiverlab`.
//!
//! Representations are opaque `QlRep` handles created by `ql_rep_parse`,
//! `ql_rep_reflect`, `ql_rep_dual` or `ql_build_extended_dynkin` and released with
//! `ql_rep_free`. Every fallible call returns a `QlStatus`; on failure the message is
//! available from `ql_last_error_message` on the same thread. Strings returned through
//! out-parameters are released with `ql_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use quiverlab::builders::{build_extended_dynkin, Family};
use quiverlab::opmodels::Fixture;
use quiverlab::reflection::{self, Direction};
use quiverlab::{hom, textio, Error, Rep, Tolerances};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed input: syntax, unknown ids, shapes.
    Parse = 3,
    /// Well-formed input violating a hypothesis of the operation.
    Precondition = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlDirection {
    /// Reflection at a sink.
    Plus = 0,
    /// Reflection at a source.
    Minus = 1,
}

/// Opaque representation handle.
pub struct QlRep {
    rep: Rep,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QlStatus {
    match e {
        Error::Parse { .. }
        | Error::InvalidArgument(_)
        | Error::InvalidSequence(_)
        | Error::UnknownFixture(_)
        | Error::DuplicateVertex(_)
        | Error::DuplicateArrow(_)
        | Error::DanglingEndpoint { .. }
        | Error::EmptyQuiver
        | Error::UnknownVertex(_)
        | Error::UnknownArrow(_)
        | Error::ShapeMismatch { .. }
        | Error::NonFinite(_)
        | Error::DimsMismatch(_) => QlStatus::Parse,
        _ => QlStatus::Precondition,
    }
}

struct Fail(QlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            QlStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            QlStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(QlStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(QlStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn rep_arg<'a>(p: *const QlRep) -> Result<&'a Rep, Fail> {
    p.as_ref()
        .map(|h| &h.rep)
        .ok_or_else(|| Fail(QlStatus::NullPointer, "representation handle is null".into()))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(QlStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_handle(out: *mut *mut QlRep, rep: Rep) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(QlStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(Box::into_raw(Box::new(QlRep { rep })));
    Ok(())
}

/// Parse a representation from the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_rep_parse(text: *const c_char, out: *mut *mut QlRep) -> QlStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        let doc = textio::parse_document(text)?;
        let rep = doc.rep.unwrap_or_else(|| Rep::zero(doc.quiver));
        write_handle(out, rep)
    })
}

/// # Safety
/// `rep` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ql_rep_free(rep: *mut QlRep) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Serialize to the text format; release the string with `ql_string_free`.
///
/// # Safety
/// `rep` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_rep_to_text(rep: *const QlRep, out: *mut *mut c_char) -> QlStatus {
    guard(|| {
        let text = textio::rep_to_text(rep_arg(rep)?);
        let c = CString::new(text).map_err(|_| Fail(QlStatus::Panic, "interior NUL".into()))?;
        write_out(out, c.into_raw())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ql_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Dimension of the endomorphism algebra.
///
/// # Safety
/// `rep` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_rep_end_dim(rep: *const QlRep, out: *mut usize) -> QlStatus {
    guard(|| {
        let end = hom::end_basis(rep_arg(rep)?)?;
        write_out(out, end.dim)
    })
}

/// Whether the endomorphism algebra is the scalars.
///
/// # Safety
/// `rep` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_rep_is_transitive(rep: *const QlRep, out: *mut bool) -> QlStatus {
    guard(|| {
        let r = rep_arg(rep)?;
        let t = !r.is_zero() && hom::is_transitive(r)?.0;
        write_out(out, t)
    })
}

/// Randomized search for a nontrivial idempotent endomorphism, seeded.
///
/// # Safety
/// `rep` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_rep_is_indecomposable(rep: *const QlRep, seed: u64, out: *mut bool) -> QlStatus {
    guard(|| {
        let v = hom::is_indecomposable(rep_arg(rep)?, seed)?;
        write_out(out, v.is_indecomposable())
    })
}

/// Reflect at a sink (`PLUS`) or source (`MINUS`); the result is a new handle.
///
/// # Safety
/// `rep` must be a live handle; `vertex` a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ql_rep_reflect(
    rep: *const QlRep,
    vertex: *const c_char,
    direction: QlDirection,
    out: *mut *mut QlRep,
) -> QlStatus {
    guard(|| {
        let r = rep_arg(rep)?;
        let v = str_arg(vertex, "vertex")?;
        let d = match direction {
            QlDirection::Plus => Direction::Plus,
            QlDirection::Minus => Direction::Minus,
        };
        let res = reflection::reflect(r, v, d, &Tolerances::default())?;
        write_handle(out, res.rep)
    })
}

/// Conjugate-transpose dual on the opposite quiver.
///
/// # Safety
/// `rep` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_rep_dual(rep: *const QlRep, out: *mut *mut QlRep) -> QlStatus {
    guard(|| {
        let d = reflection::dual(rep_arg(rep)?);
        write_handle(out, d)
    })
}

/// Extended Dynkin representation for `family` (`d4tilde`, `dNtilde`, `e6tilde`,
/// `e7tilde`, `e8tilde`) and an operator fixture such as `jordan:3`.
///
/// # Safety
/// `family` and `op` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ql_build_extended_dynkin(
    family: *const c_char,
    op: *const c_char,
    out: *mut *mut QlRep,
) -> QlStatus {
    guard(|| {
        let f = Family::parse(str_arg(family, "family")?)?;
        let s = Fixture::parse(str_arg(op, "op")?)?.matrix()?;
        write_handle(out, build_extended_dynkin(f, &s)?)
    })
}

/// Message of the last failed call on this thread, or an empty string. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ql_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

