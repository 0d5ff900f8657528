//! C ABI over `zetalie`.
//!
//! Objects cross the boundary as opaque handles released by their `_free`
//! function. Strings returned to C are NUL-terminated, owned by the caller and
//! released with [`zl_string_free`]. Every fallible call returns a
//! [`ZlStatus`]; on failure [`zl_last_error`] describes the error on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zetalie::algebra::{eval_lie_poly, shared_component, Algebra};
use zetalie::lie::{LiePoly, SpanKind};
use zetalie::relations::{odd_to_hoffman, verify_relation_file, RelationCertificate, RelationFile};
use zetalie::series::uneven_bk_table;
use zetalie::words::Symbol;
use zetalie::{Error, Poly};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZlStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Precondition = 4,
    ResourceLimit = 5,
    Math = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZlAlgebra {
    Depth = 0,
    Block = 1,
    Even = 2,
}

impl From<ZlAlgebra> for Algebra {
    fn from(a: ZlAlgebra) -> Algebra {
        match a {
            ZlAlgebra::Depth => Algebra::Depth,
            ZlAlgebra::Block => Algebra::Block,
            ZlAlgebra::Even => Algebra::Even,
        }
    }
}

/// Opaque polynomial handle.
pub struct ZlPoly(Poly);

/// Opaque relation certificate handle.
pub struct ZlCertificate(RelationCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ZlStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) => ZlStatus::Parse,
        Error::Precondition(_)
        | Error::InvalidBlocks { .. }
        | Error::EmptyWord
        | Error::ZeroGenerator(_)
        | Error::MixedGrading(_)
        | Error::ArityMismatch { .. }
        | Error::VarCountMismatch { .. }
        | Error::ImageCountMismatch { .. } => ZlStatus::Precondition,
        Error::ResourceLimit(_) => ZlStatus::ResourceLimit,
        Error::Io(_) | Error::CorruptCache { .. } => ZlStatus::Io,
        _ => ZlStatus::Math,
    }
}

struct Failure(ZlStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `f`, records any error or panic, and returns its status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ZlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ZlStatus::Ok,
        Ok(Err(Failure(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            ZlStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(ZlStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(ZlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure(ZlStatus::NullArgument, format!("{what} is null")));
    }
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Last error message on this thread, or null. Valid until the next failing
/// call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn zl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version; static, do not free.
#[no_mangle]
pub extern "C" fn zl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Evaluates a Lie polynomial such as `"[3,9] - 3*[5,7]"` in an algebra.
///
/// # Safety
/// `expr` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn zl_bracket_eval(expr: *const c_char, algebra: ZlAlgebra, out: *mut *mut ZlPoly) -> ZlStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let lp: LiePoly = read_str(expr, "expr")?.parse()?;
        let p = eval_lie_poly(&lp, algebra.into())?;
        *out = Box::into_raw(Box::new(ZlPoly(p)));
        Ok(())
    })
}

/// # Safety
/// `p` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zl_poly_free(p: *mut ZlPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `p` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zl_poly_nvars(p: *const ZlPoly) -> usize {
    p.as_ref().map_or(0, |p| p.0.nvars())
}

/// # Safety
/// `p` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zl_poly_is_zero(p: *const ZlPoly) -> bool {
    p.as_ref().is_none_or(|p| p.0.is_zero())
}

/// JSON form `{"nvars", "terms": [{"exp", "num", "den"}]}`.
///
/// # Safety
/// `p` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn zl_poly_to_json(p: *const ZlPoly, out: *mut *mut c_char) -> ZlStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let p = p.as_ref().ok_or_else(|| Failure(ZlStatus::NullArgument, "poly is null".into()))?;
        let text = serde_json::to_string(&p.0.to_json()).map_err(Error::from)?;
        *out = to_c_string(text);
        Ok(())
    })
}

/// Coefficient of the monomial with exponents `exps[0..len]`, as `"n"` or `"n/d"`.
///
/// # Safety
/// `p` is a live handle; `exps` points to `len` values; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn zl_poly_coeff(p: *const ZlPoly, exps: *const u32, len: usize, out: *mut *mut c_char) -> ZlStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let p = p.as_ref().ok_or_else(|| Failure(ZlStatus::NullArgument, "poly is null".into()))?;
        if exps.is_null() && len > 0 {
            return Err(Failure(ZlStatus::NullArgument, "exps is null".into()));
        }
        let e = if len == 0 { &[][..] } else { std::slice::from_raw_parts(exps, len) };
        if e.len() != p.0.nvars() {
            return Err(Failure(ZlStatus::Precondition, format!("expected {} exponents, got {}", p.0.nvars(), e.len())));
        }
        *out = to_c_string(zetalie::poly::format_rational(&p.0.coeff(e)));
        Ok(())
    })
}

/// Verifies a relation file given as JSON text.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn zl_verify_relation_json(json: *const c_char, out: *mut *mut ZlCertificate) -> ZlStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let rel: RelationFile = serde_json::from_str(read_str(json, "json")?).map_err(Error::from)?;
        let cert = verify_relation_file(&rel)?;
        *out = Box::into_raw(Box::new(ZlCertificate(cert)));
        Ok(())
    })
}

/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zl_certificate_is_verified(c: *const ZlCertificate) -> bool {
    c.as_ref().is_some_and(|c| c.0.is_verified())
}

/// Number of bracket words checked.
///
/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zl_certificate_word_count(c: *const ZlCertificate) -> usize {
    c.as_ref().map_or(0, |c| c.0.verified_against.len())
}

/// # Safety
/// `c` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn zl_certificate_to_json(c: *const ZlCertificate, out: *mut *mut c_char) -> ZlStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let c = c.as_ref().ok_or_else(|| Failure(ZlStatus::NullArgument, "certificate is null".into()))?;
        *out = to_c_string(serde_json::to_string(&c.0).map_err(Error::from)?);
        Ok(())
    })
}

/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zl_certificate_free(c: *mut ZlCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Dictionary entry of a totally odd index such as `"z:{3,5}"`, written as
/// `"scale * target"`.
///
/// # Safety
/// `zeta` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn zl_dictionary(zeta: *const c_char, out: *mut *mut c_char) -> ZlStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let z = match read_str(zeta, "zeta")?.parse::<Symbol>()? {
            Symbol::Zeta(z) => z,
            other => return Err(Failure(ZlStatus::Precondition, format!("{other} is not a zeta index"))),
        };
        *out = to_c_string(odd_to_hoffman(&z)?.to_string());
        Ok(())
    })
}

/// Coefficient of `s^weight t^degree` in `1/(1 − O(s)t + S(s)t²)`.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn zl_uneven_bk_coefficient(weight: u32, degree: u32, out: *mut i64) -> ZlStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let t = uneven_bk_table(weight, degree as usize)?;
        let v = &t[weight as usize][degree as usize];
        *out = i64::try_from(v).map_err(|_| Failure(ZlStatus::ResourceLimit, format!("coefficient {v} overflows")))?;
        Ok(())
    })
}

/// Rank of the Lyndon-spanned `(weight, degree)` component.
///
/// # Safety
/// `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn zl_component_rank(algebra: ZlAlgebra, weight: u32, degree: u32, out: *mut usize) -> ZlStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = shared_component(algebra.into(), weight, degree as usize, SpanKind::Lyndon)?.rank();
        Ok(())
    })
}
