//! C ABI over the `liouville` crate.
//!
//! Values cross the boundary as opaque [`LvReal`] handles, text as
//! NUL-terminated UTF-8. Every fallible call returns an [`LvStatus`]; on
//! failure [`lv_last_error`] holds the message for the calling thread.
//! Strings handed out must be released with [`lv_string_free`], handles with
//! [`lv_real_free`]. Panics never unwind into the caller.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use liouville::certfile::CertificateFile;
use liouville::error::Error;
use liouville::expindep;
use liouville::expr::parse_real;
use liouville::liouville::certify_level;
use liouville::poly::PolyQ;
use liouville::rational;
use liouville::real::ExactReal;

/// Result of every fallible call. One variant per library error kind plus
/// the boundary failures.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LvStatus {
    Ok = 0,
    NullPointer = 1,
    Utf8 = 2,
    Panic = 3,
    DivisorNotSeparatedFromZero = 10,
    NotSeparatedFromZero = 11,
    DomainError = 12,
    AmbiguousNearestInteger = 13,
    RefinementBudgetExceeded = 14,
    InvalidSchedule = 15,
    ZeroDistance = 16,
    WitnessSearchExhausted = 17,
    ImageCollapse = 18,
    BudgetExceeded = 19,
    NoRootInJ = 20,
    NonMonotoneSlice = 21,
    DomainEscape = 22,
    InvalidRelation = 23,
    ZeroP = 24,
    ConstantF = 25,
    InvalidWitness = 26,
    ParseError = 27,
    InvalidArgument = 28,
    FormatError = 29,
}

impl From<&Error> for LvStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DivisorNotSeparatedFromZero { .. } => LvStatus::DivisorNotSeparatedFromZero,
            Error::NotSeparatedFromZero { .. } => LvStatus::NotSeparatedFromZero,
            Error::DomainError(_) => LvStatus::DomainError,
            Error::AmbiguousNearestInteger { .. } => LvStatus::AmbiguousNearestInteger,
            Error::RefinementBudgetExceeded { .. } => LvStatus::RefinementBudgetExceeded,
            Error::InvalidSchedule(_) => LvStatus::InvalidSchedule,
            Error::ZeroDistance => LvStatus::ZeroDistance,
            Error::WitnessSearchExhausted { .. } => LvStatus::WitnessSearchExhausted,
            Error::ImageCollapse(_) => LvStatus::ImageCollapse,
            Error::BudgetExceeded(_) => LvStatus::BudgetExceeded,
            Error::NoRootInJ(_) => LvStatus::NoRootInJ,
            Error::NonMonotoneSlice(_) => LvStatus::NonMonotoneSlice,
            Error::DomainEscape(_) => LvStatus::DomainEscape,
            Error::InvalidRelation => LvStatus::InvalidRelation,
            Error::ZeroP => LvStatus::ZeroP,
            Error::ConstantF => LvStatus::ConstantF,
            Error::InvalidWitness(_) => LvStatus::InvalidWitness,
            Error::Parse(_) => LvStatus::ParseError,
            Error::InvalidArgument(_) => LvStatus::InvalidArgument,
            Error::Format(_) => LvStatus::FormatError,
        }
    }
}

/// Which independence test [`lv_expindep`] runs.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LvIndepMode {
    /// Linear independence of `exp(g_i)` over polynomials.
    Linear = 0,
    /// Algebraic independence of `exp(f_j)`.
    Algebraic = 1,
}

/// Opaque handle to an exact real.
pub struct LvReal(ExactReal);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(LvStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(LvStatus::from(&e), format!("{}: {e}", e.token()))
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|s| *s.borrow_mut() = Some(c));
}

/// Run `f`, turning errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LvStatus {
    LAST_ERROR.with(|s| *s.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LvStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            LvStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(LvStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail(LvStatus::Utf8, format!("{what}: {e}")))
}

unsafe fn handle<'a>(p: *const LvReal) -> Result<&'a ExactReal, Fail> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null("real handle"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = CString::new(s).expect("no interior NUL").into_raw();
    Ok(())
}

/// Stable name of a status, for example `"WitnessSearchExhausted"`.
#[no_mangle]
pub extern "C" fn lv_status_name(status: LvStatus) -> *const c_char {
    let s: &'static CStr = match status {
        LvStatus::Ok => c"Ok",
        LvStatus::NullPointer => c"NullPointer",
        LvStatus::Utf8 => c"Utf8",
        LvStatus::Panic => c"Panic",
        LvStatus::DivisorNotSeparatedFromZero => c"DivisorNotSeparatedFromZero",
        LvStatus::NotSeparatedFromZero => c"NotSeparatedFromZero",
        LvStatus::DomainError => c"DomainError",
        LvStatus::AmbiguousNearestInteger => c"AmbiguousNearestInteger",
        LvStatus::RefinementBudgetExceeded => c"RefinementBudgetExceeded",
        LvStatus::InvalidSchedule => c"InvalidSchedule",
        LvStatus::ZeroDistance => c"ZeroDistance",
        LvStatus::WitnessSearchExhausted => c"WitnessSearchExhausted",
        LvStatus::ImageCollapse => c"ImageCollapse",
        LvStatus::BudgetExceeded => c"BudgetExceeded",
        LvStatus::NoRootInJ => c"NoRootInJ",
        LvStatus::NonMonotoneSlice => c"NonMonotoneSlice",
        LvStatus::DomainEscape => c"DomainEscape",
        LvStatus::InvalidRelation => c"InvalidRelation",
        LvStatus::ZeroP => c"ZeroP",
        LvStatus::ConstantF => c"ConstantF",
        LvStatus::InvalidWitness => c"InvalidWitness",
        LvStatus::ParseError => c"ParseError",
        LvStatus::InvalidArgument => c"InvalidArgument",
        LvStatus::FormatError => c"FormatError",
    };
    s.as_ptr()
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn lv_last_error() -> *const c_char {
    LAST_ERROR.with(|s| s.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse an expression such as `"liouville(10) + 1/3"` into a new handle.
///
/// # Safety
/// `expr` must be a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lv_real_parse(expr: *const c_char, out: *mut *mut LvReal) -> LvStatus {
    guard(|| {
        let x = parse_real(text(expr, "expr")?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(LvReal(x)));
        Ok(())
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `x` must come from [`lv_real_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lv_real_free(x: *mut LvReal) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Decimal rendering to `digits` places (truncated, not certified in the
/// last place).
///
/// # Safety
/// `x` must be a live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lv_real_decimal(
    x: *const LvReal,
    digits: u32,
    out: *mut *mut c_char,
) -> LvStatus {
    guard(|| {
        let x = handle(x)?;
        let bits = (digits as f64 * 3.33) as u32 + 8;
        let s = rational::to_decimal(&x.refine(bits).mid(), digits as usize);
        put_string(out, s, "out")
    })
}

/// Rational endpoints `lo`, `hi` (as `p/q` strings) of an enclosure of width
/// at most `2^-k`.
///
/// # Safety
/// `x` must be a live handle, `lo` and `hi` writable.
#[no_mangle]
pub unsafe extern "C" fn lv_real_enclosure(
    x: *const LvReal,
    k: u32,
    lo: *mut *mut c_char,
    hi: *mut *mut c_char,
) -> LvStatus {
    guard(|| {
        let x = handle(x)?;
        if lo.is_null() || hi.is_null() {
            return Err(null("lo/hi"));
        }
        let iv = x.refine(k);
        put_string(lo, iv.lo().to_string(), "lo")?;
        put_string(hi, iv.hi().to_string(), "hi")
    })
}

/// Certify `x` to `level` and return the certificate file as JSON.
/// `label` may be null.
///
/// # Safety
/// `x` must be a live handle, `label` null or NUL-terminated, `json_out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn lv_certify(
    x: *const LvReal,
    level: u32,
    label: *const c_char,
    json_out: *mut *mut c_char,
) -> LvStatus {
    guard(|| {
        let x = handle(x)?;
        let label = if label.is_null() {
            None
        } else {
            Some(text(label, "label")?)
        };
        let cert = certify_level(x, level)?;
        let file = CertificateFile::new(vec![CertificateFile::subject(label, x, &cert)?]);
        put_string(json_out, file.to_json(), "json_out")
    })
}

/// Re-verify a certificate file from its JSON text. On success `level_out`
/// (if not null) receives the lowest level certified across its subjects.
///
/// # Safety
/// `json` must be NUL-terminated, `level_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn lv_verify(json: *const c_char, level_out: *mut u32) -> LvStatus {
    guard(|| {
        let file = CertificateFile::from_json(text(json, "json")?)?;
        let report = file.verify()?;
        if !level_out.is_null() {
            *level_out = report.iter().map(|r| r.level).min().unwrap_or(0);
        }
        Ok(())
    })
}

/// Decide independence of `exp(p_i)` for `n` polynomials written like
/// `"z^2 + 3z"`. `independent_out` receives 1 or 0; `detail_out`, if not
/// null, receives the verdict as JSON, including any dependence witness.
///
/// # Safety
/// `polys` must point to `n` NUL-terminated strings, `independent_out`
/// writable, `detail_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn lv_expindep(
    mode: LvIndepMode,
    polys: *const *const c_char,
    n: usize,
    independent_out: *mut i32,
    detail_out: *mut *mut c_char,
) -> LvStatus {
    guard(|| {
        if (polys.is_null() && n > 0) || independent_out.is_null() {
            return Err(null("polys/independent_out"));
        }
        let ps = (0..n)
            .map(|i| Ok(PolyQ::parse(text(*polys.add(i), "poly")?)?))
            .collect::<Result<Vec<_>, Fail>>()?;
        let verdict = match mode {
            LvIndepMode::Linear => expindep::lin_indep_exp(&ps),
            LvIndepMode::Algebraic => expindep::alg_indep_exp(&ps),
        };
        *independent_out = verdict.is_independent() as i32;
        if !detail_out.is_null() {
            let json = serde_json::to_string(&verdict).expect("verdict serializes");
            put_string(detail_out, json, "detail_out")?;
        }
        Ok(())
    })
}
