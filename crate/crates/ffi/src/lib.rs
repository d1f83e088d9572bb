//! C interface to `lueroth-kit`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `_free` function. Every call returns an
//! [`LkStatus`]; on failure a message is available from
//! [`lk_last_error_message`] on the same thread. Strings handed out by the
//! library are released with [`lk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lueroth_kit::apolarity::catalecticant;
use lueroth_kit::bateman::{b_pairing, bateman_tuple, BatemanTuple};
use lueroth_kit::morley::{kernel_pencil, morley_matrix, tangent_rank};
use lueroth_kit::scorza::scorza_fast;
use lueroth_kit::verify::verify_paper;
use lueroth_kit::{Error, Field, Group, Scalar, TernaryForm};

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Degree = 4,
    Field = 5,
    Degenerate = 6,
    Rank = 7,
    Numeric = 8,
    /// A check ran and did not hold.
    CheckFailed = 9,
    Internal = 10,
}

/// Variable group of a form: points `x1..x3` or dual coordinates `e1..e3`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LkGroup {
    X = 0,
    E = 1,
}

/// A homogeneous ternary form.
pub struct LkForm(TernaryForm);

/// An 18-coordinate point tensor.
pub struct LkTuple(BatemanTuple);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LkStatus {
    match e {
        Error::Parse(_) | Error::Json(_) => LkStatus::Parse,
        Error::Degree { .. } | Error::Shape(_) => LkStatus::Degree,
        Error::Field(_) | Error::FieldMismatch(..) => LkStatus::Field,
        Error::Degenerate(_) | Error::NotSkew { .. } => LkStatus::Degenerate,
        Error::Rank { .. } => LkStatus::Rank,
        Error::Numeric(_) => LkStatus::Numeric,
        Error::Calibration(_) | Error::NotARepresentation(_) => LkStatus::CheckFailed,
        Error::Io(_) => LkStatus::Internal,
    }
}

struct Fail(LkStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

/// Runs `f`, records its error message and turns panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LkStatus::Ok
        }
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            LkStatus::Internal
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(LkStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(LkStatus::NullPointer, format!("{name} is null")))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(LkStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(LkStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

fn field_of(radicand: i64) -> Result<Field, Fail> {
    if radicand == 0 {
        Ok(Field::Rational)
    } else {
        Ok(Field::quadratic(radicand)?)
    }
}

fn require(f: &TernaryForm, group: Group, degree: u32, what: &str) -> Result<(), Fail> {
    if f.group() != group || f.degree() != degree {
        return Err(Fail(LkStatus::Degree, format!("expected {what}, got {f}")));
    }
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn lk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn lk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn lk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a form such as `"x1^4 + 2*x2^2*x3^2"`.
///
/// `radicand` selects the field: 0 for the rationals, otherwise a
/// square-free `d` for Q(sqrt(d)), whose generator is written `t`.
///
/// # Safety
/// `expr` must be a nul-terminated string; `out_form` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lk_form_parse(
    expr: *const c_char,
    radicand: i64,
    group: LkGroup,
    degree: u32,
    out_form: *mut *mut LkForm,
) -> LkStatus {
    guard(|| {
        let out_form = out(out_form, "out_form")?;
        let s = text(expr, "expr")?;
        let g = match group {
            LkGroup::X => Group::X,
            LkGroup::E => Group::E,
        };
        let f = TernaryForm::parse(field_of(radicand)?, g, degree, s)?;
        *out_form = Box::into_raw(Box::new(LkForm(f)));
        Ok(())
    })
}

/// # Safety
/// `form` must come from this library and not have been freed; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn lk_form_free(form: *mut LkForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Degree of a form.
///
/// # Safety
/// `form` must be a live handle; `out_degree` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lk_form_degree(form: *const LkForm, out_degree: *mut u32) -> LkStatus {
    guard(|| {
        *out(out_degree, "out_degree")? = borrow(form, "form")?.0.degree();
        Ok(())
    })
}

/// The form as text, in the syntax accepted by [`lk_form_parse`].
///
/// # Safety
/// `form` must be a live handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lk_form_to_string(form: *const LkForm, out_text: *mut *mut c_char) -> LkStatus {
    guard(|| {
        let out_text = out(out_text, "out_text")?;
        *out_text = string_out(borrow(form, "form")?.0.to_string());
        Ok(())
    })
}

/// Whether two forms are equal, written as 0 or 1.
///
/// # Safety
/// Both handles must be live; `out_equal` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lk_form_equal(a: *const LkForm, b: *const LkForm, out_equal: *mut i32) -> LkStatus {
    guard(|| {
        *out(out_equal, "out_equal")? = (borrow(a, "a")?.0 == borrow(b, "b")?.0) as i32;
        Ok(())
    })
}

/// Determinant and rank of the catalecticant of a quartic in x. The
/// determinant is written as an exact decimal fraction.
///
/// # Safety
/// `quartic` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn lk_catalecticant(
    quartic: *const LkForm,
    out_det: *mut *mut c_char,
    out_rank: *mut usize,
) -> LkStatus {
    guard(|| {
        let (out_det, out_rank) = (out(out_det, "out_det")?, out(out_rank, "out_rank")?);
        let cat = catalecticant(&borrow(quartic, "quartic")?.0)?;
        *out_rank = cat.rank();
        *out_det = string_out(cat.det().to_string());
        Ok(())
    })
}

/// The degree-4 covariant of a quartic in x.
///
/// # Safety
/// `quartic` must be a live handle; `out_form` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lk_scorza(quartic: *const LkForm, out_form: *mut *mut LkForm) -> LkStatus {
    guard(|| {
        let out_form = out(out_form, "out_form")?;
        let s = scorza_fast(&borrow(quartic, "quartic")?.0)?;
        *out_form = Box::into_raw(Box::new(LkForm(s)));
        Ok(())
    })
}

/// The tuple of a conic in x and a cubic in x; the adjugate of the conic is
/// paired with the cubic.
///
/// # Safety
/// Both handles must be live; `out_tuple` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lk_bateman_tuple(
    conic: *const LkForm,
    cubic: *const LkForm,
    out_tuple: *mut *mut LkTuple,
) -> LkStatus {
    guard(|| {
        let out_tuple = out(out_tuple, "out_tuple")?;
        let t = bateman_tuple(&borrow(conic, "conic")?.0, &borrow(cubic, "cubic")?.0)?;
        *out_tuple = Box::into_raw(Box::new(LkTuple(t)));
        Ok(())
    })
}

/// The tuple of a dual conic in e and a cubic in x.
///
/// # Safety
/// Both handles must be live; `out_tuple` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lk_pairing(
    dual_conic: *const LkForm,
    cubic: *const LkForm,
    out_tuple: *mut *mut LkTuple,
) -> LkStatus {
    guard(|| {
        let out_tuple = out(out_tuple, "out_tuple")?;
        let t = b_pairing(&borrow(dual_conic, "dual_conic")?.0, &borrow(cubic, "cubic")?.0)?;
        *out_tuple = Box::into_raw(Box::new(LkTuple(t)));
        Ok(())
    })
}

/// A tuple from 18 integers `d_i_jk`, ordered by `i` and then by
/// `jk = 11, 12, 13, 22, 23, 33`.
///
/// # Safety
/// `coords` must point at 18 readable integers; `out_tuple` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn lk_tuple_from_integers(coords: *const i64, out_tuple: *mut *mut LkTuple) -> LkStatus {
    guard(|| {
        let out_tuple = out(out_tuple, "out_tuple")?;
        if coords.is_null() {
            return Err(Fail(LkStatus::NullPointer, "coords is null".into()));
        }
        let v = std::slice::from_raw_parts(coords, 18);
        let c = std::array::from_fn(|i| std::array::from_fn(|p| Scalar::from_int(v[6 * i + p])));
        *out_tuple = Box::into_raw(Box::new(LkTuple(BatemanTuple::from_coords(c)?)));
        Ok(())
    })
}

/// # Safety
/// `tuple` must come from this library and not have been freed; null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn lk_tuple_free(tuple: *mut LkTuple) {
    if !tuple.is_null() {
        drop(Box::from_raw(tuple));
    }
}

/// The tuple as a JSON object keyed `d_i_jk`.
///
/// # Safety
/// `tuple` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lk_tuple_to_json(tuple: *const LkTuple, out_json: *mut *mut c_char) -> LkStatus {
    guard(|| {
        let out_json = out(out_json, "out_json")?;
        *out_json = string_out(borrow(tuple, "tuple")?.0.to_json().to_string());
        Ok(())
    })
}

/// Rank and Pfaffian of the skew matrix of a tuple.
///
/// # Safety
/// `tuple` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn lk_morley(
    tuple: *const LkTuple,
    out_rank: *mut usize,
    out_pfaffian: *mut *mut c_char,
) -> LkStatus {
    guard(|| {
        let (out_rank, out_pf) = (out(out_rank, "out_rank")?, out(out_pfaffian, "out_pfaffian")?);
        let m = morley_matrix(&borrow(tuple, "tuple")?.0);
        *out_rank = m.rank();
        *out_pf = string_out(m.pfaffian().to_string());
        Ok(())
    })
}

/// The kernel of the skew matrix as a pencil of dual conics, in reduced
/// echelon order. Fails with `Rank` unless the matrix has rank 4.
///
/// # Safety
/// `tuple` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn lk_morley_kernel(
    tuple: *const LkTuple,
    out_first: *mut *mut LkForm,
    out_second: *mut *mut LkForm,
) -> LkStatus {
    guard(|| {
        let (a, b) = (out(out_first, "out_first")?, out(out_second, "out_second")?);
        let pencil = kernel_pencil(&borrow(tuple, "tuple")?.0)?;
        let [g0, g1] = pencil.generators().clone();
        *a = Box::into_raw(Box::new(LkForm(g0)));
        *b = Box::into_raw(Box::new(LkForm(g1)));
        Ok(())
    })
}

/// Rank of the linearized system at a dual conic in e and a cubic in x.
///
/// # Safety
/// Both handles must be live; `out_rank` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lk_tangent_rank(
    dual_conic: *const LkForm,
    cubic: *const LkForm,
    out_rank: *mut usize,
) -> LkStatus {
    guard(|| {
        let out_rank = out(out_rank, "out_rank")?;
        let (q, c) = (&borrow(dual_conic, "dual_conic")?.0, &borrow(cubic, "cubic")?.0);
        require(q, Group::E, 2, "dual conic in e")?;
        require(c, Group::X, 3, "cubic in x")?;
        *out_rank = tangent_rank(q, c)?;
        Ok(())
    })
}

/// Runs the regression suite and writes its JSON report. `only` may be null
/// or the name of one group. Returns `CheckFailed` when a statement fails;
/// the report is written either way.
///
/// # Safety
/// `only` must be null or a nul-terminated string; `out_json` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn lk_verify(seed: u64, only: *const c_char, out_json: *mut *mut c_char) -> LkStatus {
    guard(|| {
        let out_json = out(out_json, "out_json")?;
        let only = if only.is_null() { None } else { Some(text(only, "only")?) };
        if let Some(g) = only {
            if !lueroth_kit::verify::GROUPS.contains(&g) {
                return Err(Fail(LkStatus::Parse, format!("unknown group {g}")));
            }
        }
        let rep = verify_paper(seed, only);
        *out_json = string_out(rep.to_json());
        match &rep.first_failure {
            None => Ok(()),
            Some(id) => Err(Fail(LkStatus::CheckFailed, format!("statement {id} failed"))),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_codes() {
        assert_eq!(status_of(&Error::Rank { expected: 4, found: 6 }), LkStatus::Rank);
        assert_eq!(status_of(&Error::Parse("x".into())), LkStatus::Parse);
        assert_eq!(status_of(&Error::Degenerate("x".into())), LkStatus::Degenerate);
    }

    #[test]
    fn panics_become_internal_errors() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, LkStatus::Internal);
        let msg = unsafe { CStr::from_ptr(lk_last_error_message()) }.to_str().unwrap();
        assert!(msg.contains("boom"));
    }
}
