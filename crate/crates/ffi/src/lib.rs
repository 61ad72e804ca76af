//! C ABI for `revtidy`.
//!
//! Every function returns a [`RevtidyStatus`]; results come back through out
//! pointers. Handles are opaque and owned by the caller once returned; free
//! them with the matching `*_free` function. On failure a description is
//! available from [`revtidy_last_error`] on the same thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use revtidy::qsim::ComputationSpec;
use revtidy::report::{analyze, procedure_to_json};
use revtidy::revcirc::format::{parse_circuit, parse_program, write_circuit};
use revtidy::revcirc::{bennett_embed, reverse, tidy_transform, Bits, BooleanProgram, ReversibleCircuit};
use revtidy::tidy::{check_tidy_condition, construct_tidier, erasure_cost, verify_tidier, TidyError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RevtidyStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    NotReversible = 5,
    NoTidier = 6,
    Panic = 7,
}

/// A parsed boolean program.
pub struct RevtidyProgram(BooleanProgram);

/// A reversible circuit.
pub struct RevtidyCircuit(ReversibleCircuit);

/// A validated branch specification.
pub struct RevtidySpec(ComputationSpec);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(RevtidyStatus, String);

impl Failure {
    fn new(status: RevtidyStatus, e: impl std::fmt::Display) -> Self {
        Failure(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RevtidyStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RevtidyStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RevtidyStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(RevtidyStatus::NullArgument, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure::new(RevtidyStatus::InvalidUtf8, e))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(RevtidyStatus::NullArgument, "null handle"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(RevtidyStatus::NullArgument, "null out pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_box<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(RevtidyStatus::NullArgument, "null out pointer"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure::new(RevtidyStatus::InvalidInput, e))?;
    put(out, c.into_raw())
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::new(
            RevtidyStatus::InvalidInput,
            format!("invalid tolerance {tol}"),
        ))
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next `revtidy_*` call on the same thread.
#[no_mangle]
pub extern "C" fn revtidy_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn revtidy_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub unsafe extern "C" fn revtidy_program_parse(src: *const c_char, out: *mut *mut RevtidyProgram) -> RevtidyStatus {
    guard(|| {
        let prog = parse_program(text(src)?).map_err(|e| Failure::new(RevtidyStatus::ParseError, e))?;
        put_box(out, RevtidyProgram(prog))
    })
}

#[no_mangle]
pub unsafe extern "C" fn revtidy_program_free(p: *mut RevtidyProgram) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Compiles a program into a reversible circuit with role annotations.
#[no_mangle]
pub unsafe extern "C" fn revtidy_program_embed(
    p: *const RevtidyProgram,
    out: *mut *mut RevtidyCircuit,
) -> RevtidyStatus {
    guard(|| {
        let c = bennett_embed(&handle(p)?.0).map_err(|e| Failure::new(RevtidyStatus::InvalidInput, e))?;
        put_box(out, RevtidyCircuit(c))
    })
}

#[no_mangle]
pub unsafe extern "C" fn revtidy_circuit_parse(src: *const c_char, out: *mut *mut RevtidyCircuit) -> RevtidyStatus {
    guard(|| {
        let c = parse_circuit(text(src)?).map_err(|e| Failure::new(RevtidyStatus::ParseError, e))?;
        put_box(out, RevtidyCircuit(c))
    })
}

#[no_mangle]
pub unsafe extern "C" fn revtidy_circuit_free(c: *mut RevtidyCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

#[no_mangle]
pub unsafe extern "C" fn revtidy_circuit_width(c: *const RevtidyCircuit, out: *mut usize) -> RevtidyStatus {
    guard(|| put(out, handle(c)?.0.width()))
}

#[no_mangle]
pub unsafe extern "C" fn revtidy_circuit_reverse(
    c: *const RevtidyCircuit,
    out: *mut *mut RevtidyCircuit,
) -> RevtidyStatus {
    guard(|| put_box(out, RevtidyCircuit(reverse(&handle(c)?.0))))
}

#[no_mangle]
pub unsafe extern "C" fn revtidy_circuit_tidy(
    c: *const RevtidyCircuit,
    out: *mut *mut RevtidyCircuit,
) -> RevtidyStatus {
    guard(|| {
        let t = tidy_transform(&handle(c)?.0).map_err(|e| Failure::new(RevtidyStatus::InvalidInput, e))?;
        put_box(out, RevtidyCircuit(t))
    })
}

/// Evaluates the circuit on `width` bytes of 0/1 in `input`, writing `width`
/// bytes to `output`.
#[no_mangle]
pub unsafe extern "C" fn revtidy_circuit_evaluate(
    c: *const RevtidyCircuit,
    input: *const u8,
    output: *mut u8,
    width: usize,
) -> RevtidyStatus {
    guard(|| {
        let c = &handle(c)?.0;
        if input.is_null() || output.is_null() {
            return Err(Failure::new(RevtidyStatus::NullArgument, "null buffer"));
        }
        let raw = std::slice::from_raw_parts(input, width);
        let bits = raw
            .iter()
            .map(|&b| match b {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Failure::new(RevtidyStatus::InvalidInput, format!("bit value {other}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let end = c
            .evaluate(&Bits(bits))
            .map_err(|e| Failure::new(RevtidyStatus::InvalidInput, e))?;
        let dst = std::slice::from_raw_parts_mut(output, width);
        for (d, b) in dst.iter_mut().zip(end.0) {
            *d = u8::from(b);
        }
        Ok(())
    })
}

/// Serializes the circuit in `.rvc` text form. Free with
/// [`revtidy_string_free`].
#[no_mangle]
pub unsafe extern "C" fn revtidy_circuit_to_text(c: *const RevtidyCircuit, out: *mut *mut c_char) -> RevtidyStatus {
    guard(|| put_string(out, write_circuit(&handle(c)?.0)))
}

#[no_mangle]
pub unsafe extern "C" fn revtidy_spec_parse_json(src: *const c_char, out: *mut *mut RevtidySpec) -> RevtidyStatus {
    guard(|| {
        let spec = ComputationSpec::from_json(text(src)?).map_err(|e| Failure::new(RevtidyStatus::ParseError, e))?;
        put_box(out, RevtidySpec(spec))
    })
}

#[no_mangle]
pub unsafe extern "C" fn revtidy_spec_free(s: *mut RevtidySpec) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Full analyzer report as JSON. Free with [`revtidy_string_free`].
#[no_mangle]
pub unsafe extern "C" fn revtidy_spec_analyze_json(
    s: *const RevtidySpec,
    tol: f64,
    out: *mut *mut c_char,
) -> RevtidyStatus {
    guard(|| {
        check_tol(tol)?;
        put_string(out, analyze(&handle(s)?.0, tol).to_json())
    })
}

/// Writes whether a tidier exists and the largest `|⟨i|j⟩(1 − ⟨O(i)|O(j)⟩)|`.
#[no_mangle]
pub unsafe extern "C" fn revtidy_spec_check_tidy(
    s: *const RevtidySpec,
    tol: f64,
    possible: *mut bool,
    residual: *mut f64,
) -> RevtidyStatus {
    guard(|| {
        check_tol(tol)?;
        let spec = &handle(s)?.0;
        let d = check_tidy_condition(spec, tol);
        let worst = revtidy::tidy::check_reversibility(spec, tol)
            .iter()
            .map(|p| p.tidy_residual.norm())
            .fold(0.0, f64::max);
        put(possible, d.possible)?;
        put(residual, worst)
    })
}

/// Constructs and verifies a tidying procedure, returned as JSON.
#[no_mangle]
pub unsafe extern "C" fn revtidy_spec_tidier_json(
    s: *const RevtidySpec,
    tol: f64,
    out: *mut *mut c_char,
) -> RevtidyStatus {
    guard(|| {
        check_tol(tol)?;
        let spec = &handle(s)?.0;
        let proc = construct_tidier(spec, tol).map_err(|e| {
            let status = match e {
                TidyError::NoTidierExists(_) => RevtidyStatus::NoTidier,
                TidyError::NotReversible(_) => RevtidyStatus::NotReversible,
                _ => RevtidyStatus::InvalidInput,
            };
            Failure::new(status, e)
        })?;
        let fids = verify_tidier(spec, &proc, tol).map_err(|e| Failure::new(RevtidyStatus::InvalidInput, e))?;
        put_string(out, procedure_to_json(&proc, &fids))
    })
}

/// Landauer cost in units of kT·ln2 of resetting the aux register.
#[no_mangle]
pub unsafe extern "C" fn revtidy_spec_erasure_cost(
    s: *const RevtidySpec,
    tidied: bool,
    out: *mut f64,
) -> RevtidyStatus {
    guard(|| put(out, erasure_cost(&handle(s)?.0, tidied).landauer_cost))
}
