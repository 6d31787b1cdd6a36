//! C interface to kaccoh.
//!
//! Every function returns a [`KacStatus`]; results come back through out-pointers. Objects are
//! opaque handles released with their `_free` function. Strings returned to the caller are
//! released with [`kac_string_free`]. After a failure, [`kac_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use kaccoh::cli::{run, RunConfig, RunError};
use kaccoh::gamma::{ComplexBuilder, ComplexError, ComplexKind};
use kaccoh::homology::HomologyError;
use kaccoh::io::{parse_pair, InputError};
use kaccoh::sequence::{kac_sequence, SequenceError};
use kaccoh::{cohomology, AbelianGroupInfo, Coefficients, MatchedPair};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KacStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// malformed input document or unknown name
    Schema = 3,
    /// well-formed input that is not a valid group or matched pair
    InvalidInput = 4,
    BudgetExceeded = 5,
    Compute = 6,
    OutOfRange = 7,
    Panic = 8,
}

/// A validated matched pair.
pub struct KacPair(MatchedPair);

/// A cohomology group as free rank, torus rank and torsion orders.
pub struct KacGroup(AbelianGroupInfo);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

type Res<T> = Result<T, (KacStatus, String)>;

fn guard(f: impl FnOnce() -> Res<()>) -> KacStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            KacStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            KacStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Res<&'a str> {
    if p.is_null() {
        return Err((KacStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (KacStatus::InvalidUtf8, e.to_string()))
}

unsafe fn obj<'a, T>(p: *const T) -> Res<&'a T> {
    p.as_ref().ok_or((KacStatus::NullPointer, "null handle".into()))
}

fn out<T>(p: *mut T, v: T) -> Res<()> {
    if p.is_null() {
        return Err((KacStatus::NullPointer, "null output pointer".into()));
    }
    unsafe { p.write(v) };
    Ok(())
}

fn input_status(e: InputError) -> (KacStatus, String) {
    let s = match e {
        InputError::Schema(_) | InputError::Io { .. } => KacStatus::Schema,
        _ => KacStatus::InvalidInput,
    };
    (s, e.to_string())
}

fn complex_status(e: ComplexError) -> (KacStatus, String) {
    let s = match e {
        ComplexError::BudgetExceeded { .. } => KacStatus::BudgetExceeded,
        _ => KacStatus::Compute,
    };
    (s, e.to_string())
}

fn homology_status(e: HomologyError) -> (KacStatus, String) {
    match e {
        HomologyError::DegreeUnavailable(_) => (KacStatus::OutOfRange, e.to_string()),
        _ => (KacStatus::Compute, e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = String>>(s: &str) -> Res<T> {
    s.parse().map_err(|e| (KacStatus::Schema, e))
}

/// Message for the most recent failure on this thread; empty after success. Owned by the
/// library and valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn kac_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a matched-pair JSON document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out_pair` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kac_pair_from_json(json: *const c_char, out_pair: *mut *mut KacPair) -> KacStatus {
    guard(|| {
        let mp = parse_pair(text(json)?.as_bytes()).map_err(input_status)?;
        out(out_pair, Box::into_raw(Box::new(KacPair(mp))))
    })
}

/// One of the built-in pairs: `z6`, `z2xz2`, `s3`, `d4`, `z12`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out_pair` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kac_pair_fixture(name: *const c_char, out_pair: *mut *mut KacPair) -> KacStatus {
    guard(|| {
        let name = text(name)?;
        let mp = kaccoh::fixtures::all()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, mp)| mp)
            .ok_or_else(|| (KacStatus::Schema, format!("no fixture named '{name}'")))?;
        out(out_pair, Box::into_raw(Box::new(KacPair(mp))))
    })
}

/// # Safety
/// `pair` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kac_pair_free(pair: *mut KacPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// `|G|`, `|G1|` and `|G2|`.
///
/// # Safety
/// `pair` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kac_pair_orders(pair: *const KacPair, order: *mut usize, g1: *mut usize, g2: *mut usize) -> KacStatus {
    guard(|| {
        let mp = &obj(pair)?.0;
        out(order, mp.order())?;
        out(g1, mp.g1().len())?;
        out(g2, mp.g2().len())
    })
}

/// `H^degree(complex; coeff)`. `complex` is a kind name such as `kac_C`; `coeff` is `Z`,
/// `Zm:m` or `T`. `budget` bounds the basis of a single block (0 for the default).
///
/// # Safety
/// `pair` must be a live handle, strings nul-terminated, `out_group` valid.
#[no_mangle]
pub unsafe extern "C" fn kac_cohomology(
    pair: *const KacPair,
    complex: *const c_char,
    coeff: *const c_char,
    degree: i32,
    budget: u64,
    out_group: *mut *mut KacGroup,
) -> KacStatus {
    guard(|| {
        let mp = &obj(pair)?.0;
        let kind: ComplexKind = parse(text(complex)?)?;
        let coeff: Coefficients = parse(text(coeff)?)?;
        let budget = if budget == 0 { kaccoh::cli::DEFAULT_BUDGET } else { budget };
        let c = ComplexBuilder::with_budget(mp, budget).build(kind, degree.max(1) as usize).map_err(complex_status)?;
        let h = cohomology(&c, degree, coeff).map_err(homology_status)?;
        out(out_group, Box::into_raw(Box::new(KacGroup(h.info))))
    })
}

/// # Safety
/// `group` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kac_group_free(group: *mut KacGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// Free rank, torus rank and number of torsion summands.
///
/// # Safety
/// `group` must be a live handle; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kac_group_shape(
    group: *const KacGroup,
    free_rank: *mut usize,
    torus_rank: *mut usize,
    torsion_len: *mut usize,
) -> KacStatus {
    guard(|| {
        let g = &obj(group)?.0;
        out(free_rank, g.free_rank)?;
        out(torus_rank, g.torus_rank)?;
        out(torsion_len, g.torsion.len())
    })
}

/// Order of torsion summand `i` (invariant factors in increasing divisibility order).
///
/// # Safety
/// `group` must be a live handle and `order` valid.
#[no_mangle]
pub unsafe extern "C" fn kac_group_torsion(group: *const KacGroup, i: usize, order: *mut u64) -> KacStatus {
    guard(|| {
        let g = &obj(group)?.0;
        let d = *g.torsion.get(i).ok_or((KacStatus::OutOfRange, format!("torsion index {i} of {}", g.torsion.len())))?;
        out(order, d)
    })
}

/// Exactness of the Kac sequence through degree `through`.
///
/// # Safety
/// `pair` must be a live handle, `coeff` nul-terminated, `exact` valid.
#[no_mangle]
pub unsafe extern "C" fn kac_sequence_exact(
    pair: *const KacPair,
    coeff: *const c_char,
    through: usize,
    budget: u64,
    exact: *mut bool,
) -> KacStatus {
    guard(|| {
        let mp = &obj(pair)?.0;
        let coeff: Coefficients = parse(text(coeff)?)?;
        let budget = if budget == 0 { kaccoh::cli::DEFAULT_BUDGET } else { budget };
        let s = kac_sequence(mp, coeff, through, budget).map_err(|e| match e {
            SequenceError::Complex(c) => complex_status(c),
            SequenceError::BadDegree => (KacStatus::OutOfRange, e.to_string()),
            other => (KacStatus::Compute, other.to_string()),
        })?;
        out(exact, s.is_exact())
    })
}

/// Runs a command-line invocation (`argv[0]` is the program name) and returns the JSON
/// report and the exit code the command-line tool would use. On input, budget or compute
/// errors the status is nonzero and no report is produced.
///
/// # Safety
/// `argv` must hold `argc` nul-terminated strings; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kac_run(
    argc: usize,
    argv: *const *const c_char,
    report_json: *mut *mut c_char,
    exit_code: *mut i32,
) -> KacStatus {
    guard(|| {
        if argv.is_null() {
            return Err((KacStatus::NullPointer, "null argv".into()));
        }
        let args = (0..argc).map(|i| text(*argv.add(i)).map(str::to_string)).collect::<Res<Vec<_>>>()?;
        let config = RunConfig::from_args(args).map_err(|e| (KacStatus::Schema, e))?;
        let outcome = run(&config).map_err(|e| {
            let s = match &e {
                RunError::Input(i) => input_status(i.clone()).0,
                RunError::Config(_) => KacStatus::Schema,
                RunError::Budget(_) => KacStatus::BudgetExceeded,
                RunError::Compute(_) | RunError::Output { .. } => KacStatus::Compute,
            };
            (s, e.to_string())
        })?;
        let json = CString::new(outcome.report.to_json()).map_err(|e| (KacStatus::Compute, e.to_string()))?;
        out(exit_code, outcome.exit_code())?;
        out(report_json, json.into_raw())
    })
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn kac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
