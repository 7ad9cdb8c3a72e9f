//! C interface to the affchab solver.
//!
//! Problems and reports are opaque handles. Every fallible call returns an
//! [`AffchabStatus`]; negative values are errors, and the message of the
//! most recent error on the calling thread is available from
//! [`affchab_last_error`]. Reports are handed back as JSON in the same
//! format as the `affchab` command line tool.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use affchab::cli::{self, Outcome, ProblemFile};
use affchab::error::Error;

/// Result codes. Library errors map one-to-one onto the variants of the
/// Rust error type.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffchabStatus {
    Ok = 0,
    /// The run finished but some discs could not be resolved.
    Partial = 1,
    NullArgument = -1,
    InvalidUtf8 = -2,
    Panic = -3,
    ZeroInput = -10,
    NotAUnit = -11,
    NonSeparableReduction = -12,
    DivergentSubstitution = -13,
    IndistinguishableFromZero = -14,
    PrecisionLoss = -15,
    PrecisionExceeded = -16,
    NotSymmetric = -17,
    UnsupportedFamily = -18,
    BadReduction = -19,
    PoleOnDisc = -20,
    DifferentDiscs = -21,
    EndpointRestriction = -22,
    MissingIncidence = -23,
    NeedsOverride = -24,
    NotTransversal = -25,
    DimensionMismatch = -26,
    Invalid = -27,
}

const KINDS: [(&str, AffchabStatus); 18] = [
    ("ZeroInput", AffchabStatus::ZeroInput),
    ("NotAUnit", AffchabStatus::NotAUnit),
    ("NonSeparableReduction", AffchabStatus::NonSeparableReduction),
    ("DivergentSubstitution", AffchabStatus::DivergentSubstitution),
    ("IndistinguishableFromZero", AffchabStatus::IndistinguishableFromZero),
    ("PrecisionLoss", AffchabStatus::PrecisionLoss),
    ("PrecisionExceeded", AffchabStatus::PrecisionExceeded),
    ("NotSymmetric", AffchabStatus::NotSymmetric),
    ("UnsupportedFamily", AffchabStatus::UnsupportedFamily),
    ("BadReduction", AffchabStatus::BadReduction),
    ("PoleOnDisc", AffchabStatus::PoleOnDisc),
    ("DifferentDiscs", AffchabStatus::DifferentDiscs),
    ("EndpointRestriction", AffchabStatus::EndpointRestriction),
    ("MissingIncidence", AffchabStatus::MissingIncidence),
    ("NeedsOverride", AffchabStatus::NeedsOverride),
    ("NotTransversal", AffchabStatus::NotTransversal),
    ("DimensionMismatch", AffchabStatus::DimensionMismatch),
    ("Invalid", AffchabStatus::Invalid),
];

impl AffchabStatus {
    fn of_kind(kind: &str) -> Self {
        KINDS.iter().find(|(k, _)| *k == kind).map(|(_, s)| *s).unwrap_or(AffchabStatus::Invalid)
    }

    fn name(self) -> &'static CStr {
        match self {
            AffchabStatus::Ok => c"Ok",
            AffchabStatus::Partial => c"Partial",
            AffchabStatus::NullArgument => c"NullArgument",
            AffchabStatus::InvalidUtf8 => c"InvalidUtf8",
            AffchabStatus::Panic => c"Panic",
            AffchabStatus::ZeroInput => c"ZeroInput",
            AffchabStatus::NotAUnit => c"NotAUnit",
            AffchabStatus::NonSeparableReduction => c"NonSeparableReduction",
            AffchabStatus::DivergentSubstitution => c"DivergentSubstitution",
            AffchabStatus::IndistinguishableFromZero => c"IndistinguishableFromZero",
            AffchabStatus::PrecisionLoss => c"PrecisionLoss",
            AffchabStatus::PrecisionExceeded => c"PrecisionExceeded",
            AffchabStatus::NotSymmetric => c"NotSymmetric",
            AffchabStatus::UnsupportedFamily => c"UnsupportedFamily",
            AffchabStatus::BadReduction => c"BadReduction",
            AffchabStatus::PoleOnDisc => c"PoleOnDisc",
            AffchabStatus::DifferentDiscs => c"DifferentDiscs",
            AffchabStatus::EndpointRestriction => c"EndpointRestriction",
            AffchabStatus::MissingIncidence => c"MissingIncidence",
            AffchabStatus::NeedsOverride => c"NeedsOverride",
            AffchabStatus::NotTransversal => c"NotTransversal",
            AffchabStatus::DimensionMismatch => c"DimensionMismatch",
            AffchabStatus::Invalid => c"Invalid",
        }
    }
}

impl From<&Error> for AffchabStatus {
    fn from(e: &Error) -> Self {
        AffchabStatus::of_kind(e.kind())
    }
}

/// A parsed problem file.
pub struct AffchabProblem {
    file: ProblemFile,
}

/// The JSON output of a solve or verify run.
pub struct AffchabReport {
    json: CString,
    outcome: Outcome,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: AffchabStatus, msg: &str) -> AffchabStatus {
    set_error(msg);
    status
}

/// Runs `f` with panics turned into [`AffchabStatus::Panic`].
fn guard(f: impl FnOnce() -> AffchabStatus) -> AffchabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            fail(AffchabStatus::Panic, &msg)
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, AffchabStatus> {
    if s.is_null() {
        return Err(fail(AffchabStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(AffchabStatus::InvalidUtf8, &e.to_string()))
}

unsafe fn store_problem(
    parsed: affchab::error::Result<ProblemFile>,
    out: *mut *mut AffchabProblem,
) -> AffchabStatus {
    match parsed {
        Ok(file) => {
            *out = Box::into_raw(Box::new(AffchabProblem { file }));
            AffchabStatus::Ok
        }
        Err(e) => fail(AffchabStatus::from(&e), &e.to_string()),
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn affchab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Name of a status code, e.g. "BadReduction". Unknown codes give "Unknown".
#[no_mangle]
pub extern "C" fn affchab_status_name(status: i32) -> *const c_char {
    let all = [AffchabStatus::Ok, AffchabStatus::Partial, AffchabStatus::NullArgument, AffchabStatus::InvalidUtf8, AffchabStatus::Panic];
    all.into_iter()
        .chain(KINDS.iter().map(|(_, s)| *s))
        .find(|s| *s as i32 == status)
        .map(|s| s.name().as_ptr())
        .unwrap_or(c"Unknown".as_ptr())
}

/// Message of the last error on this thread, or "". The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn affchab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a problem file from a JSON string.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn affchab_problem_parse(json: *const c_char, out: *mut *mut AffchabProblem) -> AffchabStatus {
    guard(|| {
        if out.is_null() {
            return fail(AffchabStatus::NullArgument, "null output pointer");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        store_problem(ProblemFile::parse(text), out)
    })
}

/// Reads a problem file from disk.
///
/// # Safety
/// `path` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn affchab_problem_read(path: *const c_char, out: *mut *mut AffchabProblem) -> AffchabStatus {
    guard(|| {
        if out.is_null() {
            return fail(AffchabStatus::NullArgument, "null output pointer");
        }
        let path = match read_str(path) {
            Ok(t) => t,
            Err(s) => return s,
        };
        store_problem(ProblemFile::read(Path::new(path)), out)
    })
}

/// # Safety
/// `problem` must come from `affchab_problem_parse` or `affchab_problem_read`
/// and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn affchab_problem_free(problem: *mut AffchabProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

fn overrides(p: u32, precision: i64) -> (Option<u32>, Option<i64>) {
    ((p != 0).then_some(p), (precision > 0).then_some(precision))
}

fn first_error(v: &serde_json::Value) -> Option<(String, String)> {
    let rec = |e: &serde_json::Value| Some((e["kind"].as_str()?.to_string(), e["message"].as_str()?.to_string()));
    if let Some(r) = rec(&v["error"]) {
        return Some(r);
    }
    v["types"].as_array()?.iter().find_map(|t| rec(&t["error"]))
}

unsafe fn store_report(
    report: serde_json::Result<serde_json::Value>,
    outcome: Outcome,
    out: *mut *mut AffchabReport,
) -> AffchabStatus {
    let value = match report {
        Ok(v) => v,
        Err(e) => return fail(AffchabStatus::Invalid, &e.to_string()),
    };
    let status = match outcome {
        Outcome::Complete => AffchabStatus::Ok,
        Outcome::Partial => AffchabStatus::Partial,
        Outcome::Error => match first_error(&value) {
            Some((kind, msg)) => fail(AffchabStatus::of_kind(&kind), &msg),
            None => fail(AffchabStatus::Invalid, "the run failed"),
        },
    };
    let json = CString::new(serde_json::to_string_pretty(&value).unwrap_or_default()).unwrap_or_default();
    *out = Box::into_raw(Box::new(AffchabReport { json, outcome }));
    status
}

/// Runs the solver. `p == 0` and `precision <= 0` keep the values from the
/// file; `sigma < 0` runs every reduction type. A report is stored in `out`
/// whenever the arguments are valid, including when the run itself fails,
/// so the error details can be read from its JSON.
///
/// # Safety
/// `problem` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn affchab_solve(
    problem: *const AffchabProblem,
    p: u32,
    precision: i64,
    sigma: i64,
    out: *mut *mut AffchabReport,
) -> AffchabStatus {
    guard(|| {
        if problem.is_null() || out.is_null() {
            return fail(AffchabStatus::NullArgument, "null problem or output pointer");
        }
        let (p, prec) = overrides(p, precision);
        let sigma = usize::try_from(sigma).ok();
        let (report, outcome) = cli::solve(&(*problem).file, p, prec, sigma);
        store_report(serde_json::to_value(&report), outcome, out)
    })
}

/// Checks the known points and determinants, as `affchab verify` does.
///
/// # Safety
/// As for [`affchab_solve`].
#[no_mangle]
pub unsafe extern "C" fn affchab_verify(
    problem: *const AffchabProblem,
    p: u32,
    precision: i64,
    out: *mut *mut AffchabReport,
) -> AffchabStatus {
    guard(|| {
        if problem.is_null() || out.is_null() {
            return fail(AffchabStatus::NullArgument, "null problem or output pointer");
        }
        let (p, prec) = overrides(p, precision);
        let (report, outcome) = cli::verify(&(*problem).file, p, prec);
        store_report(serde_json::to_value(&report), outcome, out)
    })
}

/// The report as JSON, owned by the report.
///
/// # Safety
/// `report` must be a live handle or null (which gives null).
#[no_mangle]
pub unsafe extern "C" fn affchab_report_json(report: *const AffchabReport) -> *const c_char {
    if report.is_null() {
        return std::ptr::null();
    }
    (*report).json.as_ptr()
}

/// 0 complete, 1 error, 2 partial: the exit codes of the command line tool.
/// Null gives 1.
///
/// # Safety
/// `report` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn affchab_report_outcome(report: *const AffchabReport) -> i32 {
    if report.is_null() {
        return Outcome::Error as i32;
    }
    (*report).outcome as i32
}

/// # Safety
/// `report` must come from a solve or verify call and not have been freed.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn affchab_report_free(report: *mut AffchabReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}
