//! C ABI for `hopfloop`.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `*_free` function. Strings returned through out-pointers are
//! owned by the caller and released with [`hl_string_free`]. Every fallible
//! function returns an [`HlStatus`]; on failure the message is available from
//! [`hl_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hopfloop::evaluation::{sigma_lv, sigma_recursive};
use hopfloop::graphs::format_rational;
use hopfloop::verify::{run_suites, Suite};
use hopfloop::{AnyModel, Error, GenOptions, Generator, GraphSum, Monomial, Scalar};

/// Status codes, aligned with the `hopfloop` command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HlStatus {
    Ok = 0,
    Mismatch = 1,
    Usage = 2,
    ResourceLimit = 3,
    ModelInvalid = 4,
    NullPointer = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

/// Weighted connected graphs of one cell, vertex order forgotten.
pub struct HlGraphSum {
    sum: GraphSum,
}

/// A validated finite model.
pub struct HlModel {
    model: AnyModel,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> HlStatus {
    match err {
        Error::Usage(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) => HlStatus::Usage,
        Error::ResourceLimit(_) => HlStatus::ResourceLimit,
        Error::Model(_) => HlStatus::ModelInvalid,
    }
}

enum Failure {
    Status(HlStatus, String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<HlStatus, Failure>) -> HlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure::Engine(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            HlStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::Status(HlStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Failure::Status(HlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn check_out<T>(out: *mut T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Status(HlStatus::NullPointer, format!("{what} is null")));
    }
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Message of the most recent failure on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Generates the connected graphs with `loops` loops, `vertices` vertices and
/// the comma-separated `externals` (empty string for vacuum graphs).
///
/// `min_valence = k > 0` keeps only graphs whose vertices all have valence
/// above `k`, pruning the recursion accordingly.
///
/// # Safety
/// `externals` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_generate(
    loops: usize,
    vertices: usize,
    externals: *const c_char,
    min_valence: usize,
    out: *mut *mut HlGraphSum,
) -> HlStatus {
    guard(|| {
        check_out(out, "out")?;
        let m = Monomial::parse_user_list(read_str(externals, "externals")?)?;
        let gen = Generator::new(GenOptions::pruned(min_valence, Some(loops)));
        let mut sum = gen.omega_unordered(loops, vertices, &m)?;
        if min_valence > 0 {
            sum.retain(|g| (0..g.vertex_count()).all(|i| g.valence(i) > min_valence));
        }
        *out = Box::into_raw(Box::new(HlGraphSum { sum }));
        Ok(HlStatus::Ok)
    })
}

/// Number of graphs in a sum; 0 for null.
///
/// # Safety
/// `sum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hl_graph_sum_len(sum: *const HlGraphSum) -> usize {
    sum.as_ref().map_or(0, |s| s.sum.len())
}

/// Weight of the `index`-th graph (canonical order) as `num/den`.
///
/// # Safety
/// `sum` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_graph_sum_weight(sum: *const HlGraphSum, index: usize, out: *mut *mut c_char) -> HlStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = sum.as_ref().ok_or_else(|| Failure::Status(HlStatus::NullPointer, "sum is null".into()))?;
        let (_, w) = s
            .sum
            .iter()
            .nth(index)
            .ok_or_else(|| Failure::Status(HlStatus::Usage, format!("index {index} out of range")))?;
        *out = to_c_string(format_rational(w));
        Ok(HlStatus::Ok)
    })
}

/// JSON array of graph records (1-based vertices, `num/den` weights).
///
/// # Safety
/// `sum` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_graph_sum_to_json(sum: *const HlGraphSum, out: *mut *mut c_char) -> HlStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = sum.as_ref().ok_or_else(|| Failure::Status(HlStatus::NullPointer, "sum is null".into()))?;
        let text = serde_json::to_string(&s.sum.records()).map_err(Error::from)?;
        *out = to_c_string(text);
        Ok(HlStatus::Ok)
    })
}

/// # Safety
/// `sum` must be null or a handle from [`hl_generate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hl_graph_sum_free(sum: *mut HlGraphSum) {
    if !sum.is_null() {
        drop(Box::from_raw(sum));
    }
}

/// Parses and validates a model from its JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_model_from_json(json: *const c_char, out: *mut *mut HlModel) -> HlStatus {
    guard(|| {
        check_out(out, "out")?;
        let model = AnyModel::from_json_str(read_str(json, "json")?)?;
        *out = Box::into_raw(Box::new(HlModel { model }));
        Ok(HlStatus::Ok)
    })
}

/// # Safety
/// `model` must be null or a handle from [`hl_model_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hl_model_free(model: *mut HlModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Connected grade `σ^{l,v}` on the comma-separated `legs`, rendered as an
/// exact fraction (rational models) or a decimal (float models).
///
/// With `recursive` non-zero the value is computed by the σ-level recursion
/// instead of summing generated graphs.
///
/// # Safety
/// `model` must be a live handle, `legs` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn hl_sigma(
    model: *const HlModel,
    loops: usize,
    vertices: usize,
    legs: *const c_char,
    recursive: i32,
    out: *mut *mut c_char,
) -> HlStatus {
    guard(|| {
        check_out(out, "out")?;
        let m = model.as_ref().ok_or_else(|| Failure::Status(HlStatus::NullPointer, "model is null".into()))?;
        let names: Vec<&str> = match read_str(legs, "legs")?.trim() {
            "" => Vec::new(),
            list => list.split(',').map(str::trim).collect(),
        };
        let text = match &m.model {
            AnyModel::Exact(model) => {
                let idx = model.resolve_legs(&names)?;
                let value = if recursive != 0 {
                    sigma_recursive(model, loops, vertices, &idx)?
                } else {
                    sigma_lv(model, loops, vertices, &idx)?
                };
                value.render()
            }
            AnyModel::Float(model) => {
                let idx = model.resolve_legs(&names)?;
                let value = if recursive != 0 {
                    sigma_recursive(model, loops, vertices, &idx)?
                } else {
                    sigma_lv(model, loops, vertices, &idx)?
                };
                value.render()
            }
        };
        *out = to_c_string(text);
        Ok(HlStatus::Ok)
    })
}

/// Runs the verification suites up to `max_edges` internal edges.
///
/// `suites` is a comma-separated list (`theorem`, `alt-recursion`,
/// `series`), or null / empty for all. Returns `HL_STATUS_OK` when every
/// check passes and `HL_STATUS_MISMATCH` otherwise. When `report` is not
/// null it receives the per-check log.
///
/// # Safety
/// `suites` must be null or NUL-terminated; `report` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn hl_verify(max_edges: usize, suites: *const c_char, report: *mut *mut c_char) -> HlStatus {
    guard(|| {
        let list = if suites.is_null() { "" } else { read_str(suites, "suites")? };
        let mut chosen = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Suite>, Error>>()?;
        if chosen.is_empty() {
            chosen = Suite::ALL.to_vec();
        }
        let gen = Generator::unpruned().with_max_edges(max_edges);
        let mut log = Vec::new();
        let result = run_suites(&gen, &chosen, max_edges, &mut log)?;
        if !report.is_null() {
            *report = to_c_string(String::from_utf8_lossy(&log).into_owned());
        }
        Ok(if result.passed() { HlStatus::Ok } else { HlStatus::Mismatch })
    })
}
