//! C ABI over the exact quantum-logic library.
//!
//! Conventions, uniform across every function here:
//!
//! - Structured data crosses the boundary as JSON text in exactly the
//!   encodings the `bohr` command line reads and writes; response
//!   documents match the CLI's standard output for the corresponding
//!   subcommand byte for byte.
//! - Fallible functions return a `BohrStatus`. Anything but `Ok` also
//!   stores a `{"error": {"code", "message"}}` document retrievable via
//!   `bohr_last_error_message` (thread-local; the pointer stays valid
//!   until the next failing call on the same thread).
//! - Strings handed out through `char **` out-parameters are heap
//!   allocations owned by the caller; release them with
//!   `bohr_string_free`. Handles are released with their matching
//!   `_free` function. Every `_free` accepts null and does nothing.
//! - Panics never unwind across the boundary: they are caught and
//!   reported as `BohrStatus::Panicked`.

use bohr_core::context::enumerate_young;
use bohr_core::error::Error;
use bohr_core::frame::SigmaOpen;
use bohr_core::gelfand::{
    bohrified_transform, eigenvalues_in_context, gelfand_support, spectral_projection,
};
use bohr_core::json::{
    matrix_from_dto, matrix_to_dto, open_from_dto, poset_from_dto, poset_to_dto, rayset_from_dto,
    seeds_from_dto, sigma_from_dto, sigma_to_dto, state_from_dto, to_pretty_string, MatrixDto,
    OpenDto, PosetDto, PosetRefDto, RaySetDto, SeedsDto, SigmaDto, StateDto,
};
use bohr_core::ks::valuation_search;
use bohr_core::poset::ContextPoset;
use bohr_core::scalar::format_rational;
use bohr_core::state::{measure_component, pairing};
use serde_json::{json, Value};
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

/// Result of every fallible call. `Domain` and `Malformed` mirror the
/// CLI's exit codes 1 and 2; the remaining variants are boundary problems
/// that cannot occur through the CLI.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BohrStatus {
    /// The call succeeded; out-parameters are populated.
    Ok = 0,
    /// Well-formed data violating a mathematical precondition.
    Domain = 1,
    /// Unparseable or ill-shaped input.
    Malformed = 2,
    /// A required pointer argument was null.
    NullPointer = 3,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 4,
    /// An internal panic was caught at the boundary.
    Panicked = 5,
}

/// An immutable poset of classical contexts behind an opaque handle.
pub struct BohrPoset {
    inner: Arc<ContextPoset>,
}

/// One element of the frame over a poset, behind an opaque handle. The
/// handle keeps its poset alive internally.
pub struct BohrSigma {
    inner: SigmaOpen,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(code: &str, message: &str) {
    let doc = to_pretty_string(&json!({"error": {"code": code, "message": message}}));
    let text = CString::new(doc).unwrap_or_else(|_| {
        CString::new("{\"error\":{\"code\":\"internal\",\"message\":\"unrepresentable\"}}\n")
            .expect("fallback has no interior NUL")
    });
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn error_status(e: &Error) -> BohrStatus {
    set_last_error(e.code(), &e.to_string());
    match e.exit_code() {
        2 => BohrStatus::Malformed,
        _ => BohrStatus::Domain,
    }
}

fn null_pointer(what: &str) -> BohrStatus {
    set_last_error("null-pointer", &format!("{what} must not be null"));
    BohrStatus::NullPointer
}

/// Runs a pure computation, catching panics so they cannot unwind into C.
fn guarded<T>(f: impl FnOnce() -> Result<T, Error>) -> Result<T, BohrStatus> {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(value)) => Ok(value),
        Ok(Err(e)) => Err(error_status(&e)),
        Err(_) => {
            set_last_error("panic", "internal panic caught at the ABI boundary");
            Err(BohrStatus::Panicked)
        }
    }
}

/// # Safety
/// `ptr` must be null or point to a NUL-terminated string that outlives
/// the call.
unsafe fn str_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, BohrStatus> {
    if ptr.is_null() {
        return Err(null_pointer(what));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error("invalid-utf8", &format!("{what} is not valid UTF-8"));
        BohrStatus::InvalidUtf8
    })
}

/// # Safety
/// `ptr` must be null or a live pointer from this library.
unsafe fn handle_arg<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, BohrStatus> {
    if ptr.is_null() {
        return Err(null_pointer(what));
    }
    Ok(&*ptr)
}

/// # Safety
/// `out` must be null or valid for a single pointer write.
unsafe fn box_out<T>(value: T, out: *mut *mut T) -> BohrStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    *out = Box::into_raw(Box::new(value));
    BohrStatus::Ok
}

/// # Safety
/// `out` must be null or valid for a single pointer write.
unsafe fn string_out(text: String, out: *mut *mut c_char) -> BohrStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            BohrStatus::Ok
        }
        Err(_) => {
            set_last_error("internal", "output text contained a NUL byte");
            BohrStatus::Panicked
        }
    }
}

fn decode<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(format!("invalid {what} JSON: {e}")))
}

/// The library version as a static NUL-terminated string; never freed.
#[no_mangle]
pub extern "C" fn bohr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// The error document of the most recent failing call on this thread, as
/// `{"error": {"code", "message"}}` JSON, or null if no call failed yet.
/// The pointer is owned by the library and stays valid until the next
/// failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn bohr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(text) => text.as_ptr(),
        None => std::ptr::null(),
    })
}

/// Releases a string previously returned through a `char **`
/// out-parameter. Accepts null.
///
/// # Safety
/// `text` must be null or a pointer obtained from this library that has
/// not been freed before.
#[no_mangle]
pub unsafe extern "C" fn bohr_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Parses a poset document into a handle. On success `*out` owns the
/// poset; release it with `bohr_poset_free`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bohr_poset_from_json(
    text: *const c_char,
    out: *mut *mut BohrPoset,
) -> BohrStatus {
    let text = match str_arg(text, "text") {
        Ok(t) => t,
        Err(s) => return s,
    };
    match guarded(|| {
        let dto: PosetDto = decode(text, "poset")?;
        poset_from_dto(&dto)
    }) {
        Ok(poset) => box_out(BohrPoset { inner: poset }, out),
        Err(s) => s,
    }
}

/// Closes the given seed contexts (a bare array or `{"seeds": [...]}`)
/// under intersection and returns the resulting poset handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bohr_poset_build_from_seeds_json(
    text: *const c_char,
    out: *mut *mut BohrPoset,
) -> BohrStatus {
    let text = match str_arg(text, "text") {
        Ok(t) => t,
        Err(s) => return s,
    };
    match guarded(|| {
        let dto: SeedsDto = decode(text, "seeds")?;
        ContextPoset::build(&seeds_from_dto(&dto)?)
    }) {
        Ok(poset) => box_out(BohrPoset { inner: poset }, out),
        Err(s) => s,
    }
}

/// Serializes a poset handle to its canonical JSON document.
///
/// # Safety
/// `poset` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bohr_poset_to_json(
    poset: *const BohrPoset,
    out: *mut *mut c_char,
) -> BohrStatus {
    let poset = match handle_arg(poset, "poset") {
        Ok(p) => p,
        Err(s) => return s,
    };
    match guarded(|| Ok(to_pretty_string(&poset_to_dto(&poset.inner)))) {
        Ok(text) => string_out(text, out),
        Err(s) => s,
    }
}

/// Number of contexts in the poset; 0 if the handle is null.
///
/// # Safety
/// `poset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bohr_poset_len(poset: *const BohrPoset) -> usize {
    if poset.is_null() {
        return 0;
    }
    (*poset).inner.len()
}

/// Releases a poset handle. Accepts null.
///
/// # Safety
/// `poset` must be null or a pointer obtained from this library that has
/// not been freed before.
#[no_mangle]
pub unsafe extern "C" fn bohr_poset_free(poset: *mut BohrPoset) {
    if !poset.is_null() {
        drop(Box::from_raw(poset));
    }
}

/// Parses a frame-element document against the given poset. The document
/// may name its poset by label (ignored) or embed it inline (then it must
/// equal the supplied one).
///
/// # Safety
/// `poset` must be a live handle, `text` a NUL-terminated string, and
/// `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bohr_sigma_from_json(
    poset: *const BohrPoset,
    text: *const c_char,
    out: *mut *mut BohrSigma,
) -> BohrStatus {
    let poset = match handle_arg(poset, "poset") {
        Ok(p) => p,
        Err(s) => return s,
    };
    let text = match str_arg(text, "text") {
        Ok(t) => t,
        Err(s) => return s,
    };
    match guarded(|| {
        let dto: SigmaDto = decode(text, "frame element")?;
        sigma_from_dto(&dto, &poset.inner)
    }) {
        Ok(sigma) => box_out(BohrSigma { inner: sigma }, out),
        Err(s) => s,
    }
}

/// The full frame element (every atom of every context selected).
///
/// # Safety
/// `poset` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bohr_sigma_top(
    poset: *const BohrPoset,
    out: *mut *mut BohrSigma,
) -> BohrStatus {
    let poset = match handle_arg(poset, "poset") {
        Ok(p) => p,
        Err(s) => return s,
    };
    match guarded(|| Ok(SigmaOpen::top(poset.inner.clone()))) {
        Ok(sigma) => box_out(BohrSigma { inner: sigma }, out),
        Err(s) => s,
    }
}

/// The empty frame element (nothing selected anywhere).
///
/// # Safety
/// `poset` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bohr_sigma_bot(
    poset: *const BohrPoset,
    out: *mut *mut BohrSigma,
) -> BohrStatus {
    let poset = match handle_arg(poset, "poset") {
        Ok(p) => p,
        Err(s) => return s,
    };
    match guarded(|| Ok(SigmaOpen::bot(poset.inner.clone()))) {
        Ok(sigma) => box_out(BohrSigma { inner: sigma }, out),
        Err(s) => s,
    }
}

/// Serializes a frame element with its poset embedded inline, so the
/// document is self-contained.
///
/// # Safety
/// `sigma` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bohr_sigma_to_json(
    sigma: *const BohrSigma,
    out: *mut *mut c_char,
) -> BohrStatus {
    let sigma = match handle_arg(sigma, "sigma") {
        Ok(s) => s,
        Err(s) => return s,
    };
    match guarded(|| {
        let poset_ref = PosetRefDto::Inline(poset_to_dto(sigma.inner.poset()));
        Ok(to_pretty_string(&sigma_to_dto(&sigma.inner, poset_ref)))
    }) {
        Ok(text) => string_out(text, out),
        Err(s) => s,
    }
}

/// True iff the element is the full one. Null yields false.
///
/// # Safety
/// `sigma` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bohr_sigma_is_top(sigma: *const BohrSigma) -> bool {
    !sigma.is_null() && (*sigma).inner.is_top()
}

/// True iff the element is the empty one. Null yields false.
///
/// # Safety
/// `sigma` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bohr_sigma_is_bot(sigma: *const BohrSigma) -> bool {
    !sigma.is_null() && (*sigma).inner.is_bot()
}

/// Releases a frame-element handle. Accepts null.
///
/// # Safety
/// `sigma` must be null or a pointer obtained from this library that has
/// not been freed before.
#[no_mangle]
pub unsafe extern "C" fn bohr_sigma_free(sigma: *mut BohrSigma) {
    if !sigma.is_null() {
        drop(Box::from_raw(sigma));
    }
}

/// Applies a Heyting operation. `op` is one of `"meet"`, `"join"`,
/// `"implies"` (binary: `b` required), `"neg"`, `"notnot"` (unary: `b`
/// must be null). Both operands must live over the same poset.
///
/// # Safety
/// `op` must be a NUL-terminated string, `a` a live handle, `b` null or a
/// live handle, and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bohr_heyting(
    op: *const c_char,
    a: *const BohrSigma,
    b: *const BohrSigma,
    out: *mut *mut BohrSigma,
) -> BohrStatus {
    let op = match str_arg(op, "op") {
        Ok(o) => o,
        Err(s) => return s,
    };
    let a = match handle_arg(a, "a") {
        Ok(h) => h,
        Err(s) => return s,
    };
    let b = if b.is_null() { None } else { Some(&(*b).inner) };
    match guarded(|| heyting_apply(op, &a.inner, b)) {
        Ok(sigma) => box_out(BohrSigma { inner: sigma }, out),
        Err(s) => s,
    }
}

fn heyting_apply(op: &str, a: &SigmaOpen, b: Option<&SigmaOpen>) -> Result<SigmaOpen, Error> {
    match op {
        "meet" | "join" | "implies" => {
            let b = b.ok_or_else(|| {
                Error::InvalidArgument(format!("op {op:?} needs a second operand"))
            })?;
            match op {
                "meet" => a.meet(b),
                "join" => a.join(b),
                _ => a.heyting_implies(b),
            }
        }
        "neg" | "notnot" => {
            if b.is_some() {
                return Err(Error::InvalidArgument(format!(
                    "op {op:?} takes no second operand"
                )));
            }
            Ok(if op == "neg" { a.heyting_neg() } else { a.double_neg() })
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown op {other:?}: expected meet, join, implies, neg or notnot"
        ))),
    }
}

/// Pairs a state (a `{"rho": ...}` density-matrix document) with a frame
/// element: the response carries the upward-closed set of contexts where
/// the state gives the element probability one, and the exact probability
/// at every context, as `{"upper_set": [...], "mu": {...}}`.
///
/// # Safety
/// `state_text` must be a NUL-terminated string, `sigma` a live handle,
/// and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bohr_pair_json(
    state_text: *const c_char,
    sigma: *const BohrSigma,
    out: *mut *mut c_char,
) -> BohrStatus {
    let state_text = match str_arg(state_text, "state_text") {
        Ok(t) => t,
        Err(s) => return s,
    };
    let sigma = match handle_arg(sigma, "sigma") {
        Ok(s) => s,
        Err(s) => return s,
    };
    match guarded(|| {
        let dto: StateDto = decode(state_text, "state")?;
        let state = state_from_dto(&dto)?;
        let upper = pairing(&state, &sigma.inner)?;
        let mu =
            measure_component(&state, &sigma.inner, sigma.inner.poset().bottom_index())?;
        let members: Vec<usize> = upper.members().iter().copied().collect();
        let mu_json: serde_json::Map<String, Value> = mu
            .values()
            .iter()
            .map(|(d, v)| (d.to_string(), Value::String(format_rational(v))))
            .collect();
        Ok(to_pretty_string(&json!({"upper_set": members, "mu": mu_json})))
    }) {
        Ok(text) => string_out(text, out),
        Err(s) => s,
    }
}

/// Spectral data of an observable read in context `context` of the poset:
/// eigenvalues by atom, the support selected by the open, the spectral
/// projection, and the induced frame element, as
/// `{"context", "eigenvalues", "support", "projection", "transform"}`.
///
/// # Safety
/// `observable_text` and `open_text` must be NUL-terminated strings,
/// `poset` a live handle, and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bohr_gelfand_json(
    observable_text: *const c_char,
    context: usize,
    open_text: *const c_char,
    poset: *const BohrPoset,
    out: *mut *mut c_char,
) -> BohrStatus {
    let observable_text = match str_arg(observable_text, "observable_text") {
        Ok(t) => t,
        Err(s) => return s,
    };
    let open_text = match str_arg(open_text, "open_text") {
        Ok(t) => t,
        Err(s) => return s,
    };
    let poset = match handle_arg(poset, "poset") {
        Ok(p) => p,
        Err(s) => return s,
    };
    match guarded(|| {
        let matrix_dto: MatrixDto = decode(observable_text, "observable")?;
        let a = matrix_from_dto(&matrix_dto)?;
        let open_dto: OpenDto = decode(open_text, "open")?;
        let u = open_from_dto(&open_dto)?;
        let poset = &poset.inner;
        if context >= poset.len() {
            return Err(Error::NotInPoset(format!(
                "context index {context} out of range (poset has {})",
                poset.len()
            )));
        }
        let ctx = poset.context(context);
        let eigenvalues = eigenvalues_in_context(&a, ctx)?;
        let support = gelfand_support(&eigenvalues, &u);
        let selected: Vec<usize> = (0..support.len()).filter(|&i| support.get(i)).collect();
        let projection = spectral_projection(&a, ctx, &u)?;
        let transform = bohrified_transform(&a, context, context, &u, poset)?;
        let transform_dto =
            sigma_to_dto(&transform, PosetRefDto::Inline(poset_to_dto(poset)));
        let eigen_strings: Vec<String> = eigenvalues.iter().map(format_rational).collect();
        Ok(to_pretty_string(&json!({
            "context": context,
            "eigenvalues": eigen_strings,
            "support": selected,
            "projection": serde_json::to_value(matrix_to_dto(&projection))
                .expect("DTOs always serialize"),
            "transform": serde_json::to_value(&transform_dto).expect("DTOs always serialize"),
        })))
    }) {
        Ok(text) => string_out(text, out),
        Err(s) => s,
    }
}

/// Searches a ray-set document for a one-per-basis valuation. The
/// response is `{"status": "SAT", "assignment": [...]}` with one 0/1 per
/// ray, or `{"status": "UNSAT", "explored": n}` with the number of
/// decisions the exhaustive search needed.
///
/// # Safety
/// `rayset_text` must be a NUL-terminated string and `out` valid for one
/// write.
#[no_mangle]
pub unsafe extern "C" fn bohr_ks_check_json(
    rayset_text: *const c_char,
    out: *mut *mut c_char,
) -> BohrStatus {
    let rayset_text = match str_arg(rayset_text, "rayset_text") {
        Ok(t) => t,
        Err(s) => return s,
    };
    match guarded(|| {
        let dto: RaySetDto = decode(rayset_text, "ray set")?;
        let rs = rayset_from_dto(&dto)?;
        let result = valuation_search(&rs);
        let doc = match result.valuation {
            Some(v) => {
                let bits: Vec<u8> = v.assignment().iter().map(|&b| b as u8).collect();
                json!({"status": "SAT", "assignment": bits})
            }
            None => json!({"status": "UNSAT", "explored": result.explored}),
        };
        Ok(to_pretty_string(&doc))
    }) {
        Ok(text) => string_out(text, out),
        Err(s) => s,
    }
}

/// Enumerates the partitions of `n` into exactly `k` parts as a JSON
/// array of weakly decreasing part lists.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn bohr_enum_young_json(
    n: usize,
    k: usize,
    out: *mut *mut c_char,
) -> BohrStatus {
    match guarded(|| {
        let lists: Vec<Vec<usize>> =
            enumerate_young(k, n).iter().map(|p| p.parts().to_vec()).collect();
        Ok(to_pretty_string(&lists))
    }) {
        Ok(text) => string_out(text, out),
        Err(s) => s,
    }
}
