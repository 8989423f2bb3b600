//! C interface to `gca-core`.
//!
//! Seeds cross the boundary as opaque `GcaSeed` handles. Every function
//! returns a [`GcaStatus`]; on failure a message is available from
//! [`gca_last_error`] until the next call on the same thread. Strings
//! returned through out-parameters are owned by the caller and must be
//! released with [`gca_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gca_core::adjoin::{tau_tilde, AdjoinMode};
use gca_core::fixtures;
use gca_core::io::{parse_seed, write_seed};
use gca_core::seed::GeneralizedSeed;
use gca_core::unfold::build;
use gca_core::verify::{run_on_seed, Sequences, SuiteConfig, Target};

/// An immutable generalized seed.
pub struct GcaSeed(GeneralizedSeed);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    OutOfRange = 4,
    Computation = 5,
    Mismatch = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcaAdjoinMode {
    Total = 0,
    Lcm = 1,
}

impl From<GcaAdjoinMode> for AdjoinMode {
    fn from(m: GcaAdjoinMode) -> Self {
        match m {
            GcaAdjoinMode::Total => AdjoinMode::Total,
            GcaAdjoinMode::Lcm => AdjoinMode::Lcm,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Error(GcaStatus, String);

fn fail(status: GcaStatus, e: impl ToString) -> Error {
    Error(status, e.to_string())
}

fn set_error(msg: Option<String>) {
    let msg = msg.map(|m| CString::new(m.replace('\0', " ")).expect("interior nul removed"));
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), Error>) -> GcaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            GcaStatus::Ok
        }
        Ok(Err(Error(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(_) => {
            set_error(Some("internal panic".into()));
            GcaStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(fail(GcaStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(p).to_str().map_err(|e| fail(GcaStatus::InvalidUtf8, e))
}

unsafe fn seed<'a>(p: *const GcaSeed) -> Result<&'a GeneralizedSeed, Error> {
    p.as_ref().map(|s| &s.0).ok_or_else(|| fail(GcaStatus::NullPointer, "seed handle is null"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Error> {
    if out.is_null() {
        return Err(fail(GcaStatus::NullPointer, "output pointer is null"));
    }
    out.write(v);
    Ok(())
}

unsafe fn put_seed(out: *mut *mut GcaSeed, s: GeneralizedSeed) -> Result<(), Error> {
    put(out, Box::into_raw(Box::new(GcaSeed(s))))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Error> {
    let c = CString::new(s).map_err(|e| fail(GcaStatus::Computation, e))?;
    put(out, c.into_raw())
}

fn index(k: usize, n: usize) -> Result<usize, Error> {
    if k < n {
        Ok(k)
    } else {
        Err(fail(GcaStatus::OutOfRange, format!("index {k} out of range 0..{n}")))
    }
}

/// The message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn gca_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loads a bundled fixture by name (`FIX-A`, `FIX-B`, `FIX-C`).
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gca_seed_fixture(name: *const c_char, out: *mut *mut GcaSeed) -> GcaStatus {
    guard(|| {
        let name = text(name)?;
        let s = fixtures::fixture(name).ok_or_else(|| fail(GcaStatus::Parse, format!("unknown fixture `{name}`")))?;
        put_seed(out, s)
    })
}

/// Parses a seed from its text form.
///
/// # Safety
/// `source` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gca_seed_parse(source: *const c_char, out: *mut *mut GcaSeed) -> GcaStatus {
    guard(|| {
        let s = parse_seed(text(source)?).map_err(|e| fail(GcaStatus::Parse, e))?;
        put_seed(out, s)
    })
}

/// Releases a seed. Null is ignored.
///
/// # Safety
/// `seed` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gca_seed_free(seed: *mut GcaSeed) {
    if !seed.is_null() {
        drop(Box::from_raw(seed));
    }
}

/// Number of mutable indices.
///
/// # Safety
/// `seed` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gca_seed_rank(seed: *const GcaSeed, out: *mut usize) -> GcaStatus {
    guard(|| put(out, self::seed(seed)?.rank()))
}

/// Mutates at the zero-based index `k` into a new handle.
///
/// # Safety
/// `seed` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gca_seed_mutate(seed: *const GcaSeed, k: usize, out: *mut *mut GcaSeed) -> GcaStatus {
    guard(|| {
        let s = self::seed(seed)?;
        let k = index(k, s.rank())?;
        let t = s.mutate(k).map_err(|e| fail(GcaStatus::Computation, e))?;
        put_seed(out, t)
    })
}

/// The canonical text form of the seed.
///
/// # Safety
/// `seed` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gca_seed_to_text(seed: *const GcaSeed, out: *mut *mut c_char) -> GcaStatus {
    guard(|| put_string(out, write_seed(self::seed(seed)?)))
}

/// Cluster variable `k` (zero-based) in canonical text form.
///
/// # Safety
/// `seed` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gca_seed_cluster_variable(
    seed: *const GcaSeed,
    k: usize,
    out: *mut *mut c_char,
) -> GcaStatus {
    guard(|| {
        let s = self::seed(seed)?;
        let k = index(k, s.rank())?;
        put_string(out, s.cluster()[k].to_string())
    })
}

/// Exchange matrix entry `(i, j)`.
///
/// # Safety
/// `seed` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gca_seed_matrix_entry(seed: *const GcaSeed, i: usize, j: usize, out: *mut i64) -> GcaStatus {
    guard(|| {
        let b = self::seed(seed)?.matrix();
        index(i, b.n())?;
        index(j, b.cols())?;
        put(out, b.get(i, j))
    })
}

/// The unfolded matrix with its group header, as text.
///
/// # Safety
/// `seed` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gca_seed_unfold(seed: *const GcaSeed, mode: GcaAdjoinMode, out: *mut *mut c_char) -> GcaStatus {
    guard(|| {
        let s = self::seed(seed)?;
        let f = build(s.matrix(), s.divisors(), mode.into()).map_err(|e| fail(GcaStatus::Computation, e))?;
        put_string(out, f.to_string())
    })
}

/// Adjoins roots of every frozen variable into a new handle.
///
/// # Safety
/// `seed` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gca_seed_adjoin(seed: *const GcaSeed, mode: GcaAdjoinMode, out: *mut *mut GcaSeed) -> GcaStatus {
    guard(|| {
        let a = tau_tilde(self::seed(seed)?, mode.into()).map_err(|e| fail(GcaStatus::Computation, e))?;
        put_seed(out, a.seed().clone())
    })
}

/// Runs a verification target (`hadamard`, `laurent`, ...) over all
/// sequences of length `depth` and stores the number of failing cases.
/// Returns `GCA_STATUS_MISMATCH` when that number is positive.
///
/// # Safety
/// `seed` must be a live handle, `target` a nul-terminated string and
/// `mismatches` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gca_verify(
    seed: *const GcaSeed,
    target: *const c_char,
    depth: usize,
    mode: GcaAdjoinMode,
    mismatches: *mut usize,
) -> GcaStatus {
    guard(|| {
        let s = self::seed(seed)?;
        let target: Target = text(target)?.parse().map_err(|e| fail(GcaStatus::Parse, e))?;
        let cfg = SuiteConfig {
            target,
            depth,
            sequences: Sequences::Exhaustive,
            rng_seed: 0,
            mode: mode.into(),
        };
        let reports = run_on_seed(s, "ffi", &cfg);
        let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
        put(mismatches, failed.len())?;
        match failed.first() {
            None => Ok(()),
            Some(r) => Err(fail(GcaStatus::Mismatch, r)),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gca_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
