//! C ABI over the `secure-isac` library.
//!
//! Channels are opaque handles created by one of the `isac_channel_*`
//! constructors and released with [`isac_channel_free`]. Every fallible call
//! returns an [`IsacStatus`]; on failure the message of the last error on the
//! calling thread is available through [`isac_last_error`]. Results are
//! written through caller-provided out pointers.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use secure_isac::binary::{lemma1_closed_form, lemma1_oracle, BinaryParams, Lemma1Point};
use secure_isac::channel::{binary_example_channel, ChannelSpec, InputLaw};
use secure_isac::degraded::degradedness_report;
use secure_isac::estimation::minimal_distortions;
use secure_isac::pmf::binary_entropy;
use secure_isac::regions::{theorem_bounds, Theorem};
use secure_isac::simulate::simulate;
use secure_isac::spec_file::{load_spec, parse_spec, LoadedSpec};
use secure_isac::IsacError;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsacStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    DomainError = 4,
    InvalidPmf = 5,
    AlphabetMismatch = 6,
    CardinalityExceeded = 7,
    SolverFailure = 8,
    EmptySweep = 9,
    InvalidArgument = 10,
    IoError = 11,
    Panic = 12,
}

/// A channel specification together with its input law.
pub struct IsacChannel {
    channel: ChannelSpec,
    law: InputLaw,
}

/// Bounds of one of the four modes for the handle's law. `r1_max` is NaN
/// under full secrecy (modes 3 and 4).
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct IsacBounds {
    pub r1_max: f64,
    pub r2_prime: f64,
    pub r_sec: f64,
    pub sum_cap: f64,
    pub rate: f64,
    pub d1_min: f64,
    pub d2_min: f64,
    pub degraded: bool,
    pub degraded_residual: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct IsacDegradedness {
    pub physical: bool,
    pub physical_residual: f64,
    pub reverse: bool,
    pub reverse_residual: f64,
    pub stochastic: bool,
    pub stochastic_residual: f64,
}

/// Rate bound, distortions and the five entropy terms of the binary example:
/// H(S1|Y2,S2), H(Y1|S1,Y2,S2), H(S1|Y1,Y2,S2,X,A), H(X,A), H(X,A|Y1,S1).
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct IsacLemma1 {
    pub r_max: f64,
    pub d1_min: f64,
    pub d2_min: f64,
    pub terms: [f64; 5],
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct IsacSimulation {
    pub d1_analytic: f64,
    pub d1_empirical: f64,
    pub d2_analytic: f64,
    pub d2_empirical: f64,
    pub l1_gap: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &IsacError) -> IsacStatus {
    match err {
        IsacError::UnknownVariable(_)
        | IsacError::OverlappingSets(_)
        | IsacError::DuplicateVariable(_)
        | IsacError::InvalidArgument(_) => IsacStatus::InvalidArgument,
        IsacError::InvalidPmf(_) => IsacStatus::InvalidPmf,
        IsacError::DomainError { .. } => IsacStatus::DomainError,
        IsacError::AlphabetMismatch(_) => IsacStatus::AlphabetMismatch,
        IsacError::CardinalityExceeded { .. } => IsacStatus::CardinalityExceeded,
        IsacError::SolverFailure(_) => IsacStatus::SolverFailure,
        IsacError::EmptySweep => IsacStatus::EmptySweep,
        IsacError::Parse { .. } => IsacStatus::ParseError,
        IsacError::Io { .. } => IsacStatus::IoError,
    }
}

/// Runs `f`, recording errors and panics for [`isac_last_error`].
fn guard(f: impl FnOnce() -> Result<(), (IsacStatus, String)>) -> IsacStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            IsacStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside secure-isac".into());
            IsacStatus::Panic
        }
    }
}

fn lib<T>(r: secure_isac::Result<T>) -> Result<T, (IsacStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(name: &str) -> (IsacStatus, String) {
    (IsacStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, (IsacStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (IsacStatus::InvalidUtf8, format!("`{name}` is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), (IsacStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn channel_ref<'a>(ch: *const IsacChannel) -> Result<&'a IsacChannel, (IsacStatus, String)> {
    ch.as_ref().ok_or_else(|| null("channel"))
}

fn into_handle(spec: LoadedSpec) -> *mut IsacChannel {
    Box::into_raw(Box::new(IsacChannel {
        channel: spec.channel,
        law: spec.law,
    }))
}

/// Static description of a status code (taken as a plain integer so any
/// value is safe to pass). Never null.
#[no_mangle]
pub extern "C" fn isac_status_string(status: i32) -> *const c_char {
    let s: &'static [u8] = match status {
        0 => b"ok\0",
        1 => b"null pointer argument\0",
        2 => b"string argument is not valid UTF-8\0",
        3 => b"specification parse error\0",
        4 => b"parameter outside its domain\0",
        5 => b"invalid probability mass function\0",
        6 => b"alphabet mismatch\0",
        7 => b"auxiliary alphabet too large\0",
        8 => b"linear program solver failure\0",
        9 => b"sweep yields no input laws\0",
        10 => b"invalid argument\0",
        11 => b"I/O error\0",
        12 => b"internal panic\0",
        _ => b"unknown status\0",
    };
    s.as_ptr().cast()
}

/// Copies the last error message of the calling thread into `buf` (NUL
/// terminated, truncated to `len` bytes) and returns the full message length
/// excluding the terminator. Passing a null `buf` only queries the length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn isac_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Parses a TOML channel specification.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn isac_channel_from_toml(text: *const c_char, out: *mut *mut IsacChannel) -> IsacStatus {
    guard(|| {
        let text = str_arg(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = lib(parse_spec(text))?;
        write_out(out, into_handle(spec), "out")
    })
}

/// Loads a TOML channel specification file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn isac_channel_from_file(path: *const c_char, out: *mut *mut IsacChannel) -> IsacStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = lib(load_spec(Path::new(path)))?;
        write_out(out, into_handle(spec), "out")
    })
}

/// The multiplicative-Bernoulli example channel with its input law.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn isac_channel_binary_example(
    lambda: f64,
    alpha: f64,
    p: f64,
    q: f64,
    out: *mut *mut IsacChannel,
) -> IsacStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let bp = lib(BinaryParams::new(lambda, alpha, p, q))?;
        let (channel, law) = lib(binary_example_channel(&bp))?;
        write_out(out, Box::into_raw(Box::new(IsacChannel { channel, law })), "out")
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `ch` must be null or a handle from an `isac_channel_*` constructor that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn isac_channel_free(ch: *mut IsacChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// Evaluates mode `theorem` (1-4) for the handle's law.
///
/// # Safety
/// `ch` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn isac_theorem_bounds(
    ch: *const IsacChannel,
    theorem: u8,
    out: *mut IsacBounds,
) -> IsacStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        let t = lib(Theorem::from_number(theorem))?;
        let b = lib(theorem_bounds(t, &ch.law, &ch.channel))?;
        let bounds = IsacBounds {
            r1_max: b.r1_max.unwrap_or(f64::NAN),
            r2_prime: b.r2_prime,
            r_sec: b.r_sec,
            sum_cap: b.sum_cap,
            rate: b.rate,
            d1_min: b.d1_min,
            d2_min: b.d2_min,
            degraded: b.degraded.holds,
            degraded_residual: b.degraded.residual,
        };
        write_out(out, bounds, "out")
    })
}

/// Degradedness checks on the support of the handle's law, or on every input
/// pair when `strict`.
///
/// # Safety
/// `ch` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn isac_check_degraded(
    ch: *const IsacChannel,
    strict: bool,
    tol: f64,
    out: *mut IsacDegradedness,
) -> IsacStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        let r = lib(degradedness_report(&ch.channel, &ch.law, tol, strict))?;
        let d = IsacDegradedness {
            physical: r.physically_degraded.holds,
            physical_residual: r.physically_degraded.residual,
            reverse: r.reversely_degraded.holds,
            reverse_residual: r.reversely_degraded.residual,
            stochastic: r.stochastically_degraded.holds,
            stochastic_residual: r.stochastically_degraded.residual,
        };
        write_out(out, d, "out")
    })
}

/// Distortions of the optimal per-letter estimators.
///
/// # Safety
/// `ch` must be a live handle; `d1` and `d2` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn isac_minimal_distortions(
    ch: *const IsacChannel,
    d1: *mut f64,
    d2: *mut f64,
) -> IsacStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        if d1.is_null() || d2.is_null() {
            return Err(null("d1/d2"));
        }
        let (_, _, a, b) = lib(minimal_distortions(&ch.channel, &ch.law))?;
        write_out(d1, a, "d1")?;
        write_out(d2, b, "d2")
    })
}

fn lemma1_out(p: Lemma1Point) -> IsacLemma1 {
    IsacLemma1 {
        r_max: p.r_max,
        d1_min: p.d1_min,
        d2_min: p.d2_min,
        terms: p.terms.as_array(),
    }
}

/// Closed-form rate bound and distortions of the binary example.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn isac_lemma1_closed_form(
    lambda: f64,
    alpha: f64,
    p: f64,
    q: f64,
    out: *mut IsacLemma1,
) -> IsacStatus {
    guard(|| {
        let bp = lib(BinaryParams::new(lambda, alpha, p, q))?;
        write_out(out, lemma1_out(lib(lemma1_closed_form(&bp))?), "out")
    })
}

/// The same quantities from the generic entropy and estimator engine.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn isac_lemma1_oracle(
    lambda: f64,
    alpha: f64,
    p: f64,
    q: f64,
    out: *mut IsacLemma1,
) -> IsacStatus {
    guard(|| {
        let bp = lib(BinaryParams::new(lambda, alpha, p, q))?;
        write_out(out, lemma1_out(lib(lemma1_oracle(&bp))?), "out")
    })
}

/// Monte Carlo comparison of empirical and analytic distortions with `n`
/// draws; deterministic in `seed`.
///
/// # Safety
/// `ch` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn isac_simulate(
    ch: *const IsacChannel,
    n: u64,
    seed: u64,
    out: *mut IsacSimulation,
) -> IsacStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        let r = lib(simulate(&ch.channel, &ch.law, n, seed))?;
        let s = IsacSimulation {
            d1_analytic: r.d1_analytic,
            d1_empirical: r.d1_empirical,
            d2_analytic: r.d2_analytic,
            d2_empirical: r.d2_empirical,
            l1_gap: r.l1_gap,
        };
        write_out(out, s, "out")
    })
}

/// Binary entropy in bits of `x` in [0, 1].
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn isac_binary_entropy(x: f64, out: *mut f64) -> IsacStatus {
    guard(|| write_out(out, lib(binary_entropy(x))?, "out"))
}
