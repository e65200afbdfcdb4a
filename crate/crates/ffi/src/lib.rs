//! C ABI for the `snfc` library.
//!
//! Networks and codes are opaque handles released with their `_free`
//! function. Every call returns an [`SnfcStatus`]; on failure the message
//! is available from [`snfc_last_error_message`] on the same thread.
//! Strings handed out by the library are released with
//! [`snfc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use snfc::bounds;
use snfc::code::{CodeFile, SecureNetworkCode};
use snfc::construct::{self, ConstructOptions};
use snfc::cuts;
use snfc::error::Error;
use snfc::fixtures;
use snfc::network::Network;
use snfc::verify::{self, VerifyOptions};

/// A validated network.
pub struct SnfcNetwork(Network);

/// A secure sum code together with the network it runs on.
pub struct SnfcCode {
    net: Network,
    code: SecureNetworkCode,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnfcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    MalformedInput = 3,
    /// Cycles, misplaced sources or sinks, nodes cut off from the sink.
    InvalidNetwork = 4,
    UnknownName = 5,
    FieldError = 6,
    LinearAlgebra = 7,
    CutError = 8,
    TooLarge = 9,
    RateInfeasible = 10,
    ConstructionFailed = 11,
    ShapeMismatch = 12,
    Io = 13,
    Panic = 14,
}

impl From<&Error> for SnfcStatus {
    fn from(e: &Error) -> Self {
        use Error::*;
        match e {
            NonPrime(_) | DegreeZero | FieldTooLarge { .. } | DivideByZero | FieldMismatch | PrimeFieldInput | BadFieldString(_) => {
                SnfcStatus::FieldError
            }
            Singular | DimensionMismatch(_) | SingularB => SnfcStatus::LinearAlgebra,
            Cycle | SourceHasInEdge(_) | SinkHasOutEdge(_) | UnreachableSink(_) | ValidationFailure(_) | AllZeroFunction => {
                SnfcStatus::InvalidNetwork
            }
            MalformedInput(_) => SnfcStatus::MalformedInput,
            UnknownEdge(_) | UnknownNode(_) => SnfcStatus::UnknownName,
            TargetInU(_) | EmptyTarget | NoFeasibleCut => SnfcStatus::CutError,
            TooLarge { .. } => SnfcStatus::TooLarge,
            RateExceedsMinCut { .. } | RateInfeasible(_) => SnfcStatus::RateInfeasible,
            FieldTooSmallForMulticast { .. } | ReversalInconsistent | FieldTooSmall { .. } | ConstructionFailed => {
                SnfcStatus::ConstructionFailed
            }
            ShapeMismatch(_) | GlobalVectorMismatch(_) => SnfcStatus::ShapeMismatch,
            Io(_) => SnfcStatus::Io,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
}

struct Failure(SnfcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), format!("{}: {e}", e.code()))
    }
}

fn null(what: &str) -> Failure {
    Failure(SnfcStatus::NullArgument, format!("{what} is null"))
}

/// Runs `f`, recording failures and containing panics.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SnfcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SnfcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SnfcStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SnfcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(SnfcStatus::MalformedInput, "output contains NUL".into()))?;
    write_out(out, c.into_raw())
}

/// Parses a network from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snfc_network_from_json(json: *const c_char, out: *mut *mut SnfcNetwork) -> SnfcStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let net = Network::from_json(text)?;
        write_out(out, Box::into_raw(Box::new(SnfcNetwork(net))))
    })
}

/// One of the built-in networks: "line", "n1", "butterfly", "fig2".
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snfc_network_builtin(name: *const c_char, out: *mut *mut SnfcNetwork) -> SnfcStatus {
    guard(|| {
        let name = read_str(name, "name")?;
        let net = fixtures::network(name).ok_or_else(|| Failure(SnfcStatus::UnknownName, format!("no built-in network {name:?}")))?;
        write_out(out, Box::into_raw(Box::new(SnfcNetwork(net))))
    })
}

/// # Safety
/// `net` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn snfc_network_free(net: *mut SnfcNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// # Safety
/// `net` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snfc_network_edge_count(net: *const SnfcNetwork, out: *mut usize) -> SnfcStatus {
    guard(|| write_out(out, deref(net, "network")?.0.edge_count()))
}

/// Minimum over the sources of the source-to-sink min-cut.
///
/// # Safety
/// `net` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snfc_c_min(net: *const SnfcNetwork, out: *mut usize) -> SnfcStatus {
    guard(|| write_out(out, cuts::c_min(&deref(net, "network")?.0)))
}

/// Size of the smallest cut set C whose upstream sources are all cut off.
///
/// # Safety
/// `net` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snfc_c_min_bar(net: *const SnfcNetwork, out: *mut usize) -> SnfcStatus {
    guard(|| write_out(out, cuts::c_min_bar(&deref(net, "network")?.0)))
}

/// # Safety
/// `net` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snfc_upper_bound(net: *const SnfcNetwork, r: usize, out: *mut usize) -> SnfcStatus {
    guard(|| write_out(out, bounds::upper_bound(&deref(net, "network")?.0, r).upper))
}

/// # Safety
/// `net` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snfc_lower_bound(net: *const SnfcNetwork, r: usize, out: *mut usize) -> SnfcStatus {
    guard(|| write_out(out, bounds::lower_bound(&deref(net, "network")?.0, r)))
}

/// Full bound report as JSON. Free the string with [`snfc_string_free`].
///
/// # Safety
/// `net` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snfc_bound_json(net: *const SnfcNetwork, r: usize, out: *mut *mut c_char) -> SnfcStatus {
    guard(|| {
        let net = &deref(net, "network")?.0;
        let report = bounds::upper_bound(net, r).to_json(net);
        write_string(out, serde_json::to_string(&report).expect("report serializes"))
    })
}

/// Builds a secure code at security level `r`. `rate` 0 picks C_min;
/// `field` may be null (search over GF(2^L)) or a string like "2^4".
///
/// # Safety
/// `net` must be a live handle, `field` null or a NUL-terminated string,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snfc_construct(
    net: *const SnfcNetwork,
    r: usize,
    rate: usize,
    field: *const c_char,
    seed: u64,
    out: *mut *mut SnfcCode,
) -> SnfcStatus {
    guard(|| {
        let net = &deref(net, "network")?.0;
        let field = if field.is_null() {
            None
        } else {
            Some(snfc::gf::Field::parse(read_str(field, "field")?)?)
        };
        let opts = ConstructOptions {
            rate: (rate > 0).then_some(rate),
            field,
            seed,
            ..ConstructOptions::default()
        };
        let code = construct::construct(net, r, &opts)?;
        write_out(out, Box::into_raw(Box::new(SnfcCode { net: net.clone(), code })))
    })
}

/// Loads a code file for `net`.
///
/// # Safety
/// `net` must be a live handle, `json` a NUL-terminated string and `out` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snfc_code_from_json(net: *const SnfcNetwork, json: *const c_char, out: *mut *mut SnfcCode) -> SnfcStatus {
    guard(|| {
        let net = &deref(net, "network")?.0;
        let code = CodeFile::from_json(read_str(json, "json")?)?.to_code(net)?;
        write_out(out, Box::into_raw(Box::new(SnfcCode { net: net.clone(), code })))
    })
}

/// Serializes a code. Free the string with [`snfc_string_free`].
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn snfc_code_to_json(code: *const SnfcCode, out: *mut *mut c_char) -> SnfcStatus {
    guard(|| {
        let c = deref(code, "code")?;
        write_string(out, CodeFile::from_code(&c.code, &c.net).to_json())
    })
}

/// # Safety
/// `code` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn snfc_code_free(code: *mut SnfcCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Runs the verification checks at security level `r` and writes the JSON
/// report. With `exhaustive`, the brute-force pass runs when the state
/// count is at most `cap` (0 means the default cap).
///
/// # Safety
/// `code` must be a live handle; `out_json` and `all_pass` valid pointers
/// (either may be null to skip it).
#[no_mangle]
pub unsafe extern "C" fn snfc_verify(
    code: *const SnfcCode,
    r: usize,
    exhaustive: bool,
    cap: u64,
    all_pass: *mut bool,
    out_json: *mut *mut c_char,
) -> SnfcStatus {
    guard(|| {
        let c = deref(code, "code")?;
        let opts = VerifyOptions {
            exhaustive,
            cap: if cap == 0 { verify::DEFAULT_MAX_EXHAUSTIVE } else { cap },
            ..VerifyOptions::default()
        };
        let report = verify::verify(&c.code, &c.net, r, &opts)?;
        if !all_pass.is_null() {
            write_out(all_pass, report.all_pass())?;
        }
        if !out_json.is_null() {
            write_string(out_json, serde_json::to_string(&report.to_json(&c.net)).expect("report serializes"))?;
        }
        Ok(())
    })
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn snfc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn snfc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}
