//! C interface to `pnpersist`.
//!
//! Nets live behind the opaque [`PnNet`] handle. Every fallible function
//! returns a [`PnStatus`]; on failure the message is available from
//! [`pn_last_error`] on the same thread until the next call. Strings handed out
//! by the library are NUL-terminated UTF-8 and must be released with
//! [`pn_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pnpersist::format::{parse_net, print_net};
use pnpersist::persistence::{classic_net, classify, elk_net, min_re, Classification};
use pnpersist::statespace::build_coverability_graph;
use pnpersist::{Computed, Error, Marking, Net, OracleConfig, PersistenceKind, ReachOracle, Verdict};

/// Opaque handle to a parsed net.
pub struct PnNet(Net);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnknownName = 4,
    Unsupported = 5,
    InvalidArgument = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnVerdict {
    Holds = 0,
    Violated = 1,
    Unknown = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PnProperty {
    /// Enabled stays enabled.
    EE = 0,
    /// Live stays live.
    LL = 1,
    /// Enabled stays live.
    EL = 2,
    /// Enabled fires again within `k` further steps.
    ELK = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(PnStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse { .. } | Error::InvalidVector(_) => PnStatus::Parse,
            Error::UnknownTransition(_) | Error::UnknownPlace(_) | Error::TransitionIndex(_) => PnStatus::UnknownName,
            Error::Unsupported(_) => PnStatus::Unsupported,
            Error::SameTransition(_)
            | Error::InvalidArgument(_)
            | Error::Dimension { .. }
            | Error::NotEnabled { .. }
            | Error::WordNotFirable { .. }
            | Error::DuplicateIdentifier(_) => PnStatus::InvalidArgument,
            Error::Inexact(_) | Error::OracleContract(_) | Error::IterationCap { .. } => PnStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: Option<String>) {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = message.map(|m| CString::new(m.replace('\0', " ")).expect("NULs replaced"));
    });
}

/// Runs `f`, recording its error and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PnStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let message = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".to_string());
        Err(Failure(PnStatus::Internal, message))
    });
    match outcome {
        Ok(()) => {
            set_last_error(None);
            PnStatus::Ok
        }
        Err(Failure(status, message)) => {
            set_last_error(Some(message));
            status
        }
    }
}

unsafe fn net_ref<'a>(net: *const PnNet) -> Result<&'a Net, Failure> {
    net.as_ref()
        .map(|n| &n.0)
        .ok_or_else(|| Failure(PnStatus::NullPointer, "net handle is null".into()))
}

unsafe fn out_ref<'a, T>(out: *mut T) -> Result<&'a mut T, Failure> {
    out.as_mut()
        .ok_or_else(|| Failure(PnStatus::NullPointer, "output pointer is null".into()))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(PnStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(PnStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn oracle(net: &Net, budget: usize) -> Result<ReachOracle<'_>, Failure> {
    Ok(ReachOracle::new(net, OracleConfig::with_budget(budget))?)
}

fn verdict<H, V>(v: &Verdict<H, V>) -> PnVerdict {
    match v {
        Verdict::Holds(_) => PnVerdict::Holds,
        Verdict::Violated(_) => PnVerdict::Violated,
        Verdict::Unknown(_) => PnVerdict::Unknown,
    }
}

fn give_string(s: String, out: &mut *mut c_char) {
    *out = CString::new(s).expect("library output has no NULs").into_raw();
}

/// Message of the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn pn_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn pn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a net from its text form into a new handle owned by the caller.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pn_net_parse(text: *const c_char, out: *mut *mut PnNet) -> PnStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let net = parse_net(str_arg(text, "text")?)?;
        *out = Box::into_raw(Box::new(PnNet(net)));
        Ok(())
    })
}

/// Releases a handle from [`pn_net_parse`]. Null is ignored.
///
/// # Safety
/// `net` must come from [`pn_net_parse`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pn_net_free(net: *mut PnNet) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Number of places, or 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pn_net_place_count(net: *const PnNet) -> usize {
    net.as_ref().map_or(0, |n| n.0.place_count())
}

/// Number of transitions, or 0 for a null handle.
///
/// # Safety
/// `net` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pn_net_transition_count(net: *const PnNet) -> usize {
    net.as_ref().map_or(0, |n| n.0.transition_count())
}

/// The net in its text form.
///
/// # Safety
/// `net` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pn_net_to_text(net: *const PnNet, out: *mut *mut c_char) -> PnStatus {
    guard(|| {
        let net = net_ref(net)?;
        give_string(print_net(net), out_ref(out)?);
        Ok(())
    })
}

/// Whether every place of the net is bounded.
///
/// # Safety
/// `net` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pn_net_is_bounded(net: *const PnNet, out: *mut bool) -> PnStatus {
    guard(|| {
        let net = net_ref(net)?;
        *out_ref(out)? = build_coverability_graph(net, net.initial())?.is_bounded();
        Ok(())
    })
}

/// Coverability graph of the net in DOT format.
///
/// # Safety
/// `net` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pn_net_coverability_dot(net: *const PnNet, out: *mut *mut c_char) -> PnStatus {
    guard(|| {
        let net = net_ref(net)?;
        let dot = build_coverability_graph(net, net.initial())?.to_dot(net);
        give_string(dot, out_ref(out)?);
        Ok(())
    })
}

/// Decides a persistence property of the whole net. `k` is read only for
/// [`PnProperty::ELK`]; `budget` caps the markings stored by the reachability
/// oracle.
///
/// # Safety
/// `net` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pn_net_check(
    net: *const PnNet,
    property: PnProperty,
    k: u32,
    budget: usize,
    out: *mut PnVerdict,
) -> PnStatus {
    guard(|| {
        let net = net_ref(net)?;
        let out = out_ref(out)?;
        let oracle = oracle(net, budget)?;
        let v = match property {
            PnProperty::ELK => elk_net(&oracle, k)?,
            PnProperty::EE => classic_net(&oracle, PersistenceKind::EE)?,
            PnProperty::LL => classic_net(&oracle, PersistenceKind::LL)?,
            PnProperty::EL => classic_net(&oracle, PersistenceKind::EL)?,
        };
        *out = verdict(&v);
        Ok(())
    })
}

/// Least `k` for which the net is e/l-k-persistent. `k_out` is written only
/// when the verdict is [`PnVerdict::Holds`]; `Violated` means some transition
/// can kill another.
///
/// # Safety
/// `net` must be a live handle, `out` and `k_out` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pn_net_classify(
    net: *const PnNet,
    budget: usize,
    out: *mut PnVerdict,
    k_out: *mut u32,
) -> PnStatus {
    guard(|| {
        let net = net_ref(net)?;
        let (out, k_out) = (out_ref(out)?, out_ref(k_out)?);
        let report = classify(&oracle(net, budget)?)?;
        *out = match report.classification {
            Classification::Elk(k) => {
                *k_out = k;
                PnVerdict::Holds
            }
            Classification::NotEl(_) => PnVerdict::Violated,
            Classification::Unknown(_) => PnVerdict::Unknown,
        };
        Ok(())
    })
}

/// Minimal reachable markings enabling both named transitions, as a JSON array
/// of arrays of token counts. `out` is set to null when the budget runs out
/// before the set is known.
///
/// # Safety
/// `net` must be a live handle, `a` and `b` NUL-terminated strings and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pn_net_min_re_json(
    net: *const PnNet,
    a: *const c_char,
    b: *const c_char,
    budget: usize,
    out: *mut *mut c_char,
) -> PnStatus {
    guard(|| {
        let net = net_ref(net)?;
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let a = net.transition(str_arg(a, "a")?)?;
        let b = net.transition(str_arg(b, "b")?)?;
        if let Computed::Done(min) = min_re(&oracle(net, budget)?, a, b)? {
            let rows: Vec<Vec<u32>> = min.into_iter().map(Marking::into_inner).collect();
            give_string(serde_json::to_string(&rows).expect("plain data serializes"), out);
        }
        Ok(())
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_are_classified() {
        let cases = [
            (
                Error::Parse {
                    line: 1,
                    column: 1,
                    message: "x".into(),
                },
                PnStatus::Parse,
            ),
            (Error::UnknownTransition("t".into()), PnStatus::UnknownName),
            (Error::Unsupported("x"), PnStatus::Unsupported),
            (Error::SameTransition("a".into()), PnStatus::InvalidArgument),
        ];
        for (e, status) in cases {
            assert_eq!(Failure::from(e).0, status);
        }
    }

    #[test]
    fn panics_become_internal_errors() {
        let status = guard(|| panic!("boom"));
        assert_eq!(status, PnStatus::Internal);
        let message = unsafe { CStr::from_ptr(pn_last_error()) };
        assert_eq!(message.to_str().unwrap(), "boom");
    }
}
