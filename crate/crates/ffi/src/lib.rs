//! C ABI for the impurity-chain solver.
//!
//! A model is an opaque handle created with [`ic_model_new`] and released with
//! [`ic_model_free`]. Every fallible call returns an [`IcStatus`]; on failure the
//! message is available from [`ic_last_error_message`] on the same thread. Results
//! are written through out-pointers, which are left untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use impurity_chain::measures::{qfi_field_derivative, MeasureBundle};
use impurity_chain::model::maximal_entanglement_field;
use impurity_chain::teleport::average_fidelity;
use impurity_chain::xfer::{dimer_density_matrix, finite_n_density_matrix};
use impurity_chain::{Error, ModelParams, XState};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    InvalidN = 3,
    UnknownKey = 4,
    Numerical = 5,
    NotFound = 6,
    Panic = 7,
}

/// Two-site X-shaped density matrix: diagonal `r11..r44`, coherence `r23 = r32`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IcXState {
    pub r11: f64,
    pub r22: f64,
    pub r33: f64,
    pub r44: f64,
    pub r23: f64,
}

impl From<XState> for IcXState {
    fn from(s: XState) -> Self {
        Self { r11: s.r11, r22: s.r22, r33: s.r33, r44: s.r44, r23: s.r23 }
    }
}

/// Quantum resources of one dimer state.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IcMeasures {
    pub concurrence: f64,
    pub coherence_l1: f64,
    pub sxsx: f64,
    pub szsz: f64,
    pub qfi: f64,
    pub average_fidelity: f64,
}

/// Opaque model handle.
pub struct IcModel {
    params: ModelParams,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn record(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> IcStatus {
    match e {
        Error::InvalidParams(_) | Error::Config(_) => IcStatus::InvalidParams,
        Error::InvalidN(_) | Error::TooLarge(_) => IcStatus::InvalidN,
        Error::NotFound(_) => IcStatus::NotFound,
        Error::AtPoint { source, .. } => status_of(source),
        _ => IcStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), IcStatus>) -> IcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IcStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            record("internal panic".into());
            IcStatus::Panic
        }
    }
}

fn fail(e: Error) -> IcStatus {
    let s = status_of(&e);
    record(e.to_string());
    s
}

unsafe fn model<'a>(m: *const IcModel) -> Result<&'a ModelParams, IcStatus> {
    match m.as_ref() {
        Some(m) => Ok(&m.params),
        None => {
            record("null model handle".into());
            Err(IcStatus::NullPointer)
        }
    }
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, IcStatus> {
    match p.as_mut() {
        Some(p) => Ok(p),
        None => {
            record("null output pointer".into());
            Err(IcStatus::NullPointer)
        }
    }
}

unsafe fn key<'a>(k: *const c_char) -> Result<&'a str, IcStatus> {
    if k.is_null() {
        record("null parameter name".into());
        return Err(IcStatus::NullPointer);
    }
    CStr::from_ptr(k).to_str().map_err(|_| {
        record("parameter name is not UTF-8".into());
        IcStatus::UnknownKey
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn ic_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// New model with the Fe-Mn-Cu couplings and g-factors, no impurity, B = 0, T = 1.
#[no_mangle]
pub extern "C" fn ic_model_new() -> *mut IcModel {
    Box::into_raw(Box::new(IcModel { params: ModelParams::fe_mn_cu() }))
}

/// Releases a handle from [`ic_model_new`]. Null is ignored.
///
/// # Safety
/// `m` must be null or a live handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ic_model_free(m: *mut IcModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Sets a parameter by name: `J`, `Delta`, `J0`, `g1`, `g2`, `g3`, `gamma`, `B`, `T`.
///
/// # Safety
/// `m` must be a live handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ic_model_set(m: *mut IcModel, name: *const c_char, value: f64) -> IcStatus {
    guard(|| {
        let m = out(m)?;
        let k = key(name)?;
        m.params.set(k, value).map_err(|e| {
            record(e.to_string());
            IcStatus::UnknownKey
        })
    })
}

/// Reads a parameter by name.
///
/// # Safety
/// `m` must be a live handle, `name` a NUL-terminated string, `value` writable.
#[no_mangle]
pub unsafe extern "C" fn ic_model_get(m: *const IcModel, name: *const c_char, value: *mut f64) -> IcStatus {
    guard(|| {
        let p = model(m)?;
        let k = key(name)?;
        let v = out(value)?;
        *v = p.get(k).ok_or_else(|| {
            record(format!("unknown parameter `{k}`"));
            IcStatus::UnknownKey
        })?;
        Ok(())
    })
}

/// Reduced density matrix of the impurity dimer (or of a host dimer of the uniform
/// chain when `impurity` is false) in the thermodynamic limit.
///
/// # Safety
/// `m` must be a live handle and `state` writable.
#[no_mangle]
pub unsafe extern "C" fn ic_density_matrix(m: *const IcModel, impurity: bool, state: *mut IcXState) -> IcStatus {
    guard(|| {
        let p = model(m)?;
        let o = out(state)?;
        *o = dimer_density_matrix(p, impurity).map_err(fail)?.into();
        Ok(())
    })
}

/// Impurity-dimer density matrix of a closed ring of `n >= 2` cells.
///
/// # Safety
/// `m` must be a live handle and `state` writable.
#[no_mangle]
pub unsafe extern "C" fn ic_finite_density_matrix(m: *const IcModel, n: usize, state: *mut IcXState) -> IcStatus {
    guard(|| {
        let p = model(m)?;
        let o = out(state)?;
        *o = finite_n_density_matrix(p, n).map_err(fail)?.into();
        Ok(())
    })
}

/// Concurrence, l1 coherence, correlators, QFI and average teleportation fidelity.
///
/// # Safety
/// `m` must be a live handle and `measures` writable.
#[no_mangle]
pub unsafe extern "C" fn ic_measures(m: *const IcModel, impurity: bool, measures: *mut IcMeasures) -> IcStatus {
    guard(|| {
        let p = model(m)?;
        let o = out(measures)?;
        let st = dimer_density_matrix(p, impurity).map_err(fail)?;
        let b = MeasureBundle::of(&st);
        *o = IcMeasures {
            concurrence: b.concurrence,
            coherence_l1: b.coherence_l1,
            sxsx: b.sxsx,
            szsz: b.szsz,
            qfi: b.qfi,
            average_fidelity: average_fidelity(&st),
        };
        Ok(())
    })
}

/// Central-difference `dF/dB` of the QFI with field step `step`.
///
/// # Safety
/// `m` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn ic_qfi_field_derivative(
    m: *const IcModel,
    impurity: bool,
    step: f64,
    value: *mut f64,
) -> IcStatus {
    guard(|| {
        let p = model(m)?;
        let o = out(value)?;
        *o = qfi_field_derivative(p, step, impurity).map_err(fail)?;
        Ok(())
    })
}

/// Field at which the impurity dimer's mixing resonance makes it maximally entangled.
///
/// # Safety
/// `m` must be a live handle and `value` writable.
#[no_mangle]
pub unsafe extern "C" fn ic_maximal_entanglement_field(m: *const IcModel, value: *mut f64) -> IcStatus {
    guard(|| {
        let p = model(m)?;
        let o = out(value)?;
        let b = maximal_entanglement_field(p);
        if !b.is_finite() {
            record("no finite resonance field for these parameters".into());
            return Err(IcStatus::NotFound);
        }
        *o = b;
        Ok(())
    })
}
