use std::ffi::CStr;
use std::ptr;

use impurity_chain::xfer::{dimer_density_matrix, finite_n_density_matrix};
use impurity_chain::ModelParams;
use impurity_chain_ffi::*;

struct Model(*mut IcModel);

impl Model {
    fn new() -> Self {
        Model(ic_model_new())
    }

    fn set(&self, k: &CStr, v: f64) {
        assert_eq!(unsafe { ic_model_set(self.0, k.as_ptr(), v) }, IcStatus::Ok);
    }
}

impl Drop for Model {
    fn drop(&mut self) {
        unsafe { ic_model_free(self.0) }
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ic_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn density_matrix_matches_core() {
    let m = Model::new();
    m.set(c"gamma", -0.8);
    m.set(c"B", 1.0);
    m.set(c"T", 0.2);
    m.set(c"Delta", 0.5);
    let p = ModelParams::fe_mn_cu().with_gamma(-0.8).with_field(1.0).with_temperature(0.2).with_delta(0.5);
    let mut s = IcXState::default();
    assert_eq!(unsafe { ic_density_matrix(m.0, true, &mut s) }, IcStatus::Ok);
    assert_eq!(s, dimer_density_matrix(&p, true).unwrap().into());
    assert_eq!(unsafe { ic_finite_density_matrix(m.0, 8, &mut s) }, IcStatus::Ok);
    assert_eq!(s, finite_n_density_matrix(&p, 8).unwrap().into());
}

#[test]
fn parameters_round_trip_by_name() {
    let m = Model::new();
    m.set(c"j0", 0.7);
    let mut v = 0.0;
    assert_eq!(unsafe { ic_model_get(m.0, c"J0".as_ptr(), &mut v) }, IcStatus::Ok);
    assert_eq!(v, 0.7);
    assert_eq!(unsafe { ic_model_set(m.0, c"mu".as_ptr(), 1.0) }, IcStatus::UnknownKey);
    assert!(last_error().contains("mu"));
    assert_eq!(unsafe { ic_model_get(m.0, c"mu".as_ptr(), &mut v) }, IcStatus::UnknownKey);
}

#[test]
fn measures_at_the_resonance() {
    let m = Model::new();
    m.set(c"gamma", -0.8);
    m.set(c"T", 0.01);
    m.set(c"Delta", 0.5);
    let mut b = 0.0;
    assert_eq!(unsafe { ic_maximal_entanglement_field(m.0, &mut b) }, IcStatus::Ok);
    assert!((b - 1.0 / (3.9 * 0.2)).abs() < 1e-12);
    m.set(c"B", b);
    let mut out = IcMeasures::default();
    assert_eq!(unsafe { ic_measures(m.0, true, &mut out) }, IcStatus::Ok);
    assert!(out.concurrence > 0.99);
    assert!(out.average_fidelity > 0.99);
    let mut d = f64::NAN;
    assert_eq!(unsafe { ic_qfi_field_derivative(m.0, true, 1e-3, &mut d) }, IcStatus::Ok);
    assert!(d.is_finite());
}

#[test]
fn errors_map_to_codes() {
    let m = Model::new();
    let mut s = IcXState { r11: 9.0, ..Default::default() };
    assert_eq!(unsafe { ic_finite_density_matrix(m.0, 1, &mut s) }, IcStatus::InvalidN);
    assert_eq!(s.r11, 9.0);
    m.set(c"T", -1.0);
    assert_eq!(unsafe { ic_density_matrix(m.0, true, &mut s) }, IcStatus::InvalidParams);
    assert!(!last_error().is_empty());
    m.set(c"T", 1.0);
    m.set(c"gamma", -1.0);
    let mut b = 0.0;
    assert_eq!(unsafe { ic_maximal_entanglement_field(m.0, &mut b) }, IcStatus::NotFound);
}

#[test]
fn null_pointers_are_rejected() {
    let mut s = IcXState::default();
    assert_eq!(unsafe { ic_density_matrix(ptr::null(), true, &mut s) }, IcStatus::NullPointer);
    let m = Model::new();
    assert_eq!(unsafe { ic_density_matrix(m.0, true, ptr::null_mut()) }, IcStatus::NullPointer);
    assert_eq!(unsafe { ic_model_set(m.0, ptr::null(), 1.0) }, IcStatus::NullPointer);
    unsafe { ic_model_free(ptr::null_mut()) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(ic_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/impurity_chain.h")).unwrap();
    for sym in [
        "typedef struct IcModel IcModel",
        "IC_STATUS_NULL_POINTER",
        "ic_model_new",
        "ic_model_free",
        "ic_density_matrix",
        "ic_finite_density_matrix",
        "ic_measures",
        "ic_last_error_message",
    ] {
        assert!(h.contains(sym), "header lacks {sym}");
    }
}
