use std::ffi::CStr;
use std::ptr;

use gpchain::decoherence::decoherence_modulus;
use gpchain::geophase::geometric_phase;
use gpchain::ModelParams;
use gpchain_ffi::*;

fn params() -> GpchainParams {
    let mut p = GpchainParams {
        eta: 0.0,
        gamma: 0.0,
        alpha: 0.0,
        lambda: 0.0,
        g: 0.0,
        n: 0,
        beta: 0.0,
    };
    assert_eq!(unsafe { gpchain_params_default(&mut p) }, GpchainStatus::Ok);
    p.n = 101;
    p.g = 0.05;
    p
}

fn model(p: &GpchainParams) -> *mut GpchainModel {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { gpchain_model_new(p, &mut m) }, GpchainStatus::Ok);
    assert!(!m.is_null());
    m
}

fn last_error() -> Option<String> {
    let p = gpchain_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

#[test]
fn values_match_the_library() {
    let p = params();
    let m = model(&p);
    let core: ModelParams = p.into();

    let mut f = 0.0;
    assert_eq!(unsafe { gpchain_decoherence_modulus(m, 1.3, &mut f) }, GpchainStatus::Ok);
    assert_eq!(f, decoherence_modulus(&core, 1.3).unwrap());
    assert_eq!(last_error(), None);

    let mut r = GpchainGpResult {
        phi: 0.0,
        raw_phi: 0.0,
        quadrature_error: 0.0,
        evaluations: 0,
        clamped: 0,
    };
    assert_eq!(unsafe { gpchain_geometric_phase(m, 1e-9, &mut r) }, GpchainStatus::Ok);
    let expected = geometric_phase(&core, 1e-9).unwrap();
    assert_eq!(r.phi, expected.phi);
    assert_eq!(r.evaluations, expected.evaluations);

    let mut general = r;
    assert_eq!(unsafe { gpchain_geometric_phase_general(m, 512, &mut general) }, GpchainStatus::Ok);
    assert!((general.phi - r.phi).abs() < 1e-5, "{general:?} vs {r:?}");

    let mut back = p;
    back.n = 0;
    assert_eq!(unsafe { gpchain_model_params(m, &mut back) }, GpchainStatus::Ok);
    assert_eq!(back, p);

    let mut period = 0.0;
    assert_eq!(unsafe { gpchain_model_period(m, &mut period) }, GpchainStatus::Ok);
    assert_eq!(period, core.period());
    unsafe { gpchain_model_free(m) };
}

#[test]
fn series_and_buffer_sizes() {
    let m = model(&params());
    let mut t = vec![0.0; 11];
    let mut v = vec![0.0; 11];
    let st = unsafe { gpchain_decoherence_series(m, 10, t.as_mut_ptr(), v.as_mut_ptr(), 11) };
    assert_eq!(st, GpchainStatus::Ok);
    assert_eq!(v[0], 1.0);
    assert!(v.iter().all(|x| (0.0..=1.0).contains(x)));

    let st = unsafe { gpchain_decoherence_series(m, 10, t.as_mut_ptr(), v.as_mut_ptr(), 10) };
    assert_eq!(st, GpchainStatus::BufferTooSmall);
    assert!(last_error().unwrap().contains("11 needed"));

    let st = unsafe { gpchain_decoherence_series(m, 10, ptr::null_mut(), v.as_mut_ptr(), 11) };
    assert_eq!(st, GpchainStatus::NullPointer);
    unsafe { gpchain_model_free(m) };
}

#[test]
fn status_codes() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gpchain_model_new(ptr::null(), &mut out) }, GpchainStatus::NullPointer);
    assert!(last_error().unwrap().contains("params"));

    let mut bad = params();
    bad.beta = 4.0;
    assert_eq!(unsafe { gpchain_model_new(&bad, &mut out) }, GpchainStatus::InvalidInput);
    assert!(out.is_null());
    assert!(last_error().unwrap().contains("beta"));

    let mut critical = params();
    critical.alpha = 0.0;
    critical.lambda = 1.0;
    critical.g = 0.0;
    let m = model(&critical);
    let mut phi = 0.0;
    assert_eq!(unsafe { gpchain_approx_gp(m, 0, &mut phi) }, GpchainStatus::Criticality);
    assert_eq!(unsafe { gpchain_approx_gp(m, 10_000, &mut phi) }, GpchainStatus::InvalidInput);
    assert_eq!(unsafe { gpchain_approx_gp(ptr::null(), 0, &mut phi) }, GpchainStatus::NullPointer);
    let mut r = std::mem::MaybeUninit::<GpchainGpResult>::uninit();
    assert_eq!(unsafe { gpchain_geometric_phase(m, -1.0, r.as_mut_ptr()) }, GpchainStatus::InvalidInput);
    unsafe { gpchain_model_free(m) };
    unsafe { gpchain_model_free(ptr::null_mut()) };
}

#[test]
fn scalar_helpers() {
    assert_eq!(gpchain_unperturbed_phase(0.0), 2.0 * std::f64::consts::PI);
    assert_eq!(gpchain_dispersion(2.0, 1.0, 0.0, 0.0), gpchain::chain::dispersion(2.0, 1.0, 0.0, 0.0));
    assert_eq!(
        gpchain_bogoliubov_angle(0.5, 0.7, 0.1, 1.0),
        gpchain::chain::bogoliubov_angle(0.5, 0.7, 0.1, 1.0)
    );
    let v = unsafe { CStr::from_ptr(gpchain_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
