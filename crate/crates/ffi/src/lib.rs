//! C interface to `gpchain`.
//!
//! Every fallible call returns a [`GpchainStatus`] and writes its result
//! through an out-pointer. On failure a description is kept per thread and
//! can be read with [`gpchain_last_error_message`]. Panics never cross the
//! boundary; they surface as [`GpchainStatus::Panic`].
//!
//! The header `include/gpchain.h` is regenerated by the build script.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gpchain::approx::{approx_gp, ApproxParams};
use gpchain::chain::{bogoliubov_angle, dispersion};
use gpchain::decoherence::{decoherence_series, DecoherenceKernel};
use gpchain::geophase::{geometric_phase_general, geometric_phase_with, unperturbed_phase};
use gpchain::{Error, GpResult, ModelParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpchainStatus {
    Ok = 0,
    InvalidInput = 1,
    /// The weak-coupling expansion was asked for on the critical line.
    Criticality = 2,
    NumericalFailure = 3,
    NullPointer = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Model parameters by value. `n` is the number of chain sites.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpchainParams {
    pub eta: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub g: f64,
    pub n: usize,
    pub beta: f64,
}

impl From<ModelParams> for GpchainParams {
    fn from(p: ModelParams) -> Self {
        GpchainParams {
            eta: p.eta,
            gamma: p.gamma,
            alpha: p.alpha,
            lambda: p.lambda,
            g: p.g,
            n: p.n,
            beta: p.beta,
        }
    }
}

impl From<GpchainParams> for ModelParams {
    fn from(p: GpchainParams) -> Self {
        ModelParams {
            eta: p.eta,
            gamma: p.gamma,
            alpha: p.alpha,
            lambda: p.lambda,
            g: p.g,
            n: p.n,
            beta: p.beta,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpchainGpResult {
    /// Phase in `[0, 2 pi)`.
    pub phi: f64,
    pub raw_phi: f64,
    pub quadrature_error: f64,
    pub evaluations: usize,
    pub clamped: usize,
}

impl From<GpResult> for GpchainGpResult {
    fn from(r: GpResult) -> Self {
        GpchainGpResult {
            phi: r.phi,
            raw_phi: r.raw_phi,
            quadrature_error: r.quadrature_error,
            evaluations: r.evaluations,
            clamped: r.clamped,
        }
    }
}

/// Validated parameters with their per-mode tables. Opaque to C.
pub struct GpchainModel {
    params: ModelParams,
    kernel: DecoherenceKernel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Core(Error),
    Null(&'static str),
    Buffer { needed: usize, given: usize },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn status_of(e: &Error) -> GpchainStatus {
    match e {
        Error::Criticality { .. } => GpchainStatus::Criticality,
        Error::NegativeFactor { .. } | Error::NoConvergence { .. } | Error::UnexpectedBranch { .. } | Error::SweepFailed { .. } => {
            GpchainStatus::NumericalFailure
        }
        _ => GpchainStatus::InvalidInput,
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> GpchainStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GpchainStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("`{name}` is NULL"));
            GpchainStatus::NullPointer
        }
        Ok(Err(Failure::Buffer { needed, given })) => {
            set_error(format!("buffer holds {given} values, {needed} needed"));
            GpchainStatus::BufferTooSmall
        }
        Err(payload) => {
            let what = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {what}"));
            GpchainStatus::Panic
        }
    }
}

unsafe fn model_ref<'a>(model: *const GpchainModel) -> Result<&'a GpchainModel, Failure> {
    // SAFETY: the caller passes NULL or a live handle from gpchain_model_new.
    unsafe { model.as_ref() }.ok_or(Failure::Null("model"))
}

unsafe fn out_ref<'a, T>(out: *mut T, name: &'static str) -> Result<&'a mut T, Failure> {
    // SAFETY: the caller passes NULL or a valid, writable, aligned pointer.
    unsafe { out.as_mut() }.ok_or(Failure::Null(name))
}

/// Description of the last failure on this thread, or NULL if the last
/// call succeeded. Valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn gpchain_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gpchain_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => c"",
    };
    VERSION.as_ptr()
}

/// Writes the default parameters into `out`.
///
/// # Safety
/// `out` must be NULL or point to writable memory for one `GpchainParams`.
#[no_mangle]
pub unsafe extern "C" fn gpchain_params_default(out: *mut GpchainParams) -> GpchainStatus {
    guard(|| {
        *unsafe { out_ref(out, "out") }? = ModelParams::default().into();
        Ok(())
    })
}

/// Validates `params` and builds a model handle, stored in `*out`. Release
/// it with [`gpchain_model_free`].
///
/// # Safety
/// `params` must be NULL or point to a readable `GpchainParams`; `out` must
/// be NULL or point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gpchain_model_new(params: *const GpchainParams, out: *mut *mut GpchainModel) -> GpchainStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        // SAFETY: non-NULL `params` is readable per the contract.
        let params: ModelParams = (*unsafe { params.as_ref() }.ok_or(Failure::Null("params"))?).into();
        params.validate()?;
        let kernel = DecoherenceKernel::new(&params)?;
        *out = Box::into_raw(Box::new(GpchainModel { params, kernel }));
        Ok(())
    })
}

/// Releases a model. NULL is ignored.
///
/// # Safety
/// `model` must be NULL or a handle from [`gpchain_model_new`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn gpchain_model_free(model: *mut GpchainModel) {
    if !model.is_null() {
        // SAFETY: ownership returns to Rust exactly once per the contract.
        drop(unsafe { Box::from_raw(model) });
    }
}

/// # Safety
/// `model` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn gpchain_model_params(model: *const GpchainModel, out: *mut GpchainParams) -> GpchainStatus {
    guard(|| {
        let m = unsafe { model_ref(model) }?;
        *unsafe { out_ref(out, "out") }? = m.params.into();
        Ok(())
    })
}

/// Quasi period `2 pi / eta`.
///
/// # Safety
/// `model` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn gpchain_model_period(model: *const GpchainModel, out: *mut f64) -> GpchainStatus {
    guard(|| {
        let m = unsafe { model_ref(model) }?;
        *unsafe { out_ref(out, "out") }? = m.params.period();
        Ok(())
    })
}

/// `|F(t)|` for `t >= 0`.
///
/// # Safety
/// `model` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn gpchain_decoherence_modulus(model: *const GpchainModel, t: f64, out: *mut f64) -> GpchainStatus {
    guard(|| {
        let m = unsafe { model_ref(model) }?;
        let out = unsafe { out_ref(out, "out") }?;
        *out = m.kernel.modulus(t)?.value;
        Ok(())
    })
}

/// Samples `|F|` at `steps + 1` uniform instants of one quasi period into
/// `times` and `values`, each holding at least `capacity` doubles.
///
/// # Safety
/// `model` must be NULL or a live handle. `times` and `values` must be NULL
/// or point to `capacity` writable doubles each.
#[no_mangle]
pub unsafe extern "C" fn gpchain_decoherence_series(
    model: *const GpchainModel,
    steps: usize,
    times: *mut f64,
    values: *mut f64,
    capacity: usize,
) -> GpchainStatus {
    guard(|| {
        let m = unsafe { model_ref(model) }?;
        if times.is_null() {
            return Err(Failure::Null("times"));
        }
        if values.is_null() {
            return Err(Failure::Null("values"));
        }
        let needed = steps.saturating_add(1);
        if capacity < needed {
            return Err(Failure::Buffer { needed, given: capacity });
        }
        let series = decoherence_series(&m.params, steps)?;
        // SAFETY: both buffers hold `capacity >= needed` doubles.
        let (t_out, v_out) = unsafe {
            (
                std::slice::from_raw_parts_mut(times, needed),
                std::slice::from_raw_parts_mut(values, needed),
            )
        };
        t_out.copy_from_slice(&series.times);
        v_out.copy_from_slice(&series.values);
        Ok(())
    })
}

/// Geometric phase over one quasi period, quadrature tolerance `tol`.
///
/// # Safety
/// `model` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn gpchain_geometric_phase(
    model: *const GpchainModel,
    tol: f64,
    out: *mut GpchainGpResult,
) -> GpchainStatus {
    guard(|| {
        let m = unsafe { model_ref(model) }?;
        let out = unsafe { out_ref(out, "out") }?;
        *out = geometric_phase_with(&m.params, &m.kernel, tol)?.into();
        Ok(())
    })
}

/// The phase from its general mixed-state definition on a grid of `steps`
/// intervals (`steps >= 16`).
///
/// # Safety
/// `model` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn gpchain_geometric_phase_general(
    model: *const GpchainModel,
    steps: usize,
    out: *mut GpchainGpResult,
) -> GpchainStatus {
    guard(|| {
        let m = unsafe { model_ref(model) }?;
        let out = unsafe { out_ref(out, "out") }?;
        *out = geometric_phase_general(&m.params, steps)?.into();
        Ok(())
    })
}

/// Weak-coupling estimate of the phase with mode cutoff `cutoff`; 0 keeps
/// every mode.
///
/// # Safety
/// `model` must be NULL or a live handle; `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn gpchain_approx_gp(model: *const GpchainModel, cutoff: usize, out: *mut f64) -> GpchainStatus {
    guard(|| {
        let m = unsafe { model_ref(model) }?;
        let out = unsafe { out_ref(out, "out") }?;
        let cutoff = if cutoff == 0 {
            ApproxParams::all_modes(&m.params)?
        } else {
            ApproxParams::new(cutoff, &m.params)?
        };
        *out = approx_gp(&m.params, cutoff.cutoff)?;
        Ok(())
    })
}

/// `pi (1 + cos beta)`.
#[no_mangle]
pub extern "C" fn gpchain_unperturbed_phase(beta: f64) -> f64 {
    unperturbed_phase(beta)
}

/// Quasiparticle energy of mode phase `ka` at effective field `field`.
#[no_mangle]
pub extern "C" fn gpchain_dispersion(field: f64, gamma: f64, alpha: f64, ka: f64) -> f64 {
    dispersion(field, gamma, alpha, ka)
}

/// Bogoliubov angle in `(-pi, pi]`.
#[no_mangle]
pub extern "C" fn gpchain_bogoliubov_angle(field: f64, gamma: f64, alpha: f64, ka: f64) -> f64 {
    bogoliubov_angle(field, gamma, alpha, ka)
}
