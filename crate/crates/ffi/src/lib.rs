//! C interface to `vicfluor`.
//!
//! Every function returns a [`VicfluorStatus`]. On failure a message is
//! kept per thread and can be read with [`vicfluor_last_error_message`].
//! Atoms are opaque handles created by [`vicfluor_atom_new`] and released
//! with [`vicfluor_atom_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use vicfluor::dressed::{build_dressed, closed_form_weights};
use vicfluor::{Channel, DrivenAtom, Error, FrequencyGrid, SystemParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VicfluorStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    InvalidGrid = 3,
    SingularSystem = 4,
    SingularResolvent = 5,
    RequiresResonance = 6,
    BufferTooSmall = 7,
    InvalidArgument = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VicfluorChannel {
    Pi = 0,
    Sigma = 1,
}

impl From<VicfluorChannel> for Channel {
    fn from(c: VicfluorChannel) -> Self {
        match c {
            VicfluorChannel::Pi => Channel::Pi,
            VicfluorChannel::Sigma => Channel::Sigma,
        }
    }
}

/// Model parameters, all in units of the total decay rate when `gamma = 1`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VicfluorParams {
    pub gamma: f64,
    pub gamma12: f64,
    pub delta: f64,
    pub omega_a: f64,
    pub omega_b: f64,
    pub phi: f64,
}

impl From<VicfluorParams> for SystemParams {
    fn from(p: VicfluorParams) -> Self {
        SystemParams {
            gamma: p.gamma,
            gamma12: p.gamma12,
            delta: p.delta,
            omega_a: p.omega_a,
            omega_b: p.omega_b,
            phi: p.phi,
        }
    }
}

/// Opaque handle: parameters, evolution matrix and stationary state.
pub struct VicfluorAtom {
    inner: DrivenAtom,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> VicfluorStatus {
    match e {
        Error::InvalidParameter { .. } => VicfluorStatus::InvalidParameter,
        Error::InvalidGrid(_) => VicfluorStatus::InvalidGrid,
        Error::SingularSystem { .. } | Error::DegenerateDrive => VicfluorStatus::SingularSystem,
        Error::SingularResolvent { .. } => VicfluorStatus::SingularResolvent,
        Error::RequiresResonance { .. } | Error::DegenerateDressing => VicfluorStatus::RequiresResonance,
        Error::StepTooLarge { .. } | Error::InvalidStep(_) => VicfluorStatus::InvalidArgument,
    }
}

struct Failure(VicfluorStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(VicfluorStatus::NullPointer, format!("`{what}` is null"))
}

fn guard<F>(f: F) -> VicfluorStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            VicfluorStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            VicfluorStatus::Panic
        }
    }
}

/// Default parameters: gamma = 1, full cross damping, resonance, Ωa = 1, Ωb = 0.
#[no_mangle]
pub extern "C" fn vicfluor_params_default() -> VicfluorParams {
    let d = SystemParams::default();
    VicfluorParams {
        gamma: d.gamma,
        gamma12: d.gamma12,
        delta: d.delta,
        omega_a: d.omega_a,
        omega_b: d.omega_b,
        phi: d.phi,
    }
}

/// Validates `params`, solves for the steady state and writes a new handle
/// to `*out`. `*out` is set to NULL on failure.
///
/// # Safety
/// `params` must point to a valid struct and `out` to writable storage.
#[no_mangle]
pub unsafe extern "C" fn vicfluor_atom_new(params: *const VicfluorParams, out: *mut *mut VicfluorAtom) -> VicfluorStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = ptr::null_mut();
        let p = params.as_ref().ok_or_else(|| null("params"))?;
        let inner = DrivenAtom::new(&SystemParams::from(*p))?;
        *out = Box::into_raw(Box::new(VicfluorAtom { inner }));
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `atom` must come from [`vicfluor_atom_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vicfluor_atom_free(atom: *mut VicfluorAtom) {
    if !atom.is_null() {
        drop(Box::from_raw(atom));
    }
}

/// Stationary populations ρ11, ρ22, ρ33, ρ44 into `out[0..4]`.
///
/// # Safety
/// `atom` must be a live handle and `out` must hold 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn vicfluor_atom_populations(atom: *const VicfluorAtom, out: *mut f64) -> VicfluorStatus {
    guard(|| {
        let atom = atom.as_ref().ok_or_else(|| null("atom"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let pops = atom.inner.steady().populations();
        ptr::copy_nonoverlapping(pops.as_ptr(), out, 4);
        Ok(())
    })
}

/// Stationary density-matrix element ρ_xy, with x, y in 1..=4.
///
/// # Safety
/// `atom` must be a live handle; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn vicfluor_atom_rho(
    atom: *const VicfluorAtom,
    x: u8,
    y: u8,
    re: *mut f64,
    im: *mut f64,
) -> VicfluorStatus {
    guard(|| {
        let atom = atom.as_ref().ok_or_else(|| null("atom"))?;
        let (re, im) = (re.as_mut().ok_or_else(|| null("re"))?, im.as_mut().ok_or_else(|| null("im"))?);
        if !(1..=4).contains(&x) || !(1..=4).contains(&y) {
            return Err(Failure(
                VicfluorStatus::InvalidArgument,
                format!("level indices must be in 1..=4, got ({x}, {y})"),
            ));
        }
        let z = atom.inner.steady().rho(x, y);
        (*re, *im) = (z.re, z.im);
        Ok(())
    })
}

/// Spectrum of `channel` on `points` equally spaced frequencies from
/// `omega_min` to `omega_max`. `values` receives S(ω); `omega` may be NULL,
/// otherwise it receives the frequencies. `capacity` is the length of each
/// buffer.
///
/// # Safety
/// `atom` must be a live handle; non-null buffers must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn vicfluor_atom_spectrum(
    atom: *const VicfluorAtom,
    channel: VicfluorChannel,
    detector_cross: bool,
    omega_min: f64,
    omega_max: f64,
    points: usize,
    omega: *mut f64,
    values: *mut f64,
    capacity: usize,
) -> VicfluorStatus {
    guard(|| {
        let atom = atom.as_ref().ok_or_else(|| null("atom"))?;
        if values.is_null() {
            return Err(null("values"));
        }
        if capacity < points {
            return Err(Failure(
                VicfluorStatus::BufferTooSmall,
                format!("buffer holds {capacity} values, {points} requested"),
            ));
        }
        let grid = FrequencyGrid::new(omega_min, omega_max, points)?;
        let trace = atom.inner.spectrum(channel.into(), &grid, detector_cross)?;
        ptr::copy_nonoverlapping(trace.values.as_ptr(), values, points);
        if !omega.is_null() {
            ptr::copy_nonoverlapping(trace.omega.as_ptr(), omega, points);
        }
        Ok(())
    })
}

/// Frequency-integrated intensity of `channel`.
///
/// # Safety
/// `atom` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn vicfluor_atom_total_intensity(
    atom: *const VicfluorAtom,
    channel: VicfluorChannel,
    detector_cross: bool,
    out: *mut f64,
) -> VicfluorStatus {
    guard(|| {
        let atom = atom.as_ref().ok_or_else(|| null("atom"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = atom.inner.total_intensity(channel.into(), detector_cross);
        Ok(())
    })
}

/// Dressed-state line weights A1..A5 into `a[0..5]` and W1, W2 into
/// `w[0..2]`. Requires zero detuning.
///
/// # Safety
/// `params` must be valid; `a` must hold 5 doubles and `w` 2.
#[no_mangle]
pub unsafe extern "C" fn vicfluor_dressed_weights(
    params: *const VicfluorParams,
    channel: VicfluorChannel,
    a: *mut f64,
    w: *mut f64,
) -> VicfluorStatus {
    guard(|| {
        let p = params.as_ref().ok_or_else(|| null("params"))?;
        if a.is_null() {
            return Err(null("a"));
        }
        if w.is_null() {
            return Err(null("w"));
        }
        let ds = build_dressed(&SystemParams::from(*p))?;
        let lw = closed_form_weights(&ds, channel.into());
        ptr::copy_nonoverlapping(lw.a.as_ptr(), a, 5);
        ptr::copy_nonoverlapping([lw.w1, lw.w2].as_ptr(), w, 2);
        Ok(())
    })
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL,
/// or 0 if the last call succeeded. `buf` may be NULL to query the length.
///
/// # Safety
/// A non-null `buf` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn vicfluor_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            if !buf.is_null() && len > 0 {
                *buf = 0;
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn vicfluor_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
