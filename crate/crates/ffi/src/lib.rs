//! C ABI over `qst-disorder-lab`.
//!
//! Every function returns a [`QstStatus`]; results go through out-pointers.
//! On failure, [`qst_last_error_message`] describes the most recent error on
//! the calling thread. Panics never cross the boundary.
//!
//! Ensembles live behind the opaque [`QstEnsemble`] handle: create it with
//! [`qst_ensemble_new`], call [`qst_ensemble_run`], read results with the
//! getters and release it with [`qst_ensemble_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qst_disorder_lab::ensemble::default_beta2_grid;
use qst_disorder_lab::{
    fidelity_avg, fidelity_input, fidelity_min, pst_couplings, simulate, transfer_amplitude,
    transfer_time, ChainSpec, DisorderSpec, EnsembleConfig, EnsembleStats, QstError,
    RealizationRecord, RealizedHamiltonian,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QstStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidChain = 2,
    /// An argument lies outside its domain (probability, phase, weight, σ, …).
    Domain = 3,
    /// The eigensolver did not converge.
    NumericFailure = 4,
    Consistency = 5,
    /// The caller's output buffer is shorter than required.
    BufferTooSmall = 6,
    /// Results were requested before `qst_ensemble_run` succeeded.
    NotRun = 7,
    /// An index is past the end of the requested collection.
    OutOfRange = 8,
    Internal = 9,
    Panic = 10,
}

impl From<&QstError> for QstStatus {
    fn from(e: &QstError) -> Self {
        match e {
            QstError::InvalidChain { .. } => QstStatus::InvalidChain,
            QstError::Domain(_) | QstError::Config(_) => QstStatus::Domain,
            QstError::NumericFailure { .. } => QstStatus::NumericFailure,
            QstError::Consistency(_) => QstStatus::Consistency,
            QstError::Realization { source, .. } => QstStatus::from(source.as_ref()),
            QstError::Io { .. } | QstError::ThreadPool(_) => QstStatus::Internal,
        }
    }
}

struct Failure {
    status: QstStatus,
    message: String,
}

impl Failure {
    fn new(status: QstStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl From<QstError> for Failure {
    fn from(e: QstError) -> Self {
        Failure::new(QstStatus::from(&e), e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> QstStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QstStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(failure.message);
            failure.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            QstStatus::Panic
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure::new(
            QstStatus::NullPointer,
            format!("{name} is NULL"),
        ))
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` must be NULL or valid for `len` reads.
unsafe fn slice_in<'a>(p: *const f64, len: usize, name: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, name)?;
    Ok(std::slice::from_raw_parts(p, len))
}

/// # Safety
/// `out` must be NULL or valid for `len` writes.
unsafe fn copy_out(values: &[f64], out: *mut f64, len: usize) -> Result<(), Failure> {
    non_null(out, "out")?;
    if len < values.len() {
        return Err(Failure::new(
            QstStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} required", values.len()),
        ));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

/// Static description of a status code. Never NULL.
#[no_mangle]
pub extern "C" fn qst_status_message(status: QstStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        QstStatus::Ok => b"ok\0",
        QstStatus::NullPointer => b"null pointer argument\0",
        QstStatus::InvalidChain => b"invalid chain length\0",
        QstStatus::Domain => b"argument outside its domain\0",
        QstStatus::NumericFailure => b"eigendecomposition did not converge\0",
        QstStatus::Consistency => b"internal consistency check failed\0",
        QstStatus::BufferTooSmall => b"output buffer too small\0",
        QstStatus::NotRun => b"ensemble has not been run\0",
        QstStatus::OutOfRange => b"index out of range\0",
        QstStatus::Internal => b"internal error\0",
        QstStatus::Panic => b"panic caught at the C boundary\0",
    };
    s.as_ptr().cast()
}

/// Message of the last failure on this thread, or NULL if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qst_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Writes the `n_sites − 1` normalized perfect-transfer couplings into `out`.
///
/// # Safety
/// `out` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qst_pst_couplings(n_sites: usize, out: *mut f64, len: usize) -> QstStatus {
    guarded(|| copy_out(&pst_couplings(n_sites)?, out, len))
}

/// Dimensionless readout time of the perfect-transfer chain.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qst_transfer_time(n_sites: usize, out: *mut f64) -> QstStatus {
    guarded(|| {
        non_null(out, "out")?;
        *out = transfer_time(n_sites)?;
        Ok(())
    })
}

/// `⟨N| exp(−iHt) |1⟩` for the tridiagonal `H` with `n_sites` diagonal and
/// `n_sites − 1` off-diagonal entries.
///
/// # Safety
/// `diag` and `offdiag` must be valid for `n_sites` and `n_sites − 1` reads;
/// `out_re` and `out_im` for one write each.
#[no_mangle]
pub unsafe extern "C" fn qst_transfer_amplitude(
    diag: *const f64,
    offdiag: *const f64,
    n_sites: usize,
    t: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QstStatus {
    guarded(|| {
        non_null(out_re, "out_re")?;
        non_null(out_im, "out_im")?;
        let d = slice_in(diag, n_sites, "diag")?;
        let o = slice_in(offdiag, n_sites.saturating_sub(1), "offdiag")?;
        let h = RealizedHamiltonian::new(d.to_vec(), o.to_vec())?;
        let a = transfer_amplitude(&h, t)?;
        *out_re = a.re;
        *out_im = a.im;
        Ok(())
    })
}

/// Fidelity for the input weight `|β|² = beta2`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qst_fidelity_input(
    beta2: f64,
    p: f64,
    delta_phi: f64,
    out: *mut f64,
) -> QstStatus {
    guarded(|| {
        non_null(out, "out")?;
        *out = fidelity_input(beta2, p, delta_phi)?;
        Ok(())
    })
}

/// Fidelity averaged over all pure inputs.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qst_fidelity_avg(p: f64, delta_phi: f64, out: *mut f64) -> QstStatus {
    guarded(|| {
        non_null(out, "out")?;
        *out = fidelity_avg(p, delta_phi)?;
        Ok(())
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QstMinFidelity {
    pub f_min: f64,
    pub argmin_beta2: f64,
    /// True when the minimum sits at the stationary point rather than at `beta2 = 1`.
    pub interior: bool,
}

/// Worst-case fidelity over all pure inputs.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qst_fidelity_min(
    p: f64,
    delta_phi: f64,
    out: *mut QstMinFidelity,
) -> QstStatus {
    guarded(|| {
        non_null(out, "out")?;
        let m = fidelity_min(p, delta_phi)?;
        *out = QstMinFidelity {
            f_min: m.f_min,
            argmin_beta2: m.argmin_beta2,
            interior: m.interior,
        };
        Ok(())
    })
}

/// Opaque ensemble handle.
pub struct QstEnsemble {
    config: EnsembleConfig,
    result: Option<(Vec<RealizationRecord>, EnsembleStats)>,
}

impl QstEnsemble {
    fn results(&self) -> Result<&(Vec<RealizationRecord>, EnsembleStats), Failure> {
        self.result
            .as_ref()
            .ok_or_else(|| Failure::new(QstStatus::NotRun, "call qst_ensemble_run first"))
    }
}

/// Ensemble-level results.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QstEnsembleSummary {
    pub realizations: usize,
    pub mean_p: f64,
    pub std_p: f64,
    pub mean_f_avg: f64,
    pub std_f_avg: f64,
    /// Fraction of realizations whose average fidelity is below 2/3.
    pub fail_prob_f_avg: f64,
    pub mean_f_min: f64,
    pub std_f_min: f64,
    pub delta_0: f64,
    pub delta_1: f64,
    pub prob_window: f64,
    pub prob_window_average: f64,
}

/// Statistics of the input fidelity at one grid weight.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QstInputFidelityStats {
    pub beta2: f64,
    pub mean: f64,
    pub std: f64,
    pub fail_prob: f64,
}

/// One realization; its per-weight fidelities come from `qst_ensemble_record_f_psi`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QstRecord {
    pub index: usize,
    pub p: f64,
    pub delta_phi: f64,
    pub f_avg: f64,
    pub f_min: f64,
}

/// Configure an ensemble on the perfect-transfer chain of `n_sites` sites.
///
/// `beta2` may be NULL with `beta2_len == 0` to use the default weight grid
/// `0, 0.1, …, 1`. Release the handle with `qst_ensemble_free`.
///
/// # Safety
/// `beta2` must be valid for `beta2_len` reads; `out` for one write.
#[no_mangle]
pub unsafe extern "C" fn qst_ensemble_new(
    n_sites: usize,
    sigma_eta: f64,
    sigma_xi: f64,
    realizations: usize,
    master_seed: u64,
    beta2: *const f64,
    beta2_len: usize,
    out: *mut *mut QstEnsemble,
) -> QstStatus {
    guarded(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let chain = ChainSpec::pst(n_sites)?;
        let mut config = EnsembleConfig::new(chain, DisorderSpec::new(sigma_eta, sigma_xi)?);
        config.realizations = realizations;
        config.master_seed = master_seed;
        config.beta2_grid = if beta2_len == 0 {
            default_beta2_grid()
        } else {
            slice_in(beta2, beta2_len, "beta2")?.to_vec()
        };
        config.validate()?;
        *out = Box::into_raw(Box::new(QstEnsemble {
            config,
            result: None,
        }));
        Ok(())
    })
}

/// Override the `|p − F_min|` window tolerance (default 0.01). Clears earlier results.
///
/// # Safety
/// `handle` must come from `qst_ensemble_new`.
#[no_mangle]
pub unsafe extern "C" fn qst_ensemble_set_epsilon(
    handle: *mut QstEnsemble,
    epsilon: f64,
) -> QstStatus {
    guarded(|| {
        non_null(handle, "handle")?;
        let e = &mut *handle;
        let mut config = e.config.clone();
        config.epsilon = epsilon;
        config.validate()?;
        e.config = config;
        e.result = None;
        Ok(())
    })
}

/// Simulate every realization. Results do not depend on the thread count.
///
/// # Safety
/// `handle` must come from `qst_ensemble_new`.
#[no_mangle]
pub unsafe extern "C" fn qst_ensemble_run(handle: *mut QstEnsemble) -> QstStatus {
    guarded(|| {
        non_null(handle, "handle")?;
        let e = &mut *handle;
        e.result = Some(simulate(&e.config)?);
        Ok(())
    })
}

/// # Safety
/// `handle` must come from `qst_ensemble_new`; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qst_ensemble_summary(
    handle: *const QstEnsemble,
    out: *mut QstEnsembleSummary,
) -> QstStatus {
    guarded(|| {
        non_null(handle, "handle")?;
        non_null(out, "out")?;
        let (_, s) = (*handle).results()?;
        *out = QstEnsembleSummary {
            realizations: s.realizations,
            mean_p: s.mean_p,
            std_p: s.std_p,
            mean_f_avg: s.mean_f_avg,
            std_f_avg: s.std_f_avg,
            fail_prob_f_avg: s.fail_prob_f_avg,
            mean_f_min: s.mean_f_min,
            std_f_min: s.std_f_min,
            delta_0: s.delta_0(),
            delta_1: s.delta_1(),
            prob_window: s.prob_window,
            prob_window_average: s.prob_window_average,
        };
        Ok(())
    })
}

/// Number of weights in the ensemble's `|β|²` grid.
///
/// # Safety
/// `handle` must come from `qst_ensemble_new`; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qst_ensemble_beta2_count(
    handle: *const QstEnsemble,
    out: *mut usize,
) -> QstStatus {
    guarded(|| {
        non_null(handle, "handle")?;
        non_null(out, "out")?;
        *out = (*handle).config.beta2_grid.len();
        Ok(())
    })
}

/// Input-fidelity statistics at grid weight number `index`.
///
/// # Safety
/// `handle` must come from `qst_ensemble_new`; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qst_ensemble_f_psi(
    handle: *const QstEnsemble,
    index: usize,
    out: *mut QstInputFidelityStats,
) -> QstStatus {
    guarded(|| {
        non_null(handle, "handle")?;
        non_null(out, "out")?;
        let (_, s) = (*handle).results()?;
        if index >= s.beta2_grid.len() {
            return Err(Failure::new(
                QstStatus::OutOfRange,
                format!("weight index {index} past grid of {}", s.beta2_grid.len()),
            ));
        }
        *out = QstInputFidelityStats {
            beta2: s.beta2_grid[index],
            mean: s.mean_f_psi[index],
            std: s.std_f_psi[index],
            fail_prob: s.fail_prob_f_psi[index],
        };
        Ok(())
    })
}

/// # Safety
/// `handle` must come from `qst_ensemble_new`; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qst_ensemble_record_count(
    handle: *const QstEnsemble,
    out: *mut usize,
) -> QstStatus {
    guarded(|| {
        non_null(handle, "handle")?;
        non_null(out, "out")?;
        *out = (*handle).results()?.0.len();
        Ok(())
    })
}

unsafe fn record<'a>(
    handle: *const QstEnsemble,
    index: usize,
) -> Result<&'a RealizationRecord, Failure> {
    non_null(handle, "handle")?;
    let (records, _) = (*handle).results()?;
    records.get(index).ok_or_else(|| {
        Failure::new(
            QstStatus::OutOfRange,
            format!("record index {index} past {} realizations", records.len()),
        )
    })
}

/// # Safety
/// `handle` must come from `qst_ensemble_new`; `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qst_ensemble_record(
    handle: *const QstEnsemble,
    index: usize,
    out: *mut QstRecord,
) -> QstStatus {
    guarded(|| {
        non_null(out, "out")?;
        let r = record(handle, index)?;
        *out = QstRecord {
            index: r.index,
            p: r.p,
            delta_phi: r.delta_phi,
            f_avg: r.f_avg,
            f_min: r.f_min,
        };
        Ok(())
    })
}

/// Per-weight input fidelities of one realization, in grid order.
///
/// # Safety
/// `handle` must come from `qst_ensemble_new`; `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qst_ensemble_record_f_psi(
    handle: *const QstEnsemble,
    index: usize,
    out: *mut f64,
    len: usize,
) -> QstStatus {
    guarded(|| copy_out(&record(handle, index)?.f_psi, out, len))
}

/// Release a handle. NULL is ignored.
///
/// # Safety
/// `handle` must be NULL or come from `qst_ensemble_new`, and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qst_ensemble_free(handle: *mut QstEnsemble) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}
