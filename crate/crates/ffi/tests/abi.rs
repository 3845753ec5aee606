use std::ffi::CStr;
use std::ptr;

use qst_disorder_ffi::*;

fn last_error() -> String {
    let p = qst_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn couplings_and_time() {
    let mut buf = [0.0; 4];
    assert_eq!(
        unsafe { qst_pst_couplings(5, buf.as_mut_ptr(), buf.len()) },
        QstStatus::Ok
    );
    assert!((buf[1] - 1.0).abs() < 1e-15);
    assert!((buf[0] - 2.0 / 6f64.sqrt()).abs() < 1e-15);

    let mut short = [0.0; 3];
    assert_eq!(
        unsafe { qst_pst_couplings(5, short.as_mut_ptr(), short.len()) },
        QstStatus::BufferTooSmall
    );
    assert!(last_error().contains("4 required"));

    let mut t = 0.0;
    assert_eq!(unsafe { qst_transfer_time(4, &mut t) }, QstStatus::Ok);
    assert!((t - std::f64::consts::PI).abs() < 1e-15);
    assert_eq!(
        unsafe { qst_transfer_time(1, &mut t) },
        QstStatus::InvalidChain
    );
    assert_eq!(
        unsafe { qst_transfer_time(4, ptr::null_mut()) },
        QstStatus::NullPointer
    );
}

#[test]
fn ideal_amplitude() {
    let n = 12;
    let mut couplings = vec![0.0; n - 1];
    let mut t = 0.0;
    unsafe {
        assert_eq!(
            qst_pst_couplings(n, couplings.as_mut_ptr(), n - 1),
            QstStatus::Ok
        );
        assert_eq!(qst_transfer_time(n, &mut t), QstStatus::Ok);
    }
    let diag = vec![0.0; n];
    let (mut re, mut im) = (0.0, 0.0);
    let status = unsafe {
        qst_transfer_amplitude(diag.as_ptr(), couplings.as_ptr(), n, t, &mut re, &mut im)
    };
    assert_eq!(status, QstStatus::Ok);
    // (−i)^11 = i
    assert!(re.abs() < 1e-10 && (im - 1.0).abs() < 1e-10);

    let status = unsafe {
        qst_transfer_amplitude(diag.as_ptr(), couplings.as_ptr(), n, -1.0, &mut re, &mut im)
    };
    assert_eq!(status, QstStatus::Domain);
    let status =
        unsafe { qst_transfer_amplitude(ptr::null(), couplings.as_ptr(), n, t, &mut re, &mut im) };
    assert_eq!(status, QstStatus::NullPointer);
}

#[test]
fn fidelities() {
    let mut f = 0.0;
    unsafe {
        assert_eq!(qst_fidelity_input(1.0, 0.3, 0.7, &mut f), QstStatus::Ok);
        assert_eq!(f, 0.3);
        assert_eq!(qst_fidelity_avg(1.0, 0.0, &mut f), QstStatus::Ok);
        assert!((f - 1.0).abs() < 1e-15);
        assert_eq!(qst_fidelity_input(1.5, 0.3, 0.7, &mut f), QstStatus::Domain);
        assert!(last_error().contains("1.5"));
        assert_eq!(qst_fidelity_avg(f64::NAN, 0.0, &mut f), QstStatus::Domain);
    }
    let mut m = QstMinFidelity::default();
    assert_eq!(unsafe { qst_fidelity_min(0.5, 0.0, &mut m) }, QstStatus::Ok);
    assert!(!m.interior);
    assert_eq!((m.f_min, m.argmin_beta2), (0.5, 1.0));
    assert_eq!(
        unsafe { qst_fidelity_min(0.2, std::f64::consts::PI, &mut m) },
        QstStatus::Ok
    );
    assert!(m.interior && m.f_min < 0.2 && m.argmin_beta2 < 1.0);
}

#[test]
fn ensemble_lifecycle() {
    let grid = [0.0, 0.5, 1.0];
    let mut h: *mut QstEnsemble = ptr::null_mut();
    unsafe {
        assert_eq!(
            qst_ensemble_new(12, 0.1, 0.1, 200, 42, grid.as_ptr(), grid.len(), &mut h),
            QstStatus::Ok
        );
        assert!(!h.is_null());

        let mut summary = QstEnsembleSummary::default();
        assert_eq!(qst_ensemble_summary(h, &mut summary), QstStatus::NotRun);

        assert_eq!(qst_ensemble_run(h), QstStatus::Ok);
        assert_eq!(qst_ensemble_summary(h, &mut summary), QstStatus::Ok);
        assert_eq!(summary.realizations, 200);
        assert!(summary.mean_p > 0.5 && summary.mean_p < 1.0);
        assert!(summary.mean_f_min <= summary.mean_f_avg);

        let mut count = 0;
        assert_eq!(qst_ensemble_beta2_count(h, &mut count), QstStatus::Ok);
        assert_eq!(count, 3);
        let mut at_one = QstInputFidelityStats::default();
        assert_eq!(qst_ensemble_f_psi(h, 2, &mut at_one), QstStatus::Ok);
        assert_eq!(at_one.beta2, 1.0);
        assert!((at_one.mean - summary.mean_p).abs() < 1e-12);
        assert_eq!(qst_ensemble_f_psi(h, 3, &mut at_one), QstStatus::OutOfRange);

        assert_eq!(qst_ensemble_record_count(h, &mut count), QstStatus::Ok);
        assert_eq!(count, 200);
        let mut rec = QstRecord::default();
        assert_eq!(qst_ensemble_record(h, 17, &mut rec), QstStatus::Ok);
        assert_eq!(rec.index, 17);
        let mut f_psi = [0.0; 3];
        assert_eq!(
            qst_ensemble_record_f_psi(h, 17, f_psi.as_mut_ptr(), 3),
            QstStatus::Ok
        );
        assert_eq!(f_psi[0], 1.0);
        assert_eq!(f_psi[2], rec.p);
        assert_eq!(qst_ensemble_record(h, 200, &mut rec), QstStatus::OutOfRange);

        assert_eq!(qst_ensemble_set_epsilon(h, -1.0), QstStatus::Domain);
        assert_eq!(qst_ensemble_set_epsilon(h, 0.05), QstStatus::Ok);
        assert_eq!(qst_ensemble_summary(h, &mut summary), QstStatus::NotRun);
        qst_ensemble_free(h);
        qst_ensemble_free(ptr::null_mut());
    }
}

#[test]
fn ensemble_matches_library_and_defaults_grid() {
    let mut h: *mut QstEnsemble = ptr::null_mut();
    let mut summary = QstEnsembleSummary::default();
    let mut count = 0;
    unsafe {
        assert_eq!(
            qst_ensemble_new(8, 0.05, 0.0, 50, 9, ptr::null(), 0, &mut h),
            QstStatus::Ok
        );
        assert_eq!(qst_ensemble_run(h), QstStatus::Ok);
        assert_eq!(qst_ensemble_summary(h, &mut summary), QstStatus::Ok);
        assert_eq!(qst_ensemble_beta2_count(h, &mut count), QstStatus::Ok);
        qst_ensemble_free(h);
    }
    assert_eq!(count, 11);

    let chain = qst_disorder_lab::ChainSpec::pst(8).unwrap();
    let noise = qst_disorder_lab::DisorderSpec::new(0.05, 0.0).unwrap();
    let mut cfg = qst_disorder_lab::EnsembleConfig::new(chain, noise);
    cfg.realizations = 50;
    cfg.master_seed = 9;
    let (_, stats) = qst_disorder_lab::simulate(&cfg).unwrap();
    assert_eq!(summary.mean_f_avg, stats.mean_f_avg);
    assert_eq!(summary.delta_0, stats.delta_0());
}

#[test]
fn constructor_rejects_bad_arguments() {
    let mut h: *mut QstEnsemble = ptr::null_mut();
    let bad = [1.2];
    unsafe {
        assert_eq!(
            qst_ensemble_new(1, 0.1, 0.1, 10, 0, ptr::null(), 0, &mut h),
            QstStatus::InvalidChain
        );
        assert!(h.is_null());
        assert_eq!(
            qst_ensemble_new(5, -0.1, 0.1, 10, 0, ptr::null(), 0, &mut h),
            QstStatus::Domain
        );
        assert_eq!(
            qst_ensemble_new(5, 0.1, 0.1, 0, 0, ptr::null(), 0, &mut h),
            QstStatus::Domain
        );
        assert_eq!(
            qst_ensemble_new(5, 0.1, 0.1, 10, 0, bad.as_ptr(), 1, &mut h),
            QstStatus::Domain
        );
        assert_eq!(
            qst_ensemble_new(5, 0.1, 0.1, 10, 0, ptr::null(), 1, &mut h),
            QstStatus::NullPointer
        );
        assert_eq!(qst_ensemble_run(ptr::null_mut()), QstStatus::NullPointer);
    }
}

#[test]
fn status_messages_are_static_strings() {
    for status in [
        QstStatus::Ok,
        QstStatus::NotRun,
        QstStatus::Panic,
        QstStatus::OutOfRange,
    ] {
        let s = unsafe { CStr::from_ptr(qst_status_message(status)) };
        assert!(!s.to_bytes().is_empty());
    }
}
