#ifndef QST_DISORDER_H
#define QST_DISORDER_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum {
  QST_STATUS_OK = 0,
  QST_STATUS_NULL_POINTER = 1,
  QST_STATUS_INVALID_CHAIN = 2,
  /**
   * An argument lies outside its domain (probability, phase, weight, σ, …).
   */
  QST_STATUS_DOMAIN = 3,
  /**
   * The eigensolver did not converge.
   */
  QST_STATUS_NUMERIC_FAILURE = 4,
  QST_STATUS_CONSISTENCY = 5,
  /**
   * The caller's output buffer is shorter than required.
   */
  QST_STATUS_BUFFER_TOO_SMALL = 6,
  /**
   * Results were requested before `qst_ensemble_run` succeeded.
   */
  QST_STATUS_NOT_RUN = 7,
  /**
   * An index is past the end of the requested collection.
   */
  QST_STATUS_OUT_OF_RANGE = 8,
  QST_STATUS_INTERNAL = 9,
  QST_STATUS_PANIC = 10,
} QstStatus;

/**
 * Opaque ensemble handle.
 */
typedef struct QstEnsemble QstEnsemble;

typedef struct {
  double f_min;
  double argmin_beta2;
  /**
   * True when the minimum sits at the stationary point rather than at `beta2 = 1`.
   */
  bool interior;
} QstMinFidelity;

/**
 * Ensemble-level results.
 */
typedef struct {
  size_t realizations;
  double mean_p;
  double std_p;
  double mean_f_avg;
  double std_f_avg;
  /**
   * Fraction of realizations whose average fidelity is below 2/3.
   */
  double fail_prob_f_avg;
  double mean_f_min;
  double std_f_min;
  double delta_0;
  double delta_1;
  double prob_window;
  double prob_window_average;
} QstEnsembleSummary;

/**
 * Statistics of the input fidelity at one grid weight.
 */
typedef struct {
  double beta2;
  double mean;
  double std;
  double fail_prob;
} QstInputFidelityStats;

/**
 * One realization; its per-weight fidelities come from `qst_ensemble_record_f_psi`.
 */
typedef struct {
  size_t index;
  double p;
  double delta_phi;
  double f_avg;
  double f_min;
} QstRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Never NULL.
 */
const char *qst_status_message(QstStatus status);

/**
 * Message of the last failure on this thread, or NULL if none.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *qst_last_error_message(void);

/**
 * Writes the `n_sites − 1` normalized perfect-transfer couplings into `out`.
 *
 * # Safety
 * `out` must be valid for `len` writes.
 */
QstStatus qst_pst_couplings(size_t n_sites, double *out, size_t len);

/**
 * Dimensionless readout time of the perfect-transfer chain.
 *
 * # Safety
 * `out` must be valid for one write.
 */
QstStatus qst_transfer_time(size_t n_sites, double *out);

/**
 * `⟨N| exp(−iHt) |1⟩` for the tridiagonal `H` with `n_sites` diagonal and
 * `n_sites − 1` off-diagonal entries.
 *
 * # Safety
 * `diag` and `offdiag` must be valid for `n_sites` and `n_sites − 1` reads;
 * `out_re` and `out_im` for one write each.
 */
QstStatus qst_transfer_amplitude(const double *diag,
                                 const double *offdiag,
                                 size_t n_sites,
                                 double t,
                                 double *out_re,
                                 double *out_im);

/**
 * Fidelity for the input weight `|β|² = beta2`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
QstStatus qst_fidelity_input(double beta2, double p, double delta_phi, double *out);

/**
 * Fidelity averaged over all pure inputs.
 *
 * # Safety
 * `out` must be valid for one write.
 */
QstStatus qst_fidelity_avg(double p, double delta_phi, double *out);

/**
 * Worst-case fidelity over all pure inputs.
 *
 * # Safety
 * `out` must be valid for one write.
 */
QstStatus qst_fidelity_min(double p, double delta_phi, QstMinFidelity *out);

/**
 * Configure an ensemble on the perfect-transfer chain of `n_sites` sites.
 *
 * `beta2` may be NULL with `beta2_len == 0` to use the default weight grid
 * `0, 0.1, …, 1`. Release the handle with `qst_ensemble_free`.
 *
 * # Safety
 * `beta2` must be valid for `beta2_len` reads; `out` for one write.
 */
QstStatus qst_ensemble_new(size_t n_sites,
                           double sigma_eta,
                           double sigma_xi,
                           size_t realizations,
                           uint64_t master_seed,
                           const double *beta2,
                           size_t beta2_len,
                           QstEnsemble **out);

/**
 * Override the `|p − F_min|` window tolerance (default 0.01). Clears earlier results.
 *
 * # Safety
 * `handle` must come from `qst_ensemble_new`.
 */
QstStatus qst_ensemble_set_epsilon(QstEnsemble *handle, double epsilon);

/**
 * Simulate every realization. Results do not depend on the thread count.
 *
 * # Safety
 * `handle` must come from `qst_ensemble_new`.
 */
QstStatus qst_ensemble_run(QstEnsemble *handle);

/**
 * # Safety
 * `handle` must come from `qst_ensemble_new`; `out` valid for one write.
 */
QstStatus qst_ensemble_summary(const QstEnsemble *handle, QstEnsembleSummary *out);

/**
 * Number of weights in the ensemble's `|β|²` grid.
 *
 * # Safety
 * `handle` must come from `qst_ensemble_new`; `out` valid for one write.
 */
QstStatus qst_ensemble_beta2_count(const QstEnsemble *handle, size_t *out);

/**
 * Input-fidelity statistics at grid weight number `index`.
 *
 * # Safety
 * `handle` must come from `qst_ensemble_new`; `out` valid for one write.
 */
QstStatus qst_ensemble_f_psi(const QstEnsemble *handle, size_t index, QstInputFidelityStats *out);

/**
 * # Safety
 * `handle` must come from `qst_ensemble_new`; `out` valid for one write.
 */
QstStatus qst_ensemble_record_count(const QstEnsemble *handle, size_t *out);

/**
 * # Safety
 * `handle` must come from `qst_ensemble_new`; `out` valid for one write.
 */
QstStatus qst_ensemble_record(const QstEnsemble *handle, size_t index, QstRecord *out);

/**
 * Per-weight input fidelities of one realization, in grid order.
 *
 * # Safety
 * `handle` must come from `qst_ensemble_new`; `out` valid for `len` writes.
 */
QstStatus qst_ensemble_record_f_psi(const QstEnsemble *handle,
                                    size_t index,
                                    double *out,
                                    size_t len);

/**
 * Release a handle. NULL is ignored.
 *
 * # Safety
 * `handle` must be NULL or come from `qst_ensemble_new`, and not be used afterwards.
 */
void qst_ensemble_free(QstEnsemble *handle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QST_DISORDER_H */
