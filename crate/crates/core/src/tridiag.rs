//! Implicit QL eigensolver for real symmetric tridiagonal matrices.
//!
//! The iteration follows the classic EISPACK `tql2` scheme (Wilkinson shift,
//! Givens chasing). Eigenvector accumulation is row-oriented: every rotation
//! acts on a pair of columns of the accumulator, independently for each row.
//! That lets callers track only the rows they need (for end-to-end transfer,
//! the first and last site) at O(N²) cost instead of O(N³).

use crate::error::{QstError, Result};

/// Iteration cap per eigenvalue.
pub const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues of the tridiagonal matrix (`diag`, `offdiag`) in ascending order,
/// plus the selected rows of the orthogonal eigenvector matrix.
///
/// `rows` holds the site indices to track. On return, `out_rows[r][m]` is
/// component `rows[r]` of the eigenvector belonging to eigenvalue `m`.
pub(crate) fn ql_implicit(
    diag: &[f64],
    offdiag: &[f64],
    rows: &[usize],
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    debug_assert_eq!(offdiag.len() + 1, n);

    let mut d = diag.to_vec();
    // e[i] couples i and i+1; e[n-1] = 0 terminates the deflation scan.
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(offdiag);

    let mut z: Vec<Vec<f64>> = rows
        .iter()
        .map(|&r| {
            let mut row = vec![0.0; n];
            row[r] = 1.0;
            row
        })
        .collect();

    let eps = f64::EPSILON;
    let mut shift_total = 0.0;
    let mut tst1: f64 = 0.0;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(QstError::NumericFailure {
                        n_sites: n,
                        index: l,
                        max_iterations: MAX_QL_ITERATIONS,
                        diag: diag.to_vec(),
                        offdiag: offdiag.to_vec(),
                    });
                }

                // Wilkinson-style shift from the leading 2x2 block.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                shift_total += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    for row in z.iter_mut() {
                        let h = row[i + 1];
                        row[i + 1] = s * row[i] + c * h;
                        row[i] = c * row[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += shift_total;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues = order.iter().map(|&k| d[k]).collect();
    let rows_sorted = z
        .iter()
        .map(|row| order.iter().map(|&k| row[k]).collect())
        .collect();
    Ok((eigenvalues, rows_sorted))
}
