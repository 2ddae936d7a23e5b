//! Small dense symmetric solves used by the regression fits. Matrices here
//! are at most a few hundred columns, so a plain Cholesky factorization is
//! all that is needed.

/// Factor a symmetric positive definite matrix (row-major, n x n) in place
/// into its lower Cholesky triangle. Returns false if a pivot fails.
pub(crate) fn cholesky(a: &mut [f64], n: usize) -> bool {
    debug_assert_eq!(a.len(), n * n);
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return false;
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    true
}

/// Solve L L^T x = b given the factor from [`cholesky`], overwriting `b`.
pub(crate) fn cholesky_solve(l: &[f64], n: usize, b: &mut [f64]) {
    debug_assert_eq!(b.len(), n);
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

/// Solve A x = b for symmetric positive semi-definite A, adding escalating
/// diagonal jitter when the factorization stalls on the boundary. Returns
/// None when even heavy jitter fails, which signals real rank deficiency.
pub(crate) fn solve_spd(a: &[f64], n: usize, b: &[f64]) -> Option<Vec<f64>> {
    let mean_diag = (0..n).map(|i| a[i * n + i].abs()).sum::<f64>() / n.max(1) as f64;
    let base = if mean_diag > 0.0 { mean_diag } else { 1.0 };
    let mut jitter = 0.0;
    for attempt in 0..8 {
        let mut m = a.to_vec();
        if jitter > 0.0 {
            for i in 0..n {
                m[i * n + i] += jitter;
            }
        }
        if cholesky(&mut m, n) {
            let mut x = b.to_vec();
            cholesky_solve(&m, n, &mut x);
            if x.iter().all(|v| v.is_finite()) {
                return Some(x);
            }
        }
        jitter = base * 1e-12 * 100f64.powi(attempt);
    }
    None
}
