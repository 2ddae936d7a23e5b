//! Regression fits used for summary construction and post-hoc adjustment:
//! binary logistic, multinomial logistic, and least squares.
//!
//! All fits take a dense row-major design matrix whose first column is the
//! intercept; penalties never touch that column. Columns are rescaled
//! internally before any linear algebra, since order-statistic designs can
//! mix magnitudes of 1 and 1e5, and the results are mapped back so callers
//! only ever see original-scale coefficients.

use crate::error::{Error, Result};
use crate::linalg::solve_spd;

#[derive(Debug, Clone)]
pub struct DesignMatrix {
    data: Vec<f64>,
    n_rows: usize,
    n_cols: usize,
}

impl DesignMatrix {
    pub fn new(data: Vec<f64>, n_rows: usize, n_cols: usize) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 || data.len() != n_rows * n_cols {
            return Err(Error::Dimension(format!(
                "design of {} values is not {n_rows} x {n_cols}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("design contains non-finite values".into()));
        }
        Ok(DesignMatrix { data, n_rows, n_cols })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Dimension("ragged design rows".into()));
        }
        DesignMatrix::new(rows.concat(), n_rows, n_cols)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    /// Root-mean-square of each column, for internal rescaling. Zero
    /// columns get scale 1 so the transform stays invertible.
    fn column_scales(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.n_cols];
        for i in 0..self.n_rows {
            for (j, v) in self.row(i).iter().enumerate() {
                s[j] += v * v;
            }
        }
        s.iter()
            .map(|ss| {
                let r = (ss / self.n_rows as f64).sqrt();
                if r > 0.0 {
                    r
                } else {
                    1.0
                }
            })
            .collect()
    }
}

/// Iterations are capped here; fits that hit the cap are returned with
/// `converged = false` rather than discarded, because a usable descent
/// iterate is still a usable summary.
pub const MAX_ITER: usize = 100;
/// Convergence threshold on the max-norm of the penalized score.
pub const SCORE_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct LogisticFit {
    pub coefficients: Vec<f64>,
    pub standard_errors: Vec<f64>,
    /// Unpenalized deviance, -2 log likelihood, after each accepted step;
    /// the first entry is the deviance at the zero coefficient vector.
    pub deviance_trace: Vec<f64>,
    pub converged: bool,
    pub n_iter: usize,
}

impl LogisticFit {
    pub fn deviance(&self) -> f64 {
        *self.deviance_trace.last().unwrap()
    }
}

fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

/// ln(1 + exp(eta)) without overflow.
fn ln1p_exp(eta: f64) -> f64 {
    if eta > 0.0 {
        eta + (-eta).exp().ln_1p()
    } else {
        eta.exp().ln_1p()
    }
}

/// Maximum penalized likelihood for a binary response by Newton iteration
/// with step halving. The penalty is (ridge/2) times the squared norm of
/// the non-intercept coefficients.
pub fn fit_logistic(x: &DesignMatrix, y: &[bool], ridge: f64) -> Result<LogisticFit> {
    if y.len() != x.n_rows() {
        return Err(Error::Dimension(format!(
            "{} responses for {} design rows",
            y.len(),
            x.n_rows()
        )));
    }
    if !(ridge >= 0.0) {
        return Err(Error::Domain(format!("ridge must be nonnegative, got {ridge}")));
    }
    let n_ones = y.iter().filter(|v| **v).count();
    if n_ones == 0 || n_ones == y.len() {
        return Err(Error::DegenerateFit("single response class".into()));
    }

    let n = x.n_rows();
    let p = x.n_cols();
    let scales = x.column_scales();
    // penalty in scaled coordinates that matches `ridge` in original ones
    let lambda: Vec<f64> =
        (0..p).map(|j| if j == 0 { 0.0 } else { ridge / (scales[j] * scales[j]) }).collect();

    let mut beta = vec![0.0; p];
    let mut eta = vec![0.0; n];
    let obj = |eta: &[f64], beta: &[f64]| -> f64 {
        let mut v = 0.0;
        for (e, yi) in eta.iter().zip(y) {
            v += ln1p_exp(*e) - if *yi { *e } else { 0.0 };
        }
        v + 0.5 * beta.iter().zip(&lambda).map(|(b, l)| l * b * b).sum::<f64>()
    };
    let eta_of = |beta: &[f64], eta: &mut [f64]| {
        for i in 0..n {
            let row = x.row(i);
            let mut v = 0.0;
            for j in 0..p {
                v += beta[j] * row[j] / scales[j];
            }
            eta[i] = v;
        }
    };

    let mut current = obj(&eta, &beta);
    let mut trace = vec![deviance_from_obj(current, &beta, &lambda)];
    let mut converged = false;
    let mut n_iter = 0;

    let mut grad = vec![0.0; p];
    let mut hess = vec![0.0; p * p];
    for iter in 1..=MAX_ITER {
        n_iter = iter;
        grad.iter_mut().for_each(|g| *g = 0.0);
        hess.iter_mut().for_each(|h| *h = 0.0);
        for i in 0..n {
            let row = x.row(i);
            let pi = sigmoid(eta[i]);
            let r = (if y[i] { 1.0 } else { 0.0 }) - pi;
            let w = pi * (1.0 - pi);
            for a in 0..p {
                let xa = row[a] / scales[a];
                grad[a] += r * xa;
                if w > 0.0 {
                    let wxa = w * xa;
                    let h = &mut hess[a * p..(a + 1) * p];
                    for b in a..p {
                        h[b] += wxa * row[b] / scales[b];
                    }
                }
            }
        }
        for (g, (l, b)) in grad.iter_mut().zip(lambda.iter().zip(&beta)) {
            *g -= l * b;
        }
        // the penalized score in original coordinates decides convergence
        let score_max =
            grad.iter().zip(&scales).map(|(g, s)| (g * s).abs()).fold(0.0, f64::max);
        if score_max <= SCORE_TOL {
            converged = true;
            n_iter = iter - 1;
            break;
        }
        for a in 0..p {
            for b in 0..a {
                hess[a * p + b] = hess[b * p + a];
            }
            hess[a * p + a] += lambda[a];
        }
        let step = solve_spd(&hess, p, &grad)
            .ok_or_else(|| Error::DegenerateFit("singular information matrix".into()))?;

        // halve until the penalized objective improves
        let mut scale_step = 1.0;
        let mut improved = false;
        let mut cand = beta.clone();
        for _ in 0..30 {
            for j in 0..p {
                cand[j] = beta[j] + scale_step * step[j];
            }
            eta_of(&cand, &mut eta);
            let val = obj(&eta, &cand);
            if val <= current {
                beta.copy_from_slice(&cand);
                // a stalled objective means we are at numerical precision
                improved = current - val > 1e-12 * (1.0 + current.abs());
                current = val;
                break;
            }
            scale_step *= 0.5;
        }
        if scale_step <= 2.0_f64.powi(-30) {
            eta_of(&beta, &mut eta);
        }
        trace.push(deviance_from_obj(current, &beta, &lambda));
        if !improved {
            break;
        }
    }
    if !converged {
        // the loop may have stopped on a stall exactly at the optimum
        eta_of(&beta, &mut eta);
        let mut score_max = 0.0_f64;
        for j in 0..p {
            let mut g = -lambda[j] * beta[j];
            for i in 0..n {
                g += ((if y[i] { 1.0 } else { 0.0 }) - sigmoid(eta[i])) * x.row(i)[j]
                    / scales[j];
            }
            score_max = score_max.max((g * scales[j]).abs());
        }
        converged = score_max <= SCORE_TOL;
    }

    // covariance from the penalized information at the optimum
    let mut hess = vec![0.0; p * p];
    for i in 0..n {
        let row = x.row(i);
        let pi = sigmoid(eta[i]);
        let w = pi * (1.0 - pi);
        if w > 0.0 {
            for a in 0..p {
                let wxa = w * row[a] / scales[a];
                for b in a..p {
                    hess[a * p + b] += wxa * row[b] / scales[b];
                }
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            hess[a * p + b] = hess[b * p + a];
        }
        hess[a * p + a] += lambda[a];
    }
    let mut se = vec![f64::NAN; p];
    for j in 0..p {
        let mut e = vec![0.0; p];
        e[j] = 1.0;
        if let Some(col) = solve_spd(&hess, p, &e) {
            se[j] = (col[j].max(0.0)).sqrt() / scales[j];
        }
    }

    let coefficients: Vec<f64> = beta.iter().zip(&scales).map(|(b, s)| b / s).collect();
    Ok(LogisticFit { coefficients, standard_errors: se, deviance_trace: trace, converged, n_iter })
}

/// Strip the penalty back out of the objective to report plain deviance.
fn deviance_from_obj(obj: f64, beta: &[f64], lambda: &[f64]) -> f64 {
    let pen = 0.5 * beta.iter().zip(lambda).map(|(b, l)| l * b * b).sum::<f64>();
    2.0 * (obj - pen)
}

#[derive(Debug, Clone)]
pub struct MultinomialFit {
    /// One coefficient row per non-reference class; the last class is the
    /// reference with all coefficients zero.
    pub coefficients: Vec<Vec<f64>>,
    pub n_classes: usize,
    pub deviance: f64,
    pub converged: bool,
    pub n_iter: usize,
}

impl MultinomialFit {
    /// Class probabilities for one design row, normalized to sum to one.
    pub fn predict(&self, row: &[f64]) -> Vec<f64> {
        let mut eta: Vec<f64> = self
            .coefficients
            .iter()
            .map(|c| c.iter().zip(row).map(|(a, b)| a * b).sum::<f64>())
            .collect();
        eta.push(0.0);
        let m = eta.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut probs: Vec<f64> = eta.iter().map(|e| (e - m).exp()).collect();
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        probs
    }
}

/// Multinomial logistic fit with the last class as reference, full Newton
/// steps on the stacked coefficient vector, and the same penalty and
/// stopping rules as the binary fit.
pub fn fit_multinomial(
    x: &DesignMatrix,
    y: &[usize],
    n_classes: usize,
    ridge: f64,
) -> Result<MultinomialFit> {
    if y.len() != x.n_rows() {
        return Err(Error::Dimension(format!(
            "{} responses for {} design rows",
            y.len(),
            x.n_rows()
        )));
    }
    if n_classes < 2 {
        return Err(Error::Domain("need at least two classes".into()));
    }
    if let Some(bad) = y.iter().find(|c| **c >= n_classes) {
        return Err(Error::Domain(format!("class label {bad} out of range")));
    }
    let mut counts = vec![0usize; n_classes];
    for c in y {
        counts[*c] += 1;
    }
    if let Some((c, _)) = counts.iter().enumerate().find(|(_, n)| **n < 2) {
        return Err(Error::DegenerateFit(format!(
            "class {c} has fewer than two observations"
        )));
    }
    let p = x.n_cols();
    if p > 1 {
        let all_const = (1..p).all(|j| {
            let first = x.row(0)[j];
            (0..x.n_rows()).all(|i| x.row(i)[j] == first)
        });
        if all_const {
            return Err(Error::DegenerateFit(
                "every non-intercept column is constant".into(),
            ));
        }
    }

    let n = x.n_rows();
    let k = n_classes - 1;
    let dim = k * p;
    let scales = x.column_scales();
    let lambda: Vec<f64> =
        (0..p).map(|j| if j == 0 { 0.0 } else { ridge / (scales[j] * scales[j]) }).collect();

    // probabilities for one row under scaled coefficients
    let class_probs = |beta: &[f64], row: &[f64], out: &mut Vec<f64>| {
        out.clear();
        for c in 0..k {
            let mut e = 0.0;
            for j in 0..p {
                e += beta[c * p + j] * row[j] / scales[j];
            }
            out.push(e);
        }
        out.push(0.0);
        let m = out.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut total = 0.0;
        for e in out.iter_mut() {
            *e = (*e - m).exp();
            total += *e;
        }
        for e in out.iter_mut() {
            *e /= total;
        }
    };
    let obj = |beta: &[f64]| -> f64 {
        let mut v = 0.0;
        let mut probs = Vec::with_capacity(n_classes);
        for i in 0..n {
            class_probs(beta, x.row(i), &mut probs);
            v -= probs[y[i]].max(1e-300).ln();
        }
        let mut pen = 0.0;
        for c in 0..k {
            for j in 0..p {
                pen += lambda[j] * beta[c * p + j] * beta[c * p + j];
            }
        }
        v + 0.5 * pen
    };

    let mut beta = vec![0.0; dim];
    let mut current = obj(&beta);
    let mut converged = false;
    let mut n_iter = 0;
    let mut probs = Vec::with_capacity(n_classes);
    for iter in 1..=MAX_ITER {
        n_iter = iter;
        let mut grad = vec![0.0; dim];
        let mut hess = vec![0.0; dim * dim];
        for i in 0..n {
            let row = x.row(i);
            class_probs(&beta, row, &mut probs);
            for c in 0..k {
                let rc = (if y[i] == c { 1.0 } else { 0.0 }) - probs[c];
                for a in 0..p {
                    grad[c * p + a] += rc * row[a] / scales[a];
                }
                for d in c..k {
                    let w = probs[c] * ((if c == d { 1.0 } else { 0.0 }) - probs[d]);
                    if w == 0.0 {
                        continue;
                    }
                    for a in 0..p {
                        let wxa = w * row[a] / scales[a];
                        for b in 0..p {
                            hess[(c * p + a) * dim + d * p + b] += wxa * row[b] / scales[b];
                        }
                    }
                }
            }
        }
        for c in 0..k {
            for j in 0..p {
                grad[c * p + j] -= lambda[j] * beta[c * p + j];
            }
        }
        let score_max = (0..dim)
            .map(|idx| (grad[idx] * scales[idx % p]).abs())
            .fold(0.0, f64::max);
        if score_max <= SCORE_TOL {
            converged = true;
            n_iter = iter - 1;
            break;
        }
        // mirror the upper block triangle before solving
        for a in 0..dim {
            for b in 0..a {
                hess[a * dim + b] = hess[b * dim + a];
            }
            hess[a * dim + a] += lambda[a % p];
        }
        let step = solve_spd(&hess, dim, &grad)
            .ok_or_else(|| Error::DegenerateFit("singular information matrix".into()))?;
        let mut scale_step = 1.0;
        let mut improved = false;
        let mut cand = beta.clone();
        for _ in 0..30 {
            for j in 0..dim {
                cand[j] = beta[j] + scale_step * step[j];
            }
            let val = obj(&cand);
            if val <= current {
                beta.copy_from_slice(&cand);
                improved = current - val > 1e-12 * (1.0 + current.abs());
                current = val;
                break;
            }
            scale_step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    if !converged {
        // a stalled line search may sit exactly at the optimum
        let mut grad = vec![0.0; dim];
        for i in 0..n {
            let row = x.row(i);
            class_probs(&beta, row, &mut probs);
            for c in 0..k {
                let rc = (if y[i] == c { 1.0 } else { 0.0 }) - probs[c];
                for a in 0..p {
                    grad[c * p + a] += rc * row[a] / scales[a];
                }
            }
        }
        for c in 0..k {
            for j in 0..p {
                grad[c * p + j] -= lambda[j] * beta[c * p + j];
            }
        }
        let score_max = (0..dim)
            .map(|idx| (grad[idx] * scales[idx % p]).abs())
            .fold(0.0, f64::max);
        converged = score_max <= SCORE_TOL;
    }

    let mut pen = 0.0;
    for c in 0..k {
        for j in 0..p {
            pen += lambda[j] * beta[c * p + j] * beta[c * p + j];
        }
    }
    let coefficients: Vec<Vec<f64>> = (0..k)
        .map(|c| (0..p).map(|j| beta[c * p + j] / scales[j]).collect())
        .collect();
    Ok(MultinomialFit {
        coefficients,
        n_classes,
        deviance: 2.0 * (current - 0.5 * pen),
        converged,
        n_iter,
    })
}

#[derive(Debug, Clone)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
}

/// Least squares through the normal equations with a 1e-10 diagonal
/// stabilizer. Designs that stay rank deficient even under escalating
/// jitter are reported as degenerate.
pub fn fit_ols(x: &DesignMatrix, y: &[f64]) -> Result<OlsFit> {
    if y.len() != x.n_rows() {
        return Err(Error::Dimension(format!(
            "{} responses for {} design rows",
            y.len(),
            x.n_rows()
        )));
    }
    let n = x.n_rows();
    let p = x.n_cols();
    let scales = x.column_scales();
    let mut xtx = vec![0.0; p * p];
    let mut xty = vec![0.0; p];
    for i in 0..n {
        let row = x.row(i);
        for a in 0..p {
            let xa = row[a] / scales[a];
            xty[a] += xa * y[i];
            for b in a..p {
                xtx[a * p + b] += xa * row[b] / scales[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            xtx[a * p + b] = xtx[b * p + a];
        }
        xtx[a * p + a] += 1e-10;
    }
    let beta_scaled = solve_spd(&xtx, p, &xty)
        .ok_or_else(|| Error::DegenerateFit("rank-deficient least squares design".into()))?;
    let coefficients: Vec<f64> =
        beta_scaled.iter().zip(&scales).map(|(b, s)| b / s).collect();
    let fitted: Vec<f64> = (0..n)
        .map(|i| x.row(i).iter().zip(&coefficients).map(|(a, b)| a * b).sum())
        .collect();
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(yi, f)| yi - f).collect();
    Ok(OlsFit { coefficients, fitted, residuals })
}
