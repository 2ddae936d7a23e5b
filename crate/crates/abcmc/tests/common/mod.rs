//! Shared helpers for the integration tests: brute-force log-marginal
//! evaluators that share no code with the library's closed forms or its
//! adaptive quadrature, so agreement is meaningful.

use abcmc::models::Dataset;

/// Log of the trapezoid integral of exp(g) on a uniform grid, computed in
/// log space so widely scaled integrands survive.
pub fn log_trapezoid(g: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    let h = (hi - lo) / panels as f64;
    let mut vals = Vec::with_capacity(panels + 1);
    let mut max = f64::NEG_INFINITY;
    for k in 0..=panels {
        let v = g(lo + h * k as f64);
        max = max.max(v);
        vals.push(v);
    }
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut total = 0.0;
    for (k, v) in vals.iter().enumerate() {
        let w = if k == 0 || k == panels { 0.5 } else { 1.0 };
        total += w * (v - max).exp();
    }
    max + total.ln() + h.ln()
}

fn ln_factorial(x: f64) -> f64 {
    let n = x as u64;
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn ln_binom_10(x: f64) -> f64 {
    ln_factorial(10.0) - ln_factorial(x) - ln_factorial(10.0 - x)
}

/// x * ln(y) with the 0 * ln(0) = 0 convention, so integrands stay correct
/// at support endpoints where the maximizer can sit.
fn xlny(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// Poisson data, Exp(1) rate prior.
pub fn brute_log_marginal_poisson(data: &Dataset) -> f64 {
    let v = data.values();
    let n = v.len() as f64;
    let s: f64 = v.iter().sum();
    let const_term: f64 = -v.iter().map(|&x| ln_factorial(x)).sum::<f64>();
    // posterior rate is Gamma(s+1, n+1); the range covers its far tail
    let hi = ((s + 1.0) + 40.0 * (s + 1.0).sqrt()) / (n + 1.0) + 1.0;
    log_trapezoid(
        |theta| xlny(s, theta) - (n + 1.0) * theta + const_term,
        0.0,
        hi,
        1 << 21,
    )
}

/// Geometric data on {0,1,...}, uniform success-probability prior.
pub fn brute_log_marginal_geometric(data: &Dataset) -> f64 {
    let v = data.values();
    let n = v.len() as f64;
    let s: f64 = v.iter().sum();
    log_trapezoid(
        |theta| xlny(n, theta) + xlny(s, 1.0 - theta),
        0.0,
        1.0,
        1 << 20,
    )
}

/// Binomial(10) data, Beta(1,9) prior.
pub fn brute_log_marginal_binomial(data: &Dataset) -> f64 {
    let v = data.values();
    let n = v.len() as f64;
    let s: f64 = v.iter().sum();
    let const_term: f64 = v.iter().map(|&x| ln_binom_10(x)).sum::<f64>() + (9.0f64).ln();
    log_trapezoid(
        |theta| const_term + xlny(s, theta) + xlny(10.0 * n - s + 8.0, 1.0 - theta),
        0.0,
        1.0,
        1 << 20,
    )
}

/// Unit-variance normal data, N(0, 2^2) location prior.
pub fn brute_log_marginal_normal(data: &Dataset) -> f64 {
    let v = data.values();
    let n = v.len() as f64;
    let sum: f64 = v.iter().sum();
    let sum_sq: f64 = v.iter().map(|x| x * x).sum();
    let two_pi = std::f64::consts::TAU;
    log_trapezoid(
        |theta| {
            let loglik = -0.5 * n * two_pi.ln() - 0.5 * (sum_sq - 2.0 * theta * sum + n * theta * theta);
            let logprior = -0.5 * (8.0 * std::f64::consts::PI).ln() - theta * theta / 8.0;
            loglik + logprior
        },
        -40.0,
        40.0,
        1 << 21,
    )
}

/// Laplace(theta, 1/sqrt(2)) data, N(0, 2^2) location prior, on a dense
/// grid. The absolute-deviation sum is piecewise linear in theta, so a
/// prefix-sum sweep gives each grid point in constant time.
pub fn brute_log_marginal_laplace(data: &Dataset) -> f64 {
    let sorted = data.sorted_values();
    let n = sorted.len();
    let total: f64 = sorted.iter().sum();
    let mut prefix = vec![0.0; n + 1];
    for (i, &x) in sorted.iter().enumerate() {
        prefix[i + 1] = prefix[i] + x;
    }

    let lo = (-40.0f64).min(sorted[0] - 5.0);
    let hi = 40.0f64.max(sorted[n - 1] + 5.0);
    let panels: usize = 1 << 23;
    let h = (hi - lo) / panels as f64;
    let sqrt2 = std::f64::consts::SQRT_2;
    let const_term = -(n as f64) * 0.5 * (2.0f64).ln() - 0.5 * (8.0 * std::f64::consts::PI).ln();

    let mut k = 0usize; // count of observations <= theta
    let mut vals = Vec::with_capacity(panels + 1);
    let mut max = f64::NEG_INFINITY;
    for step in 0..=panels {
        let theta = lo + h * step as f64;
        while k < n && sorted[k] <= theta {
            k += 1;
        }
        let kf = k as f64;
        let abs_sum = (kf * theta - prefix[k]) + (total - prefix[k] - (n as f64 - kf) * theta);
        let v = const_term - sqrt2 * abs_sum - theta * theta / 8.0;
        max = max.max(v);
        vals.push(v);
    }
    let mut sum = 0.0;
    for (step, v) in vals.iter().enumerate() {
        let w = if step == 0 || step == panels { 0.5 } else { 1.0 };
        sum += w * (v - max).exp();
    }
    max + sum.ln() + h.ln()
}
