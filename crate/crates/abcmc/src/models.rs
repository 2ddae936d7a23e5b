//! The model zoo: simulators paired with their parameter priors.
//!
//! Three families are covered. The count models (Poisson, geometric,
//! binomial) and the location models (Laplace, Gaussian) have conjugate or
//! one-dimensional-quadrature marginal likelihoods, so posterior model
//! probabilities can be computed exactly for them. The g-and-k models are
//! defined through their quantile function only; they exist precisely
//! because their likelihood is intractable and simulation is all you get.
//!
//! Every model carries a stable id ("A1" through "C2") used in
//! configurations and output files.

use crate::error::{Error, Result};
use crate::quadrature;
use crate::special::{ln_beta, ln_choose, ln_gamma, normal_cdf, normal_quantile};
use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson, StandardNormal};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// A closed parameter interval, possibly unbounded on either side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval bounds out of order: [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn full() -> Self {
        Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.min(other.hi) }
    }

    pub fn is_unbounded(&self) -> bool {
        self.lo.is_infinite() || self.hi.is_infinite()
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: Option<f64>,
    hi: Option<f64>,
}

// JSON has no infinities, so unbounded endpoints serialize as null.
impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IntervalRepr {
            lo: self.lo.is_finite().then_some(self.lo),
            hi: self.hi.is_finite().then_some(self.hi),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = IntervalRepr::deserialize(d)?;
        let lo = r.lo.unwrap_or(f64::NEG_INFINITY);
        let hi = r.hi.unwrap_or(f64::INFINITY);
        if lo > hi {
            return Err(D::Error::custom("interval bounds out of order"));
        }
        Ok(Interval { lo, hi })
    }
}

/// An observed or simulated sample of iid draws. Entries are finite and the
/// sample is nonempty; construction enforces both.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
}

impl Dataset {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Dimension("dataset is empty".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("dataset contains non-finite value {bad}")));
        }
        Ok(Dataset { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Ascending copy of the sample.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_unstable_by(f64::total_cmp);
        v
    }

    /// One observation per line under an `x` header.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
        let mut values = Vec::new();
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            let field = line.trim();
            if field.is_empty() || (lineno == 0 && field.parse::<f64>().is_err()) {
                continue; // header or blank
            }
            let v: f64 = field.parse().map_err(|_| {
                Error::Config(format!(
                    "bad value {field:?} on line {} of {}",
                    lineno + 1,
                    path.display()
                ))
            })?;
            values.push(v);
        }
        Dataset::new(values).map_err(|_| {
            Error::Config(format!("no finite observations in {}", path.display()))
        })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "x")?;
        for v in &self.values {
            writeln!(out, "{v}")?;
        }
        Ok(())
    }
}

/// Fixed skewness constant of the g-and-k quantile function.
const GK_C: f64 = 0.8;

/// g-and-k quantile with location 0 and scale 1. `u` must lie in (0, 1).
pub fn gk_quantile(u: f64, g: f64, k: f64) -> f64 {
    let z = normal_quantile(u);
    (1.0 + GK_C * (0.5 * g * z).tanh()) * (1.0 + z * z).powf(k) * z
}

/// All models known to the crate, each a simulator plus a prior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Poisson(theta) counts, theta ~ Exp(1). Id "A1".
    Poisson,
    /// Geometric counts on {0, 1, ...} with success probability theta,
    /// theta ~ U(0, 1). Id "A2".
    Geometric,
    /// Binomial(10, theta) counts, theta ~ Beta(1, 9). Id "A3".
    Binomial10,
    /// Laplace location family with unit variance (scale 1/sqrt 2),
    /// theta ~ N(0, 4). Id "B1".
    Laplace,
    /// Normal(theta, 1), theta ~ N(0, 4). Id "B2".
    Gaussian,
    /// Symmetric g-and-k (g = 0), k ~ U(-0.5, 5). Id "C1".
    GkSymmetric,
    /// Skewed g-and-k, g ~ U(0, 4) and k ~ U(-0.5, 5). Id "C2".
    GkSkewed,
}

use Model::*;

impl Model {
    pub const ALL: [Model; 7] =
        [Poisson, Geometric, Binomial10, Laplace, Gaussian, GkSymmetric, GkSkewed];

    pub fn id(self) -> &'static str {
        match self {
            Poisson => "A1",
            Geometric => "A2",
            Binomial10 => "A3",
            Laplace => "B1",
            Gaussian => "B2",
            GkSymmetric => "C1",
            GkSkewed => "C2",
        }
    }

    pub fn from_id(s: &str) -> Result<Model> {
        Model::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }

    pub fn param_dim(self) -> usize {
        match self {
            GkSkewed => 2,
            _ => 1,
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            GkSymmetric => &["k"],
            GkSkewed => &["g", "k"],
            _ => &["theta"],
        }
    }

    /// Closure of the prior support, one interval per parameter.
    pub fn support(self) -> Vec<Interval> {
        match self {
            Poisson => vec![Interval::new(0.0, f64::INFINITY)],
            Geometric | Binomial10 => vec![Interval::new(0.0, 1.0)],
            Laplace | Gaussian => vec![Interval::full()],
            GkSymmetric => vec![Interval::new(-0.5, 5.0)],
            GkSkewed => vec![Interval::new(0.0, 4.0), Interval::new(-0.5, 5.0)],
        }
    }

    pub fn sample_prior<R: Rng + ?Sized>(self, rng: &mut R) -> Vec<f64> {
        match self {
            Poisson => vec![-(-rng.random::<f64>()).ln_1p()],
            Geometric => {
                // open interval: theta = 0 would never produce a finite draw
                loop {
                    let u: f64 = rng.random();
                    if u > 0.0 {
                        return vec![u];
                    }
                }
            }
            Binomial10 => {
                let u: f64 = rng.random();
                vec![1.0 - (1.0 - u).powf(1.0 / 9.0)]
            }
            Laplace | Gaussian => {
                let z: f64 = rng.sample(StandardNormal);
                vec![2.0 * z]
            }
            GkSymmetric => vec![-0.5 + 5.5 * rng.random::<f64>()],
            GkSkewed => {
                vec![4.0 * rng.random::<f64>(), -0.5 + 5.5 * rng.random::<f64>()]
            }
        }
    }

    /// Prior probability of a box. Dimensions beyond the support are
    /// clipped, so the full support always has mass one.
    pub fn prior_mass(self, region: &[Interval]) -> f64 {
        assert_eq!(region.len(), self.param_dim(), "region dimension mismatch");
        let cdfs: &[fn(f64) -> f64] = match self {
            Poisson => &[|x| if x <= 0.0 { 0.0 } else { -(-x).exp_m1() }],
            Geometric => &[|x| x.clamp(0.0, 1.0)],
            Binomial10 => &[|x| {
                let t = x.clamp(0.0, 1.0);
                1.0 - (1.0 - t).powi(9)
            }],
            Laplace | Gaussian => &[|x| normal_cdf(x / 2.0)],
            GkSymmetric => &[|x| ((x + 0.5) / 5.5).clamp(0.0, 1.0)],
            GkSkewed => &[
                |x| (x / 4.0).clamp(0.0, 1.0),
                |x| ((x + 0.5) / 5.5).clamp(0.0, 1.0),
            ],
        };
        region
            .iter()
            .zip(cdfs)
            .map(|(iv, cdf)| (cdf(iv.hi) - cdf(iv.lo)).max(0.0))
            .product()
    }

    fn check_theta(self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.param_dim() {
            return Err(Error::Dimension(format!(
                "model {} takes {} parameter(s), got {}",
                self.id(),
                self.param_dim(),
                theta.len()
            )));
        }
        for (t, iv) in theta.iter().zip(self.support()) {
            if !t.is_finite() || !iv.contains(*t) {
                return Err(Error::Domain(format!(
                    "parameter {t} outside support of model {}",
                    self.id()
                )));
            }
        }
        if self == Geometric && theta[0] == 0.0 {
            return Err(Error::Domain("geometric success probability must be positive".into()));
        }
        Ok(())
    }

    /// Draw a sample of size `n` at the given parameter value.
    pub fn simulate<R: Rng + ?Sized>(self, theta: &[f64], n: usize, rng: &mut R) -> Result<Dataset> {
        self.check_theta(theta)?;
        if n == 0 {
            return Err(Error::Dimension("sample size must be positive".into()));
        }
        let mut values = Vec::with_capacity(n);
        match self {
            Poisson => {
                if theta[0] == 0.0 {
                    values.resize(n, 0.0);
                } else {
                    let d = Poisson::new(theta[0])
                        .map_err(|e| Error::Domain(format!("poisson rate: {e}")))?;
                    for _ in 0..n {
                        values.push(d.sample(rng));
                    }
                }
            }
            Geometric => {
                let log_q = (-theta[0]).ln_1p();
                for _ in 0..n {
                    let u: f64 = rng.random();
                    let x = if log_q == f64::NEG_INFINITY {
                        0.0
                    } else {
                        ((-u).ln_1p() / log_q).floor().max(0.0)
                    };
                    values.push(x);
                }
            }
            Binomial10 => {
                let d = Binomial::new(10, theta[0])
                    .map_err(|e| Error::Domain(format!("binomial probability: {e}")))?;
                for _ in 0..n {
                    values.push(d.sample(rng) as f64);
                }
            }
            Laplace => {
                let b = std::f64::consts::FRAC_1_SQRT_2;
                for _ in 0..n {
                    let e1 = -(-rng.random::<f64>()).ln_1p();
                    let e2 = -(-rng.random::<f64>()).ln_1p();
                    values.push(theta[0] + b * (e1 - e2));
                }
            }
            Gaussian => {
                for _ in 0..n {
                    let z: f64 = rng.sample(StandardNormal);
                    values.push(theta[0] + z);
                }
            }
            GkSymmetric | GkSkewed => {
                let (g, k) = if self == GkSymmetric {
                    (0.0, theta[0])
                } else {
                    (theta[0], theta[1])
                };
                for _ in 0..n {
                    let u = loop {
                        let u: f64 = rng.random();
                        if u > 0.0 {
                            break u;
                        }
                    };
                    values.push(gk_quantile(u, g, k));
                }
            }
        }
        Dataset::new(values)
    }

    pub fn has_exact_marginal(self) -> bool {
        !matches!(self, GkSymmetric | GkSkewed)
    }

    /// Log marginal likelihood of the data with the parameter integrated
    /// out against its prior. Closed form where conjugacy allows, adaptive
    /// quadrature for the Laplace model, unavailable for g-and-k.
    pub fn exact_log_marginal(self, data: &Dataset) -> Result<f64> {
        let xs = data.values();
        let n = xs.len() as f64;
        match self {
            Poisson => {
                let s = check_counts(xs, self, u64::MAX)?;
                let log_fact: f64 = xs.iter().map(|&x| ln_gamma(x + 1.0)).sum();
                Ok(ln_gamma(s + 1.0) - (s + 1.0) * (n + 1.0).ln() - log_fact)
            }
            Geometric => {
                let s = check_counts(xs, self, u64::MAX)?;
                Ok(ln_beta(n + 1.0, s + 1.0))
            }
            Binomial10 => {
                let s = check_counts(xs, self, u64::MAX)?;
                // counts above the number of trials are impossible under
                // this model, not invalid data: the evidence is zero
                if xs.iter().any(|&x| x > 10.0) {
                    return Ok(f64::NEG_INFINITY);
                }
                let log_comb: f64 = xs.iter().map(|&x| ln_choose(10, x as u64)).sum();
                Ok(log_comb + 9f64.ln() + ln_beta(s + 1.0, 10.0 * n - s + 9.0))
            }
            Gaussian => {
                let sx: f64 = xs.iter().sum();
                let sxx: f64 = xs.iter().map(|x| x * x).sum();
                Ok(-0.5 * n * (2.0 * std::f64::consts::PI).ln()
                    - 0.5 * (1.0 + 4.0 * n).ln()
                    - 0.5 * (sxx - 4.0 * sx * sx / (1.0 + 4.0 * n)))
            }
            Laplace => {
                let b = std::f64::consts::FRAC_1_SQRT_2;
                let lik_const = -n * (2.0 * b).ln();
                let prior_const = -0.5 * (8.0 * std::f64::consts::PI).ln();
                let sorted = data.sorted_values();
                let mid = 0.5 * (sorted[0] + sorted[sorted.len() - 1]);
                let lo = mid.min(0.0) - 40.0;
                let hi = mid.max(0.0) + 40.0;
                let log_f = |t: f64| {
                    let abs_dev: f64 = xs.iter().map(|x| (x - t).abs()).sum();
                    lik_const - abs_dev / b + prior_const - t * t / 8.0
                };
                let res = quadrature::log_integrate(log_f, lo, hi, 1e-10);
                if !res.converged {
                    return Err(Error::Domain(
                        "marginal likelihood quadrature did not converge".into(),
                    ));
                }
                Ok(res.value)
            }
            GkSymmetric | GkSkewed => Err(Error::UnsupportedModel(self.id().to_string())),
        }
    }
}

impl Serialize for Model {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Model {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Model::from_id(&s).map_err(D::Error::custom)
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Count data must be nonnegative integers (up to `max`); returns the sum.
fn check_counts(xs: &[f64], model: Model, max: u64) -> Result<f64> {
    let mut s = 0.0;
    for &x in xs {
        if x < 0.0 || x > max as f64 || (x - x.round()).abs() > 1e-9 {
            return Err(Error::Domain(format!(
                "value {x} is not a valid count for model {}",
                model.id()
            )));
        }
        s += x.round();
    }
    Ok(s)
}
