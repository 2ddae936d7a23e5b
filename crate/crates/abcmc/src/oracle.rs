//! Exact reference posteriors, for validating what the simulation-based
//! pipeline estimates.
//!
//! Two flavors: marginal-likelihood posteriors for the model families that
//! admit them, and brute-force enumeration over small discrete sample
//! spaces. The enumeration version computes the distribution of an ABC
//! acceptance with tolerance zero in closed form, which is what makes
//! statements like "this summary is sufficient for model choice" testable
//! to numerical precision rather than by Monte Carlo.

use crate::error::{Error, Result};
use crate::models::{Dataset, Model};

#[derive(Debug, Clone)]
pub struct ExactPosterior {
    pub models: Vec<Model>,
    pub model_prior: Vec<f64>,
    pub log_marginals: Vec<f64>,
    pub probabilities: Vec<f64>,
}

fn normalize_prior(n: usize, model_prior: &[f64]) -> Result<Vec<f64>> {
    if model_prior.len() != n {
        return Err(Error::Dimension(format!(
            "{n} models but {} prior weights",
            model_prior.len()
        )));
    }
    let total: f64 = model_prior.iter().sum();
    if model_prior.iter().any(|p| !p.is_finite() || *p < 0.0) || total <= 0.0 {
        return Err(Error::Domain(
            "model prior weights must be nonnegative with positive sum".into(),
        ));
    }
    Ok(model_prior.iter().map(|p| p / total).collect())
}

/// Softmax of log weights, stable under large shifts.
fn probs_from_log_weights(logw: &[f64]) -> Result<Vec<f64>> {
    let m = logw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return Err(Error::Domain(
            "the data is impossible under every candidate model".into(),
        ));
    }
    let unnorm: Vec<f64> = logw.iter().map(|w| (w - m).exp()).collect();
    let total: f64 = unnorm.iter().sum();
    Ok(unnorm.iter().map(|u| u / total).collect())
}

/// Posterior model probabilities through exact marginal likelihoods.
/// Only defined when every candidate model has one.
pub fn exact_posterior(
    models: &[Model],
    data: &Dataset,
    model_prior: &[f64],
) -> Result<ExactPosterior> {
    if models.is_empty() {
        return Err(Error::Dimension("no models given".into()));
    }
    let prior = normalize_prior(models.len(), model_prior)?;
    let log_marginals: Vec<f64> = models
        .iter()
        .map(|m| m.exact_log_marginal(data))
        .collect::<Result<_>>()?;
    let logw: Vec<f64> = log_marginals
        .iter()
        .zip(&prior)
        .map(|(lm, p)| lm + p.ln())
        .collect();
    Ok(ExactPosterior {
        models: models.to_vec(),
        model_prior: prior,
        probabilities: probs_from_log_weights(&logw)?,
        log_marginals,
    })
}

/// A distribution over the points 0..len, given by its probability vector.
#[derive(Debug, Clone)]
pub struct DiscreteModel {
    pmf: Vec<f64>,
}

impl DiscreteModel {
    /// Requires nonnegative entries summing to one within 1e-6; the stored
    /// vector is renormalized exactly.
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::Dimension("empty pmf".into()));
        }
        if pmf.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Domain("pmf entries must be nonnegative".into()));
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::Domain(format!("pmf sums to {total}, not 1")));
        }
        Ok(DiscreteModel { pmf: pmf.iter().map(|p| p / total).collect() })
    }

    pub fn len(&self) -> usize {
        self.pmf.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pmf(&self, x: usize) -> f64 {
        self.pmf.get(x).copied().unwrap_or(0.0)
    }
}

fn common_support(models: &[DiscreteModel]) -> Result<usize> {
    if models.len() < 2 {
        return Err(Error::Dimension("need at least two models".into()));
    }
    let k = models[0].len();
    if models.iter().any(|m| m.len() != k) {
        return Err(Error::Dimension("models live on different sample spaces".into()));
    }
    Ok(k)
}

/// The model-evidence proportions at one sample point: component i is
/// pmf_i(x) over the sum across models. This vector is exactly what a
/// summary must determine, point by point, to be sufficient for choosing
/// among the models.
pub fn model_choice_statistic(models: &[DiscreteModel], x: usize) -> Result<Vec<f64>> {
    common_support(models)?;
    let lik: Vec<f64> = models.iter().map(|m| m.pmf(x)).collect();
    let total: f64 = lik.iter().sum();
    if total <= 0.0 {
        return Err(Error::Domain(format!("no model puts mass on point {x}")));
    }
    Ok(lik.iter().map(|l| l / total).collect())
}

/// Exact posterior over models given the full observation.
pub fn discrete_posterior(
    models: &[DiscreteModel],
    x_obs: usize,
    model_prior: &[f64],
) -> Result<Vec<f64>> {
    common_support(models)?;
    let prior = normalize_prior(models.len(), model_prior)?;
    let weights: Vec<f64> =
        models.iter().zip(&prior).map(|(m, p)| m.pmf(x_obs) * p).collect();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::Domain(format!("no model puts mass on point {x_obs}")));
    }
    Ok(weights.iter().map(|w| w / total).collect())
}

/// The distribution an ABC acceptance with tolerance zero targets, computed
/// by enumeration: the posterior over models given that the summary of a
/// fresh draw equals the summary of the observation. Summary values are
/// grouped by exact equality, so `summary` must be a deterministic
/// function of the point.
pub fn enumerated_abc_posterior(
    models: &[DiscreteModel],
    summary: &dyn Fn(usize) -> Vec<f64>,
    x_obs: usize,
    model_prior: &[f64],
) -> Result<Vec<f64>> {
    let k = common_support(models)?;
    if x_obs >= k {
        return Err(Error::Domain(format!("observation {x_obs} outside sample space")));
    }
    let prior = normalize_prior(models.len(), model_prior)?;
    let s_obs = summary(x_obs);
    let mut weights = vec![0.0; models.len()];
    for x in 0..k {
        if summary(x) == s_obs {
            for (w, m) in weights.iter_mut().zip(models) {
                *w += m.pmf(x);
            }
        }
    }
    for (w, p) in weights.iter_mut().zip(&prior) {
        *w *= p;
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::Domain(
            "the matching set has zero probability under every model".into(),
        ));
    }
    Ok(weights.iter().map(|w| w / total).collect())
}
