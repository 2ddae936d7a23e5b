//! Regression adjustment of rejection output.
//!
//! Rejection ABC conditions on a ball around the observed summary rather
//! than the point itself. A local regression among the accepted
//! simulations, evaluated at zero discrepancy, partially removes that
//! slack: multinomial logistic for model probabilities, linear for
//! parameter draws.

use crate::abc::{posterior_estimates, AbcResult, Scheme};
use crate::error::{Error, Result};
use crate::regression::{fit_multinomial, fit_ols, DesignMatrix};

/// Adjusted model probabilities, or the unadjusted estimates with the
/// reason adjustment was skipped. Both carry usable probabilities.
#[derive(Debug, Clone)]
pub enum ModelAdjustment {
    Adjusted { probabilities: Vec<f64> },
    NotPossible { probabilities: Vec<f64>, reason: String },
}

impl ModelAdjustment {
    pub fn probabilities(&self) -> &[f64] {
        match self {
            ModelAdjustment::Adjusted { probabilities } => probabilities,
            ModelAdjustment::NotPossible { probabilities, .. } => probabilities,
        }
    }

    pub fn is_adjusted(&self) -> bool {
        matches!(self, ModelAdjustment::Adjusted { .. })
    }
}

/// Adjusted parameter draws for one model, or the raw draws when the
/// regression could not run.
#[derive(Debug, Clone)]
pub enum ParamAdjustment {
    Adjusted { thetas: Vec<Vec<f64>> },
    NotPossible { thetas: Vec<Vec<f64>>, reason: String },
}

impl ParamAdjustment {
    pub fn thetas(&self) -> &[Vec<f64>] {
        match self {
            ParamAdjustment::Adjusted { thetas } => thetas,
            ParamAdjustment::NotPossible { thetas, .. } => thetas,
        }
    }
}

fn sampling_weight(result: &AbcResult, i: usize) -> f64 {
    match result.scheme {
        Scheme::ModelPrior => result.model_prior[i],
        Scheme::EqualCounts => 1.0 / result.models.len() as f64,
    }
}

/// Kept summary components that actually vary across the accepted set.
fn varying_columns(result: &AbcResult) -> Vec<usize> {
    result
        .kept_components
        .iter()
        .copied()
        .filter(|&j| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for a in &result.accepted {
                lo = lo.min(a.summary[j]);
                hi = hi.max(a.summary[j]);
            }
            hi - lo > 1e-12 * hi.abs().max(lo.abs()).max(1.0)
        })
        .collect()
}

fn centered_design(result: &AbcResult, obs_summary: &[f64], cols: &[usize]) -> Result<DesignMatrix> {
    let mut data = Vec::with_capacity(result.accepted.len() * (cols.len() + 1));
    for a in &result.accepted {
        data.push(1.0);
        for &j in cols {
            data.push(a.summary[j] - obs_summary[j]);
        }
    }
    DesignMatrix::new(data, result.accepted.len(), cols.len() + 1)
}

/// Replace the raw acceptance frequencies with a multinomial logistic
/// prediction at the observed summary. Degenerate situations (a single
/// accepted model, too few draws per model, flat summaries, a fit that
/// fails to converge) fall back to the unadjusted estimates.
pub fn adjust_model_probs(
    result: &AbcResult,
    obs_summary: &[f64],
    model_prior: &[f64],
    ridge: f64,
) -> Result<ModelAdjustment> {
    if obs_summary.len() != result.sds.len() {
        return Err(Error::Dimension(format!(
            "observed summary has {} components, result has {}",
            obs_summary.len(),
            result.sds.len()
        )));
    }
    let raw = posterior_estimates(result, model_prior)?;
    let not_possible = |reason: &str| {
        log::warn!("model probability adjustment skipped: {reason}");
        Ok(ModelAdjustment::NotPossible { probabilities: raw.clone(), reason: reason.into() })
    };

    // compress model indices to the classes actually accepted
    let present: Vec<usize> = (0..result.models.len()).filter(|&i| result.counts[i] > 0).collect();
    if present.len() < 2 {
        return not_possible("fewer than two models among the accepted simulations");
    }
    let class_of: Vec<Option<usize>> = {
        let mut map = vec![None; result.models.len()];
        for (k, &m) in present.iter().enumerate() {
            map[m] = Some(k);
        }
        map
    };
    let y: Vec<usize> = result.accepted.iter().map(|a| class_of[a.model].unwrap()).collect();

    let cols = varying_columns(result);
    if cols.is_empty() {
        return not_possible("no summary component varies across the accepted simulations");
    }
    let x = centered_design(result, obs_summary, &cols)?;
    let fit = match fit_multinomial(&x, &y, present.len(), ridge) {
        Ok(f) => f,
        Err(Error::DegenerateFit(why)) => return not_possible(&why),
        Err(e) => return Err(e),
    };
    if !fit.converged {
        return not_possible("multinomial fit did not converge");
    }

    // prediction at zero offset, reweighted from sampling to prior odds
    let mut at_obs = vec![0.0; cols.len() + 1];
    at_obs[0] = 1.0;
    let pred = fit.predict(&at_obs);
    let prior_total: f64 = model_prior.iter().sum();
    let mut probabilities = vec![0.0; result.models.len()];
    for (k, &m) in present.iter().enumerate() {
        probabilities[m] = pred[k] * (model_prior[m] / prior_total) / sampling_weight(result, m);
    }
    let total: f64 = probabilities.iter().sum();
    if !(total > 0.0) {
        return not_possible("adjusted probabilities vanished");
    }
    probabilities.iter_mut().for_each(|p| *p /= total);
    Ok(ModelAdjustment::Adjusted { probabilities })
}

/// Linear adjustment of one model's accepted parameter draws: regress each
/// component on the summary offsets and subtract the fitted trend, moving
/// every draw to the observed summary.
pub fn adjust_params(
    result: &AbcResult,
    obs_summary: &[f64],
    model_index: usize,
) -> Result<ParamAdjustment> {
    if model_index >= result.models.len() {
        return Err(Error::Dimension(format!("model index {model_index} out of range")));
    }
    if obs_summary.len() != result.sds.len() {
        return Err(Error::Dimension(format!(
            "observed summary has {} components, result has {}",
            obs_summary.len(),
            result.sds.len()
        )));
    }
    let rows: Vec<usize> = (0..result.accepted.len())
        .filter(|&i| result.accepted[i].model == model_index)
        .collect();
    if rows.is_empty() {
        return Err(Error::Domain(format!(
            "model {} has no accepted simulations",
            result.models[model_index].id()
        )));
    }
    let thetas: Vec<Vec<f64>> = rows.iter().map(|&i| result.accepted[i].theta.clone()).collect();
    let not_possible = |reason: &str, thetas: Vec<Vec<f64>>| {
        log::warn!(
            "parameter adjustment for model {} skipped: {reason}",
            result.models[model_index].id()
        );
        Ok(ParamAdjustment::NotPossible { thetas, reason: reason.into() })
    };

    let sub = AbcResult {
        accepted: rows.iter().map(|&i| result.accepted[i].clone()).collect(),
        ..result.clone()
    };
    let cols = varying_columns(&sub);
    if cols.is_empty() {
        return not_possible("no summary component varies across the accepted simulations", thetas);
    }
    if rows.len() < cols.len() + 2 {
        return not_possible(
            &format!("{} draws cannot support {} regressors", rows.len(), cols.len() + 1),
            thetas,
        );
    }
    let x = centered_design(&sub, obs_summary, &cols)?;
    let dim = thetas[0].len();
    let mut adjusted = thetas.clone();
    for d in 0..dim {
        let y: Vec<f64> = thetas.iter().map(|t| t[d]).collect();
        let fit = match fit_ols(&x, &y) {
            Ok(f) => f,
            Err(Error::DegenerateFit(why)) => return not_possible(&why, thetas),
            Err(e) => return Err(e),
        };
        for (i, t) in adjusted.iter_mut().enumerate() {
            let row = x.row(i);
            let trend: f64 = (1..row.len()).map(|j| fit.coefficients[j] * row[j]).sum();
            t[d] -= trend;
        }
    }
    Ok(ParamAdjustment::Adjusted { thetas: adjusted })
}
