//! Rejection ABC for model choice over banks of simulated datasets.
//!
//! A bank holds many (model, parameter, dataset) triples drawn up front.
//! Summarizing the bank and keeping the simulations whose summaries land
//! closest to the observed one gives samples from an approximate joint
//! posterior over models and parameters; the model counts among the kept
//! simulations are the raw material for every estimate downstream.
//!
//! Banks can be drawn with model indicators following the model prior, or
//! with equal counts per model. Equal counts waste no simulations on models
//! the data will reject, and the estimators undo the distortion afterwards
//! by weighting counts with the prior.

use crate::error::{Error, Result};
use crate::models::{Interval, Model};
use crate::rng::RngStream;
use crate::summaries::SummaryDef;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

/// How model indicators are assigned across a bank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Each simulation draws its model from the model prior.
    ModelPrior,
    /// Simulation i uses model i mod M, so counts are equal up to
    /// remainder and interleaved. Interleaving matters: rejection ties are
    /// broken by simulation index, and a block layout would hand every tie
    /// to whichever model was simulated first.
    EqualCounts,
}

/// One simulated dataset, stored sorted since every summary in the crate
/// is a function of the order statistics.
#[derive(Debug, Clone)]
pub struct SimRecord {
    pub sim_index: usize,
    pub model: usize,
    pub theta: Vec<f64>,
    pub sorted_data: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SimBank {
    pub models: Vec<Model>,
    pub model_prior: Vec<f64>,
    pub scheme: Scheme,
    pub n_obs: usize,
    pub records: Vec<SimRecord>,
}

#[derive(Debug, Clone)]
pub struct SummaryRecord {
    pub sim_index: usize,
    pub model: usize,
    pub theta: Vec<f64>,
    pub summary: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SummaryBank {
    pub models: Vec<Model>,
    pub model_prior: Vec<f64>,
    pub scheme: Scheme,
    pub records: Vec<SummaryRecord>,
}

/// Give up on a truncated prior draw after this many rejected attempts;
/// at that point the region holds under roughly 1e-4 prior mass.
const TRUNCATION_ATTEMPT_CAP: usize = 1_000_000;

fn validate_models_prior(models: &[Model], model_prior: &[f64]) -> Result<Vec<f64>> {
    if models.is_empty() {
        return Err(Error::Dimension("no models given".into()));
    }
    if models.len() != model_prior.len() {
        return Err(Error::Dimension(format!(
            "{} models but {} prior weights",
            models.len(),
            model_prior.len()
        )));
    }
    let total: f64 = model_prior.iter().sum();
    if model_prior.iter().any(|p| !p.is_finite() || *p < 0.0) || total <= 0.0 {
        return Err(Error::Domain("model prior weights must be nonnegative with positive sum".into()));
    }
    Ok(model_prior.iter().map(|p| p / total).collect())
}

/// Draw a parameter from the prior restricted to `region` by rejection.
fn sample_truncated<R: Rng + ?Sized>(
    model: Model,
    model_index: usize,
    region: Option<&[Interval]>,
    rng: &mut R,
) -> Result<Vec<f64>> {
    match region {
        None => Ok(model.sample_prior(rng)),
        Some(box_) => {
            for _ in 0..TRUNCATION_ATTEMPT_CAP {
                let theta = model.sample_prior(rng);
                if theta.iter().zip(box_).all(|(t, iv)| iv.contains(*t)) {
                    return Ok(theta);
                }
            }
            Err(Error::TruncationTooTight { model: model_index })
        }
    }
}

/// Simulate a bank of `n_sims` datasets of size `n_obs`. With `regions`,
/// each model's parameters are drawn from its prior truncated to the given
/// box; regions covering the whole support reproduce plain prior sampling
/// draw for draw.
pub fn simulate_bank(
    models: &[Model],
    model_prior: &[f64],
    regions: Option<&[Vec<Interval>]>,
    scheme: Scheme,
    n_sims: usize,
    n_obs: usize,
    stream: &RngStream,
) -> Result<SimBank> {
    let prior = validate_models_prior(models, model_prior)?;
    if n_sims == 0 || n_obs == 0 {
        return Err(Error::Dimension("bank needs positive sims and observations".into()));
    }
    if let Some(rs) = regions {
        if rs.len() != models.len() {
            return Err(Error::Dimension("one region per model required".into()));
        }
        for (r, m) in rs.iter().zip(models) {
            if r.len() != m.param_dim() {
                return Err(Error::Dimension(format!(
                    "region for model {} has {} interval(s), expected {}",
                    m.id(),
                    r.len(),
                    m.param_dim()
                )));
            }
        }
    }
    let cum: Vec<f64> = prior
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let records: Vec<Result<SimRecord>> = (0..n_sims)
        .into_par_iter()
        .map(|i| {
            let sim_stream = stream.child_index(i as u64);
            let model = match scheme {
                Scheme::EqualCounts => i % models.len(),
                Scheme::ModelPrior => {
                    let u: f64 = sim_stream.child("model").rng().random();
                    cum.iter().position(|c| u < *c).unwrap_or(models.len() - 1)
                }
            };
            let mut rng = sim_stream.child("theta").rng();
            let theta =
                sample_truncated(models[model], model, regions.map(|r| r[model].as_slice()), &mut rng)?;
            let data =
                models[model].simulate(&theta, n_obs, &mut sim_stream.child("data").rng())?;
            Ok(SimRecord { sim_index: i, model, theta, sorted_data: data.sorted_values() })
        })
        .collect();
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(SimBank {
        models: models.to_vec(),
        model_prior: prior,
        scheme,
        n_obs,
        records,
    })
}

impl SimBank {
    pub fn summarize(&self, def: &SummaryDef) -> Result<SummaryBank> {
        let records = self
            .records
            .iter()
            .map(|r| {
                Ok(SummaryRecord {
                    sim_index: r.sim_index,
                    model: r.model,
                    theta: r.theta.clone(),
                    summary: def.eval_sorted(&r.sorted_data)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SummaryBank {
            models: self.models.clone(),
            model_prior: self.model_prior.clone(),
            scheme: self.scheme,
            records,
        })
    }

    /// Per-model record counts.
    pub fn model_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.models.len()];
        for r in &self.records {
            counts[r.model] += 1;
        }
        counts
    }
}

/// Sample standard deviation of each summary component across a bank,
/// with the indices of usable components (spread of at least 1e-12).
/// Components without spread are reported and skipped by distances.
pub fn estimate_sds(bank: &SummaryBank) -> Result<(Vec<f64>, Vec<usize>)> {
    if bank.records.len() < 2 {
        return Err(Error::Dimension("need at least two records to scale distances".into()));
    }
    let dim = bank.records[0].summary.len();
    let n = bank.records.len() as f64;
    let mut mean = vec![0.0; dim];
    for r in &bank.records {
        if r.summary.len() != dim {
            return Err(Error::Dimension("summary dimension varies across bank".into()));
        }
        for (m, s) in mean.iter_mut().zip(&r.summary) {
            *m += s;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut ss = vec![0.0; dim];
    for r in &bank.records {
        for ((s, m), x) in ss.iter_mut().zip(&mean).zip(&r.summary) {
            let d = x - m;
            *s += d * d;
        }
    }
    let sds: Vec<f64> = ss.iter().map(|s| (s / (n - 1.0)).sqrt()).collect();
    let kept: Vec<usize> = (0..dim).filter(|j| sds[*j] >= 1e-12).collect();
    for j in 0..dim {
        if sds[j] < 1e-12 {
            log::warn!("summary component {j} is constant across the bank; dropped from distances");
        }
    }
    if kept.is_empty() {
        return Err(Error::DegenerateSummaries(
            "every summary component is constant across the bank".into(),
        ));
    }
    Ok((sds, kept))
}

/// Euclidean distance after scaling each component by its bank standard
/// deviation. Components with spread under 1e-12 are skipped.
pub fn scaled_distance(x: &[f64], y: &[f64], sds: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() != sds.len() {
        return Err(Error::Dimension(format!(
            "scaled distance over mismatched lengths {}, {}, {}",
            x.len(),
            y.len(),
            sds.len()
        )));
    }
    let mut total = 0.0;
    for i in 0..x.len() {
        if sds[i] >= 1e-12 {
            let d = (x[i] - y[i]) / sds[i];
            total += d * d;
        }
    }
    Ok(total.sqrt())
}

#[derive(Debug, Clone)]
pub struct AcceptedRecord {
    pub sim_index: usize,
    pub model: usize,
    pub theta: Vec<f64>,
    pub summary: Vec<f64>,
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct AbcResult {
    pub models: Vec<Model>,
    pub model_prior: Vec<f64>,
    pub scheme: Scheme,
    /// Closest simulations, ascending by distance.
    pub accepted: Vec<AcceptedRecord>,
    /// Accepted count per model.
    pub counts: Vec<usize>,
    /// Distance of the last accepted simulation.
    pub threshold: f64,
    /// Distance of every bank record, in bank order.
    pub distances: Vec<f64>,
    /// Bank standard deviation per summary component.
    pub sds: Vec<f64>,
    /// Summary components that actually entered the distance.
    pub kept_components: Vec<usize>,
}

/// Keep the `n_accept` simulations whose summaries are closest to the
/// observed summary. Exact distance ties are resolved toward the smaller
/// simulation index.
pub fn rejection_abc(bank: &SummaryBank, obs_summary: &[f64], n_accept: usize) -> Result<AbcResult> {
    if bank.records.is_empty() {
        return Err(Error::Dimension("empty bank".into()));
    }
    if n_accept == 0 || n_accept > bank.records.len() {
        return Err(Error::Dimension(format!(
            "cannot accept {n_accept} of {} simulations",
            bank.records.len()
        )));
    }
    if obs_summary.len() != bank.records[0].summary.len() {
        return Err(Error::Dimension(format!(
            "observed summary has {} components, bank has {}",
            obs_summary.len(),
            bank.records[0].summary.len()
        )));
    }
    let (sds, kept) = estimate_sds(bank)?;
    let distances: Vec<f64> = bank
        .records
        .par_iter()
        .map(|r| {
            let mut total = 0.0;
            for &j in &kept {
                let d = (r.summary[j] - obs_summary[j]) / sds[j];
                total += d * d;
            }
            total.sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..bank.records.len()).collect();
    order.sort_unstable_by(|&a, &b| {
        distances[a]
            .total_cmp(&distances[b])
            .then(bank.records[a].sim_index.cmp(&bank.records[b].sim_index))
    });
    let accepted: Vec<AcceptedRecord> = order[..n_accept]
        .iter()
        .map(|&i| {
            let r = &bank.records[i];
            AcceptedRecord {
                sim_index: r.sim_index,
                model: r.model,
                theta: r.theta.clone(),
                summary: r.summary.clone(),
                distance: distances[i],
            }
        })
        .collect();
    let mut counts = vec![0; bank.models.len()];
    for a in &accepted {
        counts[a.model] += 1;
    }
    Ok(AbcResult {
        models: bank.models.clone(),
        model_prior: bank.model_prior.clone(),
        scheme: bank.scheme,
        threshold: accepted.last().unwrap().distance,
        accepted,
        counts,
        distances,
        sds,
        kept_components: kept,
    })
}

impl AbcResult {
    /// Sampling weight each model carried in the bank, which estimators
    /// must divide back out.
    fn sampling_weight(&self, i: usize) -> f64 {
        match self.scheme {
            Scheme::ModelPrior => self.model_prior[i],
            Scheme::EqualCounts => 1.0 / self.models.len() as f64,
        }
    }
}

/// Posterior model probabilities from accepted counts under the given
/// model prior. Counts are reweighted by prior over sampling weight, so
/// both bank schemes give valid estimates.
pub fn posterior_estimates(result: &AbcResult, model_prior: &[f64]) -> Result<Vec<f64>> {
    let prior = validate_models_prior(&result.models, model_prior)?;
    let weights: Vec<f64> = result
        .counts
        .iter()
        .enumerate()
        .map(|(i, c)| *c as f64 * prior[i] / result.sampling_weight(i))
        .collect();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::Domain(
            "every accepted simulation has zero prior weight".into(),
        ));
    }
    Ok(weights.iter().map(|w| w / total).collect())
}

/// Ratio-of-counts Bayes factor of model i over model j, corrected for the
/// bank's sampling weights. Undefined when model j was never accepted.
pub fn bayes_factor(result: &AbcResult, i: usize, j: usize) -> Result<f64> {
    let m = result.models.len();
    if i >= m || j >= m {
        return Err(Error::Dimension(format!("model index out of range: {i}, {j}")));
    }
    if result.counts[j] == 0 {
        return Err(Error::UndefinedBayesFactor(j));
    }
    let num = result.counts[i] as f64 / result.sampling_weight(i);
    let den = result.counts[j] as f64 / result.sampling_weight(j);
    Ok(num / den)
}

/// Audit trail of one rejection run: every simulation with its distance
/// and whether it was kept.
pub fn write_run_csv(bank: &SummaryBank, result: &AbcResult, path: &Path) -> Result<()> {
    if bank.records.len() != result.distances.len() {
        return Err(Error::Dimension("result does not belong to this bank".into()));
    }
    let max_dim = bank.models.iter().map(|m| m.param_dim()).max().unwrap_or(1);
    let mut kept = vec![false; bank.records.len()];
    for a in &result.accepted {
        kept[a.sim_index] = true;
    }
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(out, "sim_index,model")?;
    for d in 1..=max_dim {
        write!(out, ",theta_{d}")?;
    }
    writeln!(out, ",distance,accepted")?;
    for (r, dist) in bank.records.iter().zip(&result.distances) {
        write!(out, "{},{}", r.sim_index, bank.models[r.model].id())?;
        for d in 0..max_dim {
            match r.theta.get(d) {
                Some(t) => write!(out, ",{t}")?,
                None => write!(out, ",")?,
            }
        }
        writeln!(out, ",{dist},{}", kept[r.sim_index])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Model::*;

    fn toy_bank(values: &[(usize, f64)]) -> SummaryBank {
        // scalar summaries, two models unless an index says otherwise
        let n_models = values.iter().map(|v| v.0).max().unwrap() + 1;
        let models = vec![Poisson, Geometric, Binomial10][..n_models].to_vec();
        SummaryBank {
            model_prior: vec![1.0 / n_models as f64; n_models],
            models,
            scheme: Scheme::EqualCounts,
            records: values
                .iter()
                .enumerate()
                .map(|(i, (m, s))| SummaryRecord {
                    sim_index: i,
                    model: *m,
                    theta: vec![0.5],
                    summary: vec![*s],
                })
                .collect(),
        }
    }

    #[test]
    fn sds_match_hand_calculation() {
        let bank = toy_bank(&[(0, 0.0), (1, 2.0), (0, 0.0), (1, 2.0)]);
        let (sds, kept) = estimate_sds(&bank).unwrap();
        // sample sd of {0,2,0,2} is sqrt(4/3)
        assert!((sds[0] - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(kept, vec![0]);
    }

    #[test]
    fn constant_components_are_dropped() {
        let mut bank = toy_bank(&[(0, 0.0), (1, 2.0), (0, 1.0), (1, 3.0)]);
        for r in bank.records.iter_mut() {
            r.summary.push(7.5); // constant second component
        }
        let (sds, kept) = estimate_sds(&bank).unwrap();
        assert_eq!(kept, vec![0]);
        assert!(sds[1] < 1e-12);
        // distances must ignore the dropped component entirely
        let d = scaled_distance(&[0.0, 7.5], &[1.0, 99.0], &sds).unwrap();
        assert!((d - 1.0 / sds[0]).abs() < 1e-12);

        let all_const = toy_bank(&[(0, 5.0), (1, 5.0), (0, 5.0)]);
        assert!(matches!(estimate_sds(&all_const), Err(Error::DegenerateSummaries(_))));
    }

    #[test]
    fn scaled_distance_hand_value() {
        let d = scaled_distance(&[0.0, 0.0], &[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert!((d - 2.0f64.sqrt()).abs() < 1e-15);
        assert!(scaled_distance(&[0.0], &[1.0, 2.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn rejection_keeps_nearest() {
        let bank = toy_bank(&[(0, 0.0), (1, 1.0), (0, 2.0), (1, 3.0), (0, 9.0)]);
        let res = rejection_abc(&bank, &[2.2], 3).unwrap();
        let kept: Vec<usize> = res.accepted.iter().map(|a| a.sim_index).collect();
        assert_eq!(kept, vec![2, 3, 1]); // distances 0.2, 0.8, 1.2 before scaling
        assert_eq!(res.counts, vec![1, 2]);
        assert!(res.accepted.windows(2).all(|w| w[0].distance <= w[1].distance));
        assert!((res.threshold - res.accepted[2].distance).abs() == 0.0);
    }

    #[test]
    fn ties_break_toward_lower_sim_index() {
        // all summaries equidistant from the observation
        let bank = toy_bank(&[(0, 4.0), (1, 6.0), (0, 6.0), (1, 4.0), (0, 4.0), (1, 6.0)]);
        let res = rejection_abc(&bank, &[5.0], 3).unwrap();
        let kept: Vec<usize> = res.accepted.iter().map(|a| a.sim_index).collect();
        assert_eq!(kept, vec![0, 1, 2]);
    }

    #[test]
    fn full_acceptance_reproduces_bank_composition() {
        let bank = toy_bank(&[(0, 0.0), (1, 1.0), (0, 2.0), (1, 3.0), (1, 9.0)]);
        let res = rejection_abc(&bank, &[1.0], 5).unwrap();
        assert_eq!(res.counts, vec![2, 3]);
        let probs = posterior_estimates(&res, &[0.5, 0.5]).unwrap();
        assert!((probs[0] - 0.4).abs() < 1e-15);
        assert!((probs[1] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn invalid_acceptance_sizes() {
        let bank = toy_bank(&[(0, 0.0), (1, 1.0)]);
        assert!(rejection_abc(&bank, &[0.0], 0).is_err());
        assert!(rejection_abc(&bank, &[0.0], 3).is_err());
        assert!(rejection_abc(&bank, &[0.0, 1.0], 1).is_err());
    }

    #[test]
    fn posterior_respects_model_prior() {
        let bank = toy_bank(&[(0, 1.0), (1, 1.0), (0, 3.0), (1, 3.0)]);
        let res = rejection_abc(&bank, &[1.0], 4).unwrap();
        // equal counts, unequal prior: posterior follows the prior
        let probs = posterior_estimates(&res, &[0.8, 0.2]).unwrap();
        assert!((probs[0] - 0.8).abs() < 1e-12);
        let probs = posterior_estimates(&res, &[1.0, 1.0]).unwrap();
        assert!((probs[0] - 0.5).abs() < 1e-12);
        assert!(posterior_estimates(&res, &[0.0, 0.0]).is_err());
        assert!(posterior_estimates(&res, &[0.5]).is_err());
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bayes_factor_chain_is_exact() {
        let bank = toy_bank(&[
            (0, 1.0),
            (1, 1.1),
            (2, 0.9),
            (0, 1.2),
            (1, 0.8),
            (2, 1.3),
            (0, 0.7),
            (1, 1.4),
        ]);
        let res = rejection_abc(&bank, &[1.0], 8).unwrap();
        let b01 = bayes_factor(&res, 0, 1).unwrap();
        let b12 = bayes_factor(&res, 1, 2).unwrap();
        let b02 = bayes_factor(&res, 0, 2).unwrap();
        assert_eq!(b01 * b12, b02);
        assert_eq!(bayes_factor(&res, 0, 0).unwrap(), 1.0);

        // a model with no acceptances cannot sit in the denominator
        let far = toy_bank(&[(0, 1.0), (1, 500.0), (0, 1.2), (1, 501.0), (0, 0.9)]);
        let res = rejection_abc(&far, &[1.0], 2).unwrap();
        assert_eq!(res.counts[1], 0);
        assert!(matches!(bayes_factor(&res, 0, 1), Err(Error::UndefinedBayesFactor(1))));
        assert_eq!(bayes_factor(&res, 1, 0).unwrap(), 0.0);
    }

    #[test]
    fn bank_schemes_and_determinism() {
        let stream = RngStream::from_seed(31);
        let models = [Poisson, Geometric];
        let bank =
            simulate_bank(&models, &[0.5, 0.5], None, Scheme::EqualCounts, 101, 20, &stream)
                .unwrap();
        assert_eq!(bank.model_counts(), vec![51, 50]);
        assert_eq!(bank.records[0].model, 0);
        assert_eq!(bank.records[1].model, 1);
        assert_eq!(bank.records[2].model, 0);
        let again =
            simulate_bank(&models, &[0.5, 0.5], None, Scheme::EqualCounts, 101, 20, &stream)
                .unwrap();
        for (a, b) in bank.records.iter().zip(&again.records) {
            assert_eq!(a.theta, b.theta);
            assert_eq!(a.sorted_data, b.sorted_data);
        }

        let bank =
            simulate_bank(&models, &[0.9, 0.1], None, Scheme::ModelPrior, 4000, 5, &stream)
                .unwrap();
        let counts = bank.model_counts();
        assert!(counts[0] > 3300 && counts[0] < 3900, "{counts:?}");
    }

    #[test]
    fn truncated_banks_respect_regions() {
        let stream = RngStream::from_seed(32);
        let models = [Poisson, Geometric];
        let regions = vec![
            vec![Interval::new(0.5, 1.5)],
            vec![Interval::new(0.2, 0.4)],
        ];
        let bank = simulate_bank(
            &models,
            &[0.5, 0.5],
            Some(&regions),
            Scheme::EqualCounts,
            200,
            10,
            &stream,
        )
        .unwrap();
        for r in &bank.records {
            let iv = &regions[r.model][0];
            assert!(iv.contains(r.theta[0]), "{} outside {:?}", r.theta[0], iv);
        }

        // full-support regions must reproduce plain sampling byte for byte
        let full: Vec<Vec<Interval>> = models.iter().map(|m| m.support()).collect();
        let a = simulate_bank(&models, &[0.5, 0.5], None, Scheme::EqualCounts, 150, 10, &stream)
            .unwrap();
        let b = simulate_bank(
            &models,
            &[0.5, 0.5],
            Some(&full),
            Scheme::EqualCounts,
            150,
            10,
            &stream,
        )
        .unwrap();
        for (x, y) in a.records.iter().zip(&b.records) {
            assert_eq!(x.theta, y.theta);
            assert_eq!(x.sorted_data, y.sorted_data);
        }
    }

    #[test]
    fn hopeless_region_errors_out() {
        let stream = RngStream::from_seed(33);
        let regions = vec![vec![Interval::new(100.0, 100.000001)]];
        let err = simulate_bank(
            &[Gaussian],
            &[1.0],
            Some(&regions),
            Scheme::EqualCounts,
            2,
            5,
            &stream,
        )
        .unwrap_err();
        assert!(matches!(err, Error::TruncationTooTight { model: 0 }));
    }

    #[test]
    fn run_csv_is_complete(){
        let stream = RngStream::from_seed(34);
        let models = [GkSymmetric, GkSkewed];
        let bank =
            simulate_bank(&models, &[0.5, 0.5], None, Scheme::EqualCounts, 40, 100, &stream)
                .unwrap();
        let sbank = bank.summarize(&SummaryDef::OrderStats10).unwrap();
        let res = rejection_abc(&sbank, &[0.0; 10], 7).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.csv");
        write_run_csv(&sbank, &res, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "sim_index,model,theta_1,theta_2,distance,accepted");
        assert_eq!(lines.count(), 40);
        assert_eq!(text.matches(",true").count(), 7);
        // C1 rows leave the second parameter column empty
        assert!(text.lines().nth(1).unwrap().contains("C1"));
        let c1_row = text.lines().nth(1).unwrap();
        let fields: Vec<&str> = c1_row.split(',').collect();
        assert_eq!(fields[3], "");
    }
}
