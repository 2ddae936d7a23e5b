//! The regression-fitted summary pipeline.
//!
//! Model choice by ABC lives or dies on the summary statistics, and good
//! ones are rarely obvious. This module builds them from the simulations
//! themselves: fit a logistic regression of model indicator on the order
//! statistics of simulated data, and use the fitted log-odds, one per model
//! pair, as the summaries for a rejection run.
//!
//! The full pipeline sharpens this with a pilot stage. A cheap rejection
//! run with generic summaries locates the region of parameter space
//! compatible with the observation; training then simulates only from
//! priors truncated to that region, which concentrates the regression on
//! datasets that look like the observed one. Truncating the priors skews
//! the accepted model counts, so the final probabilities are corrected by
//! each region's prior mass.

use crate::abc::{
    posterior_estimates, rejection_abc, simulate_bank, AbcResult, Scheme, SimBank, SummaryBank,
};
use crate::error::{Error, Result};
use crate::models::{Dataset, Interval, Model};
use crate::regression::{fit_logistic, DesignMatrix};
use crate::rng::RngStream;
use crate::summaries::{FittedSummary, SummaryDef};
use serde::Serialize;

/// Per-model box the training priors are truncated to, with the prior mass
/// it retains, which the final estimates divide back out.
#[derive(Debug, Clone, Serialize)]
pub struct TrainingRegion {
    pub intervals: Vec<Interval>,
    pub prior_mass: f64,
    /// How many of the pilot's acceptances this model placed. When under
    /// two, the box is bounded by the model's own nearest pilot draws
    /// instead; boxes holding less prior mass than the truncated sampler
    /// can hit fall back to the full support.
    pub pilot_accepted: usize,
}

/// Regions below this prior mass would starve rejection sampling (the
/// sampler gives up under an acceptance rate of roughly 1e-4), so the
/// pilot keeps the full prior instead.
const MIN_REGION_MASS: f64 = 1e-4;

impl TrainingRegion {
    pub fn full_support(model: Model) -> Self {
        TrainingRegion { intervals: model.support(), prior_mass: 1.0, pilot_accepted: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    /// Total simulation budget across pilot and training.
    pub total_sims: usize,
    /// Share of the budget reserved for the pilot stage. The reservation
    /// applies whether or not the pilot runs, so truncated and plain runs
    /// of the same budget see identical training draws.
    pub pilot_fraction: f64,
    pub n_accept_pilot: usize,
    pub n_accept_main: usize,
    /// Penalty for the pair fits.
    pub ridge: f64,
    /// Run the pilot and truncate training priors to the fitted regions.
    /// Without this the pipeline is the plain variant: full-support
    /// training, no correction.
    pub truncate: bool,
    /// Score the training simulations themselves in the main rejection
    /// run. The alternative splits training in half, fitting on the first
    /// half and scoring the second.
    pub reuse_training_for_main: bool,
    /// Summary driving the pilot rejection.
    pub pilot_summary: SummaryDef,
    /// Diagnostic switch: run the pilot normally but replace every fitted
    /// region with the full support. A truncated run configured this way
    /// must reproduce the plain variant exactly; anything else means state
    /// leaks between stages.
    pub force_full_regions: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            total_sims: 20_000,
            pilot_fraction: 0.25,
            n_accept_pilot: 100,
            n_accept_main: 100,
            ridge: 1e-6,
            truncate: true,
            reuse_training_for_main: true,
            pilot_summary: SummaryDef::OrderStats10,
            force_full_regions: false,
        }
    }
}

impl PipelineConfig {
    pub fn n_pilot(&self) -> usize {
        (self.total_sims as f64 * self.pilot_fraction).round() as usize
    }

    pub fn n_train(&self) -> usize {
        self.total_sims - self.n_pilot()
    }

    fn validate(&self, n_models: usize) -> Result<()> {
        if n_models < 2 {
            return Err(Error::Config("need at least two models".into()));
        }
        if !(self.pilot_fraction > 0.0 && self.pilot_fraction < 1.0) {
            return Err(Error::Config(format!(
                "pilot fraction must lie in (0, 1), got {}",
                self.pilot_fraction
            )));
        }
        if !(self.ridge >= 0.0) {
            return Err(Error::Config("ridge must be nonnegative".into()));
        }
        let n_pilot = self.n_pilot();
        let n_train = self.n_train();
        if self.truncate && (self.n_accept_pilot == 0 || self.n_accept_pilot > n_pilot) {
            return Err(Error::Config(format!(
                "pilot accepts {} of {n_pilot} simulations",
                self.n_accept_pilot
            )));
        }
        let n_main = if self.reuse_training_for_main {
            n_train
        } else {
            n_train - n_train.div_ceil(2)
        };
        if n_train < 2 * n_models {
            return Err(Error::Config(format!(
                "{n_train} training simulations cannot cover {n_models} models"
            )));
        }
        if self.n_accept_main == 0 || self.n_accept_main > n_main {
            return Err(Error::Config(format!(
                "main run accepts {} of {n_main} simulations",
                self.n_accept_main
            )));
        }
        Ok(())
    }
}

/// Componentwise min-max box over the given draws, widened when flat and
/// clipped to the support. None when the box holds too little prior mass
/// for the truncated sampler.
fn bound_box(model: Model, thetas: &[&[f64]]) -> Option<(Vec<Interval>, f64)> {
    let support = model.support();
    let intervals: Vec<Interval> = (0..model.param_dim())
        .map(|d| {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for t in thetas {
                lo = lo.min(t[d]);
                hi = hi.max(t[d]);
            }
            if hi - lo < 1e-12 * lo.abs().max(1.0) {
                // a flat range would make rejection sampling hopeless
                let c = 0.5 * (lo + hi);
                let w = 1e-6 * c.abs().max(1.0);
                lo = c - w;
                hi = c + w;
            }
            Interval::new(lo, hi).intersect(&support[d])
        })
        .collect();
    let prior_mass = model.prior_mass(&intervals);
    if prior_mass < MIN_REGION_MASS {
        log::warn!(
            "model {} pilot region holds prior mass {prior_mass:.2e}, below the truncated sampler's floor; training keeps its full prior",
            model.id()
        );
        return None;
    }
    Some((intervals, prior_mass))
}

/// Turn the pilot run into per-model boxes: the min-max range of each
/// model's accepted parameters. A model the acceptance step passed over
/// still needs a region that covers its plausible parameters, so models
/// with fewer than two acceptances are bounded by their own nearest pilot
/// simulations, as many as the run accepted overall.
pub fn regions_from_pilot(result: &AbcResult, bank: &SummaryBank) -> Result<Vec<TrainingRegion>> {
    if bank.records.len() != result.distances.len() {
        return Err(Error::Dimension(format!(
            "pilot bank has {} records but the result scored {}",
            bank.records.len(),
            result.distances.len()
        )));
    }
    result
        .models
        .iter()
        .enumerate()
        .map(|(mi, model)| {
            let accepted: Vec<&[f64]> = result
                .accepted
                .iter()
                .filter(|a| a.model == mi)
                .map(|a| a.theta.as_slice())
                .collect();
            let pilot_accepted = accepted.len();
            let thetas = if pilot_accepted >= 2 {
                accepted
            } else {
                let mut own: Vec<usize> = (0..bank.records.len())
                    .filter(|&i| bank.records[i].model == mi)
                    .collect();
                if own.len() < 2 {
                    log::warn!(
                        "model {} has {} pilot simulation(s), too few to bound a region; training keeps its full prior",
                        model.id(),
                        own.len()
                    );
                    return Ok(TrainingRegion { pilot_accepted, ..TrainingRegion::full_support(*model) });
                }
                own.sort_unstable_by(|&a, &b| {
                    result.distances[a]
                        .total_cmp(&result.distances[b])
                        .then(bank.records[a].sim_index.cmp(&bank.records[b].sim_index))
                });
                let k = result.accepted.len().max(2).min(own.len());
                log::info!(
                    "model {} placed {pilot_accepted} draw(s) among the pilot acceptances; bounding its region by its own {k} nearest simulations",
                    model.id()
                );
                own[..k].iter().map(|&i| bank.records[i].theta.as_slice()).collect()
            };
            Ok(match bound_box(*model, &thetas) {
                Some((intervals, prior_mass)) => {
                    TrainingRegion { intervals, prior_mass, pilot_accepted }
                }
                None => TrainingRegion { pilot_accepted, ..TrainingRegion::full_support(*model) },
            })
        })
        .collect()
}

/// How one pairwise summary fit went.
#[derive(Debug, Clone, Serialize)]
pub struct PairFitDiag {
    pub pair: (usize, usize),
    pub converged: bool,
    pub n_iter: usize,
    pub deviance: Option<f64>,
    /// True when the fit was degenerate and the coefficients were zeroed,
    /// leaving a constant summary component.
    pub zeroed: bool,
}

/// Fit one logistic regression per model pair on the order-statistic basis
/// of the bank's datasets, predicting the first pair member. Degenerate
/// pairs get zero coefficients rather than sinking the run.
pub fn fit_model_choice_summaries(
    bank: &SimBank,
    ridge: f64,
) -> Result<(FittedSummary, Vec<PairFitDiag>)> {
    let m = bank.models.len();
    if m < 2 {
        return Err(Error::Dimension("need at least two models to fit summaries".into()));
    }
    let p = bank.n_obs + 1;
    let mut pairs = Vec::with_capacity(m * (m - 1) / 2);
    let mut coefficients = Vec::with_capacity(pairs.capacity());
    let mut diags = Vec::with_capacity(pairs.capacity());
    for i in 0..m {
        for j in (i + 1)..m {
            let mut rows = Vec::new();
            let mut y = Vec::new();
            for r in &bank.records {
                if r.model == i || r.model == j {
                    rows.push(1.0);
                    rows.extend_from_slice(&r.sorted_data);
                    y.push(r.model == i);
                }
            }
            let n_rows = y.len();
            let fit = DesignMatrix::new(rows, n_rows.max(1), p)
                .and_then(|x| fit_logistic(&x, &y, ridge));
            match fit {
                Ok(f) => {
                    diags.push(PairFitDiag {
                        pair: (i, j),
                        converged: f.converged,
                        n_iter: f.n_iter,
                        deviance: Some(f.deviance()),
                        zeroed: false,
                    });
                    coefficients.push(f.coefficients);
                }
                Err(Error::DegenerateFit(why)) => {
                    log::warn!(
                        "summary fit for pair ({}, {}) is degenerate ({why}); using zero coefficients",
                        bank.models[i].id(),
                        bank.models[j].id()
                    );
                    diags.push(PairFitDiag {
                        pair: (i, j),
                        converged: false,
                        n_iter: 0,
                        deviance: None,
                        zeroed: true,
                    });
                    coefficients.push(vec![0.0; p]);
                }
                Err(e) => return Err(e),
            }
            pairs.push((i, j));
        }
    }
    Ok((FittedSummary::new(pairs, coefficients, bank.n_obs)?, diags))
}

/// Reweight accepted counts by region prior mass and model prior, then
/// normalize. Proposals truncated to a region over-represent that model by
/// the mass the region discarded; multiplying by the retained mass undoes
/// this.
pub fn truncation_correct(
    result: &AbcResult,
    regions: &[TrainingRegion],
    model_prior: &[f64],
) -> Result<Vec<f64>> {
    if regions.len() != result.models.len() || model_prior.len() != result.models.len() {
        return Err(Error::Dimension(
            "regions and prior must match the result's models".into(),
        ));
    }
    let total_prior: f64 = model_prior.iter().sum();
    if model_prior.iter().any(|p| !p.is_finite() || *p < 0.0) || total_prior <= 0.0 {
        return Err(Error::Domain(
            "model prior weights must be nonnegative with positive sum".into(),
        ));
    }
    if regions.iter().any(|r| !(r.prior_mass > 0.0)) {
        return Err(Error::Domain("every region needs positive prior mass".into()));
    }
    let m = result.models.len() as f64;
    let weights: Vec<f64> = result
        .counts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let sampling = match result.scheme {
                Scheme::ModelPrior => result.model_prior[i],
                Scheme::EqualCounts => 1.0 / m,
            };
            *c as f64 * regions[i].prior_mass * model_prior[i] / sampling
        })
        .collect();
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::Domain(
            "no accepted simulation carries positive corrected weight".into(),
        ));
    }
    Ok(weights.iter().map(|w| w / total).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct StageDiag {
    pub threshold: f64,
    pub counts: Vec<usize>,
    pub dropped_components: Vec<usize>,
}

impl StageDiag {
    fn from_result(r: &AbcResult) -> Self {
        let dim = r.sds.len();
        StageDiag {
            threshold: r.threshold,
            counts: r.counts.clone(),
            dropped_components: (0..dim).filter(|j| !r.kept_components.contains(j)).collect(),
        }
    }
}

/// Everything the run produced, for reporting or audit.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineDiagnostics {
    pub models: Vec<Model>,
    pub n_pilot: usize,
    pub n_train: usize,
    pub truncated: bool,
    pub regions: Vec<TrainingRegion>,
    pub pilot: Option<StageDiag>,
    pub main: StageDiag,
    pub pair_fits: Vec<PairFitDiag>,
    pub uncorrected: Vec<f64>,
    pub probabilities: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub models: Vec<Model>,
    pub model_prior: Vec<f64>,
    /// Final posterior model probabilities, truncation-corrected.
    pub probabilities: Vec<f64>,
    /// Probabilities before the truncation correction.
    pub uncorrected: Vec<f64>,
    pub regions: Vec<TrainingRegion>,
    pub fitted: FittedSummary,
    pub pair_fits: Vec<PairFitDiag>,
    pub pilot: Option<AbcResult>,
    pub main: AbcResult,
    pub n_pilot: usize,
    pub n_train: usize,
    truncated: bool,
}

impl PipelineResult {
    pub fn diagnostics(&self) -> PipelineDiagnostics {
        PipelineDiagnostics {
            models: self.models.clone(),
            n_pilot: self.n_pilot,
            n_train: self.n_train,
            truncated: self.truncated,
            regions: self.regions.clone(),
            pilot: self.pilot.as_ref().map(StageDiag::from_result),
            main: StageDiag::from_result(&self.main),
            pair_fits: self.pair_fits.clone(),
            uncorrected: self.uncorrected.clone(),
            probabilities: self.probabilities.clone(),
        }
    }
}

/// Pilot rejection run plus the training regions it implies.
pub fn run_pilot(
    models: &[Model],
    model_prior: &[f64],
    obs: &Dataset,
    cfg: &PipelineConfig,
    stream: &RngStream,
) -> Result<(AbcResult, Vec<TrainingRegion>)> {
    let bank = simulate_bank(
        models,
        model_prior,
        None,
        Scheme::EqualCounts,
        cfg.n_pilot(),
        obs.len(),
        &stream.child("pilot"),
    )?;
    let sbank = bank.summarize(&cfg.pilot_summary)?;
    let obs_summary = cfg.pilot_summary.eval(obs)?;
    let result = rejection_abc(&sbank, &obs_summary, cfg.n_accept_pilot)?;
    let regions = regions_from_pilot(&result, &sbank)?;
    Ok((result, regions))
}

/// Run the pipeline end to end for one observed dataset.
pub fn run_pipeline(
    models: &[Model],
    model_prior: &[f64],
    obs: &Dataset,
    cfg: &PipelineConfig,
    stream: &RngStream,
) -> Result<PipelineResult> {
    cfg.validate(models.len())?;

    let (pilot, regions) = if cfg.truncate {
        let (res, fitted_regions) = run_pilot(models, model_prior, obs, cfg, stream)?;
        let regions = if cfg.force_full_regions {
            models.iter().map(|m| TrainingRegion::full_support(*m)).collect()
        } else {
            fitted_regions
        };
        (Some(res), regions)
    } else {
        (None, models.iter().map(|m| TrainingRegion::full_support(*m)).collect::<Vec<_>>())
    };

    let boxes: Vec<Vec<Interval>> = regions.iter().map(|r| r.intervals.clone()).collect();
    let train = simulate_bank(
        models,
        model_prior,
        Some(&boxes),
        Scheme::EqualCounts,
        cfg.n_train(),
        obs.len(),
        &stream.child("training"),
    )?;

    let (fitted, pair_fits) = fit_model_choice_summaries(&train, cfg.ridge)?;
    let def = SummaryDef::Fitted(fitted.clone());
    let mut sbank = train.summarize(&def)?;
    if !cfg.reuse_training_for_main {
        let n_fit = train.records.len().div_ceil(2);
        sbank.records.drain(..n_fit);
    }
    let obs_summary = def.eval(obs)?;
    let main = rejection_abc(&sbank, &obs_summary, cfg.n_accept_main)?;

    let uncorrected = posterior_estimates(&main, model_prior)?;
    let probabilities = truncation_correct(&main, &regions, model_prior)?;

    Ok(PipelineResult {
        models: models.to_vec(),
        model_prior: model_prior.to_vec(),
        probabilities,
        uncorrected,
        regions,
        fitted,
        pair_fits,
        pilot,
        main,
        n_pilot: cfg.n_pilot(),
        n_train: cfg.n_train(),
        truncated: cfg.truncate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abc::{AcceptedRecord, SummaryRecord};
    use crate::models::Model::*;

    /// Bank whose record i sits at distance i from the observation, plus
    /// the matching result accepting the listed record indices.
    fn pilot_fixture(
        models: Vec<Model>,
        records: Vec<(usize, Vec<f64>)>,
        accepted: Vec<usize>,
    ) -> (SummaryBank, AbcResult) {
        let n = models.len();
        let bank = SummaryBank {
            models: models.clone(),
            model_prior: vec![1.0 / n as f64; n],
            scheme: Scheme::EqualCounts,
            records: records
                .iter()
                .enumerate()
                .map(|(i, (model, theta))| SummaryRecord {
                    sim_index: i,
                    model: *model,
                    theta: theta.clone(),
                    summary: vec![0.0],
                })
                .collect(),
        };
        let mut counts = vec![0; n];
        for &i in &accepted {
            counts[records[i].0] += 1;
        }
        let result = AbcResult {
            models,
            model_prior: bank.model_prior.clone(),
            scheme: Scheme::EqualCounts,
            accepted: accepted
                .iter()
                .map(|&i| AcceptedRecord {
                    sim_index: i,
                    model: records[i].0,
                    theta: records[i].1.clone(),
                    summary: vec![0.0],
                    distance: i as f64,
                })
                .collect(),
            counts,
            threshold: accepted.last().map(|&i| i as f64).unwrap_or(1.0),
            distances: (0..records.len()).map(|i| i as f64).collect(),
            sds: vec![1.0],
            kept_components: vec![0],
        };
        (bank, result)
    }

    fn result_with_accepted(models: Vec<Model>, accepted: Vec<(usize, Vec<f64>)>) -> AbcResult {
        let all: Vec<usize> = (0..accepted.len()).collect();
        pilot_fixture(models, accepted, all).1
    }

    #[test]
    fn regions_cover_accepted_parameters() {
        let (bank, res) = pilot_fixture(
            vec![Poisson, Geometric],
            vec![
                (0, vec![0.5]),
                (0, vec![1.5]),
                (0, vec![0.9]),
                (1, vec![0.3]),
                (1, vec![0.35]),
            ],
            vec![0, 1, 2, 3, 4],
        );
        let regions = regions_from_pilot(&res, &bank).unwrap();
        assert_eq!(regions[0].intervals[0], Interval::new(0.5, 1.5));
        assert!((regions[0].prior_mass - 0.383_400_499_564_203_59).abs() < 1e-12);
        assert_eq!(regions[0].pilot_accepted, 3);
        assert_eq!(regions[1].intervals[0], Interval::new(0.3, 0.35));
        assert!((regions[1].prior_mass - 0.05).abs() < 1e-12);
    }

    #[test]
    fn passed_over_model_bounded_by_its_own_nearest_draws() {
        // geometric places nothing among the acceptances; its region comes
        // from its own two nearest simulations (as many as were accepted
        // overall), not the distant third
        let (bank, res) = pilot_fixture(
            vec![Poisson, Geometric],
            vec![
                (0, vec![1.0]),
                (0, vec![2.0]),
                (1, vec![0.3]),
                (1, vec![0.5]),
                (1, vec![0.9]),
            ],
            vec![0, 1],
        );
        let regions = regions_from_pilot(&res, &bank).unwrap();
        assert_eq!(regions[0].intervals[0], Interval::new(1.0, 2.0));
        assert_eq!(regions[1].intervals[0], Interval::new(0.3, 0.5));
        assert!((regions[1].prior_mass - 0.2).abs() < 1e-12);
        assert_eq!(regions[1].pilot_accepted, 0);
    }

    #[test]
    fn lone_simulation_keeps_full_support() {
        // a single geometric record in the whole bank cannot bound a box
        let (bank, res) = pilot_fixture(
            vec![Poisson, Geometric],
            vec![(0, vec![1.0]), (0, vec![2.0]), (1, vec![0.4])],
            vec![0, 1],
        );
        let regions = regions_from_pilot(&res, &bank).unwrap();
        assert_eq!(regions[1].intervals[0], Interval::new(0.0, 1.0));
        assert_eq!(regions[1].prior_mass, 1.0);
        assert_eq!(regions[1].pilot_accepted, 0);
    }

    #[test]
    fn flat_accepted_range_cannot_hold_mass() {
        // two identical draws widen to a sliver, still below the floor
        let (bank, res) = pilot_fixture(
            vec![Poisson, Geometric],
            vec![(0, vec![2.0]), (0, vec![2.0]), (1, vec![0.2]), (1, vec![0.6])],
            vec![0, 1, 2, 3],
        );
        let regions = regions_from_pilot(&res, &bank).unwrap();
        assert_eq!(regions[0].intervals, Poisson.support());
        assert_eq!(regions[0].prior_mass, 1.0);
    }

    #[test]
    fn sliver_regions_fall_back_to_full_support() {
        // a flat accepted range widens to a sliver whose mass is below the
        // sampler floor and keeps the full prior instead
        let (bank, res) = pilot_fixture(
            vec![Poisson, Geometric],
            vec![
                (0, vec![0.3]),
                (0, vec![0.300000001]),
                (1, vec![0.2]),
                (1, vec![0.6]),
            ],
            vec![0, 1, 2, 3],
        );
        let regions = regions_from_pilot(&res, &bank).unwrap();
        assert_eq!(regions[0].intervals, Poisson.support());
        assert_eq!(regions[0].prior_mass, 1.0);
        // the geometric region is tight but holds plenty of mass
        assert_eq!(regions[1].intervals[0], Interval::new(0.2, 0.6));
        assert_eq!(regions[1].pilot_accepted, 2);
    }

    #[test]
    fn correction_hand_values() {
        let mut res = result_with_accepted(vec![Poisson, Geometric], vec![]);
        res.counts = vec![50, 50];
        let regions = vec![
            TrainingRegion { intervals: vec![Interval::new(0.0, 1.0)], prior_mass: 0.5, pilot_accepted: 50 },
            TrainingRegion { intervals: vec![Interval::new(0.0, 1.0)], prior_mass: 1.0, pilot_accepted: 50 },
        ];
        let probs = truncation_correct(&res, &regions, &[0.5, 0.5]).unwrap();
        assert_eq!(probs, vec![1.0 / 3.0, 2.0 / 3.0]);

        // full-mass regions leave the plain estimate untouched
        let full = vec![
            TrainingRegion::full_support(Poisson),
            TrainingRegion::full_support(Geometric),
        ];
        let corrected = truncation_correct(&res, &full, &[0.5, 0.5]).unwrap();
        let plain = posterior_estimates(&res, &[0.5, 0.5]).unwrap();
        assert_eq!(corrected, plain);

        let bad = vec![
            TrainingRegion { intervals: vec![Interval::new(0.0, 1.0)], prior_mass: 0.0, pilot_accepted: 0 },
            TrainingRegion::full_support(Geometric),
        ];
        assert!(truncation_correct(&res, &bad, &[0.5, 0.5]).is_err());
    }

    #[test]
    fn pipeline_runs_and_is_deterministic() {
        let stream = RngStream::from_seed(41);
        let models = [Poisson, Geometric];
        let prior = [0.5, 0.5];
        let obs = Poisson
            .simulate(&[1.2], 100, &mut stream.child("obs").rng())
            .unwrap();
        let cfg = PipelineConfig {
            total_sims: 1200,
            n_accept_pilot: 30,
            n_accept_main: 30,
            ..PipelineConfig::default()
        };
        let run = |c: &PipelineConfig| run_pipeline(&models, &prior, &obs, c, &stream).unwrap();
        let a = run(&cfg);
        let b = run(&cfg);
        assert_eq!(a.probabilities, b.probabilities);
        assert!((a.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((a.uncorrected.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(a.fitted.pairs(), &[(0, 1)]);
        assert_eq!(a.main.accepted.len(), 30);
        assert!(a.pilot.is_some());
        assert!(a.regions.iter().all(|r| r.prior_mass > 0.0 && r.prior_mass <= 1.0));

        // the training stage must not see pilot state: forcing full regions
        // reproduces the untruncated variant exactly
        let plain = run(&PipelineConfig { truncate: false, ..cfg.clone() });
        let forced = run(&PipelineConfig { force_full_regions: true, ..cfg.clone() });
        assert_eq!(plain.probabilities, forced.probabilities);
        assert_eq!(plain.uncorrected, forced.uncorrected);
        assert_eq!(plain.main.threshold, forced.main.threshold);
        assert_eq!(
            plain.fitted.coefficients(),
            forced.fitted.coefficients()
        );
        // and the correction is a no-op when nothing was truncated
        assert_eq!(plain.probabilities, plain.uncorrected);
    }

    #[test]
    fn split_mode_scores_held_out_half() {
        let stream = RngStream::from_seed(42);
        let models = [Poisson, Geometric];
        let obs = Geometric
            .simulate(&[0.4], 100, &mut stream.child("obs").rng())
            .unwrap();
        let cfg = PipelineConfig {
            total_sims: 1600,
            n_accept_pilot: 30,
            n_accept_main: 30,
            reuse_training_for_main: false,
            ..PipelineConfig::default()
        };
        let res = run_pipeline(&models, &[0.5, 0.5], &obs, &cfg, &stream).unwrap();
        assert!((res.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // held-out half: 1200 training sims, fit on 600, score 600
        let min_index = res.main.accepted.iter().map(|a| a.sim_index).min().unwrap();
        assert!(min_index >= 600, "main run scored a fitting simulation");
    }

    #[test]
    fn config_validation_catches_bad_budgets() {
        let models = [Poisson, Geometric];
        let obs = Dataset::new(vec![1.0; 100]).unwrap();
        let stream = RngStream::from_seed(43);
        for cfg in [
            PipelineConfig { pilot_fraction: 0.0, ..PipelineConfig::default() },
            PipelineConfig { total_sims: 300, n_accept_pilot: 100, ..PipelineConfig::default() },
            PipelineConfig { total_sims: 120, n_accept_main: 100, ..PipelineConfig::default() },
            PipelineConfig { ridge: -1.0, ..PipelineConfig::default() },
        ] {
            assert!(
                matches!(
                    run_pipeline(&models, &[0.5, 0.5], &obs, &cfg, &stream),
                    Err(Error::Config(_))
                ),
                "{cfg:?} should fail validation"
            );
        }
    }
}
