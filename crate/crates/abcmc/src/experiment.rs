//! Batch evaluation harness: many synthetic datasets, several summary
//! methods, scored against the known true model.

use crate::abc::{posterior_estimates, rejection_abc, simulate_bank, Scheme};
use crate::error::{Error, Result};
use crate::metrics::{entropic_loss, misallocation_rate, table_cell};
use crate::models::{Dataset, Model};
use crate::oracle::exact_posterior;
use crate::pipeline::{run_pipeline, PipelineConfig};
use crate::rng::RngStream;
use crate::summaries::SummaryDef;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

/// The example model pairings the harness knows how to score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExampleId {
    /// Poisson vs geometric.
    #[serde(rename = "A_binary")]
    ABinary,
    /// Laplace vs normal location.
    B,
    /// Symmetric vs skewed g-and-k.
    C,
    /// Poisson vs geometric vs binomial.
    #[serde(rename = "A_three")]
    AThree,
}

impl ExampleId {
    pub const ALL: [ExampleId; 4] = [ExampleId::ABinary, ExampleId::B, ExampleId::C, ExampleId::AThree];

    pub fn models(&self) -> Vec<Model> {
        match self {
            ExampleId::ABinary => vec![Model::Poisson, Model::Geometric],
            ExampleId::B => vec![Model::Laplace, Model::Gaussian],
            ExampleId::C => vec![Model::GkSymmetric, Model::GkSkewed],
            ExampleId::AThree => vec![Model::Poisson, Model::Geometric, Model::Binomial10],
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            ExampleId::ABinary => "A_binary",
            ExampleId::B => "B",
            ExampleId::C => "C",
            ExampleId::AThree => "A_three",
        }
    }

    pub fn from_id(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.id() == s)
            .ok_or_else(|| Error::Config(format!("unknown example '{s}'")))
    }

    /// The hand-picked comparison summary, where one exists: fourth and
    /// sixth moments for the location pair, tail quantiles for g-and-k.
    pub fn literature_summary(&self) -> Option<SummaryDef> {
        match self {
            ExampleId::B => Some(SummaryDef::FourthSixthMoments),
            ExampleId::C => Some(SummaryDef::TailQuantiles),
            _ => None,
        }
    }

    pub fn has_exact(&self) -> bool {
        self.models().iter().all(|m| m.has_exact_marginal())
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Rejection with ten evenly spaced order statistics.
    S10,
    /// Rejection with the example's hand-picked summary.
    Literature,
    /// Fitted summaries without truncation.
    Alg3,
    /// Full pipeline: pilot, truncated training, fitted summaries,
    /// correction.
    Alg4,
    /// Exact posterior, no simulation.
    Exact,
}

impl Method {
    pub const ALL: [Method; 5] =
        [Method::S10, Method::Literature, Method::Alg3, Method::Alg4, Method::Exact];

    pub fn id(&self) -> &'static str {
        match self {
            Method::S10 => "s10",
            Method::Literature => "literature",
            Method::Alg3 => "alg3",
            Method::Alg4 => "alg4",
            Method::Exact => "exact",
        }
    }

    pub fn from_id(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| Error::Config(format!("unknown method '{s}'")))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

fn default_count() -> usize {
    100
}

fn default_total_sims() -> usize {
    20_000
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub example: ExampleId,
    #[serde(default = "default_count")]
    pub n_datasets: usize,
    #[serde(default = "default_count")]
    pub n_obs: usize,
    #[serde(default = "default_total_sims")]
    pub total_sims: usize,
    #[serde(default = "default_count")]
    pub n_accept: usize,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_datasets == 0 || self.n_obs == 0 || self.total_sims == 0 || self.n_accept == 0 {
            return Err(Error::Config("counts must be positive".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("at least one method required".into()));
        }
        let mut seen = Vec::new();
        for m in &self.methods {
            if seen.contains(m) {
                return Err(Error::Config(format!("method '{m}' listed twice")));
            }
            seen.push(*m);
        }
        if self.methods.contains(&Method::Literature) && self.example.literature_summary().is_none()
        {
            return Err(Error::Config(format!(
                "example {} has no hand-picked literature summary",
                self.example
            )));
        }
        if self.methods.contains(&Method::Exact) && !self.example.has_exact() {
            return Err(Error::Config(format!(
                "example {} has no exact posterior",
                self.example
            )));
        }
        if self.n_accept > self.total_sims {
            return Err(Error::Config(format!(
                "cannot accept {} of {} simulations",
                self.n_accept, self.total_sims
            )));
        }
        Ok(())
    }
}

/// One dataset's estimated model probabilities under every method run.
#[derive(Debug, Clone)]
pub struct ReplicateOutput {
    pub dataset_id: usize,
    pub true_model: usize,
    pub theta: Vec<f64>,
    pub probabilities: Vec<(Method, Vec<f64>)>,
}

/// A method's scores over the full replicate set.
#[derive(Debug, Clone, Serialize)]
pub struct MethodMetrics {
    pub method: Method,
    pub entropic_loss: f64,
    pub misallocation_rate: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub config: ExperimentConfig,
    pub replicates: Vec<ReplicateOutput>,
    pub metrics: Vec<MethodMetrics>,
}

fn run_plain_rejection(
    models: &[Model],
    prior: &[f64],
    obs: &Dataset,
    def: &SummaryDef,
    total_sims: usize,
    n_accept: usize,
    stream: &RngStream,
) -> Result<Vec<f64>> {
    let bank = simulate_bank(
        models,
        prior,
        None,
        Scheme::EqualCounts,
        total_sims,
        obs.len(),
        &stream.child("bank"),
    )?;
    let sbank = bank.summarize(def)?;
    let result = rejection_abc(&sbank, &def.eval(obs)?, n_accept)?;
    posterior_estimates(&result, prior)
}

/// What one method produced for one dataset; pipeline runs keep their full
/// diagnostics, the others just the probabilities.
#[derive(Debug, Clone)]
pub enum MethodRun {
    Plain { probabilities: Vec<f64> },
    Pipeline(Box<crate::pipeline::PipelineResult>),
    Exact(crate::oracle::ExactPosterior),
}

impl MethodRun {
    pub fn probabilities(&self) -> &[f64] {
        match self {
            MethodRun::Plain { probabilities } => probabilities,
            MethodRun::Pipeline(r) => &r.probabilities,
            MethodRun::Exact(e) => &e.probabilities,
        }
    }
}

/// Run a single method on one observed dataset under a uniform model
/// prior. Invalid method/example combinations fail before any simulation.
pub fn run_method(
    example: ExampleId,
    method: Method,
    obs: &Dataset,
    total_sims: usize,
    n_accept: usize,
    stream: &RngStream,
) -> Result<MethodRun> {
    let models = example.models();
    let prior = vec![1.0 / models.len() as f64; models.len()];
    let pipeline_cfg = |truncate| PipelineConfig {
        total_sims,
        n_accept_pilot: n_accept,
        n_accept_main: n_accept,
        truncate,
        ..PipelineConfig::default()
    };
    match method {
        Method::S10 => Ok(MethodRun::Plain {
            probabilities: run_plain_rejection(
                &models,
                &prior,
                obs,
                &SummaryDef::OrderStats10,
                total_sims,
                n_accept,
                stream,
            )?,
        }),
        Method::Literature => {
            let def = example.literature_summary().ok_or_else(|| {
                Error::Config(format!("example {example} has no hand-picked literature summary"))
            })?;
            Ok(MethodRun::Plain {
                probabilities: run_plain_rejection(
                    &models, &prior, obs, &def, total_sims, n_accept, stream,
                )?,
            })
        }
        Method::Alg3 => Ok(MethodRun::Pipeline(Box::new(run_pipeline(
            &models,
            &prior,
            obs,
            &pipeline_cfg(false),
            stream,
        )?))),
        Method::Alg4 => Ok(MethodRun::Pipeline(Box::new(run_pipeline(
            &models,
            &prior,
            obs,
            &pipeline_cfg(true),
            stream,
        )?))),
        Method::Exact => {
            if !example.has_exact() {
                return Err(Error::Config(format!("example {example} has no exact posterior")));
            }
            Ok(MethodRun::Exact(exact_posterior(&models, obs, &prior)?))
        }
    }
}

fn run_replicate(cfg: &ExperimentConfig, root: &RngStream, dataset_id: usize) -> Result<ReplicateOutput> {
    let models = cfg.example.models();
    let rep = root.child("replicate").child_index(dataset_id as u64);

    let true_model = rep.child("model").rng().random_range(0..models.len());
    let theta = models[true_model].sample_prior(&mut rep.child("theta").rng());
    let obs = models[true_model].simulate(&theta, cfg.n_obs, &mut rep.child("data").rng())?;

    let mut probabilities = Vec::with_capacity(cfg.methods.len());
    for method in &cfg.methods {
        let run = run_method(
            cfg.example,
            *method,
            &obs,
            cfg.total_sims,
            cfg.n_accept,
            &rep.child(method.id()),
        )?;
        probabilities.push((*method, run.probabilities().to_vec()));
    }
    Ok(ReplicateOutput { dataset_id, true_model, theta, probabilities })
}

/// Run every configured method on `n_datasets` fresh synthetic datasets
/// and score them. Replicates are independent and run in parallel; the
/// output is a pure function of the config and seed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let root = RngStream::from_seed(cfg.seed);
    let replicates: Vec<ReplicateOutput> = (0..cfg.n_datasets)
        .into_par_iter()
        .map(|d| run_replicate(cfg, &root, d))
        .collect::<Result<_>>()?;

    let truths: Vec<usize> = replicates.iter().map(|r| r.true_model).collect();
    let metrics = cfg
        .methods
        .iter()
        .map(|method| {
            let probs: Vec<Vec<f64>> = replicates
                .iter()
                .map(|r| {
                    r.probabilities
                        .iter()
                        .find(|(m, _)| m == method)
                        .map(|(_, p)| p.clone())
                        .expect("every replicate ran every method")
                })
                .collect();
            let true_probs: Vec<f64> =
                probs.iter().zip(&truths).map(|(p, &t)| p[t]).collect();
            MethodMetrics {
                method: *method,
                entropic_loss: entropic_loss(&true_probs),
                misallocation_rate: misallocation_rate(&probs, &truths),
            }
        })
        .collect();

    Ok(ExperimentOutcome { config: cfg.clone(), replicates, metrics })
}

fn float_field(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.6}")
    }
}

/// Write the per-dataset probabilities, raw metric values, and formatted
/// summary table into the configured output directory.
pub fn write_outputs(outcome: &ExperimentOutcome) -> Result<()> {
    let cfg = &outcome.config;
    let models = cfg.example.models();
    fs::create_dir_all(&cfg.output_dir)?;

    let mut tidy = String::from("dataset_id,true_model,method,model,probability\n");
    for rep in &outcome.replicates {
        for (method, probs) in &rep.probabilities {
            for (mi, p) in probs.iter().enumerate() {
                tidy.push_str(&format!(
                    "{},{},{},{},{:.6}\n",
                    rep.dataset_id,
                    models[rep.true_model].id(),
                    method,
                    models[mi].id(),
                    p
                ));
            }
        }
    }
    fs::write(cfg.output_dir.join("probabilities.csv"), tidy)?;

    let mut metrics = String::from("method,example,n_datasets,entropic_loss,misallocation_rate\n");
    for m in &outcome.metrics {
        metrics.push_str(&format!(
            "{},{},{},{},{}\n",
            m.method,
            cfg.example,
            cfg.n_datasets,
            float_field(m.entropic_loss),
            float_field(m.misallocation_rate)
        ));
    }
    fs::write(cfg.output_dir.join("metrics.csv"), metrics)?;

    let mut table = format!("method,{}\n", cfg.example);
    for m in &outcome.metrics {
        table.push_str(&format!(
            "{},{}\n",
            m.method,
            table_cell(m.entropic_loss, m.misallocation_rate)
        ));
    }
    fs::write(cfg.output_dir.join("table.csv"), table)?;
    Ok(())
}
