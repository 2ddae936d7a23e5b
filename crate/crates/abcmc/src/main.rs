use abcmc::experiment::{
    run_experiment, run_method, write_outputs, ExampleId, ExperimentConfig, Method, MethodRun,
};
use abcmc::metrics::table_cell;
use abcmc::models::Dataset;
use abcmc::oracle::exact_posterior;
use abcmc::rng::RngStream;
use abcmc::{Error, Result};
use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "abcmc", version, about = "ABC model choice with regression-fitted summaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch of synthetic datasets from a JSON config and score
    /// every configured method against the known truth.
    Experiment {
        /// JSON file with the experiment settings.
        #[arg(long)]
        config: PathBuf,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Analyze one observed dataset with a single method.
    Pipeline {
        /// Example id: A_binary, B, C, or A_three.
        #[arg(long)]
        example: String,
        /// CSV file with one observation per row.
        #[arg(long)]
        obs: PathBuf,
        /// s10, literature, alg3, alg4, or exact.
        #[arg(long, default_value = "alg4")]
        method: String,
        #[arg(long, default_value_t = 20_000)]
        total_sims: usize,
        #[arg(long, default_value_t = 100)]
        n_accept: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write run diagnostics to this JSON file.
        #[arg(long)]
        diagnostics: Option<PathBuf>,
    },
    /// Exact posterior model probabilities for one observed dataset.
    Oracle {
        /// Example id with tractable marginals: A_binary, B, or A_three.
        #[arg(long)]
        example: String,
        /// CSV file with one observation per row.
        #[arg(long)]
        obs: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Experiment { config, seed } => {
            let mut cfg = ExperimentConfig::from_json_file(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let outcome = run_experiment(&cfg)?;
            write_outputs(&outcome)?;
            println!("example {}, {} datasets, seed {}", cfg.example, cfg.n_datasets, cfg.seed);
            for m in &outcome.metrics {
                println!("{:<12} {}", m.method, table_cell(m.entropic_loss, m.misallocation_rate));
            }
            println!("outputs in {}", cfg.output_dir.display());
            Ok(())
        }
        Command::Pipeline { example, obs, method, total_sims, n_accept, seed, diagnostics } => {
            let example = ExampleId::from_id(&example)?;
            let method = Method::from_id(&method)?;
            let data = Dataset::read_csv(&obs)?;
            let stream = RngStream::from_seed(seed).child(method.id());
            let run = run_method(example, method, &data, total_sims, n_accept, &stream)?;
            if let Some(path) = &diagnostics {
                match &run {
                    MethodRun::Pipeline(r) => {
                        std::fs::write(path, serde_json::to_string_pretty(&r.diagnostics())?)?
                    }
                    _ => {
                        return Err(Error::Config(format!(
                            "method '{method}' produces no diagnostics"
                        )))
                    }
                }
            }
            let models = example.models();
            let out = serde_json::json!({
                "example": example.id(),
                "method": method.id(),
                "seed": seed,
                "models": models.iter().map(|m| m.id()).collect::<Vec<_>>(),
                "probabilities": run.probabilities(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(())
        }
        Command::Oracle { example, obs } => {
            let example = ExampleId::from_id(&example)?;
            if !example.has_exact() {
                return Err(Error::Config(format!("example {example} has no exact posterior")));
            }
            let data = Dataset::read_csv(&obs)?;
            let models = example.models();
            let prior = vec![1.0 / models.len() as f64; models.len()];
            let post = exact_posterior(&models, &data, &prior)?;
            let out = serde_json::json!({
                "example": example.id(),
                "models": models.iter().map(|m| m.id()).collect::<Vec<_>>(),
                "log_marginals": post.log_marginals,
                "probabilities": post.probabilities,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(())
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
