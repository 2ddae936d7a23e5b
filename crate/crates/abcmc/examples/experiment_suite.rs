//! A small batch experiment: several synthetic datasets, several methods,
//! scored against the known true model and written out as CSV. The full
//! evaluation uses 100 datasets and 20000 simulations; this trims both to
//! keep the example quick.

use abcmc::experiment::{run_experiment, write_outputs, ExampleId, ExperimentConfig, Method};
use abcmc::metrics::table_cell;

fn main() {
    let out = std::env::temp_dir().join("abcmc_experiment_demo");
    let cfg = ExperimentConfig {
        example: ExampleId::ABinary,
        n_datasets: 10,
        n_obs: 100,
        total_sims: 2_000,
        n_accept: 50,
        methods: vec![Method::S10, Method::Alg4, Method::Exact],
        seed: 12,
        output_dir: out.clone(),
    };
    let outcome = run_experiment(&cfg).expect("experiment runs");
    write_outputs(&outcome).expect("outputs written");

    println!("example {} over {} datasets:", cfg.example, cfg.n_datasets);
    for m in &outcome.metrics {
        println!("  {:<8} {}", m.method, table_cell(m.entropic_loss, m.misallocation_rate));
    }
    println!("per-dataset probabilities in {}", out.join("probabilities.csv").display());
}
