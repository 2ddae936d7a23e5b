//! What truncation does and why it needs correcting.
//!
//! A pilot run narrows each model's prior to the parameter box compatible
//! with the observation. Training inside those boxes concentrates the
//! simulation budget, but the accepted counts then mix truncated models,
//! whose evidence differs from the original ones by exactly the prior mass
//! each box retains. This example runs the same data with and without
//! truncation and shows the correction rescaling the truncated counts by
//! each box's retained mass.

use abcmc::models::Model;
use abcmc::pipeline::{run_pipeline, PipelineConfig};
use abcmc::rng::RngStream;

fn main() {
    let stream = RngStream::from_seed(30);
    let models = [Model::Poisson, Model::Geometric];
    let prior = [0.5, 0.5];
    let obs = Model::Geometric
        .simulate(&[0.75], 100, &mut stream.child("obs").rng())
        .unwrap();

    let base = PipelineConfig { total_sims: 20_000, ..PipelineConfig::default() };

    let plain = run_pipeline(
        &models,
        &prior,
        &obs,
        &PipelineConfig { truncate: false, ..base.clone() },
        &stream,
    )
    .unwrap();
    let truncated = run_pipeline(&models, &prior, &obs, &base, &stream).unwrap();

    println!("{:<22} {:>10} {:>10}", "", "P(A1)", "P(A2)");
    println!(
        "{:<22} {:>10.4} {:>10.4}",
        "full-support training", plain.probabilities[0], plain.probabilities[1]
    );
    println!(
        "{:<22} {:>10.4} {:>10.4}",
        "truncated, uncorrected", truncated.uncorrected[0], truncated.uncorrected[1]
    );
    println!(
        "{:<22} {:>10.4} {:>10.4}",
        "truncated, corrected", truncated.probabilities[0], truncated.probabilities[1]
    );
    for (m, r) in models.iter().zip(&truncated.regions) {
        println!("  {} box {:?}, retained prior mass {:.4}", m.id(), r.intervals, r.prior_mass);
    }
}
