//! Regression adjustment of a rejection run's output: multinomial for the
//! model probabilities, linear for the accepted parameter draws.

use abcmc::abc::{posterior_estimates, rejection_abc, simulate_bank, Scheme};
use abcmc::models::Model;
use abcmc::postprocess::{adjust_model_probs, adjust_params, ModelAdjustment};
use abcmc::rng::RngStream;
use abcmc::summaries::SummaryDef;

fn main() {
    env_logger::init();
    let stream = RngStream::from_seed(8);
    let models = [Model::Laplace, Model::Gaussian];
    let prior = [0.5, 0.5];
    let obs = Model::Gaussian
        .simulate(&[-0.6], 100, &mut stream.child("obs").rng())
        .unwrap();

    let def = SummaryDef::OrderStats10;
    let bank = simulate_bank(
        &models,
        &prior,
        None,
        Scheme::EqualCounts,
        10_000,
        obs.len(),
        &stream.child("bank"),
    )
    .unwrap();
    let result = rejection_abc(&bank.summarize(&def).unwrap(), &def.eval(&obs).unwrap(), 200).unwrap();
    let obs_summary = def.eval(&obs).unwrap();

    let raw = posterior_estimates(&result, &prior).unwrap();
    match adjust_model_probs(&result, &obs_summary, &prior, 1e-6).unwrap() {
        ModelAdjustment::Adjusted { probabilities } => {
            println!("{:<10} raw        adjusted", "model");
            for (i, m) in models.iter().enumerate() {
                println!("{:<10} {:.4}     {:.4}", m.id(), raw[i], probabilities[i]);
            }
        }
        ModelAdjustment::NotPossible { reason, .. } => {
            println!("adjustment not possible: {reason}");
        }
    }

    // parameter adjustment within the better-supported model
    let best = if raw[0] > raw[1] { 0 } else { 1 };
    let adj = adjust_params(&result, &obs_summary, best).unwrap();
    let thetas = adj.thetas();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let raw_means: Vec<f64> = result
        .accepted
        .iter()
        .filter(|a| a.model == best)
        .map(|a| a.theta[0])
        .collect();
    println!(
        "\n{} location: accepted mean {:.4}, adjusted mean {:.4} ({} draws)",
        models[best].id(),
        mean(&raw_means),
        mean(&thetas.iter().map(|t| t[0]).collect::<Vec<_>>()),
        thetas.len()
    );
}
