//! Plain rejection ABC with order-statistic summaries, compared against
//! the exact posterior on the Poisson vs geometric pair.

use abcmc::abc::{bayes_factor, posterior_estimates, rejection_abc, simulate_bank, Scheme};
use abcmc::models::Model;
use abcmc::oracle::exact_posterior;
use abcmc::rng::RngStream;
use abcmc::summaries::SummaryDef;

fn main() {
    let stream = RngStream::from_seed(61);
    let models = [Model::Poisson, Model::Geometric];
    let prior = [0.5, 0.5];

    // observation from the Poisson model at a rate where the two models
    // are genuinely confusable
    let obs = Model::Poisson
        .simulate(&[0.2], 100, &mut stream.child("obs").rng())
        .unwrap();

    let def = SummaryDef::OrderStats10;
    let bank = simulate_bank(
        &models,
        &prior,
        None,
        Scheme::EqualCounts,
        20_000,
        obs.len(),
        &stream.child("bank"),
    )
    .unwrap();
    let summaries = bank.summarize(&def).unwrap();
    let result = rejection_abc(&summaries, &def.eval(&obs).unwrap(), 100).unwrap();

    let est = posterior_estimates(&result, &prior).unwrap();
    let exact = exact_posterior(&models, &obs, &prior).unwrap();

    println!("accepted counts: {:?} at threshold {:.4}", result.counts, result.threshold);
    for (i, m) in models.iter().enumerate() {
        println!("  {}: abc {:.4}   exact {:.4}", m.id(), est[i], exact.probabilities[i]);
    }
    match bayes_factor(&result, 0, 1) {
        Ok(bf) => println!("estimated Bayes factor A1/A2: {bf:.3}"),
        Err(e) => println!("{e}"),
    }
}
