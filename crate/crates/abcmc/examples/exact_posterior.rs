//! Exact posterior model probabilities for the tractable model pairs.
//!
//! Simulates one dataset from a randomly chosen model, then evaluates the
//! marginal likelihood of every candidate in closed form (or by adaptive
//! quadrature for the Laplace location model) and prints the posterior.
//! This is the ground truth the ABC estimates are judged against.

use abcmc::experiment::ExampleId;
use abcmc::oracle::exact_posterior;
use abcmc::rng::RngStream;
use rand::Rng;

fn main() {
    let stream = RngStream::from_seed(5);
    for example in [ExampleId::ABinary, ExampleId::B, ExampleId::AThree] {
        let models = example.models();
        let s = stream.child(example.id());
        let truth = s.child("model").rng().random_range(0..models.len());
        let theta = models[truth].sample_prior(&mut s.child("theta").rng());
        let obs = models[truth]
            .simulate(&theta, 100, &mut s.child("data").rng())
            .unwrap();

        let prior = vec![1.0 / models.len() as f64; models.len()];
        let post = exact_posterior(&models, &obs, &prior).unwrap();

        println!("example {example}: truth {} with theta {theta:?}", models[truth].id());
        for (i, m) in models.iter().enumerate() {
            println!(
                "  {}: log marginal {:>12.4}   posterior {:.6}",
                m.id(),
                post.log_marginals[i],
                post.probabilities[i]
            );
        }
    }
}
