//! Cross-validation of the exact marginal likelihoods against independent
//! brute-force integration.

mod common;

use abcmc::models::{Dataset, Model};
use abcmc::rng::RngStream;
use common::*;

const TOL: f64 = 1e-6;

fn random_datasets(model: Model, count: usize, n_obs: usize, label: &str) -> Vec<Dataset> {
    let stream = RngStream::from_seed(777).child(label);
    (0..count)
        .map(|i| {
            let s = stream.child_index(i as u64);
            let theta = model.sample_prior(&mut s.child("theta").rng());
            model.simulate(&theta, n_obs, &mut s.child("data").rng()).unwrap()
        })
        .collect()
}

fn check_against(model: Model, brute: impl Fn(&Dataset) -> f64, label: &str) {
    let mut worst: f64 = 0.0;
    for (i, data) in random_datasets(model, 50, 100, label).iter().enumerate() {
        let exact = model.exact_log_marginal(data).unwrap();
        let reference = brute(data);
        let err = (exact - reference).abs();
        assert!(
            err < TOL,
            "{} dataset {i}: closed form {exact}, brute force {reference}, diff {err}",
            model.id()
        );
        worst = worst.max(err);
    }
    println!("{}: worst log-marginal deviation {worst:.2e} over 50 datasets", model.id());
}

#[test]
fn poisson_closed_form_matches_brute_force() {
    check_against(Model::Poisson, brute_log_marginal_poisson, "poisson");
}

#[test]
fn geometric_closed_form_matches_brute_force() {
    check_against(Model::Geometric, brute_log_marginal_geometric, "geometric");
}

#[test]
fn binomial_closed_form_matches_brute_force() {
    check_against(Model::Binomial10, brute_log_marginal_binomial, "binomial");
}

#[test]
fn normal_closed_form_matches_brute_force() {
    check_against(Model::Gaussian, brute_log_marginal_normal, "normal");
}

#[test]
fn laplace_quadrature_matches_dense_trapezoid() {
    let datasets = random_datasets(Model::Laplace, 10, 100, "laplace");
    let mut worst: f64 = 0.0;
    for (i, data) in datasets.iter().enumerate() {
        let exact = Model::Laplace.exact_log_marginal(data).unwrap();
        let reference = brute_log_marginal_laplace(data);
        let err = (exact - reference).abs();
        assert!(err < TOL, "dataset {i}: adaptive {exact}, trapezoid {reference}, diff {err}");
        worst = worst.max(err);
    }
    println!("B1: worst log-marginal deviation {worst:.2e} over 10 datasets");
}

#[test]
fn edge_datasets_agree_too() {
    let zeros = Dataset::new(vec![0.0; 100]).unwrap();
    let twos = Dataset::new(vec![2.0; 100]).unwrap();
    for (model, brute) in [
        (Model::Poisson, brute_log_marginal_poisson as fn(&Dataset) -> f64),
        (Model::Geometric, brute_log_marginal_geometric),
        (Model::Binomial10, brute_log_marginal_binomial),
    ] {
        for data in [&zeros, &twos] {
            let exact = model.exact_log_marginal(data).unwrap();
            let reference = brute(data);
            assert!(
                (exact - reference).abs() < TOL,
                "{}: closed form {exact}, brute force {reference}",
                model.id()
            );
        }
    }
}
