//! Draw a parameter and a dataset from each model and print quick
//! summaries, a sanity pass over every sampler in the catalog.

use abcmc::models::Model;
use abcmc::rng::RngStream;

fn main() {
    let stream = RngStream::from_seed(2024);
    println!("{:<4} {:<10} {:<24} mean      sd        min       max", "id", "params", "theta");
    for (i, model) in Model::ALL.iter().enumerate() {
        let s = stream.child_index(i as u64);
        let theta = model.sample_prior(&mut s.child("theta").rng());
        let data = model
            .simulate(&theta, 1000, &mut s.child("data").rng())
            .expect("prior draws lie inside the support");
        let v = data.values();
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        let (min, max) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
        let theta_str = theta.iter().map(|t| format!("{t:.3}")).collect::<Vec<_>>().join(", ");
        println!(
            "{:<4} {:<10} {:<24} {:<9.3} {:<9.3} {:<9.3} {:<9.3}",
            model.id(),
            model.param_names().join(","),
            theta_str,
            mean,
            sd,
            min,
            max
        );
    }
}
