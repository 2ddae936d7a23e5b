//! Summary statistics: fixed hand-picked sets and regression-fitted ones.
//!
//! A summary maps a dataset to a short vector. ABC compares datasets only
//! through these vectors, so which summary you pick decides what the
//! analysis can see. The fitted variant stores one linear predictor per
//! model pair over the order-statistic basis and evaluates on the logit
//! scale.

use crate::error::{Error, Result};
use crate::models::Dataset;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Fitted summaries are clamped to this band on the logit scale so a
/// perfectly separated fit cannot emit infinities.
pub const LOGIT_CLAMP: f64 = 30.0;

/// Every 10th order statistic of a sample of exactly 100: positions
/// 5, 15, ..., 95.
pub fn order_stats_10(sorted: &[f64]) -> Result<Vec<f64>> {
    if sorted.len() != 100 {
        return Err(Error::Dimension(format!(
            "this summary is defined for samples of 100, got {}",
            sorted.len()
        )));
    }
    Ok((0..10).map(|i| sorted[4 + 10 * i]).collect())
}

/// Central moments of order 4 and 6, with 1/n normalization.
pub fn central_moments_4_6(xs: &[f64]) -> Vec<f64> {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let mut m4 = 0.0;
    let mut m6 = 0.0;
    for x in xs {
        let d2 = (x - mean) * (x - mean);
        m4 += d2 * d2;
        m6 += d2 * d2 * d2;
    }
    vec![m4 / n, m6 / n]
}

/// The ceil(0.1 n)-th and ceil(0.9 n)-th order statistics.
pub fn tail_quantiles(sorted: &[f64]) -> Vec<f64> {
    let n = sorted.len() as f64;
    let pick = |p: f64| sorted[((p * n).ceil() as usize).max(1) - 1];
    vec![pick(0.1), pick(0.9)]
}

/// Regression basis over a sorted sample: a constant followed by every
/// order statistic.
pub fn order_basis(sorted: &[f64]) -> Vec<f64> {
    let mut row = Vec::with_capacity(sorted.len() + 1);
    row.push(1.0);
    row.extend_from_slice(sorted);
    row
}

/// One linear predictor per model pair over the order-statistic basis.
/// Evaluating a dataset gives the fitted log-odds of the first pair member
/// against the second, one component per pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FittedSummary {
    pairs: Vec<(usize, usize)>,
    coefficients: Vec<Vec<f64>>,
    basis: String,
}

impl FittedSummary {
    pub fn new(pairs: Vec<(usize, usize)>, coefficients: Vec<Vec<f64>>, n_obs: usize) -> Result<Self> {
        if pairs.is_empty() || pairs.len() != coefficients.len() {
            return Err(Error::Dimension(
                "need one coefficient row per model pair".into(),
            ));
        }
        if coefficients.iter().any(|c| c.len() != n_obs + 1) {
            return Err(Error::Dimension(format!(
                "coefficient rows must have length {} (constant plus order statistics)",
                n_obs + 1
            )));
        }
        Ok(FittedSummary { pairs, coefficients, basis: format!("order_stats_{}", n_obs + 1) })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn coefficients(&self) -> &[Vec<f64>] {
        &self.coefficients
    }

    pub fn output_dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn basis_len(&self) -> usize {
        self.coefficients[0].len()
    }

    pub fn eval_sorted(&self, sorted: &[f64]) -> Result<Vec<f64>> {
        if sorted.len() + 1 != self.basis_len() {
            return Err(Error::Dimension(format!(
                "fitted summary expects samples of {}, got {}",
                self.basis_len() - 1,
                sorted.len()
            )));
        }
        Ok(self
            .coefficients
            .iter()
            .map(|c| {
                let mut v = c[0];
                for (x, b) in sorted.iter().zip(&c[1..]) {
                    v += x * b;
                }
                v.clamp(-LOGIT_CLAMP, LOGIT_CLAMP)
            })
            .collect())
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer_pretty(file, self)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let file = std::io::BufReader::new(std::fs::File::open(path)?);
        let fs: FittedSummary = serde_json::from_reader(file)?;
        let n_obs = fs
            .coefficients
            .first()
            .map(Vec::len)
            .filter(|len| *len > 1)
            .ok_or_else(|| Error::Dimension("fitted summary has no coefficients".into()))?
            - 1;
        FittedSummary::new(fs.pairs, fs.coefficients, n_obs)
    }
}

/// The summary choices understood by the rest of the crate.
#[derive(Debug, Clone)]
pub enum SummaryDef {
    /// [`order_stats_10`].
    OrderStats10,
    /// [`central_moments_4_6`].
    FourthSixthMoments,
    /// [`tail_quantiles`].
    TailQuantiles,
    /// [`order_basis`]; mostly useful for inspecting what fits see.
    FullOrderBasis,
    /// A previously fitted pairwise summary.
    Fitted(FittedSummary),
}

impl SummaryDef {
    pub fn eval(&self, data: &Dataset) -> Result<Vec<f64>> {
        self.eval_sorted(&data.sorted_values())
    }

    /// Same as [`eval`](Self::eval) for a sample already in ascending order.
    pub fn eval_sorted(&self, sorted: &[f64]) -> Result<Vec<f64>> {
        match self {
            SummaryDef::OrderStats10 => order_stats_10(sorted),
            SummaryDef::FourthSixthMoments => Ok(central_moments_4_6(sorted)),
            SummaryDef::TailQuantiles => Ok(tail_quantiles(sorted)),
            SummaryDef::FullOrderBasis => Ok(order_basis(sorted)),
            SummaryDef::Fitted(f) => f.eval_sorted(sorted),
        }
    }

    pub fn output_dim(&self, n_obs: usize) -> usize {
        match self {
            SummaryDef::OrderStats10 => 10,
            SummaryDef::FourthSixthMoments | SummaryDef::TailQuantiles => 2,
            SummaryDef::FullOrderBasis => n_obs + 1,
            SummaryDef::Fitted(f) => f.output_dim(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Model;
    use crate::rng::RngStream;

    #[test]
    fn order_stats_pick_every_tenth() {
        let sorted: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let s = order_stats_10(&sorted).unwrap();
        assert_eq!(s, vec![4.0, 14.0, 24.0, 34.0, 44.0, 54.0, 64.0, 74.0, 84.0, 94.0]);
        assert!(order_stats_10(&sorted[..99]).is_err());
    }

    #[test]
    fn order_stats_are_a_subsequence_of_the_basis() {
        let mut rng = RngStream::from_seed(11).rng();
        let d = Model::Gaussian.simulate(&[0.3], 100, &mut rng).unwrap();
        let sorted = d.sorted_values();
        let s = order_stats_10(&sorted).unwrap();
        let basis = order_basis(&sorted);
        for (i, v) in s.iter().enumerate() {
            assert_eq!(*v, basis[1 + 4 + 10 * i]);
        }
    }

    #[test]
    fn central_moments_small_exact() {
        let m = central_moments_4_6(&[0.0, 2.0]);
        assert_eq!(m, vec![1.0, 1.0]);
        let m = central_moments_4_6(&[1.0, 2.0, 3.0]);
        assert!((m[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((m[1] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn central_moments_match_gaussian_theory() {
        let mut rng = RngStream::from_seed(12).rng();
        let d = Model::Gaussian.simulate(&[0.0], 100_000, &mut rng).unwrap();
        let m = central_moments_4_6(d.values());
        assert!((m[0] - 3.0).abs() < 0.1, "m4 = {}", m[0]);
        assert!((m[1] - 15.0).abs() < 1.5, "m6 = {}", m[1]);
    }

    #[test]
    fn tail_quantile_positions() {
        let sorted: Vec<f64> = (1..=100).map(|i| i as f64).collect();
        assert_eq!(tail_quantiles(&sorted), vec![10.0, 90.0]);
        let sorted: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        assert_eq!(tail_quantiles(&sorted), vec![1.0, 9.0]);
        let sorted = vec![3.0, 7.0, 8.0, 12.0, 40.0];
        assert_eq!(tail_quantiles(&sorted), vec![3.0, 40.0]);
        assert_eq!(tail_quantiles(&[5.0]), vec![5.0, 5.0]);
    }

    #[test]
    fn fitted_summary_evaluates_linear_predictor() {
        let mut coef = vec![0.0; 101];
        coef[0] = 0.5;
        coef[1] = 2.0;
        let f = FittedSummary::new(vec![(0, 1)], vec![coef], 100).unwrap();
        let sorted: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).collect();
        let s = f.eval_sorted(&sorted).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0] - 0.5).abs() < 1e-12);

        let mut big = vec![0.0; 101];
        big[0] = 1e6;
        let f = FittedSummary::new(vec![(0, 1)], vec![big], 100).unwrap();
        assert_eq!(f.eval_sorted(&sorted).unwrap(), vec![LOGIT_CLAMP]);

        assert!(f.eval_sorted(&sorted[..50]).is_err());
    }

    #[test]
    fn fitted_summary_json_roundtrip() {
        let f = FittedSummary::new(
            vec![(0, 1), (0, 2), (1, 2)],
            vec![vec![1.0, -2.0, 3.0], vec![0.0, 1.0, 0.5], vec![4.0, 4.0, 4.0]],
            2,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("summary.json");
        f.save_json(&path).unwrap();
        let back = FittedSummary::load_json(&path).unwrap();
        assert_eq!(back.pairs(), f.pairs());
        assert_eq!(back.coefficients(), f.coefficients());

        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"basis\": \"order_stats_3\""));

        std::fs::write(&path, "{\"pairs\": [[0,1]], \"coefficients\": [], \"basis\": \"x\"}")
            .unwrap();
        assert!(FittedSummary::load_json(&path).is_err());
    }

    #[test]
    fn def_dispatch_matches_free_functions() {
        let mut rng = RngStream::from_seed(13).rng();
        let d = Model::Laplace.simulate(&[1.0], 100, &mut rng).unwrap();
        let sorted = d.sorted_values();
        assert_eq!(
            SummaryDef::OrderStats10.eval(&d).unwrap(),
            order_stats_10(&sorted).unwrap()
        );
        assert_eq!(
            SummaryDef::FourthSixthMoments.eval(&d).unwrap(),
            central_moments_4_6(&sorted)
        );
        assert_eq!(SummaryDef::TailQuantiles.eval(&d).unwrap(), tail_quantiles(&sorted));
        assert_eq!(SummaryDef::FullOrderBasis.eval(&d).unwrap(), order_basis(&sorted));
        assert_eq!(SummaryDef::OrderStats10.output_dim(100), 10);
        assert_eq!(SummaryDef::FullOrderBasis.output_dim(100), 101);
    }
}
