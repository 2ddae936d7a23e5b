//! Scoring of estimated model probabilities against known truth.

/// Total negative log probability assigned to the true model across
/// replicates. Any replicate that gives the truth zero (or negative)
/// probability makes the loss infinite.
pub fn entropic_loss(true_model_probs: &[f64]) -> f64 {
    let mut total = 0.0;
    for &p in true_model_probs {
        if !(p > 0.0) {
            return f64::INFINITY;
        }
        total -= p.ln();
    }
    total
}

/// Share of replicates whose highest-probability model is not the true
/// one. A replicate whose maximum is tied between several models counts as
/// misallocated, since no single model was picked.
pub fn misallocation_rate(probabilities: &[Vec<f64>], true_models: &[usize]) -> f64 {
    assert_eq!(probabilities.len(), true_models.len(), "one truth per replicate");
    if probabilities.is_empty() {
        return 0.0;
    }
    let mut wrong = 0usize;
    for (probs, &truth) in probabilities.iter().zip(true_models) {
        let max = probs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let at_max = probs.iter().filter(|p| **p == max).count();
        if at_max > 1 {
            log::warn!("tied model probabilities {probs:?}; counting as misallocated");
            wrong += 1;
        } else if probs[truth] != max {
            wrong += 1;
        }
    }
    wrong as f64 / probabilities.len() as f64
}

/// Format a summary cell as "loss (rate%)", e.g. "19.8 (15%)", with an
/// infinity sign when the loss is infinite.
pub fn table_cell(loss: f64, rate: f64) -> String {
    let loss_str = if loss.is_infinite() { "\u{221e}".to_string() } else { format!("{loss:.1}") };
    format!("{loss_str} ({:.0}%)", rate * 100.0)
}
