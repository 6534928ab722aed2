use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// `|gold ∩ top-k| / min(|gold|, k)` over stem keys. Gold must be non-empty.
pub fn precision_at_k<S: AsRef<str>>(predicted: &[S], gold: &BTreeSet<String>, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if gold.is_empty() {
        return Err(Error::InvalidArgument("precision needs a non-empty gold set".into()));
    }
    let top: BTreeSet<&str> = predicted.iter().take(k).map(AsRef::as_ref).collect();
    let hits = top.iter().filter(|p| gold.contains(**p)).count();
    Ok(hits as f64 / gold.len().min(k) as f64)
}

/// Reciprocal rank of the first correct prediction; 0 without a hit.
pub fn mrr<S: AsRef<str>>(predicted: &[S], gold: &BTreeSet<String>) -> f64 {
    predicted.iter().position(|p| gold.contains(p.as_ref())).map_or(0.0, |i| 1.0 / (i + 1) as f64)
}

/// Mean over documents of `|A ∩ B| / min(|A|, |B|)`, skipping documents where
/// either set is empty. `a` and `b` are aligned by document.
pub fn agreement(a: &[BTreeSet<String>], b: &[BTreeSet<String>]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), actual: b.len() });
    }
    let values: Vec<f64> = a
        .iter()
        .zip(b)
        .filter(|(x, y)| !x.is_empty() && !y.is_empty())
        .map(|(x, y)| x.intersection(y).count() as f64 / x.len().min(y.len()) as f64)
        .collect();
    if values.is_empty() {
        return Err(Error::InvalidArgument("no documents with predictions from both methods".into()));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}
