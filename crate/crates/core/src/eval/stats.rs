use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Minimum sample size for the normal approximation.
pub const MIN_PAIRS: usize = 10;

fn normal_sf(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// 1-based ranks with ties averaged, plus `sum(t^3 - t)` over tie groups.
fn average_ranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && values[idx[j]] == values[idx[i]] {
            j += 1;
        }
        let avg = (i + j + 1) as f64 / 2.0;
        for &k in &idx[i..j] {
            ranks[k] = avg;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    (ranks, ties)
}

/// Two-sided paired Wilcoxon signed-rank test.
///
/// Zero differences are dropped, tied absolute differences share their
/// average rank, and the p-value uses the normal approximation with tie and
/// continuity corrections. All-zero differences give 1.
pub fn wilcoxon_paired(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), actual: ys.len() });
    }
    if xs.len() < MIN_PAIRS {
        return Err(Error::InvalidArgument(format!(
            "Wilcoxon test needs at least {MIN_PAIRS} pairs, got {}",
            xs.len()
        )));
    }
    let d: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| x - y).filter(|&d| d != 0.0).collect();
    if d.is_empty() {
        return Ok(1.0);
    }
    let n = d.len() as f64;
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let (ranks, ties) = average_ranks(&abs);
    let w_plus: f64 = d.iter().zip(&ranks).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let mean = n * (n + 1.0) / 4.0;
    let var = (n * (n + 1.0) * (2.0 * n + 1.0) - ties / 2.0) / 24.0;
    if var <= 0.0 {
        return Ok(1.0);
    }
    let se = var.sqrt();
    let mut z = (w_plus - mean) / se;
    z -= z.signum() * 0.5 / se;
    Ok((2.0 * normal_sf(z.abs())).min(1.0))
}

/// Two-sided Mann-Whitney rank-sum test for unpaired samples, normal
/// approximation with tie and continuity corrections.
pub fn rank_sum(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::InvalidArgument("rank-sum test needs two non-empty samples".into()));
    }
    let (n1, n2) = (xs.len() as f64, ys.len() as f64);
    let all: Vec<f64> = xs.iter().chain(ys).copied().collect();
    let (ranks, ties) = average_ranks(&all);
    let r1: f64 = ranks[..xs.len()].iter().sum();
    let u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    let u = u1.max(n1 * n2 - u1);
    let n = n1 + n2;
    let var = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if var <= 0.0 {
        return Ok(1.0);
    }
    let z = (u - n1 * n2 / 2.0 - 0.5) / var.sqrt();
    Ok((2.0 * normal_sf(z)).min(1.0))
}

/// Pairwise p-values per metric; symmetric, diagonal empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceMatrix {
    pub methods: Vec<String>,
    pub metrics: Vec<String>,
    pub alpha: f64,
    /// `[metric][i][j]`; `None` on the diagonal and where no test was possible.
    p_values: Vec<Vec<Vec<Option<f64>>>>,
}

impl SignificanceMatrix {
    pub fn new(methods: Vec<String>, metrics: Vec<String>, alpha: f64) -> Self {
        let n = methods.len();
        let p_values = vec![vec![vec![None; n]; n]; metrics.len()];
        SignificanceMatrix { methods, metrics, alpha, p_values }
    }

    /// Runs the paired test for every method pair. `scores[method][metric]`
    /// holds per-document values aligned across methods; pairs too small to
    /// test are left empty.
    pub fn paired(methods: Vec<String>, metrics: Vec<String>, scores: &[Vec<Vec<f64>>], alpha: f64) -> Result<Self> {
        if scores.len() != methods.len() {
            return Err(Error::DimensionMismatch { expected: methods.len(), actual: scores.len() });
        }
        let mut m = Self::new(methods, metrics, alpha);
        #[allow(clippy::needless_range_loop)]
        for k in 0..m.metrics.len() {
            for i in 0..m.methods.len() {
                for j in i + 1..m.methods.len() {
                    match wilcoxon_paired(&scores[i][k], &scores[j][k]) {
                        Ok(p) => m.set(k, i, j, p),
                        Err(Error::InvalidArgument(_)) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn set(&mut self, metric: usize, i: usize, j: usize, p: f64) {
        if i != j {
            self.p_values[metric][i][j] = Some(p);
            self.p_values[metric][j][i] = Some(p);
        }
    }

    pub fn get(&self, metric: usize, i: usize, j: usize) -> Option<f64> {
        self.p_values[metric][i][j]
    }

    pub fn significant(&self, metric: usize, i: usize, j: usize) -> bool {
        self.get(metric, i, j).is_some_and(|p| p < self.alpha)
    }
}

/// Fronts of the Pareto dominance order, best first.
///
/// A dominates B when, on every metric, B is not significantly better than A,
/// and on at least one metric A is significantly better than B. "Better"
/// means a higher mean; `means[method][metric]`.
pub fn pareto_rank(means: &[Vec<f64>], sig: &SignificanceMatrix) -> Vec<Vec<String>> {
    let n = sig.methods.len();
    let better = |a: usize, b: usize, k: usize| sig.significant(k, a, b) && means[a][k] > means[b][k];
    let dominates = |a: usize, b: usize| {
        let metrics = 0..sig.metrics.len();
        metrics.clone().all(|k| !better(b, a, k)) && metrics.into_iter().any(|k| better(a, b, k))
    };
    let mut left: Vec<usize> = (0..n).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> =
            left.iter().copied().filter(|&a| !left.iter().any(|&b| b != a && dominates(b, a))).collect();
        // dominance by a strict mean order on some metric cannot cycle
        assert!(!front.is_empty(), "dominance cycle");
        left.retain(|i| !front.contains(i));
        fronts.push(front.into_iter().map(|i| sig.methods[i].clone()).collect());
    }
    fronts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_with_ties() {
        let (r, t) = average_ranks(&[3.0, 1.0, 3.0, 2.0]);
        assert_eq!(r, vec![3.5, 1.0, 3.5, 2.0]);
        assert_eq!(t, 6.0);
    }

    #[test]
    fn identical_samples() {
        let x: Vec<f64> = (0..12).map(f64::from).collect();
        assert_eq!(wilcoxon_paired(&x, &x).unwrap(), 1.0);
        assert!(wilcoxon_paired(&x[..9], &x[..9]).is_err());
    }

    #[test]
    fn shifted_thirty_pairs() {
        let y: Vec<f64> = (0..30).map(|i| f64::from(i) * 0.37).collect();
        let x: Vec<f64> = y.iter().map(|v| v + 1.0).collect();
        let p = wilcoxon_paired(&x, &y).unwrap();
        assert!(p < 1e-3);
        assert_eq!(p, wilcoxon_paired(&y, &x).unwrap());
    }

    #[test]
    fn rank_sum_separated() {
        let a: Vec<f64> = (0..15).map(f64::from).collect();
        let b: Vec<f64> = (100..115).map(f64::from).collect();
        assert!(rank_sum(&a, &b).unwrap() < 1e-4);
        assert_eq!(rank_sum(&a, &a).unwrap(), 1.0);
    }

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn pareto_examples() {
        let mut sig = SignificanceMatrix::new(names(&["A", "B"]), names(&["p5", "mrr"]), 0.05);
        sig.set(0, 0, 1, 0.01);
        sig.set(1, 0, 1, 0.01);
        let means = vec![vec![0.5, 0.6], vec![0.3, 0.4]];
        assert_eq!(pareto_rank(&means, &sig), vec![names(&["A"]), names(&["B"])]);

        let none = SignificanceMatrix::new(names(&["A", "B", "C"]), names(&["p5"]), 0.05);
        let means = vec![vec![0.1], vec![0.2], vec![0.3]];
        assert_eq!(pareto_rank(&means, &none), vec![names(&["A", "B", "C"])]);
    }

    #[test]
    fn trade_off_is_not_dominance() {
        let mut sig = SignificanceMatrix::new(names(&["A", "B"]), names(&["p5", "mrr"]), 0.05);
        sig.set(0, 0, 1, 0.01);
        sig.set(1, 0, 1, 0.01);
        let means = vec![vec![0.5, 0.3], vec![0.3, 0.5]];
        assert_eq!(pareto_rank(&means, &sig).len(), 1);
    }
}
