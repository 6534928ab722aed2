//! Log-space hypergeometric tails and lexical specificity.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    let half = T::lit(0.5);
    let ln_2pi = T::lit(std::f64::consts::TAU.ln());
    if x < half {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let pi = T::lit(std::f64::consts::PI);
        return (pi / (pi * x).sin()).abs().ln() - ln_gamma(T::one() - x);
    }
    if x >= T::lit(15.0) {
        // Stirling series
        let inv = x.recip();
        let inv2 = inv * inv;
        let series = inv
            * (T::lit(1.0 / 12.0)
                - inv2 * (T::lit(1.0 / 360.0) - inv2 * (T::lit(1.0 / 1260.0) - inv2 * T::lit(1.0 / 1680.0))));
        return (x - half) * x.ln() - x + half * ln_2pi + series;
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::from_count(i as u64));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    half * ln_2pi + (x + half) * t.ln() - t + acc.ln()
}

/// `ln(n choose k)`; negative infinity when `k > n`.
pub fn ln_choose<T: Scalar>(n: u64, k: u64) -> T {
    if k > n {
        return T::neg_infinity();
    }
    if k == 0 || k == n {
        return T::zero();
    }
    let lg = |v: u64| ln_gamma(T::from_count(v) + T::one());
    lg(n) - lg(k) - lg(n - k)
}

fn log_add_exp<T: Scalar>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln P(X = k)` for `X ~ Hypergeometric(population, successes, draws)`.
pub fn ln_hypergeom_pmf<T: Scalar>(population: u64, successes: u64, draws: u64, k: u64) -> T {
    if k > successes || k > draws || draws - k > population - successes {
        return T::neg_infinity();
    }
    ln_choose::<T>(successes, k) + ln_choose::<T>(population - successes, draws - k) - ln_choose::<T>(population, draws)
}

/// `ln P(X >= k)` for `X ~ Hypergeometric(population, successes, draws)`.
///
/// Sums the support `max(k, lo) ..= min(successes, draws)` in log space using
/// the ratio of consecutive probabilities, stopping once the terms past the
/// mode are negligible relative to the accumulated sum.
pub fn ln_hypergeom_sf<T: Scalar>(population: u64, successes: u64, draws: u64, k: u64) -> T {
    assert!(successes <= population && draws <= population);
    let lo = (draws + successes).saturating_sub(population);
    let hi = successes.min(draws);
    if k <= lo {
        return T::zero();
    }
    if k > hi {
        return T::neg_infinity();
    }
    let cutoff = T::lit(-40.0);
    let mut term = ln_hypergeom_pmf::<T>(population, successes, draws, k);
    let mut acc = term;
    let mut l = k;
    while l < hi {
        let num = (successes - l) as f64 * (draws - l) as f64;
        let den = (l + 1) as f64 * (population + l + 1 - successes - draws) as f64;
        let ratio = T::lit(num / den);
        term = term + ratio.ln();
        acc = log_add_exp(acc, term);
        l += 1;
        if ratio < T::one() && term - acc < cutoff {
            break;
        }
    }
    acc.min(T::zero())
}

/// Lexical specificity: `-log10 P(X >= doc_freq)` where `X` is hypergeometric
/// with population `total_tokens`, `corpus_freq` successes and `doc_len` draws.
///
/// Evaluated in `f64` whatever `T` is: at corpus scale the log-gamma terms
/// reach 1e7 and their differences cancel to nothing in single precision.
pub fn specificity<T: Scalar>(total_tokens: u64, doc_len: u64, corpus_freq: u64, doc_freq: u64) -> Result<T> {
    if doc_len > total_tokens {
        return Err(Error::Precondition(format!("document length {doc_len} exceeds corpus size {total_tokens}")));
    }
    if doc_freq > corpus_freq {
        return Err(Error::Precondition(format!(
            "in-document frequency {doc_freq} exceeds corpus frequency {corpus_freq}"
        )));
    }
    if corpus_freq > total_tokens || doc_freq > doc_len {
        return Err(Error::Precondition(format!(
            "frequencies ({doc_freq}, {corpus_freq}) inconsistent with sizes ({doc_len}, {total_tokens})"
        )));
    }
    let ln_p = ln_hypergeom_sf::<f64>(total_tokens, corpus_freq, doc_len, doc_freq);
    let score = -ln_p / std::f64::consts::LN_10;
    Ok(T::lit(score.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ln_factorial_exact(n: u64) -> f64 {
        (1..=n).map(|i| (i as f64).ln()).sum()
    }

    #[test]
    fn ln_gamma_matches_factorials() {
        for n in 0..200u64 {
            let got: f64 = ln_gamma((n + 1) as f64);
            let want = ln_factorial_exact(n);
            assert!((got - want).abs() < 1e-11 * want.max(1.0), "n={n} {got} {want}");
        }
        let half: f64 = ln_gamma(0.5);
        assert!((half - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
        let quarter: f64 = ln_gamma(0.25);
        assert!((quarter - 1.288_022_524_698_077_5).abs() < 1e-12);
    }

    #[test]
    fn ln_gamma_is_continuous_at_the_switch() {
        let a: f64 = ln_gamma(15.0 - 1e-9);
        let b: f64 = ln_gamma(15.0);
        assert!((a - b).abs() < 1e-7);
    }

    #[test]
    fn worked_example() {
        // M=5, m_d=3, F=2, f=2: P = C(2,2)C(3,1)/C(5,3) = 3/10
        let s: f64 = specificity(5, 3, 2, 2).unwrap();
        assert!((s - (-(0.3f64).log10())).abs() < 1e-12);
        assert!((s - 0.5229).abs() < 1e-4);
    }

    #[test]
    fn certain_event_scores_zero() {
        let s: f64 = specificity(7, 7, 4, 4).unwrap();
        assert_eq!(s, 0.0);
        let s: f64 = specificity(10, 4, 3, 0).unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn precondition_errors() {
        assert!(specificity::<f64>(5, 6, 2, 1).is_err());
        assert!(specificity::<f64>(5, 3, 2, 3).is_err());
    }

    #[test]
    fn large_corpus_is_finite() {
        let s: f64 = specificity(2_000_000, 5_000, 300, 40).unwrap();
        assert!(s.is_finite() && s > 50.0, "{s}");
        let s32: f32 = specificity(2_000_000, 5_000, 300, 40).unwrap();
        assert!((s32 as f64 - s).abs() / s < 1e-6);
    }

    #[test]
    fn pmf_sums_to_one() {
        let total: f64 = (0..=6).map(|k| ln_hypergeom_pmf::<f64>(20, 6, 9, k).exp()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
