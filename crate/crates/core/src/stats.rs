//! Goodness-of-fit testing of empirical success-time histograms against
//! an analytic pmf.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Minimum expected count per cell; sparser cells are merged into their
/// right neighbor before the statistic is computed.
const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

impl ChiSquareResult {
    pub fn rejected_at(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Pearson chi-square test of observed counts (indexed by `t - 1`)
/// against the pmf. Cells are pooled left-to-right until each carries an
/// expected count of at least five.
pub fn chi_square_gof(observed: &[u64], pmf: &[f64]) -> Result<ChiSquareResult> {
    if observed.len() != pmf.len() {
        return Err(Error::InvalidArgument(format!(
            "histogram has {} cells but the pmf has {}",
            observed.len(),
            pmf.len()
        )));
    }
    let n: u64 = observed.iter().sum();
    if n == 0 {
        return Err(Error::InvalidArgument("empty histogram".into()));
    }
    let n = n as f64;

    // pool cells so every bin has expected count >= MIN_EXPECTED
    let mut bins: Vec<(f64, f64)> = Vec::new(); // (observed, expected)
    let mut acc_obs = 0.0;
    let mut acc_exp = 0.0;
    for (&o, &p) in observed.iter().zip(pmf.iter()) {
        acc_obs += o as f64;
        acc_exp += p * n;
        if acc_exp >= MIN_EXPECTED {
            bins.push((acc_obs, acc_exp));
            acc_obs = 0.0;
            acc_exp = 0.0;
        }
    }
    if acc_exp > 0.0 || acc_obs > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc_obs;
                last.1 += acc_exp;
            }
            None => bins.push((acc_obs, acc_exp)),
        }
    }
    if bins.len() < 2 {
        return Err(Error::InvalidArgument(
            "fewer than two bins after pooling; test undefined".into(),
        ));
    }

    let statistic: f64 = bins
        .iter()
        .map(|&(o, e)| {
            let d = o - e;
            d * d / e
        })
        .sum();
    let df = bins.len() - 1;
    let dist = ChiSquared::new(df as f64)
        .map_err(|e| Error::InvalidState(format!("chi-squared setup: {e}")))?;
    Ok(ChiSquareResult {
        statistic,
        df,
        p_value: 1.0 - dist.cdf(statistic),
    })
}
