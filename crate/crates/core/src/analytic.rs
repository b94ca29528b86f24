//! Closed forms for the time to find an overlap node on a complete graph.
//!
//! With `N_R - 1` non-target nodes of which `N_K` are shared, sequential
//! sampling without replacement makes the success time negative
//! hypergeometric. The conditional success probability on draw `t` given
//! `t - 1` failures is `N_K / ((N_R - 1) - (t - 1))`; the unconditional
//! pmf is assembled from those hazards, and the mean is `N_R / (N_K + 1)`.

use crate::error::{Error, Result};

/// Probability mass over the success step `t = 1..=N_R - N_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeDistribution {
    pmf: Vec<f64>,
    n_r: usize,
    n_k: usize,
}

impl TimeDistribution {
    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_k(&self) -> usize {
        self.n_k
    }

    /// Probability that the first success lands on step `t` (1-based).
    pub fn prob(&self, t: usize) -> f64 {
        if t >= 1 && t <= self.pmf.len() {
            self.pmf[t - 1]
        } else {
            0.0
        }
    }

    /// Last step with positive mass, `N_R - N_K`.
    pub fn support_max(&self) -> usize {
        self.pmf.len()
    }

    pub fn mean(&self) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .map(|(idx, &p)| p * (idx + 1) as f64)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.pmf
            .iter()
            .enumerate()
            .map(|(idx, &p)| {
                let d = (idx + 1) as f64 - mean;
                p * d * d
            })
            .sum()
    }
}

fn validate_counts(n_r: usize, n_k: usize) -> Result<()> {
    if n_r < 2 {
        return Err(Error::InvalidArgument("graph size must be >= 2".into()));
    }
    if n_k == 0 {
        return Err(Error::InvalidArgument("overlap must be >= 1".into()));
    }
    if n_k > n_r - 1 {
        return Err(Error::InvalidArgument(format!(
            "overlap {n_k} exceeds the {} non-target nodes",
            n_r - 1
        )));
    }
    Ok(())
}

/// Conditional success probability on draw `t` given `t - 1` failures.
pub fn success_hazard(n_r: usize, n_k: usize, t: usize) -> Result<f64> {
    validate_counts(n_r, n_k)?;
    if t == 0 {
        return Err(Error::InvalidArgument("step index starts at 1".into()));
    }
    let pool = (n_r - 1).checked_sub(t - 1).unwrap_or(0);
    if pool < n_k {
        return Err(Error::InvalidArgument(format!(
            "pool at step {t} is smaller than the overlap {n_k}"
        )));
    }
    Ok(n_k as f64 / pool as f64)
}

/// Unconditional distribution of the success step.
pub fn time_pmf(n_r: usize, n_k: usize) -> Result<TimeDistribution> {
    validate_counts(n_r, n_k)?;
    let t_max = n_r - n_k;
    let mut pmf = Vec::with_capacity(t_max);
    let mut survival = 1.0;
    for t in 1..=t_max {
        let hazard = success_hazard(n_r, n_k, t)?;
        pmf.push(survival * hazard);
        survival *= 1.0 - hazard;
    }
    Ok(TimeDistribution { pmf, n_r, n_k })
}

/// Expected success step, `N_R / (N_K + 1)`.
pub fn expected_explanation_time(n_r: usize, n_k: usize) -> Result<f64> {
    validate_counts(n_r, n_k)?;
    Ok(n_r as f64 / (n_k + 1) as f64)
}

/// Probability that `t_stop` draws all fail, i.e. the search is abandoned
/// at `t_stop` before any success.
pub fn abandonment_probability(n_r: usize, n_k: usize, t_stop: usize) -> Result<f64> {
    validate_counts(n_r, n_k)?;
    if t_stop > n_r - n_k {
        return Err(Error::InvalidArgument(format!(
            "t_stop {t_stop} exceeds the maximum of {} failures",
            n_r - n_k
        )));
    }
    let mut survival = 1.0;
    for t in 1..=t_stop {
        survival *= 1.0 - success_hazard(n_r, n_k, t)?;
    }
    Ok(survival)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn hazard_values() {
        assert_close(success_hazard(300, 9, 1).unwrap(), 9.0 / 299.0, 1e-15);
        assert_close(success_hazard(4, 1, 3).unwrap(), 1.0, 1e-15);
        assert!(success_hazard(4, 1, 4).is_err());
        assert!(success_hazard(10, 0, 1).is_err());
        assert!(success_hazard(10, 10, 1).is_err());
    }

    #[test]
    fn pmf_small_cases() {
        let d = time_pmf(4, 1).unwrap();
        assert_eq!(d.support_max(), 3);
        for t in 1..=3 {
            assert_close(d.prob(t), 1.0 / 3.0, 1e-15);
        }

        // pool of 2, both overlap: success certain on the first draw
        let d = time_pmf(3, 2).unwrap();
        assert_eq!(d.pmf(), &[1.0]);

        let d = time_pmf(6, 2).unwrap();
        assert_close(d.mean(), 2.0, 1e-12);
    }

    #[test]
    fn expected_time_values() {
        assert_close(expected_explanation_time(10, 9).unwrap(), 1.0, 1e-15);
        assert_close(expected_explanation_time(300, 9).unwrap(), 30.0, 1e-15);
        assert_close(expected_explanation_time(4, 1).unwrap(), 2.0, 1e-15);
        assert!(expected_explanation_time(10, 0).is_err());
    }

    #[test]
    fn pmf_mean_matches_closed_form() {
        for n_r in 2..=60usize {
            for n_k in 1..n_r {
                let d = time_pmf(n_r, n_k).unwrap();
                let total: f64 = d.pmf().iter().sum();
                assert_close(total, 1.0, 1e-12);
                assert_close(d.mean(), n_r as f64 / (n_k + 1) as f64, 1e-10);
            }
        }
    }

    #[test]
    fn abandonment_values() {
        assert_close(abandonment_probability(100, 5, 0).unwrap(), 1.0, 1e-15);
        let want = (94.0 / 99.0) * (93.0 / 98.0) * (92.0 / 97.0) * (91.0 / 96.0);
        assert_close(abandonment_probability(100, 5, 4).unwrap(), want, 1e-15);
        assert_close(abandonment_probability(100, 5, 95).unwrap(), 0.0, 1e-12);
        assert!(abandonment_probability(100, 5, 96).is_err());
    }
}
