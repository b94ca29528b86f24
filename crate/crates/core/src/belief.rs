//! Belief over the overlap-set size and the expected-benefit dynamics.
//!
//! The searching agent holds a discrete prior over how many of the
//! explainer's nodes are shared with the explainee. Every failed draw is
//! evidence that the overlap is smaller than hoped; the posterior after a
//! failure with `pool` candidate nodes remaining reweights each size
//! hypothesis `i` by `(pool - i) / pool` and renormalizes. The full
//! distribution is carried so that every step is exact; the mean-only
//! recursion `mu' = mu - V / (pool - mu)` is kept as a consistency check
//! in the tests rather than as the state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance separating a tie between expected benefit and step cost from
/// a strict inequality. The stop-time query treats a tie as not worth
/// continuing; a running episode treats a tie as still worth the draw.
pub const STOP_TIE_TOL: f64 = 1e-9;

/// Tolerance for the rising/falling trend classification; boundary cases
/// classify as Falling.
pub const TREND_TIE_TOL: f64 = 1e-12;

/// Neumaier's compensated summation.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut compensation = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}

/// Discrete probability distribution over the overlap-set size.
///
/// Index `i` of `probs` carries the probability that exactly `i` nodes are
/// shared. The vector always sums to one.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapPrior {
    probs: Vec<f64>,
}

impl OverlapPrior {
    /// Builds a prior from raw non-negative masses, normalizing them.
    pub fn from_masses(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidArgument("prior support is empty".into()));
        }
        if masses.iter().any(|&p| !p.is_finite() || p < 0.0) {
            return Err(Error::InvalidArgument(
                "prior masses must be finite and non-negative".into(),
            ));
        }
        let total: f64 = masses.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidArgument("prior masses sum to zero".into()));
        }
        let probs = masses.into_iter().map(|p| p / total).collect();
        Ok(Self { probs })
    }

    /// Uniform prior over sizes `0..n_support-1`.
    pub fn uniform(n_support: usize) -> Result<Self> {
        if n_support == 0 {
            return Err(Error::InvalidArgument("support size must be >= 1".into()));
        }
        let p = 1.0 / n_support as f64;
        Ok(Self {
            probs: vec![p; n_support],
        })
    }

    /// Normal density evaluated at the integers `0..=m` and renormalized.
    ///
    /// The discrete mean and variance differ slightly from the continuous
    /// parameters; query them with [`OverlapPrior::moments`].
    pub fn truncated_normal(mean: f64, variance: f64, m: usize) -> Result<Self> {
        if !(variance > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "variance must be positive, got {variance}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidArgument("support bound m must be >= 1".into()));
        }
        let masses: Vec<f64> = (0..=m)
            .map(|i| {
                let z = i as f64 - mean;
                (-z * z / (2.0 * variance)).exp()
            })
            .collect();
        Self::from_masses(masses)
    }

    /// Point mass at size `i` with support `0..=m`.
    pub fn point_mass(i: usize, m: usize) -> Result<Self> {
        if i > m {
            return Err(Error::InvalidArgument(format!(
                "point {i} outside support 0..={m}"
            )));
        }
        let mut probs = vec![0.0; m + 1];
        probs[i] = 1.0;
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Largest size hypothesis in the support vector (may carry zero mass).
    pub fn max_size(&self) -> usize {
        self.probs.len() - 1
    }

    /// Largest size with strictly positive mass.
    pub fn max_support(&self) -> usize {
        self.probs
            .iter()
            .rposition(|&p| p > 0.0)
            .expect("prior always has positive total mass")
    }

    /// Mean and variance of the overlap size under this belief.
    /// Compensated summation keeps closed-form identities (uniform mean
    /// `(n-1)/2`, first-step benefit `B/2`) exact.
    pub fn moments(&self) -> (f64, f64) {
        let mean = compensated_sum(
            self.probs
                .iter()
                .enumerate()
                .map(|(i, &p)| p * i as f64),
        );
        let variance = compensated_sum(self.probs.iter().enumerate().map(|(i, &p)| {
            let d = i as f64 - mean;
            p * d * d
        }));
        (mean, variance)
    }

    pub fn mean(&self) -> f64 {
        self.moments().0
    }

    /// Expected benefit of the next draw from a pool of `pool` unvisited
    /// nodes: `B * mean / pool`.
    pub fn expected_benefit(&self, pool: usize, benefit: f64) -> Result<f64> {
        if pool == 0 {
            return Err(Error::InvalidArgument("pool must be >= 1".into()));
        }
        if self.max_support() > pool {
            return Err(Error::InvalidState(format!(
                "belief places mass on {} overlap nodes but only {pool} remain",
                self.max_support()
            )));
        }
        Ok(benefit * self.mean() / pool as f64)
    }

    /// Posterior after one failed draw from a pool of `pool` nodes.
    ///
    /// Reweights hypothesis `i` by the failure likelihood `(pool - i)`;
    /// mass at `i = pool` becomes exactly zero.
    pub fn after_failure(&self, pool: usize) -> Result<Self> {
        if pool == 0 {
            return Err(Error::InvalidArgument("pool must be >= 1".into()));
        }
        if self.max_support() > pool {
            return Err(Error::InvalidState(format!(
                "belief places mass on {} overlap nodes but only {pool} remain",
                self.max_support()
            )));
        }
        let mean = self.mean();
        if mean >= pool as f64 {
            return Err(Error::ImpossibleFailure { mean, pool });
        }
        let weighted: Vec<f64> = self
            .probs
            .iter()
            .enumerate()
            .map(|(i, &p)| if i >= pool { 0.0 } else { p * (pool - i) as f64 })
            .collect();
        let total: f64 = weighted.iter().sum();
        Ok(Self {
            probs: weighted.into_iter().map(|w| w / total).collect(),
        })
    }
}

/// Per-step cost of the search, `c(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CostFunction {
    Constant { c: f64 },
    Linear { c: f64 },
}

impl CostFunction {
    pub fn validate(&self) -> Result<()> {
        let c = match self {
            CostFunction::Constant { c } | CostFunction::Linear { c } => *c,
        };
        if !c.is_finite() || c < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "cost rate must be non-negative, got {c}"
            )));
        }
        Ok(())
    }

    pub fn at(&self, t: usize) -> f64 {
        match self {
            CostFunction::Constant { c } => *c,
            CostFunction::Linear { c } => c * t as f64,
        }
    }
}

/// Whether the expected benefit rises or falls between the first two steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrendClass {
    Rising,
    Falling,
}

/// Why a benefit trajectory stopped before the requested horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// The belief made further failure impossible (mean reached the pool).
    ImpossibleFailure,
}

/// One row of the expected-benefit recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryStep {
    /// Step index, starting at 1.
    pub t: usize,
    /// Unvisited non-target nodes remaining before the draw, `N_R - t`.
    pub pool: usize,
    /// Posterior mean of the overlap size at this step.
    pub mean: f64,
    /// Posterior variance of the overlap size at this step.
    pub variance: f64,
    /// `B * mean / pool`.
    pub expected_benefit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenefitTrajectory {
    pub steps: Vec<TrajectoryStep>,
    pub truncation: Option<Truncation>,
}

impl BenefitTrajectory {
    pub fn expected_benefits(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.expected_benefit).collect()
    }
}

/// Runs the failure-update recursion for `t = 1..=t_max` steps.
///
/// Step `t` reports the belief after `t - 1` failures, with the pool of
/// remaining nodes equal to `n_r - t`. Stops early with a truncation
/// marker if an update becomes impossible.
pub fn benefit_trajectory(
    prior: &OverlapPrior,
    n_r: usize,
    benefit: f64,
    t_max: usize,
) -> Result<BenefitTrajectory> {
    if n_r < 2 {
        return Err(Error::InvalidArgument("graph size must be >= 2".into()));
    }
    if t_max == 0 || t_max > n_r - 1 {
        return Err(Error::InvalidArgument(format!(
            "t_max must lie in 1..={}, got {t_max}",
            n_r - 1
        )));
    }
    if prior.max_support() > n_r - 1 {
        return Err(Error::InvalidArgument(
            "prior support exceeds the number of non-target nodes".into(),
        ));
    }

    let mut belief = prior.clone();
    let mut steps = Vec::with_capacity(t_max);
    let mut truncation = None;
    for t in 1..=t_max {
        let pool = n_r - t;
        let (mean, variance) = belief.moments();
        steps.push(TrajectoryStep {
            t,
            pool,
            mean,
            variance,
            expected_benefit: benefit * mean / pool as f64,
        });
        if t < t_max {
            match belief.after_failure(pool) {
                Ok(next) => belief = next,
                Err(Error::ImpossibleFailure { .. }) => {
                    truncation = Some(Truncation::ImpossibleFailure);
                    break;
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(BenefitTrajectory { steps, truncation })
}

/// Classifies whether the expected benefit rises at the second step:
/// Rising iff `mu * (N_R - 1 - mu) > V * (N_R - 1)`, ties Falling.
pub fn classify_trend(prior: &OverlapPrior, n_r: usize) -> Result<TrendClass> {
    if n_r < 2 {
        return Err(Error::InvalidArgument("graph size must be >= 2".into()));
    }
    let (mean, variance) = prior.moments();
    if mean <= 0.0 {
        return Err(Error::InvalidArgument(
            "trend undefined for a zero-mean prior (benefit identically 0)".into(),
        ));
    }
    let pool = (n_r - 1) as f64;
    if mean * (pool - mean) - variance * pool > TREND_TIE_TOL {
        Ok(TrendClass::Rising)
    } else {
        Ok(TrendClass::Falling)
    }
}

/// First step `t` at which continuing stops being worthwhile:
/// smallest `t >= 1` with `E(B_t) <= c(t)`, or `None` within the horizon.
pub fn myopic_stop_time(
    prior: &OverlapPrior,
    n_r: usize,
    benefit: f64,
    cost: &CostFunction,
) -> Result<Option<usize>> {
    cost.validate()?;
    let trajectory = benefit_trajectory(prior, n_r, benefit, n_r - 1)?;
    for step in &trajectory.steps {
        if step.expected_benefit <= cost.at(step.t) + STOP_TIE_TOL {
            return Ok(Some(step.t));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn uniform_prior_moments() {
        let p = OverlapPrior::uniform(1).unwrap();
        assert_eq!(p.moments(), (0.0, 0.0));

        let p = OverlapPrior::uniform(300).unwrap();
        let (mean, _) = p.moments();
        assert_close(mean, 149.5, 1e-12);

        // variance of uniform over 0..3 is (16-1)/12
        let p = OverlapPrior::uniform(4).unwrap();
        let (mean, var) = p.moments();
        assert_close(mean, 1.5, 1e-12);
        assert_close(var, 15.0 / 12.0, 1e-12);
        // direct summation route must agree with the closed form
        let direct: f64 = (0..4).map(|i| 0.25 * (i as f64 - mean).powi(2)).sum();
        assert_close(var, direct, 1e-12);
    }

    #[test]
    fn uniform_rejects_empty_support() {
        assert!(matches!(
            OverlapPrior::uniform(0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn truncated_normal_basic() {
        let p = OverlapPrior::truncated_normal(10.0, 5.0, 299).unwrap();
        let (mean, _) = p.moments();
        assert!((mean - 10.0).abs() < 0.5, "discrete mean {mean}");

        let p = OverlapPrior::truncated_normal(0.0, 1e-6, 10).unwrap();
        assert!(p.probs()[0] > 1.0 - 1e-12);

        // heavy truncation at 0 shrinks the variance-to-mean ratio below
        // the continuous value of 5; direct summation gives ~3.4916
        let p = OverlapPrior::truncated_normal(10.0, 50.0, 299).unwrap();
        let (mean, var) = p.moments();
        let direct_mean: f64 = p.probs().iter().enumerate().map(|(i, &q)| q * i as f64).sum();
        let direct_var: f64 = p
            .probs()
            .iter()
            .enumerate()
            .map(|(i, &q)| q * (i as f64 - direct_mean).powi(2))
            .sum();
        assert_close(mean, direct_mean, 1e-12);
        assert_close(var, direct_var, 1e-12);
        assert_close(var / mean, 3.4916187178743687, 1e-9);

        assert!(OverlapPrior::truncated_normal(10.0, 0.0, 299).is_err());
        assert!(OverlapPrior::truncated_normal(10.0, -1.0, 299).is_err());
    }

    #[test]
    fn point_mass_moments() {
        let p = OverlapPrior::point_mass(7, 10).unwrap();
        assert_eq!(p.moments(), (7.0, 0.0));
    }

    #[test]
    fn expected_benefit_cases() {
        let n_r = 300;
        let p = OverlapPrior::uniform(n_r).unwrap();
        assert_close(p.expected_benefit(n_r - 1, 2.0).unwrap(), 1.0, 1e-12);

        let p = OverlapPrior::point_mass(0, 5).unwrap();
        assert_eq!(p.expected_benefit(9, 3.0).unwrap(), 0.0);

        // prior {0: 0.5, 2: 0.5}, pool 4, B=1 -> mean 1, benefit 1/4
        let p = OverlapPrior::from_masses(vec![0.5, 0.0, 0.5]).unwrap();
        assert_close(p.expected_benefit(4, 1.0).unwrap(), 0.25, 1e-12);

        // support exceeding the pool is inconsistent
        let p = OverlapPrior::uniform(10).unwrap();
        assert!(matches!(
            p.expected_benefit(5, 1.0),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn failure_update_hand_enumeration() {
        // uniform over 0..3, pool 3: weights (3,2,1,0) -> (1/2, 1/3, 1/6, 0)
        let p = OverlapPrior::uniform(4).unwrap();
        let q = p.after_failure(3).unwrap();
        assert_close(q.probs()[0], 0.5, 1e-12);
        assert_close(q.probs()[1], 1.0 / 3.0, 1e-12);
        assert_close(q.probs()[2], 1.0 / 6.0, 1e-12);
        assert_eq!(q.probs()[3], 0.0);
        assert_close(q.mean(), 2.0 / 3.0, 1e-12);
        // Mean recursion route: 1.5 - 1.25/1.5 = 2/3
        assert_close(1.5 - 1.25 / 1.5, 2.0 / 3.0, 1e-12);
    }

    #[test]
    fn failure_update_point_masses() {
        let p = OverlapPrior::point_mass(0, 5).unwrap();
        let q = p.after_failure(5).unwrap();
        assert_eq!(q, p);

        let p = OverlapPrior::point_mass(5, 5).unwrap();
        assert!(matches!(
            p.after_failure(5),
            Err(Error::ImpossibleFailure { .. })
        ));
    }

    #[test]
    fn trajectory_uniform_matches_closed_form() {
        let p = OverlapPrior::uniform(10).unwrap();
        let tr = benefit_trajectory(&p, 10, 1.0, 5).unwrap();
        let got = tr.expected_benefits();
        let want = [0.5, 1.0 / 3.0, 0.25, 0.2, 1.0 / 6.0];
        for (g, w) in got.iter().zip(want.iter()) {
            assert_close(*g, *w, 1e-12);
        }
        assert!(tr.truncation.is_none());
    }

    #[test]
    fn trajectory_point_mass_rising() {
        let n_r = 12;
        let k = 3;
        let p = OverlapPrior::point_mass(k, n_r - 1).unwrap();
        let tr = benefit_trajectory(&p, n_r, 1.0, n_r - 1 - k).unwrap();
        let mut prev = 0.0;
        for step in &tr.steps {
            assert_close(
                step.expected_benefit,
                k as f64 / (n_r - step.t) as f64,
                1e-12,
            );
            assert!(step.expected_benefit > prev);
            prev = step.expected_benefit;
        }
    }

    #[test]
    fn trajectory_zero_mass_prior() {
        let p = OverlapPrior::point_mass(0, 9).unwrap();
        let tr = benefit_trajectory(&p, 10, 1.0, 9).unwrap();
        assert!(tr.steps.iter().all(|s| s.expected_benefit == 0.0));
    }

    #[test]
    fn trajectory_truncates_on_impossible_failure() {
        // point mass at 3 in a 5-node graph: pool reaches 3 at t=2, where
        // the belief says success is certain and further failure is impossible
        let p = OverlapPrior::point_mass(3, 4).unwrap();
        let tr = benefit_trajectory(&p, 5, 1.0, 4).unwrap();
        assert_eq!(tr.truncation, Some(Truncation::ImpossibleFailure));
        assert!(tr.steps.len() < 4);
    }

    #[test]
    fn trajectory_rejects_bad_t_max() {
        let p = OverlapPrior::uniform(10).unwrap();
        assert!(benefit_trajectory(&p, 10, 1.0, 0).is_err());
        assert!(benefit_trajectory(&p, 10, 1.0, 10).is_err());
    }

    #[test]
    fn trend_classification() {
        let p = OverlapPrior::uniform(300).unwrap();
        assert_eq!(classify_trend(&p, 300).unwrap(), TrendClass::Falling);

        let p = OverlapPrior::truncated_normal(10.0, 5.0, 299).unwrap();
        assert_eq!(classify_trend(&p, 300).unwrap(), TrendClass::Rising);

        let p = OverlapPrior::point_mass(3, 9).unwrap();
        assert_eq!(classify_trend(&p, 10).unwrap(), TrendClass::Rising);

        let p = OverlapPrior::point_mass(0, 9).unwrap();
        assert!(classify_trend(&p, 10).is_err());
    }

    #[test]
    fn stop_time_cases() {
        let p = OverlapPrior::uniform(100).unwrap();
        let cost = CostFunction::Constant { c: 0.2 };
        assert_eq!(myopic_stop_time(&p, 100, 1.0, &cost).unwrap(), Some(4));

        let free = CostFunction::Constant { c: 0.0 };
        assert_eq!(myopic_stop_time(&p, 100, 1.0, &free).unwrap(), None);

        let p = OverlapPrior::point_mass(0, 99).unwrap();
        assert_eq!(myopic_stop_time(&p, 100, 1.0, &cost).unwrap(), Some(1));
    }

    #[test]
    fn cost_function_shapes() {
        let c = CostFunction::Linear { c: 0.5 };
        assert_eq!(c.at(4), 2.0);
        assert!(CostFunction::Constant { c: -1.0 }.validate().is_err());
    }
}
