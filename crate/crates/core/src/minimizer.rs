//! Adaptive bisection for the global minimum of a path on `[0, 1]`.
//!
//! After the fixed start `t1 = 1`, `t2 = 1/2`, every step computes for each
//! subinterval `[t_{i-1}, t_i]`
//!
//! ```text
//! rho_i = (t_i - t_{i-1}) / ((f(t_{i-1}) - M_n + g(tau_n)) (f(t_i) - M_n + g(tau_n)))
//! ```
//!
//! with `g(x) = sqrt(lambda x ln(1/x))`, and evaluates `f` at the midpoint of
//! the leftmost interval with the largest `rho_i`. `M_n` is the smallest value
//! seen so far and `tau_n` the smallest gap. A step costs O(n), a run of `n`
//! evaluations O(n^2).

use crate::dyadic::{DyadicPoint, Skeleton, DEFAULT_LEVEL_CAP};
use crate::error::{Error, Result};
use crate::oracle::PathOracle;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizerConfig {
    lambda: f64,
    max_steps: usize,
    level_cap: u32,
}

impl MinimizerConfig {
    pub fn new(lambda: f64, max_steps: usize) -> Result<Self> {
        Self::with_level_cap(lambda, max_steps, DEFAULT_LEVEL_CAP)
    }

    pub fn with_level_cap(lambda: f64, max_steps: usize, level_cap: u32) -> Result<Self> {
        validate_lambda(lambda)?;
        if max_steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "max_steps must be at least 2, got {max_steps}"
            )));
        }
        Ok(Self {
            lambda,
            max_steps,
            level_cap,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
    }

    pub fn level_cap(&self) -> u32 {
        self.level_cap
    }
}

pub(crate) fn validate_lambda(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "lambda must be a finite number >= 1, got {lambda}"
        )));
    }
    Ok(())
}

/// Offset function `sqrt(lambda x ln(1/x))` on `(0, 1]`.
pub fn g(x: f64, lambda: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "g is defined on (0, 1], got {x}"
        )));
    }
    Ok((lambda * x * (1.0 / x).ln()).sqrt())
}

/// Selection statistic for every subinterval of `skeleton`.
///
/// Requires at least two evaluations, so that `tau_n < 1` and `g(tau_n) > 0`.
pub fn compute_rho(skeleton: &Skeleton, lambda: f64) -> Result<Vec<f64>> {
    let mut rho = Vec::with_capacity(skeleton.n());
    compute_rho_into(skeleton, lambda, &mut rho)?;
    Ok(rho)
}

pub(crate) fn compute_rho_into(skeleton: &Skeleton, lambda: f64, rho: &mut Vec<f64>) -> Result<()> {
    if skeleton.n() < 2 {
        return Err(Error::InvalidArgument(
            "rho needs at least two evaluations".to_string(),
        ));
    }
    let tau = skeleton.min_gap().expect("n >= 2").to_f64();
    let offset = g(tau, lambda)? - skeleton.min_value();
    rho.clear();
    let values = skeleton.values();
    let mut left = values[0] + offset;
    for (&v, &gap) in values[1..].iter().zip(skeleton.gaps()) {
        let right = v + offset;
        rho.push(gap / (left * right));
        left = right;
    }
    Ok(())
}

/// Index (0-based) of the first maximum of `rho`. Ties are decided by exact
/// equality in favour of the smallest index.
///
/// # Panics
///
/// If `rho` is empty.
pub fn select_split(rho: &[f64]) -> usize {
    assert!(!rho.is_empty(), "no intervals to split");
    let mut best = 0;
    for (i, &r) in rho.iter().enumerate().skip(1) {
        if r > rho[best] {
            best = i;
        }
    }
    best
}

/// Conditional probability, given the observations, that the path dips below
/// `M_n - g(tau_n)` inside each interval: `exp(-2 / rho_i)`.
pub fn undershoot_probabilities(rho: &[f64]) -> Vec<f64> {
    rho.iter().map(|&r| undershoot_probability(r)).collect()
}

fn undershoot_probability(rho: f64) -> f64 {
    (-2.0 / rho).exp()
}

/// One row of the per-step log, describing the state after `n` evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct StepTrace {
    pub n: usize,
    /// 0-based index of the interval whose midpoint became `new_site`.
    pub split_index: usize,
    pub new_site: DyadicPoint,
    pub new_value: f64,
    pub min_value: f64,
    pub tau_level: u32,
    /// Largest `rho_i` of the resulting state.
    pub rho_max: f64,
    pub undershoot_max: f64,
}

#[derive(Debug, Clone)]
pub struct MinimizerState {
    skeleton: Skeleton,
    lambda: f64,
    level_cap: u32,
    rho: Vec<f64>,
    fav_stat: f64,
}

impl MinimizerState {
    /// Performs the nonadaptive start `t1 = 1`, `t2 = 1/2`.
    pub fn start<O: PathOracle>(
        oracle: &mut O,
        config: &MinimizerConfig,
    ) -> Result<(Self, StepTrace)> {
        let mut state = Self {
            skeleton: Skeleton::new(),
            lambda: config.lambda,
            level_cap: config.level_cap,
            rho: Vec::new(),
            fav_stat: 0.0,
        };
        state.observe(oracle, DyadicPoint::one())?;
        let half =
            DyadicPoint::midpoint(&DyadicPoint::zero(), &DyadicPoint::one(), config.level_cap)?;
        let trace = state.record(oracle, half, 0)?;
        Ok((state, trace))
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn n(&self) -> usize {
        self.skeleton.n()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn min_value(&self) -> f64 {
        self.skeleton.min_value()
    }

    pub fn tau_level(&self) -> u32 {
        self.skeleton
            .tau_level()
            .expect("bisection gaps are powers of two")
    }

    /// `rho_i` for the current state, one entry per interval.
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// Largest normalized increment `|f(t_i) - f(t_{i-1})| / sqrt(t_i - t_{i-1})`
    /// over every interval that has existed so far.
    pub fn fav_stat(&self) -> f64 {
        self.fav_stat
    }

    /// Evaluates the midpoint of the interval with the largest `rho`.
    pub fn step<O: PathOracle>(&mut self, oracle: &mut O) -> Result<StepTrace> {
        let j = select_split(&self.rho);
        let sites = self.skeleton.sites();
        let t = DyadicPoint::midpoint(&sites[j], &sites[j + 1], self.level_cap)?;
        self.record(oracle, t, j)
    }

    fn observe<O: PathOracle>(&mut self, oracle: &mut O, t: DyadicPoint) -> Result<usize> {
        let value = oracle.evaluate(&t)?;
        let idx = self.skeleton.insert(t, value)?;
        let values = self.skeleton.values();
        let gaps = self.skeleton.gaps();
        for i in idx..(idx + 2).min(values.len()) {
            let stat = (values[i] - values[i - 1]).abs() / gaps[i - 1].sqrt();
            self.fav_stat = self.fav_stat.max(stat);
        }
        Ok(idx)
    }

    fn record<O: PathOracle>(
        &mut self,
        oracle: &mut O,
        t: DyadicPoint,
        split_index: usize,
    ) -> Result<StepTrace> {
        let idx = self.observe(oracle, t)?;
        compute_rho_into(&self.skeleton, self.lambda, &mut self.rho)?;
        let rho_max = self.rho[select_split(&self.rho)];
        Ok(StepTrace {
            n: self.n(),
            split_index,
            new_site: self.skeleton.sites()[idx].clone(),
            new_value: self.skeleton.values()[idx],
            min_value: self.min_value(),
            tau_level: self.tau_level(),
            rho_max,
            undershoot_max: undershoot_probability(rho_max),
        })
    }
}

/// Runs the algorithm for exactly `config.max_steps()` evaluations after the
/// origin. The trace has one row per `n` in `2..=max_steps`.
pub fn run<O: PathOracle>(
    oracle: &mut O,
    config: &MinimizerConfig,
) -> Result<(MinimizerState, Vec<StepTrace>)> {
    let (mut state, first) = MinimizerState::start(oracle, config)?;
    let mut traces = Vec::with_capacity(config.max_steps - 1);
    traces.push(first);
    while state.n() < config.max_steps {
        traces.push(state.step(oracle)?);
    }
    Ok((state, traces))
}

/// Outcome of checking the rho bound that holds on the favorable set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaDiagnostic {
    pub n: usize,
    pub fav_stat: f64,
    /// `sqrt(lambda ln(n) / 4)`.
    pub fav_threshold: f64,
    pub rho_max: f64,
    /// `2 / (lambda ln(1 / tau_n))`.
    pub bound: f64,
}

impl LemmaDiagnostic {
    /// Whether the path belongs to the favorable set at this `n`.
    pub fn applicable(&self) -> bool {
        self.fav_stat <= self.fav_threshold
    }

    pub fn bound_holds(&self) -> bool {
        self.rho_max <= self.bound
    }
}

/// Checks `max rho <= 2 / (lambda ln(1/tau_n))` whenever the normalized
/// increments seen so far stay below `sqrt(lambda ln(n) / 4)`.
///
/// Returns an error only when the hypothesis holds and the bound fails.
pub fn check_lemma_rho(state: &MinimizerState) -> Result<LemmaDiagnostic> {
    let n = state.n();
    let tau = state.skeleton.min_gap().expect("n >= 2").to_f64();
    let diag = LemmaDiagnostic {
        n,
        fav_stat: state.fav_stat,
        fav_threshold: (state.lambda * (n as f64).ln() / 4.0).sqrt(),
        rho_max: state.rho[select_split(&state.rho)],
        bound: 2.0 / (state.lambda * (1.0 / tau).ln()),
    };
    if diag.applicable() && !diag.bound_holds() {
        return Err(Error::LemmaBoundViolated {
            n,
            rho_max: diag.rho_max,
            bound: diag.bound,
        });
    }
    Ok(diag)
}
