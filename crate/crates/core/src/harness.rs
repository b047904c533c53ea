//! Monte Carlo error estimation for the adaptive method and the equidistant
//! baseline.
//!
//! The error of a run is `Delta_n = M_n - M`, where `M` is the true minimum of
//! the Brownian path. `M` is drawn exactly: given the observed skeleton, the
//! minima of the bridge segments are independent, so one inverse-CDF draw per
//! segment and a final `min` give a sample from the conditional law of `M`.

use std::fmt;
use std::str::FromStr;

use crate::bridge::{bridge_min_sample, BridgeSegment};
use crate::dyadic::{Skeleton, DEFAULT_LEVEL_CAP};
use crate::error::{Error, Result};
use crate::minimizer::{run, validate_lambda, MinimizerConfig, StepTrace};
use crate::oracle::BrownianOracle;
use crate::parallel::{map_indices, Execution};
use crate::rng::{RngStream, StreamNamespace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Adaptive,
    Equidistant,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Adaptive => "adaptive",
            Algorithm::Equidistant => "equidistant",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adaptive" => Ok(Algorithm::Adaptive),
            "equidistant" => Ok(Algorithm::Equidistant),
            other => Err(Error::InvalidArgument(format!(
                "unknown algorithm {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    /// Ignored by the equidistant baseline.
    pub lambdas: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub p: f64,
    pub replications: u64,
    pub master_seed: u64,
    pub algorithm: Algorithm,
    pub level_cap: u32,
}

impl ExperimentPlan {
    pub fn new(
        algorithm: Algorithm,
        lambdas: Vec<f64>,
        n_grid: Vec<usize>,
        p: f64,
        replications: u64,
        master_seed: u64,
    ) -> Result<Self> {
        let plan = Self {
            lambdas,
            n_grid,
            p,
            replications,
            master_seed,
            algorithm,
            level_cap: DEFAULT_LEVEL_CAP,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn with_level_cap(mut self, level_cap: u32) -> Self {
        self.level_cap = level_cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidArgument(msg));
        if self.replications < 1 {
            return invalid("at least one replication is required".into());
        }
        validate_p(self.p)?;
        if self.n_grid.is_empty() {
            return invalid("the n grid is empty".into());
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return invalid(format!(
                "the n grid must be strictly ascending: {:?}",
                self.n_grid
            ));
        }
        let min_n = match self.algorithm {
            Algorithm::Adaptive => 2,
            Algorithm::Equidistant => 1,
        };
        if self.n_grid[0] < min_n {
            return invalid(format!("{} runs need n >= {min_n}", self.algorithm));
        }
        if self.algorithm == Algorithm::Adaptive {
            if self.lambdas.is_empty() {
                return invalid("no lambda values given".into());
            }
            self.lambdas.iter().try_for_each(|&l| validate_lambda(l))?;
        }
        Ok(())
    }

    pub fn max_n(&self) -> usize {
        *self.n_grid.last().expect("validated grid is non-empty")
    }
}

fn validate_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "p must be a finite number >= 1, got {p}"
        )));
    }
    Ok(())
}

/// Errors of one replication at the requested numbers of evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSample {
    pub replication: u64,
    /// `(n, Delta_n)` in ascending `n`.
    pub deltas: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpEstimate {
    /// `(mean |Delta|^p)^(1/p)`.
    pub lp_error: f64,
    /// Sample standard deviation of `|Delta|^p`; zero for a single sample.
    pub std_pth_power: f64,
    pub count: usize,
}

impl LpEstimate {
    /// Standard error of `lp_error` by the delta method.
    pub fn standard_error(&self, p: f64) -> f64 {
        if self.lp_error == 0.0 {
            return 0.0;
        }
        let se_mean = self.std_pth_power / (self.count as f64).sqrt();
        se_mean / (p * self.lp_error.powf(p - 1.0))
    }
}

/// One row of an error curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorEstimate {
    pub algorithm: Algorithm,
    pub lambda: Option<f64>,
    pub n: usize,
    pub p: f64,
    /// Planned replications, including dropped ones.
    pub replications: u64,
    pub dropped: u64,
    pub estimate: LpEstimate,
}

pub fn estimate_lp_error(deltas: &[f64], p: f64) -> Result<LpEstimate> {
    validate_p(p)?;
    if deltas.is_empty() {
        return Err(Error::InvalidArgument("no error samples".into()));
    }
    let powers: Vec<f64> = deltas.iter().map(|d| d.abs().powf(p)).collect();
    let count = powers.len();
    let mean = powers.iter().sum::<f64>() / count as f64;
    let std = if count > 1 {
        let ss: f64 = powers.iter().map(|x| (x - mean).powi(2)).sum();
        (ss / (count - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(LpEstimate {
        lp_error: mean.powf(1.0 / p),
        std_pth_power: std,
        count,
    })
}

/// Minimum over the segments, one inverse-CDF draw per segment using the
/// given uniforms in order.
pub fn true_min_from_uniforms(
    segments: impl IntoIterator<Item = BridgeSegment>,
    uniforms: impl IntoIterator<Item = f64>,
) -> Result<f64> {
    let mut uniforms = uniforms.into_iter();
    let mut min = f64::INFINITY;
    for seg in segments {
        let u = uniforms
            .next()
            .ok_or_else(|| Error::InvalidArgument("fewer uniforms than segments".into()))?;
        min = min.min(bridge_min_sample(&seg, u)?);
    }
    Ok(min)
}

fn sample_min_over_segments(
    segments: impl IntoIterator<Item = BridgeSegment>,
    stream: &mut RngStream,
) -> f64 {
    segments
        .into_iter()
        .map(|seg| {
            bridge_min_sample(&seg, stream.uniform_open_closed()).expect("uniform in (0, 1]")
        })
        .fold(f64::INFINITY, f64::min)
}

/// Exact draw of the path minimum given the skeleton.
///
/// # Panics
///
/// If the skeleton has no interval yet.
pub fn sample_true_min(skeleton: &Skeleton, stream: &mut RngStream) -> f64 {
    assert!(skeleton.n() >= 1, "the skeleton must cover [0, 1]");
    sample_min_over_segments(skeleton.segments(), stream)
}

/// A single adaptive run with its trace and a draw of the true minimum.
#[derive(Debug, Clone)]
pub struct TracedRun {
    pub traces: Vec<StepTrace>,
    pub true_min: f64,
}

impl TracedRun {
    pub fn delta(&self, trace: &StepTrace) -> f64 {
        trace.min_value - self.true_min
    }
}

/// Runs the adaptive method on the Brownian path of `replication` and draws
/// its minimum from an independent stream.
pub fn simulate_path(
    config: &MinimizerConfig,
    master_seed: u64,
    replication: u64,
) -> Result<TracedRun> {
    let path = RngStream::for_replication(master_seed, StreamNamespace::AdaptivePath, replication);
    let mut oracle = BrownianOracle::new(path);
    let (state, traces) = run(&mut oracle, config)?;
    let mut min_stream =
        RngStream::for_replication(master_seed, StreamNamespace::AdaptiveMinimum, replication);
    let true_min = sample_true_min(state.skeleton(), &mut min_stream);
    Ok(TracedRun { traces, true_min })
}

/// Adaptive errors of one replication at every `n` of the plan's grid.
///
/// The same minimum draw, taken from the final skeleton, serves all `n`.
pub fn run_replication(
    plan: &ExperimentPlan,
    lambda: f64,
    replication: u64,
) -> Result<ErrorSample> {
    let config = MinimizerConfig::with_level_cap(lambda, plan.max_n(), plan.level_cap)?;
    let traced = simulate_path(&config, plan.master_seed, replication)?;
    let deltas = plan
        .n_grid
        .iter()
        .map(|&n| (n, traced.delta(&traced.traces[n - 2])))
        .collect();
    Ok(ErrorSample {
        replication,
        deltas,
    })
}

/// Equidistant baseline with `n` evaluations at `i/n`.
///
/// Paths for different `n` in the same replication share their streams.
pub fn run_equidistant(plan: &ExperimentPlan, n: usize, replication: u64) -> Result<ErrorSample> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "the equidistant baseline needs n >= 1".into(),
        ));
    }
    let mut path = RngStream::for_replication(
        plan.master_seed,
        StreamNamespace::EquidistantPath,
        replication,
    );
    let mut min_stream = RngStream::for_replication(
        plan.master_seed,
        StreamNamespace::EquidistantMinimum,
        replication,
    );
    let delta = equidistant_delta(n, &mut path, &mut min_stream);
    Ok(ErrorSample {
        replication,
        deltas: vec![(n, delta)],
    })
}

fn equidistant_delta(n: usize, path: &mut RngStream, min_stream: &mut RngStream) -> f64 {
    let h = 1.0 / n as f64;
    let sd = h.sqrt();
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    let mut w = 0.0;
    for _ in 0..n {
        w += sd * path.gaussian();
        values.push(w);
    }
    let discrete_min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let segments = values
        .windows(2)
        .map(|v| BridgeSegment::new(v[0], v[1], h).expect("finite path values"));
    discrete_min - sample_min_over_segments(segments, min_stream)
}

/// Runs every replication of the plan and aggregates one estimate per
/// `(lambda, n)`, or per `n` for the baseline.
///
/// Adaptive replications that exceed the level cap are dropped and counted.
pub fn run_experiment(plan: &ExperimentPlan, execution: Execution) -> Result<Vec<ErrorEstimate>> {
    plan.validate()?;
    let mut rows = Vec::new();
    match plan.algorithm {
        Algorithm::Adaptive => {
            for &lambda in &plan.lambdas {
                let results = map_indices(plan.replications, execution, |rep| {
                    run_replication(plan, lambda, rep)
                });
                let mut samples = Vec::with_capacity(results.len());
                let mut dropped = 0;
                for r in results {
                    match r {
                        Ok(s) => samples.push(s),
                        Err(Error::DepthExceeded { .. }) => dropped += 1,
                        Err(e) => return Err(e),
                    }
                }
                for (k, &n) in plan.n_grid.iter().enumerate() {
                    let deltas: Vec<f64> = samples.iter().map(|s| s.deltas[k].1).collect();
                    rows.push(ErrorEstimate {
                        algorithm: Algorithm::Adaptive,
                        lambda: Some(lambda),
                        n,
                        p: plan.p,
                        replications: plan.replications,
                        dropped,
                        estimate: estimate_lp_error(&deltas, plan.p)?,
                    });
                }
            }
        }
        Algorithm::Equidistant => {
            for &n in &plan.n_grid {
                let results = map_indices(plan.replications, execution, |rep| {
                    run_equidistant(plan, n, rep)
                });
                let deltas = results
                    .into_iter()
                    .map(|r| r.map(|s| s.deltas[0].1))
                    .collect::<Result<Vec<f64>>>()?;
                rows.push(ErrorEstimate {
                    algorithm: Algorithm::Equidistant,
                    lambda: None,
                    n,
                    p: plan.p,
                    replications: plan.replications,
                    dropped: 0,
                    estimate: estimate_lp_error(&deltas, plan.p)?,
                });
            }
        }
    }
    Ok(rows)
}

/// Least-squares slope of `ln(error)` against `ln(n)`.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "at least two points are needed".into(),
        ));
    }
    if let Some(&(n, e)) = points.iter().find(|&&(n, e)| !(n > 0.0 && e > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "n and error must be positive, got ({n}, {e})"
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, e)| (n.ln(), e.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all n values coincide".into()));
    }
    Ok(sxy / sxx)
}

/// A `lambda` large enough for convergence order `r` in the `L_p` norm:
/// `144 (1 + p r)`.
pub fn lambda_suggestion(r: f64, p: f64) -> f64 {
    144.0 * (1.0 + p * r)
}
