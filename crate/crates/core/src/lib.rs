//! Adaptive approximation of the global minimum of a Brownian path on
//! `[0, 1]`.
//!
//! The crate provides
//!
//! * exact dyadic evaluation sites and the observation skeleton ([`dyadic`]),
//! * Brownian-bridge conditional laws, including exact sampling of the
//!   minimum over a segment ([`bridge`]),
//! * lazily sampled Brownian paths and deterministic test functions
//!   ([`oracle`]),
//! * the adaptive bisection method with its diagnostics ([`minimizer`]),
//! * a Monte Carlo harness estimating `L_p` errors against an equidistant
//!   baseline ([`harness`]), with CSV output ([`report`]).
//!
//! Replications run on rayon when the default `parallel` feature is enabled.
//! Every replication owns a random stream derived from its index, so results
//! are identical for any number of threads.

pub mod bridge;
pub mod dyadic;
pub mod error;
pub mod harness;
pub mod minimizer;
pub mod oracle;
pub mod parallel;
pub mod report;
pub mod rng;

pub use bridge::{bridge_min_cdf, bridge_min_sample, interior_sample, BridgeSegment};
pub use dyadic::{DyadicPoint, Skeleton, DEFAULT_LEVEL_CAP};
pub use error::{Error, Result};
pub use harness::{
    estimate_lp_error, fit_rate, lambda_suggestion, run_equidistant, run_experiment,
    run_replication, sample_true_min, simulate_path, Algorithm, ErrorEstimate, ErrorSample,
    ExperimentPlan, LpEstimate, TracedRun,
};
pub use minimizer::{
    check_lemma_rho, compute_rho, g, run, select_split, undershoot_probabilities, LemmaDiagnostic,
    MinimizerConfig, MinimizerState, StepTrace,
};
pub use oracle::{grid_reference_min, BrownianOracle, DeterministicOracle, PathOracle};
pub use parallel::{with_threads, Execution};
pub use rng::{RngStream, StreamNamespace};
