//! Function-evaluation oracles on `[0, 1]` with `f(0) = 0`.

use crate::bridge::{interior_sample, BridgeSegment};
use crate::dyadic::{DyadicPoint, Skeleton};
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Something that can be evaluated at dyadic sites and remembers what it
/// has been asked.
pub trait PathOracle {
    /// Value at `t`. Repeated calls at the same site return the same value.
    fn evaluate(&mut self, t: &DyadicPoint) -> Result<f64>;

    /// All evaluations performed so far, including the origin.
    fn skeleton(&self) -> &Skeleton;
}

/// A Brownian path that exists only through its observed values.
///
/// `W(1)` must be requested first; every later site falls strictly between
/// two observed neighbours and is drawn from the exact bridge law given them.
#[derive(Debug, Clone)]
pub struct BrownianOracle {
    skeleton: Skeleton,
    stream: RngStream,
}

impl BrownianOracle {
    pub fn new(stream: RngStream) -> Self {
        Self {
            skeleton: Skeleton::new(),
            stream,
        }
    }

    /// Evaluates `t` using `z` as the standard normal input instead of a
    /// draw from the stream.
    pub fn evaluate_with(&mut self, t: &DyadicPoint, z: f64) -> Result<f64> {
        if let Some(v) = self.skeleton.value_at(t) {
            return Ok(v);
        }
        let value = self.conditional_value(t, z)?;
        self.skeleton.insert(t.clone(), value)?;
        Ok(value)
    }

    fn check_order(&self, t: &DyadicPoint) -> Result<()> {
        if self.skeleton.n() == 0 && *t != DyadicPoint::one() {
            return Err(Error::EvaluationOrder(t.to_string()));
        }
        Ok(())
    }

    fn conditional_value(&self, t: &DyadicPoint, z: f64) -> Result<f64> {
        self.check_order(t)?;
        if self.skeleton.n() == 0 {
            return Ok(z);
        }
        let idx = self
            .skeleton
            .locate(t)
            .expect_err("memoized sites are handled by the caller");
        let sites = self.skeleton.sites();
        let values = self.skeleton.values();
        let (left, right) = (&sites[idx - 1], &sites[idx]);
        let length = right.checked_sub(left).expect("ordered sites").to_f64();
        let offset = t
            .checked_sub(left)
            .expect("t lies right of its left neighbour")
            .to_f64();
        let seg = BridgeSegment::new(values[idx - 1], values[idx], length)?;
        interior_sample(&seg, offset, z)
    }
}

impl PathOracle for BrownianOracle {
    fn evaluate(&mut self, t: &DyadicPoint) -> Result<f64> {
        if let Some(v) = self.skeleton.value_at(t) {
            return Ok(v);
        }
        self.check_order(t)?;
        let z = self.stream.gaussian();
        self.evaluate_with(t, z)
    }

    fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }
}

/// A closed-form test function.
pub struct DeterministicOracle<F> {
    f: F,
    skeleton: Skeleton,
}

impl<F: Fn(f64) -> f64> DeterministicOracle<F> {
    pub fn new(f: F) -> Result<Self> {
        let origin = f(0.0);
        if origin != 0.0 {
            return Err(Error::NonZeroAtOrigin(origin));
        }
        Ok(Self {
            f,
            skeleton: Skeleton::new(),
        })
    }

    /// Evaluates the function without recording the site.
    pub fn value(&self, t: f64) -> f64 {
        (self.f)(t)
    }
}

impl<F: Fn(f64) -> f64> PathOracle for DeterministicOracle<F> {
    fn evaluate(&mut self, t: &DyadicPoint) -> Result<f64> {
        if let Some(v) = self.skeleton.value_at(t) {
            return Ok(v);
        }
        let v = (self.f)(t.to_f64());
        self.skeleton.insert(t.clone(), v)?;
        Ok(v)
    }

    fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }
}

/// Minimum of `f` over the grid `{i / grid_size}`; an upper bound for the
/// true minimum.
///
/// # Panics
///
/// If `grid_size < 2`.
pub fn grid_reference_min<F: Fn(f64) -> f64>(
    oracle: &DeterministicOracle<F>,
    grid_size: usize,
) -> f64 {
    assert!(grid_size >= 2, "grid_size must be at least 2");
    (0..=grid_size)
        .map(|i| oracle.value(i as f64 / grid_size as f64))
        .fold(f64::INFINITY, f64::min)
}
