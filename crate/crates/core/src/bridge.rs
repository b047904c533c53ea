//! Brownian-bridge conditional laws.
//!
//! For a Brownian path pinned to `a` at the left end and `b` at the right end
//! of a segment of length `T`:
//!
//! * the value at offset `s` is Gaussian with mean `a + (s/T)(b - a)` and
//!   variance `s(T - s)/T`;
//! * the minimum over the segment satisfies
//!   `P(min <= y) = exp(-2 (a - y)(b - y) / T)` for `y <= min(a, b)`.

use crate::error::{Error, Result};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeSegment {
    a: f64,
    b: f64,
    length: f64,
}

impl BridgeSegment {
    pub fn new(a: f64, b: f64, length: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && length.is_finite() && length > 0.0) {
            return Err(Error::InvalidSegment { a, b, length });
        }
        Ok(Self { a, b, length })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn endpoint_min(&self) -> f64 {
        self.a.min(self.b)
    }
}

/// Value of the bridge at offset `s`, driven by the standard normal `z`.
pub fn interior_sample(seg: &BridgeSegment, s: f64, z: f64) -> Result<f64> {
    let t = seg.length;
    if !(s > 0.0 && s < t) {
        return Err(Error::OffsetOutsideSegment {
            offset: s,
            length: t,
        });
    }
    let mean = seg.a + (s / t) * (seg.b - seg.a);
    let sd = (s * (t - s) / t).sqrt();
    Ok(mean + sd * z)
}

/// `P(min over the segment <= y)`.
pub fn bridge_min_cdf(seg: &BridgeSegment, y: f64) -> f64 {
    if y >= seg.endpoint_min() {
        return 1.0;
    }
    (-2.0 * (seg.a - y) * (seg.b - y) / seg.length).exp()
}

/// Inverse of [`bridge_min_cdf`] at `u` in `(0, 1]`.
///
/// Solves `(a - y)(b - y) = c` with `c = -T ln(u) / 2` for the root below
/// `min(a, b)`. The distance to the lower endpoint is evaluated as
/// `2c / (sqrt(D^2 + 4c) + D)`, `D = |a - b|`, which avoids cancellation
/// when `c` is small.
pub fn bridge_min_sample(seg: &BridgeSegment, u: f64) -> Result<f64> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::InvalidUniform(u));
    }
    let c = -seg.length * u.ln() / 2.0;
    let low = seg.endpoint_min();
    if c <= 0.0 {
        return Ok(low);
    }
    let spread = (seg.a - seg.b).abs();
    let depth = 2.0 * c / ((spread * spread + 4.0 * c).sqrt() + spread);
    Ok(low - depth)
}

/// Draws the segment minimum.
pub fn sample_bridge_min(seg: &BridgeSegment, stream: &mut RngStream) -> f64 {
    bridge_min_sample(seg, stream.uniform_open_closed()).expect("uniform in (0, 1]")
}

/// Draws the midpoint value of the segment.
pub fn sample_midpoint(seg: &BridgeSegment, stream: &mut RngStream) -> f64 {
    interior_sample(seg, seg.length / 2.0, stream.gaussian()).expect("midpoint is interior")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: f64, b: f64, t: f64) -> BridgeSegment {
        BridgeSegment::new(a, b, t).unwrap()
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    #[test]
    fn segment_validation() {
        assert!(BridgeSegment::new(0.0, 0.0, 0.0).is_err());
        assert!(BridgeSegment::new(0.0, 0.0, -1.0).is_err());
        assert!(BridgeSegment::new(f64::NAN, 0.0, 1.0).is_err());
        assert!(BridgeSegment::new(0.0, f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn interior_examples() {
        let s = seg(0.0, 1.0, 0.5);
        assert_eq!(interior_sample(&s, 0.25, 0.0).unwrap(), 0.5);
        let v = interior_sample(&s, 0.25, 1.0).unwrap();
        assert!(close(v, 0.5 + 0.5f64.sqrt() / 2.0, 1e-15));
        assert!(close(v, 0.853_553_390_593_273_7, 1e-15));
        let c = seg(-0.7, -0.7, 0.125);
        assert_eq!(interior_sample(&c, 0.0625, 0.0).unwrap(), -0.7);
    }

    #[test]
    fn interior_rejects_endpoints() {
        let s = seg(0.0, 1.0, 0.5);
        for bad in [0.0, 0.5, -0.1, 0.7, f64::NAN] {
            assert!(matches!(
                interior_sample(&s, bad, 0.0),
                Err(Error::OffsetOutsideSegment { .. })
            ));
        }
    }

    #[test]
    fn cdf_examples() {
        assert!(close(
            bridge_min_cdf(&seg(0.0, 0.0, 1.0), -1.0),
            (-2.0f64).exp(),
            1e-15
        ));
        assert!(close(
            bridge_min_cdf(&seg(0.0, 0.0, 1.0), -1.0),
            0.135_335,
            1e-6
        ));
        let s = seg(0.3, 0.7, 0.25);
        assert_eq!(bridge_min_cdf(&s, 0.3), 1.0);
        assert_eq!(bridge_min_cdf(&s, 0.5), 1.0);
        assert!(close(bridge_min_cdf(&s, 0.144_130), 0.5, 1e-6));
    }

    #[test]
    fn sample_examples() {
        let y = bridge_min_sample(&seg(0.0, 0.0, 1.0), (-2.0f64).exp()).unwrap();
        assert!(close(y, -1.0, 1e-15));
        let s = seg(0.3, 0.7, 0.25);
        assert_eq!(bridge_min_sample(&s, 1.0).unwrap(), 0.3);
        assert_eq!(bridge_min_sample(&seg(0.9, -0.2, 2.0), 1.0).unwrap(), -0.2);
        let y = bridge_min_sample(&s, 0.5).unwrap();
        // (a - y)(b - y) = T ln 2 / 2, solved by hand
        let c = 0.25 * std::f64::consts::LN_2 / 2.0;
        let expected = (1.0 - (0.16f64 + 4.0 * c).sqrt()) / 2.0;
        assert!(close(y, expected, 1e-15));
        assert!(close(y, 0.144_130, 1e-6));
        assert!(close(bridge_min_cdf(&s, y), 0.5, 1e-14));
    }

    #[test]
    fn sample_rejects_bad_uniform() {
        let s = seg(0.0, 0.0, 1.0);
        for bad in [0.0, -0.5, 1.5, f64::NAN] {
            assert_eq!(
                bridge_min_sample(&s, bad).unwrap_err().to_string(),
                Error::InvalidUniform(bad).to_string()
            );
        }
    }
}
