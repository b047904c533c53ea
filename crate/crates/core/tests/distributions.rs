//! Statistical checks of the sampling laws against analytic distributions.

use brownmin::bridge::{sample_bridge_min, sample_midpoint};
use brownmin::{
    sample_true_min, BridgeSegment, BrownianOracle, DyadicPoint, PathOracle, RngStream, Skeleton,
};
use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided Kolmogorov-Smirnov distance between a sample and a CDF.
fn ks_distance(mut sample: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn standard_bridge_minimum_law() {
    // min of a standard Brownian bridge: P(M <= y) = exp(-2 y^2), y < 0
    let mut s = Skeleton::new();
    s.insert(DyadicPoint::one(), 0.0).unwrap();
    let mut stream = RngStream::new(2024, 17);
    let draws: Vec<f64> = (0..10_000)
        .map(|_| sample_true_min(&s, &mut stream))
        .collect();
    let d = ks_distance(draws, |y| if y < 0.0 { (-2.0 * y * y).exp() } else { 1.0 });
    assert!(d < 0.02, "KS distance {d}");
}

#[test]
fn segment_minimum_draws_follow_cdf() {
    let mut stream = RngStream::new(5, 5);
    for (a, b, t) in [(0.0, 0.0, 1.0), (0.3, 0.7, 0.25), (-1.2, 0.4, 0.01)] {
        let seg = BridgeSegment::new(a, b, t).unwrap();
        let draws: Vec<f64> = (0..10_000)
            .map(|_| sample_bridge_min(&seg, &mut stream))
            .collect();
        let d = ks_distance(draws, |y| brownmin::bridge_min_cdf(&seg, y));
        assert!(d < 0.02, "({a}, {b}, {t}): KS distance {d}");
    }
}

#[test]
fn midpoint_variance() {
    let mut stream = RngStream::new(8, 1);
    for t in [1.0, 0.5, 1.0 / 64.0] {
        let seg = BridgeSegment::new(0.2, -0.4, t).unwrap();
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_midpoint(&seg, &mut stream)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(
            (mean - (-0.1)).abs() < 4.0 * (t / 4.0 / n as f64).sqrt(),
            "mean {mean}"
        );
        assert!(
            (var / (t / 4.0) - 1.0).abs() < 0.05,
            "T={t}: variance {var}"
        );
    }
}

#[test]
fn nonadaptive_increments_are_standard_normal() {
    let reps = 5_000;
    let mut increments: Vec<Vec<f64>> = (0..4).map(|_| Vec::with_capacity(reps)).collect();
    let sites = [
        DyadicPoint::one(),
        DyadicPoint::new(1u32, 1).unwrap(),
        DyadicPoint::new(1u32, 2).unwrap(),
        DyadicPoint::new(3u32, 2).unwrap(),
    ];
    for rep in 0..reps as u64 {
        let mut oracle = BrownianOracle::new(RngStream::new(99, rep));
        for t in &sites {
            oracle.evaluate(t).unwrap();
        }
        let s = oracle.skeleton();
        for (i, w) in s.values().windows(2).enumerate() {
            increments[i].push((w[1] - w[0]) / s.gaps()[i].sqrt());
        }
    }
    let normal = Normal::new(0.0, 1.0).unwrap();
    // 1% critical value of the one-sample KS statistic
    let critical = 1.628 / (reps as f64).sqrt();
    for (i, inc) in increments.into_iter().enumerate() {
        let d = ks_distance(inc, |x| normal.cdf(x));
        assert!(d < critical, "interval {i}: KS distance {d} >= {critical}");
    }
}
