//! Exact binary-rational evaluation sites and the ordered observation skeleton.
//!
//! Every site produced by bisection is of the form `k / 2^m`. Keeping sites
//! exact means midpoints, gap lengths and the smallest gap are computed
//! without rounding; floats are only a derived view.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::bridge::BridgeSegment;
use crate::error::{Error, Result};

/// Default maximal refinement level.
pub const DEFAULT_LEVEL_CAP: u32 = 1000;

/// A point `numerator / 2^level` in `[0, 1]`, kept in canonical form.
///
/// Canonical means the numerator is odd, or the point is `0/2^0` or `1/2^0`.
/// Equal values therefore have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicPoint {
    numerator: BigUint,
    level: u32,
}

impl DyadicPoint {
    pub fn new(numerator: impl Into<BigUint>, level: u32) -> Result<Self> {
        let numerator = numerator.into();
        if numerator > (BigUint::one() << level) {
            return Err(Error::OutOfUnitInterval {
                numerator: numerator.to_string(),
                level,
            });
        }
        Ok(Self::canonical(numerator, level))
    }

    pub fn zero() -> Self {
        Self {
            numerator: BigUint::zero(),
            level: 0,
        }
    }

    pub fn one() -> Self {
        Self {
            numerator: BigUint::one(),
            level: 0,
        }
    }

    /// `2^-level`.
    pub fn pow2_inverse(level: u32) -> Self {
        Self {
            numerator: BigUint::one(),
            level,
        }
    }

    fn canonical(mut numerator: BigUint, mut level: u32) -> Self {
        match numerator.trailing_zeros() {
            None => level = 0,
            Some(tz) => {
                let shift = tz.min(u64::from(level));
                numerator >>= shift;
                level -= shift as u32;
            }
        }
        Self { numerator, level }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// `Some(k)` if the point equals `2^-k`.
    pub fn power_of_two_exponent(&self) -> Option<u32> {
        self.numerator.is_one().then_some(self.level)
    }

    /// Numerators of `self` and `other` scaled to their common level.
    fn aligned(&self, other: &Self) -> (BigUint, BigUint, u32) {
        let level = self.level.max(other.level);
        (
            &self.numerator << (level - self.level),
            &other.numerator << (level - other.level),
            level,
        )
    }

    /// Exact difference `self - other`, or `None` if it would be negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let (a, b, level) = self.aligned(other);
        (a >= b).then(|| Self::canonical(a - b, level))
    }

    /// Nearest double. Exact for levels up to 52, monotone for all levels.
    pub fn to_f64(&self) -> f64 {
        // BigUint -> f64 rounds to nearest; scaling by a power of two is exact
        // while the result stays normal. Very deep points are truncated first
        // so the numerator stays in range.
        const MAX_LEVEL: u32 = 1000;
        if self.level > MAX_LEVEL {
            let truncated = &self.numerator >> (self.level - MAX_LEVEL);
            let mantissa = truncated.to_f64().unwrap_or(f64::INFINITY);
            return scale_by_pow2(mantissa, -(MAX_LEVEL as i32));
        }
        let mantissa = self.numerator.to_f64().unwrap_or(f64::INFINITY);
        scale_by_pow2(mantissa, -(self.level as i32))
    }

    /// Exact midpoint of `[left, right]`.
    ///
    /// The interval length must be a power of two and the resulting level must
    /// not exceed `level_cap`.
    pub fn midpoint(left: &Self, right: &Self, level_cap: u32) -> Result<Self> {
        let gap = right
            .checked_sub(left)
            .filter(|g| g.power_of_two_exponent().is_some())
            .ok_or_else(|| Error::NotDyadicInterval {
                left: left.to_string(),
                right: right.to_string(),
            })?;
        debug_assert!(!gap.is_zero());
        let (a, b, level) = left.aligned(right);
        let mid = Self::canonical(a + b, level + 1);
        if mid.level > level_cap {
            return Err(Error::DepthExceeded {
                level: mid.level,
                cap: level_cap,
            });
        }
        Ok(mid)
    }
}

fn scale_by_pow2(mut x: f64, mut exp: i32) -> f64 {
    // Stepwise so that the intermediate powers stay representable.
    while exp < -1000 {
        x *= f64::from_bits(((1023 - 1000) as u64) << 52);
        exp += 1000;
    }
    x * f64::from_bits(((1023 + exp) as u64) << 52)
}

impl Ord for DyadicPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.level == other.level {
            return self.numerator.cmp(&other.numerator);
        }
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.level)
    }
}

impl fmt::Debug for DyadicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for DyadicPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseDyadic(s.to_string());
        let (num, level) = s.trim().split_once("/2^").ok_or_else(bad)?;
        let num = BigUint::from_str(num).map_err(|_| bad())?;
        let level = level.parse::<u32>().map_err(|_| bad())?;
        Self::new(num, level)
    }
}

/// Ordered evaluation sites with their observed values.
///
/// The first site is always `0` with value `0`. The running minimum of the
/// values and the smallest gap are cached and kept current on insertion.
#[derive(Debug, Clone)]
pub struct Skeleton {
    sites: Vec<DyadicPoint>,
    values: Vec<f64>,
    /// `gaps[i]` is the length of the interval ending at `sites[i + 1]`.
    gaps: Vec<f64>,
    min_value: f64,
    min_gap: Option<DyadicPoint>,
}

impl Default for Skeleton {
    fn default() -> Self {
        Self::new()
    }
}

impl Skeleton {
    pub fn new() -> Self {
        Self {
            sites: vec![DyadicPoint::zero()],
            values: vec![0.0],
            gaps: Vec::new(),
            min_value: 0.0,
            min_gap: None,
        }
    }

    /// Number of evaluations after the origin.
    pub fn n(&self) -> usize {
        self.sites.len() - 1
    }

    pub fn sites(&self) -> &[DyadicPoint] {
        &self.sites
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Interval lengths as doubles, left to right.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    /// The discrete minimum `M_n`.
    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    /// The smallest gap `tau_n`, if there is at least one interval.
    pub fn min_gap(&self) -> Option<&DyadicPoint> {
        self.min_gap.as_ref()
    }

    /// `k` such that `tau_n = 2^-k`.
    pub fn tau_level(&self) -> Option<u32> {
        self.min_gap
            .as_ref()
            .and_then(|g| g.power_of_two_exponent())
    }

    /// Position of `t` among the sites: `Ok(i)` if present, `Err(i)` for the
    /// insertion point.
    pub fn locate(&self, t: &DyadicPoint) -> std::result::Result<usize, usize> {
        self.sites.binary_search(t)
    }

    pub fn value_at(&self, t: &DyadicPoint) -> Option<f64> {
        self.locate(t).ok().map(|i| self.values[i])
    }

    /// Inserts a new site and returns its index.
    pub fn insert(&mut self, t: DyadicPoint, value: f64) -> Result<usize> {
        let idx = match self.locate(&t) {
            Ok(_) => return Err(Error::DuplicateSite(t.to_string())),
            Err(idx) => idx,
        };
        let left = t
            .checked_sub(&self.sites[idx - 1])
            .expect("sites are ordered");
        let mut new_gaps = vec![left];
        if idx < self.sites.len() {
            let right = self.sites[idx].checked_sub(&t).expect("sites are ordered");
            new_gaps.push(right);
        }

        let floats: Vec<f64> = new_gaps.iter().map(DyadicPoint::to_f64).collect();
        if idx < self.sites.len() {
            self.gaps.splice(idx - 1..idx, floats);
        } else {
            self.gaps.extend(floats);
        }
        self.sites.insert(idx, t);
        self.values.insert(idx, value);

        if value < self.min_value {
            self.min_value = value;
        }
        for g in new_gaps {
            if self.min_gap.as_ref().is_none_or(|m| g < *m) {
                self.min_gap = Some(g);
            }
        }
        Ok(idx)
    }

    /// Bridge segments between consecutive sites.
    pub fn segments(&self) -> impl Iterator<Item = BridgeSegment> + '_ {
        self.values
            .windows(2)
            .zip(&self.gaps)
            .map(|(v, &len)| BridgeSegment::new(v[0], v[1], len).expect("finite skeleton values"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(num: u64, level: u32) -> DyadicPoint {
        DyadicPoint::new(num, level).unwrap()
    }

    #[test]
    fn midpoint_examples() {
        let cap = DEFAULT_LEVEL_CAP;
        assert_eq!(
            DyadicPoint::midpoint(&DyadicPoint::zero(), &DyadicPoint::one(), cap).unwrap(),
            d(1, 1)
        );
        let m = DyadicPoint::midpoint(&d(1, 2), &d(1, 1), cap).unwrap();
        assert_eq!(m, d(3, 3));
        assert_eq!(m.level(), 3);
        for (k, level) in [(5u64, 4u32), (0, 7), (12, 5)] {
            let m = DyadicPoint::midpoint(&d(k, level), &d(k + 1, level), cap).unwrap();
            assert_eq!(m, d(2 * k + 1, level + 1));
        }
    }

    #[test]
    fn midpoint_rejects_non_power_of_two_gap() {
        let err = DyadicPoint::midpoint(&DyadicPoint::zero(), &d(3, 2), 10).unwrap_err();
        assert!(matches!(err, Error::NotDyadicInterval { .. }));
        let err = DyadicPoint::midpoint(&d(1, 1), &d(1, 1), 10).unwrap_err();
        assert!(matches!(err, Error::NotDyadicInterval { .. }));
        let err = DyadicPoint::midpoint(&DyadicPoint::one(), &DyadicPoint::zero(), 10).unwrap_err();
        assert!(matches!(err, Error::NotDyadicInterval { .. }));
    }

    #[test]
    fn midpoint_respects_level_cap() {
        let left = DyadicPoint::zero();
        let right = DyadicPoint::pow2_inverse(5);
        assert!(DyadicPoint::midpoint(&left, &right, 6).is_ok());
        assert_eq!(
            DyadicPoint::midpoint(&left, &right, 5).unwrap_err(),
            Error::DepthExceeded { level: 6, cap: 5 }
        );
    }

    #[test]
    fn canonical_form() {
        assert_eq!(d(4, 3), d(1, 1));
        assert_eq!(d(0, 9), DyadicPoint::zero());
        assert_eq!(d(8, 3), DyadicPoint::one());
        assert_eq!(d(8, 3).level(), 0);
        assert!(DyadicPoint::new(9u32, 3).is_err());
    }

    #[test]
    fn string_form() {
        assert_eq!(d(3, 3).to_string(), "3/2^3");
        assert_eq!(DyadicPoint::zero().to_string(), "0/2^0");
        assert_eq!("5/2^4".parse::<DyadicPoint>().unwrap(), d(5, 4));
        assert!("5/4".parse::<DyadicPoint>().is_err());
        assert!("17/2^4".parse::<DyadicPoint>().is_err());
    }

    #[test]
    fn float_view_deep_levels() {
        assert_eq!(DyadicPoint::pow2_inverse(1000).to_f64(), 2f64.powi(-1000));
        assert_eq!(DyadicPoint::pow2_inverse(52).to_f64(), f64::EPSILON);
        let big = DyadicPoint::new((BigUint::one() << 1000u32) - 1u32, 1000).unwrap();
        assert_eq!(big.to_f64(), 1.0);
    }

    #[test]
    fn insert_examples() {
        let mut s = Skeleton::new();
        s.insert(DyadicPoint::one(), -0.3).unwrap();
        let idx = s.insert(d(1, 1), 0.1).unwrap();
        assert_eq!(idx, 1);
        assert_eq!(s.values(), &[0.0, 0.1, -0.3]);
        assert_eq!(
            s.sites(),
            &[DyadicPoint::zero(), d(1, 1), DyadicPoint::one()]
        );
        assert_eq!(s.min_value(), -0.3);
        assert_eq!(s.min_gap(), Some(&d(1, 1)));

        let mut s = Skeleton::new();
        s.insert(DyadicPoint::one(), -1.0).unwrap();
        assert_eq!(s.min_value(), -1.0);
        assert_eq!(s.min_gap(), Some(&DyadicPoint::one()));
        assert_eq!(s.tau_level(), Some(0));

        let mut s = Skeleton::new();
        s.insert(d(1, 1), -0.2).unwrap();
        s.insert(DyadicPoint::one(), 0.4).unwrap();
        s.insert(d(1, 2), -0.5).unwrap();
        assert_eq!(s.min_value(), -0.5);
        assert_eq!(s.min_gap(), Some(&d(1, 2)));
        assert_eq!(s.gaps(), &[0.25, 0.25, 0.5]);
        assert_eq!(s.n(), 3);
    }

    #[test]
    fn insert_duplicate_fails() {
        let mut s = Skeleton::new();
        s.insert(DyadicPoint::one(), 1.0).unwrap();
        assert!(matches!(
            s.insert(DyadicPoint::one(), 2.0),
            Err(Error::DuplicateSite(_))
        ));
        assert!(matches!(
            s.insert(DyadicPoint::zero(), 0.0),
            Err(Error::DuplicateSite(_))
        ));
        assert_eq!(s.n(), 1);
    }

    #[test]
    fn segments_follow_sites() {
        let mut s = Skeleton::new();
        s.insert(DyadicPoint::one(), 1.0).unwrap();
        s.insert(d(1, 1), -1.0).unwrap();
        let segs: Vec<_> = s.segments().collect();
        assert_eq!(segs.len(), 2);
        assert_eq!(
            (segs[0].a(), segs[0].b(), segs[0].length()),
            (0.0, -1.0, 0.5)
        );
        assert_eq!(
            (segs[1].a(), segs[1].b(), segs[1].length()),
            (-1.0, 1.0, 0.5)
        );
    }
}
