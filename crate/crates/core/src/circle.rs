//! Points of the circle `R/Z` and its arc-length metric.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Canonical reduction modulo 1 into `[0, 1)`.
///
/// Every reduction in the crate goes through here so that `-0.0` and values
/// that round up to `1.0` never leak out.
#[inline]
pub fn wrap(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r + 0.0
    }
}

/// `d(x, y) = min(|x - y|, 1 - |x - y|)` on representatives.
#[inline]
pub fn circle_distance(x: f64, y: f64) -> f64 {
    let r = (wrap(x) - wrap(y)).abs();
    r.min(1.0 - r)
}

/// Signed representative of `b - a` in `[-1/2, 1/2)`.
#[inline]
pub(crate) fn signed_delta(a: f64, b: f64) -> f64 {
    wrap(b - a + 0.5) - 0.5
}

/// A point of the circle, stored as its representative in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub fn new(x: f64) -> Self {
        CirclePoint(wrap(x))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    pub fn distance(self, other: CirclePoint) -> f64 {
        circle_distance(self.0, other.0)
    }
}

impl From<f64> for CirclePoint {
    fn from(x: f64) -> Self {
        CirclePoint::new(x)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Closed arc `{y : d(y, center) <= radius}`. A radius of at least 1/2 is the whole circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleArc {
    pub center: f64,
    pub radius: f64,
}

impl CircleArc {
    pub fn new(center: f64, radius: f64) -> Self {
        CircleArc {
            center: wrap(center),
            radius: radius.max(0.0),
        }
    }

    pub fn whole() -> Self {
        CircleArc {
            center: 0.0,
            radius: 0.5,
        }
    }

    pub fn is_whole(&self) -> bool {
        self.radius >= 0.5
    }

    pub fn length(&self) -> f64 {
        (2.0 * self.radius).min(1.0)
    }

    /// Membership with a relative slack of a few ulps, so grid points sitting on an
    /// endpoint are not lost to rounding.
    pub fn contains(&self, x: f64) -> bool {
        self.is_whole() || circle_distance(x, self.center) <= self.radius * (1.0 + 1e-12)
    }

    /// Starting coordinate of the arc in the counter-clockwise sweep.
    pub fn start(&self) -> f64 {
        if self.is_whole() {
            0.0
        } else {
            wrap(self.center - self.radius)
        }
    }
}
