//! Flag value grammar: `0.01`, `1/64`, `2^16`, comma lists, inclusive `a..b` ranges.

use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let bad = || format!("cannot read {s:?} as a number");
    let v = if let Some((a, b)) = s.split_once('/') {
        parse_number(a)? / parse_number(b)?
    } else if let Some((a, b)) = s.split_once('^') {
        parse_number(a)?.powf(parse_number(b)?)
    } else {
        s.parse::<f64>().map_err(|_| bad())?
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

pub fn parse_count(s: &str) -> Result<usize, String> {
    let v = parse_number(s)?;
    if v >= 0.0 && v.fract() == 0.0 && v <= usize::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(format!("{s:?} is not a non-negative integer"))
    }
}

/// Comma-separated numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct NumList(pub Vec<f64>);

impl FromStr for NumList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let v = s
            .split(',')
            .map(parse_number)
            .collect::<Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err("empty list".into());
        }
        Ok(NumList(v))
    }
}

impl fmt::Display for NumList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(f64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl Serialize for NumList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Inclusive integer range `a..b`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntRange {
    pub lo: u64,
    pub hi: u64,
}

impl FromStr for IntRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (
                parse_count(a)? as u64,
                parse_count(b.trim_start_matches('='))? as u64,
            ),
            None => {
                let v = parse_count(s)? as u64;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(IntRange { lo, hi })
    }
}

impl IntRange {
    pub fn iter(&self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }
}

/// Evenly spaced values `lo..hi` with a point count, written `lo..hi:count`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (range, count) = s
            .rsplit_once(':')
            .ok_or_else(|| format!("expected lo..hi:count, got {s:?}"))?;
        let (a, b) = range
            .split_once("..")
            .ok_or_else(|| format!("expected lo..hi:count, got {s:?}"))?;
        let points = parse_count(count)?;
        if points == 0 {
            return Err("a grid needs at least one point".into());
        }
        Ok(Grid {
            lo: parse_number(a)?,
            hi: parse_number(b)?,
            points,
        })
    }
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.hi } else { self.lo + step * i as f64 })
            .collect()
    }
}
