//! Maximal separated sets and minimal covers for the dynamical metric of one word.

use crate::circle::{circle_distance, signed_delta, CircleArc};
use crate::dynamics::{AffineWordForm, SemigroupSpec};
use crate::error::{Error, Result};
use crate::words::Word;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

pub const DEFAULT_GRID: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Grid,
    Exact,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Grid => "grid",
            Method::Exact => "exact",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(Method::Grid),
            "exact" => Ok(Method::Exact),
            _ => Err(Error::Parse(format!("unknown method {s:?} (grid|exact)"))),
        }
    }
}

/// The sample points `j / M`, optionally restricted to an arc `E`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub resolution: usize,
    pub subset: Option<CircleArc>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::new(DEFAULT_GRID)
    }
}

impl GridSpec {
    pub fn new(resolution: usize) -> Self {
        GridSpec {
            resolution,
            subset: None,
        }
    }

    pub fn with_subset(mut self, arc: Option<CircleArc>) -> Self {
        self.subset = arc.filter(|a| !a.is_whole());
        self
    }

    pub fn is_whole(&self) -> bool {
        self.subset.is_none()
    }

    /// Whether the two ends of `E` come within `window` of each other.
    pub fn wraps(&self, window: f64) -> bool {
        match self.subset {
            None => true,
            Some(arc) => arc.length() >= 1.0 - 2.0 * window,
        }
    }

    pub fn check(&self, eps: f64) -> Result<()> {
        let required = 2.0 / eps;
        if (self.resolution as f64) < required {
            return Err(Error::GridTooCoarse {
                resolution: self.resolution,
                required,
            });
        }
        Ok(())
    }

    /// Grid points of `E` in sweep order: increasing coordinate on the whole
    /// circle, counter-clockwise from the arc's start otherwise.
    pub fn points(&self) -> Vec<f64> {
        let m = self.resolution;
        match self.subset {
            None => (0..m).map(|j| j as f64 / m as f64).collect(),
            Some(arc) => {
                let mf = m as f64;
                let first = ((arc.center - arc.radius) * mf).floor() as i64 - 1;
                let last = ((arc.center + arc.radius) * mf).ceil() as i64 + 1;
                (first..=last)
                    .map(|j| j.rem_euclid(m as i64) as f64 / mf)
                    .filter(|&x| arc.contains(x))
                    .collect()
            }
        }
    }

    pub fn len(&self) -> usize {
        match self.subset {
            None => self.resolution,
            Some(_) => self.points().len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparatedSet {
    pub word: Word,
    pub epsilon: f64,
    pub points: Vec<f64>,
    pub method: Method,
}

impl SeparatedSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Greedy sweep admitting a point when no admitted point is `close` to it.
///
/// Pairs further apart than `window` in the base metric are never close, so only
/// admitted points inside that window (plus, on the whole circle, those near the
/// start of the sweep) are examined.
pub(crate) fn greedy_sweep<O, C>(
    points: &[f64],
    whole: bool,
    window: f64,
    row_len: usize,
    mut orbit: O,
    close: C,
) -> Vec<usize>
where
    O: FnMut(f64, &mut Vec<f64>),
    C: Fn(&[f64], &[f64]) -> bool,
{
    let origin = points.first().copied().unwrap_or(0.0);
    let offset = |x: f64| crate::circle::wrap(x - origin);
    let mut arena: Vec<f64> = Vec::new();
    let mut admitted: Vec<usize> = Vec::new();
    let mut recent: VecDeque<(f64, usize)> = VecDeque::new();
    let mut head: Vec<(f64, usize)> = Vec::new();
    let mut buf = Vec::with_capacity(row_len);

    for (idx, &x) in points.iter().enumerate() {
        let o = offset(x);
        while let Some(&(fo, _)) = recent.front() {
            if o - fo > window {
                recent.pop_front();
            } else {
                break;
            }
        }
        orbit(x, &mut buf);
        let row = |slot: usize| &arena[slot * row_len..(slot + 1) * row_len];
        let blocked = recent.iter().rev().any(|&(_, s)| close(&buf, row(s)))
            || (whole
                && head.iter().any(|&(ho, s)| {
                    (1.0 - o) + ho <= window && circle_distance(x, points[admitted[s]]) <= window
                        && close(&buf, row(s))
                }));
        if !blocked {
            let slot = admitted.len();
            arena.extend_from_slice(&buf);
            admitted.push(idx);
            recent.push_back((o, slot));
            if o <= window {
                head.push((o, slot));
            }
        }
    }
    admitted
}

/// Maximal `(g, n, eps)`-separated set on the grid: points pairwise at `d_g > eps`.
pub fn maximal_separated(
    w: &Word,
    s: &SemigroupSpec,
    eps: f64,
    grid: &GridSpec,
) -> Result<SeparatedSet> {
    s.check_word(w)?;
    grid.check(eps)?;
    let points = grid.points();
    let idx = separated_indices(w, s, eps, &points, grid.wraps(eps));
    Ok(SeparatedSet {
        word: w.clone(),
        epsilon: eps,
        points: idx.into_iter().map(|i| points[i]).collect(),
        method: Method::Grid,
    })
}

pub(crate) fn separated_indices(
    w: &Word,
    s: &SemigroupSpec,
    eps: f64,
    points: &[f64],
    whole: bool,
) -> Vec<usize> {
    greedy_sweep(
        points,
        whole,
        eps,
        w.len() + 1,
        |x, buf| s.orbit_into(w, x, buf),
        |a, b| crate::dynamics::semigroup::orbits_within(a, b, eps),
    )
}

/// `ceil(D / eps)`, snapping quotients that are integers up to rounding.
pub fn snapped_ceil(q: f64) -> u128 {
    let r = q.round();
    if (q - r).abs() <= 1e-9 * q.max(1.0) {
        r as u128
    } else {
        q.ceil() as u128
    }
}

/// Minimal number of arcs of `d_g`-diameter at most `eps` covering the circle,
/// for a pure-expanding affine word: `ceil(D / eps)`.
pub fn exact_cover_count(a: &AffineWordForm, eps: f64) -> Result<u128> {
    if !a.is_pure_expanding() {
        return Err(Error::NotPureExpanding);
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::ApproximationDomain {
            epsilon: eps,
            limit: 0.5,
        });
    }
    Ok(snapped_ceil(a.d as f64 / eps))
}

/// Greedy cover of the grid points of `E` by consecutive runs whose images under
/// every prefix span at most `eps`.
pub fn min_cover_count(w: &Word, s: &SemigroupSpec, eps: f64, grid: &GridSpec) -> Result<usize> {
    s.check_word(w)?;
    grid.check(eps)?;
    let points = grid.points();
    Ok(cover_runs(w, s, eps, &points).len())
}

/// Start indices of the greedy cover arcs.
pub(crate) fn cover_runs(w: &Word, s: &SemigroupSpec, eps: f64, points: &[f64]) -> Vec<usize> {
    let k = w.len() + 1;
    let mut starts = Vec::new();
    let mut prev = Vec::with_capacity(k);
    let mut cur = Vec::with_capacity(k);
    let mut lift = vec![0.0; k];
    let mut lo = vec![0.0; k];
    let mut hi = vec![0.0; k];
    for (idx, &x) in points.iter().enumerate() {
        s.orbit_into(w, x, &mut cur);
        let mut fits = !starts.is_empty();
        if fits {
            for j in 0..k {
                let l = lift[j] + signed_delta(prev[j], cur[j]);
                if l.max(hi[j]) - l.min(lo[j]) > eps {
                    fits = false;
                    break;
                }
            }
        }
        if fits {
            for j in 0..k {
                lift[j] += signed_delta(prev[j], cur[j]);
                lo[j] = lo[j].min(lift[j]);
                hi[j] = hi[j].max(lift[j]);
            }
        } else {
            starts.push(idx);
            lift.iter_mut().for_each(|v| *v = 0.0);
            lo.iter_mut().for_each(|v| *v = 0.0);
            hi.iter_mut().for_each(|v| *v = 0.0);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    starts
}
