//! Separation by *some* word of length at most `n` (the maximal-rate entropy),
//! and the growth-normalised quotient.

use super::estimate::{assemble, EstimateReport, Schedule};
use super::partition::{grid_resolves, max_word_expansion, PartitionFunctionSample};
use crate::circle::CircleArc;
use crate::dynamics::SemigroupSpec;
use crate::error::{Error, Result};
use crate::separation::{greedy_sweep, GridSpec, Method};
use crate::words::word_count;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Number of words of length `0..=n`.
fn tree_size(m: usize, n: usize) -> Result<usize> {
    let mut total = BigUint::from(0u32);
    for j in 0..=n {
        total += word_count(m, j);
    }
    total
        .to_usize()
        .filter(|&t| t <= 50_000_000)
        .ok_or_else(|| Error::EnumerationBudget {
            count: total.to_string(),
            cap: 50_000_000,
        })
}

/// Images of `x` under every word of length `0..=n`, shortest first.
fn tree_row(s: &SemigroupSpec, n: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(x);
    let (mut lo, mut hi) = (0, 1);
    for _ in 0..n {
        for p in lo..hi {
            let y = out[p];
            for g in s.generators() {
                out.push(g.apply(y));
            }
        }
        lo = hi;
        hi = out.len();
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlwCount {
    pub n: usize,
    pub epsilon: f64,
    pub count: f64,
    pub method: Method,
    pub resolved: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Greedy maximal set on the grid of `E` where `x != y` are separated iff some
/// word of length at most `n` moves them at least `eps` apart.
pub fn glw_count_grid(s: &SemigroupSpec, n: usize, eps: f64, grid: &GridSpec) -> Result<GlwCount> {
    grid.check(eps)?;
    let row_len = tree_size(s.m(), n)?;
    let points = grid.points();
    let admitted = greedy_sweep(
        &points,
        grid.wraps(eps),
        eps,
        row_len,
        |x, buf| tree_row(s, n, x, buf),
        |a, b| {
            a.iter()
                .zip(b)
                .all(|(&p, &q)| crate::circle::circle_distance(p, q) < eps)
        },
    );
    let count = admitted.len();
    let (resolved, note) = match grid_resolves(s, n, eps, grid) {
        Some(true) => (true, None),
        Some(false) => (
            false,
            Some(format!(
                "grid M={} below 2 k_max^n/eps = {:.0}",
                grid.resolution,
                2.0 * max_word_expansion(s, n).unwrap() / eps
            )),
        ),
        None if count * 2 > points.len() => (
            false,
            Some(format!("grid saturated: {count} of {} points", points.len())),
        ),
        None => (true, None),
    };
    Ok(GlwCount {
        n,
        epsilon: eps,
        count: count as f64,
        method: Method::Grid,
        resolved,
        note,
    })
}

/// Closed form for affine generators: the strongest separation comes from the
/// largest degree applied `n` times, so the count is the packing number at
/// spacing `eps / k_max^n`.
pub fn glw_count_exact(
    s: &SemigroupSpec,
    n: usize,
    eps: f64,
    subset: Option<CircleArc>,
) -> Result<GlwCount> {
    let k = max_word_expansion(s, n).ok_or(Error::ExactUnavailable)?;
    let limit = 1.0 / (s.max_degree() as f64 + 1.0);
    if !(eps > 0.0 && eps < limit) {
        return Err(Error::ApproximationDomain {
            epsilon: eps,
            limit,
        });
    }
    let snapped_floor = |q: f64| {
        let r = q.round();
        if (q - r).abs() <= 1e-9 * q.max(1.0) {
            r
        } else {
            q.floor()
        }
    };
    let count = match subset.filter(|a| !a.is_whole()) {
        None => snapped_floor(k / eps),
        Some(arc) => snapped_floor(arc.length() * k / eps) + 1.0,
    };
    Ok(GlwCount {
        n,
        epsilon: eps,
        count,
        method: Method::Exact,
        resolved: true,
        note: None,
    })
}

/// Growth rate of the largest separated sets, with the same slope estimator as the
/// averaged entropy (no `1/m^n` normalisation).
pub fn glw_entropy(
    s: &SemigroupSpec,
    schedule: &Schedule,
    subset: Option<CircleArc>,
) -> Result<EstimateReport> {
    schedule.validate()?;
    let grid = GridSpec::new(schedule.grid).with_subset(subset.or(schedule.subset));
    let mut eps_list = schedule.epsilons.clone();
    eps_list.sort_by(|a, b| b.partial_cmp(a).unwrap());
    eps_list.dedup();
    let mut samples = Vec::new();
    for &eps in &eps_list {
        for n in schedule.n_min..=schedule.n_max {
            let c = match schedule.method {
                Method::Exact => glw_count_exact(s, n, eps, grid.subset)?,
                Method::Grid => {
                    if grid_resolves(s, n, eps, &grid) == Some(false) {
                        GlwCount {
                            n,
                            epsilon: eps,
                            count: f64::NAN,
                            method: Method::Grid,
                            resolved: false,
                            note: Some(format!(
                                "skipped: grid M={} below 2 k_max^n/eps = {:.0}",
                                grid.resolution,
                                2.0 * max_word_expansion(s, n).unwrap() / eps
                            )),
                        }
                    } else {
                        glw_count_grid(s, n, eps, &grid)?
                    }
                }
            };
            samples.push(PartitionFunctionSample {
                n,
                epsilon: eps,
                log_z: c.count.ln(),
                method: c.method,
                potential: "const:0".into(),
                t: 1.0,
                resolved: c.resolved,
                note: c.note,
            });
        }
    }
    assemble("glw_entropy", "const:0".into(), s, schedule, samples, Vec::new())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSize {
    pub length: usize,
    pub count: String,
    pub rule: String,
}

/// `|G_len|`: distinct maps among words of length `len`.
///
/// For linear generators a word acts as `x -> D x`, so distinct elements are
/// distinct degree products. Otherwise every word is counted.
pub fn distinct_elements(s: &SemigroupSpec, len: usize) -> GroupSize {
    if s.all_linear() {
        let mut level: BTreeSet<u128> = BTreeSet::from([1]);
        let degs: BTreeSet<u128> = s.degrees().into_iter().map(u128::from).collect();
        let mut overflow = false;
        for _ in 0..len {
            let mut next = BTreeSet::new();
            for &d in &level {
                for &k in &degs {
                    match d.checked_mul(k) {
                        Some(v) => {
                            next.insert(v);
                        }
                        None => overflow = true,
                    }
                }
            }
            level = next;
        }
        if !overflow {
            return GroupSize {
                length: len,
                count: level.len().to_string(),
                rule: "distinct degree products".into(),
            };
        }
    }
    GroupSize {
        length: len,
        count: word_count(s.m(), len).to_string(),
        rule: "all words (element identification unavailable)".into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BisReport {
    pub n: usize,
    pub epsilon: f64,
    pub separated: GlwCount,
    pub log_s: f64,
    pub group_size: GroupSize,
    pub quotient: f64,
}

/// `log s(n, eps) / |G_{n-1}|` at one finite `n`.
pub fn bis_quotient(
    s: &SemigroupSpec,
    n: usize,
    eps: f64,
    method: Method,
    grid: &GridSpec,
) -> Result<BisReport> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let separated = match method {
        Method::Exact => glw_count_exact(s, n, eps, grid.subset)?,
        Method::Grid => glw_count_grid(s, n, eps, grid)?,
    };
    let group_size = distinct_elements(s, n - 1);
    let g: f64 = group_size.count.parse().unwrap_or(f64::INFINITY);
    let log_s = separated.count.ln();
    Ok(BisReport {
        n,
        epsilon: eps,
        log_s,
        quotient: log_s / g,
        separated,
        group_size,
    })
}
