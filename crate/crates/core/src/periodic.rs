//! Fixed points of affine words, mean periodic growth, and periodic shadowing.

use crate::circle::wrap;
use crate::dynamics::{AffineWordForm, SemigroupSpec};
use crate::error::{Error, Result};
use crate::exact::{self, rat, to_f64, ExactAffine, Q};
use crate::specprobe::witness::{backward_chain, forward_constraints, Constraint, Segment};
use crate::words::{enumerate_words_capped, word_count, Word, DEFAULT_WORD_CAP};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixReport {
    pub d: u128,
    pub t: f64,
    pub count: u128,
    /// `D = 1` and `t` an integer: the word is the identity and fixes everything.
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
}

/// Solutions of `D x + t = x (mod 1)`: `x = (k - t) / (D - 1)` for `k = 0..D-1`.
pub fn fix_count(a: &AffineWordForm) -> FixReport {
    fix_report(a, false)
}

pub fn fix_points(a: &AffineWordForm) -> FixReport {
    fix_report(a, true)
}

fn fix_report(a: &AffineWordForm, with_points: bool) -> FixReport {
    if a.d >= 2 {
        let points = with_points.then(|| {
            let dm1 = (a.d - 1) as f64;
            let mut p: Vec<f64> = (0..a.d - 1).map(|k| wrap((k as f64 - a.t) / dm1)).collect();
            p.sort_by(|x, y| x.partial_cmp(y).unwrap());
            p
        });
        FixReport {
            d: a.d,
            t: a.t,
            count: a.d - 1,
            degenerate: false,
            points,
        }
    } else {
        FixReport {
            d: 1,
            t: a.t,
            count: 0,
            degenerate: wrap(a.t) == 0.0,
            points: with_points.then(Vec::new),
        }
    }
}

pub(crate) fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixGrowthRow {
    pub n: usize,
    /// `sum_words (D_w - 1)`, exact.
    pub fix_sum: String,
    /// `(1/n) log((1/m^n) sum_words #Fix)`.
    pub rate: f64,
    /// Whether direct enumeration reproduced the closed form (`None` when not attempted).
    pub brute_force_agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixGrowthReport {
    pub rows: Vec<FixGrowthRow>,
    pub rate: f64,
    pub closed_form_limit: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

impl FixGrowthReport {
    /// Record the entropy estimate and the margin `rate - estimate`.
    pub fn with_entropy(mut self, h: f64) -> Self {
        self.entropy_estimate = Some(h);
        self.margin = Some(self.rate - h);
        self
    }
}

/// Largest `n` at which the closed form is cross-checked by enumeration.
pub const BRUTE_FORCE_MAX_N: usize = 6;

/// `sum_words (D_w - 1) = (sum deg)^n - m^n`.
pub fn fix_sum_closed_form(s: &SemigroupSpec, n: usize) -> BigUint {
    BigUint::from(s.degree_sum()).pow(n as u32) - word_count(s.m(), n)
}

pub fn fix_sum_brute_force(s: &SemigroupSpec, n: usize, cap: u64) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for w in enumerate_words_capped(s.m(), n, cap)? {
        let a = crate::dynamics::reduce_affine(&w, s)?;
        total += BigUint::from(fix_count(&a).count);
    }
    Ok(total)
}

/// Mean growth of fixed points over `n_range`, brute-checked for short words.
pub fn mean_fix_growth(s: &SemigroupSpec, n_min: usize, n_max: usize) -> Result<FixGrowthReport> {
    if !s.all_linear() {
        return Err(Error::ExactUnavailable);
    }
    if n_min == 0 || n_max < n_min {
        return Err(Error::Precondition(format!("bad n range {n_min}..={n_max}")));
    }
    let ln_m = (s.m() as f64).ln();
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let sum = fix_sum_closed_form(s, n);
        let brute_force_agrees = (n <= BRUTE_FORCE_MAX_N)
            .then(|| fix_sum_brute_force(s, n, DEFAULT_WORD_CAP).map(|b| b == sum))
            .transpose()?;
        rows.push(FixGrowthRow {
            n,
            rate: (ln_big(&sum) - n as f64 * ln_m) / n as f64,
            fix_sum: sum.to_string(),
            brute_force_agrees,
        });
    }
    Ok(FixGrowthReport {
        rate: rows.last().unwrap().rate,
        closed_form_limit: (s.degree_sum() as f64 / s.m() as f64).ln(),
        rows,
        entropy_estimate: None,
        margin: None,
    })
}

/// Fixed points of every word of length `1..=n_max`, sorted and deduplicated.
pub fn fixed_point_set(s: &SemigroupSpec, n_max: usize, cap: u64) -> Result<Vec<f64>> {
    let mut pts = Vec::new();
    for n in 1..=n_max {
        for w in enumerate_words_capped(s.m(), n, cap)? {
            let a = crate::dynamics::reduce_affine(&w, s)?;
            if let Some(p) = fix_points(&a).points {
                pts.extend(p);
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    Ok(pts)
}

/// Largest circular gap between consecutive points.
pub fn max_circular_gap(sorted: &[f64]) -> f64 {
    if sorted.is_empty() {
        return 1.0;
    }
    let inner = sorted
        .windows(2)
        .map(|p| p[1] - p[0])
        .fold(0.0, f64::max);
    inner.max(1.0 - sorted.last().unwrap() + sorted[0])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicShadow {
    pub point: f64,
    pub loop_word: Word,
    pub loop_expansion: String,
    /// `|L(x) - x|` on the circle, evaluated exactly.
    pub fixed_defect: f64,
    pub constraints: Vec<Constraint>,
    pub verified: bool,
}

/// A periodic point shadowing the segments in order and then closing the loop
/// through the last bridge back to the first segment.
pub fn periodic_shadow_point(
    s: &SemigroupSpec,
    segments: &[Segment],
    bridges: &[Word],
    eps: f64,
) -> Result<PeriodicShadow> {
    if segments.is_empty() || bridges.len() != segments.len() {
        return Err(Error::Precondition(format!(
            "a loop of {} segments needs exactly as many bridges (got {})",
            segments.len(),
            bridges.len()
        )));
    }
    crate::specprobe::witness::check_bridges(s, bridges, eps)?;
    let mut loop_word = Word::identity();
    for (seg, b) in segments.iter().zip(bridges) {
        loop_word = loop_word.then(&seg.word).then(b);
    }
    let l = ExactAffine::of_word(&loop_word, s)?;
    if l.d < BigInt::from(2) {
        return Err(Error::Precondition("loop word must expand (D >= 2)".into()));
    }
    // the starting point whose chain returns exactly to x_1, then the fixed point of that branch
    let x1 = rat(segments[0].x);
    let mut targets: Vec<Segment> = segments.to_vec();
    targets.push(Segment {
        x: segments[0].x,
        word: Word::identity(),
    });
    let y1 = backward_chain(s, &targets, bridges, eps, Some(0.0))?;
    let dq = Q::from_integer(l.d.clone());
    let j = (&dq * &y1 + &l.t - &x1).round().to_integer();
    debug_assert!((&dq * &y1 + &l.t - &x1 - Q::from_integer(j.clone())).is_zero());
    let xs = (Q::from_integer(j) - &l.t) / (dq - Q::one());
    let x_star = exact::frac(&xs);
    let defect = exact::circle_dist(&l.apply(&x_star), &x_star);
    let constraints = forward_constraints(s, segments, bridges, &x_star, eps)?;
    let verified = defect.is_zero() && constraints.iter().all(|c| c.within);
    if !verified {
        return Err(Error::Precondition(format!(
            "no periodic point found inside the first dynamical ball at eps = {eps}; bridges too short"
        )));
    }
    Ok(PeriodicShadow {
        point: to_f64(&x_star),
        loop_expansion: l.d.to_string(),
        loop_word,
        fixed_defect: to_f64(&defect.abs()),
        constraints,
        verified,
    })
}
