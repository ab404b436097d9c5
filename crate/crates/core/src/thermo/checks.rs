//! Bounded distortion and subadditivity, checked numerically.

use super::partition::{shared_sets, SetOptions};
use crate::dynamics::semigroup::birkhoff_unchecked;
use crate::dynamics::{dyn_ball_interval, reduce_affine, Potential, SemigroupSpec};
use crate::error::{Error, Result};
use crate::separation::Method;
use crate::words::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationSample {
    pub word: Word,
    pub center: f64,
    pub x: f64,
    pub y: f64,
    pub variation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationReport {
    pub epsilon: f64,
    pub n_max: usize,
    pub samples: usize,
    pub bound: f64,
    pub max_variation: f64,
    pub violations: usize,
    pub worst: Option<VariationSample>,
}

/// Sample `|S_g phi(x) - S_g phi(y)|` for `x, y` in one dynamical ball and compare
/// with `K eps^alpha / (1 - lambda^alpha)`.
pub fn variation_bound_check(
    s: &SemigroupSpec,
    phi: &Potential,
    eps: f64,
    n_max: usize,
    samples: usize,
    seed: u64,
) -> Result<VariationReport> {
    let h = phi.holder()?;
    let lambda = s
        .expansion()
        .ok_or_else(|| Error::Precondition("bounded distortion needs linear expanding generators".into()))?
        .lambda;
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    let bound = h.k * eps.powf(h.alpha) / (1.0 - lambda.powf(h.alpha));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_variation: f64 = 0.0;
    let mut violations = 0;
    let mut worst = None;
    for _ in 0..samples {
        let len = rng.random_range(1..=n_max);
        let w = Word::new((0..len).map(|_| rng.random_range(0..s.m())).collect());
        let a = reduce_affine(&w, s)?;
        let center: f64 = rng.random();
        let arc = dyn_ball_interval(&a, center, eps)?;
        let r = arc.radius;
        // the two endpoints plus one random pair inside the ball
        let u: f64 = rng.random_range(-1.0..=1.0);
        let v: f64 = rng.random_range(-1.0..=1.0);
        for (x, y) in [(center - r, center + r), (center + u * r, center + v * r)] {
            let var = (birkhoff_unchecked(&w, s, phi, x) - birkhoff_unchecked(&w, s, phi, y)).abs();
            if var > bound {
                violations += 1;
            }
            if var > max_variation {
                max_variation = var;
                worst = Some(VariationSample {
                    word: w.clone(),
                    center,
                    x,
                    y,
                    variation: var,
                });
            }
        }
    }
    Ok(VariationReport {
        epsilon: eps,
        n_max,
        samples,
        bound,
        max_variation,
        violations,
        worst,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubadditivePair {
    pub n: usize,
    pub l: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubadditivityReport {
    pub epsilon: f64,
    pub method: Method,
    /// `a_n = log sum_words inf_cover sum_U exp(S_g phi(U))`, un-normalised.
    pub a: Vec<(usize, f64)>,
    pub tolerance: f64,
    pub tolerance_widened: bool,
    pub pairs: Vec<SubadditivePair>,
    pub violations: usize,
    pub max_excess: f64,
}

/// Compare `a_{n+l}` with `a_n + a_l` for all `n, l >= 1` with `n + l <= n_max`.
pub fn subadditivity_check(
    s: &SemigroupSpec,
    phi: &Potential,
    eps: f64,
    n_max: usize,
    opts: &SetOptions,
    tolerance: f64,
) -> Result<SubadditivityReport> {
    if n_max < 2 {
        return Err(Error::Precondition("need n_max >= 2 to form a pair".into()));
    }
    let mut a = Vec::new();
    for n in 1..=n_max {
        a.push((n, shared_sets(s, n, eps, phi, opts)?.log_total(1.0)));
    }
    // the greedy grid path only approximates the infimum over covers
    let (tolerance, widened) = match opts.method {
        Method::Exact => (tolerance, false),
        Method::Grid => (tolerance.max(2f64.ln()), true),
    };
    let mut pairs = Vec::new();
    for n in 1..n_max {
        for l in 1..=(n_max - n) {
            let lhs = a[n + l - 1].1;
            let rhs = a[n - 1].1 + a[l - 1].1;
            pairs.push(SubadditivePair {
                n,
                l,
                lhs,
                rhs,
                excess: lhs - rhs,
            });
        }
    }
    let violations = pairs.iter().filter(|p| p.excess > tolerance).count();
    let max_excess = pairs.iter().map(|p| p.excess).fold(f64::NEG_INFINITY, f64::max);
    Ok(SubadditivityReport {
        epsilon: eps,
        method: opts.method,
        a,
        tolerance,
        tolerance_widened: widened,
        pairs,
        violations,
        max_excess,
    })
}
