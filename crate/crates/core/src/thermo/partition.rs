//! Partition functions `Z_n` over all words of length `n`.

use crate::circle::wrap;
use crate::dynamics::affine::{ball_domain_limit, reduce_affine};
use crate::dynamics::semigroup::birkhoff_unchecked;
use crate::dynamics::{Potential, SemigroupSpec};
use crate::error::{Error, Result};
use crate::separation::{separated_indices, snapped_ceil, GridSpec, Method};
use crate::words::{par_map_words, Word, DEFAULT_WORD_CAP};
use serde::{Deserialize, Serialize};

/// `log sum exp` of a slice, folded left to right.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    m + xs.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

/// What one word contributes to `Z_n`: the Birkhoff sums it is weighted by.
#[derive(Clone, Debug, PartialEq)]
pub enum WordWeights {
    /// `count` points, each carrying the same sum `value`.
    Uniform { count: f64, value: f64 },
    /// One sum per separated point.
    Points(Vec<f64>),
    /// Largest and smallest sampled sum on each cover arc.
    Arcs { hi: Vec<f64>, lo: Vec<f64> },
}

impl WordWeights {
    /// `log sum exp(t S + shift)` over the word's points, with arcs contributing their sup.
    pub fn log_weight(&self, t: f64, shift: f64) -> f64 {
        match self {
            WordWeights::Uniform { count, value } => {
                if *count == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    count.ln() + (t * value + shift)
                }
            }
            WordWeights::Points(s) => {
                let v: Vec<f64> = s.iter().map(|&x| t * x + shift).collect();
                log_sum_exp(&v)
            }
            WordWeights::Arcs { hi, lo } => {
                let src = if t >= 0.0 { hi } else { lo };
                let v: Vec<f64> = src.iter().map(|&x| t * x + shift).collect();
                log_sum_exp(&v)
            }
        }
    }

    pub fn count(&self) -> usize {
        match self {
            WordWeights::Uniform { count, .. } => *count as usize,
            WordWeights::Points(s) => s.len(),
            WordWeights::Arcs { hi, .. } => hi.len(),
        }
    }
}

/// Separated sets (or covers) for every word of one length, together with the
/// Birkhoff sums on them. Reusing one of these for several potentials keeps the
/// algebraic identities between them exact sample by sample.
#[derive(Clone, Debug)]
pub struct SharedSets {
    pub n: usize,
    pub epsilon: f64,
    pub method: Method,
    pub m: usize,
    pub words: Vec<WordWeights>,
    /// Points of `E` on the grid (grid method only).
    pub grid_points: Option<usize>,
    pub resolved: bool,
    pub note: Option<String>,
}

impl SharedSets {
    /// `log Z_n` for the potential `t phi + c`.
    pub fn log_z_shifted(&self, t: f64, c: f64) -> f64 {
        let shift = c * self.n as f64;
        let per_word: Vec<f64> = self.words.iter().map(|w| w.log_weight(t, shift)).collect();
        log_sum_exp(&per_word) - self.n as f64 * (self.m as f64).ln()
    }

    pub fn log_z(&self, t: f64) -> f64 {
        self.log_z_shifted(t, 0.0)
    }

    /// `log` of the un-normalised sum over words.
    pub fn log_total(&self, t: f64) -> f64 {
        self.log_z(t) + self.n as f64 * (self.m as f64).ln()
    }

    pub fn max_count(&self) -> usize {
        self.words.iter().map(WordWeights::count).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionFunctionSample {
    pub n: usize,
    pub epsilon: f64,
    #[serde(rename = "logZ")]
    pub log_z: f64,
    pub method: Method,
    pub potential: String,
    pub t: f64,
    pub resolved: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Options for building [`SharedSets`].
#[derive(Clone, Copy, Debug)]
pub struct SetOptions {
    pub method: Method,
    pub grid: GridSpec,
    pub cap: u64,
}

impl Default for SetOptions {
    fn default() -> Self {
        SetOptions {
            method: Method::Exact,
            grid: GridSpec::default(),
            cap: DEFAULT_WORD_CAP,
        }
    }
}

/// Largest expansion over words of length `n`, when every generator is affine.
pub fn max_word_expansion(s: &SemigroupSpec, n: usize) -> Option<f64> {
    s.all_affine()
        .then(|| (s.max_degree() as f64).powi(n as i32))
}

/// Whether the grid can see the scale `eps / D` for every word of length `n`.
///
/// Affine words need `M >= 2 D_max / eps`; other words are judged after the fact by
/// saturation (more than half the grid admitted).
pub fn grid_resolves(s: &SemigroupSpec, n: usize, eps: f64, grid: &GridSpec) -> Option<bool> {
    max_word_expansion(s, n).map(|d| grid.resolution as f64 >= 2.0 * d / eps)
}

fn check_common(s: &SemigroupSpec, n: usize, eps: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("word length must be at least 1".into()));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::Precondition(format!("epsilon {eps} not in (0, 1/2)")));
    }
    let _ = s;
    Ok(())
}

/// Build the per-word weights for `Z_n(phi, eps)`.
pub fn shared_sets(
    s: &SemigroupSpec,
    n: usize,
    eps: f64,
    phi: &Potential,
    opts: &SetOptions,
) -> Result<SharedSets> {
    check_common(s, n, eps)?;
    match opts.method {
        Method::Exact => exact_sets(s, n, eps, phi, opts),
        Method::Grid => grid_sets(s, n, eps, phi, opts),
    }
}

fn exact_sets(
    s: &SemigroupSpec,
    n: usize,
    eps: f64,
    phi: &Potential,
    opts: &SetOptions,
) -> Result<SharedSets> {
    if !s.all_affine() {
        return Err(Error::ExactUnavailable);
    }
    let limit = 1.0 / (s.max_degree() as f64 + 1.0);
    if eps >= limit {
        return Err(Error::ApproximationDomain {
            epsilon: eps,
            limit,
        });
    }
    let (start, length) = match opts.grid.subset {
        None => (0.0, 1.0),
        Some(arc) => (arc.start(), arc.length()),
    };
    let results = par_map_words(s.m(), n, opts.cap, |w| -> Result<WordWeights> {
        let a = reduce_affine(w, s)?;
        debug_assert!(eps < ball_domain_limit(&a));
        let arcs = snapped_ceil(length * a.d as f64 / eps);
        if let Some(c) = phi.as_constant() {
            return Ok(WordWeights::Uniform {
                count: arcs as f64,
                value: c * n as f64,
            });
        }
        let nn = arcs as usize;
        let h = length / nn as f64;
        let sum = |x: f64| birkhoff_unchecked(w, s, phi, wrap(x));
        let edges: Vec<f64> = (0..=nn).map(|k| sum(start + k as f64 * h)).collect();
        let mut hi = Vec::with_capacity(nn);
        let mut lo = Vec::with_capacity(nn);
        for k in 0..nn {
            let mid = sum(start + (k as f64 + 0.5) * h);
            let (a, b) = (edges[k], edges[k + 1]);
            hi.push(a.max(b).max(mid));
            lo.push(a.min(b).min(mid));
        }
        Ok(WordWeights::Arcs { hi, lo })
    })?;
    Ok(SharedSets {
        n,
        epsilon: eps,
        method: Method::Exact,
        m: s.m(),
        words: results.into_iter().collect::<Result<_>>()?,
        grid_points: None,
        resolved: true,
        note: None,
    })
}

fn grid_sets(
    s: &SemigroupSpec,
    n: usize,
    eps: f64,
    phi: &Potential,
    opts: &SetOptions,
) -> Result<SharedSets> {
    opts.grid.check(eps)?;
    let points = opts.grid.points();
    let wraps = opts.grid.wraps(eps);
    let constant = phi.as_constant();
    let words = par_map_words(s.m(), n, opts.cap, |w: &Word| {
        let idx = separated_indices(w, s, eps, &points, wraps);
        match constant {
            Some(c) => WordWeights::Uniform {
                count: idx.len() as f64,
                value: c * n as f64,
            },
            None => WordWeights::Points(
                idx.iter()
                    .map(|&i| birkhoff_unchecked(w, s, phi, points[i]))
                    .collect(),
            ),
        }
    })?;
    let mut sets = SharedSets {
        n,
        epsilon: eps,
        method: Method::Grid,
        m: s.m(),
        words,
        grid_points: Some(points.len()),
        resolved: true,
        note: None,
    };
    match grid_resolves(s, n, eps, &opts.grid) {
        Some(false) => {
            sets.resolved = false;
            sets.note = Some(format!(
                "grid M={} below 2 D_max/eps = {:.0}",
                opts.grid.resolution,
                2.0 * max_word_expansion(s, n).unwrap() / eps
            ));
        }
        Some(true) => {}
        None => {
            if sets.max_count() * 2 > points.len() {
                sets.resolved = false;
                sets.note = Some(format!(
                    "grid saturated: {} of {} points admitted",
                    sets.max_count(),
                    points.len()
                ));
            }
        }
    }
    Ok(sets)
}

/// One sample of `log Z_n((G, G_1), phi, eps)`.
pub fn partition_function(
    s: &SemigroupSpec,
    n: usize,
    eps: f64,
    phi: &Potential,
    opts: &SetOptions,
) -> Result<PartitionFunctionSample> {
    let sets = shared_sets(s, n, eps, phi, opts)?;
    Ok(PartitionFunctionSample {
        n,
        epsilon: eps,
        log_z: sets.log_z(1.0),
        method: sets.method,
        potential: phi.id(),
        t: 1.0,
        resolved: sets.resolved,
        note: sets.note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::enumerate_words;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn s235() -> SemigroupSpec {
        SemigroupSpec::linear(&[2, 3, 5]).unwrap()
    }

    #[test]
    fn exact_entropy_differences_are_log_mean_degree() {
        let s = s235();
        let opts = SetOptions::default();
        let z: Vec<f64> = (1..=6)
            .map(|n| partition_function(&s, n, 1.0 / 64.0, &Potential::zero(), &opts).unwrap().log_z)
            .collect();
        for pair in z.windows(2) {
            assert!((pair[1] - pair[0] - (10.0f64 / 3.0).ln()).abs() < 1e-10);
        }
        assert!((z[0] - (64.0 * 10.0 / 3.0f64).ln()).abs() < 1e-12);
    }

    /// Brute-force word sum of ceil(D_w / eps) against (1/eps) (sum deg)^n.
    #[test]
    fn cover_count_identity_by_enumeration() {
        for degs in [vec![2u32, 3, 5], vec![2, 2], vec![3, 4, 7]] {
            let s = SemigroupSpec::linear(&degs).unwrap();
            let sum_deg: u64 = degs.iter().map(|&d| d as u64).sum();
            for n in 1..=6 {
                let mut total = BigUint::from(0u32);
                for w in enumerate_words(s.m(), n).unwrap() {
                    let a = reduce_affine(&w, &s).unwrap();
                    total += BigUint::from(crate::separation::exact_cover_count(&a, 1.0 / 64.0).unwrap());
                }
                assert_eq!(total, BigUint::from(64u32) * BigUint::from(sum_deg).pow(n as u32));
            }
        }
    }

    #[test]
    fn rotation_only_is_flat() {
        let s = SemigroupSpec::parse("rot:golden").unwrap();
        let opts = SetOptions::default();
        let a = partition_function(&s, 1, 0.1, &Potential::zero(), &opts).unwrap().log_z;
        let b = partition_function(&s, 5, 0.1, &Potential::zero(), &opts).unwrap().log_z;
        assert_eq!(a, b);
        assert!((a - 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn constant_potential_shifts_by_nc() {
        let s = s235();
        for method in [Method::Exact, Method::Grid] {
            let opts = SetOptions {
                method,
                grid: GridSpec::new(1 << 12),
                ..Default::default()
            };
            let base = partition_function(&s, 2, 1.0 / 32.0, &Potential::zero(), &opts).unwrap();
            let c = partition_function(&s, 2, 1.0 / 32.0, &Potential::constant(0.3), &opts).unwrap();
            assert!((c.log_z - base.log_z - 0.6).abs() < 1e-12);
        }
    }

    #[test]
    fn shared_sets_shift_identity_for_cosine() {
        let s = s235();
        let sets = shared_sets(&s, 3, 1.0 / 32.0, &Potential::cosine(1.0, 1), &SetOptions::default()).unwrap();
        for c in [-1.0, 0.25, 2.0] {
            let d = sets.log_z_shifted(1.0, c) - sets.log_z(1.0);
            assert!((d - 3.0 * c).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_rejects_nonlinear_and_large_eps() {
        let opts = SetOptions::default();
        let mp = SemigroupSpec::parse("mp:1,lin:2").unwrap();
        assert_eq!(
            partition_function(&mp, 2, 0.01, &Potential::zero(), &opts).unwrap_err(),
            Error::ExactUnavailable
        );
        assert!(matches!(
            partition_function(&s235(), 2, 0.2, &Potential::zero(), &opts),
            Err(Error::ApproximationDomain { .. })
        ));
    }

    #[test]
    fn grid_flags_unresolved_samples() {
        let opts = SetOptions {
            method: Method::Grid,
            grid: GridSpec::new(1 << 10),
            ..Default::default()
        };
        let z = partition_function(&s235(), 3, 1.0 / 64.0, &Potential::zero(), &opts).unwrap();
        assert!(!z.resolved && z.note.is_some());
    }

    #[test]
    fn duplicate_generator_leaves_the_average_unchanged() {
        let one = SemigroupSpec::linear(&[2]).unwrap();
        let two = SemigroupSpec::linear(&[2, 2]).unwrap();
        let opts = SetOptions::default();
        for n in 1..=5 {
            let a = partition_function(&one, n, 1.0 / 64.0, &Potential::zero(), &opts).unwrap();
            let b = partition_function(&two, n, 1.0 / 64.0, &Potential::zero(), &opts).unwrap();
            assert!((a.log_z - b.log_z).abs() < 1e-12);
        }
    }

    #[test]
    fn log_sum_exp_is_stable() {
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// Separated sets nest as eps shrinks, so log Z_n is monotone.
        #[test]
        fn log_z_is_monotone_in_eps(n in 1usize..3, a in 0.02..0.1f64, b in 0.02..0.1f64) {
            let (small, large) = if a < b { (a, b) } else { (b, a) };
            let s = SemigroupSpec::parse("lin:2,rot:golden").unwrap();
            for method in [Method::Exact, Method::Grid] {
                let opts = SetOptions { method, grid: GridSpec::new(1 << 12), ..Default::default() };
                let zs = partition_function(&s, n, small, &Potential::zero(), &opts).unwrap().log_z;
                let zl = partition_function(&s, n, large, &Potential::zero(), &opts).unwrap().log_z;
                prop_assert!(zs >= zl - 1e-12);
            }
        }
    }
}
