//! Strong expansiveness: `gamma`-separated pairs become `delta*`-separated in the
//! dynamical metric of every word of length `k`.

use super::Verdict;
use crate::circle::circle_distance;
use crate::dynamics::{dyn_distance, GeneratorSpec, SemigroupSpec};
use crate::error::{Error, Result};
use crate::words::{enumerate_words, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansiveViolation {
    pub x: f64,
    pub y: f64,
    pub word: Word,
    pub dyn_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansiveReport {
    pub gamma: f64,
    pub delta_star: f64,
    pub lambda: f64,
    pub k: usize,
    pub words_per_pair: usize,
    pub pairs_tested: usize,
    pub pairs_skipped: usize,
    pub violations: usize,
    pub first_violation: Option<ExpansiveViolation>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Smallest `k >= 1` with `lambda^k delta* < gamma`.
fn word_length(lambda: f64, delta_star: f64, gamma: f64) -> Result<usize> {
    if lambda >= 1.0 {
        return Ok(1);
    }
    let mut k = 1;
    let mut v = lambda * delta_star;
    while v >= gamma {
        v *= lambda;
        k += 1;
        if k > 64 {
            return Err(Error::Precondition("gamma too small for a word length below 64".into()));
        }
    }
    Ok(k)
}

/// Check explicit pairs against every word of length `k`; pairs closer than `gamma` are skipped.
pub fn check_pairs(
    s: &SemigroupSpec,
    gamma: f64,
    delta_star: f64,
    k: usize,
    pairs: &[(f64, f64)],
) -> Result<(usize, usize, usize, Option<ExpansiveViolation>)> {
    let words: Vec<Word> = enumerate_words(s.m(), k)?.collect();
    let (mut tested, mut skipped, mut violations) = (0, 0, 0);
    let mut first = None;
    for &(x, y) in pairs {
        if circle_distance(x, y) < gamma {
            skipped += 1;
            continue;
        }
        tested += 1;
        for w in &words {
            let d = dyn_distance(w, s, x, y)?;
            if d <= delta_star {
                violations += 1;
                first.get_or_insert_with(|| ExpansiveViolation {
                    x,
                    y,
                    word: w.clone(),
                    dyn_distance: d,
                });
            }
        }
    }
    Ok((tested, skipped, violations, first))
}

/// The sampled check without the `delta* <= delta0 / 2` precondition.
pub fn expansiveness_scan(
    s: &SemigroupSpec,
    gamma: f64,
    delta_star: f64,
    sample_pairs: usize,
    seed: u64,
) -> Result<ExpansiveReport> {
    if !(gamma > 0.0) || !(delta_star > 0.0) {
        return Err(Error::Precondition("gamma and delta* must be positive".into()));
    }
    let mut notes = Vec::new();
    let lambda = match s.expansion() {
        Some(e) => e.lambda,
        None => {
            let expanding: Vec<u32> = s
                .generators()
                .iter()
                .filter(|g| matches!(g, GeneratorSpec::LinearExpanding { .. }))
                .map(GeneratorSpec::degree)
                .collect();
            notes.push("not every generator expands; k taken from the expanding letters".into());
            expanding.iter().min().map_or(1.0, |&d| 1.0 / d as f64)
        }
    };
    let k = word_length(lambda, delta_star, gamma)?;
    // the pair at distance exactly gamma is the hardest case, so it always goes first
    let mut pairs = vec![(0.0, gamma.min(0.5))];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drawn = 1;
    while drawn < sample_pairs {
        let (x, y): (f64, f64) = (rng.random(), rng.random());
        pairs.push((x, y));
        if circle_distance(x, y) >= gamma {
            drawn += 1;
        }
        if pairs.len() > 1000 * sample_pairs.max(1) {
            break;
        }
    }
    let (pairs_tested, pairs_skipped, violations, first_violation) =
        check_pairs(s, gamma, delta_star, k, &pairs)?;
    Ok(ExpansiveReport {
        gamma,
        delta_star,
        lambda,
        k,
        words_per_pair: s.m().pow(k as u32),
        pairs_tested,
        pairs_skipped,
        violations,
        verdict: if violations == 0 { Verdict::Pass } else { Verdict::Fail },
        first_violation,
        notes,
    })
}

/// Sampled strong-expansiveness check; for linear generators `delta*` must not exceed `delta0 / 2`.
pub fn expansiveness_probe(
    s: &SemigroupSpec,
    gamma: f64,
    delta_star: f64,
    sample_pairs: usize,
    seed: u64,
) -> Result<ExpansiveReport> {
    if let Some(e) = s.expansion() {
        if delta_star > e.delta0 / 2.0 {
            return Err(Error::Precondition(format!(
                "delta* = {delta_star} exceeds delta0/2 = {}",
                e.delta0 / 2.0
            )));
        }
    }
    expansiveness_scan(s, gamma, delta_star, sample_pairs, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s235() -> SemigroupSpec {
        SemigroupSpec::linear(&[2, 3, 5]).unwrap()
    }

    #[test]
    fn word_lengths() {
        assert_eq!(word_length(0.5, 0.25, 0.1).unwrap(), 2);
        assert_eq!(word_length(0.5, 1.0 / 12.0, 0.1).unwrap(), 1);
        assert_eq!(word_length(0.5, 1.0 / 12.0, 0.01).unwrap(), 4);
        assert_eq!(word_length(1.0, 0.1, 0.01).unwrap(), 1);
    }

    #[test]
    fn linear_semigroup_is_expansive_at_admissible_scale() {
        let r = expansiveness_probe(&s235(), 0.1, 1.0 / 12.0, 1000, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.pairs_tested, 1000);
        let r = expansiveness_probe(&s235(), 0.01, 1.0 / 12.0, 300, 3).unwrap();
        assert_eq!((r.k, r.words_per_pair), (4, 81));
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn too_large_delta_is_refused_and_fails_raw() {
        assert!(matches!(expansiveness_probe(&s235(), 0.1, 0.25, 10, 0), Err(Error::Precondition(_))));
        // a pair 1/5 apart collapses under x5
        let r = expansiveness_scan(&s235(), 0.1, 0.25, 1000, 0).unwrap();
        assert_eq!(r.k, 2);
        assert_eq!(r.verdict, Verdict::Fail);
        let (.., v, first) = check_pairs(&s235(), 0.1, 0.25, 2, &[(0.0, 0.2)]).unwrap();
        assert!(v > 0);
        assert_eq!(first.unwrap().word.letters()[0], 2);
    }

    #[test]
    fn close_pairs_are_skipped() {
        let (t, sk, v, _) = check_pairs(&s235(), 0.1, 1.0 / 12.0, 1, &[(0.3, 0.35), (0.0, 0.5)]).unwrap();
        assert_eq!((t, sk, v), (1, 1, 0));
    }

    #[test]
    fn rotation_breaks_expansiveness() {
        let s = SemigroupSpec::parse("lin:2,rot:golden").unwrap();
        let r = expansiveness_probe(&s, 0.05, 0.1, 200, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.first_violation.is_some());
        // rotations are isometries: the pure rotation word never separates
        let rot = Word::repeat(1, r.k);
        assert!((dyn_distance(&rot, &s, 0.0, 0.05).unwrap() - 0.05).abs() < 1e-12);
    }
}
