//! The free-semigroup word space.
//!
//! Letters are stored 0-based; `Display` prints them 1-based. The letter at
//! position 0 acts first on a point.

use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Default ceiling on `m^n` for a single enumeration.
pub const DEFAULT_WORD_CAP: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Build from 1-based indices, as they appear in configs.
    pub fn from_one_based(letters: &[usize]) -> Result<Self> {
        letters
            .iter()
            .map(|&l| {
                l.checked_sub(1)
                    .ok_or_else(|| Error::Parse("word letters are 1-based".into()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn repeat(letter: usize, n: usize) -> Self {
        Word(vec![letter; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        match self.0.iter().find(|&&l| l >= m) {
            Some(&index) => Err(Error::IndexOutOfRange { index: index + 1, m }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", l + 1)?;
        }
        write!(f, ")")
    }
}

/// `m^n` as an exact integer.
pub fn word_count(m: usize, n: usize) -> BigUint {
    BigUint::from(m).pow(n as u32)
}

fn checked_total(m: usize, n: usize, cap: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::EmptyAlphabet);
    }
    let total = word_count(m, n);
    match total.to_u64() {
        Some(t) if t <= cap => Ok(t),
        _ => Err(Error::EnumerationBudget {
            count: total.to_string(),
            cap,
        }),
    }
}

/// Lexicographic odometer over `{0..m}^n`.
#[derive(Clone, Debug)]
pub struct WordIter {
    m: usize,
    current: Vec<usize>,
    remaining: u64,
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.remaining == 0 {
            return None;
        }
        let out = Word(self.current.clone());
        self.remaining -= 1;
        if self.remaining > 0 {
            for slot in self.current.iter_mut().rev() {
                *slot += 1;
                if *slot < self.m {
                    break;
                }
                *slot = 0;
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

impl ExactSizeIterator for WordIter {}

/// All `m^n` words of length `n`, lexicographically, capped at [`DEFAULT_WORD_CAP`].
pub fn enumerate_words(m: usize, n: usize) -> Result<WordIter> {
    enumerate_words_capped(m, n, DEFAULT_WORD_CAP)
}

pub fn enumerate_words_capped(m: usize, n: usize, cap: u64) -> Result<WordIter> {
    let remaining = checked_total(m, n, cap)?;
    Ok(WordIter {
        m,
        current: vec![0; n],
        remaining,
    })
}

/// The `index`-th word of length `n` in lexicographic order.
pub fn word_at(m: usize, n: usize, mut index: u64) -> Word {
    let mut letters = vec![0; n];
    for slot in letters.iter_mut().rev() {
        *slot = (index % m as u64) as usize;
        index /= m as u64;
    }
    Word(letters)
}

/// Evaluate `f` on every word of length `n` in parallel and return the results
/// in lexicographic order, so downstream reductions are thread-count independent.
pub fn par_map_words<T, F>(m: usize, n: usize, cap: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Word) -> T + Sync + Send,
{
    let total = checked_total(m, n, cap)?;
    const CHUNK: u64 = 256;
    let chunks = total.div_ceil(CHUNK);
    let nested: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let len = CHUNK.min(total - start);
            let mut it = WordIter {
                m,
                current: word_at(m, n, start).0,
                remaining: len,
            };
            let mut out = Vec::with_capacity(len as usize);
            for w in &mut it {
                out.push(f(&w));
            }
            out
        })
        .collect();
    Ok(nested.into_iter().flatten().collect())
}

/// Words of every length `0..=n`, shortest first (breadth-first tree order).
pub fn enumerate_words_up_to(m: usize, n: usize, cap: u64) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for len in 0..=n {
        out.extend(enumerate_words_capped(m, len, cap)?);
    }
    Ok(out)
}

/// `C(a, b)` exactly.
pub fn binomial(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Number of multisets of size `n` over `m` symbols: the number of distinct
/// elements of length `n` in a free commutative semigroup on `m` generators.
pub fn count_distinct_commuting(m: usize, n: usize) -> Result<BigUint> {
    if m == 0 {
        return Err(Error::EmptyAlphabet);
    }
    Ok(binomial((n + m - 1) as u64, (m - 1) as u64))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordCensus {
    pub m: usize,
    pub n: usize,
    pub total: String,
    pub distinct_commuting: Option<String>,
}

impl WordCensus {
    pub fn new(m: usize, n: usize, commuting: bool) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let distinct_commuting = if commuting {
            Some(count_distinct_commuting(m, n)?.to_string())
        } else {
            None
        };
        Ok(WordCensus {
            m,
            n,
            total: word_count(m, n).to_string(),
            distinct_commuting,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_words(3, 2).unwrap().count(), 9);
        let id: Vec<_> = enumerate_words(2, 0).unwrap().collect();
        assert_eq!(id, vec![Word::identity()]);
        let w: Vec<_> = enumerate_words(2, 3).unwrap().collect();
        assert_eq!(w.len(), 8);
        assert_eq!(w[0].to_string(), "(1,1,1)");
        assert_eq!(w[7].to_string(), "(2,2,2)");
    }

    #[test]
    fn budget_and_empty_alphabet() {
        assert_eq!(enumerate_words(0, 2).unwrap_err(), Error::EmptyAlphabet);
        assert!(matches!(
            enumerate_words(10, 9),
            Err(Error::EnumerationBudget { .. })
        ));
        assert!(enumerate_words_capped(2, 4, 15).is_err());
        assert!(enumerate_words_capped(2, 4, 16).is_ok());
    }

    #[test]
    fn commuting_counts() {
        assert_eq!(count_distinct_commuting(3, 5).unwrap(), BigUint::from(21u32));
        assert_eq!(count_distinct_commuting(1, 7).unwrap(), BigUint::from(1u32));
        assert_eq!(count_distinct_commuting(2, 3).unwrap(), BigUint::from(4u32));
        for n in 0..=50u64 {
            let want = (n + 1) * (n + 2) / 2;
            assert_eq!(
                count_distinct_commuting(3, n as usize).unwrap(),
                BigUint::from(want)
            );
        }
    }

    #[test]
    fn census_is_exact_for_large_n() {
        let c = WordCensus::new(3, 100, true).unwrap();
        assert_eq!(c.total, BigUint::from(3u32).pow(100).to_string());
        assert_eq!(c.distinct_commuting.as_deref(), Some("5151"));
    }

    #[test]
    fn parallel_map_preserves_order() {
        let seq: Vec<_> = enumerate_words(3, 7).unwrap().collect();
        let par = par_map_words(3, 7, DEFAULT_WORD_CAP, |w| w.clone()).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn word_at_matches_iteration() {
        for (i, w) in enumerate_words(4, 3).unwrap().enumerate() {
            assert_eq!(word_at(4, 3, i as u64), w);
        }
    }

    proptest! {
        #[test]
        fn enumeration_is_complete_and_distinct(m in 1usize..5, n in 0usize..6) {
            let words: Vec<_> = enumerate_words(m, n).unwrap().collect();
            prop_assert_eq!(words.len(), m.pow(n as u32));
            let set: HashSet<_> = words.iter().cloned().collect();
            prop_assert_eq!(set.len(), words.len());
            for w in &words {
                prop_assert_eq!(w.len(), n);
                prop_assert!(w.validate(m).is_ok());
            }
            for pair in words.windows(2) {
                prop_assert!(pair[0] < pair[1]);
            }
        }

        #[test]
        fn concatenation_closure(m in 1usize..4, a in 0usize..4, b in 0usize..4) {
            let left: Vec<_> = enumerate_words(m, a).unwrap().collect();
            let right: Vec<_> = enumerate_words(m, b).unwrap().collect();
            let glued: HashSet<_> = left
                .iter()
                .flat_map(|u| right.iter().map(move |v| u.then(v)))
                .collect();
            let direct: HashSet<_> = enumerate_words(m, a + b).unwrap().collect();
            prop_assert_eq!(glued, direct);
        }
    }
}
