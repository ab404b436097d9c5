//! Bridge words with too few expanding letters, and hypothesis (H).

use super::Verdict;
use crate::error::{Error, Result};
use crate::periodic::ln_big;
use crate::words::binomial;
use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRow {
    pub p: u64,
    /// Words of length `p` over `{f, R}` with fewer than `K` letters `f`.
    pub bad_count: String,
    /// `bad_count / 2^{gamma p}`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusTable {
    pub m: usize,
    #[serde(rename = "K")]
    pub k: u64,
    pub gamma: f64,
    pub rows: Vec<CensusRow>,
}

/// `sum_{j < K} C(p, j)`, exactly.
pub fn weak_spec_census(m: usize, p: u64, k: u64) -> Result<BigUint> {
    if m != 2 {
        return Err(Error::Unsupported(format!(
            "the census covers the two-letter model only (m = {m})"
        )));
    }
    let mut total = BigUint::zero();
    for j in 0..k.min(p + 1) {
        total += binomial(p, j);
    }
    Ok(total)
}

fn ratio(bad: &BigUint, gamma: f64, p: u64) -> f64 {
    if bad.is_zero() {
        return 0.0;
    }
    (ln_big(bad) - gamma * p as f64 * std::f64::consts::LN_2).exp()
}

pub fn census_table(m: usize, k: u64, gamma: f64, ps: impl IntoIterator<Item = u64>) -> Result<CensusTable> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Precondition(format!("gamma {gamma} must lie in (0, 1)")));
    }
    let rows = ps
        .into_iter()
        .map(|p| {
            let bad = weak_spec_census(m, p, k)?;
            Ok(CensusRow {
                p,
                ratio: ratio(&bad, gamma, p),
                bad_count: bad.to_string(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(CensusTable { m, k, gamma, rows })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub gamma: f64,
    pub verdict: Verdict,
    /// First `p` from which every listed ratio stays below 1.
    pub crossing_p: Option<u64>,
    pub final_ratio: f64,
    pub series: Vec<(u64, f64)>,
    pub reason: String,
}

/// Judge whether `bad_count / 2^{gamma p}` is eventually decreasing below 1 on the table's range.
pub fn hypothesis_h_check(table: &CensusTable) -> HypothesisCheck {
    let series: Vec<(u64, f64)> = table.rows.iter().map(|r| (r.p, r.ratio)).collect();
    let r: Vec<f64> = series.iter().map(|&(_, v)| v).collect();
    let final_ratio = r.last().copied().unwrap_or(f64::NAN);
    let crossing_p = (0..r.len())
        .find(|&i| r[i..].iter().all(|&v| v < 1.0))
        .map(|i| series[i].0);
    let (verdict, reason) = if !r.is_empty() && r.iter().all(|&v| v == 0.0) {
        (Verdict::Pass, "no bad words in range".to_string())
    } else if r.len() < 3 {
        (Verdict::Inconclusive, "range too short to observe a decrease".to_string())
    } else if r[r.len() - 1] > r[r.len() - 2] {
        (Verdict::Fail, "ratio still increasing at the end of the range".to_string())
    } else {
        let tail = &r[r.len() / 2..];
        let decreasing = tail.len() >= 3 && tail.windows(2).all(|w| w[1] <= w[0]);
        match (decreasing, final_ratio < 1.0) {
            (true, true) => (Verdict::Pass, "eventually decreasing with final ratio below 1".to_string()),
            (true, false) => (Verdict::Inconclusive, "decreasing but not yet below 1".to_string()),
            _ => (Verdict::Inconclusive, "not monotone over the last half of the range".to_string()),
        }
    };
    HypothesisCheck {
        gamma: table.gamma,
        verdict,
        crossing_p,
        final_ratio,
        series,
        reason,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn census_examples() {
        assert_eq!(weak_spec_census(2, 10, 3).unwrap(), BigUint::from(56u32));
        assert_eq!(weak_spec_census(2, 4, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(weak_spec_census(2, 40, 3).unwrap(), BigUint::from(821u32));
        assert_eq!(weak_spec_census(2, 5, 0).unwrap(), BigUint::zero());
        assert_eq!(weak_spec_census(2, 3, 10).unwrap(), BigUint::from(8u32));
        assert!(matches!(weak_spec_census(3, 5, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn hypothesis_examples() {
        let t = census_table(2, 3, 0.5, 10..=40).unwrap();
        assert!((t.rows[0].ratio - 1.75).abs() < 1e-12);
        let last = t.rows.last().unwrap();
        assert!((last.ratio - 821.0 / 1048576.0).abs() < 1e-15);
        let h = hypothesis_h_check(&t);
        assert_eq!(h.verdict, Verdict::Pass);
        let c = h.crossing_p.unwrap();
        assert!(c > 10 && c < 40);
        for g in [0.3, 0.9] {
            assert_eq!(hypothesis_h_check(&census_table(2, 3, g, 10..=40).unwrap()).verdict, Verdict::Pass);
        }
        let zero = census_table(2, 0, 0.5, 1..=5).unwrap();
        assert_eq!(hypothesis_h_check(&zero).verdict, Verdict::Pass);
        let short = census_table(2, 3, 0.5, [10]).unwrap();
        assert_eq!(hypothesis_h_check(&short).verdict, Verdict::Inconclusive);
        // still climbing at tiny gamma
        let rising = census_table(2, 3, 0.01, 1..=20).unwrap();
        assert_eq!(hypothesis_h_check(&rising).verdict, Verdict::Fail);
        assert!(census_table(2, 3, 1.0, 1..=3).is_err());
    }

    proptest! {
        #[test]
        fn census_matches_enumeration(p in 0u64..=20, k in 0u64..8) {
            let brute = (0u32..1 << p).filter(|w| (w.count_ones() as u64) < k).count();
            prop_assert_eq!(weak_spec_census(2, p, k).unwrap(), BigUint::from(brute));
        }
    }
}
