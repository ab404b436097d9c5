//! Constructive probes of orbital specification: witnesses, finite refutations,
//! the density census behind the weak form, and expansiveness scans.

pub mod census;
pub mod expansive;
pub mod falsify;
pub mod witness;

pub use census::{census_table, hypothesis_h_check, weak_spec_census, CensusRow, CensusTable, HypothesisCheck};
pub use expansive::{expansiveness_probe, expansiveness_scan, ExpansiveReport, ExpansiveViolation};
pub use falsify::{strong_spec_falsify, verify_certificate, Certificate, FalsifyOptions};
pub use witness::{reverify_witness, strong_spec_witness, Constraint, Segment};

use crate::dynamics::SemigroupSpec;
use crate::error::{Error, Result};
use crate::exact::{exactness_depth, rat, to_f64, Q};
use crate::words::Word;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Common shape of witness and refutation results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecProbeResult {
    pub kind: String,
    pub epsilon: f64,
    /// Bridge length used (witnesses) or the largest bridge length searched (refutations).
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<f64>,
    /// The witness as an exact rational `p/q`; `point` is its nearest float.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_exact: Option<String>,
    pub constraints: Vec<Constraint>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Certificate>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SpecProbeResult {
    pub fn exact_point(&self) -> Option<Q> {
        self.point_exact.as_deref().and_then(|p| p.parse().ok())
    }
}

/// `N(eps)`: the least `N` such that every word of length `N` maps every
/// `eps`-ball onto the circle. For linear generators the worst word repeats the
/// smallest degree, so `N` is the least `N` with `k_min^N * 2 eps >= 1`.
pub fn uniform_exactness_n(s: &SemigroupSpec, eps: f64) -> Result<u32> {
    if !s.all_linear() {
        return Err(Error::Precondition(
            "uniform exactness needs linear expanding generators".into(),
        ));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Precondition(format!("epsilon {eps} must be positive")));
    }
    Ok(exactness_depth(s.min_degree(), &(rat(eps) * rat(2.0))))
}

/// A word of length `N(eps) - 1` whose image of an `eps`-ball is a proper arc.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NotOnto {
    pub word: Word,
    pub image_length: f64,
}

/// Shows `N(eps)` cannot be lowered; `None` when `N(eps) = 0`.
pub fn exactness_counterexample(s: &SemigroupSpec, eps: f64) -> Result<Option<NotOnto>> {
    let n = uniform_exactness_n(s, eps)?;
    if n == 0 {
        return Ok(None);
    }
    let k = s.min_degree();
    let letter = s.degrees().iter().position(|&d| d == k).unwrap();
    let len: Q = Q::from_integer(BigInt::from(k).pow(n - 1)) * rat(2.0 * eps);
    debug_assert!(len < Q::from_integer(BigInt::from(1)));
    Ok(Some(NotOnto {
        word: Word::repeat(letter, n as usize - 1),
        image_length: to_f64(&len),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exactness_examples() {
        let s = SemigroupSpec::linear(&[2, 3, 5]).unwrap();
        assert_eq!(uniform_exactness_n(&s, 1.0 / 64.0).unwrap(), 5);
        assert_eq!(uniform_exactness_n(&s, 0.05).unwrap(), 4);
        assert_eq!(uniform_exactness_n(&s, 0.5).unwrap(), 0);
        let s5 = SemigroupSpec::linear(&[5]).unwrap();
        assert_eq!(uniform_exactness_n(&s5, 0.1).unwrap(), 1);
        assert!(uniform_exactness_n(&SemigroupSpec::parse("lin:2,rot:golden").unwrap(), 0.1).is_err());
        let c = exactness_counterexample(&s, 1.0 / 64.0).unwrap().unwrap();
        assert_eq!(c.word, Word::repeat(0, 4));
        assert_eq!(c.image_length, 0.5);
    }

    proptest! {
        #[test]
        fn exactness_depth_is_minimal(k in 2u32..7, eps in 1e-4..0.5f64) {
            let s = SemigroupSpec::linear(&[k, k + 1]).unwrap();
            let n = uniform_exactness_n(&s, eps).unwrap();
            let reach = |j: u32| (k as f64).powi(j as i32) * 2.0 * eps;
            prop_assert!(reach(n) >= 1.0 - 1e-12);
            if n > 0 {
                prop_assert!(reach(n - 1) < 1.0 + 1e-12);
                let c = exactness_counterexample(&s, eps).unwrap().unwrap();
                prop_assert!(c.image_length < 1.0);
                prop_assert_eq!(c.word.len() as u32, n - 1);
            }
        }
    }
}
