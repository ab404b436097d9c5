//! Finite refutation of strong specification for `{x -> kx, x -> x + alpha}`.
//!
//! Any point shadowing `x_1` along `f^n` lands, after the `n` expanding steps, in
//! the `eps`-arc about `f^n x_1`. A pure rotation bridge `R^p` moves that arc
//! rigidly. Shadowing `x_2` along `f^n` afterwards (prefixes `1..=n`) needs a
//! point in one of the `k` arcs of radius `eps / k^n` about `x_2 + i/k`. When the
//! rotated arc misses all of them, no shadow exists for that bridge.

use super::{SpecProbeResult, Verdict};
use crate::dynamics::{GeneratorSpec, SemigroupSpec};
use crate::error::{Error, Result};
use crate::exact::{self, angle_enclosure, rat, to_f64, Enclosure, Q};
use crate::words::Word;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FalsifyOptions {
    /// Candidate values of `p(eps)` to refute: `1..=candidates`.
    pub candidates: u64,
    /// Largest bridge length tried.
    pub p_max: u64,
}

impl Default for FalsifyOptions {
    fn default() -> Self {
        FalsifyOptions {
            candidates: 20,
            p_max: 50,
        }
    }
}

/// A bridge `R^p` with `p >= candidate` after which no shadow exists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub candidate: u64,
    pub p: u64,
    pub bridge: Word,
    /// Lower bound on the distance between the rotated arc and the target set.
    pub gap: f64,
}

struct Setup {
    k: u32,
    rotation: usize,
    alpha: Enclosure,
    image_center: Q,
    targets: Vec<Q>,
    reach: Q,
}

fn setup(s: &SemigroupSpec, eps: f64, n: u32, x1: f64, x2: f64) -> Result<Setup> {
    let gens = s.generators();
    let (k, rotation, angle) = match gens {
        [GeneratorSpec::LinearExpanding { degree }, GeneratorSpec::Rotation { angle }] => (*degree, 1, *angle),
        [GeneratorSpec::Rotation { angle }, GeneratorSpec::LinearExpanding { degree }] => (*degree, 0, *angle),
        _ => {
            return Err(Error::Precondition(
                "the refutation needs exactly one linear expanding map and one rotation".into(),
            ))
        }
    };
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::Precondition(format!(
            "epsilon {eps} must lie in (0, 1/4) for the balls to separate"
        )));
    }
    let limit = 1.0 / (k as f64 + 1.0);
    if eps >= limit {
        return Err(Error::ApproximationDomain { epsilon: eps, limit });
    }
    let kn = BigInt::from(k).pow(n);
    if kn <= BigInt::from(4) {
        return Err(Error::Precondition(format!(
            "n = {n} too small: need k^n > 4 so the dynamical balls have radius below eps/4"
        )));
    }
    let e = rat(eps);
    let r = &e / Q::from_integer(kn.clone());
    let (q1, q2) = (rat(x1), rat(x2));
    if exact::circle_dist(&q1, &q2) <= &r * exact::int(2) {
        return Err(Error::Precondition(format!(
            "dynamical balls about {x1} and {x2} overlap at n = {n}; increase n"
        )));
    }
    let image_center = exact::frac(&(&q1 * Q::from_integer(kn)));
    let targets = (0..k)
        .map(|i| exact::frac(&(&q2 + Q::new(BigInt::from(i), BigInt::from(k)))))
        .collect();
    Ok(Setup {
        k,
        rotation,
        alpha: angle_enclosure(angle),
        image_center,
        targets,
        reach: e + r,
    })
}

/// Exact lower bound on the separation after `R^p`.
fn gap(st: &Setup, p: u64) -> Q {
    let pq = Q::from_integer(BigInt::from(p));
    let center = exact::frac(&(&st.image_center + &pq * st.alpha.mid()));
    let slack = &pq * st.alpha.width() / exact::int(2);
    st.targets
        .iter()
        .map(|t| exact::circle_dist(&center, t) - &st.reach - &slack)
        .min()
        .unwrap()
}

/// Refute every candidate `p(eps)` in `1..=opts.candidates`.
pub fn strong_spec_falsify(
    s: &SemigroupSpec,
    eps: f64,
    n: u32,
    x1: f64,
    x2: f64,
    opts: FalsifyOptions,
) -> Result<SpecProbeResult> {
    let st = setup(s, eps, n, x1, x2)?;
    let mut certificates = Vec::new();
    let mut missing = Vec::new();
    for c in 1..=opts.candidates {
        let found = (c..=opts.p_max.max(c)).find_map(|p| {
            let g = gap(&st, p);
            (g > Q::from_integer(BigInt::from(0))).then(|| Certificate {
                candidate: c,
                p,
                bridge: Word::repeat(st.rotation, p as usize),
                gap: to_f64(&g),
            })
        });
        match found {
            Some(cert) => certificates.push(cert),
            None => missing.push(c),
        }
    }
    let mut notes = vec![format!(
        "finite refutation: candidates p(eps) in 1..={} tested with rotation bridges up to length {}; \
         the universal claim is refuted only within this range",
        opts.candidates, opts.p_max
    )];
    notes.push(format!("expanding degree {}, segment words f^{n}", st.k));
    let verdict = if missing.is_empty() {
        Verdict::Pass
    } else {
        notes.push(format!("no certificate for candidates {missing:?}"));
        Verdict::Inconclusive
    };
    Ok(SpecProbeResult {
        kind: "counterexample".into(),
        epsilon: eps,
        p: Some(opts.p_max),
        point: None,
        point_exact: None,
        constraints: Vec::new(),
        certificates,
        verdict,
        notes,
    })
}

/// Recompute a certificate's gap from scratch; true when it is strictly positive.
pub fn verify_certificate(
    s: &SemigroupSpec,
    eps: f64,
    n: u32,
    x1: f64,
    x2: f64,
    cert: &Certificate,
) -> Result<bool> {
    let st = setup(s, eps, n, x1, x2)?;
    Ok(cert.p >= cert.candidate
        && cert.bridge == Word::repeat(st.rotation, cert.p as usize)
        && gap(&st, cert.p) > Q::from_integer(BigInt::from(0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::circle_distance;
    use proptest::prelude::*;

    fn s() -> SemigroupSpec {
        SemigroupSpec::parse("lin:2,rot:golden").unwrap()
    }

    #[test]
    fn golden_rotation_defeats_every_candidate() {
        let r = strong_spec_falsify(&s(), 0.01, 10, 0.0, 0.5, FalsifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.certificates.len(), 20);
        for c in &r.certificates {
            assert!(c.gap > 0.0 && c.p >= c.candidate && c.p <= 50);
            assert!(verify_certificate(&s(), 0.01, 10, 0.0, 0.5, c).unwrap());
        }
    }

    #[test]
    fn certificate_agrees_with_float_orbits() {
        // sample points of the rotated image arc stay clear of every target ball
        let r = strong_spec_falsify(&s(), 0.01, 10, 0.0, 0.5, FalsifyOptions::default()).unwrap();
        let alpha = crate::dynamics::GOLDEN;
        for c in &r.certificates {
            for j in 0..=100 {
                let y = -0.01 + 0.02 * j as f64 / 100.0;
                let z = y + c.p as f64 * alpha;
                for t in [0.5, 0.0] {
                    assert!(circle_distance(z, t) > 0.01 / 1024.0);
                }
            }
        }
    }

    #[test]
    fn rational_rotation() {
        let s = SemigroupSpec::parse("lin:2,rot:1/3").unwrap();
        let r = strong_spec_falsify(&s, 0.01, 10, 0.0, 0.5, FalsifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        // a rotation by 1/2 carries the image onto a target ball at every even p
        let s = SemigroupSpec::parse("lin:2,rot:0.5").unwrap();
        let r = strong_spec_falsify(&s, 0.01, 10, 0.0, 0.0, FalsifyOptions::default());
        assert!(r.is_err());
        let r = strong_spec_falsify(&s, 0.01, 10, 0.0, 0.25, FalsifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let s = SemigroupSpec::parse("lin:2,rot:0").unwrap();
        let r = strong_spec_falsify(&s, 0.01, 10, 0.0, 0.5, FalsifyOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.certificates.is_empty());
    }

    #[test]
    fn preconditions() {
        let o = FalsifyOptions::default();
        assert!(matches!(strong_spec_falsify(&s(), 0.25, 10, 0.0, 0.5, o), Err(Error::Precondition(_))));
        assert!(matches!(strong_spec_falsify(&s(), 0.01, 2, 0.0, 0.5, o), Err(Error::Precondition(_))));
        assert!(matches!(strong_spec_falsify(&s(), 0.01, 10, 0.0, 1e-6, o), Err(Error::Precondition(_))));
        let lin = SemigroupSpec::linear(&[2, 3]).unwrap();
        assert!(strong_spec_falsify(&lin, 0.01, 10, 0.0, 0.5, o).is_err());
        let k5 = SemigroupSpec::parse("lin:5,rot:golden").unwrap();
        assert!(matches!(
            strong_spec_falsify(&k5, 0.2, 10, 0.0, 0.5, o),
            Err(Error::ApproximationDomain { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn every_certificate_has_a_positive_gap(
            x1 in 0.0..1.0f64, x2 in 0.0..1.0f64, eps in 0.001..0.05f64, n in 6u32..14,
        ) {
            let r = strong_spec_falsify(&s(), eps, n, x1, x2, FalsifyOptions { candidates: 5, p_max: 60 });
            if let Ok(r) = r {
                for c in &r.certificates {
                    prop_assert!(c.gap > 0.0);
                    prop_assert!(verify_certificate(&s(), eps, n, x1, x2, c).unwrap());
                }
            }
        }
    }
}
