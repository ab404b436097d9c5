//! Shadow points for finitely many orbit segments joined by bridge words.
//!
//! The construction walks backwards through the affine chain: at each segment the
//! admissible starting points form an open arc, and the nearest branch of the
//! inverse of `bridge o segment` pulls the next arc back inside it.

use super::{uniform_exactness_n, SpecProbeResult, Verdict};
use crate::dynamics::SemigroupSpec;
use crate::error::{Error, Result};
use crate::exact::{self, rat, to_f64, ExactAffine, Q};
use crate::words::Word;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// An orbit segment: the point `x` followed along `word`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub x: f64,
    pub word: Word,
}

/// One displayed inequality `d(g_l(..)(x), g_l(x_j)) < eps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    /// 1-based segment index.
    pub segment: usize,
    /// Prefix length `l` in `1..=n_j`.
    pub prefix: usize,
    pub distance: f64,
    /// Decided exactly in rational arithmetic.
    pub within: bool,
}

/// Starting point of a chain through `targets`, joined by `bridges[j]` after target `j`.
///
/// With `final_radius = Some(r)` the last target is an arc of radius `r` about its
/// point (`0` pins the chain's endpoint exactly); otherwise it is the last
/// segment's own dynamical ball.
pub(crate) fn backward_chain(
    s: &SemigroupSpec,
    targets: &[Segment],
    bridges: &[Word],
    eps: f64,
    final_radius: Option<f64>,
) -> Result<Q> {
    Ok(backward_interval(s, targets, bridges, eps, final_radius)?.0)
}

/// The admissible arc `(center, radius)` of starting points, center reduced mod 1.
fn backward_interval(
    s: &SemigroupSpec,
    targets: &[Segment],
    bridges: &[Word],
    eps: f64,
    final_radius: Option<f64>,
) -> Result<(Q, Q)> {
    let k = targets.len();
    if k == 0 || bridges.len() < k - 1 {
        return Err(Error::Precondition("need one bridge between consecutive segments".into()));
    }
    let e = rat(eps);
    let last = &targets[k - 1];
    let mut center = rat(last.x);
    let mut radius = match final_radius {
        Some(r) => rat(r),
        None => &e / Q::from_integer(ExactAffine::of_word(&last.word, s)?.d),
    };
    for j in (0..k - 1).rev() {
        let seg = ExactAffine::of_word(&targets[j].word, s)?;
        let f = seg.then(&ExactAffine::of_word(&bridges[j], s)?);
        let expand = Q::from_integer(f.d.clone());
        let xj = rat(targets[j].x);
        let p = f.nearest_preimage(&center, &xj);
        let rho = &e / Q::from_integer(seg.d.clone());
        let r = &radius / &expand;
        let lo = (&p - &r).max(&xj - &rho);
        let hi = (&p + &r).min(&xj + &rho);
        let ok = if radius.is_zero() {
            (&p - &xj).abs() < rho
        } else {
            lo < hi
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "segment {} cannot be reached: bridge too short at eps = {eps}",
                j + 1
            )));
        }
        if radius.is_zero() {
            center = p;
        } else {
            center = (&lo + &hi) / exact::int(2);
            radius = (hi - lo) / exact::int(2);
        }
    }
    Ok((exact::frac(&center), radius))
}

/// Every displayed inequality along the concatenation, decided exactly against `eps`.
pub(crate) fn forward_constraints(
    s: &SemigroupSpec,
    segments: &[Segment],
    bridges: &[Word],
    x: &Q,
    eps: f64,
) -> Result<Vec<Constraint>> {
    let e = rat(eps);
    let mut out = Vec::new();
    let mut y = exact::frac(x);
    for (j, seg) in segments.iter().enumerate() {
        let ours = exact::exact_orbit(&seg.word, s, &y)?;
        let theirs = exact::exact_orbit(&seg.word, s, &rat(seg.x))?;
        for l in 1..ours.len() {
            let d = exact::circle_dist(&ours[l], &theirs[l]);
            out.push(Constraint {
                segment: j + 1,
                prefix: l,
                distance: to_f64(&d),
                within: d < e,
            });
        }
        y = ours.last().unwrap().clone();
        if let Some(b) = bridges.get(j) {
            y = ExactAffine::of_word(b, s)?.apply(&y);
        }
    }
    Ok(out)
}

/// `N(eps)`, after checking every bridge maps each `eps`-ball onto the circle.
///
/// Any bridge of length at least `N(eps)` does; a shorter one is accepted only
/// when its own expansion already covers (`D_h * 2 eps >= 1`).
pub(crate) fn check_bridges(s: &SemigroupSpec, bridges: &[Word], eps: f64) -> Result<u32> {
    let need = uniform_exactness_n(s, eps)?;
    let two_eps = rat(2.0 * eps);
    for b in bridges {
        if b.len() >= need as usize {
            continue;
        }
        let d = Q::from_integer(ExactAffine::of_word(b, s)?.d);
        if d * &two_eps < Q::from_integer(1.into()) {
            return Err(Error::Precondition(format!(
                "bridge {b} shorter than N(eps) = {need} and not onto on eps-balls"
            )));
        }
    }
    Ok(need)
}

/// Shadow `segments` through `bridges` (one fewer than the segments).
pub fn strong_spec_witness(
    s: &SemigroupSpec,
    segments: &[Segment],
    bridges: &[Word],
    eps: f64,
) -> Result<SpecProbeResult> {
    if !s.all_linear() {
        return Err(Error::Precondition(
            "the witness construction needs linear expanding generators".into(),
        ));
    }
    if segments.is_empty() || bridges.len() + 1 != segments.len() {
        return Err(Error::Precondition(format!(
            "{} segments need {} bridges, got {}",
            segments.len(),
            segments.len().saturating_sub(1),
            bridges.len()
        )));
    }
    if !(eps > 0.0 && eps <= 0.5) {
        return Err(Error::Precondition(format!("epsilon {eps} not in (0, 1/2]")));
    }
    let need = check_bridges(s, bridges, eps)?;
    for seg in segments {
        seg.word.validate(s.m())?;
    }
    for b in bridges {
        b.validate(s.m())?;
    }
    let (center, radius) = backward_interval(s, segments, bridges, eps, None)?;
    // report a float when one lies strictly inside the arc, else the exact center
    let rounded = rat(to_f64(&center));
    let x = if (&rounded - &center).abs() < radius {
        rounded
    } else {
        center
    };
    let constraints = forward_constraints(s, segments, bridges, &x, eps)?;
    if !constraints.iter().all(|c| c.within) {
        return Err(Error::VerificationFailed(format!(
            "witness {} misses a prefix constraint",
            to_f64(&x)
        )));
    }
    Ok(SpecProbeResult::witness(eps, need as u64, &x, constraints))
}

/// Re-run the forward check on a reported witness point.
pub fn reverify_witness(
    s: &SemigroupSpec,
    segments: &[Segment],
    bridges: &[Word],
    point: &Q,
    eps: f64,
) -> Result<bool> {
    Ok(forward_constraints(s, segments, bridges, point, eps)?
        .iter()
        .all(|c| c.within))
}

impl SpecProbeResult {
    fn witness(eps: f64, p: u64, point: &Q, constraints: Vec<Constraint>) -> Self {
        SpecProbeResult {
            kind: "witness".into(),
            epsilon: eps,
            p: Some(p),
            point: Some(to_f64(point)),
            point_exact: Some(point.to_string()),
            constraints,
            certificates: Vec::new(),
            verdict: Verdict::Pass,
            notes: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(x: f64, letters: Vec<usize>) -> Segment {
        Segment {
            x,
            word: Word::new(letters),
        }
    }

    #[test]
    fn single_segment_is_its_own_witness() {
        let s = SemigroupSpec::linear(&[2, 3]).unwrap();
        let r = strong_spec_witness(&s, &[seg(0.37, vec![0, 1, 1])], &[], 0.05).unwrap();
        assert_eq!(r.point, Some(0.37));
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn two_segments_over_doubling_bridges() {
        let s = SemigroupSpec::linear(&[2, 3]).unwrap();
        let segs = [seg(0.2, vec![1]), seg(0.7, vec![0])];
        let r = strong_spec_witness(&s, &segs, &[Word::repeat(0, 4)], 0.05).unwrap();
        assert!(r.constraints.iter().all(|c| c.within && c.distance < 0.05));
        assert!(reverify_witness(&s, &segs, &[Word::repeat(0, 4)], &r.exact_point().unwrap(), 0.05).unwrap());
        // floating-point forward evaluation agrees
        let x = r.point.unwrap();
        let y = s.apply_word(&Word::new(vec![1]), x);
        assert!(crate::circle::circle_distance(y, s.apply_word(&Word::new(vec![1]), 0.2)) < 0.05);
        let z = s.apply_word(&Word::new(vec![1, 0, 0, 0, 0, 0]), x);
        assert!(crate::circle::circle_distance(z, 0.4) < 0.05);
    }

    #[test]
    fn three_segments_with_quintupling_bridges() {
        let s = SemigroupSpec::linear(&[2, 3, 5]).unwrap();
        let segs = [seg(0.1, vec![0, 1]), seg(0.55, vec![2, 2, 0]), seg(0.9, vec![1])];
        let bridges = [Word::repeat(2, 2), Word::repeat(2, 2)];
        let r = strong_spec_witness(&s, &segs, &bridges, 0.1).unwrap();
        assert_eq!(r.p, Some(3));
        assert_eq!(r.constraints.len(), 6);
        assert!(r.constraints.iter().all(|c| c.within));
    }

    #[test]
    fn deep_chains_keep_an_exact_point() {
        // the admissible arc is far below float resolution
        let s = SemigroupSpec::linear(&[5]).unwrap();
        let segs = [seg(0.3, vec![0; 12]), seg(0.6, vec![0; 12])];
        let r = strong_spec_witness(&s, &segs, &[Word::repeat(0, 2)], 0.05).unwrap();
        let x = r.exact_point().unwrap();
        assert!(reverify_witness(&s, &segs, &[Word::repeat(0, 2)], &x, 0.05).unwrap());
    }

    #[test]
    fn boundary_case_stays_strict() {
        // 5 * 2 * 0.1 = 1 exactly: bridges of length N(eps) = 1 sit on the edge
        let s = SemigroupSpec::linear(&[5]).unwrap();
        let segs = [seg(0.0, vec![0]), seg(0.5, vec![0])];
        let r = strong_spec_witness(&s, &segs, &[Word::repeat(0, 1)], 0.1).unwrap();
        assert!(r.constraints.iter().all(|c| c.within));
    }

    #[test]
    fn short_bridge_is_a_precondition_error() {
        let s = SemigroupSpec::linear(&[2]).unwrap();
        let segs = [seg(0.2, vec![0]), seg(0.7, vec![0])];
        assert!(matches!(
            strong_spec_witness(&s, &segs, &[Word::repeat(0, 3)], 0.05),
            Err(Error::Precondition(_))
        ));
    }
}
