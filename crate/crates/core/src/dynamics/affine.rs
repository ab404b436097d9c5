use super::generator::GeneratorSpec;
use super::semigroup::SemigroupSpec;
use crate::circle::{wrap, CircleArc};
use crate::error::{Error, Result};
use crate::words::Word;
use serde::{Deserialize, Serialize};

/// `x -> D x + t (mod 1)` for a word of linear and rotation letters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineWordForm {
    pub d: u128,
    pub t: f64,
    /// `D_0 = 1, D_1, .., D_n`.
    pub prefix_d: Vec<u128>,
}

impl AffineWordForm {
    pub fn identity() -> Self {
        AffineWordForm {
            d: 1,
            t: 0.0,
            prefix_d: vec![1],
        }
    }

    pub fn len(&self) -> usize {
        self.prefix_d.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn apply(&self, x: f64) -> f64 {
        wrap(self.d as f64 * x + self.t)
    }

    pub fn d_max(&self) -> u128 {
        *self.prefix_d.iter().max().unwrap()
    }

    /// Largest single-letter degree in the word (1 for the identity and pure rotations).
    pub fn max_letter_degree(&self) -> u128 {
        self.prefix_d
            .windows(2)
            .map(|p| p[1] / p[0])
            .max()
            .unwrap_or(1)
    }

    /// Every prefix expansion is at most the final one.
    pub fn is_pure_expanding(&self) -> bool {
        self.d_max() == self.d
    }

    /// Extend by one letter acting after the current word.
    pub fn push(&mut self, g: &GeneratorSpec) -> Result<()> {
        match *g {
            GeneratorSpec::LinearExpanding { degree } => {
                self.d = self
                    .d
                    .checked_mul(degree as u128)
                    .ok_or(Error::ExpansionOverflow)?;
                self.t = wrap(degree as f64 * self.t);
            }
            GeneratorSpec::Rotation { angle } => self.t = wrap(self.t + angle),
            GeneratorSpec::MannevillePomeau { .. } => {
                return Err(Error::NotAffine {
                    position: self.len() + 1,
                })
            }
        }
        self.prefix_d.push(self.d);
        Ok(())
    }
}

pub fn reduce_affine(w: &Word, s: &SemigroupSpec) -> Result<AffineWordForm> {
    s.check_word(w)?;
    let mut a = AffineWordForm::identity();
    for &l in w.letters() {
        a.push(&s.generators()[l])?;
    }
    Ok(a)
}

/// Largest scale at which the dynamical ball of `a` is the plain arc of radius `eps / D_max`.
///
/// If `|y - x| > eps / D_max`, take the first prefix `j` with `D_j |y - x| > eps`; then
/// `D_j |y - x| <= k eps` for the letter degree `k`, and the circle distance exceeds `eps`
/// provided `1 - k eps > eps`.
pub fn ball_domain_limit(a: &AffineWordForm) -> f64 {
    1.0 / (a.max_letter_degree() as f64 + 1.0)
}

/// `{y : d_g(x, y) <= eps}` for an affine word, as an arc about `x`.
pub fn dyn_ball_interval(a: &AffineWordForm, x: f64, eps: f64) -> Result<CircleArc> {
    let limit = ball_domain_limit(a);
    if !(eps > 0.0 && eps < limit) {
        return Err(Error::ApproximationDomain {
            epsilon: eps,
            limit,
        });
    }
    Ok(CircleArc::new(x, eps / a.d_max() as f64))
}

/// Image of the dynamical ball under the whole word: radius `eps * D / D_max` about `a(x)`.
pub fn dyn_ball_image(a: &AffineWordForm, x: f64, eps: f64) -> Result<CircleArc> {
    dyn_ball_interval(a, x, eps)?;
    Ok(CircleArc::new(
        a.apply(x),
        eps * a.d as f64 / a.d_max() as f64,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::semigroup::dyn_distance;
    use proptest::prelude::*;

    #[test]
    fn reduction_examples() {
        let s = SemigroupSpec::parse("lin:2,lin:3,rot:0.25,mp:1").unwrap();
        let a = reduce_affine(&Word::new(vec![0, 1]), &s).unwrap();
        assert_eq!((a.d, a.t), (6, 0.0));
        assert_eq!(a.prefix_d, vec![1, 2, 6]);
        let a = reduce_affine(&Word::new(vec![0, 2]), &s).unwrap();
        assert_eq!((a.d, a.t), (2, 0.25));
        let a = reduce_affine(&Word::new(vec![2, 0]), &s).unwrap();
        assert_eq!((a.d, a.t), (2, 0.5));
        assert_eq!(
            reduce_affine(&Word::new(vec![0, 3]), &s).unwrap_err(),
            Error::NotAffine { position: 2 }
        );
    }

    #[test]
    fn ball_of_doubling_cubed() {
        let s = SemigroupSpec::parse("lin:2").unwrap();
        let w = Word::repeat(0, 3);
        let a = reduce_affine(&w, &s).unwrap();
        let arc = dyn_ball_interval(&a, 0.5, 0.04).unwrap();
        assert!((arc.center - 0.5).abs() < 1e-15 && (arc.radius - 0.005).abs() < 1e-15);

        // independent oracle: intersect the prefix-preimage constraints on a fine scan
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let steps = 200_000;
        for i in 0..=steps {
            let y = 0.49 + 0.02 * i as f64 / steps as f64;
            if dyn_distance(&w, &s, 0.5, y).unwrap() <= 0.04 {
                lo = lo.min(y);
                hi = hi.max(y);
            }
        }
        assert!((lo - 0.495).abs() < 1e-6 && (hi - 0.505).abs() < 1e-6);

        let img = dyn_ball_image(&a, 0.5, 0.04).unwrap();
        assert!(img.center.abs() < 1e-15 && (img.radius - 0.04).abs() < 1e-15);
        let (l, r) = (a.apply(0.495), a.apply(0.505));
        assert!(crate::circle::circle_distance(l, 0.96) < 1e-12);
        assert!(crate::circle::circle_distance(r, 0.04) < 1e-12);
    }

    #[test]
    fn identity_ball_and_domain() {
        let a = AffineWordForm::identity();
        let arc = dyn_ball_interval(&a, 0.3, 0.1).unwrap();
        assert_eq!((arc.center, arc.radius), (0.3, 0.1));
        let s = SemigroupSpec::parse("lin:5").unwrap();
        let a = reduce_affine(&Word::repeat(0, 2), &s).unwrap();
        assert!(matches!(
            dyn_ball_interval(&a, 0.3, 0.2),
            Err(Error::ApproximationDomain { .. })
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let s = SemigroupSpec::parse("lin:10").unwrap();
        assert!(reduce_affine(&Word::repeat(0, 38), &s).is_ok());
        assert_eq!(
            reduce_affine(&Word::repeat(0, 39), &s).unwrap_err(),
            Error::ExpansionOverflow
        );
    }

    proptest! {
        #[test]
        fn affine_form_matches_direct_evaluation(
            letters in prop::collection::vec(0usize..3, 0..8),
            x in 0.0..1.0f64,
        ) {
            let s = SemigroupSpec::parse("lin:2,lin:3,rot:golden").unwrap();
            let w = Word::new(letters);
            let a = reduce_affine(&w, &s).unwrap();
            prop_assert!(a.prefix_d.windows(2).all(|p| p[0] <= p[1]));
            let direct = s.apply_word(&w, x);
            prop_assert!(crate::circle::circle_distance(direct, a.apply(x)) < 1e-9);
        }

        #[test]
        fn ball_image_is_the_eps_arc(
            letters in prop::collection::vec(0usize..3, 1..7),
            x in 0.0..1.0f64,
            eps in 0.001..0.16f64,
        ) {
            let s = SemigroupSpec::parse("lin:2,lin:3,lin:5").unwrap();
            let w = Word::new(letters);
            let a = reduce_affine(&w, &s).unwrap();
            let arc = dyn_ball_interval(&a, x, eps).unwrap();
            let img = dyn_ball_image(&a, x, eps).unwrap();
            prop_assert!((img.radius - eps).abs() < 1e-12);
            // forward-map both endpoints
            let left = s.apply_word(&w, x - arc.radius);
            let right = s.apply_word(&w, x + arc.radius);
            let c = s.apply_word(&w, x);
            prop_assert!((crate::circle::circle_distance(left, c) - eps).abs() < 1e-9);
            prop_assert!((crate::circle::circle_distance(right, c) - eps).abs() < 1e-9);
            prop_assert!((crate::circle::signed_delta(c, right) - eps).abs() < 1e-9);
        }
    }
}
