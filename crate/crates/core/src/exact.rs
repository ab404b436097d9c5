//! Exact rational arithmetic on the circle.
//!
//! Every `f64` is a dyadic rational, so inputs convert without loss and all
//! certificate checks below are decided exactly.

use crate::dynamics::{GeneratorSpec, SemigroupSpec, GOLDEN};
use crate::error::{Error, Result};
use crate::words::Word;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn rat(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `q - floor(q)`, in `[0, 1)`.
pub fn frac(q: &Q) -> Q {
    q - q.floor()
}

/// Arc-length distance between two rationals on `R/Z`.
pub fn circle_dist(a: &Q, b: &Q) -> Q {
    let r = frac(&(a - b));
    let s = Q::one() - &r;
    if r < s {
        r
    } else {
        s
    }
}

/// Nearest integer, ties rounded down.
pub fn nearest_int(q: &Q) -> BigInt {
    let half = Q::new(BigInt::one(), BigInt::from(2));
    (q - half).ceil().to_integer()
}

/// `x -> d x + t (mod 1)` with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactAffine {
    pub d: BigInt,
    pub t: Q,
}

impl ExactAffine {
    pub fn identity() -> Self {
        ExactAffine {
            d: BigInt::one(),
            t: Q::zero(),
        }
    }

    pub fn of_word(w: &Word, s: &SemigroupSpec) -> Result<Self> {
        s.check_word(w)?;
        let mut a = ExactAffine::identity();
        for (i, &l) in w.letters().iter().enumerate() {
            a = a.then_generator(&s.generators()[l], i)?;
        }
        Ok(a)
    }

    fn then_generator(self, g: &GeneratorSpec, position: usize) -> Result<Self> {
        Ok(match *g {
            GeneratorSpec::LinearExpanding { degree } => {
                let k = BigInt::from(degree);
                ExactAffine {
                    t: frac(&(&self.t * Q::from_integer(k.clone()))),
                    d: self.d * k,
                }
            }
            GeneratorSpec::Rotation { angle } => ExactAffine {
                d: self.d,
                t: frac(&(self.t + rat(angle))),
            },
            GeneratorSpec::MannevillePomeau { .. } => {
                return Err(Error::NotAffine {
                    position: position + 1,
                })
            }
        })
    }

    /// `other` after `self`.
    pub fn then(&self, other: &ExactAffine) -> ExactAffine {
        ExactAffine {
            d: &self.d * &other.d,
            t: frac(&(&self.t * Q::from_integer(other.d.clone()) + &other.t)),
        }
    }

    pub fn apply(&self, x: &Q) -> Q {
        frac(&(x * Q::from_integer(self.d.clone()) + &self.t))
    }

    /// The preimage of `y` closest to `near`.
    pub fn nearest_preimage(&self, y: &Q, near: &Q) -> Q {
        let d = Q::from_integer(self.d.clone());
        // preimages are (y - t + j) / d
        let j = nearest_int(&(near * &d + &self.t - y));
        (y - &self.t + Q::from_integer(j)) / d
    }
}

/// Exact orbit `[x, g_1 x, .., g_n x]` for an affine word.
pub fn exact_orbit(w: &Word, s: &SemigroupSpec, x: &Q) -> Result<Vec<Q>> {
    s.check_word(w)?;
    let mut out = Vec::with_capacity(w.len() + 1);
    let mut y = frac(x);
    out.push(y.clone());
    for (i, &l) in w.letters().iter().enumerate() {
        let step = ExactAffine::identity().then_generator(&s.generators()[l], i)?;
        y = step.apply(&y);
        out.push(y.clone());
    }
    Ok(out)
}

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: Q,
    pub hi: Q,
}

impl Enclosure {
    pub fn point(x: &Q) -> Self {
        Enclosure {
            lo: x.clone(),
            hi: x.clone(),
        }
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

fn next_down(x: f64) -> f64 {
    f64::from_bits(x.to_bits() - 1)
}

/// A proven enclosure of `(sqrt 5 - 1) / 2`: the root of `x^2 + x - 1` changes sign on it.
pub fn golden_enclosure() -> Enclosure {
    let lo = rat(next_down(GOLDEN));
    let hi = rat(next_up(GOLDEN));
    let p = |x: &Q| x * x + x - Q::one();
    assert!(p(&lo).is_negative() && p(&hi).is_positive());
    Enclosure { lo, hi }
}

/// Enclosure of a rotation angle: the golden constant is taken as the irrational it
/// approximates, every other angle as the dyadic rational it is.
pub fn angle_enclosure(angle: f64) -> Enclosure {
    if angle == GOLDEN {
        golden_enclosure()
    } else {
        Enclosure::point(&rat(angle))
    }
}

/// Smallest `n` with `base^n * q >= 1` for a positive rational `q` and `base >= 2`.
pub fn exactness_depth(base: u32, q: &Q) -> u32 {
    let mut n = 0;
    let mut v = q.clone();
    let b = Q::from_integer(BigInt::from(base));
    while v < Q::one() {
        v *= &b;
        n += 1;
    }
    n
}

pub fn abs(q: &Q) -> Q {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{dyn_ball_interval, reduce_affine};
    use proptest::prelude::*;

    #[test]
    fn rational_basics() {
        assert_eq!(frac(&rat(-0.25)), rat(0.75));
        assert_eq!(circle_dist(&rat(0.125), &rat(0.875)), rat(0.25));
        assert_eq!(nearest_int(&rat(2.5)), BigInt::from(2));
        assert_eq!(nearest_int(&rat(-0.75)), BigInt::from(-1));
    }

    #[test]
    fn golden_enclosure_brackets_the_root() {
        let e = golden_enclosure();
        assert!(e.lo < rat(GOLDEN) && rat(GOLDEN) < e.hi);
        assert!(to_f64(&e.width()) < 1e-15);
    }

    #[test]
    fn exactness_depth_examples() {
        // 2^3 * 0.2 >= 1 > 2^2 * 0.2
        assert_eq!(exactness_depth(2, &(rat(0.1) * int(2))), 3);
        assert_eq!(exactness_depth(5, &(rat(0.1) * int(2))), 1);
        assert_eq!(exactness_depth(3, &int(1)), 0);
    }

    #[test]
    fn exact_composition() {
        let s = SemigroupSpec::parse("lin:2,rot:1/4,lin:3").unwrap();
        let u = Word::new(vec![0, 1]);
        let v = Word::new(vec![2, 1]);
        let a = ExactAffine::of_word(&u, &s).unwrap();
        let b = ExactAffine::of_word(&v, &s).unwrap();
        assert_eq!(a.then(&b), ExactAffine::of_word(&u.then(&v), &s).unwrap());
        let x = rat(0.3);
        let y = ExactAffine::of_word(&u.then(&v), &s).unwrap().apply(&x);
        assert_eq!(exact_orbit(&u.then(&v), &s, &x).unwrap().last().unwrap(), &y);
    }

    proptest! {
        #[test]
        fn nearest_preimage_is_a_preimage(d in 2u32..50, t in 0.0..1.0f64, y in 0.0..1.0f64, near in 0.0..1.0f64) {
            let a = ExactAffine { d: BigInt::from(d), t: rat(t) };
            let p = a.nearest_preimage(&rat(y), &rat(near));
            prop_assert_eq!(a.apply(&p), rat(y));
            prop_assert!((&p - rat(near)).abs() <= Q::new(BigInt::one(), BigInt::from(2 * d)));
        }

        /// The forward image of the dynamical ball is endpoint-exact.
        #[test]
        fn ball_image_endpoints_exact(
            letters in prop::collection::vec(0usize..3, 1..9),
            x in 0.0..1.0f64,
            eps_inv in 7u32..1000,
        ) {
            let s = SemigroupSpec::parse("lin:2,lin:3,lin:5").unwrap();
            let w = Word::new(letters);
            let eps = 1.0 / eps_inv as f64;
            let af = reduce_affine(&w, &s).unwrap();
            let arc = dyn_ball_interval(&af, x, eps).unwrap();
            let a = ExactAffine::of_word(&w, &s).unwrap();
            let r = rat(eps) / Q::from_integer(a.d.clone());
            let c = a.apply(&rat(x));
            let left = a.apply(&(rat(x) - &r));
            let right = a.apply(&(rat(x) + &r));
            prop_assert_eq!(frac(&(&c - rat(eps))), left);
            prop_assert_eq!(frac(&(&c + rat(eps))), right);
            prop_assert!((to_f64(&r) - arc.radius).abs() < 1e-12);
        }
    }
}
