use super::generator::GeneratorSpec;
use super::potential::Potential;
use crate::circle::{circle_distance, wrap};
use crate::error::{Error, Result};
use crate::words::Word;
use serde::{Deserialize, Serialize};

/// Uniform expansion data, present when every generator is linear expanding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expansion {
    /// Contraction of the worst inverse branch: `1 / min degree`.
    pub lambda: f64,
    /// Radius on which every word's dynamical ball is an honest arc: `1 / (max degree + 1)`.
    pub delta0: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupSpec {
    generators: Vec<GeneratorSpec>,
    expansion: Option<Expansion>,
}

impl SemigroupSpec {
    pub fn new(generators: Vec<GeneratorSpec>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let expansion = if generators.iter().all(GeneratorSpec::is_linear_expanding) {
            let lo = generators.iter().map(GeneratorSpec::degree).min().unwrap();
            let hi = generators.iter().map(GeneratorSpec::degree).max().unwrap();
            Some(Expansion {
                lambda: 1.0 / lo as f64,
                delta0: 1.0 / (hi as f64 + 1.0),
            })
        } else {
            None
        };
        Ok(SemigroupSpec {
            generators,
            expansion,
        })
    }

    pub fn parse(s: &str) -> Result<Self> {
        SemigroupSpec::new(super::generator::parse_generators(s)?)
    }

    /// Shorthand for the all-linear semigroup with the given degrees.
    pub fn linear(degrees: &[u32]) -> Result<Self> {
        SemigroupSpec::new(
            degrees
                .iter()
                .map(|&d| GeneratorSpec::linear(d))
                .collect::<Result<_>>()?,
        )
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn expansion(&self) -> Option<Expansion> {
        self.expansion
    }

    pub fn all_linear(&self) -> bool {
        self.expansion.is_some()
    }

    pub fn all_affine(&self) -> bool {
        self.generators.iter().all(GeneratorSpec::is_affine)
    }

    pub fn has_rotation(&self) -> bool {
        self.generators
            .iter()
            .any(|g| matches!(g, GeneratorSpec::Rotation { .. }))
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.generators.iter().map(GeneratorSpec::degree).collect()
    }

    pub fn min_degree(&self) -> u32 {
        self.degrees().into_iter().min().unwrap()
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees().into_iter().max().unwrap()
    }

    pub fn degree_sum(&self) -> u64 {
        self.degrees().into_iter().map(u64::from).sum()
    }

    pub fn describe(&self) -> String {
        self.generators
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        w.validate(self.m())
    }

    /// The full word applied to `x`.
    #[inline]
    pub fn apply_word(&self, w: &Word, x: f64) -> f64 {
        w.letters()
            .iter()
            .fold(wrap(x), |y, &l| self.generators[l].apply(y))
    }

    /// Fill `out` with `[x, g_1(x), .., g_n(x)]`. The word is assumed valid.
    #[inline]
    pub fn orbit_into(&self, w: &Word, x: f64, out: &mut Vec<f64>) {
        out.clear();
        let mut y = wrap(x);
        out.push(y);
        for &l in w.letters() {
            y = self.generators[l].apply(y);
            out.push(y);
        }
    }
}

/// `[g_0(x) = x, g_1(x), .., g_n(x)]`, the first letter acting first.
pub fn evaluate_prefixes(w: &Word, s: &SemigroupSpec, x: f64) -> Result<Vec<f64>> {
    s.check_word(w)?;
    let mut out = Vec::with_capacity(w.len() + 1);
    s.orbit_into(w, x, &mut out);
    Ok(out)
}

/// The dynamical metric `d_g(x, y) = max_{0<=j<=n} d(g_j x, g_j y)`.
pub fn dyn_distance(w: &Word, s: &SemigroupSpec, x: f64, y: f64) -> Result<f64> {
    s.check_word(w)?;
    let (mut a, mut b) = (wrap(x), wrap(y));
    let mut best = circle_distance(a, b);
    for &l in w.letters() {
        a = s.generators[l].apply(a);
        b = s.generators[l].apply(b);
        best = best.max(circle_distance(a, b));
    }
    Ok(best)
}

/// Whether two orbits stay within `eps` of each other at every prefix.
#[inline]
pub(crate) fn orbits_within(a: &[f64], b: &[f64], eps: f64) -> bool {
    a.iter().zip(b).all(|(&p, &q)| circle_distance(p, q) <= eps)
}

/// `S_g phi(x) = sum_{i=0}^{n-1} phi(g_i x)`; the endpoint `g_n x` is not included.
pub fn birkhoff_sum(w: &Word, s: &SemigroupSpec, phi: &Potential, x: f64) -> Result<f64> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    s.check_word(w)?;
    Ok(birkhoff_unchecked(w, s, phi, x))
}

#[inline]
pub(crate) fn birkhoff_unchecked(w: &Word, s: &SemigroupSpec, phi: &Potential, x: f64) -> f64 {
    if let Some(c) = phi.as_constant() {
        return c * w.len() as f64;
    }
    let mut y = wrap(x);
    let mut acc = 0.0;
    for &l in w.letters() {
        acc += phi.eval(y);
        y = s.generators[l].apply(y);
    }
    acc
}
