use crate::circle::wrap;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Fractional part of the golden ratio, `(sqrt 5 - 1) / 2`, correctly rounded.
pub const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    LinearExpanding { degree: u32 },
    Rotation { angle: f64 },
    MannevillePomeau { beta: f64 },
}

impl GeneratorSpec {
    pub fn linear(degree: u32) -> Result<Self> {
        if degree < 2 {
            return Err(Error::Parse(format!(
                "linear expanding degree must be at least 2, got {degree}"
            )));
        }
        Ok(GeneratorSpec::LinearExpanding { degree })
    }

    pub fn rotation(angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::Parse("rotation angle must be finite".into()));
        }
        Ok(GeneratorSpec::Rotation { angle: wrap(angle) })
    }

    pub fn manneville_pomeau(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Parse(format!("MP exponent must be positive, got {beta}")));
        }
        Ok(GeneratorSpec::MannevillePomeau { beta })
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            GeneratorSpec::LinearExpanding { degree } => wrap(degree as f64 * x),
            GeneratorSpec::Rotation { angle } => wrap(x + angle),
            GeneratorSpec::MannevillePomeau { beta } => {
                if x <= 0.5 {
                    wrap(x * (1.0 + (2.0 * x).powf(beta)))
                } else {
                    wrap(2.0 * x - 1.0)
                }
            }
        }
    }

    /// Topological degree; rotations have degree 1.
    pub fn degree(&self) -> u32 {
        match *self {
            GeneratorSpec::LinearExpanding { degree } => degree,
            GeneratorSpec::Rotation { .. } => 1,
            GeneratorSpec::MannevillePomeau { .. } => 2,
        }
    }

    pub fn is_affine(&self) -> bool {
        !matches!(self, GeneratorSpec::MannevillePomeau { .. })
    }

    pub fn is_linear_expanding(&self) -> bool {
        matches!(self, GeneratorSpec::LinearExpanding { .. })
    }
}

/// Apply one generator to a point of `[0, 1)`.
#[inline]
pub fn apply_generator(g: &GeneratorSpec, x: f64) -> f64 {
    g.apply(x)
}

fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("golden") {
        return Ok(GOLDEN);
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: f64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
        let q: f64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))?;
        if q == 0.0 {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(p / q);
    }
    s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    /// `lin:<k>`, `rot:<alpha>` (a decimal, `p/q` or `golden`), `mp:<beta>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("generator {s:?} is not of the form kind:value")))?;
        match kind.trim() {
            "lin" => {
                let k: u32 = arg
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad degree in {s:?}")))?;
                GeneratorSpec::linear(k)
            }
            "rot" => GeneratorSpec::rotation(parse_real(arg)?),
            "mp" => GeneratorSpec::manneville_pomeau(parse_real(arg)?),
            other => Err(Error::Parse(format!("unknown generator kind {other:?}"))),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorSpec::LinearExpanding { degree } => write!(f, "lin:{degree}"),
            GeneratorSpec::Rotation { angle } if angle == GOLDEN => write!(f, "rot:golden"),
            GeneratorSpec::Rotation { angle } => write!(f, "rot:{angle}"),
            GeneratorSpec::MannevillePomeau { beta } => write!(f, "mp:{beta}"),
        }
    }
}

/// Parse a comma-separated generator list such as `lin:2,lin:3,rot:golden`.
pub fn parse_generators(s: &str) -> Result<Vec<GeneratorSpec>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_examples() {
        let d = GeneratorSpec::linear(2).unwrap();
        assert!((d.apply(0.7) - 0.4).abs() < 1e-15);
        let r = GeneratorSpec::rotation(0.25).unwrap();
        assert!((r.apply(0.9) - 0.15).abs() < 1e-15);
        let mp = GeneratorSpec::manneville_pomeau(1.0).unwrap();
        assert_eq!(mp.apply(0.25), 0.375);
    }

    #[test]
    fn mp_is_continuous_on_the_circle() {
        let mp = GeneratorSpec::manneville_pomeau(0.7).unwrap();
        let left = mp.apply(0.5 - 1e-12);
        let right = mp.apply(0.5 + 1e-12);
        // left limit is 1 ~ 0, right limit is 0
        assert!(crate::circle::circle_distance(left, 0.0) < 1e-9);
        assert!(crate::circle::circle_distance(right, 0.0) < 1e-9);
        assert_eq!(mp.apply(0.5), 0.0);
        // neutral fixed point
        assert_eq!(mp.apply(0.0), 0.0);
    }

    #[test]
    fn grammar_round_trip() {
        let gens = parse_generators("lin:2, rot:golden, mp:0.5, rot:1/4").unwrap();
        assert_eq!(gens[0], GeneratorSpec::LinearExpanding { degree: 2 });
        assert_eq!(gens[1], GeneratorSpec::Rotation { angle: GOLDEN });
        assert_eq!(gens[3], GeneratorSpec::Rotation { angle: 0.25 });
        for g in &gens {
            assert_eq!(&g.to_string().parse::<GeneratorSpec>().unwrap(), g);
        }
    }

    #[test]
    fn grammar_rejects_bad_input() {
        assert!("lin:1".parse::<GeneratorSpec>().is_err());
        assert!("mp:0".parse::<GeneratorSpec>().is_err());
        assert!("tent:2".parse::<GeneratorSpec>().is_err());
        assert!("lin".parse::<GeneratorSpec>().is_err());
        assert!("rot:1/0".parse::<GeneratorSpec>().is_err());
    }

    #[test]
    fn rotation_angle_is_reduced() {
        assert_eq!(
            GeneratorSpec::rotation(1.25).unwrap(),
            GeneratorSpec::Rotation { angle: 0.25 }
        );
    }

    #[test]
    fn golden_constant() {
        let g = GOLDEN;
        assert!((g * g + g - 1.0).abs() < 1e-15);
    }
}
