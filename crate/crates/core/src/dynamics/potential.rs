use crate::circle::wrap;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialKind {
    Constant { c: f64 },
    /// `a cos(2 pi k x)`
    Cosine { amplitude: f64, frequency: u32 },
    /// Values at `j / len`, linearly interpolated and periodic.
    Tabulated { values: Vec<f64> },
}

/// Hölder data `|phi(x) - phi(y)| <= K d(x,y)^alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Holder {
    pub k: f64,
    pub alpha: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    pub kind: PotentialKind,
    pub holder: Option<Holder>,
}

impl Potential {
    pub fn constant(c: f64) -> Self {
        Potential {
            kind: PotentialKind::Constant { c },
            holder: Some(Holder { k: 0.0, alpha: 1.0 }),
        }
    }

    pub fn zero() -> Self {
        Potential::constant(0.0)
    }

    pub fn cosine(amplitude: f64, frequency: u32) -> Self {
        Potential {
            kind: PotentialKind::Cosine {
                amplitude,
                frequency,
            },
            holder: Some(Holder {
                k: TAU * amplitude.abs() * frequency as f64,
                alpha: 1.0,
            }),
        }
    }

    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse("table needs at least one finite value".into()));
        }
        let n = values.len() as f64;
        let k = (0..values.len())
            .map(|i| (values[(i + 1) % values.len()] - values[i]).abs() * n)
            .fold(0.0, f64::max);
        Ok(Potential {
            kind: PotentialKind::Tabulated { values },
            holder: Some(Holder { k, alpha: 1.0 }),
        })
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            PotentialKind::Constant { c } => *c,
            PotentialKind::Cosine {
                amplitude,
                frequency,
            } => amplitude * (TAU * (*frequency as f64) * x).cos(),
            PotentialKind::Tabulated { values } => {
                let n = values.len();
                let s = wrap(x) * n as f64;
                let i = (s.floor() as usize).min(n - 1);
                let frac = s - i as f64;
                values[i] * (1.0 - frac) + values[(i + 1) % n] * frac
            }
        }
    }

    #[inline]
    pub fn as_constant(&self) -> Option<f64> {
        match self.kind {
            PotentialKind::Constant { c } => Some(c),
            _ => None,
        }
    }

    /// `sup |phi|`.
    pub fn sup_norm(&self) -> f64 {
        match &self.kind {
            PotentialKind::Constant { c } => c.abs(),
            PotentialKind::Cosine { amplitude, .. } => amplitude.abs(),
            PotentialKind::Tabulated { values } => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    pub fn holder(&self) -> Result<Holder> {
        self.holder.ok_or(Error::MissingHolder)
    }

    /// Drop the Hölder metadata (for exercising the error path).
    pub fn without_holder(mut self) -> Self {
        self.holder = None;
        self
    }

    /// `phi + c`.
    pub fn shifted(&self, c: f64) -> Self {
        match &self.kind {
            PotentialKind::Constant { c: c0 } => Potential::constant(c0 + c),
            PotentialKind::Tabulated { values } => Potential {
                kind: PotentialKind::Tabulated {
                    values: values.iter().map(|v| v + c).collect(),
                },
                holder: self.holder,
            },
            PotentialKind::Cosine { .. } => Potential {
                kind: PotentialKind::Tabulated {
                    values: (0..4096).map(|j| self.eval(j as f64 / 4096.0) + c).collect(),
                },
                holder: self.holder,
            },
        }
    }

    /// `const:<c>`, `cos:<a>,<k>`, `table:<path>`; `zero` is `const:0`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "zero" || s == "0" {
            return Ok(Potential::zero());
        }
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("potential {s:?} is not of the form kind:value")))?;
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number {t:?} in potential {s:?}")))
        };
        match kind {
            "const" => Ok(Potential::constant(num(arg)?)),
            "cos" => {
                let (a, k) = arg.split_once(',').unwrap_or((arg, "1"));
                let k: u32 = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad frequency in {s:?}")))?;
                Ok(Potential::cosine(num(a)?, k))
            }
            "table" => {
                let text = std::fs::read_to_string(arg.trim())
                    .map_err(|e| Error::Io(format!("{}: {e}", arg.trim())))?;
                let values = text
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(num)
                    .collect::<Result<Vec<_>>>()?;
                Potential::tabulated(values)
            }
            other => Err(Error::Parse(format!("unknown potential kind {other:?}"))),
        }
    }

    /// Short identifier used in reports.
    pub fn id(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PotentialKind::Constant { c } => write!(f, "const:{c}"),
            PotentialKind::Cosine {
                amplitude,
                frequency,
            } => write!(f, "cos:{amplitude},{frequency}"),
            PotentialKind::Tabulated { values } => write!(f, "table[{}]", values.len()),
        }
    }
}
