//! Reading growth rates off finite-`n` partition functions.
//!
//! No limit is taken: at each scale the rate is the least-squares slope of
//! `log Z_n` against `n` over the last few resolved lengths. On the closed-form
//! path the consecutive differences are exact, and the slope is insensitive to
//! the `(1/n) log(1/eps)` offset that biases `log Z_n / n`.

use super::partition::{
    grid_resolves, shared_sets, PartitionFunctionSample, SetOptions, SharedSets,
};
use crate::circle::CircleArc;
use crate::dynamics::{Potential, SemigroupSpec};
use crate::error::{Error, Result};
use crate::separation::{GridSpec, Method, DEFAULT_GRID};
use crate::words::DEFAULT_WORD_CAP;
use serde::{Deserialize, Serialize};

pub const DEFAULT_FIT_K: usize = 3;

pub const ESTIMATOR_NOTE: &str = "rate = least-squares slope of log Z_n against n over the last k resolved lengths at fixed epsilon; final estimate taken at the smallest epsilon";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub epsilons: Vec<f64>,
    pub n_min: usize,
    pub n_max: usize,
    pub method: Method,
    pub grid: usize,
    pub fit_k: usize,
    pub cap: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset: Option<CircleArc>,
}

impl Schedule {
    pub fn new(epsilons: Vec<f64>, n_max: usize, method: Method) -> Self {
        Schedule {
            epsilons,
            n_min: 1,
            n_max,
            method,
            grid: DEFAULT_GRID,
            fit_k: DEFAULT_FIT_K,
            cap: DEFAULT_WORD_CAP,
            subset: None,
        }
    }

    pub fn with_grid(mut self, m: usize) -> Self {
        self.grid = m;
        self
    }

    pub fn with_subset(mut self, arc: Option<CircleArc>) -> Self {
        self.subset = arc.filter(|a| !a.is_whole());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty() {
            return Err(Error::Precondition("schedule has no epsilon values".into()));
        }
        if self.n_min == 0 || self.n_max < self.n_min || self.n_max - self.n_min + 1 < 3 {
            return Err(Error::Precondition(format!(
                "n range {}..={} must contain at least 3 lengths starting from 1 or more",
                self.n_min, self.n_max
            )));
        }
        if self.fit_k < 2 {
            return Err(Error::Precondition("a slope fit needs at least 2 points".into()));
        }
        if let Some(e) = self.epsilons.iter().find(|&&e| !(e > 0.0 && e < 0.5)) {
            return Err(Error::Precondition(format!("epsilon {e} not in (0, 1/2)")));
        }
        Ok(())
    }

    pub fn set_options(&self) -> SetOptions {
        SetOptions {
            method: self.method,
            grid: GridSpec::new(self.grid).with_subset(self.subset),
            cap: self.cap,
        }
    }

    fn sorted_epsilons(&self) -> Vec<f64> {
        let mut e = self.epsilons.clone();
        e.sort_by(|a, b| b.partial_cmp(a).unwrap());
        e.dedup();
        e
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub degenerate: bool,
}

/// Ordinary least squares of `y` on `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> SlopeFit {
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let degenerate = y.iter().all(|&v| v == y[0]);
    let slope = if degenerate || sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let rms = (x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum::<f64>()
        / k)
        .sqrt();
    SlopeFit {
        slope,
        intercept,
        rms_residual: rms,
        degenerate,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateAtScale {
    pub epsilon: f64,
    pub rate: Option<f64>,
    pub ns_used: Vec<usize>,
    pub skipped: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<SlopeFit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedScale {
    pub epsilon: f64,
    pub delta_star: f64,
    pub rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub quantity: String,
    pub potential: String,
    pub samples: Vec<PartitionFunctionSample>,
    pub per_epsilon: Vec<RateAtScale>,
    pub estimate: f64,
    pub estimate_epsilon: f64,
    pub spread: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_scale: Option<FixedScale>,
    pub degenerate: bool,
    pub estimator: String,
    pub diagnostics: Vec<String>,
}

/// `delta* = delta0 / 2` for all-linear semigroups.
pub fn delta_star(s: &SemigroupSpec) -> Option<f64> {
    s.expansion().map(|e| e.delta0 / 2.0)
}

/// Rate estimates from already-computed `(n, logZ, resolved)` triples per scale.
pub(crate) fn assemble(
    quantity: &str,
    potential: String,
    s: &SemigroupSpec,
    schedule: &Schedule,
    samples: Vec<PartitionFunctionSample>,
    mut diagnostics: Vec<String>,
) -> Result<EstimateReport> {
    let mut per_epsilon = Vec::new();
    for eps in schedule.sorted_epsilons() {
        let here: Vec<&PartitionFunctionSample> =
            samples.iter().filter(|p| p.epsilon == eps).collect();
        let skipped: Vec<usize> = here.iter().filter(|p| !p.resolved).map(|p| p.n).collect();
        let good: Vec<&&PartitionFunctionSample> = here.iter().filter(|p| p.resolved).collect();
        let tail = &good[good.len().saturating_sub(schedule.fit_k)..];
        if !skipped.is_empty() {
            diagnostics.push(format!(
                "eps={eps}: lengths {skipped:?} not resolved by the grid and excluded from the fit"
            ));
        }
        let entry = if tail.len() >= 2 {
            let x: Vec<f64> = tail.iter().map(|p| p.n as f64).collect();
            let y: Vec<f64> = tail.iter().map(|p| p.log_z).collect();
            let fit = fit_slope(&x, &y);
            if tail.len() < schedule.fit_k {
                diagnostics.push(format!(
                    "eps={eps}: only {} resolved lengths available for the fit",
                    tail.len()
                ));
            }
            RateAtScale {
                epsilon: eps,
                rate: Some(fit.slope),
                ns_used: tail.iter().map(|p| p.n).collect(),
                skipped,
                fit: Some(fit),
            }
        } else {
            diagnostics.push(format!(
                "eps={eps}: fewer than 2 resolved lengths, no rate at this scale"
            ));
            RateAtScale {
                epsilon: eps,
                rate: None,
                ns_used: tail.iter().map(|p| p.n).collect(),
                skipped,
                fit: None,
            }
        };
        per_epsilon.push(entry);
    }
    let rated: Vec<&RateAtScale> = per_epsilon.iter().filter(|r| r.rate.is_some()).collect();
    let last = rated.last().ok_or_else(|| {
        Error::Precondition("no scale has enough resolved samples to fit a rate".into())
    })?;
    let estimate = last.rate.unwrap();
    let estimate_epsilon = last.epsilon;
    let rates: Vec<f64> = rated.iter().map(|r| r.rate.unwrap()).collect();
    let spread = rates.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - rates.iter().cloned().fold(f64::INFINITY, f64::min);
    let degenerate = rated
        .iter()
        .any(|r| r.fit.as_ref().is_some_and(|f| f.degenerate));
    if degenerate {
        diagnostics.push("degenerate fit: log Z_n constant in n at some scale (slope 0)".into());
    }
    let fixed_scale = delta_star(s).and_then(|ds| {
        rated
            .iter()
            .filter(|r| r.epsilon < ds)
            .max_by(|a, b| a.epsilon.partial_cmp(&b.epsilon).unwrap())
            .map(|r| FixedScale {
                epsilon: r.epsilon,
                delta_star: ds,
                rate: r.rate.unwrap(),
            })
    });
    Ok(EstimateReport {
        quantity: quantity.into(),
        potential,
        samples,
        per_epsilon,
        estimate,
        estimate_epsilon,
        spread,
        fixed_scale,
        degenerate,
        estimator: format!("{ESTIMATOR_NOTE} (k={})", schedule.fit_k),
        diagnostics,
    })
}

/// Shared sets for every `(eps, n)` in the schedule; unresolved affine grid
/// samples are not computed at all.
pub(crate) fn schedule_sets(
    s: &SemigroupSpec,
    phi: &Potential,
    schedule: &Schedule,
) -> Result<Vec<Option<SharedSets>>> {
    schedule.validate()?;
    let opts = schedule.set_options();
    let mut out = Vec::new();
    for eps in schedule.sorted_epsilons() {
        for n in schedule.n_min..=schedule.n_max {
            let skip = schedule.method == Method::Grid
                && grid_resolves(s, n, eps, &opts.grid) == Some(false);
            out.push(if skip {
                None
            } else {
                Some(shared_sets(s, n, eps, phi, &opts)?)
            });
        }
    }
    Ok(out)
}

fn samples_from(
    s: &SemigroupSpec,
    schedule: &Schedule,
    sets: &[Option<SharedSets>],
    phi: &Potential,
    t: f64,
) -> Vec<PartitionFunctionSample> {
    let mut out = Vec::new();
    let mut i = 0;
    for eps in schedule.sorted_epsilons() {
        for n in schedule.n_min..=schedule.n_max {
            out.push(match &sets[i] {
                Some(set) => PartitionFunctionSample {
                    n,
                    epsilon: eps,
                    log_z: set.log_z(t),
                    method: set.method,
                    potential: phi.id(),
                    t,
                    resolved: set.resolved,
                    note: set.note.clone(),
                },
                None => PartitionFunctionSample {
                    n,
                    epsilon: eps,
                    log_z: f64::NAN,
                    method: schedule.method,
                    potential: phi.id(),
                    t,
                    resolved: false,
                    note: Some(format!(
                        "skipped: grid M={} below 2 D_max/eps = {:.0}",
                        schedule.grid,
                        2.0 * super::partition::max_word_expansion(s, n).unwrap_or(0.0) / eps
                    )),
                },
            });
            i += 1;
        }
    }
    out
}

/// Topological pressure of `(G, G_1)` for `phi`.
pub fn estimate_pressure(
    s: &SemigroupSpec,
    phi: &Potential,
    schedule: &Schedule,
) -> Result<EstimateReport> {
    let sets = schedule_sets(s, phi, schedule)?;
    let samples = samples_from(s, schedule, &sets, phi, 1.0);
    let quantity = if phi.as_constant() == Some(0.0) {
        "entropy"
    } else {
        "pressure"
    };
    assemble(quantity, phi.id(), s, schedule, samples, Vec::new())
}

/// Averaged topological entropy: pressure of the zero potential.
pub fn estimate_entropy(s: &SemigroupSpec, schedule: &Schedule) -> Result<EstimateReport> {
    estimate_pressure(s, &Potential::zero(), schedule)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    pub estimate: f64,
    /// `(n, eps, log Z_n(t phi) / n)` for every computed sample.
    pub per_n: Vec<(usize, f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PressureCurve {
    pub potential: String,
    pub sup_norm: f64,
    pub points: Vec<CurvePoint>,
    /// Pairs `(t1, t2, n, eps)` where `|P_n(t1) - P_n(t2)| > |t1 - t2| ||phi||`.
    pub lipschitz_violations: Vec<(f64, f64, usize, f64)>,
    /// `max |log Z_n(phi + c) - log Z_n(phi) - n c|` over samples and the probe shifts.
    pub shift_defect: f64,
    pub reports: Vec<EstimateReport>,
}

/// `t -> P(t phi)` evaluated on one family of separated sets per `(n, eps)`.
pub fn pressure_curve(
    s: &SemigroupSpec,
    phi: &Potential,
    t_values: &[f64],
    schedule: &Schedule,
) -> Result<PressureCurve> {
    phi.holder()?;
    let sets = schedule_sets(s, phi, schedule)?;
    let mut points = Vec::new();
    let mut reports = Vec::new();
    for &t in t_values {
        let samples = samples_from(s, schedule, &sets, phi, t);
        let per_n = samples
            .iter()
            .filter(|p| p.resolved)
            .map(|p| (p.n, p.epsilon, p.log_z / p.n as f64))
            .collect();
        let report = assemble("pressure", phi.id(), s, schedule, samples, Vec::new())?;
        points.push(CurvePoint {
            t,
            estimate: report.estimate,
            per_n,
        });
        reports.push(report);
    }
    let norm = phi.sup_norm();
    let mut lipschitz_violations = Vec::new();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            for (pa, pb) in a.per_n.iter().zip(&b.per_n) {
                let bound = (a.t - b.t).abs() * norm;
                // one ulp-scale allowance for the log-sum-exp rounding
                if (pa.2 - pb.2).abs() > bound + 1e-12 {
                    lipschitz_violations.push((a.t, b.t, pa.0, pa.1));
                }
            }
        }
    }
    let mut shift_defect: f64 = 0.0;
    for set in sets.iter().flatten() {
        for c in [-1.0, 0.5, 1.0, 3.0] {
            let d = set.log_z_shifted(1.0, c) - set.log_z(1.0) - c * set.n as f64;
            shift_defect = shift_defect.max(d.abs());
        }
    }
    Ok(PressureCurve {
        potential: phi.id(),
        sup_norm: norm,
        points,
        lipschitz_violations,
        shift_defect,
        reports,
    })
}
