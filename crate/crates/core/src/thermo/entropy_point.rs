use super::estimate::{estimate_entropy, EstimateReport, Schedule};
use crate::circle::CircleArc;
use crate::dynamics::SemigroupSpec;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyPointReport {
    pub center: f64,
    pub radius: f64,
    pub local: EstimateReport,
    pub global: EstimateReport,
    pub gap: f64,
}

/// Entropy with separated sets seeded only inside `arc(x0, radius)`, against the
/// whole-circle value. A radius of 1/2 or more is the whole circle.
pub fn entropy_point_probe(
    s: &SemigroupSpec,
    x0: f64,
    radius: f64,
    schedule: &Schedule,
) -> Result<EntropyPointReport> {
    if !(radius > 0.0) {
        return Err(Error::Precondition(format!("radius {radius} must be positive")));
    }
    let global = estimate_entropy(s, &schedule.clone().with_subset(None))?;
    let arc = CircleArc::new(x0, radius);
    let local = if arc.is_whole() {
        global.clone()
    } else {
        estimate_entropy(s, &schedule.clone().with_subset(Some(arc)))?
    };
    Ok(EntropyPointReport {
        center: arc.center,
        radius,
        gap: (local.estimate - global.estimate).abs(),
        local,
        global,
    })
}

/// Several probes at once, reusing one global estimate.
pub fn entropy_point_scan(
    s: &SemigroupSpec,
    centers: &[f64],
    radius: f64,
    schedule: &Schedule,
) -> Result<Vec<EntropyPointReport>> {
    if !(radius > 0.0) {
        return Err(Error::Precondition(format!("radius {radius} must be positive")));
    }
    let global = estimate_entropy(s, &schedule.clone().with_subset(None))?;
    centers
        .iter()
        .map(|&x0| {
            let arc = CircleArc::new(x0, radius);
            let local = if arc.is_whole() {
                global.clone()
            } else {
                estimate_entropy(s, &schedule.clone().with_subset(Some(arc)))?
            };
            Ok(EntropyPointReport {
                center: arc.center,
                radius,
                gap: (local.estimate - global.estimate).abs(),
                local,
                global: global.clone(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::Method;

    #[test]
    fn whole_circle_has_zero_gap() {
        let s = SemigroupSpec::linear(&[2, 3]).unwrap();
        let r = entropy_point_probe(&s, 0.3, 0.5, &Schedule::new(vec![1.0 / 32.0], 4, Method::Exact)).unwrap();
        assert_eq!(r.gap, 0.0);
    }

    #[test]
    fn rotation_has_zero_gap() {
        let s = SemigroupSpec::parse("rot:golden").unwrap();
        let sched = Schedule::new(vec![0.05], 4, Method::Grid).with_grid(4096);
        let r = entropy_point_probe(&s, 0.7, 0.1, &sched).unwrap();
        assert_eq!((r.local.estimate, r.global.estimate, r.gap), (0.0, 0.0, 0.0));
    }

    #[test]
    fn local_exact_rate_matches_global() {
        let s = SemigroupSpec::linear(&[2, 3, 5]).unwrap();
        let r = entropy_point_probe(&s, 0.3, 0.05, &Schedule::new(vec![1.0 / 64.0], 6, Method::Exact)).unwrap();
        assert!(r.gap < 0.01, "{}", r.gap);
    }
}
