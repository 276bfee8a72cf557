// Copyright 2026 The mermin-bound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! One fully analysed state, and the per-row self-checks run on it.

use mermin_bound::bound::{bound_from_tensor, coefficients_from_measures, BoundReport};
use mermin_bound::correlation::{Axis, CorrelationTensor, Vec3};
use mermin_bound::entanglement::{measures, EntanglementMeasures};
use mermin_bound::optimizer::{maximize, OptimizationResult, OptimizerConfig, DOMINANCE_TOL};
use mermin_bound::qstate::{CanonicalParams, PureState};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Residual allowed in `C_T² = 2(e1+e2+e3) + 3e4`.
pub const CKW_TOL: f64 = 1e-9;
/// Spread allowed in `α1` across the three axes.
pub const ALPHA1_SPREAD_TOL: f64 = 1e-10;
/// Agreement required between the Gram and measure routes for `α2`, `α3`.
pub const IDENTITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisSummary {
    pub axis: u8,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub gamma2: f64,
    pub theta: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingsRecord {
    pub a: [Vec3; 3],
    pub a_prime: [Vec3; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerMeta {
    pub restarts: usize,
    pub iterations_used: usize,
    pub converged: bool,
    pub settings: SettingsRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub seed_index: u64,
    pub l0: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub phi: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub e1sq: f64,
    pub e2sq: f64,
    pub e3sq: f64,
    pub e4sq: f64,
    pub i5_raw: f64,
    pub e5: f64,
    pub ct_sq: f64,
    pub neg_alpha1: f64,
    pub axes: Vec<AxisSummary>,
    pub minimizing_axis: u8,
    pub gamma_r: f64,
    pub gamma: Option<f64>,
    pub optimizer: Option<OptimizerMeta>,
}

impl AnalysisRecord {
    pub fn params(&self) -> Result<CanonicalParams, CliError> {
        Ok(CanonicalParams::new(
            [self.l0, self.l1, self.l2, self.l3, self.l4],
            self.phi,
        )?)
    }

    pub fn converged(&self) -> Option<bool> {
        self.optimizer.as_ref().map(|o| o.converged)
    }

    /// The axis attaining `γ_R`.
    pub fn minimizing(&self) -> &AxisSummary {
        &self.axes[self.minimizing_axis as usize - 1]
    }
}

/// A record plus the self-check failures found while building it.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub record: AnalysisRecord,
    pub violations: Vec<String>,
}

fn build(
    index: u64,
    params: &CanonicalParams,
    m: &EntanglementMeasures,
    report: &BoundReport,
    opt: Option<(&OptimizerConfig, OptimizationResult)>,
) -> AnalysisRecord {
    let [l0, l1, l2, l3, l4] = params.lambda();
    let axes = report
        .axes
        .iter()
        .map(|a| AxisSummary {
            axis: a.axis.qubit() as u8,
            alpha1: a.coeffs.alpha1,
            alpha2: a.coeffs.alpha2,
            alpha3: a.coeffs.alpha3,
            gamma2: a.coeffs.gamma2,
            theta: a.roots.theta,
            bound: a.bound,
        })
        .collect();
    let (gamma, optimizer) = match opt {
        Some((cfg, res)) => (
            Some(res.gamma),
            Some(OptimizerMeta {
                restarts: cfg.restarts,
                iterations_used: res.iterations_used,
                converged: res.converged,
                settings: SettingsRecord {
                    a: Axis::ALL.map(|ax| *res.settings.a(ax)),
                    a_prime: Axis::ALL.map(|ax| *res.settings.a_prime(ax)),
                },
            }),
        ),
        None => (None, None),
    };
    AnalysisRecord {
        seed_index: index,
        l0,
        l1,
        l2,
        l3,
        l4,
        phi: params.phi(),
        i1: m.i1,
        i2: m.i2,
        i3: m.i3,
        e1sq: m.e1sq,
        e2sq: m.e2sq,
        e3sq: m.e3sq,
        e4sq: m.e4sq,
        i5_raw: m.i5_raw,
        e5: m.e5,
        ct_sq: m.ct_sq,
        neg_alpha1: -report.axes[0].coeffs.alpha1,
        axes,
        minimizing_axis: report.minimizing_axis.qubit() as u8,
        gamma_r: report.gamma_r,
        gamma,
        optimizer,
    }
}

/// Runs the whole pipeline on one state.
///
/// Errors from the library (invalid input, failed internal cross-checks)
/// abort; failed row-level checks (dominance, CKW, α1 agreement, coefficient
/// identities) are collected in [`Analysis::violations`] so the caller can
/// flag the row.
pub fn analyze(
    index: u64,
    params: &CanonicalParams,
    optimizer: Option<&OptimizerConfig>,
) -> Result<Analysis, CliError> {
    let state = PureState::canonical(params);
    let tensor = CorrelationTensor::from_state(&state)?;
    let report = bound_from_tensor(&tensor)?;
    let m = measures(&state)?;

    let mut violations = Vec::new();
    let ckw = 2.0 * (m.e1sq + m.e2sq + m.e3sq) + 3.0 * m.e4sq;
    if (m.ct_sq - ckw).abs() > CKW_TOL {
        violations.push(format!("CKW residual {:e}", m.ct_sq - ckw));
    }
    let a1: Vec<f64> = report.axes.iter().map(|a| a.coeffs.alpha1).collect();
    let spread =
        a1.iter().cloned().fold(f64::MIN, f64::max) - a1.iter().cloned().fold(f64::MAX, f64::min);
    if spread > ALPHA1_SPREAD_TOL {
        violations.push(format!("alpha1 axis spread {spread:e}"));
    }
    for a in &report.axes {
        let from_m = coefficients_from_measures(&m, a.axis)?;
        let d1 = (from_m.alpha1 - a.coeffs.alpha1).abs();
        let d2 = (from_m.alpha2 - a.coeffs.alpha2).abs();
        let d3 = (from_m.alpha3 - a.coeffs.alpha3).abs();
        if d1 > ALPHA1_SPREAD_TOL || d2 > IDENTITY_TOL || d3 > IDENTITY_TOL {
            violations.push(format!(
                "axis {}: coefficient identity residuals ({d1:e}, {d2:e}, {d3:e})",
                a.axis
            ));
        }
    }

    let opt = match optimizer {
        Some(cfg) => {
            let res = maximize(&tensor, cfg)?;
            if res.gamma > report.gamma_r + DOMINANCE_TOL {
                violations.push(format!(
                    "dominance: gamma {} > gamma_R {}",
                    res.gamma, report.gamma_r
                ));
            }
            Some((cfg, res))
        }
        None => None,
    };

    Ok(Analysis {
        record: build(index, params, &m, &report, opt),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_record() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let p = CanonicalParams::new([h, 0.0, 0.0, 0.0, h], 0.0).unwrap();
        let a = analyze(0, &p, Some(&OptimizerConfig::default())).unwrap();
        assert!(a.violations.is_empty());
        let r = a.record;
        assert!((r.gamma_r - 4.0).abs() < 1e-9);
        assert!((r.e4sq - 1.0).abs() < 1e-12);
        assert!((r.gamma.unwrap() - 4.0).abs() < 1e-6);
        assert_eq!(r.axes.len(), 3);
        assert_eq!(r.minimizing().bound, r.gamma_r);
        assert_eq!(r.params().unwrap(), p);
    }

    #[test]
    fn product_record_without_optimizer() {
        let p = CanonicalParams::new([1.0, 0.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        let r = analyze(3, &p, None).unwrap().record;
        assert_eq!(r.seed_index, 3);
        assert!((r.gamma_r - 2.0).abs() < 1e-9);
        assert!(r.gamma.is_none() && r.converged().is_none());
        for v in [r.e1sq, r.e2sq, r.e3sq, r.e4sq] {
            assert!(v.abs() < 1e-14);
        }
    }
}
