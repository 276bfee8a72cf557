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

//! The three dataset generators: seeded random states, single-measure
//! families, and states pinned to a fixed `(γ2, θ)` class.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use mermin_bound::bound::bound_from_tensor;
use mermin_bound::correlation::{Axis, CorrelationTensor};
use mermin_bound::optimizer::OptimizerConfig;
use mermin_bound::qstate::{sample_canonical, sample_canonical_with, CanonicalParams, PureState};
use rayon::prelude::*;

use crate::record::{analyze, Analysis};
use crate::{derive_seed, CliError};

const STREAM_STATES: u64 = 0;
const STREAM_OPTIMIZER: u64 = 1;
const STREAM_CANDIDATES: u64 = 2;

/// Candidates drawn per parallel batch in the fixed-class sampler.
pub const BATCH: u64 = 4096;
/// Residual required of a refined fixed-class state in `γ2`.
pub const REFINED_GAMMA2_TOL: f64 = 1e-12;
/// Residual required of a refined fixed-class state in `θ`.
pub const REFINED_THETA_TOL: f64 = 1e-10;
/// Ties in `γ_R` closer than this are not counted as decreases.
pub const MONOTONE_TIE_TOL: f64 = 1e-12;

/// Single-measure state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    E1,
    E2,
    E3,
    Ghz,
}

impl Family {
    /// The two canonical coefficients left on.
    pub fn support(self) -> (usize, usize) {
        match self {
            Family::E1 => (0, 3),
            Family::E2 => (0, 2),
            Family::E3 => (1, 4),
            Family::Ghz => (0, 4),
        }
    }

    /// Parameters at circle angle `t` (cos t on the first coefficient,
    /// sin t on the second; the family's measure is then `sin² 2t`).
    pub fn params(self, t: f64) -> Result<CanonicalParams, CliError> {
        let (a, b) = self.support();
        let mut lambda = [0.0; 5];
        lambda[a] = t.cos();
        lambda[b] = t.sin();
        Ok(CanonicalParams::normalized(lambda, 0.0)?)
    }
}

impl FromStr for Family {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "e1" => Ok(Family::E1),
            "e2" => Ok(Family::E2),
            "e3" => Ok(Family::E3),
            "ghz" => Ok(Family::Ghz),
            _ => Err(CliError::Validation(format!(
                "unknown family '{s}' (expected e1, e2, e3 or ghz)"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::E1 => "e1",
            Family::E2 => "e2",
            Family::E3 => "e3",
            Family::Ghz => "ghz",
        })
    }
}

fn optimizer_for(base: Option<&OptimizerConfig>, seed: u64, index: u64) -> Option<OptimizerConfig> {
    base.map(|c| OptimizerConfig {
        seed: derive_seed(seed, STREAM_OPTIMIZER, index),
        ..*c
    })
}

fn analyze_all(
    items: Vec<(u64, CanonicalParams)>,
    seed: u64,
    optimizer: Option<&OptimizerConfig>,
) -> Result<Vec<Analysis>, CliError> {
    items
        .into_par_iter()
        .map(|(i, p)| analyze(i, &p, optimizer_for(optimizer, seed, i).as_ref()))
        .collect()
}

/// `n` seeded random canonical states, in index order.
pub fn random(
    n: u64,
    seed: u64,
    optimizer: Option<&OptimizerConfig>,
) -> Result<Vec<Analysis>, CliError> {
    if n == 0 {
        return Err(CliError::Validation("--n must be positive".into()));
    }
    let items = (0..n)
        .map(|i| (i, sample_canonical(derive_seed(seed, STREAM_STATES, i))))
        .collect();
    analyze_all(items, seed, optimizer)
}

/// The family's states on a uniform angle grid over `[0, π/4]`, which
/// walks its measure monotonically from 0 to 1.
pub fn family(
    kind: Family,
    grid: u64,
    seed: u64,
    optimizer: Option<&OptimizerConfig>,
) -> Result<Vec<Analysis>, CliError> {
    if grid == 0 {
        return Err(CliError::Validation("--grid must be positive".into()));
    }
    let step = if grid > 1 {
        FRAC_PI_4 / (grid - 1) as f64
    } else {
        0.0
    };
    let items = (0..grid)
        .map(|k| Ok((k, kind.params(k as f64 * step)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    analyze_all(items, seed, optimizer)
}

/// Targets and budget for the fixed-class sampler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedClassConfig {
    pub gamma2: f64,
    pub theta: f64,
    pub tol: f64,
    pub count: u64,
    pub max_attempts: u64,
    /// Polish accepted candidates onto the exact targets.
    pub refine: bool,
}

impl Default for FixedClassConfig {
    fn default() -> Self {
        FixedClassConfig {
            gamma2: -0.0884,
            theta: 0.00238,
            tol: 1e-3,
            count: 100,
            max_attempts: 10_000_000,
            refine: true,
        }
    }
}

impl FixedClassConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0) {
            return Err(CliError::Validation("--tol must be positive".into()));
        }
        if self.count == 0 || self.max_attempts == 0 {
            return Err(CliError::Validation(
                "--count and --max-attempts must be positive".into(),
            ));
        }
        if !self.gamma2.is_finite() || self.gamma2 > 0.0 {
            return Err(CliError::Validation(
                "--gamma2 must be finite and non-positive".into(),
            ));
        }
        if !(0.0..=PI / 3.0).contains(&self.theta) {
            return Err(CliError::Validation("--theta must lie in [0, π/3]".into()));
        }
        Ok(())
    }
}

/// Outcome of a fixed-class run. `rows` are sorted by `−α1`.
#[derive(Debug, Clone)]
pub struct FixedClassOutcome {
    pub rows: Vec<Analysis>,
    pub attempts: u64,
    /// Adjacent pairs (by `−α1`) where `γ_R` decreases beyond the tie tolerance.
    pub gamma_r_decreases: usize,
    /// Adjacent pairs where `γ` strictly decreases.
    pub gamma_decreases: usize,
    /// True when the attempt budget ran out before `count` states were found.
    pub exhausted: bool,
}

/// `(γ2, θ, minimizing axis)` of a state's minimizing flattening.
fn class_of(params: &CanonicalParams) -> Option<(f64, f64, Axis)> {
    let tensor = CorrelationTensor::from_state(&PureState::canonical(params)).ok()?;
    let report = bound_from_tensor(&tensor).ok()?;
    let m = report.minimizing();
    Some((m.coeffs.gamma2, m.roots.theta, m.axis))
}

fn to_params(x: &[f64; 5]) -> Option<CanonicalParams> {
    if x[..4].iter().any(|&l| l < 0.0) || !(0.0..=PI).contains(&x[4]) {
        return None;
    }
    CanonicalParams::normalized([x[0], x[1], x[2], x[3], 0.0], x[4]).ok()
}

/// Gauss–Newton polish of `(λ0..λ3, φ)` (with `λ4 = 0`) onto the exact
/// class targets, using the minimum-norm step on the two residuals
/// `γ2 − target` and `cos 3θ − cos 3·target`. The angle residual is taken
/// through `cos 3θ` because it is smooth where `θ` itself is not (near 0).
pub fn refine(start: &CanonicalParams, gamma2: f64, theta: f64) -> Option<CanonicalParams> {
    const H: f64 = 1e-6;
    const MAX_ITER: usize = 30;
    let l = start.lambda();
    let mut x = [l[0], l[1], l[2], l[3], start.phi()];
    let (_, _, axis) = class_of(start)?;
    let residual = |x: &[f64; 5]| -> Option<[f64; 2]> {
        let p = to_params(x)?;
        let (g, t, a) = class_of(&p)?;
        (a == axis).then_some([g - gamma2, (3.0 * t).cos() - (3.0 * theta).cos()])
    };
    for _ in 0..MAX_ITER {
        let p = to_params(&x)?;
        let (g, t, a) = class_of(&p)?;
        if a != axis {
            return None;
        }
        if (g - gamma2).abs() <= REFINED_GAMMA2_TOL && (t - theta).abs() <= REFINED_THETA_TOL {
            return Some(p);
        }
        let r = residual(&x)?;
        let mut jac = [[0.0; 5]; 2];
        for k in 0..5 {
            let (mut xp, mut xm) = (x, x);
            xp[k] += H;
            xm[k] -= H;
            // One-sided differences at the box edges.
            let (rp, rm, span) = match (residual(&xp), residual(&xm)) {
                (Some(rp), Some(rm)) => (rp, rm, 2.0 * H),
                (Some(rp), None) => (rp, r, H),
                (None, Some(rm)) => (r, rm, H),
                (None, None) => return None,
            };
            for i in 0..2 {
                jac[i][k] = (rp[i] - rm[i]) / span;
            }
        }
        // Δx = −Jᵀ (J Jᵀ)⁻¹ r
        let dot = |a: &[f64; 5], b: &[f64; 5]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
        let (a11, a12, a22) = (
            dot(&jac[0], &jac[0]),
            dot(&jac[0], &jac[1]),
            dot(&jac[1], &jac[1]),
        );
        let det = a11 * a22 - a12 * a12;
        if det.abs() < 1e-300 {
            return None;
        }
        let y0 = (a22 * r[0] - a12 * r[1]) / det;
        let y1 = (a11 * r[1] - a12 * r[0]) / det;
        for k in 0..5 {
            x[k] -= jac[0][k] * y0 + jac[1][k] * y1;
        }
    }
    None
}

/// Rejection-samples `λ4 = 0` states whose minimizing flattening has
/// `(γ2, θ)` within `tol` of the targets, optionally polishing each
/// accepted candidate onto the exact targets, and returns them sorted by
/// `−α1` together with monotonicity diagnostics.
pub fn fixed_class(
    class: &FixedClassConfig,
    seed: u64,
    optimizer: Option<&OptimizerConfig>,
) -> Result<FixedClassOutcome, CliError> {
    class.validate()?;
    let support = [true, true, true, true, false];
    let mut accepted: Vec<(u64, CanonicalParams)> = Vec::new();
    let mut attempts = 0;
    while attempts < class.max_attempts && (accepted.len() as u64) < class.count {
        let end = (attempts + BATCH).min(class.max_attempts);
        let batch: Vec<Option<(u64, CanonicalParams)>> = (attempts..end)
            .into_par_iter()
            .map(|i| {
                let p = sample_canonical_with(derive_seed(seed, STREAM_CANDIDATES, i), support);
                let (g, t, _) = class_of(&p)?;
                if (g - class.gamma2).abs() > class.tol || (t - class.theta).abs() > class.tol {
                    return None;
                }
                if class.refine {
                    refine(&p, class.gamma2, class.theta).map(|q| (i, q))
                } else {
                    Some((i, p))
                }
            })
            .collect();
        for item in batch.into_iter().flatten() {
            if (accepted.len() as u64) < class.count {
                accepted.push(item);
                attempts = item.0 + 1;
            }
        }
        if (accepted.len() as u64) < class.count {
            attempts = end;
        }
    }
    let exhausted = (accepted.len() as u64) < class.count;
    let mut rows = analyze_all(accepted, seed, optimizer)?;
    rows.sort_by(|a, b| a.record.neg_alpha1.total_cmp(&b.record.neg_alpha1));
    let gamma_r_decreases = rows
        .windows(2)
        .filter(|w| w[1].record.gamma_r < w[0].record.gamma_r - MONOTONE_TIE_TOL)
        .count();
    let gamma_decreases = rows
        .windows(2)
        .filter(|w| matches!((w[0].record.gamma, w[1].record.gamma), (Some(a), Some(b)) if b < a))
        .count();
    Ok(FixedClassOutcome {
        rows,
        attempts,
        gamma_r_decreases,
        gamma_decreases,
        exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_endpoints() {
        for kind in [Family::E1, Family::E2, Family::E3, Family::Ghz] {
            let rows = family(kind, 3, 0, None).unwrap();
            let measure = |a: &Analysis| match kind {
                Family::E1 => a.record.e1sq,
                Family::E2 => a.record.e2sq,
                Family::E3 => a.record.e3sq,
                Family::Ghz => a.record.e4sq,
            };
            assert!(measure(&rows[0]).abs() < 1e-12, "{kind}");
            assert!((measure(&rows[1]) - 0.5).abs() < 1e-12, "{kind}");
            assert!((measure(&rows[2]) - 1.0).abs() < 1e-12, "{kind}");
        }
    }

    #[test]
    fn unknown_family_is_usage_error() {
        assert_eq!("e4".parse::<Family>().unwrap_err().exit_code(), 2);
        assert_eq!("ghz".parse::<Family>().unwrap().to_string(), "ghz");
    }

    #[test]
    fn random_is_order_stable() {
        let a = random(8, 5, None).unwrap();
        let b = random(8, 5, None).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.record, y.record);
        }
        assert_eq!(a[3].record.seed_index, 3);
    }

    #[test]
    fn refined_states_hit_targets() {
        let class = FixedClassConfig {
            count: 5,
            ..FixedClassConfig::default()
        };
        let out = fixed_class(&class, 1, None).unwrap();
        assert!(!out.exhausted);
        assert_eq!(out.rows.len(), 5);
        for r in &out.rows {
            let m = r.record.minimizing();
            assert!((m.gamma2 - class.gamma2).abs() <= REFINED_GAMMA2_TOL);
            assert!((m.theta - class.theta).abs() <= REFINED_THETA_TOL);
            assert_eq!(r.record.l4, 0.0);
        }
        assert_eq!(out.gamma_r_decreases, 0);
    }

    #[test]
    fn tiny_budget_is_exhausted() {
        let class = FixedClassConfig {
            max_attempts: 10,
            ..FixedClassConfig::default()
        };
        let out = fixed_class(&class, 1, None).unwrap();
        assert!(out.exhausted);
        assert_eq!(out.attempts, 10);
    }

    #[test]
    fn invalid_spec_rejected() {
        let class = FixedClassConfig {
            tol: 0.0,
            ..FixedClassConfig::default()
        };
        assert_eq!(class.validate().unwrap_err().exit_code(), 2);
    }
}
