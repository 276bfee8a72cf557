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

//! Numerical maximization of the Mermin expectation over measurement
//! directions.
//!
//! `⟨M⟩` is linear in each party's pair of directions: with the other two
//! parties fixed, `⟨M⟩ = a_p·w + a_p'·w'` for contraction vectors `w`, `w'`,
//! so the best response of party `p` is `(w/|w|, w'/|w'|)`. Cycling best
//! responses (see-saw) never decreases `⟨M⟩`. Restarts from random
//! directions guard against local maxima.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bound::gamma_r;
use crate::correlation::{mermin_expectation, norm, Axis, CorrelationTensor, MerminSettings, Vec3};
use crate::qstate::PureState;
use crate::{Error, Result};

/// Contraction vectors shorter than this leave the incumbent direction in
/// place.
pub const DEGENERATE_NORM: f64 = 1e-12;
/// Slack allowed on `γ ≤ γ_R`.
pub const DOMINANCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Maximum number of full sweeps (parties 1, 2, 3) per restart.
    pub max_iterations: usize,
    /// A sweep improving `⟨M⟩` by less than this ends the restart.
    pub convergence_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iterations: 10_000,
            convergence_tol: 1e-10,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Validation("restarts must be at least 1".to_string()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Validation(
                "max_iterations must be at least 1".to_string(),
            ));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::Validation(format!(
                "convergence_tol must be positive (got {})",
                self.convergence_tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    /// Best `⟨M⟩` found.
    pub gamma: f64,
    pub settings: MerminSettings,
    /// Sweeps used by the restart that produced `gamma`.
    pub iterations_used: usize,
    /// Whether that restart met the convergence tolerance.
    pub converged: bool,
    /// Final value of every restart, in restart order.
    pub per_restart_values: Vec<f64>,
}

fn others(party: Axis) -> (Axis, Axis) {
    match party {
        Axis::First => (Axis::Second, Axis::Third),
        Axis::Second => (Axis::First, Axis::Third),
        Axis::Third => (Axis::First, Axis::Second),
    }
}

fn combine(x: Vec3, y: Vec3, sign: f64) -> Vec3 {
    [x[0] + sign * y[0], x[1] + sign * y[1], x[2] + sign * y[2]]
}

fn unit_or(w: Vec3, fallback: &Vec3) -> Vec3 {
    let n = norm(&w);
    if n < DEGENERATE_NORM {
        *fallback
    } else {
        [w[0] / n, w[1] / n, w[2] / n]
    }
}

/// Replaces `party`'s two directions by the exact maximizers with the other
/// parties held fixed.
pub fn best_response(r: &CorrelationTensor, s: &MerminSettings, party: Axis) -> MerminSettings {
    let (q, t) = others(party);
    let (aq, aq_p, at, at_p) = (s.a(q), s.a_prime(q), s.a(t), s.a_prime(t));
    let w = combine(
        r.contract_except(party, aq, at_p),
        r.contract_except(party, aq_p, at),
        1.0,
    );
    let w_p = combine(
        r.contract_except(party, aq, at),
        r.contract_except(party, aq_p, at_p),
        -1.0,
    );
    let mut next = *s;
    next.set_party(
        party,
        unit_or(w, s.a(party)),
        unit_or(w_p, s.a_prime(party)),
    );
    next
}

fn run(
    r: &CorrelationTensor,
    cfg: &OptimizerConfig,
    start: MerminSettings,
    mut history: Option<&mut Vec<f64>>,
) -> OptimizationResult {
    let mut settings = start;
    let mut value = mermin_expectation(r, &settings);
    if let Some(h) = history.as_deref_mut() {
        h.push(value);
    }
    let mut iterations_used = cfg.max_iterations;
    let mut converged = false;
    for it in 1..=cfg.max_iterations {
        for party in Axis::ALL {
            settings = best_response(r, &settings, party);
        }
        let next = mermin_expectation(r, &settings);
        let improvement = next - value;
        value = next;
        if let Some(h) = history.as_deref_mut() {
            h.push(value);
        }
        if improvement < cfg.convergence_tol {
            iterations_used = it;
            converged = true;
            break;
        }
    }
    OptimizationResult {
        gamma: value,
        settings,
        iterations_used,
        converged,
        per_restart_values: vec![value],
    }
}

/// One see-saw restart from `start`. Hitting `max_iterations` is reported
/// through `converged = false`, not as an error.
pub fn see_saw(
    r: &CorrelationTensor,
    cfg: &OptimizerConfig,
    start: MerminSettings,
) -> OptimizationResult {
    run(r, cfg, start, None)
}

/// [`see_saw`], also returning `⟨M⟩` before the first sweep and after each
/// sweep.
pub fn see_saw_traced(
    r: &CorrelationTensor,
    cfg: &OptimizerConfig,
    start: MerminSettings,
) -> (OptimizationResult, Vec<f64>) {
    let mut history = Vec::new();
    let res = run(r, cfg, start, Some(&mut history));
    (res, history)
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v: Vec3 = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = norm(&v);
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Uniformly random directions for restart `index`. Each restart draws from
/// its own ChaCha stream, so the result does not depend on scheduling.
pub fn random_settings(seed: u64, index: u64) -> MerminSettings {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let unprimed = [
        random_unit(&mut rng),
        random_unit(&mut rng),
        random_unit(&mut rng),
    ];
    let primed = [
        random_unit(&mut rng),
        random_unit(&mut rng),
        random_unit(&mut rng),
    ];
    MerminSettings::new(unprimed, primed).expect("random directions are unit vectors")
}

/// Multi-start see-saw on a correlation tensor. Restarts run in parallel;
/// the best value wins, ties going to the lowest restart index.
pub fn maximize(r: &CorrelationTensor, cfg: &OptimizerConfig) -> Result<OptimizationResult> {
    cfg.validate()?;
    let runs: Vec<OptimizationResult> = (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|i| see_saw(r, cfg, random_settings(cfg.seed, i)))
        .collect();
    let per_restart_values: Vec<f64> = runs.iter().map(|r| r.gamma).collect();
    let best = runs
        .into_iter()
        .reduce(|best, r| if r.gamma > best.gamma { r } else { best })
        .expect("restarts >= 1");
    Ok(OptimizationResult {
        per_restart_values,
        ..best
    })
}

/// `γ = max ⟨M⟩` for a pure state, checked against `γ_R`.
///
/// A result exceeding `γ_R + DOMINANCE_TOL` means one of the two
/// computations is wrong and is reported as [`Error::Consistency`].
pub fn max_violation(state: &PureState, cfg: &OptimizerConfig) -> Result<OptimizationResult> {
    let r = CorrelationTensor::from_state(state)?;
    let res = maximize(&r, cfg)?;
    let bound = gamma_r(state)?.gamma_r;
    if res.gamma > bound + DOMINANCE_TOL {
        return Err(Error::Consistency(format!(
            "optimized gamma {} exceeds gamma_R {bound}",
            res.gamma
        )));
    }
    Ok(res)
}
