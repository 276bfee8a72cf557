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

//! Three-qubit pure states, density matrices and partial traces.
//!
//! Basis convention: the computational basis state `|b1 b2 b3⟩` has index
//! `4·b1 + 2·b2 + b3`, i.e. qubit 1 is the most significant bit. Every other
//! module inherits this ordering.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// Tolerance for normalization, Hermiticity and unit-trace checks.
pub const NORM_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated in a density matrix.
pub const PSD_TOL: f64 = 1e-10;

/// The five canonical amplitudes `λ0..λ4` and the phase `φ`.
///
/// Every 3-qubit pure state is equivalent under local unitaries to
/// `λ0|000⟩ + λ1·e^{iφ}|100⟩ + λ2|101⟩ + λ3|110⟩ + λ4|111⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalParams {
    lambda: [f64; 5],
    phi: f64,
}

impl CanonicalParams {
    /// Validates and wraps the parameters.
    ///
    /// Rejects negative or non-finite amplitudes, `φ ∉ [0, π]`, and
    /// `Σλ² ≠ 1` beyond [`NORM_TOL`]. Inputs are never silently renormalized;
    /// use [`CanonicalParams::normalized`] for that.
    pub fn new(lambda: [f64; 5], phi: f64) -> Result<Self> {
        for (i, &l) in lambda.iter().enumerate() {
            if !l.is_finite() || l < 0.0 {
                return Err(Error::Validation(format!(
                    "lambda{i} must be a finite non-negative number (got {l})"
                )));
            }
        }
        if !phi.is_finite() || !(0.0..=PI).contains(&phi) {
            return Err(Error::Validation(format!(
                "phi must lie in [0, pi] (got {phi})"
            )));
        }
        let norm_sq: f64 = lambda.iter().map(|l| l * l).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!(
                "lambda0^2 + ... + lambda4^2 must equal 1 within {NORM_TOL:e} (got {norm_sq})"
            )));
        }
        Ok(Self { lambda, phi })
    }

    /// Rescales `lambda` to unit norm, then validates as [`CanonicalParams::new`].
    pub fn normalized(lambda: [f64; 5], phi: f64) -> Result<Self> {
        let norm = lambda.iter().map(|l| l * l).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Validation(
                "cannot normalize: all lambdas are zero".to_string(),
            ));
        }
        Self::new(lambda.map(|l| l / norm), phi)
    }

    pub fn lambda(&self) -> [f64; 5] {
        self.lambda
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// A normalized 3-qubit state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    amplitudes: [Complex64; 8],
}

impl PureState {
    /// Wraps raw amplitudes, rejecting vectors whose squared norm is not 1.
    pub fn from_amplitudes(amplitudes: [Complex64; 8]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Validation(format!(
                "state must have unit norm within {NORM_TOL:e} (got squared norm {norm_sq})"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// The canonical-form state for `params`.
    pub fn canonical(params: &CanonicalParams) -> Self {
        let [l0, l1, l2, l3, l4] = params.lambda;
        let zero = Complex64::new(0.0, 0.0);
        let mut amplitudes = [zero; 8];
        amplitudes[0b000] = Complex64::new(l0, 0.0);
        amplitudes[0b100] = Complex64::from_polar(l1, params.phi);
        amplitudes[0b101] = Complex64::new(l2, 0.0);
        amplitudes[0b110] = Complex64::new(l3, 0.0);
        amplitudes[0b111] = Complex64::new(l4, 0.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amplitudes
    }

    /// Amplitude of `|b1 b2 b3⟩`.
    pub fn amplitude(&self, b1: usize, b2: usize, b3: usize) -> Complex64 {
        self.amplitudes[(b1 << 2) | (b2 << 1) | b3]
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        density_matrix(self)
    }
}

/// A density matrix on one, two or three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    qubits: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates a square matrix of dimension 2, 4 or 8 as a density matrix:
    /// Hermitian and unit trace within [`NORM_TOL`], eigenvalues ≥ `-PSD_TOL`.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = entries.nrows();
        let qubits = match (dim, entries.ncols()) {
            (2, 2) => 1,
            (4, 4) => 2,
            (8, 8) => 3,
            (r, c) => {
                return Err(Error::Validation(format!(
                    "density matrix must be 2x2, 4x4 or 8x8 (got {r}x{c})"
                )))
            }
        };
        for r in 0..dim {
            for c in 0..dim {
                if (entries[(r, c)] - entries[(c, r)].conj()).norm() > NORM_TOL {
                    return Err(Error::Validation(format!(
                        "density matrix is not Hermitian at ({r}, {c})"
                    )));
                }
            }
        }
        let trace = entries.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > NORM_TOL {
            return Err(Error::Validation(format!(
                "density matrix trace must be 1 (got {trace})"
            )));
        }
        let rho = Self { qubits, entries };
        let min_eig = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::Validation(format!(
                "density matrix has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(rho)
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_rc|² for Hermitian ρ.
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `Tr ρ³`.
    pub fn cube_trace(&self) -> f64 {
        (&self.entries * &self.entries * &self.entries).trace().re
    }

    /// Spectrum in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// The canonical-form state for `params`.
pub fn canonical_state(params: &CanonicalParams) -> PureState {
    PureState::canonical(params)
}

/// `|ψ⟩⟨ψ|`.
pub fn density_matrix(state: &PureState) -> DensityMatrix {
    let a = &state.amplitudes;
    let entries = DMatrix::from_fn(8, 8, |r, c| a[r] * a[c].conj());
    DensityMatrix { qubits: 3, entries }
}

/// Partial trace keeping the qubits listed in `keep` (1-based labels of
/// `rho`'s own qubits). The kept qubits retain their relative order, so
/// `reduce(ρ, &[1, 3])` is indexed `|b1 b3⟩`.
pub fn reduce(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.qubits;
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::Usage(format!("duplicate qubit in {keep:?}")));
    }
    if let Some(q) = kept.iter().find(|&&q| q == 0 || q > n) {
        return Err(Error::Usage(format!("qubit {q} out of range 1..={n}")));
    }
    if kept.is_empty() || kept.len() == n {
        return Err(Error::Usage(format!(
            "keep must be a non-empty strict subset of the {n} qubits (got {keep:?})"
        )));
    }
    let traced: Vec<usize> = (1..=n).filter(|q| !kept.contains(q)).collect();

    // Scatter the bits of `k` (kept) and `t` (traced) into a full index.
    let embed = |k: usize, t: usize| -> usize {
        let mut idx = 0;
        for (i, &q) in kept.iter().enumerate() {
            let bit = (k >> (kept.len() - 1 - i)) & 1;
            idx |= bit << (n - q);
        }
        for (i, &q) in traced.iter().enumerate() {
            let bit = (t >> (traced.len() - 1 - i)) & 1;
            idx |= bit << (n - q);
        }
        idx
    };

    let dk = 1 << kept.len();
    let dt = 1 << traced.len();
    let entries = DMatrix::from_fn(dk, dk, |r, c| {
        (0..dt)
            .map(|t| rho.entries[(embed(r, t), embed(c, t))])
            .sum()
    });
    Ok(DensityMatrix {
        qubits: kept.len(),
        entries,
    })
}

/// Seed-deterministic random canonical parameters.
///
/// The λ vector is the normalized absolute value of five independent
/// standard Gaussians; φ is uniform on `[0, π]`. This covers the interior of
/// the positive orthant of the unit sphere but is not the measure induced by
/// Haar-random states.
pub fn sample_canonical(seed: u64) -> CanonicalParams {
    sample_canonical_with(seed, [true; 5])
}

/// Like [`sample_canonical`], with `λi` forced to zero where `support[i]` is
/// false. Panics if `support` is all false.
pub fn sample_canonical_with(seed: u64, support: [bool; 5]) -> CanonicalParams {
    assert!(support.iter().any(|&s| s), "support must be non-empty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut lambda = [0.0; 5];
        for (l, &on) in lambda.iter_mut().zip(&support) {
            let g: f64 = rng.sample(StandardNormal);
            if on {
                *l = g.abs();
            }
        }
        let phi = rng.random_range(0.0..=PI);
        let norm = lambda.iter().map(|l| l * l).sum::<f64>().sqrt();
        if norm > 1e-150 {
            let lambda = lambda.map(|l| l / norm);
            return CanonicalParams { lambda, phi };
        }
    }
}
