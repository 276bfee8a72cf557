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

//! The triple-Pauli correlation tensor, its flattenings, and the Mermin
//! expectation value as a tensor contraction.

use std::fmt;

use num_complex::Complex64;

use crate::qstate::{density_matrix, DensityMatrix, PureState};
use crate::{Error, Result};

/// Largest imaginary residue tolerated in `Tr(ρ σ⊗σ⊗σ)`.
pub const IMAG_TOL: f64 = 1e-10;
/// Slack on `|R_ijk| ≤ 1`.
pub const ENTRY_TOL: f64 = 1e-9;
/// Tolerance on the unit norm of measurement directions.
pub const UNIT_TOL: f64 = 1e-10;

/// A real 3-vector; measurement directions and contraction results.
pub type Vec3 = [f64; 3];

/// Pauli labels, in tensor-axis order `x, y, z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The 2×2 matrix, row-major.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::X => [[o, one], [one, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[one, o], [o, -one]],
        }
    }
}

/// Which qubit's index labels the rows of a flattening.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    First,
    Second,
    Third,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::First, Axis::Second, Axis::Third];

    /// 1-based qubit label.
    pub fn qubit(self) -> usize {
        self as usize + 1
    }
}

impl TryFrom<usize> for Axis {
    type Error = Error;

    fn try_from(q: usize) -> Result<Self> {
        match q {
            1 => Ok(Axis::First),
            2 => Ok(Axis::Second),
            3 => Ok(Axis::Third),
            _ => Err(Error::Usage(format!("axis must be 1, 2 or 3 (got {q})"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.qubit())
    }
}

/// `R[j1][j2][j3] = Tr(ρ σ_{j1} ⊗ σ_{j2} ⊗ σ_{j3})` with `j ∈ {x, y, z}`.
///
/// Identity components are not part of the tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTensor {
    entries: [[[f64; 3]; 3]; 3],
}

impl CorrelationTensor {
    /// Wraps raw entries, rejecting any outside `[-1, 1]` beyond [`ENTRY_TOL`].
    pub fn from_entries(entries: [[[f64; 3]; 3]; 3]) -> Result<Self> {
        for (i, plane) in entries.iter().enumerate() {
            for (j, row) in plane.iter().enumerate() {
                for (k, &v) in row.iter().enumerate() {
                    if !v.is_finite() || v.abs() > 1.0 + ENTRY_TOL {
                        return Err(Error::Numerical(format!(
                            "correlation R[{i}][{j}][{k}] = {v} outside [-1, 1]"
                        )));
                    }
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn zeros() -> Self {
        Self {
            entries: [[[0.0; 3]; 3]; 3],
        }
    }

    /// Shorthand for `correlation_tensor(&density_matrix(state))`.
    pub fn from_state(state: &PureState) -> Result<Self> {
        correlation_tensor(&density_matrix(state))
    }

    pub fn get(&self, j1: Pauli, j2: Pauli, j3: Pauli) -> f64 {
        self.entries[j1.index()][j2.index()][j3.index()]
    }

    pub fn entries(&self) -> &[[[f64; 3]; 3]; 3] {
        &self.entries
    }

    /// `Σ R_ijk²`.
    pub fn sum_of_squares(&self) -> f64 {
        self.entries.iter().flatten().flatten().map(|v| v * v).sum()
    }

    /// Full contraction `Σ u_i v_j w_k R_ijk`.
    pub fn contract(&self, u: &Vec3, v: &Vec3, w: &Vec3) -> f64 {
        let mut acc = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    acc += u[i] * v[j] * w[k] * self.entries[i][j][k];
                }
            }
        }
        acc
    }

    /// Contracts every slot except `free`. `x` and `y` fill the two other
    /// slots in ascending qubit order.
    pub fn contract_except(&self, free: Axis, x: &Vec3, y: &Vec3) -> Vec3 {
        let mut out = [0.0; 3];
        for (f, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for a in 0..3 {
                for b in 0..3 {
                    let r = match free {
                        Axis::First => self.entries[f][a][b],
                        Axis::Second => self.entries[a][f][b],
                        Axis::Third => self.entries[a][b][f],
                    };
                    acc += x[a] * y[b] * r;
                }
            }
            *o = acc;
        }
        out
    }
}

/// Computes all 27 triple-Pauli expectation values of an 8×8 density matrix.
///
/// Fails with [`Error::Consistency`] if a trace has an imaginary part above
/// [`IMAG_TOL`], which can only happen for non-Hermitian input.
pub fn correlation_tensor(rho: &DensityMatrix) -> Result<CorrelationTensor> {
    if rho.num_qubits() != 3 {
        return Err(Error::Usage(format!(
            "correlation tensor needs a 3-qubit density matrix (got {} qubits)",
            rho.num_qubits()
        )));
    }
    let paulis = Pauli::ALL.map(Pauli::matrix);
    let mut entries = [[[0.0; 3]; 3]; 3];
    for (i, si) in paulis.iter().enumerate() {
        for (j, sj) in paulis.iter().enumerate() {
            for (k, sk) in paulis.iter().enumerate() {
                // Tr(ρP) = Σ_{r,c} ρ_rc P_cr; each Pauli product has exactly
                // one nonzero per row, at column r ^ mask.
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..8 {
                    let (r1, r2, r3) = (r >> 2, (r >> 1) & 1, r & 1);
                    for c in 0..8 {
                        let (c1, c2, c3) = (c >> 2, (c >> 1) & 1, c & 1);
                        let p = si[c1][r1] * sj[c2][r2] * sk[c3][r3];
                        if p.re != 0.0 || p.im != 0.0 {
                            acc += rho.get(r, c) * p;
                        }
                    }
                }
                if acc.im.abs() > IMAG_TOL {
                    return Err(Error::Consistency(format!(
                        "Tr(rho s{i} s{j} s{k}) has imaginary part {:e}",
                        acc.im
                    )));
                }
                entries[i][j][k] = acc.re;
            }
        }
    }
    CorrelationTensor::from_entries(entries)
}

/// A 3×9 matricization of the tensor.
///
/// Rows are the `axis` qubit's Pauli label; columns are the remaining pair
/// `(p, q)` in ascending qubit order at index `3p + q` (first remaining qubit
/// varies slowest).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlattenedCorrelation {
    pub axis: Axis,
    pub matrix: [[f64; 9]; 3],
}

pub fn flatten(r: &CorrelationTensor, axis: Axis) -> FlattenedCorrelation {
    let e = &r.entries;
    let mut matrix = [[0.0; 9]; 3];
    for (row, out) in matrix.iter_mut().enumerate() {
        for p in 0..3 {
            for q in 0..3 {
                out[3 * p + q] = match axis {
                    Axis::First => e[row][p][q],
                    Axis::Second => e[p][row][q],
                    Axis::Third => e[p][q][row],
                };
            }
        }
    }
    FlattenedCorrelation { axis, matrix }
}

/// `M = F Fᵀ` for a flattening `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramMatrix {
    pub axis: Axis,
    pub matrix: [[f64; 3]; 3],
}

impl GramMatrix {
    pub fn trace(&self) -> f64 {
        (0..3).map(|i| self.matrix[i][i]).sum()
    }
}

pub fn gram(f: &FlattenedCorrelation) -> GramMatrix {
    let mut matrix = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let v: f64 = (0..9).map(|c| f.matrix[i][c] * f.matrix[j][c]).sum();
            matrix[i][j] = v;
            matrix[j][i] = v;
        }
    }
    GramMatrix {
        axis: f.axis,
        matrix,
    }
}

/// The six unit measurement directions `a1, a2, a3, a1', a2', a3'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MerminSettings {
    unprimed: [Vec3; 3],
    primed: [Vec3; 3],
}

impl MerminSettings {
    /// `unprimed[p]` and `primed[p]` belong to qubit `p + 1`. Every vector
    /// must have unit length within [`UNIT_TOL`].
    pub fn new(unprimed: [Vec3; 3], primed: [Vec3; 3]) -> Result<Self> {
        for (name, set) in [("a", &unprimed), ("a'", &primed)] {
            for (p, v) in set.iter().enumerate() {
                let n = norm(v);
                if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
                    return Err(Error::Validation(format!(
                        "setting {name}{} must be a unit vector (norm {n})",
                        p + 1
                    )));
                }
            }
        }
        Ok(Self { unprimed, primed })
    }

    /// All six directions equal to `v`.
    pub fn uniform(v: Vec3) -> Result<Self> {
        Self::new([v; 3], [v; 3])
    }

    pub fn a(&self, axis: Axis) -> &Vec3 {
        &self.unprimed[axis as usize]
    }

    pub fn a_prime(&self, axis: Axis) -> &Vec3 {
        &self.primed[axis as usize]
    }

    pub(crate) fn set_party(&mut self, axis: Axis, a: Vec3, a_prime: Vec3) {
        self.unprimed[axis as usize] = a;
        self.primed[axis as usize] = a_prime;
    }
}

pub(crate) fn norm(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// The four signed terms of `⟨M⟩`, in the order
/// `A1A2A3'`, `A1A2'A3`, `A1'A2A3`, `-A1'A2'A3'`.
pub fn mermin_terms(r: &CorrelationTensor, s: &MerminSettings) -> [f64; 4] {
    let [a1, a2, a3] = &s.unprimed;
    let [b1, b2, b3] = &s.primed;
    [
        r.contract(a1, a2, b3),
        r.contract(a1, b2, a3),
        r.contract(b1, a2, a3),
        -r.contract(b1, b2, b3),
    ]
}

/// `⟨M⟩ = Tr(ρ M)` evaluated on the correlation tensor.
pub fn mermin_expectation(r: &CorrelationTensor, s: &MerminSettings) -> f64 {
    mermin_terms(r, s).iter().sum()
}
