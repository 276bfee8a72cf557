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

//! The analytical upper bound `γ_R` on the maximal Mermin expectation.
//!
//! For each flattening axis `j` the Gram matrix `M = R Rᵀ` has the
//! characteristic polynomial `x³ + α1 x² + α2 x + α3`. With
//!
//! ```text
//! γ1 = −α1³/27 − α3/2 + α1 α2/6,   γ2 = α2/3 − α1²/9,   Δ = γ1² + γ2³ ≤ 0
//! θ  = arccos(γ1 / (−γ2)^{3/2}) / 3  ∈ [0, π/3]
//! ```
//!
//! the roots are `x_k = −α1/3 + 2√(−γ2) cos(θ + φ_k)` with
//! `φ = (0, 2π/3, −2π/3)`, ordered `x1 ≥ x3 ≥ x2`. The per-axis bound is
//! `2√(x1 + x3)`, twice the root of the sum of the two largest eigenvalues,
//! and `γ_R` is its minimum over the three axes.

use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen};

use crate::correlation::{flatten, gram, Axis, CorrelationTensor, GramMatrix};
use crate::entanglement::EntanglementMeasures;
use crate::qstate::PureState;
use crate::{Error, Result};

/// Largest admissible positive discriminant.
pub const DELTA_TOL: f64 = 1e-9;
/// How far outside `[-1, 1]` the arccos argument may stray before clamping
/// turns into an error. Near a triple root the argument is ill-conditioned,
/// so the rounding-error estimate of `γ1 / (−γ2)^{3/2}` is added on top.
pub const ARCCOS_TOL: f64 = 1e-9;
/// Below this `|γ2|` the Gram matrix is treated as a multiple of identity.
pub const SPHERICAL_TOL: f64 = 1e-12;
/// Agreement required between the root formulas and the direct eigensolver.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

/// Coefficients of `x³ + α1 x² + α2 x + α3` and the discriminant split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoeffs {
    pub axis: Axis,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub delta: f64,
}

impl CubicCoeffs {
    /// Derives `γ1`, `γ2`, `Δ` and rejects `Δ > DELTA_TOL` (a cubic with
    /// complex roots cannot come from a symmetric matrix).
    pub fn from_alphas(axis: Axis, alpha1: f64, alpha2: f64, alpha3: f64) -> Result<Self> {
        let gamma1 = -alpha1.powi(3) / 27.0 - alpha3 / 2.0 + alpha1 * alpha2 / 6.0;
        let gamma2 = alpha2 / 3.0 - alpha1 * alpha1 / 9.0;
        let delta = gamma1 * gamma1 + gamma2.powi(3);
        if !(delta <= DELTA_TOL) {
            return Err(Error::Numerical(format!(
                "axis {axis}: discriminant {delta:e} is positive"
            )));
        }
        Ok(Self {
            axis,
            alpha1,
            alpha2,
            alpha3,
            gamma1,
            gamma2,
            delta,
        })
    }
}

/// Eigenvalues of a Gram matrix, labelled as the trigonometric root formulas
/// produce them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootTriple {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub theta: f64,
}

/// Everything computed for one flattening axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisBound {
    pub axis: Axis,
    pub coeffs: CubicCoeffs,
    pub roots: RootTriple,
    /// `2√(x1 + x3)`.
    pub bound: f64,
    /// `2√(−2α1/3 + 2√(−γ2) cos(θ − π/3))`, algebraically equal to `bound`.
    pub closed_form: f64,
    /// `2√(u1² + u2²)` from a direct symmetric eigendecomposition.
    pub u_check: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub axes: [AxisBound; 3],
    pub gamma_r: f64,
    /// Axis attaining the minimum; the lowest index wins ties.
    pub minimizing_axis: Axis,
}

impl BoundReport {
    pub fn axis(&self, axis: Axis) -> &AxisBound {
        &self.axes[axis as usize]
    }

    pub fn minimizing(&self) -> &AxisBound {
        self.axis(self.minimizing_axis)
    }
}

/// Characteristic-polynomial coefficients of `M`: `α1 = −Tr M`,
/// `α2 = Σ` principal 2×2 minors, `α3 = −det M`.
///
/// `γ1`, `γ2` and `Δ` are taken from the traceless part
/// `B = M − (Tr M/3)·I` as `γ1 = det B / 2`, `γ2 = −Tr B² / 6` and
/// `Δ = −disc/108`, where the discriminant `disc = Π(x_i − x_j)²` is the
/// squared volume spanned by `I, B, B²` (a sum of squared 3×3 minors).
/// These equal the α-polynomials but keep full accuracy when the spectrum is
/// nearly degenerate, where `γ1² + γ2³` cancels to round-off.
pub fn cubic_coefficients(m: &GramMatrix) -> Result<CubicCoeffs> {
    let a = &m.matrix;
    let alpha1 = -(a[0][0] + a[1][1] + a[2][2]);
    let alpha2 = (a[0][0] * a[1][1] - a[0][1] * a[1][0])
        + (a[0][0] * a[2][2] - a[0][2] * a[2][0])
        + (a[1][1] * a[2][2] - a[1][2] * a[2][1]);
    let alpha3 = -det3(a);

    let q = -alpha1 / 3.0;
    let mut b = *a;
    for (i, row) in b.iter_mut().enumerate() {
        row[i] -= q;
    }
    let tr_b2: f64 = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| b[i][j] * b[j][i])
        .sum();
    let gamma1 = det3(&b) / 2.0;
    let gamma2 = -tr_b2 / 6.0;
    let delta = -discriminant(&b) / 108.0;
    if !(delta <= DELTA_TOL) {
        return Err(Error::Numerical(format!(
            "axis {}: discriminant {delta:e} is positive",
            m.axis
        )));
    }
    Ok(CubicCoeffs {
        axis: m.axis,
        alpha1,
        alpha2,
        alpha3,
        gamma1,
        gamma2,
        delta,
    })
}

/// `Π_{i<j}(x_i − x_j)²` for the eigenvalues of symmetric `b`, as the Gram
/// determinant of `vec I, vec B, vec B²` expanded by Cauchy–Binet.
fn discriminant(b: &[[f64; 3]; 3]) -> f64 {
    let mut b2 = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b2[i][j] = (0..3).map(|k| b[i][k] * b[k][j]).sum();
        }
    }
    let rows: Vec<[f64; 3]> = (0..9)
        .map(|e| {
            let (i, j) = (e / 3, e % 3);
            [if i == j { 1.0 } else { 0.0 }, b[i][j], b2[i][j]]
        })
        .collect();
    let mut acc = 0.0;
    for r0 in 0..9 {
        for r1 in r0 + 1..9 {
            for r2 in r1 + 1..9 {
                let m = det3(&[rows[r0], rows[r1], rows[r2]]);
                acc += m * m;
            }
        }
    }
    acc
}

fn det3(a: &[[f64; 3]; 3]) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// The same coefficients written as polynomials in the entanglement
/// invariants.
///
/// For axis 1, with `t_k = e_k sq`:
///
/// ```text
/// α1 = −1 − C_T²
/// α2 = 2(t1+t2+t4)t3 + 2(t1+t2)(t4+1) + t1² + t2² + 4t4 + 16e5
/// α3 = (t1+t2+2t3+2t4)(2t4² + 2t1t2 + t1t4 + t2t4) − (t1+t2+2t4+8e5)²
/// ```
///
/// Axis 2 exchanges `t2 ↔ t3`, axis 3 exchanges `t1 ↔ t3`.
pub fn coefficients_from_measures(m: &EntanglementMeasures, axis: Axis) -> Result<CubicCoeffs> {
    let (t1, t2, t3) = match axis {
        Axis::First => (m.e1sq, m.e2sq, m.e3sq),
        Axis::Second => (m.e1sq, m.e3sq, m.e2sq),
        Axis::Third => (m.e3sq, m.e2sq, m.e1sq),
    };
    let (t4, e5) = (m.e4sq, m.e5);
    let alpha1 = -1.0 - m.ct_sq;
    let alpha2 = 2.0 * (t1 + t2 + t4) * t3
        + 2.0 * (t1 + t2) * (t4 + 1.0)
        + t1 * t1
        + t2 * t2
        + 4.0 * t4
        + 16.0 * e5;
    let alpha3 = (t1 + t2 + 2.0 * t3 + 2.0 * t4)
        * (2.0 * t4 * t4 + 2.0 * t1 * t2 + t1 * t4 + t2 * t4)
        - (t1 + t2 + 2.0 * t4 + 8.0 * e5).powi(2);
    CubicCoeffs::from_alphas(axis, alpha1, alpha2, alpha3)
}

/// Trigonometric roots of the cubic.
pub fn trig_roots(c: &CubicCoeffs) -> Result<RootTriple> {
    if !(c.delta <= DELTA_TOL) {
        return Err(Error::Numerical(format!(
            "axis {}: discriminant {:e} is positive",
            c.axis, c.delta
        )));
    }
    let shift = -c.alpha1 / 3.0;
    if c.gamma2.abs() < SPHERICAL_TOL {
        return Ok(RootTriple {
            x1: shift,
            x2: shift,
            x3: shift,
            theta: 0.0,
        });
    }
    if c.gamma2 > 0.0 {
        return Err(Error::Numerical(format!(
            "axis {}: gamma2 = {:e} is positive",
            c.axis, c.gamma2
        )));
    }
    let ratio = c.gamma1 / (-c.gamma2).powf(1.5);
    if !(ratio.abs() <= 1.0 + ARCCOS_TOL + ratio_rounding(c)) {
        return Err(Error::Numerical(format!(
            "axis {}: arccos argument {ratio} outside [-1, 1]",
            c.axis
        )));
    }
    // arccos(γ1/(−γ2)^{3/2}) written as atan2: sin 3θ = √(−Δ)/(−γ2)^{3/2}.
    let theta = (-c.delta).max(0.0).sqrt().atan2(c.gamma1) / 3.0;
    let amp = 2.0 * (-c.gamma2).sqrt();
    Ok(RootTriple {
        x1: shift + amp * theta.cos(),
        x2: shift + amp * (theta + 2.0 * PI / 3.0).cos(),
        x3: shift + amp * (theta - 2.0 * PI / 3.0).cos(),
        theta,
    })
}

/// Rough forward-error bound of `γ1 / (−γ2)^{3/2}` from rounding in the
/// α's and in the γ formulas.
fn ratio_rounding(c: &CubicCoeffs) -> f64 {
    let scale = c.alpha1.abs() + c.alpha2.abs().sqrt() + c.alpha3.abs().cbrt();
    let err_g1 = 64.0 * f64::EPSILON * scale.powi(3);
    let err_g2 = 64.0 * f64::EPSILON * scale.powi(2);
    let neg_g2 = -c.gamma2;
    (err_g1 + 1.5 * c.gamma1.abs() * err_g2 / neg_g2) / neg_g2.powf(1.5)
}

/// `2√(−2α1/3 + 2√(−γ2) cos(θ − π/3))`.
///
/// For fixed `γ2` and `θ` this is strictly increasing in `−α1`.
pub fn closed_form_bound(alpha1: f64, gamma2: f64, theta: f64) -> f64 {
    let inner = -2.0 * alpha1 / 3.0 + 2.0 * (-gamma2).max(0.0).sqrt() * (theta - PI / 3.0).cos();
    2.0 * inner.max(0.0).sqrt()
}

/// `2√(u1² + u2²)` with `u1² ≥ u2²` the two largest eigenvalues of `M`,
/// from nalgebra's symmetric eigensolver.
pub fn eigen_bound(m: &GramMatrix) -> f64 {
    let mat = Matrix3::from_fn(|i, j| m.matrix[i][j]);
    let mut ev: Vec<f64> = SymmetricEigen::new(mat)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    2.0 * (ev[0] + ev[1]).max(0.0).sqrt()
}

fn axis_bound(r: &CorrelationTensor, axis: Axis) -> Result<AxisBound> {
    let m = gram(&flatten(r, axis));
    let coeffs = cubic_coefficients(&m)?;
    let roots = trig_roots(&coeffs)?;
    let bound = 2.0 * (roots.x1 + roots.x3).max(0.0).sqrt();
    let closed_form = closed_form_bound(coeffs.alpha1, coeffs.gamma2, roots.theta);
    let u_check = eigen_bound(&m);
    if (bound - closed_form).abs() > CROSS_CHECK_TOL {
        return Err(Error::Consistency(format!(
            "axis {axis}: root-sum bound {bound} disagrees with closed form {closed_form}"
        )));
    }
    if (bound - u_check).abs() > CROSS_CHECK_TOL {
        return Err(Error::Consistency(format!(
            "axis {axis}: trigonometric bound {bound} disagrees with eigensolver {u_check}"
        )));
    }
    Ok(AxisBound {
        axis,
        coeffs,
        roots,
        bound,
        closed_form,
        u_check,
    })
}

/// `γ_R` and its per-axis ingredients for a correlation tensor.
pub fn bound_from_tensor(r: &CorrelationTensor) -> Result<BoundReport> {
    let axes = [
        axis_bound(r, Axis::First)?,
        axis_bound(r, Axis::Second)?,
        axis_bound(r, Axis::Third)?,
    ];
    let best = axes.iter().fold(
        &axes[0],
        |best, a| if a.bound < best.bound { a } else { best },
    );
    Ok(BoundReport {
        gamma_r: best.bound,
        minimizing_axis: best.axis,
        axes,
    })
}

/// `γ_R` for a pure state.
pub fn gamma_r(state: &PureState) -> Result<BoundReport> {
    bound_from_tensor(&CorrelationTensor::from_state(state)?)
}
