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

//! Local-unitary invariants of 3-qubit pure states.
//!
//! Pairwise entanglement is measured by the Wootters concurrence `C` and the
//! tangle `C²`. For a pure 3-qubit state the pair reduction obtained by
//! tracing out qubit `t` is the ensemble `|v0⟩⟨v0| + |v1⟩⟨v1|` with
//! `v_k = ⟨k|_t |ψ⟩`. In that basis the Wootters matrix
//! `T = Vᵀ (σy⊗σy) V` is 2×2 and the tangle is
//! `(Q1 − Q2)² = ‖T‖_F² − 2|det T|`, which avoids the square roots of
//! near-zero eigenvalues that limit the textbook route to ~1e-8 accuracy.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::correlation::Axis;
use crate::qstate::{density_matrix, reduce, DensityMatrix, PureState};
use crate::{Error, Result};

/// Negative round-off tolerated (then clamped to zero) in tangles and in
/// the spectrum of a pair density matrix.
pub const CLAMP_TOL: f64 = 1e-9;

/// Eigenvalues of a density matrix below this are treated as exact zeros
/// when building the Wootters ensemble.
const EIGEN_FLOOR: f64 = 64.0 * f64::EPSILON;

/// The invariant quantities of a 3-qubit pure state.
///
/// `e1sq`, `e2sq`, `e3sq` are the pairwise tangles `τ_{1|2}`, `τ_{1|3}`,
/// `τ_{2|3}` and `e4sq` is the 3-tangle. `e5` is the Kempe-type invariant
/// shifted so that it vanishes on product and GHZ states:
///
/// `e5 = i5_raw − 1/3 + (e1sq + e2sq + e3sq + e4sq) / 4`
///
/// With this normalization the characteristic-cubic coefficients of every
/// Gram matrix are polynomials in `(e1sq, …, e5)` (see
/// [`crate::bound::coefficients_from_measures`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementMeasures {
    /// `Tr ρ1²`.
    pub i1: f64,
    /// `Tr ρ2²`.
    pub i2: f64,
    /// `Tr ρ3²`.
    pub i3: f64,
    pub e1sq: f64,
    pub e2sq: f64,
    pub e3sq: f64,
    pub e4sq: f64,
    /// `Tr((ρ1⊗ρ2)ρ12) − Tr(ρ1³)/3 − Tr(ρ2³)/3`.
    pub i5_raw: f64,
    pub e5: f64,
    /// Total concurrence squared, `Σ_j 2(1 − Tr ρj²)`.
    pub ct_sq: f64,
}

/// `σy ⊗ σy` is real: `|00⟩ ↔ −|11⟩`, `|01⟩ ↔ |10⟩`.
fn sigma_yy() -> [[f64; 4]; 4] {
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
}

fn yy_form(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let y = sigma_yy();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..4 {
        for b in 0..4 {
            if y[a][b] != 0.0 {
                acc += u[a] * v[b] * y[a][b];
            }
        }
    }
    acc
}

fn clamp_unit(name: &str, v: f64) -> Result<f64> {
    if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&v) {
        return Err(Error::Numerical(format!("{name} = {v:e} outside [0, 1]")));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// Wootters concurrence `max(0, Q1 − Q2 − Q3 − Q4)` of a two-qubit state.
///
/// `Q` are the square roots of the eigenvalues of `ρ (σy⊗σy) ρ* (σy⊗σy)`,
/// obtained here as the singular values of `Vᵀ(σy⊗σy)V` for `ρ = V V†`.
pub fn wootters_concurrence(rho_pair: &DensityMatrix) -> Result<f64> {
    if rho_pair.num_qubits() != 2 {
        return Err(Error::Usage(format!(
            "concurrence needs a 2-qubit density matrix (got {} qubits)",
            rho_pair.num_qubits()
        )));
    }
    let eig = SymmetricEigen::new(rho_pair.entries().clone());
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(4);
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam < -CLAMP_TOL {
            return Err(Error::Numerical(format!(
                "pair density matrix has eigenvalue {lam:e}"
            )));
        }
        if lam > EIGEN_FLOOR {
            let s = lam.sqrt();
            columns.push(eig.eigenvectors.column(k).iter().map(|z| z * s).collect());
        }
    }
    let n = columns.len();
    let t = DMatrix::from_fn(n, n, |i, j| yy_form(&columns[i], &columns[j]));
    let mut q: Vec<f64> = t.singular_values().iter().copied().collect();
    q.sort_by(|a, b| b.total_cmp(a));
    let c = q.first().copied().unwrap_or(0.0) - q.iter().skip(1).sum::<f64>();
    Ok(c.clamp(0.0, 1.0))
}

/// Tangle `C²` between two qubits of a pure 3-qubit state, computed from the
/// pure-state ensemble of the pair (see the module docs).
pub fn pair_tangle(state: &PureState, pair: (Axis, Axis)) -> Result<f64> {
    let (p, q) = (pair.0.qubit(), pair.1.qubit());
    if p == q {
        return Err(Error::Usage(format!(
            "pair must be two distinct qubits (got {p}, {q})"
        )));
    }
    let (p, q) = (p.min(q), p.max(q));
    let t = 6 - p - q;
    let amp = state.amplitudes();
    let mut v = [[Complex64::new(0.0, 0.0); 4]; 2];
    for (k, vk) in v.iter_mut().enumerate() {
        for bp in 0..2 {
            for bq in 0..2 {
                let idx = (bp << (3 - p)) | (bq << (3 - q)) | (k << (3 - t));
                vk[2 * bp + bq] = amp[idx];
            }
        }
    }
    let t00 = yy_form(&v[0], &v[0]);
    let t01 = yy_form(&v[0], &v[1]);
    let t11 = yy_form(&v[1], &v[1]);
    let frob = t00.norm_sqr() + 2.0 * t01.norm_sqr() + t11.norm_sqr();
    let det = (t00 * t11 - t01 * t01).norm();
    clamp_unit("pair tangle", frob - 2.0 * det)
}

/// One-tangle `τ_{j|rest} = 2(1 − Tr ρj²)` of a single-qubit reduction.
pub fn one_tangle(rho_single: &DensityMatrix) -> Result<f64> {
    if rho_single.num_qubits() != 1 {
        return Err(Error::Usage(format!(
            "one-tangle needs a 1-qubit density matrix (got {} qubits)",
            rho_single.num_qubits()
        )));
    }
    Ok(2.0 * (1.0 - rho_single.purity()))
}

/// Residual 3-tangle `τ_{1|23} − τ_{1|2} − τ_{1|3}`.
pub fn three_tangle(state: &PureState) -> Result<f64> {
    three_tangle_about(state, Axis::First)
}

/// The 3-tangle with `focus` as the distinguished qubit. The value does not
/// depend on the choice; this exists to check that.
pub fn three_tangle_about(state: &PureState, focus: Axis) -> Result<f64> {
    let others: Vec<Axis> = Axis::ALL.into_iter().filter(|&a| a != focus).collect();
    let rho_focus = reduce(&density_matrix(state), &[focus.qubit()])?;
    let tau = one_tangle(&rho_focus)?
        - pair_tangle(state, (focus, others[0]))?
        - pair_tangle(state, (focus, others[1]))?;
    clamp_unit("3-tangle", tau)
}

/// `Tr((ρa⊗ρb)ρab) − Tr(ρa³)/3 − Tr(ρb³)/3` for one qubit pair.
pub fn kempe_i5(
    rho_a: &DensityMatrix,
    rho_b: &DensityMatrix,
    rho_ab: &DensityMatrix,
) -> Result<f64> {
    if rho_a.num_qubits() != 1 || rho_b.num_qubits() != 1 || rho_ab.num_qubits() != 2 {
        return Err(Error::Usage(
            "kempe_i5 needs two 1-qubit and one 2-qubit density matrix".to_string(),
        ));
    }
    let mut overlap = Complex64::new(0.0, 0.0);
    for r in 0..4 {
        for c in 0..4 {
            let prod = rho_a.get(r >> 1, c >> 1) * rho_b.get(r & 1, c & 1);
            overlap += prod * rho_ab.get(c, r);
        }
    }
    Ok(overlap.re - rho_a.cube_trace() / 3.0 - rho_b.cube_trace() / 3.0)
}

/// All invariants of `state`.
pub fn measures(state: &PureState) -> Result<EntanglementMeasures> {
    let rho = density_matrix(state);
    let r1 = reduce(&rho, &[1])?;
    let r2 = reduce(&rho, &[2])?;
    let r3 = reduce(&rho, &[3])?;
    let r12 = reduce(&rho, &[1, 2])?;

    let (i1, i2, i3) = (r1.purity(), r2.purity(), r3.purity());
    let e1sq = pair_tangle(state, (Axis::First, Axis::Second))?;
    let e2sq = pair_tangle(state, (Axis::First, Axis::Third))?;
    let e3sq = pair_tangle(state, (Axis::Second, Axis::Third))?;
    let e4sq = clamp_unit("3-tangle", 2.0 * (1.0 - i1) - e1sq - e2sq)?;
    let i5_raw = kempe_i5(&r1, &r2, &r12)?;
    let e5 = i5_raw - 1.0 / 3.0 + (e1sq + e2sq + e3sq + e4sq) / 4.0;
    let ct_sq = 2.0 * (3.0 - i1 - i2 - i3);

    Ok(EntanglementMeasures {
        i1,
        i2,
        i3,
        e1sq,
        e2sq,
        e3sq,
        e4sq,
        i5_raw,
        e5,
        ct_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{sample_canonical, CanonicalParams};

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn state(lambda: [f64; 5]) -> PureState {
        PureState::canonical(&CanonicalParams::normalized(lambda, 0.0).unwrap())
    }

    fn rho2(diag_or_entries: [[f64; 4]; 4]) -> DensityMatrix {
        DensityMatrix::new(DMatrix::from_fn(4, 4, |r, c| {
            Complex64::new(diag_or_entries[r][c], 0.0)
        }))
        .unwrap()
    }

    #[test]
    fn concurrence_examples() {
        let mut p = [[0.0; 4]; 4];
        p[0][0] = 1.0;
        assert!(wootters_concurrence(&rho2(p)).unwrap().abs() < 1e-12);

        // (|000⟩ + |110⟩)/√2 traced over qubit 3 is a Bell pair.
        let bell = state([H, 0.0, 0.0, H, 0.0]);
        let r12 = reduce(&density_matrix(&bell), &[1, 2]).unwrap();
        assert!((wootters_concurrence(&r12).unwrap() - 1.0).abs() < 1e-12);

        let ghz = state([H, 0.0, 0.0, 0.0, H]);
        let r12 = reduce(&density_matrix(&ghz), &[1, 2]).unwrap();
        assert!(wootters_concurrence(&r12).unwrap().abs() < 1e-12);

        let mut mixed = [[0.0; 4]; 4];
        for (i, row) in mixed.iter_mut().enumerate() {
            row[i] = 0.25;
        }
        assert!(wootters_concurrence(&rho2(mixed)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn werner_state_concurrence() {
        // p|Φ+⟩⟨Φ+| + (1−p)I/4 has C = max(0, (3p−1)/2).
        for p in [0.2, 1.0 / 3.0, 0.5, 0.9] {
            let mut m = [[0.0; 4]; 4];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = (1.0 - p) / 4.0;
            }
            for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
                m[r][c] += p / 2.0;
            }
            let want = f64::max(0.0, (3.0 * p - 1.0) / 2.0);
            assert!((wootters_concurrence(&rho2(m)).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn one_tangle_examples() {
        let prod = state([1.0, 0.0, 0.0, 0.0, 0.0]);
        let r1 = reduce(&density_matrix(&prod), &[1]).unwrap();
        assert!(one_tangle(&r1).unwrap().abs() < 1e-15);

        let ghz = state([H, 0.0, 0.0, 0.0, H]);
        let r1 = reduce(&density_matrix(&ghz), &[1]).unwrap();
        assert!((one_tangle(&r1).unwrap() - 1.0).abs() < 1e-15);
        assert!(one_tangle(&density_matrix(&ghz)).is_err());
    }

    #[test]
    fn three_tangle_examples() {
        assert!((three_tangle(&state([H, 0.0, 0.0, 0.0, H])).unwrap() - 1.0).abs() < 1e-12);
        assert!(three_tangle(&state([0.0, 1.0, 1.0, 1.0, 0.0])).unwrap() < 1e-12);
        assert!(three_tangle(&state([1.0, 1.0, 0.0, 1.0, 0.0])).unwrap() < 1e-12);
        assert!(three_tangle(&state([1.0, 0.0, 1.0, 1.0, 0.0])).unwrap() < 1e-12);
        assert_eq!(
            three_tangle(&state([1.0, 0.0, 0.0, 0.0, 0.0])).unwrap(),
            0.0
        );
    }

    #[test]
    fn kempe_examples() {
        let check = |s: &PureState, want: f64| {
            let rho = density_matrix(s);
            let r1 = reduce(&rho, &[1]).unwrap();
            let r2 = reduce(&rho, &[2]).unwrap();
            let r12 = reduce(&rho, &[1, 2]).unwrap();
            let got = kempe_i5(&r1, &r2, &r12).unwrap();
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        };
        check(&state([1.0, 0.0, 0.0, 0.0, 0.0]), 1.0 / 3.0);
        check(&state([H, 0.0, 0.0, 0.0, H]), 1.0 / 12.0);
        let (l0, l4) = (0.8f64, 0.6f64);
        let tau = 4.0 * l0 * l0 * l4 * l4;
        check(&state([l0, 0.0, 0.0, 0.0, l4]), 1.0 / 3.0 - tau / 4.0);
    }

    #[test]
    fn measures_product_and_ghz() {
        let m = measures(&state([1.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
        for v in [m.e1sq, m.e2sq, m.e3sq, m.e4sq, m.ct_sq, m.e5] {
            assert!(v.abs() < 1e-14);
        }
        assert!((m.i5_raw - 1.0 / 3.0).abs() < 1e-14);

        let m = measures(&state([H, 0.0, 0.0, 0.0, H])).unwrap();
        for v in [m.e1sq, m.e2sq, m.e3sq, m.e5] {
            assert!(v.abs() < 1e-14);
        }
        assert!((m.e4sq - 1.0).abs() < 1e-14);
        assert!((m.ct_sq - 3.0).abs() < 1e-14);
        assert!((m.i1 - 0.5).abs() < 1e-14);
    }

    #[test]
    fn measures_w_state() {
        // λ0 = λ2 = λ3: a local X on qubit 1 maps it to |001⟩+|010⟩+|100⟩.
        let m = measures(&state([1.0, 0.0, 1.0, 1.0, 0.0])).unwrap();
        for v in [m.e1sq, m.e2sq, m.e3sq] {
            assert!((v - 4.0 / 9.0).abs() < 1e-14);
        }
        assert!(m.e4sq < 1e-14);
        assert!((m.ct_sq - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn measures_excited_w_like_state() {
        // (|100⟩+|101⟩+|110⟩)/√3 = |1⟩ ⊗ (|00⟩+|01⟩+|10⟩)/√3: only qubits 2, 3
        // are entangled, with concurrence 2/3.
        let m = measures(&state([0.0, 1.0, 1.0, 1.0, 0.0])).unwrap();
        assert!(m.e1sq.abs() < 1e-14 && m.e2sq.abs() < 1e-14);
        assert!((m.e3sq - 4.0 / 9.0).abs() < 1e-14);
        assert!(m.e4sq.abs() < 1e-14);
        assert!((m.ct_sq - 8.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn ensemble_route_matches_general_concurrence() {
        for seed in 0..200 {
            let s = PureState::canonical(&sample_canonical(seed));
            let rho = density_matrix(&s);
            for (a, b) in [
                (Axis::First, Axis::Second),
                (Axis::First, Axis::Third),
                (Axis::Second, Axis::Third),
            ] {
                let pair = reduce(&rho, &[a.qubit(), b.qubit()]).unwrap();
                let c = wootters_concurrence(&pair).unwrap();
                let t = pair_tangle(&s, (a, b)).unwrap();
                assert!((c * c - t).abs() < 1e-7, "seed {seed}: {} vs {t}", c * c);
            }
        }
    }

    #[test]
    fn pair_tangle_rejects_same_qubit() {
        let s = state([1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(pair_tangle(&s, (Axis::Second, Axis::Second)).is_err());
    }
}
