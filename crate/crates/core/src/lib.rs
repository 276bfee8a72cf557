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

//! Mermin-operator analysis for 3-qubit pure states.
//!
//! The crate computes, for any 3-qubit pure state,
//!
//! * the triple-Pauli correlation tensor `R[j1][j2][j3] = Tr(ρ σ_{j1}⊗σ_{j2}⊗σ_{j3})`
//!   and its three 3×9 flattenings ([`correlation`]),
//! * the local-unitary invariants of the state: purities, pairwise tangles,
//!   the 3-tangle, the Kempe-type invariant and the total concurrence
//!   ([`entanglement`]),
//! * the analytical upper bound `γ_R` on the maximal Mermin expectation, both
//!   from the characteristic cubic of each Gram matrix `R Rᵀ` and from the
//!   entanglement invariants ([`bound`]),
//! * the true maximum `γ` by multi-start alternating best response over the
//!   six measurement directions ([`optimizer`]).
//!
//! States are built from the five-parameter canonical form ([`qstate`]).
//!
//! ```
//! use mermin_bound::{bound, qstate::{CanonicalParams, PureState}};
//!
//! let h = std::f64::consts::FRAC_1_SQRT_2;
//! let ghz = PureState::canonical(&CanonicalParams::new([h, 0.0, 0.0, 0.0, h], 0.0)?);
//! let report = bound::gamma_r(&ghz)?;
//! assert!((report.gamma_r - 4.0).abs() < 1e-9);
//! # Ok::<(), mermin_bound::Error>(())
//! ```

pub mod bound;
pub mod correlation;
pub mod entanglement;
mod error;
pub mod optimizer;
pub mod qstate;

pub use error::{Error, Result};

/// Guide chapters, compiled as doc-tests so the book's snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    mod states {}
    #[doc = include_str!("../../../book/src/correlation.md")]
    mod correlation {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/bound.md")]
    mod bound {}
    #[doc = include_str!("../../../book/src/optimizer.md")]
    mod optimizer {}
}
