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

use thiserror::Error;

/// Errors produced by the analysis pipeline.
///
/// The variants map one-to-one onto the CLI exit codes: validation and usage
/// errors are caller mistakes, numerical and consistency errors indicate that
/// an internal self-check failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input value violates a documented invariant.
    #[error("invalid input: {0}")]
    Validation(String),
    /// An argument is outside the accepted domain (e.g. an unknown axis).
    #[error("usage error: {0}")]
    Usage(String),
    /// A numerical quantity left its admissible range beyond tolerance.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Two independent computations of the same quantity disagree.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
