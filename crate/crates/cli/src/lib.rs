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

//! Analysis records, parameter sweeps and dataset emission behind the
//! `mermin` command-line tool.

pub mod emit;
pub mod record;
pub mod sweep;

use thiserror::Error;

/// Failures surfaced by the CLI, each with a fixed process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("empty result: {0}")]
    Empty(String),
    #[error("consistency failure: {0}")]
    Consistency(String),
}

impl CliError {
    /// 2 validation, 3 I/O, 4 empty or short result, 5 internal consistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
            CliError::Empty(_) => 4,
            CliError::Consistency(_) => 5,
        }
    }
}

impl From<mermin_bound::Error> for CliError {
    fn from(e: mermin_bound::Error) -> Self {
        use mermin_bound::Error as E;
        match e {
            E::Validation(_) | E::Usage(_) => CliError::Validation(e.to_string()),
            E::Numerical(_) | E::Consistency(_) => CliError::Consistency(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Derives an independent 64-bit seed for item `index` of `stream` from a
/// user seed (SplitMix64 finalizer).
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut z = base
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
