use std::fmt;
use std::time::Duration;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::scalar::NumericMode;

/// Outcome class of a solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Unique,
    Multiple,
    Singular,
    NoSolution,
    Inconsistent,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Unique => "unique",
            Status::Multiple => "multiple",
            Status::Singular => "singular",
            Status::NoSolution => "no-solution",
            Status::Inconsistent => "inconsistent",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Vieta,
    Brute,
}

/// Moser values for `u = 1..=n` at the complement-normalized `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct MoserDiagnostics {
    pub n: u32,
    /// `min(k, n - k)`.
    pub k: u32,
    pub values: Vec<(u32, BigInt)>,
    pub singular_us: Vec<u32>,
}

impl MoserDiagnostics {
    pub fn is_singular(&self) -> bool {
        !self.singular_us.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport<S> {
    pub algorithm: Algorithm,
    pub status: Status,
    pub n: u32,
    pub k: u32,
    pub mode: NumericMode,
    /// Each solution sorted ascending; solutions in canonical order.
    pub solutions: Vec<Vec<S>>,
    pub moser: MoserDiagnostics,
    /// Largest deviation between the input sums and each solution's sums.
    pub verification: Vec<S>,
    pub warnings: Vec<String>,
    pub elapsed: Duration,
    /// Cursor tuples visited by the brute-force search.
    pub iterations: Option<u64>,
    /// Full solution vector of every recovery system (Vieta only).
    pub power_sum_systems: Vec<Vec<S>>,
}

impl<S> SolveReport<S> {
    pub fn solved(&self) -> bool {
        matches!(self.status, Status::Unique | Status::Multiple)
    }
}
