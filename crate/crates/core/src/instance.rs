//! Problem instances, the subset-sum oracle, seeded generation and
//! verification.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::scalar::{multiset_equal, sort_scalars, NumericMode, Scalar};

/// The solver input: all `C(n, k)` subset sums, stored sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance<S> {
    pub n: u32,
    pub k: u32,
    pub mode: NumericMode,
    sums: Vec<S>,
    /// Free-form notes carried in the file (e.g. singular-pair warnings).
    pub warnings: Vec<String>,
}

impl<S: Scalar> Instance<S> {
    pub fn new(n: u32, k: u32, mode: NumericMode, mut sums: Vec<S>) -> Result<Self> {
        if k < 1 || k >= n {
            return Err(Error::MalformedInstance(format!("need 1 <= k <= n-1, got n={n}, k={k}")));
        }
        let expected = expected_count(n, k)?;
        if sums.len() != expected {
            return Err(Error::MalformedInstance(format!(
                "sums: expected C({n},{k}) = {expected} values, found {}",
                sums.len()
            )));
        }
        sort_scalars(&mut sums);
        Ok(Instance { n, k, mode, sums, warnings: Vec::new() })
    }

    pub fn sums(&self) -> &[S] {
        &self.sums
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }
}

fn expected_count(n: u32, k: u32) -> Result<usize> {
    binomial(n as i64, k as i64)
        .to_usize()
        .ok_or_else(|| Error::MalformedInstance(format!("C({n},{k}) does not fit in memory")))
}

/// A candidate or ground-truth hidden multiset.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<S> {
    pub elements: Vec<S>,
}

impl<S: Scalar> Solution<S> {
    pub fn new(mut elements: Vec<S>) -> Self {
        sort_scalars(&mut elements);
        Solution { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Every `k`-element sub-multiset sum, enumerated over index combinations in
/// lexicographic order, returned sorted.
pub fn subset_sums<S: Scalar>(x: &[S], k: usize) -> Vec<S> {
    let n = x.len();
    assert!(k >= 1 && k <= n, "subset_sums needs 1 <= k <= n");
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(S::zero(), |acc, &i| acc + x[i].clone()));
        // advance to the next combination
        let mut pos = k;
        loop {
            if pos == 0 {
                sort_scalars(&mut out);
                return out;
            }
            pos -= 1;
            if idx[pos] < n - k + pos {
                idx[pos] += 1;
                for t in pos + 1..k {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Recomputes the candidate's subset sums and multiset-compares them with
/// the instance.
pub fn verify_solution<S: Scalar>(
    instance: &Instance<S>,
    candidate: &[S],
    mode: &NumericMode,
) -> (bool, S) {
    if candidate.len() != instance.n as usize {
        return (false, S::zero());
    }
    multiset_equal(&subset_sums(candidate, instance.k as usize), instance.sums(), mode)
}

/// How generated elements are drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Distribution {
    /// Uniform integers in `lo..=hi`.
    IntegerRange { lo: i64, hi: i64 },
    /// Uniform binary64 values in `[0, 1)` with 53 random bits.
    UnitFloat,
}

/// The seeded generator behind [`generate_instance`].
///
/// xoshiro256** seeded through SplitMix64 (`seed_from_u64`). Integers in
/// `lo..=hi` take `lo + v mod span` from the first 64-bit output `v` below
/// the largest multiple of `span`; unit floats are `(v >> 11) * 2^-53`.
#[derive(Clone, Debug)]
pub struct InstanceRng(Xoshiro256StarStar);

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        InstanceRng(Xoshiro256StarStar::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi as i128 - lo as i128 + 1) as u128;
        if span > u64::MAX as u128 {
            return self.next_u64() as i64;
        }
        let span = span as u64;
        let limit = u64::MAX - u64::MAX % span;
        loop {
            let v = self.next_u64();
            if v < limit {
                return (lo as i128 + (v % span) as i128) as i64;
            }
        }
    }

    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Draws a hidden multiset and returns its instance together with the truth.
///
/// With `distinct`, repeated draws are rejected and redrawn.
pub fn generate_instance<S: Scalar>(
    n: u32,
    k: u32,
    seed: u64,
    distribution: Distribution,
    distinct: bool,
) -> Result<(Instance<S>, Solution<S>)> {
    if k < 2 || k >= n {
        return Err(Error::MalformedInstance(format!("generation needs 2 <= k <= n-1, got n={n}, k={k}")));
    }
    if let Distribution::IntegerRange { lo, hi } = distribution {
        if lo > hi {
            return Err(Error::BadRange { lo, hi });
        }
        if distinct && ((hi as i128 - lo as i128 + 1) as u128) < n as u128 {
            return Err(Error::BadRange { lo, hi });
        }
    }
    let mut rng = InstanceRng::new(seed);
    let mut elements: Vec<S> = Vec::with_capacity(n as usize);
    while elements.len() < n as usize {
        let v = match distribution {
            Distribution::IntegerRange { lo, hi } => S::from_i64(rng.int_in(lo, hi)),
            Distribution::UnitFloat => S::from_f64(rng.unit_f64()),
        };
        if distinct && elements.contains(&v) {
            continue;
        }
        elements.push(v);
    }
    let mode = NumericMode::for_scalar::<S>();
    let sums = subset_sums(&elements, k as usize);
    let diag = crate::vieta::check_moser(n, k);
    let mut warnings = Vec::new();
    if !diag.singular_us.is_empty() {
        warnings.push(format!("singular pair ({n},{k}): Moser value vanishes at u = {:?}", diag.singular_us));
    }
    let instance = Instance::new(n, k, mode, sums)?.with_warnings(warnings);
    Ok((instance, Solution::new(elements)))
}

/// `C(n, k)` as a big integer, handy for callers sizing instances.
pub fn instance_size(n: u32, k: u32) -> BigInt {
    binomial(n as i64, k as i64)
}
