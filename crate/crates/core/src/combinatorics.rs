//! Exact integer combinatorics used to build the recovery systems.
//!
//! Everything here works on arbitrary-precision integers: binomials and
//! Stirling numbers overflow 64 bits long before the partition counts become
//! a problem.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// An integer partition, stored as its parts in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from its parts in any order.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("zero part".into()));
        }
        parts.sort_unstable();
        Ok(Partition { parts })
    }

    /// The one-part partition `(u)`.
    pub fn single(u: u32) -> Self {
        assert!(u > 0, "partition of zero");
        Partition { parts: vec![u] }
    }

    /// `(1, 1, ..., 1)` with `u` ones.
    pub fn ones(u: u32) -> Self {
        assert!(u > 0, "partition of zero");
        Partition { parts: vec![1; u as usize] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `u` into at most `k_max` parts, in recovery-matrix order.
///
/// Entries are sorted by length first and lexicographically on the ascending
/// parts within one length, so `entries[0]` is `(u)` and the last entry is
/// `(1, ..., 1)` whenever `u <= k_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionList {
    pub u: u32,
    pub k_max: u32,
    pub entries: Vec<Partition>,
}

impl PartitionList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn partitions_at_most(u: u32, k_max: u32) -> PartitionList {
    assert!(u >= 1 && k_max >= 1, "partitions_at_most needs u, k_max >= 1");
    let mut out = Vec::new();
    let mut current = Vec::new();
    collect_partitions(u, 1, k_max as usize, &mut current, &mut out);
    out.sort_by(|a: &Vec<u32>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    PartitionList {
        u,
        k_max,
        entries: out.into_iter().map(|parts| Partition { parts }).collect(),
    }
}

// Parts are generated non-decreasing, each at least `min_part`.
fn collect_partitions(
    remaining: u32,
    min_part: u32,
    slots: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    if slots == 0 {
        return;
    }
    for part in min_part..=remaining {
        // the rest must fit into parts no smaller than `part`
        let rest = remaining - part;
        if rest != 0 && rest < part {
            continue;
        }
        current.push(part);
        collect_partitions(rest, part, slots - 1, current, out);
        current.pop();
    }
}

/// Pascal's triangle up to row `n_max`, with zero outside the triangle.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    n_max: usize,
    rows: Vec<Vec<BigInt>>,
}

impl BinomialTable {
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n_max + 1);
        for a in 0..=n_max {
            let mut row = vec![BigInt::one(); a + 1];
            for b in 1..a {
                row[b] = &rows[a - 1][b - 1] + &rows[a - 1][b];
            }
            rows.push(row);
        }
        BinomialTable { n_max, rows }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `C(a, b)`; zero when either argument is negative or `b > a`.
    pub fn get(&self, a: i64, b: i64) -> Result<BigInt> {
        if a > self.n_max as i64 {
            return Err(Error::TableTooSmall { n_max: self.n_max, requested: a });
        }
        if a < 0 || b < 0 || b > a {
            return Ok(BigInt::zero());
        }
        Ok(self.rows[a as usize][b as usize].clone())
    }
}

/// `C(a, b)` by the multiplicative formula, zero outside the triangle.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if a < 0 || b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(m: u32) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * i)
}

/// Stirling number of the second kind from the alternating explicit sum.
pub fn stirling2(u: u32, i: u32) -> BigInt {
    if i > u {
        return BigInt::zero();
    }
    let mut sum = BigInt::zero();
    for j in 0..=i {
        let term = binomial(i as i64, j as i64) * BigInt::from(j).pow(u);
        if (i - j) % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (q, r) = sum.div_rem(&factorial(i));
    assert!(r.is_zero(), "Stirling sum not divisible by {i}!");
    q
}

/// Product over distinct part values of the factorial of their multiplicity.
pub fn multiplicity_mu(p: &Partition) -> BigInt {
    let mut acc = BigInt::one();
    let mut run = 0u32;
    for (idx, part) in p.parts.iter().enumerate() {
        run += 1;
        if p.parts.get(idx + 1) != Some(part) {
            acc *= factorial(run);
            run = 0;
        }
    }
    acc
}

/// Number of set partitions of a `weight(p)`-set into blocks of sizes `p`.
pub fn set_partition_count(p: &Partition) -> BigInt {
    let mut remaining = p.weight() as i64;
    let mut numer = BigInt::one();
    for &part in &p.parts {
        numer *= binomial(remaining, part as i64);
        remaining -= part as i64;
    }
    let (q, r) = numer.div_rem(&multiplicity_mu(p));
    assert!(r.is_zero(), "multinomial of {p} not divisible by mu");
    q
}

/// Top-row entry of the recovery matrix for column partition `p`.
pub fn first_row_coefficient(p: &Partition, n: u32, k: u32) -> BigInt {
    let len = p.len() as i64;
    binomial(n as i64 - len, k as i64 - len) * set_partition_count(p)
}

/// Counts merges of one partition into another.
///
/// `v(p1, p2)` is the number of ways to group the parts of `p1`, treated as
/// distinguishable, so that the group sums form `p2`. It is the coefficient
/// of the power-sum symbol of `p2` in the product of the single power sums
/// indexed by `p1`. The memo is shared between calls, so reusing one counter
/// across a whole matrix is cheap.
#[derive(Debug, Default)]
pub struct MergeCounter {
    memo: HashMap<(Vec<u32>, Vec<u32>), BigInt>,
}

impl MergeCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&mut self, p1: &Partition, p2: &Partition) -> Result<BigInt> {
        if p1.weight() != p2.weight() {
            return Err(Error::WeightMismatch { left: p1.weight(), right: p2.weight() });
        }
        if p2.len() > p1.len() {
            return Ok(BigInt::zero());
        }
        Ok(self.count_rec(p1.parts.clone(), p2.parts.clone()))
    }

    fn count_rec(&mut self, source: Vec<u32>, target: Vec<u32>) -> BigInt {
        if source.is_empty() {
            return if target.is_empty() { BigInt::one() } else { BigInt::zero() };
        }
        if target.is_empty() || target.len() > source.len() {
            return BigInt::zero();
        }
        let key = (source, target);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let (source, target) = &key;

        // The first remaining source part anchors its block; the rest of the
        // block is a sub-multiset of the other source parts.
        let anchor = source[0];
        let rest = &source[1..];
        let groups = group_counts(rest);
        let mut total = BigInt::zero();
        let mut chosen = vec![0u32; groups.len()];
        loop {
            let block_sum: u32 =
                anchor + groups.iter().zip(&chosen).map(|(&(v, _), &c)| v * c).sum::<u32>();
            if let Ok(pos) = target.binary_search(&block_sum) {
                let mut ways = BigInt::one();
                let mut next_source = Vec::with_capacity(rest.len());
                for (&(v, avail), &c) in groups.iter().zip(&chosen) {
                    ways *= binomial(avail as i64, c as i64);
                    next_source.extend(std::iter::repeat_n(v, (avail - c) as usize));
                }
                let mut next_target = target.clone();
                next_target.remove(pos);
                total += ways * self.count_rec(next_source, next_target);
            }
            // odometer over the chosen multiplicities
            let mut idx = 0;
            loop {
                if idx == groups.len() {
                    self.memo.insert(key.clone(), total.clone());
                    return total;
                }
                if chosen[idx] < groups[idx].1 {
                    chosen[idx] += 1;
                    break;
                }
                chosen[idx] = 0;
                idx += 1;
            }
        }
    }
}

fn group_counts(sorted: &[u32]) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = Vec::new();
    for &v in sorted {
        match out.last_mut() {
            Some((last, count)) if *last == v => *count += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// One-shot `v(p1, p2)`.
pub fn combine_count(p1: &Partition, p2: &Partition) -> Result<BigInt> {
    MergeCounter::new().count(p1, p2)
}

/// The Moser polynomial `sum_{j=1..k} (-1)^(j-1) j^(u-1) C(n, k-j)`.
///
/// This equals the determinant of the degree-`u` recovery matrix; a zero
/// value means the `(n, k)` pair cannot be solved through power sums.
pub fn moser_value(n: u32, k: u32, u: u32) -> BigInt {
    assert!(u >= 1, "moser_value needs u >= 1");
    let mut acc = BigInt::zero();
    for j in 1..=k {
        let term = BigInt::from(j).pow(u - 1) * binomial(n as i64, (k - j) as i64);
        if j % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    debug_assert_eq!(acc, moser_value_stirling(n, k, u), "Moser forms disagree at ({n},{k},{u})");
    acc
}

/// The same value through `sum_{i=1..u} (-1)^(i-1) (i-1)! S(u,i) C(n-i, k-i)`.
pub fn moser_value_stirling(n: u32, k: u32, u: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 1..=u {
        let c = binomial(n as i64 - i as i64, k as i64 - i as i64);
        if c.is_zero() {
            continue;
        }
        let term = factorial(i - 1) * stirling2(u, i) * c;
        if i % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `p(u, <= k)`, counted by the standard recurrence (independent of
/// [`partitions_at_most`]).
pub fn partition_count_at_most(u: u32, k: u32) -> BigInt {
    // table[a][b]: partitions of a into at most b parts
    let (u, k) = (u as usize, k as usize);
    let mut table = vec![vec![BigInt::zero(); k + 1]; u + 1];
    for row in table.iter_mut() {
        row[0] = BigInt::zero();
    }
    for b in 0..=k {
        table[0][b] = BigInt::one();
    }
    for a in 1..=u {
        for b in 1..=k {
            let mut v = table[a][b - 1].clone();
            if a >= b {
                v += &table[a - b][b];
            }
            table[a][b] = v;
        }
    }
    table[u][k].clone()
}
