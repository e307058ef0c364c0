//! Sorted-window exhaustive search.
//!
//! With `x_1 <= ... <= x_n` and sums sorted ascending, the `k+1` sums of the
//! `k`-subsets of `{x_1, ..., x_{k+1}}` sit at known-bounded positions: the
//! two smallest sums are always the first two, and the `i`-th one lies in a
//! window ending at `C(n-(k-i+2), i-2) + 1`. Each choice of positions gives a
//! `(k+1)`-square system with an explicit inverse; its solution seeds an
//! extension that peels off one new element per step from the smallest
//! unmatched sum and scratches out every sum it implies.

use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::One;

use crate::combinatorics::binomial;
use crate::error::Result;
use crate::instance::{verify_solution, Instance};
use crate::linalg::DenseMatrix;
use crate::report::{Algorithm, SolveReport, Status};
use crate::scalar::{multiset_equal, sort_scalars, NumericMode, Scalar};
use crate::vieta::{check_moser, complement_reduce};

/// The `(k+1)`-square all-ones matrix with a zero anti-diagonal, and its
/// inverse (`1/k` off the anti-diagonal, `-(k-1)/k` on it).
#[derive(Clone, Debug)]
pub struct SeedSystem<S> {
    pub k: u32,
    pub inverse: DenseMatrix<S>,
}

pub fn anti_diagonal_ones<S: Scalar>(k: u32) -> DenseMatrix<S> {
    let order = k as usize + 1;
    DenseMatrix::from_fn(order, order, |i, j| if i + j == order - 1 { S::zero() } else { S::one() })
}

pub fn seed_inverse<S: Scalar>(k: u32) -> SeedSystem<S> {
    assert!(k >= 2, "seed system needs k >= 2");
    let order = k as usize + 1;
    let kk = S::from_i64(k as i64);
    let off = S::one() / kk.clone();
    let on = -(S::from_i64(k as i64 - 1) / kk);
    SeedSystem {
        k,
        inverse: DenseMatrix::from_fn(order, order, |i, j| {
            if i + j == order - 1 {
                on.clone()
            } else {
                off.clone()
            }
        }),
    }
}

/// Worst-case number of cursor tuples, `prod_{i=1..k-1} (C(n-k+i, i) - i)`.
pub fn iteration_bound(n: u32, k: u32) -> BigInt {
    (1..k).fold(BigInt::one(), |acc, i| {
        acc * (binomial((n - k + i) as i64, i as i64) - BigInt::from(i))
    })
}

/// Last admissible 1-based sorted position for seed sums `3..=k+1`,
/// `C(n-(k-i+2), i-2) + 1`, clamped to the number of sums.
pub fn window_bounds(n: u32, k: u32) -> Vec<usize> {
    let m = binomial(n as i64, k as i64);
    (3..=k + 1)
        .map(|i| {
            let w: BigInt = binomial(n as i64 - (k as i64 - i as i64 + 2), i as i64 - 2) + 1;
            w.min(m.clone()).try_into().expect("window fits in usize")
        })
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct BruteOptions {
    /// Keep searching after the first hit and report every distinct solution.
    pub find_all: bool,
    /// Worker threads over the cursor space; 0 or 1 runs single-threaded.
    pub jobs: usize,
    /// Incremented once per cursor tuple, for progress reporting.
    pub progress: Option<Arc<AtomicU64>>,
}

struct Hit<S> {
    cursor: Vec<usize>,
    elements: Vec<S>,
}

struct Search<'a, S> {
    sums: &'a [S],
    n: usize,
    k: usize,
    mode: NumericMode,
    inverse: DenseMatrix<S>,
    windows: Vec<usize>,
    progress: Option<Arc<AtomicU64>>,
}

impl<S: Scalar> Search<'_, S> {
    // Enumerates cursor tuples whose first free position satisfies `pick`,
    // in lexicographic order.
    fn run(&self, find_all: bool, pick: impl Fn(usize) -> bool) -> (Vec<Hit<S>>, u64) {
        let mut hits = Vec::new();
        let mut iterations = 0u64;
        // 1-based positions of seed sums 3..=k+1
        let mut cursor: Vec<usize> = (3..=self.k + 1).collect();
        if cursor.iter().zip(&self.windows).any(|(c, w)| c > w) {
            return (hits, iterations);
        }
        let mut alive = vec![true; self.sums.len()];
        loop {
            if pick(cursor[0]) {
                iterations += 1;
                if let Some(p) = &self.progress {
                    p.fetch_add(1, AtomicOrdering::Relaxed);
                }
                if let Some(elements) = self.try_cursor(&cursor, &mut alive) {
                    hits.push(Hit { cursor: cursor.clone(), elements });
                    if !find_all {
                        return (hits, iterations);
                    }
                }
            }
            if !self.advance(&mut cursor) {
                return (hits, iterations);
            }
        }
    }

    // Next strictly increasing tuple inside the windows, in lexicographic order.
    fn advance(&self, cursor: &mut [usize]) -> bool {
        for pos in (0..cursor.len()).rev() {
            let fits = (pos..cursor.len()).all(|t| cursor[pos] + 1 + (t - pos) <= self.windows[t]);
            if fits {
                let base = cursor[pos] + 1;
                for (off, c) in cursor[pos..].iter_mut().enumerate() {
                    *c = base + off;
                }
                return true;
            }
        }
        false
    }

    fn try_cursor(&self, cursor: &[usize], alive: &mut [bool]) -> Option<Vec<S>> {
        let mut seed = Vec::with_capacity(self.k + 1);
        seed.push(self.sums[0].clone());
        seed.push(self.sums[1].clone());
        seed.extend(cursor.iter().map(|&c| self.sums[c - 1].clone()));
        let xs = self.inverse.mul_vec(&seed).ok()?;
        for w in xs.windows(2) {
            if w[1] < w[0] && !self.mode.close(&w[0], &w[1]) {
                return None;
            }
        }

        alive.iter_mut().for_each(|a| *a = true);
        alive[0] = false;
        alive[1] = false;
        for &c in cursor {
            alive[c - 1] = false;
        }
        let mut pool = Pool { sums: self.sums, alive, first: 0, mode: self.mode };

        // by_size[i] holds every i-subset sum of the known elements
        let mut by_size: Vec<Vec<S>> = vec![Vec::new(); self.k];
        by_size[0].push(S::zero());
        let mut known: Vec<S> = Vec::with_capacity(self.n);
        for x in &xs {
            add_element(&mut by_size, x);
            known.push(x.clone());
        }
        let base = xs[..self.k - 1].iter().fold(S::zero(), |acc, v| acc + v.clone());

        while known.len() < self.n {
            let smallest = pool.smallest()?;
            let x = smallest - base.clone();
            for t in &by_size[self.k - 1] {
                if !pool.take(&(t.clone() + x.clone())) {
                    return None;
                }
            }
            add_element(&mut by_size, &x);
            known.push(x);
        }
        if pool.smallest().is_some() {
            return None;
        }
        sort_scalars(&mut known);
        Some(known)
    }
}

/// Seeded extension from an approximate solution.
///
/// The estimate predicts the seed sums; only sorted positions close to the
/// predictions are tried (at most `per_slot` per seed sum, nearest first).
/// `sums` must be sorted and `2 <= k < n`.
pub fn extend_from_estimate<S: Scalar>(
    sums: &[S],
    n: u32,
    k: u32,
    mode: &NumericMode,
    estimate: &[S],
    per_slot: usize,
) -> Option<Vec<S>> {
    if k < 2 || k >= n || estimate.len() != n as usize {
        return None;
    }
    let k_us = k as usize;
    let mut est = estimate.to_vec();
    sort_scalars(&mut est);
    let head = est[..=k_us].iter().fold(S::zero(), |acc, v| acc + v.clone());
    let search = Search {
        sums,
        n: n as usize,
        k: k_us,
        mode: *mode,
        inverse: seed_inverse::<S>(k).inverse,
        windows: window_bounds(n, k),
        progress: None,
    };
    // seed sum i (1-based, i >= 3) leaves out x_{k+2-i}
    let slots: Vec<Vec<usize>> = (3..=k_us + 1)
        .map(|i| {
            let target = (head.clone() - est[k_us + 1 - i].clone()).to_f64();
            let hi = search.windows[i - 3];
            let mut near: Vec<usize> = (i..=hi).collect();
            near.sort_by(|&a, &b| (sums[a - 1].to_f64() - target).abs().total_cmp(&(sums[b - 1].to_f64() - target).abs()));
            near.truncate(per_slot);
            near
        })
        .collect();
    let mut alive = vec![true; sums.len()];
    let mut pick = vec![0usize; slots.len()];
    loop {
        let cursor: Vec<usize> = pick.iter().zip(&slots).map(|(&p, s)| s[p]).collect();
        if cursor.windows(2).all(|w| w[0] < w[1]) {
            if let Some(found) = search.try_cursor(&cursor, &mut alive) {
                return Some(found);
            }
        }
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < slots[pos].len() {
                break;
            }
            pick[pos] = 0;
        }
    }
}

fn add_element<S: Scalar>(by_size: &mut [Vec<S>], x: &S) {
    for size in (1..by_size.len()).rev() {
        let extended: Vec<S> = by_size[size - 1].iter().map(|t| t.clone() + x.clone()).collect();
        by_size[size].extend(extended);
    }
}

// Sorted sums with a removal mask.
struct Pool<'a, S> {
    sums: &'a [S],
    alive: &'a mut [bool],
    first: usize,
    mode: NumericMode,
}

impl<S: Scalar> Pool<'_, S> {
    fn smallest(&mut self) -> Option<S> {
        while self.first < self.sums.len() && !self.alive[self.first] {
            self.first += 1;
        }
        self.sums.get(self.first).cloned()
    }

    // Removes the first live entry matching `probe`.
    fn take(&mut self, probe: &S) -> bool {
        let start = if S::EXACT {
            self.sums.partition_point(|v| v < probe)
        } else {
            let p = probe.to_f64();
            let tol = self.mode.epsilon_abs.max(self.mode.epsilon_rel * p.abs());
            self.sums.partition_point(|v| v.to_f64() < p - tol)
        };
        for i in start..self.sums.len() {
            if !self.mode.close(&self.sums[i], probe) {
                if self.sums[i] > *probe {
                    return false;
                }
                continue;
            }
            if self.alive[i] {
                self.alive[i] = false;
                return true;
            }
        }
        false
    }
}

pub fn solve_brute<S: Scalar>(
    instance: &Instance<S>,
    opts: &BruteOptions,
    mode: &NumericMode,
) -> Result<SolveReport<S>> {
    let started = Instant::now();
    let (n, k) = (instance.n, instance.k);
    let mut report = SolveReport {
        algorithm: Algorithm::Brute,
        status: Status::NoSolution,
        n,
        k,
        mode: *mode,
        solutions: Vec::new(),
        moser: check_moser(n, k),
        verification: Vec::new(),
        warnings: Vec::new(),
        elapsed: Default::default(),
        iterations: Some(0),
        power_sum_systems: Vec::new(),
    };

    let reduced = complement_reduce(instance)?;
    let candidates: Vec<Vec<S>> = if reduced.k == 1 {
        let mut xs = reduced.sums().to_vec();
        sort_scalars(&mut xs);
        vec![xs]
    } else {
        let search = Search {
            sums: reduced.sums(),
            n: n as usize,
            k: reduced.k as usize,
            mode: *mode,
            inverse: seed_inverse::<S>(reduced.k).inverse,
            windows: window_bounds(n, reduced.k),
            progress: opts.progress.clone(),
        };
        let (mut hits, iterations) = run_search(&search, opts);
        report.iterations = Some(iterations);
        hits.sort_by(|a, b| a.cursor.cmp(&b.cursor));
        if !opts.find_all {
            hits.truncate(1);
        }
        hits.into_iter().map(|h| h.elements).collect()
    };

    for cand in candidates {
        let (ok, dev) = verify_solution(instance, &cand, mode);
        if !ok {
            report.warnings.push(format!("discarded a candidate failing verification ({})", dev.to_canonical()));
            continue;
        }
        if report.solutions.iter().any(|s| multiset_equal(s, &cand, mode).0) {
            continue;
        }
        report.solutions.push(cand);
        report.verification.push(dev);
    }
    // canonical order for reporting
    let mut paired: Vec<(Vec<S>, S)> = report.solutions.drain(..).zip(report.verification.drain(..)).collect();
    paired.sort_by(|a, b| cmp_multisets(&a.0, &b.0));
    for (s, d) in paired {
        report.solutions.push(s);
        report.verification.push(d);
    }

    report.status = match report.solutions.len() {
        0 => Status::NoSolution,
        1 => Status::Unique,
        _ => Status::Multiple,
    };
    report.elapsed = started.elapsed();
    Ok(report)
}

fn cmp_multisets<S: Scalar>(a: &[S], b: &[S]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.total_cmp(y);
        if o.is_ne() {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

fn run_search<S: Scalar>(search: &Search<'_, S>, opts: &BruteOptions) -> (Vec<Hit<S>>, u64) {
    let jobs = opts.jobs.max(1);
    if jobs == 1 {
        return search.run(opts.find_all, |_| true);
    }
    std::thread::scope(|scope| {
        let workers: Vec<_> = (0..jobs)
            .map(|j| scope.spawn(move || search.run(opts.find_all, move |c| (c - 3) % jobs == j)))
            .collect();
        let mut hits = Vec::new();
        let mut iterations = 0;
        for w in workers {
            let (h, it) = w.join().expect("brute-force worker panicked");
            hits.extend(h);
            iterations += it;
        }
        (hits, iterations)
    })
}
