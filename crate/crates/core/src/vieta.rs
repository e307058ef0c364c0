//! The symmetric-polynomial solver: moments, power sums, elementary values,
//! the Vieta polynomial, its roots, and verification against the input.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::{binomial, moser_value};
use crate::error::{Error, Result};
use crate::brute::extend_from_estimate;
use crate::instance::{subset_sums, verify_solution, Instance};
use crate::report::{Algorithm, MoserDiagnostics, SolveReport, Status};
use crate::roots::{find_real_roots, poly_from_elementary, projected_real_roots, rational_reconstruct, MonicPolynomial};
use crate::scalar::{multiset_equal, sort_scalars, NumericMode, Scalar};
use crate::symmetric::{compute_moments, newton_elementary, RecoverySystem};

/// Moser values `u = 1..=n` for the pair, after replacing `k` by `min(k, n-k)`.
pub fn check_moser(n: u32, k: u32) -> MoserDiagnostics {
    assert!(k >= 1 && k <= n, "check_moser needs 1 <= k <= n");
    let k = k.min(n - k);
    let mut values = Vec::with_capacity(n as usize);
    let mut singular_us = Vec::new();
    if k >= 1 {
        for u in 1..=n {
            let v = moser_value(n, k, u);
            if v.is_zero() {
                singular_us.push(u);
            }
            values.push((u, v));
        }
    }
    MoserDiagnostics { n, k, values, singular_us }
}

/// The `n` in `range` (with `k < n`) whose pair `(n, k)` is singular.
pub fn singular_scan(k: u32, range: std::ops::RangeInclusive<u32>) -> Vec<(u32, Vec<u32>)> {
    range
        .filter(|&n| k < n)
        .filter_map(|n| {
            let d = check_moser(n, k);
            d.is_singular().then_some((n, d.singular_us))
        })
        .collect()
}

/// Maps a `k > n/2` instance onto the equivalent `(n, n-k)` instance.
///
/// The total `P_1 = S_1 / C(n-1, k-1)` is recovered from the first moment and
/// every sum `b` becomes `P_1 - b`. Instances with `k <= n/2` are returned
/// unchanged.
pub fn complement_reduce<S: Scalar>(instance: &Instance<S>) -> Result<Instance<S>> {
    let (n, k) = (instance.n, instance.k);
    if 2 * k <= n {
        return Ok(instance.clone());
    }
    let total = total_from_sums(instance.sums(), n, k);
    let sums = instance.sums().iter().map(|b| total.clone() - b.clone()).collect();
    Ok(Instance::new(n, n - k, instance.mode, sums)?.with_warnings(instance.warnings.clone()))
}

/// `P_1`, the sum of the hidden elements.
pub(crate) fn total_from_sums<S: Scalar>(sums: &[S], n: u32, k: u32) -> S {
    let s1 = sums.iter().fold(S::zero(), |acc, b| acc + b.clone());
    s1 / S::from_bigint(&binomial(n as i64 - 1, k as i64 - 1))
}

#[derive(Clone, Debug)]
pub struct VietaOptions {
    pub mode: NumericMode,
    /// Largest denominator tried when certifying exact roots.
    pub max_denominator: u64,
}

impl VietaOptions {
    pub const DEFAULT_MAX_DENOMINATOR: u64 = 1_000_000;

    pub fn new(mode: NumericMode) -> Self {
        VietaOptions { mode, max_denominator: Self::DEFAULT_MAX_DENOMINATOR }
    }
}

pub fn solve_vieta<S: Scalar>(instance: &Instance<S>, opts: &VietaOptions) -> SolveReport<S> {
    let started = Instant::now();
    let mode = opts.mode;
    let (n, k) = (instance.n, instance.k);
    let mut report = SolveReport {
        algorithm: Algorithm::Vieta,
        status: Status::Inconsistent,
        n,
        k,
        mode,
        solutions: Vec::new(),
        moser: check_moser(n, k),
        verification: Vec::new(),
        warnings: Vec::new(),
        elapsed: Default::default(),
        iterations: None,
        power_sum_systems: Vec::new(),
    };

    match recover_candidate(instance, opts, &mut report) {
        Ok(Some(candidate)) => {
            let (ok, dev) = verify_solution(instance, &candidate, &mode);
            if ok {
                report.status = Status::Unique;
                report.solutions.push(candidate);
                report.verification.push(dev);
            } else {
                report.status = Status::Inconsistent;
                report.warnings.push(format!(
                    "candidate failed verification against the input sums (max deviation {})",
                    dev.to_canonical()
                ));
            }
        }
        Ok(None) => {}
        Err(e) => {
            report.status = Status::Inconsistent;
            report.warnings.push(e.to_string());
        }
    }
    report.elapsed = started.elapsed();
    report
}

// Returns the unverified candidate, or None when the report already carries
// a final status (singular, failed reconstruction).
fn recover_candidate<S: Scalar>(
    instance: &Instance<S>,
    opts: &VietaOptions,
    report: &mut SolveReport<S>,
) -> Result<Option<Vec<S>>> {
    let n = instance.n;
    let reduced = complement_reduce(instance)?;
    let k = reduced.k;
    if k == 1 {
        let mut xs = reduced.sums().to_vec();
        sort_scalars(&mut xs);
        return Ok(Some(xs));
    }
    if report.moser.is_singular() {
        report.status = Status::Singular;
        report.warnings.push(format!(
            "singular pair ({n},{k}): Moser value is zero at u = {:?}; the brute-force solver can still enumerate solutions",
            report.moser.singular_us
        ));
        return Ok(None);
    }

    // Float runs work on centered data: subtracting the mean element keeps
    // the high moments from cancelling catastrophically.
    let shift = if S::EXACT { S::zero() } else { total_from_sums(reduced.sums(), n, k) / S::from_i64(n as i64) };
    let k_shift = shift.clone() * S::from_i64(k as i64);
    let sums: Vec<S> = reduced.sums().iter().map(|b| b.clone() - k_shift.clone()).collect();

    let moments = compute_moments(&sums, n as usize);
    let recovery = RecoverySystem::new(n, k).recover(&moments, &opts.mode)?;
    report.warnings.extend(recovery.warnings.iter().cloned());
    let e = newton_elementary(&recovery.power_sums, n as usize);
    report.power_sum_systems = recovery.systems;
    let poly = poly_from_elementary(&e, n as usize);
    let roots = match find_real_roots(&poly, &opts.mode) {
        Err(Error::NonRealRoots { re, im }) if !S::EXACT => {
            // a near-double element can split into a complex pair; project and
            // let the refinement and the final verification decide
            report.warnings.push(format!("projected a non-real root {re} + {im}i onto the real axis"));
            projected_real_roots(&poly)
        }
        other => other?,
    };

    if S::EXACT {
        let exact = MonicPolynomial::new(
            poly.coeffs().iter().map(|c| c.to_rational().expect("exact")).collect::<Vec<BigRational>>(),
        )?;
        match rational_reconstruct(&roots, opts.max_denominator, &exact) {
            Some(xs) => Ok(Some(xs.iter().map(S::from_rational).collect())),
            None => {
                report.status = Status::Inconsistent;
                report.warnings.push(format!(
                    "polynomial roots are not rationals with denominator <= {}",
                    opts.max_denominator
                ));
                Ok(None)
            }
        }
    } else {
        let mut xs: Vec<S> = roots.roots.iter().map(|&r| S::from_f64(r)).collect();
        let mut sorted_sums = sums.clone();
        sort_scalars(&mut sorted_sums);
        for _ in 0..REFINE_ROUNDS {
            if !refine_against_sums(&mut xs, &sorted_sums, k) {
                break;
            }
        }
        if !multiset_equal(&subset_sums(&xs, k as usize), &sorted_sums, &opts.mode).0 {
            // close elements are poorly resolved by the roots; rebuild them
            // from sum differences seeded by the estimate
            if let Some(found) = extend_from_estimate(&sorted_sums, n, k, &opts.mode, &xs, SEED_CANDIDATES) {
                xs = found;
            }
        }
        let mut xs: Vec<S> = xs.into_iter().map(|x| x + shift.clone()).collect();
        sort_scalars(&mut xs);
        Ok(Some(xs))
    }
}

const REFINE_ROUNDS: usize = 30;
const SEED_CANDIDATES: usize = 8;

/// One least-squares step of the elements against the subset sums.
///
/// Candidate `k`-subsets are ranked by their sum and paired with the sorted
/// input; the normal equations `(aI + cJ) x = r`, with `a = C(n-2, k-1)`,
/// `c = C(n-2, k-2)` and `r_i` the total of the sums paired with subsets
/// containing `i`, have a closed-form solution. Returns false when there is
/// nothing to do (`n > 64` or no change).
pub fn refine_against_sums<S: Scalar>(xs: &mut Vec<S>, sums: &[S], k: u32) -> bool {
    let n = xs.len();
    if n > 64 || k < 1 || k as usize >= n {
        return false;
    }
    sort_scalars(xs);
    let mut subsets: Vec<(S, u64)> = Vec::with_capacity(sums.len());
    let mut idx: Vec<usize> = (0..k as usize).collect();
    loop {
        let total = idx.iter().fold(S::zero(), |acc, &i| acc + xs[i].clone());
        subsets.push((total, idx.iter().fold(0u64, |m, &i| m | 1 << i)));
        // next combination
        let mut pos = idx.len();
        while pos > 0 && idx[pos - 1] == n - idx.len() + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        idx[pos - 1] += 1;
        for t in pos..idx.len() {
            idx[t] = idx[t - 1] + 1;
        }
    }
    if subsets.len() != sums.len() {
        return false;
    }
    subsets.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut r = vec![S::zero(); n];
    for ((_, mask), b) in subsets.iter().zip(sums) {
        for (i, ri) in r.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                *ri = ri.clone() + b.clone();
            }
        }
    }
    let a = S::from_bigint(&binomial(n as i64 - 2, k as i64 - 1));
    let c = S::from_bigint(&binomial(n as i64 - 2, k as i64 - 2));
    let big_r = r.iter().fold(S::zero(), |acc, v| acc + v.clone());
    let common = c.clone() * big_r / (a.clone() + S::from_i64(n as i64) * c);
    let next: Vec<S> = r.into_iter().map(|ri| (ri - common.clone()) / a.clone()).collect();
    let changed = next != *xs;
    *xs = next;
    sort_scalars(xs);
    changed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::subset_sums;
    use num_bigint::BigInt;

    fn qv(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_i64(x)).collect()
    }

    fn exact_instance(x: &[i64], k: u32) -> Instance<BigRational> {
        Instance::new(x.len() as u32, k, NumericMode::exact(), subset_sums(&qv(x), k as usize)).unwrap()
    }

    #[test]
    fn moser_diagnostics() {
        assert_eq!(check_moser(4, 2).singular_us, vec![3]);
        let d = check_moser(5, 2);
        assert!(d.singular_us.is_empty());
        let vals: Vec<BigInt> = d.values.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(vals, [4, 3, 1, -3, -11].map(BigInt::from).to_vec());
        assert_eq!(check_moser(8, 2).singular_us, vec![4]);
        // complement normalization
        assert_eq!(check_moser(8, 6).singular_us, vec![4]);
        assert_eq!(check_moser(8, 6).k, 2);
    }

    #[test]
    fn complement_examples() {
        let inst = exact_instance(&[1, 2, 3, 4, 5], 3);
        let red = complement_reduce(&inst).unwrap();
        assert_eq!(red.k, 2);
        assert_eq!(red.sums(), subset_sums(&qv(&[1, 2, 3, 4, 5]), 2).as_slice());

        let inst = exact_instance(&[1, 2, 3, 4, 5], 2);
        assert_eq!(complement_reduce(&inst).unwrap(), inst);

        let red = complement_reduce(&exact_instance(&[0, 0, 0, 0], 3)).unwrap();
        assert!(red.sums().iter().all(Zero::is_zero));
    }

    #[test]
    fn solves_small_instance() {
        let inst = exact_instance(&[1, 2, 3, 4, 5], 2);
        let rep = solve_vieta(&inst, &VietaOptions::new(NumericMode::exact()));
        assert_eq!(rep.status, Status::Unique);
        assert_eq!(rep.solutions, vec![qv(&[1, 2, 3, 4, 5])]);
        assert_eq!(rep.verification, qv(&[0]));
        assert_eq!(rep.power_sum_systems.len(), 5);
    }

    #[test]
    fn singular_pair_is_refused() {
        let rep = solve_vieta(&exact_instance(&[1, 4, 5, 6], 2), &VietaOptions::new(NumericMode::exact()));
        assert_eq!(rep.status, Status::Singular);
        assert_eq!(rep.moser.singular_us, vec![3]);
        assert!(rep.solutions.is_empty());
    }

    #[test]
    fn tampered_sums_are_inconsistent() {
        let mut sums = subset_sums(&qv(&[1, 2, 3, 4, 5]), 2);
        sums[4] = sums[4].clone() + BigRational::from_i64(1);
        let inst = Instance::new(5, 2, NumericMode::exact(), sums).unwrap();
        let rep = solve_vieta(&inst, &VietaOptions::new(NumericMode::exact()));
        assert_eq!(rep.status, Status::Inconsistent);
        assert!(!rep.warnings.is_empty());
    }

    #[test]
    fn k_one_and_small_complements() {
        let inst = Instance::new(3, 1, NumericMode::exact(), qv(&[5, -1, 2])).unwrap();
        let rep = solve_vieta(&inst, &VietaOptions::new(NumericMode::exact()));
        assert_eq!(rep.solutions, vec![qv(&[-1, 2, 5])]);
        let rep = solve_vieta(&exact_instance(&[4, -2, 9], 2), &VietaOptions::new(NumericMode::exact()));
        assert_eq!(rep.status, Status::Unique);
        assert_eq!(rep.solutions, vec![qv(&[-2, 4, 9])]);
    }

    #[test]
    fn repeated_elements() {
        let rep = solve_vieta(&exact_instance(&[3, 3, 3, -7, -7, 10], 2), &VietaOptions::new(NumericMode::exact()));
        assert_eq!(rep.status, Status::Unique);
        assert_eq!(rep.solutions, vec![qv(&[-7, -7, 3, 3, 3, 10])]);
    }

    #[test]
    fn float_small_instance() {
        let x = [0.25, 0.5, 0.125, 0.875, 0.625];
        let inst = Instance::new(5, 2, NumericMode::float(), subset_sums(&x, 2)).unwrap();
        let rep = solve_vieta(&inst, &VietaOptions::new(NumericMode::float()));
        assert_eq!(rep.status, Status::Unique, "{:?}", rep.warnings);
        let want = [0.125, 0.25, 0.5, 0.625, 0.875];
        for (a, b) in rep.solutions[0].iter().zip(want) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn k2_singular_ns_are_powers_of_two() {
        let ns: Vec<u32> = singular_scan(2, 1..=70).into_iter().map(|(n, _)| n).collect();
        assert_eq!(ns, vec![4, 8, 16, 32, 64]);
    }
}
