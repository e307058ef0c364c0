//! From subset-sum moments to elementary symmetric values.
//!
//! For each degree `u` the `u`-th moment of the subset sums is a fixed
//! integer combination of the generalized power sums `P_p`, one per
//! partition `p` of `u` into at most `k` parts. Products of lower-degree
//! power sums give the remaining equations; the resulting square system is
//! the recovery matrix, and the first component of its solution is `P_u`.
//! Newton's identities then turn `P_1..P_n` into `e_0..e_n`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinatorics::{first_row_coefficient, partitions_at_most, MergeCounter, PartitionList};
use crate::error::Result;
use crate::linalg::{solve_linear, DenseMatrix, CONDITIONING_WARN_RATIO};
use crate::scalar::{NumericMode, Scalar};

/// `S_1..S_n`, the power moments of the subset sums.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector<S> {
    values: Vec<S>,
}

impl<S: Scalar> MomentVector<S> {
    pub fn new(values: Vec<S>) -> Self {
        MomentVector { values }
    }

    /// `S_u`, 1-based.
    pub fn get(&self, u: usize) -> &S {
        &self.values[u - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.values
    }
}

/// `P_1..P_n`, the power sums of the hidden multiset.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSumVector<S> {
    values: Vec<S>,
}

impl<S: Scalar> PowerSumVector<S> {
    pub fn new(values: Vec<S>) -> Self {
        PowerSumVector { values }
    }

    /// Power sums of an explicit multiset, `P_u = sum x^u` for `u = 1..=n`.
    pub fn of(xs: &[S], n: usize) -> Self {
        let mut values = vec![S::zero(); n];
        for x in xs {
            let mut power = S::one();
            for slot in values.iter_mut() {
                power = power * x.clone();
                *slot = slot.clone() + power.clone();
            }
        }
        PowerSumVector { values }
    }

    /// `P_u`, 1-based.
    pub fn get(&self, u: usize) -> &S {
        &self.values[u - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.values
    }
}

/// `e_0 = 1, e_1, ..., e_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementaryVector<S> {
    values: Vec<S>,
}

impl<S: Scalar> ElementaryVector<S> {
    pub fn new(values: Vec<S>) -> Self {
        assert!(values.first().is_some_and(|e0| *e0 == S::one()), "e_0 must be 1");
        ElementaryVector { values }
    }

    /// `e_i`, with `e_0 = 1`.
    pub fn get(&self, i: usize) -> &S {
        &self.values[i]
    }

    /// Degree `n`, i.e. one less than the number of stored values.
    pub fn degree(&self) -> usize {
        self.values.len() - 1
    }

    pub fn as_slice(&self) -> &[S] {
        &self.values
    }
}

/// Moments computed with one running power per sum.
pub fn compute_moments<S: Scalar>(sums: &[S], n: usize) -> MomentVector<S> {
    let mut values = vec![S::zero(); n];
    for b in sums {
        let mut power = S::one();
        for slot in values.iter_mut() {
            power = power * b.clone();
            *slot = slot.clone() + power.clone();
        }
    }
    MomentVector { values }
}

/// The degree-`u` linear system relating power-sum symbols to moments.
///
/// Row and column `i` belong to `partitions.entries[i]`. Row 0 is the moment
/// equation; row `i >= 1` expands the product of single power sums indexed by
/// that partition.
#[derive(Clone, Debug)]
pub struct RecoveryMatrix {
    pub u: u32,
    pub n: u32,
    pub k: u32,
    pub partitions: PartitionList,
    pub m: DenseMatrix<BigInt>,
}

impl RecoveryMatrix {
    pub fn order(&self) -> usize {
        self.partitions.len()
    }

    pub fn to_field<S: Scalar>(&self) -> DenseMatrix<S> {
        self.m.map(S::from_bigint)
    }
}

pub fn build_recovery_matrix(u: u32, n: u32, k: u32) -> RecoveryMatrix {
    build_with(&mut MergeCounter::new(), u, n, k)
}

fn build_with(counter: &mut MergeCounter, u: u32, n: u32, k: u32) -> RecoveryMatrix {
    let partitions = partitions_at_most(u, k);
    let entries = &partitions.entries;
    let order = entries.len();
    let mut m = DenseMatrix::from_fn(order, order, |_, _| BigInt::zero());
    for (j, p) in entries.iter().enumerate() {
        m.set(0, j, first_row_coefficient(p, n, k));
    }
    for i in 1..order {
        for j in 0..order {
            let v = counter.count(&entries[i], &entries[j]).expect("same weight by construction");
            m.set(i, j, v);
        }
    }
    RecoveryMatrix { u, n, k, partitions, m }
}

/// Every recovery matrix for one `(n, k)` pair, `u = 1..=n`.
#[derive(Clone, Debug)]
pub struct RecoverySystem {
    pub n: u32,
    pub k: u32,
    pub matrices: Vec<RecoveryMatrix>,
}

impl RecoverySystem {
    pub fn new(n: u32, k: u32) -> Self {
        let mut counter = MergeCounter::new();
        let matrices = (1..=n).map(|u| build_with(&mut counter, u, n, k)).collect();
        RecoverySystem { n, k, matrices }
    }

    pub fn matrix(&self, u: u32) -> &RecoveryMatrix {
        &self.matrices[u as usize - 1]
    }
}

/// Output of [`recover_power_sums`].
#[derive(Clone, Debug)]
pub struct PowerSumRecovery<S> {
    pub power_sums: PowerSumVector<S>,
    /// Full solution vector for each degree, ordered like the partition list
    /// of that degree. Entry 0 is `P_u`.
    pub systems: Vec<Vec<S>>,
    pub warnings: Vec<String>,
}

/// Recovers `P_1..P_n` from the moments, degree by degree.
///
/// Callers are expected to have checked that no Moser value vanishes; a
/// singular matrix is still reported as an error rather than a panic.
pub fn recover_power_sums<S: Scalar>(
    moments: &MomentVector<S>,
    n: u32,
    k: u32,
    mode: &NumericMode,
) -> Result<PowerSumRecovery<S>> {
    RecoverySystem::new(n, k).recover(moments, mode)
}

impl RecoverySystem {
    pub fn recover<S: Scalar>(
        &self,
        moments: &MomentVector<S>,
        mode: &NumericMode,
    ) -> Result<PowerSumRecovery<S>> {
        let mut power: Vec<S> = Vec::with_capacity(self.n as usize);
        let mut systems = Vec::with_capacity(self.n as usize);
        let mut warnings = Vec::new();
        for rm in &self.matrices {
            let u = rm.u as usize;
            let mut rhs = Vec::with_capacity(rm.order());
            rhs.push(moments.get(u).clone());
            for p in &rm.partitions.entries[1..] {
                let prod = p
                    .parts()
                    .iter()
                    .fold(S::one(), |acc, &part| acc * power[part as usize - 1].clone());
                rhs.push(prod);
            }
            let sol = solve_linear(&rm.to_field::<S>(), &rhs, mode)?;
            if let Some(ratio) = sol.pivot_ratio {
                if ratio < CONDITIONING_WARN_RATIO {
                    warnings.push(format!(
                        "ill-conditioned recovery system at u={u} (pivot ratio {ratio:.3e}); \
                         consider exact mode"
                    ));
                }
            }
            power.push(sol.x[0].clone());
            systems.push(sol.x);
        }
        Ok(PowerSumRecovery { power_sums: PowerSumVector::new(power), systems, warnings })
    }
}

/// Newton's identities: `i e_i = sum_{j=1..i} (-1)^(j-1) e_(i-j) P_j`.
pub fn newton_elementary<S: Scalar>(p: &PowerSumVector<S>, n: usize) -> ElementaryVector<S> {
    assert!(p.len() >= n, "need {n} power sums, have {}", p.len());
    let mut e = Vec::with_capacity(n + 1);
    e.push(S::one());
    for i in 1..=n {
        let mut acc = S::zero();
        for j in 1..=i {
            let term = e[i - j].clone() * p.get(j).clone();
            acc = if j % 2 == 1 { acc + term } else { acc - term };
        }
        e.push(acc / S::from_i64(i as i64));
    }
    ElementaryVector::new(e)
}

/// Elementary symmetric values by expanding `prod (x - x_i)` directly.
pub fn elementary_by_expansion<S: Scalar>(xs: &[S]) -> ElementaryVector<S> {
    // e[j] after processing a prefix is the j-th elementary value of the prefix
    let mut e = vec![S::one()];
    for x in xs {
        e.push(S::zero());
        for j in (1..e.len()).rev() {
            e[j] = e[j].clone() + e[j - 1].clone() * x.clone();
        }
    }
    ElementaryVector::new(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{factorial, moser_value, Partition};
    use crate::linalg::determinant_exact;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_i64(v)
    }

    fn qs(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x)).collect()
    }

    // k-subset sums by index enumeration, independent of the instance module
    fn subset_sums_oracle(x: &[i64], k: usize) -> Vec<i64> {
        let n = x.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k {
                out.push((0..n).filter(|i| mask >> i & 1 == 1).map(|i| x[i]).sum());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn moments_of_small_instance() {
        let sums = subset_sums_oracle(&[1, 2, 3, 4, 5], 2);
        assert_eq!(sums, vec![3, 4, 5, 5, 6, 6, 7, 7, 8, 9]);
        let m = compute_moments(&qs(&sums), 5);
        let direct = |u: u32| sums.iter().map(|&b| (b as i64).pow(u)).sum::<i64>();
        assert_eq!(*m.get(1), q(60));
        assert_eq!(*m.get(2), q(390));
        assert_eq!(*m.get(3), q(2700));
        for u in 1..=5 {
            assert_eq!(*m.get(u as usize), q(direct(u)));
        }
        let zero = compute_moments(&qs(&[0, 0, 0]), 4);
        assert!(zero.as_slice().iter().all(|v| *v == q(0)));
        assert_eq!(*compute_moments(&qs(&[7]), 1).get(1), q(7));
    }

    #[test]
    fn matrix_examples() {
        let m = build_recovery_matrix(2, 4, 2);
        assert_eq!(m.m.to_rows(), vec![vec![3.into(), 1.into()], vec![1.into(), 1.into()]] as Vec<Vec<BigInt>>);
        let m = build_recovery_matrix(1, 7, 3);
        assert_eq!(m.m.to_rows(), vec![vec![BigInt::from(15)]]);
        let m = build_recovery_matrix(3, 5, 2);
        assert_eq!(m.partitions.entries, vec![Partition::single(3), Partition::new(vec![1, 2]).unwrap()]);
        assert_eq!(m.m.to_rows(), vec![vec![4.into(), 3.into()], vec![1.into(), 1.into()]] as Vec<Vec<BigInt>>);
    }

    #[test]
    fn lower_rows_are_unit_triangular_by_length() {
        for (n, k) in [(8, 3), (10, 4), (12, 5)] {
            for u in 1..=n {
                let rm = build_recovery_matrix(u, n, k);
                let e = &rm.partitions.entries;
                for i in 1..rm.order() {
                    assert!(num_traits::One::is_one(rm.m.get(i, i)));
                    for j in 0..rm.order() {
                        if e[j].len() > e[i].len() || (e[j].len() == e[i].len() && i != j) {
                            assert!(rm.m.get(i, j).is_zero(), "u={u} ({},{})", e[i], e[j]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn determinant_matches_moser_small() {
        for n in 4..=7u32 {
            for k in 2..=n / 2 {
                for u in 1..=n {
                    let rm = build_recovery_matrix(u, n, k);
                    let det = determinant_exact(&rm.to_field::<BigRational>()).unwrap();
                    assert_eq!(det, BigRational::from_integer(moser_value(n, k, u)), "({n},{k},{u})");
                }
            }
        }
    }

    #[test]
    fn power_sums_of_small_instance() {
        let sums = qs(&subset_sums_oracle(&[1, 2, 3, 4, 5], 2));
        let rec = recover_power_sums(&compute_moments(&sums, 5), 5, 2, &NumericMode::exact()).unwrap();
        assert_eq!(rec.power_sums.as_slice(), qs(&[15, 55, 225, 979, 4425]).as_slice());
        assert_eq!(rec.systems.len(), 5);

        let zeros = qs(&[0; 10]);
        let rec = recover_power_sums(&compute_moments(&zeros, 5), 5, 2, &NumericMode::exact()).unwrap();
        assert!(rec.power_sums.as_slice().iter().all(|v| *v == q(0)));

        // all-equal hidden set: P_u = n c^u
        let c = 3i64;
        let sums = qs(&subset_sums_oracle(&[c; 6], 2));
        let rec = recover_power_sums(&compute_moments(&sums, 6), 6, 2, &NumericMode::exact()).unwrap();
        for u in 1..=6u32 {
            assert_eq!(*rec.power_sums.get(u as usize), q(6 * c.pow(u)));
        }
    }

    #[test]
    fn newton_examples() {
        let p = PowerSumVector::new(qs(&[15, 55, 225, 979, 4425]));
        assert_eq!(newton_elementary(&p, 5).as_slice(), qs(&[1, 15, 85, 225, 274, 120]).as_slice());
        assert_eq!(elementary_by_expansion(&qs(&[1, 2, 3, 4, 5])).as_slice(), qs(&[1, 15, 85, 225, 274, 120]).as_slice());
        let c = 2i64;
        let n = 5usize;
        let p = PowerSumVector::new((1..=n as u32).map(|u| q(n as i64 * c.pow(u))).collect());
        let e = newton_elementary(&p, n);
        for i in 0..=n {
            let want = crate::combinatorics::binomial(n as i64, i as i64) * BigInt::from(c.pow(i as u32));
            assert_eq!(*e.get(i), BigRational::from_integer(want));
        }
    }

    #[test]
    fn float_recovery_close_to_exact() {
        let x = [0.5, -1.25, 2.0, 3.5, 0.75];
        let mut sums = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                sums.push(x[i] + x[j]);
            }
        }
        let rec = recover_power_sums(&compute_moments(&sums, 5), 5, 2, &NumericMode::float()).unwrap();
        let direct = PowerSumVector::of(&x, 5);
        for u in 1..=5 {
            let (a, b) = (rec.power_sums.get(u), direct.get(u));
            assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "P_{u}: {a} vs {b}");
        }
        assert!(rec.warnings.is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn recovered_power_sums_match_direct(
            x in prop::collection::vec(-20i64..20, 4..9),
            k_pick in 0usize..4,
        ) {
            let n = x.len();
            let k = 2 + k_pick % (n / 2 - 1);
            prop_assume!((1..=n as u32).all(|u| !moser_value(n as u32, k as u32, u).is_zero()));
            let sums = qs(&subset_sums_oracle(&x, k));
            let rec = recover_power_sums(&compute_moments(&sums, n), n as u32, k as u32, &NumericMode::exact()).unwrap();
            let xq = qs(&x);
            let direct = PowerSumVector::of(&xq, n);
            prop_assert_eq!(rec.power_sums.as_slice(), direct.as_slice());
            // the (1,...,1) component of degree u <= k is u! e_u
            let e = elementary_by_expansion(&xq);
            for u in 1..=k.min(n) {
                let sys = &rec.systems[u - 1];
                let last = sys.last().unwrap().clone();
                prop_assert_eq!(last, e.get(u).clone() * BigRational::from_integer(factorial(u as u32)));
            }
        }

        #[test]
        fn newton_inverts_expansion(x in prop::collection::vec(-30i64..30, 1..10)) {
            let xq = qs(&x);
            let p = PowerSumVector::of(&xq, x.len());
            prop_assert_eq!(newton_elementary(&p, x.len()), elementary_by_expansion(&xq));
        }
    }
}
