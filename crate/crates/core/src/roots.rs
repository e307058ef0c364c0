//! Vieta polynomial assembly and real-root extraction.
//!
//! Roots are found with Aberth–Ehrlich simultaneous iteration followed by a
//! per-root Newton polish. Exact polynomials are first split into square-free
//! factors (Yun's algorithm) so that repeated hidden elements become simple
//! roots of a lower-degree factor instead of ill-conditioned clusters.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, NumericMode};
use crate::symmetric::ElementaryVector;

/// Monic polynomial, coefficients in ascending degree (`coeffs[degree] = 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct MonicPolynomial<S> {
    coeffs: Vec<S>,
}

impl<S: scalar::Scalar> MonicPolynomial<S> {
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        match coeffs.last() {
            Some(lead) if *lead == S::one() && coeffs.len() >= 2 => Ok(MonicPolynomial { coeffs }),
            _ => Err(Error::Dimension("polynomial must be monic with degree >= 1".into())),
        }
    }

    /// `prod (x - r)` over the given roots.
    pub fn from_roots(roots: &[S]) -> Self {
        let mut coeffs = vec![S::one()];
        for r in roots {
            coeffs.insert(0, S::zero());
            for i in 0..coeffs.len() - 1 {
                coeffs[i] = coeffs[i].clone() - r.clone() * coeffs[i + 1].clone();
            }
        }
        MonicPolynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(S::to_f64).collect()
    }
}

/// `x^n + sum (-1)^i e_i x^(n-i)`.
pub fn poly_from_elementary<S: scalar::Scalar>(e: &ElementaryVector<S>, n: usize) -> MonicPolynomial<S> {
    assert!(e.degree() >= n && n >= 1, "need e_0..e_{n}");
    let mut coeffs = vec![S::zero(); n + 1];
    for i in 0..=n {
        let v = e.get(i).clone();
        coeffs[n - i] = if i % 2 == 0 { v } else { -v };
    }
    MonicPolynomial { coeffs }
}

/// Real roots with multiplicity, sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<f64>,
    /// `|f(root)|` evaluated in binary64.
    pub residuals: Vec<f64>,
}

/// Imaginary parts up to `IMAG_TOL * (1 + |re|)` are treated as rounding.
pub const IMAG_TOL: f64 = 1e-7;
/// Roots closer than `CLUSTER_TOL * scale` are merged into one multiple root.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Largest imaginary part, relative to the root scale, still read as a split
/// multiple root rather than a genuinely complex one.
pub const SPLIT_TOL: f64 = 1e-3;

pub fn find_real_roots<S: scalar::Scalar>(poly: &MonicPolynomial<S>, _mode: &NumericMode) -> Result<RootSet> {
    let full = poly.to_f64();
    let mut roots = Vec::with_capacity(poly.degree());
    if S::EXACT {
        let exact: Vec<BigRational> =
            poly.coeffs.iter().map(|c| c.to_rational().expect("exact coefficient")).collect();
        for (factor, mult) in square_free_factors(&exact) {
            // centre the factor exactly so the float iteration sees small roots
            let deg = factor.len() - 1;
            let center = -&factor[deg - 1] / BigRational::from_integer(BigInt::from(deg));
            let shifted = taylor_shift_exact(&factor, &center);
            let f: Vec<f64> = shifted.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
            let c0 = center.to_f64().unwrap_or(f64::NAN);
            for r in simple_real_roots(&f)? {
                roots.extend(std::iter::repeat_n(r + c0, mult));
            }
        }
    } else {
        roots = clustered_real_roots(&full)?;
    }
    roots.sort_by(f64::total_cmp);
    let residuals = roots.iter().map(|&r| horner(&full, r).abs()).collect();
    Ok(RootSet { roots, residuals })
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

fn horner_c(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &v in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + v;
    }
    (p, dp)
}

/// All complex roots of a monic float polynomial by Aberth–Ehrlich iteration.
pub fn aberth(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    if n == 1 {
        return vec![Complex64::new(-c[0], 0.0)];
    }
    let center = -c[n - 1] / n as f64;
    // Fujiwara-style bound around the centroid of the roots
    let shifted = taylor_shift(c, center);
    let radius = (0..n)
        .map(|i| shifted[i].abs().powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 1.5;
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let theta = std::f64::consts::TAU * j as f64 / n as f64 + 0.4;
            Complex64::new(center, 0.0) + Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..2000 {
        let mut worst = 0.0f64;
        for j in 0..n {
            let (p, dp) = horner_c(c, z[j]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 =
                (0..n).filter(|&l| l != j).map(|l| (z[j] - z[l]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[j] -= step;
            worst = worst.max(step.norm() / (1.0 + z[j].norm()));
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

fn taylor_shift(c: &[f64], t: f64) -> Vec<f64> {
    // coefficients of f(x + t)
    let mut a = c.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            a[j] += t * a[j + 1];
        }
    }
    a
}

fn newton_polish_complex(c: &[f64], z: Complex64) -> Complex64 {
    let mut z = z;
    let mut best = horner_c(c, z).0.norm();
    for _ in 0..50 {
        let (p, dp) = horner_c(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let r = horner_c(c, next).0.norm();
        if !(r < best) {
            break;
        }
        best = r;
        z = next;
    }
    z
}

fn newton_polish_real(c: &[f64], x: f64, mult: usize) -> f64 {
    let deriv: Vec<f64> = (1..c.len()).map(|i| c[i] * i as f64).collect();
    let mut x = x;
    let mut best = horner(c, x).abs();
    for _ in 0..100 {
        let d = horner(&deriv, x);
        if d == 0.0 || best == 0.0 {
            break;
        }
        let next = x - mult as f64 * horner(c, x) / d;
        let r = horner(c, next).abs();
        if !(r < best) {
            break;
        }
        best = r;
        x = next;
    }
    x
}

fn check_real(z: Complex64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * (1.0 + z.re.abs()) {
        return Err(Error::NonRealRoots { re: z.re, im: z.im });
    }
    Ok(z.re)
}

fn simple_real_roots(c: &[f64]) -> Result<Vec<f64>> {
    aberth(c)
        .into_iter()
        .map(|z| {
            let z = newton_polish_complex(c, z);
            check_real(z).map(|re| newton_polish_real(c, re, 1))
        })
        .collect()
}

/// Real parts of all polished complex roots, sorted.
pub fn projected_real_roots<S: scalar::Scalar>(poly: &MonicPolynomial<S>) -> RootSet {
    let c = poly.to_f64();
    let mut roots: Vec<f64> = aberth(&c).into_iter().map(|z| newton_polish_complex(&c, z).re).collect();
    roots.sort_by(f64::total_cmp);
    let residuals = roots.iter().map(|&r| horner(&c, r).abs()).collect();
    RootSet { roots, residuals }
}

fn clustered_real_roots(c: &[f64]) -> Result<Vec<f64>> {
    let mut zs: Vec<Complex64> = aberth(c).into_iter().map(|z| newton_polish_complex(c, z)).collect();
    zs.sort_by(|a, b| a.re.total_cmp(&b.re));
    let scale = 1.0 + zs.iter().map(|z| z.norm()).fold(0.0, f64::max);

    // A perturbed m-fold root splits into a small ring of m points; pull every
    // root within a few imaginary widths of a non-real one into its cluster.
    let mut parent: Vec<usize> = (0..zs.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..zs.len() {
        let im = zs[i].im.abs();
        let reach = if im > IMAG_TOL * (1.0 + zs[i].re.abs()) && im <= SPLIT_TOL * scale {
            2.5 * im
        } else {
            CLUSTER_TOL * scale
        };
        for j in 0..zs.len() {
            if j != i && (zs[j] - zs[i]).norm() <= reach {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; zs.len()];
    for i in 0..zs.len() {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }

    let mut out = Vec::with_capacity(zs.len());
    for g in groups {
        let mult = g.len();
        let mean = g.iter().map(|&i| zs[i]).sum::<Complex64>() / mult as f64;
        // merged groups are real by construction; the caller verifies them
        let polished = if mult == 1 { newton_polish_real(c, check_real(mean)?, 1) } else { mean.re };
        out.extend(std::iter::repeat_n(polished, mult));
    }
    Ok(out)
}

// --- exact polynomial helpers (ascending coefficients over the rationals) ---

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn is_constant(p: &[BigRational]) -> bool {
    p.len() <= 1
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    (1..p.len()).map(|i| &p[i] * BigRational::from_integer(BigInt::from(i))).collect()
}

fn make_monic(mut p: Vec<BigRational>) -> Vec<BigRational> {
    trim(&mut p);
    let lead = p.last().cloned().expect("non-empty");
    if !lead.is_zero() && !lead.is_one() {
        for c in p.iter_mut() {
            *c = &*c / &lead;
        }
    }
    p
}

fn div_rem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let dlen = den.len();
    let lead = den.last().expect("non-empty divisor").clone();
    if rem.len() < dlen {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dlen + 1];
    for i in (0..quot.len()).rev() {
        let coef = &rem[i + dlen - 1] / &lead;
        if !coef.is_zero() {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &coef * d;
            }
        }
        quot[i] = coef;
    }
    rem.truncate(dlen - 1);
    if rem.is_empty() {
        rem.push(BigRational::zero());
    }
    trim(&mut rem);
    (quot, rem)
}

fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0].is_zero()) {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    make_monic(a)
}

/// Yun's square-free decomposition: pairs `(a_i, i)` with `f = prod a_i^i`,
/// each `a_i` monic and of positive degree.
pub fn square_free_factors(f: &[BigRational]) -> Vec<(Vec<BigRational>, usize)> {
    let f = make_monic(f.to_vec());
    let mut out = Vec::new();
    if is_constant(&f) {
        return out;
    }
    let df = derivative(&f);
    let g = gcd(&f, &df);
    let mut c = div_rem(&f, &g).0;
    let mut d = {
        let q = div_rem(&df, &g).0;
        sub(&q, &derivative(&c))
    };
    let mut i = 1;
    while !is_constant(&c) {
        let a = gcd(&c, &d);
        let next_c = div_rem(&c, &a).0;
        d = sub(&div_rem(&d, &a).0, &derivative(&next_c));
        if !is_constant(&a) {
            out.push((a, i));
        }
        c = next_c;
        i += 1;
    }
    out
}

fn taylor_shift_exact(c: &[BigRational], t: &BigRational) -> Vec<BigRational> {
    let mut a = c.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let add = t * &a[j + 1];
            a[j] += add;
        }
    }
    a
}

fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Closest rational with denominator at most `max_den` (continued-fraction
/// convergents and the best semiconvergent).
pub fn limit_denominator(x: &BigRational, max_den: &BigInt) -> BigRational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
    }
    let steps = (max_den - &q0).div_floor(&q1);
    let semi = BigRational::new(&p0 + &steps * &p1, &q0 + &steps * &q1);
    let conv = BigRational::new(p1, q1);
    if (&conv - x).abs() <= (&semi - x).abs() {
        conv
    } else {
        semi
    }
}

/// Rounds each float root to a nearby small-denominator rational and keeps
/// the result only if the candidates divide the polynomial exactly, down to
/// the constant 1.
pub fn rational_reconstruct(
    roots: &RootSet,
    max_denominator: u64,
    poly: &MonicPolynomial<BigRational>,
) -> Option<Vec<BigRational>> {
    let max_den = BigInt::from(max_denominator);
    let mut candidates = Vec::with_capacity(roots.roots.len());
    for &r in &roots.roots {
        let exact = BigRational::from_f64(r)?;
        candidates.push(limit_denominator(&exact, &max_den));
    }
    let mut q = poly.coeffs.clone();
    for c in &candidates {
        // synthetic division by (x - c)
        let mut carry = BigRational::zero();
        let mut next = vec![BigRational::zero(); q.len() - 1];
        for i in (0..q.len()).rev() {
            let v = &q[i] + &carry * c;
            if i == 0 {
                if !v.is_zero() {
                    return None;
                }
            } else {
                next[i - 1] = v.clone();
            }
            carry = v;
        }
        q = next;
    }
    if q.len() != 1 || !q[0].is_one() {
        return None;
    }
    candidates.sort();
    Some(candidates)
}
