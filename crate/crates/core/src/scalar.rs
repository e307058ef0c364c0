//! The working field: exact rationals or binary64 floats, plus the tolerance
//! policy used whenever two values are compared.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which field the pipeline runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Rational,
    Float,
}

impl ModeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModeKind::Rational => "rational",
            ModeKind::Float => "float",
        }
    }
}

/// Field choice together with the comparison tolerances.
///
/// Exact mode always carries zero tolerances. In float mode two values `a`,
/// `b` are equal when `|a - b| <= max(epsilon_abs, epsilon_rel * max(|a|, |b|))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericMode {
    pub kind: ModeKind,
    pub epsilon_abs: f64,
    pub epsilon_rel: f64,
}

impl NumericMode {
    pub const DEFAULT_EPS_ABS: f64 = 1e-6;
    pub const DEFAULT_EPS_REL: f64 = 1e-9;

    pub fn exact() -> Self {
        NumericMode { kind: ModeKind::Rational, epsilon_abs: 0.0, epsilon_rel: 0.0 }
    }

    pub fn float() -> Self {
        NumericMode {
            kind: ModeKind::Float,
            epsilon_abs: Self::DEFAULT_EPS_ABS,
            epsilon_rel: Self::DEFAULT_EPS_REL,
        }
    }

    /// Float mode with a custom absolute tolerance.
    pub fn float_with_eps(epsilon_abs: f64) -> Self {
        assert!(epsilon_abs > 0.0, "float tolerance must be positive");
        NumericMode { epsilon_abs, ..Self::float() }
    }

    pub fn for_scalar<S: Scalar>() -> Self {
        if S::EXACT {
            Self::exact()
        } else {
            Self::float()
        }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == ModeKind::Rational
    }

    /// Whether `a` and `b` are equal under this mode.
    pub fn close<S: Scalar>(&self, a: &S, b: &S) -> bool {
        if S::EXACT || self.is_exact() {
            return a == b;
        }
        let (a, b) = (a.to_f64(), b.to_f64());
        let tol = self.epsilon_abs.max(self.epsilon_rel * a.abs().max(b.abs()));
        (a - b).abs() <= tol
    }
}

/// A field element the solvers can run over.
///
/// Implemented for [`BigRational`] (exact, always in lowest terms) and `f64`.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const EXACT: bool;
    const KIND: ModeKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(v: &BigRational) -> Self;
    /// The exact rational value, if this is a finite number.
    fn to_rational(&self) -> Option<BigRational>;
    fn to_f64(&self) -> f64;
    fn from_f64(v: f64) -> Self;
    fn abs(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// A total order, used for sorting multisets.
    fn total_cmp(&self, other: &Self) -> Ordering;
    fn parse(s: &str) -> Result<Self>;
    /// Canonical text form: `p/q` or `p` for rationals, shortest round-trip
    /// decimal for floats.
    fn to_canonical(&self) -> String;

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const KIND: ModeKind = ModeKind::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(v: &BigRational) -> Self {
        v.clone()
    }
    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_f64(v: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(v).expect("finite float")
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
    fn parse(s: &str) -> Result<Self> {
        parse_rational(s)
    }
    fn to_canonical(&self) -> String {
        format_rational(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const KIND: ModeKind = ModeKind::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_bigint(v: &BigInt) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(v: &BigRational) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }
    fn to_rational(&self) -> Option<BigRational> {
        <BigRational as FromPrimitive>::from_f64(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(v) = s.parse::<f64>() {
            if v.is_finite() {
                return Ok(v);
            }
        }
        // accept rational spellings in float mode too
        parse_rational(s)
            .ok()
            .and_then(|r| ToPrimitive::to_f64(&r))
            .ok_or_else(|| Error::Parse { value: s.to_string(), expected: "float" })
    }
    fn to_canonical(&self) -> String {
        // Debug is the shortest round-trip form and always marks the value as
        // a decimal ("3.0", "1e20").
        format!("{self:?}")
    }
}

/// Parses `p`, `-p` or `p/q` into a normalized rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse { value: s.to_string(), expected: "rational" };
    let int = |t: &str| -> Result<BigInt> {
        let t = t.trim();
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        t.parse::<BigInt>().map_err(|_| err())
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(int(s)?)),
        Some((p, q)) => {
            let q = int(q)?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(int(p)?, q))
        }
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sorts a multiset by the scalar total order.
pub fn sort_scalars<S: Scalar>(v: &mut [S]) {
    v.sort_by(|a, b| a.total_cmp(b));
}

/// Multiset comparison; returns equality and the largest pairwise deviation
/// after sorting both sides.
///
/// On a length mismatch the deviation is reported as zero and the answer is
/// `false`.
pub fn multiset_equal<S: Scalar>(a: &[S], b: &[S], mode: &NumericMode) -> (bool, S) {
    if a.len() != b.len() {
        return (false, S::zero());
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    sort_scalars(&mut a);
    sort_scalars(&mut b);
    let mut equal = true;
    let mut worst = S::zero();
    for (x, y) in a.iter().zip(&b) {
        let dev = (x.clone() - y.clone()).abs();
        if dev > worst {
            worst = dev;
        }
        if !mode.close(x, y) {
            equal = false;
        }
    }
    (equal, worst)
}
