//! Recovering a hidden multiset of `n` numbers from the multiset of all its
//! `k`-subset sums.
//!
//! Two solvers share the same instance and report types:
//!
//! * [`solve_vieta`] turns subset-sum moments into power sums through a
//!   recovery system per degree, then reads the hidden elements off as the
//!   roots of a polynomial. It needs every Moser value for `(n, k)` to be
//!   nonzero.
//! * [`solve_brute`] searches seed positions among the sorted sums and can
//!   list every solution, including for singular pairs.
//!
//! ```
//! use hssp::{solve_vieta, subset_sums, Instance, NumericMode, Status, VietaOptions};
//! use num_rational::BigRational;
//!
//! let x: Vec<BigRational> = [1, 2, 3, 4, 5].map(|v| BigRational::from_integer(v.into())).to_vec();
//! let instance = Instance::new(5, 2, NumericMode::exact(), subset_sums(&x, 2))?;
//! let report = solve_vieta(&instance, &VietaOptions::new(NumericMode::exact()));
//! assert_eq!(report.status, Status::Unique);
//! assert_eq!(report.solutions[0], x);
//! # Ok::<(), hssp::Error>(())
//! ```

pub mod brute;
pub mod combinatorics;
pub mod error;
pub mod instance;
pub mod io;
pub mod linalg;
pub mod report;
pub mod roots;
pub mod scalar;
pub mod symmetric;
pub mod vieta;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use brute::{iteration_bound, solve_brute, BruteOptions};
pub use combinatorics::{binomial, moser_value, partitions_at_most, stirling2, Partition};
pub use error::{Error, Result};
pub use instance::{generate_instance, subset_sums, verify_solution, Distribution, Instance, Solution};
pub use io::{read_instance, AnyInstance, ModeChoice};
pub use report::{Algorithm, MoserDiagnostics, SolveReport, Status};
pub use scalar::{ModeKind, NumericMode, Scalar};
pub use vieta::{check_moser, complement_reduce, singular_scan, solve_vieta, VietaOptions};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/partitions.md")]
    mod partitions {}
    #[doc = include_str!("../../../book/src/moser.md")]
    mod moser {}
    #[doc = include_str!("../../../book/src/vieta.md")]
    mod vieta {}
    #[doc = include_str!("../../../book/src/brute.md")]
    mod brute {}
    #[doc = include_str!("../../../book/src/files.md")]
    mod files {}
    #[doc = include_str!("../../../book/src/generation.md")]
    mod generation {}
}
