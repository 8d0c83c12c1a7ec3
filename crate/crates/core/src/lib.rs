//! Numerical audits of the Heisenberg-Robertson uncertainty relation
//! `dA dB >= |<i[A,B]>| / 2` and constructive search for mixed states that
//! reach the bound.
//!
//! The crate is `no_std` and needs only `alloc`. File formats and the
//! command-line front end live in the `minuncert` crate.
//!
//! Finite-dimensional modules use units with `hbar = 1`; the oscillator
//! module carries `hbar` explicitly.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod eigenspace;
pub mod error;
pub mod gaussian;
pub mod matrix;
pub mod operator;
pub mod sample;
pub mod search;
pub mod spin;
pub mod tolerance;
pub mod uncertainty;

pub use eigenspace::{
    combined_operator, eigenket_check, find_saturating_mixed_states, is_normal, scan_lambda,
    three_level_example, EigenketCheck, FinderOptions, SaturatingFamily,
};
pub use error::{Error, Result};
pub use matrix::{commutator, CVector, ComplexMatrix};
pub use num_complex::Complex64;
pub use operator::{DensityMatrix, HermitianOperator};
pub use search::{search_saturating_state, SearchConfig, SearchResult};
pub use tolerance::Tolerances;
pub use uncertainty::{
    commutator_bound, expectation, is_pure, purity, spread, uncertainty_report, UncertaintyReport,
};
