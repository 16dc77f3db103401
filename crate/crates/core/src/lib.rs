#![allow(clippy::needless_range_loop)]

//! Exact lattice arithmetic for counting Fourier–Mukai partners of K3
//! surfaces.
//!
//! * [`lattice`]: even lattices, Smith normal form, discriminant groups.
//! * [`disc_form`]: finite quadratic forms, their isometry groups, genus test.
//! * [`fm_rank1`]: partners of a Picard-number-one K3 via Mukai vectors.
//! * [`counting`]: double-coset partner counts and their specializations.
//! * [`bqf`]: indefinite binary quadratic forms and real quadratic class numbers.
//! * [`cli`]: the JSON command layer behind the `k3fm` binary.

pub mod arith;
pub mod bqf;
pub mod cli;
pub mod counting;
pub mod disc_form;
pub mod error;
pub mod fm_rank1;
pub mod lattice;

pub use error::{Error, Result};
