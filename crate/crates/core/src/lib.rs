//! Exact computations with metric groups, finite group cohomology,
//! twisted doubles of finite p-groups and their modular data.
//!
//! Everything is exact: values of quadratic forms live in Q/Z
//! ([`cyclotomic::RootExponent`]) and Gauss sums, characters and
//! S-matrix entries live in cyclotomic fields ([`cyclotomic::CycloNumber`]).

pub mod centerdata;
pub mod cyclotomic;
pub mod error;
pub mod extlab;
pub mod finab;
pub mod fingrp;
pub mod frobalg;
pub mod groupcoh;
pub mod linalg;
pub mod metric;
mod arith;

pub use arith::is_prime;
pub use error::{Error, Result};
