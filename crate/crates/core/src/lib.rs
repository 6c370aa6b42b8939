//! Exact truncated algebra for Drinfeld associators, the elliptic associator
//! `e(φ)`, and finite slices of Jacobi diagram spaces over `n` upward strands.
//!
//! Everything here is `no_std` + `alloc`. File formats, the command line and
//! report generation live in the `ellipt` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod associator;
pub mod diagrams;
pub mod elliptic;
pub mod error;
pub mod expr;
pub mod lie;
pub mod linalg;
pub mod rational;

pub use error::{Error, Result};
pub use rational::Rational;
