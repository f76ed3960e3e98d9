//! Executable fine-grained reductions from SAT, Triangle, APSP and 3SUM
//! to dynamic graph problems, checked against brute-force oracles.

pub mod apsp;
pub mod engines;
pub mod error;
pub mod gen;
pub mod guard;
pub mod hashing;
pub mod inter;
pub mod model;
pub mod oracles;
pub mod runner;
pub mod seth;
mod stage;
pub mod threesum;
mod tree;
pub mod verify;
pub mod triangle;

pub use error::{Error, Result};
