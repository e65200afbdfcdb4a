//! Secure computation of algebraic sums over networks: capacity bounds
//! against an r-edge wiretapper, and construction and verification of
//! linear secure network codes.

pub mod bounds;
pub mod cli;
pub mod code;
pub mod construct;
pub mod cuts;
pub mod error;
pub mod fixtures;
pub mod gf;
pub mod network;
pub mod verify;

pub use error::{Error, Result};
