//! Bin-counting global constraint for finite-domain constraint programming.
//!
//! The crate bundles a small propagation engine ([`kernel`]), the flow model
//! that yields exact count bounds ([`flow`]), the `bin_counts` constraint in
//! decomposed and flow-based forms ([`bincounts`]), supporting constraints
//! including a chi-square goodness-of-fit bound ([`constraints`]), statistical
//! numerics ([`stats`]) and application models ([`models`]).

pub mod bincounts;
pub mod constraints;
pub mod error;
pub mod flow;
pub mod kernel;
pub mod models;
pub mod par;
pub mod stats;

pub use error::{Error, Result};
