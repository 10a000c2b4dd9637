//! Stability conditions of the CY3 category of the A2 quiver: exact
//! braid-group and exchange-graph combinatorics on one side, numerical
//! period maps of a family of elliptic curves on the other, and the
//! machinery that cross-checks the two.

pub mod braid;
pub mod config;
pub mod correspondence;
pub mod exchange;
pub mod lattice;
pub mod periods;
pub mod quad;
pub mod stability;

pub use config::Config;
