//! Exact computer algebra for rank-2 reflection groups generated by order-2
//! reflections: invariant rings and branch divisors, the residual Z/2 action
//! on the exceptional locus of the corresponding SL(2)-Hilbert scheme, McKay
//! quivers, and the decomposition count identities they certify.
//!
//! Everything is computed over cyclotomic fields with arbitrary-precision
//! rational coordinates; there is no floating point anywhere.

pub mod catalog;
pub mod cyclo;
pub mod error;
pub mod expr;
pub mod groups;
pub mod hilb;
pub mod poly;
pub mod report;
pub mod reps;
pub mod sod;
pub mod verify;

pub use error::Error;
