//! Exact arithmetic for positive definite binary quadratic forms and integral
//! ℤ-lattices of rank ≤ 4.
//!
//! The crate has three layers:
//!
//! * elementary number theory ([`arith`]) and small integer matrices ([`mat`]);
//! * binary quadratic forms with Gauss composition, the form class group,
//!   ambiguous classes and genera ([`binform`]), plus representation queries
//!   ([`represent`]);
//! * integral lattices of rank ≤ 4 with exact vector enumeration, embedding
//!   tests, index-p sublattices and saturation ([`lattice`]).
//!
//! On top of those sit executable statement harnesses ([`theorems`]) and the
//! bundled quaternary candidate dataset with its verifier and search
//! ([`isolation`]). All arithmetic is exact: overflow is a reported error and
//! enumeration bounds are computed with integer and rational arithmetic only.
//!
//! The number-theory layer is generic over the signed scalar (see
//! [`arith::Scalar`]); the rest of the crate instantiates it at the concrete
//! aliases below.

pub mod arith;
pub mod binform;
pub mod config;
pub mod error;
pub mod isolation;
pub mod lattice;
pub mod mat;
pub mod represent;
pub mod theorems;

/// Concrete integer scalar used by the domain types. 128 bits leaves ample
/// headroom for every intermediate product at the scales this crate handles.
pub type Int = i128;

/// Exact rational over [`Int`].
pub type Rat = num_rational::Ratio<Int>;

pub use binform::{ClassGroup, Form, FormClass};
pub use error::{Error, Result};
