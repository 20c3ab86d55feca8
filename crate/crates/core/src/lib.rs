//! Exact determinantal machinery for tuples of binary forms: the block
//! resultant matrix and its rank criteria, the strata `R_1 ⊂ ... ⊂ R_d` of
//! the boundary of the space of degree-`d` maps `P^1 -> P^r`, the Jacobian
//! smoothness test, and explicit blow-up coordinates.
//!
//! All arithmetic is over the rationals; nothing here uses floating point.

pub mod blowup;
pub mod document;
pub mod error;
pub mod exactla;
pub mod forms;
pub mod sample;
pub mod strata;
pub mod sylvester;
pub mod verify;

pub use document::TupleDocument;
pub use error::{Error, Result};
pub use exactla::{rat, ratio, Rational, RationalMatrix};
pub use forms::{BinaryForm, FormTuple};
pub use verify::{run_suite, Report, Suite, VerifyParams};
