//! Exact computation of length functions for finite-dimensional
//! non-associative algebras given by structure constants.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`] – exact scalars over `Q` or `GF(p)`.
//! * [`algebra`] – structure constants, elements, multiplication.
//! * [`words`] – bracketed words and their enumeration.
//! * [`spans`] – `Lin_k(S)`, difference sequences, exact `l(A)` over finite fields.
//! * [`identities`] – classification into identity classes with witnesses.
//! * [`canonical`] – normal forms of one-letter-at-a-time words.
//! * [`bounds`] – closed-form length bounds and an auditor.
//! * [`examples`] – constructors for the concrete algebras.
//! * [`io`] – the line-oriented algebra file format.
//!
//! No floating point is used anywhere.

pub mod algebra;
pub mod bounds;
pub mod canonical;
pub mod error;
pub mod examples;
pub mod field;
pub mod identities;
pub mod io;
pub mod spans;
pub mod words;

pub use algebra::{Algebra, Element, UnityStatus};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use words::{GeneratorSet, WordTree};
