//! Exact-arithmetic classification of involutions on generic matrix
//! algebras.
//!
//! The extended projective linear group PGLₙ⋊⟨τ⟩ acts on m-tuples of n×n
//! matrices by simultaneous conjugation and sign-twisted transposition.
//! This crate samples general-position tuples, certifies their genericity
//! (algebra generation), computes the unique stabilizer element of the
//! twisted action when it exists, and reads off the kind and type of the
//! corresponding involution from its symmetric/skew dichotomy. All
//! arithmetic is exact: rationals everywhere, with towers of quadratic
//! extensions appearing only in congruence normal forms.
//!
//! With the default `parallel` feature, classification trials run on a
//! rayon pool; per-trial seeds derive from the master seed, so the parallel
//! and sequential paths produce identical reports.

pub mod classifier;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod ncpoly;
pub mod normal_form;
pub mod scalar;
pub mod stabilizer;

pub use error::{Error, Result};
