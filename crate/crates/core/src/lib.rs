//! Exact-arithmetic machinery for integral skew-symmetric forms and their
//! arc complexes: Smith normal form over Z, classification of skew forms
//! with quadratic refinements and Arf invariants, unimodular-coset
//! simplicial complexes with weakly Cohen-Macaulay verification, integral
//! simplicial homology, bigraded CDGA homology over Q, and
//! homological-stability range predicates.
//!
//! Data-parallel inner loops run on rayon by default; disabling the
//! `parallel` feature falls back to sequential iterators with identical
//! results.

pub mod arc;
pub mod error;
pub mod exec;
pub mod forms;
pub mod grading;
pub mod halgebra;
pub mod homology;
pub mod jsonio;
pub mod matrix;
pub mod naive;
pub mod pi1;
pub mod simplicial;
pub mod stability;

pub use error::{Error, Result};
pub use exec::Caps;
