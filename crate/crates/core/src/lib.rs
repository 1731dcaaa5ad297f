//! Certified depth and avoidability classification of algebraic hypergraphs.
//!
//! The crate is `no_std` (it needs `alloc`). It contains the pure algorithmic
//! layers:
//!
//! - [`templates`]: finite combinatorics of d-dimensional k-templates and their
//!   template hypergraphs on finite grids.
//! - [`cardinals`]: symbolic alephs with indices below ω^ω.
//! - [`poly`]: exact sparse multivariate polynomials over ℚ.
//! - [`embed`]: witnesses and refutations for finite embeddings of template
//!   hypergraphs into zero hypergraphs.
//! - [`immerse`]: polynomial immersion certificates checked by identity testing.
//! - [`depth`]: the dovetailed classifier producing a [`depth::DepthReport`].
//!
//! IO, file formats and the command line live in the `hyperchrom` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cardinals;
pub mod depth;
pub mod embed;
mod error;
pub mod immerse;
pub mod poly;
pub mod templates;

pub use error::{Error, Result};

/// Exact rational scalar used everywhere in the trusted path.
pub type Rational = num_rational::BigRational;
