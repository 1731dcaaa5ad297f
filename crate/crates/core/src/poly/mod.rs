//! Exact sparse multivariate polynomials over ℚ with (k,n)+l block structure.

pub mod examples;
mod multivariate;
mod rational;
mod structured;

pub use multivariate::{ModPoly, Monomial, Poly};
pub use rational::{format_rational, int, parse_rational};
pub use structured::{compose, BlockVariables, Closure, PolyMap, PolySpec};

pub(crate) use structured::is_permutation;

/// Identity test: a canonical form with no terms.
pub fn is_zero(q: &Poly) -> bool {
    q.is_zero()
}
