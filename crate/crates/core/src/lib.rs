//! Exact arithmetic for Stirling-transform identities.
//!
//! The crate is organized bottom-up:
//!
//! - [`exact`]: big integers and rationals, and the [`Ring`]/[`Field`] scalar
//!   traits everything else is generic over.
//! - [`seq`]: Stirling triangles and the number families derived from them,
//!   memoized in a thread-safe [`SeqContext`].
//! - [`poly`]: dense polynomials and the exponential, geometric, Bernoulli,
//!   Euler and binomial polynomial families.
//! - [`egf`]: truncated exponential generating functions, including series
//!   composition and the two-route Stirling substitutions.
//! - [`transform`]: Stirling, inverse Stirling and binomial transforms.
//! - [`identities`]: a registry of identities checked exactly over parameter
//!   ranges, with counterexample reports.
//! - [`expr`]: a small expression language over the sequence library.

pub mod egf;
pub mod error;
pub mod exact;
pub mod expr;
pub mod identities;
pub mod poly;
pub mod seq;
pub mod transform;

pub use error::{Error, Result};
pub use exact::{Field, Integer, Rational, Ring};
pub use seq::SeqContext;

/// Polynomial over the rationals.
pub type QPoly = poly::Poly<Rational>;
/// Truncated EGF over the rationals.
pub type QEgf = egf::Egf<Rational>;
/// Ordinary power series over the rationals.
pub type QSeries = egf::PowerSeries<Rational>;
/// Finite rational sequence.
pub type QSequence = transform::Sequence<Rational>;

/// Polynomial over `f64`.
pub type FPoly = poly::Poly<f64>;
/// Truncated EGF over `f64`.
pub type FEgf = egf::Egf<f64>;
/// Finite `f64` sequence.
pub type FSequence = transform::Sequence<f64>;
