//! Exact computation of graded characters for cuspidal and minuscule
//! imaginary modules over affine Khovanov-Lauda-Rouquier algebras.
//!
//! The pipeline: build untwisted affine Cartan data ([`cartan`]),
//! enumerate and classify positive roots ([`roots`]), fix a balanced
//! convex preorder realized by a rational functional ([`convex`]),
//! compute in the quantum shuffle algebra ([`mod@shuffle`]), construct
//! homogeneous and minuscule modules ([`weyl`]) with their defining
//! relations checked symbolically ([`relations`]), and run the
//! minimal-pair recursion for cuspidal characters ([`cuspidal`]) with
//! root partitions and standard-module characters on top
//! ([`partitions`]).
//!
//! All arithmetic is exact: integer Laurent polynomials in q with
//! arbitrary-precision coefficients, and exact rational comparisons in
//! the convex order. There is no floating point anywhere.
//!
//! The data-parallel sweeps (shuffle products over many word pairs,
//! convexity and cuspidality verification) run on rayon when the
//! default `parallel` feature is enabled and fall back to sequential
//! loops without it; results are identical either way.

pub mod cartan;
pub mod convex;
pub mod cuspidal;
pub mod error;
pub mod laurent;
pub mod partitions;
pub mod relations;
pub mod roots;
pub mod shuffle;
pub mod weyl;

pub use cartan::{build_cartan, CartanSpec, Family, RootVec};
pub use convex::{cone_member, verify_convexity, Comparison, ConvexOrder, Side, Weight};
pub use error::{Error, Result};
pub use laurent::{qfact, qint, LaurentInt};
pub use shuffle::{shuffle, shuffle_words_enumerate, CharExpr, Word};
