//! Exact combinatorics of singular BGG complexes in blocks of category O.
//!
//! The crate builds finite Weyl groups as permutation groups of their root
//! systems, computes Bruhat order, parabolic coset data, Möbius functions and
//! Kazhdan-Lusztig(-Vogan) polynomials, and from these decides which simple
//! modules in a singular block have an exact BGG complex.

pub mod bruhat;
pub mod complex;
pub mod error;
pub mod export;
pub mod klv;
pub mod mobius;
pub mod parabolic;
pub mod weyl;

pub use bruhat::{BruhatOrder, CoverGraph};
pub use complex::{ComplexSkeleton, Edge, EdgeKind, SkeletonKind};
pub use error::{Error, Result};
pub use klv::{IntPolynomial, KLTable};
pub use mobius::GradedSupport;
pub use parabolic::{Extremum, SingularBlock};
pub use weyl::{CartanType, Element, Family, WeylGroup};
