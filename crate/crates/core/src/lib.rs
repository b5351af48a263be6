//! Exact lattice, cone and ampleness computations for certifying essential
//! exceptional components and bijectivity of the Nash map.
//!
//! The crate is `no_std` and needs only `alloc`. Every quantity is an
//! arbitrary-precision integer or rational; nothing rounds.
//!
//! Layers, bottom up:
//!
//! * [`lattice`]: integer vectors of `N`, linear forms of `M`, determinants,
//!   primitive generators and exact change of basis.
//! * [`feasibility`]: exact Fourier-Motzkin elimination for systems of
//!   linear inequalities, with witness recovery and canonical integer points.
//! * [`cone`]: rational polyhedral cones and simplicial 3-dimensional fans.
//! * [`criterion`]: Kleiman-type ampleness checks on exceptional divisors and
//!   the essentiality / Nash-bijectivity certifier built on them.
//! * [`family`]: the two-component 3-fold families indexed by
//!   `(g, d1, d2, x1, x2)`, classified by closed form and by the certifier.
//! * [`toric`]: the toric model of the genus-0 members of those families.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod cone;
pub mod criterion;
mod error;
pub mod family;
pub mod feasibility;
pub mod lattice;
pub mod toric;

pub use error::{Error, Result};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
