//! Exact intersection theory on toric Artin stacks.
//!
//! A [`StackyFan`] is a fan of rational polyhedral cones whose rays carry an
//! explicit lattice generator. Simplicial complete fans have a
//! Stanley–Reisner presentation of their rational Chow ring, with an
//! integration map computed by [`ChowRing`]. Non-simplicial fans are handled
//! by pulling classes back along a sequence of stacky star subdivisions
//! ([`simplicialize`]), which also yields the Euler characteristic of the
//! associated toric Artin stack.
//!
//! ```
//! use toric_artin::{euler_artin, StackyFan};
//!
//! // The fan over the faces of a square pyramid with apex cone pointing down.
//! let fan = StackyFan::from_i64(
//!     3,
//!     &[vec![1, 0, 1], vec![0, 2, 1], vec![-1, 0, 1], vec![0, -1, 1], vec![0, 0, -1]],
//!     &[vec![0, 1, 2, 3], vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4], vec![0, 3, 4]],
//! )?;
//! assert_eq!(euler_artin(&fan)?.to_string(), "4539/1225");
//! # Ok::<(), toric_artin::Error>(())
//! ```
//!
//! All arithmetic is exact; [`Rational`] is an arbitrary precision fraction.

pub mod artin;
pub mod chow;
pub mod class;
pub mod error;
pub mod fan;
pub mod io;
pub mod linalg;

/// Arbitrary precision rational number.
pub type Rational = num_rational::BigRational;

pub use artin::{
    euler_artin, euler_artin_3d, euler_artin_3d_with, integrate_artin, pullback, simplicialize,
    subdivision_euler_delta, Euler3dReport, PullbackMap, Simplicialization, SubdivisionStep,
};
pub use chow::{
    euler_simplicial, integrate_simplicial, irrelevant_membership, phi_squarefree, reduce_squarefree, sr_presentation,
    wall_relation, ChowRing, ConeRule, PivotRule, SrPresentation, TieBreak, WallRelation,
};
pub use class::ChowClass;
pub use error::{Error, ErrorKind, Result};
pub use fan::{validate, Cone, StackyFan, ValidationReport};
pub use io::{parse_fan, FanFile};

/// Compiles and runs the Rust snippets of the README and the guide in `book/`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fans.md")]
    mod fans {}
    #[doc = include_str!("../../../book/src/chow-ring.md")]
    mod chow_ring {}
    #[doc = include_str!("../../../book/src/integration.md")]
    mod integration {}
    #[doc = include_str!("../../../book/src/euler.md")]
    mod euler {}
    #[doc = include_str!("../../../book/src/artin.md")]
    mod artin {}
    #[doc = include_str!("../../../book/src/formula-3d.md")]
    mod formula_3d {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
