//! Exact-arithmetic divisibility obstructions for topologically trivial
//! Brauer classes on products of elliptic curves.
//!
//! The library models the rational cohomology of E_1 × ... × E_g as a sparse
//! exterior algebra, linearizes the "make every obstruction polynomial
//! integral" condition over the Hodge coordinates, and decides it exactly,
//! producing either a witness or an integer certificate functional. On top of
//! that it constructs the integral Hodge and Tate classes on Severi-Brauer
//! varieties whose non-algebraicity the certificates prove, and evaluates the
//! period-index exponent bounds. No floating point is used anywhere.

pub mod arith;
pub mod bounds;
pub mod congruence;
pub mod error;
pub mod hnf;
pub mod json;
pub mod obstruction;
pub mod ring;
pub mod severi;
pub mod solver;

pub use error::{Error, Result};
pub use obstruction::BrauerScenario;
pub use ring::{ExteriorClass, Locality, Monomial, ProductRing};
pub use solver::{ObstructionSystem, Verdict};
