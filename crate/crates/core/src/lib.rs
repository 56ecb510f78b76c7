//! Sign matrices, discrepancy, and deterministic communication protocols.
//!
//! The crate turns the chain "low rank ⇒ large discrepancy ⇒ large
//! nearly-monochromatic rectangle ⇒ large monochromatic rectangle ⇒ short
//! protocol" into executable, checkable steps:
//!
//! * [`matrix`] and [`rank`]: sign/integer matrices and exact rank.
//! * [`discrepancy`]: exact `disc_μ(f)` by enumeration and `disc(f)` by
//!   double-oracle game solving with certified bounds.
//! * [`amplification`]: a minimax distribution over rectangles whose
//!   intersections give large nearly-monochromatic rectangles.
//! * [`monochromatic`]: extraction of a monochromatic sub-rectangle from a
//!   low-rank nearly-monochromatic one.
//! * [`protocol`]: recursive protocol construction, balancing, verification
//!   and an exact communication-complexity oracle for tiny matrices.
//! * [`rigidity`]: zero-rectangle search in sparse low-rank matrices.
//! * [`pipeline`] and [`corpus`]: end-to-end runs and test instances.

pub mod amplification;
pub mod corpus;
pub mod discrepancy;
pub mod dist;
pub mod error;
pub mod game;
pub mod generators;
pub mod matrix;
pub mod monochromatic;
pub mod pipeline;
pub mod protocol;
pub mod rank;
pub mod rect;
pub mod rigidity;
pub mod scalar;

pub use dist::EntryDistribution;
pub use error::{Error, Result};
pub use matrix::{IntMatrix, SignMatrix};
pub use rect::{IndexSet, Rectangle};
