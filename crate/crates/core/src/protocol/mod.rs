//! Deterministic communication protocols.
//!
//! [`build::nw_build`] recursively peels monochromatic rectangles off the
//! matrix, letting whichever player keeps the rank low speak;
//! [`balance::balance`] rebalances the resulting tree to depth logarithmic
//! in its leaf count; [`exact::exact_cc`] is a ground-truth oracle for tiny
//! matrices.

pub mod balance;
pub mod build;
pub mod exact;
pub mod report;
pub mod tree;

pub use balance::{balance, balance_bound, BALANCE_K};
pub use build::{nw_build, BruteForceFinder, GreedyFinder, MonoFinder, NwBuild, PipelineFinder, SplitRecord};
pub use exact::{exact_cc, EXACT_CC_CAP};
pub use report::{complexity, ComplexityReport};
pub use tree::{run, verify, ProtocolTree, Speaker, Transcript, VerifyReport};
