//! Exact invariants of families of cyclic `Z/n`-covers of curves and a
//! hypothesis-traced screen for non-compact Shimura curves in the Torelli locus.
//!
//! - [`cover`]: branch data, Riemann-Hurwitz, canonical forms, quotient covers.
//! - [`hodge`]: eigenspace dimensions of holomorphic 1-forms, eigen line bundle
//!   degrees, Galois orbits of characters.
//! - [`higgs`]: lower bounds on flat Higgs ranks and the fiberwise negativity test.
//! - [`screen`]: verdicts with full hypothesis traces, enumeration, batch driver.
//! - [`cli`]: the `torelli-screen` command line.

pub mod arith;
pub mod cli;
pub mod cover;
pub mod error;
pub mod higgs;
pub mod hodge;
pub mod report;
pub mod screen;

pub use cover::{validate, CoverDatum, QuotientResult};
pub use error::{Error, Result};
pub use higgs::FlatRankBounds;
pub use hodge::{HodgeTable, OrbitPartition};
pub use screen::{ScreenConfig, Status, Verdict};
