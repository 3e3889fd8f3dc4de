//! Independent oracles, random generators and property suites for `tangent-core`.
//!
//! The oracles recompute every closed form the slow way — textbook Kronecker
//! products, Gaussian elimination, polynomial multiplication with explicit
//! reduction — over exact rationals.

pub mod gen;
pub mod oracle;
pub mod suites;

pub use suites::{run_suite, Check, Config, Outcome, Suite};
