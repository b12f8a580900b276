//! Deciding, certifying and cross-checking the nonexistence of iterative
//! roots of multifunctions on finite ground sets.
//!
//! A multifunction `F` on a finite set `X` assigns to every point a (possibly
//! empty) subset of `X`; equivalently it is a directed graph on `X`. An
//! iterative root of order `n` is a multifunction `G` with `G^n = F`.
//!
//! The crate is organised as follows:
//!
//! * [`mf`]: ground sets, multifunctions, single-valued maps and their algebra.
//! * [`paths`]: exact big-integer counts of `k`-walks in the graph of `F`.
//! * [`criteria`]: the four path/point counting nonexistence certificates.
//! * [`pullback`]: pullback multifunctions of maps and root transfer.
//! * [`fixedpoint`]: fixed-point based order exclusions for single maps.
//! * [`search`]: the exhaustive backtracking oracle.
//! * [`poly`]: nonexistence advice for complex polynomials.
//! * [`instances`]: deterministic example and random instance builders.
//! * [`io`] and [`cli`]: the `.mfn` text format and the `iterroot` command line.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default); see [`Execution`].

pub mod cli;
pub mod criteria;
mod error;
mod exec;
pub mod fixedpoint;
pub mod instances;
pub mod io;
pub mod mf;
pub mod oracle;
pub mod paths;
pub mod poly;
pub mod pullback;
pub mod search;
mod set;

pub use error::{Error, Result};
pub use exec::Execution;
pub use mf::{GroundSet, Multifunction, SingleMap, StructuralProfile};
pub use set::PointSet;
