//! Sequential convergence methods on eventually periodic sequences.
//!
//! A method `G` is an additive partial function from sequences to points of
//! an abelian group. This crate represents methods built from the ordinary
//! limit, sliding kernels, Cesàro means and sums of methods; evaluates them
//! exactly on eventually periodic sequences over the rationals or Z_n;
//! computes `G`-sequential closures of finite sets by cycle detection in
//! window graphs; and checks the classical facts about `G`-closed and
//! `G`-open sets, interiors and `G`-continuous maps by exhaustive search on
//! small cyclic groups.

pub mod continuity;
pub mod density;
pub mod error;
pub mod exec;
pub mod group;
pub mod lattice;
pub mod methods;
pub mod rational;
pub mod sequence;
pub mod topology;
pub mod verifier;
pub mod window;

pub use error::{Error, Result};
pub use group::{GroupElement, GroupModel};
pub use methods::{evaluate, in_domain, is_regular, is_regular_on, MethodDescriptor};
pub use rational::Rational;
pub use sequence::EvPerSeq;
pub use topology::{Closure, PointSet};
