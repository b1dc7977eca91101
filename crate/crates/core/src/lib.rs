//! Exact intersection theory on surfaces obtained from `P^2` and ruled
//! surfaces by blowing up points.
//!
//! The crate models a smooth projective surface numerically: a Picard
//! lattice with an exact rational Gram matrix, a canonical class and a set of
//! marked curves. On top of that it provides
//!
//! * restriction of divisor classes to marked elliptic curves, with `Pic^0`
//!   modelled as an abstract finitely generated abelian group ([`curvecfg`]),
//! * sufficient ampleness / very ampleness criteria and Nakai-style
//!   certificates built from ample-plus-effective decompositions
//!   ([`positivity`]),
//! * numerical pullback across the contraction of a negative definite curve
//!   configuration, log discrepancies and Cartier index estimates
//!   ([`contract`]),
//! * builders for four families of generalised log canonical surfaces with
//!   unbounded Cartier index, each producing a ledger of exact checks
//!   ([`families`]),
//! * the report document shared by the command-line front end ([`report`]).
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod contract;
pub mod curvecfg;
pub mod error;
pub mod families;
pub mod lattice;
pub mod linalg;
pub mod positivity;
pub mod rational;
pub mod report;

pub use contract::{Contraction, DiscrepancyTable, GlcClass, GlcPair};
pub use curvecfg::{AbelianGroup, GroupElement, MarkedCurve, Order, RestrictionClass};
pub use error::{Error, Result};
pub use lattice::{BasisKind, BasisLabel, DivisorClass, SurfaceLattice};
pub use positivity::{PositivityReport, Verdict};
pub use rational::Rational;
