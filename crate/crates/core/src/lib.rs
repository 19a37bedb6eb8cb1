//! Optimal job switching with consumption, investment and mandatory retirement,
//! solved through its dual optimal-switching problem.
//!
//! The dual value splits into an unconstrained Merton part `Q_R` and a pure
//! switching part `Q_j`. The difference `Q₁ − Q₀` solves a parabolic double
//! obstacle problem whose free boundaries Λ₀, Λ₁ drive the optimal switches.
//! Three independent computations are provided and cross-checked:
//!
//! * [`obstacle`]: the obstacle problem on a truncated log-dual grid
//!   (projected relaxation or penalty), free-boundary extraction and recovery of `Q_j`;
//! * [`integral`]: coupled integral equations for Λ₀, Λ₁ solved by backward
//!   recursion, with integral representations of `Q_j`;
//! * [`simulate`]: Monte Carlo of the dual process under the switching rule,
//!   plus a primal simulation of the feedback policy.
//!
//! [`strategy`] turns the boundaries into wealth-coordinate objects: wealth and
//! risky-position surfaces, switching thresholds w₀, w₁ and the feedback policy.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod curve;
pub mod error;
pub mod integral;
pub mod linalg;
pub mod model;
pub mod normal;
pub mod obstacle;
pub mod simulate;
pub mod strategy;

pub use curve::{BoundaryCurve, NodeFlag};
pub use error::{Error, Result};
pub use model::{validate, DerivedConstants, Job, Model, ModelParams};
