//! Distinguishability as a communication resource.
//!
//! Tools for one-way communication tasks where the cost of a protocol is the
//! distinguishability of the sender's input rather than the message
//! dimension:
//!
//! - [`task`]: tasks as coefficient tensors and the linear success metric.
//! - [`graphs`]: graphs, exact independence numbers, orthogonal representations.
//! - [`classical`]: classical encodings, the exact LP trade-off frontier and
//!   closed-form classical bounds.
//! - [`quantum`]: quantum strategies, state discrimination and the explicit
//!   protocol families.
//! - [`sdp`]: see-saw lower bounds and the hinged moment-matrix hierarchy.
//! - [`solver`]: the conic problem interface behind every LP/SDP.

pub mod classical;
pub mod error;
pub mod exec;
pub mod graphs;
pub mod linalg;
pub mod quantum;
pub mod sdp;
pub mod solver;
pub mod task;

pub use error::{Error, Result};
pub use exec::Execution;
pub use graphs::Graph;
pub use task::{Behavior, TaskSpec};
