//! Quantum bounds by semidefinite programming.
//!
//! * [`seesaw`]: lower bounds on achievable success in a fixed dimension,
//!   alternating between state and measurement SDPs.
//! * [`hierarchy`]: dimension-free upper bounds on success (and lower bounds
//!   on distinguishability) from hinged moment matrices.
//! * [`moments`]: the operator words indexing those moment matrices.
//!
//! The distinguishability cap `D_Q <= p` enters both through a hinge operator
//! `Theta` with `Theta >= rho_x` for all `x` and `tr(Theta) <= N p`.

pub mod hierarchy;
pub mod moments;
pub mod seesaw;

pub use hierarchy::{
    hierarchy_max_success, hierarchy_max_success_in, hierarchy_min_distinguishability,
    hierarchy_min_distinguishability_in, HierarchyMode, HierarchyResult, MomentField,
};
pub use moments::{build_moment_structure, MomentStructure, Word, MOMENT_CAP};
pub use seesaw::{
    seesaw_max_success, seesaw_min_distinguishability, RunStatus, SeedRun, SeesawConfig,
    SeesawMinResult, SeesawResult,
};
