//! Hinged moment-matrix relaxation.
//!
//! For each state `rho_x` and the hinge `Theta` there is a moment matrix
//! `Gamma_tau[i, j] = tr(tau w_i^dagger w_j)` over the monomials of a
//! [`MomentStructure`]. Constraints: `Gamma_rho_x[1, 1] = 1`,
//! `Gamma_rho_x >= 0`, `Gamma_Theta - Gamma_rho_x >= 0`, and either the
//! distinguishability cap `Gamma_Theta[1, 1] / N <= p` or a success floor.

use serde::Serialize;

use super::moments::{build_moment_structure, MomentStructure};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::solver::{self, HermitianExpr, LinExpr, Problem, Sense, SolveStatus};
use crate::task::TaskSpec;

pub const MAX_LEVEL: usize = 3;

/// Number field of the moment matrices.
///
/// Task coefficients are real, so the entry-wise conjugate of a feasible
/// complex assignment is feasible with the same objective and their average
/// is real: both fields give the same bound. `Real` halves the block size
/// handed to the solver.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentField {
    #[default]
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HierarchyMode {
    /// Maximize success subject to `D_Q <= p`.
    MaxSuccess { p: f64 },
    /// Minimize distinguishability subject to success `>= s_target`.
    MinDistinguishability { s_target: f64 },
}

#[derive(Debug, Clone)]
pub struct HierarchyResult {
    pub level: usize,
    pub mode: HierarchyMode,
    pub field: MomentField,
    pub bound: f64,
    pub status: SolveStatus,
    pub duality_gap: f64,
    pub monomials: Vec<String>,
    pub digest: String,
    /// `Gamma_rho_1 .. Gamma_rho_N`, then `Gamma_Theta`.
    pub witnesses: Vec<CMat>,
}

#[derive(Serialize)]
struct Certificate<'a> {
    level: usize,
    mode: &'a HierarchyMode,
    field: MomentField,
    monomials: &'a [String],
    constraint_digest: &'a str,
    status: String,
    bound: f64,
    duality_gap: f64,
}

impl HierarchyResult {
    pub fn certificate_json(&self) -> Result<String> {
        let cert = Certificate {
            level: self.level,
            mode: &self.mode,
            field: self.field,
            monomials: &self.monomials,
            constraint_digest: &self.digest,
            status: format!("{:?}", self.status),
            bound: self.bound,
            duality_gap: self.duality_gap,
        };
        Ok(serde_json::to_string_pretty(&cert)?)
    }

    /// `p(z|x,y)` read off the state moment matrices.
    pub fn behavior_entry(&self, ms: &MomentStructure, x: usize, y: usize, z: usize) -> Option<f64> {
        let idx = ms.monomials().iter().position(|w| {
            w.0.len() == 1 && w.0[0].y as usize == y && w.0[0].z as usize == z
        })?;
        Some(self.witnesses[x][(0, idx)].re)
    }
}

/// Moment matrix of one operator, with one unknown per adjoint class.
fn moment_matrix(problem: &mut Problem, ms: &MomentStructure, field: MomentField) -> (HermitianExpr, Vec<LinExpr>) {
    let re: Vec<LinExpr> = (0..ms.n_classes()).map(|_| LinExpr::var(problem.new_var())).collect();
    let im: Vec<LinExpr> = (0..ms.n_classes())
        .map(|c| {
            if field == MomentField::Real || ms.class_is_real(c) {
                LinExpr::zero()
            } else {
                LinExpr::var(problem.new_var())
            }
        })
        .collect();
    let n = ms.size();
    let mut gamma = HermitianExpr::zeros(n);
    for j in 0..n {
        for i in 0..=j {
            if let Some((c, conj)) = ms.entry(i, j) {
                let imag = if conj { -im[c].clone() } else { im[c].clone() };
                gamma.set(i, j, re[c].clone(), imag);
            }
        }
    }
    (gamma, re)
}

struct Skeleton {
    problem: Problem,
    states: Vec<HermitianExpr>,
    theta: HermitianExpr,
    success: LinExpr,
}

fn skeleton(task: &TaskSpec, ms: &MomentStructure, field: MomentField) -> Skeleton {
    let mut problem = Problem::new();
    let (theta, _) = moment_matrix(&mut problem, ms, field);
    let mut states = Vec::with_capacity(task.n_inputs());
    let mut success = LinExpr::zero();
    let d = task.n_outcomes();
    for x in 0..task.n_inputs() {
        let (gamma, re) = moment_matrix(&mut problem, ms, field);
        problem.add_eq(gamma.entry(0, 0).0 - LinExpr::constant(1.0));
        for y in 0..task.n_settings() {
            // p(z|x,y) for z < D-1 and the complement for the last outcome
            let mut rest = LinExpr::constant(1.0);
            for z in 0..d - 1 {
                let c = ms.probability_class(y, z).expect("letter present at level >= 1");
                success.add_scaled(&re[c], task.coeff(x, y, z));
                rest.add_scaled(&re[c], -1.0);
            }
            success.add_scaled(&rest, task.coeff(x, y, d - 1));
        }
        problem.add_psd(gamma.clone());
        problem.add_psd(theta.minus(&gamma));
        states.push(gamma);
    }
    Skeleton { problem, states, theta, success }
}

fn check_level(level: usize) -> Result<()> {
    if !(1..=MAX_LEVEL).contains(&level) {
        return Err(Error::InvalidArgument(format!("hierarchy level must be in 1..={MAX_LEVEL} (got {level})")));
    }
    Ok(())
}

fn finish(task: &TaskSpec, ms: &MomentStructure, sk: Skeleton, mode: HierarchyMode, field: MomentField) -> Result<HierarchyResult> {
    let digest = sk.problem.digest();
    let sol = solver::solve(&sk.problem)?;
    let mut witnesses: Vec<CMat> = sk.states.iter().map(|g| sol.matrix(g)).collect();
    witnesses.push(sol.matrix(&sk.theta));
    let bound = match mode {
        HierarchyMode::MaxSuccess { .. } => sol.primal_objective,
        HierarchyMode::MinDistinguishability { .. } => sol.primal_objective / task.n_inputs() as f64,
    };
    Ok(HierarchyResult {
        level: ms.level(),
        mode,
        field,
        bound,
        status: sol.status,
        duality_gap: sol.duality_gap(),
        monomials: ms.monomial_labels(),
        digest,
        witnesses,
    })
}

/// Upper bound on the success of any quantum strategy (any dimension) whose
/// states have distinguishability at most `p`.
pub fn hierarchy_max_success(task: &TaskSpec, level: usize, p: f64) -> Result<HierarchyResult> {
    hierarchy_max_success_in(task, level, p, MomentField::default())
}

pub fn hierarchy_max_success_in(task: &TaskSpec, level: usize, p: f64, field: MomentField) -> Result<HierarchyResult> {
    check_level(level)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("distinguishability cap {p} outside [0, 1]")));
    }
    let ms = build_moment_structure(task, level)?;
    let mut sk = skeleton(task, &ms, field);
    let n = task.n_inputs() as f64;
    let cap = LinExpr::constant(n * p) - sk.theta.entry(0, 0).0;
    sk.problem.add_nonneg(cap);
    sk.problem.set_objective(Sense::Maximize, sk.success.clone());
    finish(task, &ms, sk, HierarchyMode::MaxSuccess { p }, field)
}

/// Lower bound on the distinguishability needed by any quantum strategy
/// reaching success `s_target`.
pub fn hierarchy_min_distinguishability(task: &TaskSpec, level: usize, s_target: f64) -> Result<HierarchyResult> {
    hierarchy_min_distinguishability_in(task, level, s_target, MomentField::default())
}

pub fn hierarchy_min_distinguishability_in(
    task: &TaskSpec,
    level: usize,
    s_target: f64,
    field: MomentField,
) -> Result<HierarchyResult> {
    check_level(level)?;
    let ms = build_moment_structure(task, level)?;
    let mut sk = skeleton(task, &ms, field);
    sk.problem.add_nonneg(sk.success.clone() - LinExpr::constant(s_target));
    sk.problem.set_objective(Sense::Minimize, sk.theta.entry(0, 0).0);
    finish(task, &ms, sk, HierarchyMode::MinDistinguishability { s_target }, field)
}
