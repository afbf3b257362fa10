use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettings, DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};

// links the system OpenBLAS used by clarabel's dense PSD kernels
extern crate openblas_src;

use super::{ConicSolver, HermitianExpr, LinExpr, Problem, Sense, Solution, SolveStatus, GAP_TOL};
use crate::error::{Error, Result};

/// Interior-point backend built on the `clarabel` crate.
#[derive(Debug, Clone)]
pub struct ClarabelSolver {
    pub tol_gap: f64,
    pub tol_feas: f64,
    pub max_iter: u32,
}

impl Default for ClarabelSolver {
    fn default() -> Self {
        Self { tol_gap: 1e-9, tol_feas: 1e-9, max_iter: 300 }
    }
}

impl ClarabelSolver {
    fn settings(&self) -> DefaultSettings<f64> {
        DefaultSettingsBuilder::default()
            .verbose(std::env::var_os("DISTCC_TRACE").is_some())
            .max_iter(self.max_iter)
            .tol_gap_abs(self.tol_gap)
            .tol_gap_rel(self.tol_gap)
            .tol_feas(self.tol_feas)
            .max_threads(1)
            .build()
            .expect("static solver settings are valid")
    }
}

/// Rows of `s = b - A x` in clarabel's triangular PSD layout: upper triangle,
/// column-major, off-diagonals scaled by sqrt(2).
struct RowBuilder {
    rows: usize,
    i: Vec<usize>,
    j: Vec<usize>,
    v: Vec<f64>,
    b: Vec<f64>,
}

impl RowBuilder {
    /// Appends the row `s = expr * scale`.
    fn push(&mut self, expr: &LinExpr, scale: f64) {
        for &(var, coef) in &expr.terms {
            if coef != 0.0 {
                self.i.push(self.rows);
                self.j.push(var);
                self.v.push(-coef * scale);
            }
        }
        self.b.push(expr.constant * scale);
        self.rows += 1;
    }

    fn push_psd(&mut self, h: &HermitianExpr) -> usize {
        let n = h.dim();
        let real = h.is_real();
        let size = if real { n } else { 2 * n };
        let zero = LinExpr::zero();
        for col in 0..size {
            for row in 0..=col {
                let scale = if row == col { 1.0 } else { std::f64::consts::SQRT_2 };
                if real {
                    self.push(&h.entry(row, col).0, scale);
                    continue;
                }
                // [[A, -B], [B, A]] with H = A + iB
                let (bi, bj) = (row / n, col / n);
                let (i, j) = (row % n, col % n);
                let (re, im) = h.entry(i, j);
                match (bi, bj) {
                    (0, 0) | (1, 1) => self.push(&re, scale),
                    (0, 1) => self.push(&(zero.clone() - im), scale),
                    _ => self.push(&im, scale),
                }
            }
        }
        size
    }
}

impl ConicSolver for ClarabelSolver {
    fn solve(&self, problem: &Problem) -> Result<Solution> {
        let n = problem.n_vars();
        let mut rb = RowBuilder { rows: 0, i: Vec::new(), j: Vec::new(), v: Vec::new(), b: Vec::new() };
        let mut cones: Vec<SupportedConeT<f64>> = Vec::new();

        let compacted = |e: &LinExpr| {
            let mut e = e.clone();
            e.compact();
            e
        };
        if !problem.equalities.is_empty() {
            for e in &problem.equalities {
                rb.push(&compacted(e), 1.0);
            }
            cones.push(SupportedConeT::ZeroConeT(problem.equalities.len()));
        }
        if !problem.nonnegatives.is_empty() {
            for e in &problem.nonnegatives {
                rb.push(&compacted(e), 1.0);
            }
            cones.push(SupportedConeT::NonnegativeConeT(problem.nonnegatives.len()));
        }
        for h in &problem.psd {
            let mut h = h.clone();
            h.compact();
            let size = rb.push_psd(&h);
            cones.push(SupportedConeT::PSDTriangleConeT(size));
        }

        let sign = match problem.sense {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        };
        let mut q = vec![0.0; n];
        let mut obj = problem.objective.clone();
        obj.compact();
        for &(v, c) in &obj.terms {
            q[v] += sign * c;
        }

        let a = CscMatrix::new_from_triplets(rb.rows, n, rb.i, rb.j, rb.v);
        let p = CscMatrix::<f64>::zeros((n, n));
        let mut solver = DefaultSolver::new(&p, &q, &a, &rb.b, &cones, self.settings())
            .map_err(|e| Error::SolverFailure(format!("clarabel setup: {e:?}")))?;
        solver.solve();
        let sol = &solver.solution;

        let primal = sign * sol.obj_val + obj.constant;
        let dual = sign * sol.obj_val_dual + obj.constant;
        let gap = (primal - dual).abs();
        let status = match sol.status {
            SolverStatus::Solved if gap <= GAP_TOL * (1.0 + primal.abs()) => SolveStatus::Optimal,
            SolverStatus::Solved | SolverStatus::AlmostSolved => SolveStatus::Inaccurate,
            SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => SolveStatus::Infeasible,
            SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => SolveStatus::Unbounded,
            _ => SolveStatus::Failed,
        };
        Ok(Solution {
            status,
            primal_objective: primal,
            dual_objective: dual,
            x: sol.x.clone(),
            iterations: sol.iterations,
            detail: format!("clarabel {:?} after {} iterations, gap {gap:.3e}", sol.status, sol.iterations),
        })
    }
}
