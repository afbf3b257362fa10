//! Backend-neutral conic problem description.
//!
//! Problems are stated over real scalar variables with affine equality,
//! nonnegativity and Hermitian PSD constraints and a linear objective. A
//! Hermitian block `H = A + iB` is handed to real-only backends as the
//! embedding `[[A, -B], [B, A]]`, which is PSD iff `H` is; blocks whose
//! imaginary part is identically zero are passed as `A` directly.
//!
//! Any type implementing [`ConicSolver`] can stand in for the default
//! [`ClarabelSolver`].

mod clarabel_backend;

pub use clarabel_backend::ClarabelSolver;

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};

/// Largest acceptable |primal - dual| objective gap for an `Optimal` status.
pub const GAP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var(pub usize);

/// `constant + sum coef * x[var]`
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinExpr {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl LinExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self { terms: Vec::new(), constant: c }
    }

    pub fn var(v: Var) -> Self {
        Self { terms: vec![(v.0, 1.0)], constant: 0.0 }
    }

    pub fn term(v: Var, coef: f64) -> Self {
        Self { terms: vec![(v.0, coef)], constant: 0.0 }
    }

    pub fn add_term(&mut self, v: Var, coef: f64) {
        if coef != 0.0 {
            self.terms.push((v.0, coef));
        }
    }

    pub fn add_scaled(&mut self, other: &LinExpr, scale: f64) {
        if scale == 0.0 {
            return;
        }
        self.terms.extend(other.terms.iter().map(|&(v, c)| (v, c * scale)));
        self.constant += other.constant * scale;
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.terms.iter().all(|&(_, c)| c == 0.0)
    }

    /// Merges repeated variables and drops zero coefficients.
    pub fn compact(&mut self) {
        self.terms.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(self.terms.len());
        for &(v, c) in &self.terms {
            match out.last_mut() {
                Some((lv, lc)) if *lv == v => *lc += c,
                _ => out.push((v, c)),
            }
        }
        out.retain(|&(_, c)| c != 0.0);
        self.terms = out;
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(v, c)| c * x[v]).sum::<f64>()
    }
}

impl Add for LinExpr {
    type Output = LinExpr;
    fn add(mut self, rhs: LinExpr) -> LinExpr {
        self.add_scaled(&rhs, 1.0);
        self
    }
}

impl Sub for LinExpr {
    type Output = LinExpr;
    fn sub(mut self, rhs: LinExpr) -> LinExpr {
        self.add_scaled(&rhs, -1.0);
        self
    }
}

impl Mul<f64> for LinExpr {
    type Output = LinExpr;
    fn mul(mut self, rhs: f64) -> LinExpr {
        for t in &mut self.terms {
            t.1 *= rhs;
        }
        self.constant *= rhs;
        self
    }
}

impl Neg for LinExpr {
    type Output = LinExpr;
    fn neg(self) -> LinExpr {
        self * -1.0
    }
}

/// Hermitian matrix whose entries are affine in the problem variables.
/// Only the upper triangle is stored; the lower is implied by conjugation.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianExpr {
    n: usize,
    re: Vec<LinExpr>,
    im: Vec<LinExpr>,
}

impl HermitianExpr {
    pub fn zeros(n: usize) -> Self {
        let len = n * (n + 1) / 2;
        Self { n, re: vec![LinExpr::zero(); len], im: vec![LinExpr::zero(); len] }
    }

    /// Constant matrix.
    pub fn constant(m: &CMat) -> Self {
        let n = m.nrows();
        let mut h = Self::zeros(n);
        for j in 0..n {
            for i in 0..=j {
                let v = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                h.re[Self::slot(i, j)] = LinExpr::constant(v.re);
                h.im[Self::slot(i, j)] = LinExpr::constant(if i == j { 0.0 } else { v.im });
            }
        }
        h
    }

    #[inline]
    fn slot(i: usize, j: usize) -> usize {
        debug_assert!(i <= j);
        j * (j + 1) / 2 + i
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)` as (real part, imaginary part).
    pub fn entry(&self, i: usize, j: usize) -> (LinExpr, LinExpr) {
        if i <= j {
            let s = Self::slot(i, j);
            (self.re[s].clone(), self.im[s].clone())
        } else {
            let s = Self::slot(j, i);
            (self.re[s].clone(), -self.im[s].clone())
        }
    }

    /// Sets entry `(i, j)`; `(j, i)` becomes its conjugate. Diagonal
    /// imaginary parts are ignored.
    pub fn set(&mut self, i: usize, j: usize, re: LinExpr, im: LinExpr) {
        if i <= j {
            let s = Self::slot(i, j);
            self.re[s] = re;
            self.im[s] = if i == j { LinExpr::zero() } else { im };
        } else {
            self.set(j, i, re, -im);
        }
    }

    pub fn add_scaled(&mut self, other: &HermitianExpr, scale: f64) {
        assert_eq!(self.n, other.n, "hermitian block sizes differ");
        for (a, b) in self.re.iter_mut().zip(&other.re) {
            a.add_scaled(b, scale);
        }
        for (a, b) in self.im.iter_mut().zip(&other.im) {
            a.add_scaled(b, scale);
        }
    }

    pub fn minus(&self, other: &HermitianExpr) -> HermitianExpr {
        let mut out = self.clone();
        out.add_scaled(other, -1.0);
        out
    }

    /// Real part of the trace.
    pub fn trace(&self) -> LinExpr {
        let mut t = LinExpr::zero();
        for i in 0..self.n {
            t.add_scaled(&self.re[Self::slot(i, i)], 1.0);
        }
        t
    }

    /// Re tr(self * m) for a constant Hermitian `m`.
    pub fn trace_with(&self, m: &CMat) -> LinExpr {
        let mut t = LinExpr::zero();
        for j in 0..self.n {
            for i in 0..=j {
                let s = Self::slot(i, j);
                if i == j {
                    t.add_scaled(&self.re[s], m[(i, i)].re);
                } else {
                    // H_ij M_ji + H_ji M_ij = 2 Re(H_ij M_ji)
                    let mji = m[(j, i)];
                    t.add_scaled(&self.re[s], 2.0 * mji.re);
                    t.add_scaled(&self.im[s], -2.0 * mji.im);
                }
            }
        }
        t
    }

    pub fn is_real(&self) -> bool {
        self.im.iter().all(LinExpr::is_zero)
    }

    pub fn eval(&self, x: &[f64]) -> CMat {
        let mut m = CMat::zeros(self.n, self.n);
        for j in 0..self.n {
            for i in 0..=j {
                let s = Self::slot(i, j);
                let v = C64::new(self.re[s].eval(x), self.im[s].eval(x));
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        m
    }

    pub(crate) fn compact(&mut self) {
        self.re.iter_mut().chain(self.im.iter_mut()).for_each(LinExpr::compact);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone)]
pub struct Problem {
    n_vars: usize,
    pub(crate) equalities: Vec<LinExpr>,
    pub(crate) nonnegatives: Vec<LinExpr>,
    pub(crate) psd: Vec<HermitianExpr>,
    pub(crate) objective: LinExpr,
    pub(crate) sense: Sense,
}

impl Default for Problem {
    fn default() -> Self {
        Self::new()
    }
}

impl Problem {
    pub fn new() -> Self {
        Self {
            n_vars: 0,
            equalities: Vec::new(),
            nonnegatives: Vec::new(),
            psd: Vec::new(),
            objective: LinExpr::zero(),
            sense: Sense::Minimize,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn new_var(&mut self) -> Var {
        self.n_vars += 1;
        Var(self.n_vars - 1)
    }

    /// Fresh Hermitian `n x n` matrix variable (`n^2` real scalars).
    pub fn hermitian_var(&mut self, n: usize) -> HermitianExpr {
        let mut h = HermitianExpr::zeros(n);
        for j in 0..n {
            for i in 0..=j {
                let re = LinExpr::var(self.new_var());
                let im = if i == j { LinExpr::zero() } else { LinExpr::var(self.new_var()) };
                h.set(i, j, re, im);
            }
        }
        h
    }

    /// Fresh real symmetric `n x n` matrix variable.
    pub fn symmetric_var(&mut self, n: usize) -> HermitianExpr {
        let mut h = HermitianExpr::zeros(n);
        for j in 0..n {
            for i in 0..=j {
                let re = LinExpr::var(self.new_var());
                h.set(i, j, re, LinExpr::zero());
            }
        }
        h
    }

    /// `expr == 0`
    pub fn add_eq(&mut self, expr: LinExpr) {
        self.equalities.push(expr);
    }

    /// `expr >= 0`
    pub fn add_nonneg(&mut self, expr: LinExpr) {
        self.nonnegatives.push(expr);
    }

    /// `lhs <= rhs`
    pub fn add_le(&mut self, lhs: LinExpr, rhs: LinExpr) {
        self.nonnegatives.push(rhs - lhs);
    }

    /// `h` is positive semidefinite.
    pub fn add_psd(&mut self, h: HermitianExpr) {
        self.psd.push(h);
    }

    /// Entry-wise `h == 0` (real and imaginary parts).
    pub fn add_hermitian_eq(&mut self, h: &HermitianExpr) {
        for j in 0..h.n {
            for i in 0..=j {
                let (re, im) = h.entry(i, j);
                self.add_eq(re);
                if i != j {
                    self.add_eq(im);
                }
            }
        }
    }

    pub fn set_objective(&mut self, sense: Sense, objective: LinExpr) {
        self.sense = sense;
        self.objective = objective;
    }

    pub fn n_constraints(&self) -> (usize, usize, usize) {
        (self.equalities.len(), self.nonnegatives.len(), self.psd.len())
    }

    /// SHA-256 over a canonical rendering of every constraint and the
    /// objective (coefficients by bit pattern), as lowercase hex.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        fn feed(h: &mut Sha256, e: &LinExpr) {
            let mut e = e.clone();
            e.compact();
            h.update((e.terms.len() as u64).to_le_bytes());
            for (v, c) in &e.terms {
                h.update((*v as u64).to_le_bytes());
                h.update(c.to_bits().to_le_bytes());
            }
            h.update(e.constant.to_bits().to_le_bytes());
        }
        let mut h = Sha256::new();
        h.update((self.n_vars as u64).to_le_bytes());
        for (tag, list) in [(b'E', &self.equalities), (b'N', &self.nonnegatives)] {
            h.update([tag]);
            list.iter().for_each(|e| feed(&mut h, e));
        }
        for block in &self.psd {
            h.update(*b"P");
            h.update((block.n as u64).to_le_bytes());
            block.re.iter().chain(&block.im).for_each(|e| feed(&mut h, e));
        }
        h.update([if self.sense == Sense::Maximize { b'+' } else { b'-' }]);
        feed(&mut h, &self.objective);
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Converged with |primal - dual| <= [`GAP_TOL`].
    Optimal,
    /// Converged to reduced accuracy.
    Inaccurate,
    Infeasible,
    Unbounded,
    Failed,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub status: SolveStatus,
    /// Objective in the problem's own sense (constant included).
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub x: Vec<f64>,
    pub iterations: u32,
    pub detail: String,
}

impl Solution {
    pub fn duality_gap(&self) -> f64 {
        (self.primal_objective - self.dual_objective).abs()
    }

    pub fn value(&self, e: &LinExpr) -> f64 {
        e.eval(&self.x)
    }

    pub fn matrix(&self, h: &HermitianExpr) -> CMat {
        h.eval(&self.x)
    }

    /// Err unless the solve is optimal (or inaccurate with a gap still inside
    /// `tolerance`).
    pub fn require_accepted(self, tolerance: f64) -> Result<Self> {
        match self.status {
            SolveStatus::Optimal => Ok(self),
            SolveStatus::Inaccurate if self.duality_gap() <= tolerance => Ok(self),
            SolveStatus::Infeasible => Err(Error::Infeasible(self.detail)),
            _ => Err(Error::SolverFailure(format!("{:?}: {}", self.status, self.detail))),
        }
    }
}

pub trait ConicSolver: Send + Sync {
    fn solve(&self, problem: &Problem) -> Result<Solution>;
}

/// Solve with the default backend and require an accepted status.
pub fn solve(problem: &Problem) -> Result<Solution> {
    ClarabelSolver::default().solve(problem)?.require_accepted(1e-6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn lp_with_equality_and_bounds() {
        // max x + 2y  s.t. x + y = 1, x, y >= 0
        let mut p = Problem::new();
        let x = p.new_var();
        let y = p.new_var();
        p.add_eq(LinExpr::var(x) + LinExpr::var(y) - LinExpr::constant(1.0));
        p.add_nonneg(LinExpr::var(x));
        p.add_nonneg(LinExpr::var(y));
        p.set_objective(Sense::Maximize, LinExpr::var(x) + LinExpr::term(y, 2.0));
        let s = solve(&p).unwrap();
        assert!((s.primal_objective - 2.0).abs() < 1e-7);
        assert!(s.duality_gap() <= GAP_TOL);
    }

    #[test]
    fn complex_psd_off_diagonal_bound() {
        // max Im(H_01) s.t. H Hermitian 2x2 PSD with unit diagonal -> 1
        let mut p = Problem::new();
        let h = p.hermitian_var(2);
        p.add_eq(h.entry(0, 0).0 - LinExpr::constant(1.0));
        p.add_eq(h.entry(1, 1).0 - LinExpr::constant(1.0));
        let im = h.entry(0, 1).1;
        p.add_psd(h);
        p.set_objective(Sense::Maximize, im);
        let s = solve(&p).unwrap();
        assert!((s.primal_objective - 1.0).abs() < 1e-6);
    }

    #[test]
    fn trace_with_matches_dense_product() {
        let m = CMat::from_row_slice(2, 2, &[c(0.3, 0.0), c(0.1, -0.4), c(0.1, 0.4), c(0.7, 0.0)]);
        let a = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.2, 0.5), c(0.2, -0.5), c(-2.0, 0.0)]);
        let h = HermitianExpr::constant(&a);
        let t = h.trace_with(&m).eval(&[]);
        assert!((t - crate::linalg::trace_product(&a, &m)).abs() < 1e-14);
    }

    #[test]
    fn infeasible_is_certified() {
        let mut p = Problem::new();
        let x = p.new_var();
        p.add_nonneg(LinExpr::var(x) - LinExpr::constant(1.0));
        p.add_nonneg(LinExpr::constant(0.0) - LinExpr::var(x));
        p.set_objective(Sense::Minimize, LinExpr::var(x));
        assert!(matches!(solve(&p), Err(Error::Infeasible(_))));
    }
}
