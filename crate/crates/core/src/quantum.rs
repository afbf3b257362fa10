//! Quantum prepare-and-measure strategies.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{Graph, HADAMARD_CAP};
use crate::linalg::{self, c, CMat, CVec, C64};
use crate::solver::{self, HermitianExpr, LinExpr, Problem, Sense};
use crate::task::{base_digits, TaskSpec};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
pub const TRACE_TOL: f64 = 1e-10;
pub const COMPLETENESS_TOL: f64 = 1e-9;

fn check_density(index: usize, rho: &CMat, dim: usize) -> Result<()> {
    let bad = |reason: String| Err(Error::InvalidState { index, reason });
    if rho.nrows() != dim || rho.ncols() != dim {
        return bad(format!("shape {}x{}, expected {dim}x{dim}", rho.nrows(), rho.ncols()));
    }
    let herm = linalg::hermiticity_defect(rho);
    if herm > HERMITIAN_TOL {
        return bad(format!("not Hermitian (defect {herm:.2e})"));
    }
    let tr = linalg::trace(rho).re;
    if (tr - 1.0).abs() > TRACE_TOL {
        return bad(format!("trace {tr}"));
    }
    let min = linalg::min_eigenvalue(rho);
    if min < -PSD_TOL {
        return bad(format!("negative eigenvalue {min:.2e}"));
    }
    Ok(())
}

fn check_povm(setting: usize, povm: &[CMat], dim: usize) -> Result<()> {
    let bad = |reason: String| Err(Error::InvalidMeasurement { setting, reason });
    let mut total = CMat::zeros(dim, dim);
    for (z, m) in povm.iter().enumerate() {
        if m.nrows() != dim || m.ncols() != dim {
            return bad(format!("element {z} has shape {}x{}", m.nrows(), m.ncols()));
        }
        if linalg::hermiticity_defect(m) > HERMITIAN_TOL {
            return bad(format!("element {z} not Hermitian"));
        }
        let min = linalg::min_eigenvalue(m);
        if min < -PSD_TOL {
            return bad(format!("element {z} has eigenvalue {min:.2e}"));
        }
        total += m;
    }
    let err = linalg::max_abs_diff(&total, &linalg::identity(dim));
    if err > COMPLETENESS_TOL {
        return bad(format!("elements sum to identity only within {err:.2e}"));
    }
    Ok(())
}

/// Sender states `rho_x` and receiver POVMs `M_{z|y}`, validated on construction.
#[derive(Debug, Clone)]
pub struct QuantumStrategy {
    dim: usize,
    states: Vec<CMat>,
    measurements: Vec<Vec<CMat>>,
}

impl QuantumStrategy {
    pub fn new(states: Vec<CMat>, measurements: Vec<Vec<CMat>>) -> Result<Self> {
        let dim = states.first().map_or(0, |s| s.nrows());
        if dim == 0 {
            return Err(Error::InvalidArgument("strategy needs at least one non-empty state".into()));
        }
        for (i, rho) in states.iter().enumerate() {
            check_density(i, rho, dim)?;
        }
        for (y, povm) in measurements.iter().enumerate() {
            check_povm(y, povm, dim)?;
        }
        Ok(Self { dim, states, measurements })
    }

    /// Projects solver output onto valid states/POVMs: Hermitian part, PSD
    /// clipping, unit trace and completeness restored by `S^{-1/2} M S^{-1/2}`.
    pub fn from_approximate(states: Vec<CMat>, measurements: Vec<Vec<CMat>>) -> Result<Self> {
        let states = states.iter().map(clean_state).collect();
        let measurements = measurements.iter().map(|p| clean_povm(p)).collect();
        Self::new(states, measurements)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn states(&self) -> &[CMat] {
        &self.states
    }
    pub fn measurements(&self) -> &[Vec<CMat>] {
        &self.measurements
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = StrategyDocument {
            dim: self.dim,
            n_states: self.states.len(),
            n_settings: self.measurements.len(),
            n_outcomes: self.measurements.iter().map(Vec::len).collect(),
            states: self.states.iter().map(interleave).collect(),
            measurements: self.measurements.iter().map(|p| p.iter().map(interleave).collect()).collect(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: StrategyDocument = serde_json::from_str(s)?;
        let d = doc.dim;
        if doc.states.len() != doc.n_states || doc.measurements.len() != doc.n_settings {
            return Err(Error::Parse("header counts disagree with payload".into()));
        }
        let states = doc.states.iter().map(|v| deinterleave(v, d)).collect::<Result<Vec<_>>>()?;
        let mut measurements = Vec::with_capacity(doc.measurements.len());
        for (y, povm) in doc.measurements.iter().enumerate() {
            if doc.n_outcomes.get(y) != Some(&povm.len()) {
                return Err(Error::Parse(format!("setting {y}: outcome count disagrees with header")));
            }
            measurements.push(povm.iter().map(|v| deinterleave(v, d)).collect::<Result<Vec<_>>>()?);
        }
        Self::new(states, measurements)
    }
}

fn clean_state(rho: &CMat) -> CMat {
    let p = linalg::psd_projection(&linalg::hermitize(rho));
    let tr = linalg::trace(&p).re;
    p.unscale(tr)
}

fn clean_povm(povm: &[CMat]) -> Vec<CMat> {
    let parts: Vec<CMat> = povm.iter().map(|m| linalg::psd_projection(&linalg::hermitize(m))).collect();
    normalize_povm(parts)
}

fn normalize_povm(parts: Vec<CMat>) -> Vec<CMat> {
    let d = parts[0].nrows();
    let total = parts.iter().fold(CMat::zeros(d, d), |acc, m| acc + m);
    let s = linalg::inverse_sqrt(&total);
    parts.iter().map(|m| linalg::hermitize(&(&s * m * &s))).collect()
}

/// Row-major `[re, im, re, im, ...]`.
fn interleave(m: &CMat) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
    out
}

fn deinterleave(v: &[f64], d: usize) -> Result<CMat> {
    if v.len() != 2 * d * d {
        return Err(Error::Parse(format!("matrix payload has {} numbers, expected {}", v.len(), 2 * d * d)));
    }
    Ok(CMat::from_fn(d, d, |i, j| c(v[2 * (i * d + j)], v[2 * (i * d + j) + 1])))
}

#[derive(Serialize, Deserialize)]
struct StrategyDocument {
    dim: usize,
    n_states: usize,
    n_settings: usize,
    n_outcomes: Vec<usize>,
    states: Vec<Vec<f64>>,
    measurements: Vec<Vec<Vec<f64>>>,
}

/// Unit kets `|psi_x>`, phase-fixed so the first non-zero amplitude is real positive.
#[derive(Debug, Clone)]
pub struct PureStateFamily {
    dim: usize,
    kets: Vec<CVec>,
}

impl PureStateFamily {
    pub fn new(kets: Vec<CVec>) -> Result<Self> {
        let dim = kets.first().map_or(0, |k| k.len());
        let mut fixed = Vec::with_capacity(kets.len());
        for (i, mut k) in kets.into_iter().enumerate() {
            if k.len() != dim {
                return Err(Error::DimensionMismatch(format!("ket {i} has length {}", k.len())));
            }
            if (k.norm() - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidState { index: i, reason: format!("norm {}", k.norm()) });
            }
            linalg::fix_phase(&mut k);
            fixed.push(k);
        }
        Ok(Self { dim, kets: fixed })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kets(&self) -> &[CVec] {
        &self.kets
    }

    pub fn density_matrices(&self) -> Vec<CMat> {
        self.kets.iter().map(linalg::projector).collect()
    }

    /// States `|psi_x><psi_x|` with the binary test `{|psi_y><psi_y|, 1 - |psi_y><psi_y|}`
    /// for every setting `y`.
    pub fn with_projective_tests(&self) -> Result<QuantumStrategy> {
        let states = self.density_matrices();
        let id = linalg::identity(self.dim);
        let measurements = states.iter().map(|p| vec![p.clone(), &id - p]).collect();
        QuantumStrategy::new(states, measurements)
    }
}

pub fn quantum_success(task: &TaskSpec, strat: &QuantumStrategy) -> Result<f64> {
    if strat.states.len() != task.n_inputs() || strat.measurements.len() != task.n_settings() {
        return Err(Error::ShapeMismatch(format!(
            "strategy has {} states and {} settings, task needs {} and {}",
            strat.states.len(),
            strat.measurements.len(),
            task.n_inputs(),
            task.n_settings()
        )));
    }
    if let Some(y) = strat.measurements.iter().position(|p| p.len() != task.n_outcomes()) {
        return Err(Error::ShapeMismatch(format!("setting {y} has the wrong number of outcomes")));
    }
    Ok(task
        .nonzeros()
        .map(|(x, y, z, w)| w * linalg::trace_product(&strat.states[x], &strat.measurements[y][z]))
        .sum())
}

/// Success of the projective-test strategy of a pure family on a graph task,
/// `1 - w sum_y sum_{x in G_y} |<psi_x|psi_y>|^2`, without building the task tensor.
pub fn graph_success_pure(g: &Graph, family: &PureStateFamily) -> Result<f64> {
    if family.kets.len() != g.n_vertices() {
        return Err(Error::SizeMismatch { expected: g.n_vertices(), got: family.kets.len() });
    }
    let n = g.n_vertices();
    let total_degree: usize = (0..n).map(|v| g.degree(v)).sum();
    let w = 1.0 / (total_degree + n) as f64;
    let mut loss = 0.0;
    for y in 0..n {
        for &x in g.neighbors(y) {
            loss += family.kets[x].dotc(&family.kets[y]).norm_sqr();
        }
    }
    Ok(1.0 - w * loss)
}

#[derive(Debug, Clone)]
pub struct Discrimination {
    pub value: f64,
    pub duality_gap: f64,
    pub povm: Vec<CMat>,
}

fn check_common_dim(states: &[CMat]) -> Result<usize> {
    let d = states.first().map_or(0, |s| s.nrows());
    if let Some(i) = states.iter().position(|s| s.nrows() != d || s.ncols() != d) {
        return Err(Error::DimensionMismatch(format!("state {i} is not {d}x{d}")));
    }
    Ok(d)
}

/// Optimal minimum-error discrimination:
/// `max sum_x p_x tr(rho_x M_x)` over POVMs `{M_x}`.
pub fn optimal_discrimination(states: &[CMat], prior: &[f64]) -> Result<Discrimination> {
    let d = check_common_dim(states)?;
    if prior.len() != states.len() {
        return Err(Error::ShapeMismatch("prior length differs from number of states".into()));
    }
    // Real data admits a real optimum (average any optimum with its conjugate).
    let real = states.iter().all(|s| s.iter().all(|v| v.im == 0.0));
    let mut problem = Problem::new();
    let mut total = HermitianExpr::zeros(d);
    let mut objective = LinExpr::zero();
    let mut povm = Vec::with_capacity(states.len());
    for (rho, &p) in states.iter().zip(prior) {
        let m = if real { problem.symmetric_var(d) } else { problem.hermitian_var(d) };
        objective.add_scaled(&m.trace_with(rho), p);
        total.add_scaled(&m, 1.0);
        problem.add_psd(m.clone());
        povm.push(m);
    }
    total.add_scaled(&HermitianExpr::constant(&linalg::identity(d)), -1.0);
    problem.add_hermitian_eq(&total);
    problem.set_objective(Sense::Maximize, objective);
    let sol = solver::solve(&problem)?;
    Ok(Discrimination {
        value: sol.primal_objective,
        duality_gap: sol.duality_gap(),
        povm: povm.iter().map(|m| sol.matrix(m)).collect(),
    })
}

pub fn quantum_distinguishability(states: &[CMat], prior: &[f64]) -> Result<f64> {
    Ok(optimal_discrimination(states, prior)?.value)
}

/// Average over pairs of the optimal binary discrimination probability,
/// `1/2 + sum_{x<x'} ||rho_x - rho_x'||_1 / (2N(N-1))`.
pub fn helstrom_pair_success(states: &[CMat]) -> Result<f64> {
    check_common_dim(states)?;
    let n = states.len();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two states".into()));
    }
    let mut acc = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            acc += linalg::trace_norm(&(&states[a] - &states[b]));
        }
    }
    Ok(0.5 + acc / (2.0 * (n * (n - 1)) as f64))
}

pub fn computational_basis(d: usize) -> Vec<CVec> {
    (0..d).map(|k| CVec::from_fn(d, |j, _| if j == k { c(1.0, 0.0) } else { c(0.0, 0.0) })).collect()
}

/// `f_k = d^{-1/2} sum_j omega^{jk} e_j`, `omega = exp(2 pi i / d)`.
pub fn fourier_basis(d: usize) -> Vec<CVec> {
    let norm = 1.0 / (d as f64).sqrt();
    (0..d)
        .map(|k| {
            CVec::from_fn(d, |j, _| {
                let phase = 2.0 * PI * ((j * k) % d) as f64 / d as f64;
                C64::from_polar(norm, phase)
            })
        })
        .collect()
}

/// `(2, d)` RAC strategy: the receiver measures the computational basis for
/// the first dit and the Fourier basis for the second; the sender prepares the
/// top eigenvector of `(|e_a><e_a| + |f_b><f_b|)/2` for input `(a, b)`.
pub fn rac_mub_strategy(d: usize) -> Result<QuantumStrategy> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("MUB strategy needs d >= 2 (got {d})")));
    }
    let e = computational_basis(d);
    let f = fourier_basis(d);
    let mut states = Vec::with_capacity(d * d);
    for x in 0..d * d {
        let digits = base_digits(x, d, 2);
        let sum = (linalg::projector(&e[digits[0]]) + linalg::projector(&f[digits[1]])).scale(0.5);
        let (_, v) = linalg::top_eigenvector(&sum);
        states.push(linalg::projector(&v));
    }
    let measurements = vec![
        e.iter().map(linalg::projector).collect(),
        f.iter().map(linalg::projector).collect(),
    ];
    QuantumStrategy::new(states, measurements)
}

fn real_qubit(angle: f64) -> CVec {
    CVec::from_vec(vec![c(angle.cos(), 0.0), c(angle.sin(), 0.0)])
}

/// Noisy `(2, 2)` RAC qubit strategy: `p |psi_x><psi_x| + (1 - p) 1/2` with ket
/// angles pi/8, 3pi/8, 7pi/8, 5pi/8 for inputs 00, 01, 10, 11. The first bit is
/// read in the `{|+>, |->}` basis, the second in `{|0>, |1>}`.
pub fn noisy_rac22_strategy(p: f64) -> Result<QuantumStrategy> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("visibility {p} outside [0, 1]")));
    }
    let angles = [PI / 8.0, 3.0 * PI / 8.0, 7.0 * PI / 8.0, 5.0 * PI / 8.0];
    let half_id = linalg::identity(2).scale(0.5);
    let states = angles
        .iter()
        .map(|&a| linalg::projector(&real_qubit(a)).scale(p) + half_id.scale(1.0 - p))
        .collect();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = CVec::from_vec(vec![c(s, 0.0), c(s, 0.0)]);
    let minus = CVec::from_vec(vec![c(s, 0.0), c(-s, 0.0)]);
    let z = computational_basis(2);
    let measurements = vec![
        vec![linalg::projector(&plus), linalg::projector(&minus)],
        vec![linalg::projector(&z[0]), linalg::projector(&z[1])],
    ];
    QuantumStrategy::new(states, measurements)
}

/// Regular `N`-gon of qubit kets at half-angles `x beta / 2`, `beta = (N-1) pi / N`.
pub fn ngon_states(n: usize) -> Result<PureStateFamily> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("N-gon needs N >= 3 (got {n})")));
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenN(n));
    }
    let beta = (n as f64 - 1.0) * PI / n as f64;
    PureStateFamily::new((0..n).map(|x| real_qubit(x as f64 * beta / 2.0)).collect())
}

pub fn ngon_strategy(n: usize) -> Result<QuantumStrategy> {
    ngon_states(n)?.with_projective_tests()
}

/// Sign vectors `d^{-1/2} ((-1)^{x_1}, ..., (-1)^{x_d})`, `x_1` the most
/// significant bit of the vertex index.
pub fn hadamard_states(d: usize) -> Result<PureStateFamily> {
    if d % 2 == 1 {
        return Err(Error::OddDimension(d));
    }
    if d == 0 || d > HADAMARD_CAP {
        return Err(Error::InvalidArgument(format!("hadamard states support 2 <= d <= {HADAMARD_CAP}")));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let kets = (0..1usize << d)
        .map(|x| {
            let bits = base_digits(x, 2, d);
            CVec::from_iterator(d, bits.iter().map(|&b| c(if b == 0 { norm } else { -norm }, 0.0)))
        })
        .collect();
    PureStateFamily::new(kets)
}

pub fn hadamard_strategy(d: usize) -> Result<QuantumStrategy> {
    hadamard_states(d)?.with_projective_tests()
}

/// Qubit kets at angles `x pi / N` for `x = 1..=N`.
pub fn pairdist_states(n: usize) -> Result<PureStateFamily> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("pair states need N >= 2 (got {n})")));
    }
    PureStateFamily::new((1..=n).map(|x| real_qubit(x as f64 * PI / n as f64)).collect())
}

/// Haar-random ket (normalized complex Gaussian vector).
pub fn haar_ket<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(d, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let n = v.norm();
    v.unscale(n)
}

/// Random full-rank POVM with `k` outcomes: each element starts as a sum of
/// `d` Haar-random projectors, then the set is normalized to sum to identity.
pub fn random_povm<R: Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> Vec<CMat> {
    let parts = (0..k)
        .map(|_| (0..d).fold(CMat::zeros(d, d), |acc, _| acc + linalg::projector(&haar_ket(d, rng))))
        .collect();
    normalize_povm(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cycle_graph, hadamard_graph};
    use crate::task::{graph_equality_task, rac_task};
    use rand::SeedableRng;

    fn uniform(n: usize) -> Vec<f64> {
        vec![1.0 / n as f64; n]
    }

    #[test]
    fn mub_strategy_success() {
        let t = rac_task(2, 2).unwrap();
        let s = quantum_success(&t, &rac_mub_strategy(2).unwrap()).unwrap();
        assert!((s - 0.5 * (1.0 + 0.5f64.sqrt())).abs() < 1e-12);
        let t3 = rac_task(2, 3).unwrap();
        let s3 = quantum_success(&t3, &rac_mub_strategy(3).unwrap()).unwrap();
        assert!((s3 - 0.788675134594813).abs() < 1e-9);
        let t4 = rac_task(2, 4).unwrap();
        let strat4 = rac_mub_strategy(4).unwrap();
        assert!((quantum_success(&t4, &strat4).unwrap() - 0.75).abs() < 1e-12);
        let dq = quantum_distinguishability(strat4.states(), &uniform(16)).unwrap();
        assert!(dq <= 0.25 + 1e-7);
    }

    #[test]
    fn fourier_and_computational_are_unbiased() {
        for d in 2..=5 {
            let e = computational_basis(d);
            let f = fourier_basis(d);
            for a in &e {
                for b in &f {
                    assert!((a.dotc(b).norm_sqr() - 1.0 / d as f64).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn ngon_success_and_overlaps() {
        for n in [3, 5, 7, 9] {
            let t = graph_equality_task(&cycle_graph(n).unwrap()).unwrap();
            let s = quantum_success(&t, &ngon_strategy(n).unwrap()).unwrap();
            let expect = 1.0 - 2.0 / 3.0 * (PI / (2 * n) as f64).sin().powi(2);
            assert!((s - expect).abs() < 1e-12, "N={n}: {s}");
        }
        let fam = ngon_states(5).unwrap();
        let sin = (PI / 10.0).sin();
        for x in 0..5 {
            let o = fam.kets()[x].dotc(&fam.kets()[(x + 1) % 5]).norm();
            assert!((o - sin).abs() < 1e-10);
        }
        assert_eq!(ngon_strategy(4).unwrap_err(), Error::EvenN(4));
    }

    #[test]
    fn pure_graph_formula_matches_trace_formula() {
        let g = cycle_graph(7).unwrap();
        let fam = ngon_states(7).unwrap();
        let a = graph_success_pure(&g, &fam).unwrap();
        let b = quantum_success(&graph_equality_task(&g).unwrap(), &fam.with_projective_tests().unwrap()).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn hadamard_is_perfect() {
        for d in [2, 4] {
            let g = hadamard_graph(d).unwrap();
            let strat = hadamard_strategy(d).unwrap();
            let s = quantum_success(&graph_equality_task(&g).unwrap(), &strat).unwrap();
            assert!((s - 1.0).abs() < 1e-12);
        }
        let dq = quantum_distinguishability(hadamard_strategy(4).unwrap().states(), &uniform(16)).unwrap();
        assert!((dq - 0.25).abs() < 1e-6);
        assert!(hadamard_strategy(3).is_err());
    }

    #[test]
    fn noisy_rac_values() {
        let t = rac_task(2, 2).unwrap();
        let cos2 = (PI / 8.0).cos().powi(2);
        let s1 = quantum_success(&t, &noisy_rac22_strategy(1.0).unwrap()).unwrap();
        assert!((s1 - cos2).abs() < 1e-12);
        let s0 = quantum_success(&t, &noisy_rac22_strategy(0.0).unwrap()).unwrap();
        assert!((s0 - 0.5).abs() < 1e-12);
        let p = 4.0 / 7.0;
        let sp = quantum_success(&t, &noisy_rac22_strategy(p).unwrap()).unwrap();
        assert!((sp - (p * cos2 + (1.0 - p) / 2.0)).abs() < 1e-12);
        let dq = quantum_distinguishability(noisy_rac22_strategy(p).unwrap().states(), &uniform(4)).unwrap();
        assert!((dq - 11.0 / 28.0).abs() < 1e-6);
    }

    #[test]
    fn distinguishability_examples() {
        let basis: Vec<CMat> = computational_basis(3).iter().map(linalg::projector).collect();
        assert!((quantum_distinguishability(&basis, &uniform(3)).unwrap() - 1.0).abs() < 1e-7);
        let same = vec![basis[0].clone(), basis[0].clone()];
        assert!((quantum_distinguishability(&same, &uniform(2)).unwrap() - 0.5).abs() < 1e-7);
        let bad = vec![basis[0].clone(), linalg::identity(2).scale(0.5)];
        assert!(matches!(quantum_distinguishability(&bad, &uniform(2)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn helstrom_examples() {
        let basis: Vec<CMat> = computational_basis(2).iter().map(linalg::projector).collect();
        assert!((helstrom_pair_success(&basis).unwrap() - 1.0).abs() < 1e-12);
        // pure qubit kets: ||rho - sigma||_1 = 2 |sin(angle difference)|
        for n in 3..=8 {
            let s = helstrom_pair_success(&pairdist_states(n).unwrap().density_matrices()).unwrap();
            let mut acc = 0.0;
            for a in 1..=n {
                for b in a + 1..=n {
                    acc += ((b - a) as f64 * PI / n as f64).sin().abs();
                }
            }
            assert!((s - (0.5 + acc / (n * (n - 1)) as f64)).abs() < 1e-12, "N={n}: {s}");
        }
        for (n, table) in [(3, 0.933), (5, 0.8847), (6, 0.8732)] {
            let s = helstrom_pair_success(&pairdist_states(n).unwrap().density_matrices()).unwrap();
            assert!((s - table).abs() < 5e-4, "N={n}: {s}");
        }
        let fam = pairdist_states(3).unwrap();
        assert!((fam.kets()[0].dotc(&fam.kets()[1]).norm() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn validation_rejects_bad_objects() {
        let rho = CMat::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.3, 0.0), c(0.5, 0.0)]);
        assert!(matches!(QuantumStrategy::new(vec![rho], vec![]), Err(Error::InvalidState { .. })));
        let ok = linalg::identity(2).scale(0.5);
        let half = vec![linalg::identity(2).scale(0.5)];
        assert!(matches!(
            QuantumStrategy::new(vec![ok], vec![half]),
            Err(Error::InvalidMeasurement { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let strat = rac_mub_strategy(3).unwrap();
        let back = QuantumStrategy::from_json(&strat.to_json().unwrap()).unwrap();
        for (a, b) in strat.states().iter().zip(back.states()) {
            assert_eq!(a, b);
        }
        let bad = r#"{"dim":2,"n_states":1,"n_settings":0,"n_outcomes":[],
            "states":[[0.5,0,0.2,0,0.4,0,0.5,0]],"measurements":[]}"#;
        assert!(matches!(QuantumStrategy::from_json(bad), Err(Error::InvalidState { .. })));
    }

    #[test]
    fn random_objects_are_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for d in 2..5 {
            let k = haar_ket(d, &mut rng);
            assert!((k.norm() - 1.0).abs() < 1e-12);
            let povm = random_povm(d, 3, &mut rng);
            assert!(QuantumStrategy::new(vec![linalg::projector(&k)], vec![povm]).is_ok());
        }
    }
}
