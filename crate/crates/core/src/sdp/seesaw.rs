//! Dimension-bounded see-saw.
//!
//! With measurements fixed, the best states under the cap solve
//! `max sum_x tr(rho_x B_x)` over `rho_x >= 0`, `tr rho_x = 1`,
//! `Theta >= rho_x`, `tr Theta <= N p`, where `B_x = sum_{y,z} c(x,y,z) M_{z|y}`.
//! With states fixed, each setting's POVM is an independent SDP.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::linalg::{self, CMat};
use crate::quantum::{quantum_distinguishability, quantum_success, random_povm, QuantumStrategy};
use crate::solver::{self, HermitianExpr, LinExpr, Problem, Sense};
use crate::task::TaskSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeesawConfig {
    pub dim: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self { dim: 2, restarts: 10, max_iters: 200, tol: 1e-7, seed: 0, execution: Execution::default() }
    }
}

impl SeesawConfig {
    pub fn with_dim(dim: usize) -> Self {
        Self { dim, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    /// A full alternation improved the objective by less than `tol`.
    Converged,
    /// Stopped at `max_iters` while still improving.
    IterationLimit,
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct SeedRun {
    pub restart: usize,
    pub value: f64,
    pub iterations: usize,
    pub status: RunStatus,
    /// Objective after every half-step.
    pub history: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SeesawResult {
    /// Success of the returned strategy, evaluated directly.
    pub value: f64,
    pub strategy: QuantumStrategy,
    pub distinguishability: f64,
    pub best_restart: usize,
    pub runs: Vec<SeedRun>,
}

fn state_step(task: &TaskSpec, povms: &[Vec<CMat>], d: usize, p: f64) -> Result<(f64, Vec<CMat>)> {
    let n = task.n_inputs();
    let mut problem = Problem::new();
    let theta = problem.hermitian_var(d);
    let mut objective = LinExpr::zero();
    let mut rhos = Vec::with_capacity(n);
    for x in 0..n {
        let mut b = CMat::zeros(d, d);
        for y in 0..task.n_settings() {
            for z in 0..task.n_outcomes() {
                let c = task.coeff(x, y, z);
                if c != 0.0 {
                    b += povms[y][z].scale(c);
                }
            }
        }
        let rho = problem.hermitian_var(d);
        problem.add_eq(rho.trace() - LinExpr::constant(1.0));
        objective.add_scaled(&rho.trace_with(&b), 1.0);
        problem.add_psd(rho.clone());
        problem.add_psd(theta.minus(&rho));
        rhos.push(rho);
    }
    problem.add_nonneg(LinExpr::constant(n as f64 * p) - theta.trace());
    problem.set_objective(Sense::Maximize, objective);
    let sol = solver::solve(&problem)?;
    let states = rhos
        .iter()
        .map(|r| {
            let m = linalg::psd_projection(&linalg::hermitize(&sol.matrix(r)));
            let t = linalg::trace(&m).re;
            m.unscale(t)
        })
        .collect();
    Ok((sol.primal_objective, states))
}

fn measurement_step(task: &TaskSpec, states: &[CMat], d: usize) -> Result<(f64, Vec<Vec<CMat>>)> {
    let mut total = 0.0;
    let mut povms = Vec::with_capacity(task.n_settings());
    for y in 0..task.n_settings() {
        let mut problem = Problem::new();
        let mut sum = HermitianExpr::zeros(d);
        let mut objective = LinExpr::zero();
        let mut elems = Vec::with_capacity(task.n_outcomes());
        for z in 0..task.n_outcomes() {
            let mut cz = CMat::zeros(d, d);
            for (x, rho) in states.iter().enumerate() {
                let c = task.coeff(x, y, z);
                if c != 0.0 {
                    cz += rho.scale(c);
                }
            }
            let m = problem.hermitian_var(d);
            objective.add_scaled(&m.trace_with(&cz), 1.0);
            sum.add_scaled(&m, 1.0);
            problem.add_psd(m.clone());
            elems.push(m);
        }
        sum.add_scaled(&HermitianExpr::constant(&linalg::identity(d)), -1.0);
        problem.add_hermitian_eq(&sum);
        problem.set_objective(Sense::Maximize, objective);
        let sol = solver::solve(&problem)?;
        total += sol.primal_objective;
        let raw: Vec<CMat> =
            elems.iter().map(|m| linalg::psd_projection(&linalg::hermitize(&sol.matrix(m)))).collect();
        let s = linalg::inverse_sqrt(&raw.iter().fold(CMat::zeros(d, d), |a, m| a + m));
        povms.push(raw.iter().map(|m| linalg::hermitize(&(&s * m * &s))).collect());
    }
    Ok((total, povms))
}

struct Outcome {
    run: SeedRun,
    best: Option<(Vec<CMat>, Vec<Vec<CMat>>)>,
}

fn single_run(task: &TaskSpec, p: f64, cfg: &SeesawConfig, restart: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let d = cfg.dim;
    let mut povms: Vec<Vec<CMat>> =
        (0..task.n_settings()).map(|_| random_povm(d, task.n_outcomes(), &mut rng)).collect();
    let mut history = Vec::new();
    let mut best = None;
    let mut last = f64::NEG_INFINITY;
    let mut status = RunStatus::IterationLimit;
    let mut iterations = 0;
    for it in 0..cfg.max_iters {
        iterations = it + 1;
        let step = state_step(task, &povms, d, p)
            .and_then(|(v, states)| {
                history.push(v);
                measurement_step(task, &states, d).map(|(w, m)| (w, states, m))
            });
        let (value, states, next) = match step {
            Ok(s) => s,
            Err(e) => {
                status = RunStatus::Failed(e.to_string());
                break;
            }
        };
        history.push(value);
        // the measurement step keeps the states, so (states, next) is feasible
        best = Some((states, next.clone()));
        povms = next;
        let improvement = value - last;
        last = value;
        if improvement < cfg.tol {
            status = RunStatus::Converged;
            break;
        }
    }
    let run = SeedRun { restart, value: last, iterations, status, history };
    Outcome { run, best }
}

/// Best success found by see-saw in dimension `cfg.dim` under `D_Q <= p`.
pub fn seesaw_max_success(task: &TaskSpec, p: f64, cfg: &SeesawConfig) -> Result<SeesawResult> {
    let n = task.n_inputs() as f64;
    if cfg.dim < 2 {
        return Err(Error::InvalidArgument(format!("see-saw needs dim >= 2 (got {})", cfg.dim)));
    }
    if !(1.0 / n - 1e-12..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("cap {p} outside [1/N, 1]")));
    }
    if cfg.restarts == 0 || cfg.max_iters == 0 {
        return Err(Error::InvalidArgument("restarts and max_iters must be positive".into()));
    }
    let outcomes = exec::map_range(cfg.execution, cfg.restarts, |r| single_run(task, p, cfg, r));
    // ties go to the lowest restart index
    let mut winner: Option<usize> = None;
    for (i, o) in outcomes.iter().enumerate() {
        if o.best.is_some() && winner.is_none_or(|w| o.run.value > outcomes[w].run.value) {
            winner = Some(i);
        }
    }
    let runs: Vec<SeedRun> = outcomes.iter().map(|o| o.run.clone()).collect();
    let Some(w) = winner else {
        let why = runs.iter().find_map(|r| match &r.status {
            RunStatus::Failed(m) => Some(m.clone()),
            _ => None,
        });
        return Err(Error::SolverFailure(why.unwrap_or_else(|| "no restart succeeded".into())));
    };
    let (states, povms) = outcomes.into_iter().nth(w).and_then(|o| o.best).expect("winner has a witness");
    let strategy = QuantumStrategy::from_approximate(states, povms)?;
    let value = quantum_success(task, &strategy)?;
    let prior = vec![1.0 / n; task.n_inputs()];
    let distinguishability = quantum_distinguishability(strategy.states(), &prior)?;
    Ok(SeesawResult { value, strategy, distinguishability, best_restart: w, runs })
}

/// Fixed number of bisection steps on `[1/N, 1]`.
pub const BISECTION_STEPS: usize = 12;

#[derive(Debug, Clone)]
pub struct SeesawMinResult {
    /// Smallest bracketed cap reaching the target; `None` if even `p = 1` fails.
    pub p: Option<f64>,
    pub evaluations: Vec<(f64, f64)>,
}

/// Smallest cap `p` (to `2^-12` resolution) at which the see-saw reaches
/// success `s_target` within `slack`.
pub fn seesaw_min_distinguishability(
    task: &TaskSpec,
    s_target: f64,
    slack: f64,
    cfg: &SeesawConfig,
) -> Result<SeesawMinResult> {
    let mut evaluations = Vec::new();
    let reaches = |p: f64, evals: &mut Vec<(f64, f64)>| -> Result<bool> {
        let v = seesaw_max_success(task, p, cfg)?.value;
        evals.push((p, v));
        Ok(v >= s_target - slack)
    };
    let lo0 = 1.0 / task.n_inputs() as f64;
    if reaches(lo0, &mut evaluations)? {
        return Ok(SeesawMinResult { p: Some(lo0), evaluations });
    }
    if !reaches(1.0, &mut evaluations)? {
        return Ok(SeesawMinResult { p: None, evaluations });
    }
    let (mut lo, mut hi) = (lo0, 1.0);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if reaches(mid, &mut evaluations)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(SeesawMinResult { p: Some(hi), evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::task::{pair_distinguishability_task, rac_task};

    fn quick(dim: usize) -> SeesawConfig {
        SeesawConfig { dim, restarts: 4, max_iters: 100, ..SeesawConfig::default() }
    }

    #[test]
    fn rac22_qubit_at_half() {
        let t = rac_task(2, 2).unwrap();
        let r = seesaw_max_success(&t, 0.5, &quick(2)).unwrap();
        assert!(r.value >= 0.853553 - 1e-3, "{}", r.value);
        assert!(r.distinguishability <= 0.5 + 1e-6);
    }

    #[test]
    fn rac22_at_floor_is_uninformative() {
        let t = rac_task(2, 2).unwrap();
        let r = seesaw_max_success(&t, 0.25, &quick(2)).unwrap();
        assert!((r.value - 0.5).abs() < 1e-4, "{}", r.value);
    }

    #[test]
    fn pair3_at_two_thirds() {
        let t = pair_distinguishability_task(3).unwrap();
        let r = seesaw_max_success(&t, 2.0 / 3.0, &quick(2)).unwrap();
        assert!(r.value >= 0.9330 - 1e-3, "{}", r.value);
    }

    #[test]
    fn history_is_monotone_and_deterministic() {
        let t = rac_task(2, 2).unwrap();
        let a = seesaw_max_success(&t, 0.4, &quick(2)).unwrap();
        for run in &a.runs {
            for w in run.history.windows(2) {
                assert!(w[1] >= w[0] - 1e-6, "{:?}", run.history);
            }
        }
        let seq = SeesawConfig { execution: Execution::Sequential, ..quick(2) };
        let b = seesaw_max_success(&t, 0.4, &seq).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.best_restart, b.best_restart);
    }

    #[test]
    fn bisection_floor_shortcut() {
        let t = rac_task(2, 2).unwrap();
        let r = seesaw_min_distinguishability(&t, 0.5, 1e-6, &quick(2)).unwrap();
        assert_eq!(r.p, Some(0.25));
        assert_eq!(r.evaluations.len(), 1);
    }
}
