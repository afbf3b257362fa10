//! Classical one-way protocols.
//!
//! An encoding `p_e(m|x)` has distinguishability `sum_m max_x p_x p_e(m|x)`.
//! The exact trade-off between that quantity and the best achievable success
//! is a linear program once messages are identified with deterministic
//! decoding functions `y -> z`: merging messages that share a decoding never
//! raises the distinguishability and never changes the success, so `D^M`
//! messages suffice.

use crate::error::{Error, Result};
use crate::graphs::{independence_number, Graph};
use crate::solver::{self, LinExpr, Problem, Sense, Var};
use crate::task::{base_digits, TaskSpec};

/// Cap on the deterministic-decoding message alphabet.
pub const MESSAGE_CAP: usize = 100_000;

/// Row-stochastic (in `x`) matrix `p_e(m|x)`, stored message-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoding {
    n_messages: usize,
    n_inputs: usize,
    probs: Vec<f64>,
}

impl Encoding {
    /// `probs[m * n_inputs + x] = p_e(m|x)`.
    pub fn new(n_messages: usize, n_inputs: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != n_messages * n_inputs {
            return Err(Error::ShapeMismatch(format!(
                "encoding has {} entries, expected {}x{}",
                probs.len(),
                n_messages,
                n_inputs
            )));
        }
        if let Some(v) = probs.iter().find(|&&v| v < 0.0 || !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("encoding entry {v} is not a probability")));
        }
        for x in 0..n_inputs {
            let total: f64 = (0..n_messages).map(|m| probs[m * n_inputs + x]).sum();
            if (total - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!("p_e(.|x={x}) sums to {total}")));
            }
        }
        Ok(Self { n_messages, n_inputs, probs })
    }

    /// Deterministic encoding `x -> f(x)`.
    pub fn deterministic(n_messages: usize, n_inputs: usize, f: impl Fn(usize) -> usize) -> Self {
        let mut probs = vec![0.0; n_messages * n_inputs];
        for x in 0..n_inputs {
            probs[f(x) * n_inputs + x] = 1.0;
        }
        Self { n_messages, n_inputs, probs }
    }

    pub fn identity(n: usize) -> Self {
        Self::deterministic(n, n, |x| x)
    }

    pub fn n_messages(&self) -> usize {
        self.n_messages
    }

    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }

    #[inline]
    pub fn prob(&self, m: usize, x: usize) -> f64 {
        self.probs[m * self.n_inputs + x]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Clips tiny negatives, renormalizes each column and drops unused messages.
    fn cleaned(n_messages: usize, n_inputs: usize, mut probs: Vec<f64>) -> Self {
        for v in probs.iter_mut() {
            if *v < 1e-12 {
                *v = 0.0;
            }
        }
        for x in 0..n_inputs {
            let total: f64 = (0..n_messages).map(|m| probs[m * n_inputs + x]).sum();
            for m in 0..n_messages {
                probs[m * n_inputs + x] /= total;
            }
        }
        let used: Vec<usize> = (0..n_messages)
            .filter(|&m| (0..n_inputs).any(|x| probs[m * n_inputs + x] > 0.0))
            .collect();
        let probs = used.iter().flat_map(|&m| probs[m * n_inputs..(m + 1) * n_inputs].to_vec()).collect();
        Self { n_messages: used.len(), n_inputs, probs }
    }

    /// `lambda * self + (1 - lambda) * (all inputs -> message 0)`.
    fn mixed_with_constant(&self, lambda: f64) -> Self {
        let mut probs: Vec<f64> = self.probs.iter().map(|v| v * lambda).collect();
        for x in 0..self.n_inputs {
            probs[x] += 1.0 - lambda;
        }
        Self { probs, ..self.clone() }
    }

    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<&[f64]> = self.probs.chunks(self.n_inputs).collect();
        Ok(serde_json::to_string(&rows)?)
    }
}

pub fn classical_distinguishability(enc: &Encoding, prior: &[f64]) -> Result<f64> {
    if prior.len() != enc.n_inputs {
        return Err(Error::ShapeMismatch(format!(
            "prior has {} entries, encoding has {} inputs",
            prior.len(),
            enc.n_inputs
        )));
    }
    Ok((0..enc.n_messages)
        .map(|m| (0..enc.n_inputs).map(|x| prior[x] * enc.prob(m, x)).fold(0.0, f64::max))
        .sum())
}

/// Best success for a fixed encoding together with the optimal decoding table
/// `decoding[m][y] = z` (ties to the smallest `z`).
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedSuccess {
    pub success: f64,
    pub decoding: Vec<Vec<usize>>,
}

pub fn classical_success_given_encoding(task: &TaskSpec, enc: &Encoding) -> Result<DecodedSuccess> {
    if task.n_inputs() != enc.n_inputs {
        return Err(Error::ShapeMismatch(format!(
            "task has {} inputs, encoding has {}",
            task.n_inputs(),
            enc.n_inputs
        )));
    }
    let (n, m_settings, d) = (task.n_inputs(), task.n_settings(), task.n_outcomes());
    let mut success = 0.0;
    let mut decoding = vec![vec![0; m_settings]; enc.n_messages];
    for (m, table) in decoding.iter_mut().enumerate() {
        for (y, slot) in table.iter_mut().enumerate() {
            let mut best = f64::NEG_INFINITY;
            for z in 0..d {
                let score: f64 = (0..n).map(|x| task.coeff(x, y, z) * enc.prob(m, x)).sum();
                if score > best {
                    best = score;
                    *slot = z;
                }
            }
            success += best;
        }
    }
    Ok(DecodedSuccess { success, decoding })
}

/// Number of deterministic decoding functions `D^M`, the message alphabet of
/// the frontier LP.
pub fn canonical_message_count(task: &TaskSpec) -> Result<usize> {
    (0..task.n_settings())
        .try_fold(1usize, |acc, _| acc.checked_mul(task.n_outcomes()).filter(|&v| v <= MESSAGE_CAP))
        .ok_or_else(|| {
            Error::Overflow(format!(
                "{}^{} decoding functions exceed the cap of {MESSAGE_CAP}",
                task.n_outcomes(),
                task.n_settings()
            ))
        })
}

/// A point on the exact classical trade-off curve.
#[derive(Debug, Clone)]
pub struct FrontierPoint {
    /// Distinguishability budget (or, for the inverse direction, the minimal
    /// distinguishability found).
    pub dist_cap: f64,
    /// Success achieved by `encoding` with `decoding`.
    pub best_success: f64,
    /// Optimal value reported by the LP.
    pub lp_value: f64,
    pub encoding: Encoding,
    pub decoding: Vec<Vec<usize>>,
}

struct FrontierLp {
    problem: Problem,
    enc: Vec<Var>,
    t: Vec<Var>,
    n_messages: usize,
    success: LinExpr,
    dist: LinExpr,
}

fn frontier_lp(task: &TaskSpec) -> Result<FrontierLp> {
    let k = canonical_message_count(task)?;
    let (n, m_settings, d) = (task.n_inputs(), task.n_settings(), task.n_outcomes());
    let mut problem = Problem::new();
    let enc: Vec<Var> = (0..k * n).map(|_| problem.new_var()).collect();
    let t: Vec<Var> = (0..k).map(|_| problem.new_var()).collect();

    for x in 0..n {
        let mut col = LinExpr::constant(-1.0);
        for m in 0..k {
            col.add_term(enc[m * n + x], 1.0);
        }
        problem.add_eq(col);
    }
    let mut success = LinExpr::zero();
    for m in 0..k {
        let dec = base_digits(m, d, m_settings);
        for x in 0..n {
            let v = enc[m * n + x];
            problem.add_nonneg(LinExpr::var(v));
            // t_m >= p_x p_e(m|x)
            problem.add_nonneg(LinExpr::var(t[m]) - LinExpr::term(v, task.prior()[x]));
            let gain: f64 = (0..m_settings).map(|y| task.coeff(x, y, dec[y])).sum();
            success.add_term(v, gain);
        }
    }
    let mut dist = LinExpr::zero();
    for &tm in &t {
        dist.add_term(tm, 1.0);
    }
    Ok(FrontierLp { problem, enc, t, n_messages: k, success, dist })
}

fn witness(task: &TaskSpec, lp: &FrontierLp, x: &[f64], cap: f64, lp_value: f64) -> Result<FrontierPoint> {
    let n = task.n_inputs();
    let raw: Vec<f64> = lp.enc.iter().map(|v| x[v.0]).collect();
    let mut encoding = Encoding::cleaned(lp.n_messages, n, raw);
    let floor = task.prior().iter().cloned().fold(0.0, f64::max);
    let dist = classical_distinguishability(&encoding, task.prior())?;
    if dist > cap && dist > floor {
        // pull back inside the budget by mixing with a constant message
        let lambda = ((cap - floor) / (dist - floor)).clamp(0.0, 1.0);
        encoding = encoding.mixed_with_constant(lambda);
    }
    let decoded = classical_success_given_encoding(task, &encoding)?;
    let _ = &lp.t;
    Ok(FrontierPoint {
        dist_cap: cap,
        best_success: decoded.success,
        lp_value,
        encoding,
        decoding: decoded.decoding,
    })
}

/// Maximum classical success with distinguishability at most `p`.
pub fn classical_frontier(task: &TaskSpec, p: f64) -> Result<FrontierPoint> {
    let floor = task.prior().iter().cloned().fold(0.0, f64::max);
    if p < floor - 1e-12 {
        return Err(Error::Infeasible(format!("distinguishability cap {p} below 1/N = {floor}")));
    }
    if p > 1.0 + 1e-12 {
        return Err(Error::InvalidArgument(format!("distinguishability cap {p} above 1")));
    }
    let mut lp = frontier_lp(task)?;
    lp.problem.add_le(lp.dist.clone(), LinExpr::constant(p));
    lp.problem.set_objective(Sense::Maximize, lp.success.clone());
    let sol = solver::solve(&lp.problem)?;
    witness(task, &lp, &sol.x, p, sol.primal_objective)
}

/// Minimum classical distinguishability reaching success `s`. The returned
/// point carries the minimum in `dist_cap`.
pub fn classical_min_distinguishability(task: &TaskSpec, s: f64) -> Result<FrontierPoint> {
    let mut lp = frontier_lp(task)?;
    lp.problem.add_le(LinExpr::constant(s), lp.success.clone());
    lp.problem.set_objective(Sense::Minimize, lp.dist.clone());
    let sol = solver::solve(&lp.problem)?;
    let floor = task.prior().iter().cloned().fold(0.0, f64::max);
    let p_min = sol.primal_objective.max(floor);
    witness(task, &lp, &sol.x, p_min, sol.primal_objective)
}

/// Lower bound on the classical distinguishability of an `(n, d)` RAC
/// reaching success `s`: `max(n s + 1 - n, 0)`.
pub fn rac_bound(n: usize, s: f64) -> f64 {
    (n as f64 * s + 1.0 - n as f64).max(0.0)
}

/// Lower bound for the graph equality task:
/// `max(0, ((sum_x N_x + N)(s - 1) + N) / (N alpha))`.
pub fn graph_bound(g: &Graph, s: f64) -> Result<f64> {
    let alpha = independence_number(g)? as f64;
    let n = g.n_vertices() as f64;
    let total_degree: usize = (0..g.n_vertices()).map(|v| g.degree(v)).sum();
    Ok((((total_degree as f64 + n) * (s - 1.0) + n) / (n * alpha)).max(0.0))
}

/// Lower bound for pair distinguishability: `max(0, (N - 1)(s - 1) + 1)`.
pub fn pairdist_bound(n: usize, s: f64) -> f64 {
    ((n as f64 - 1.0) * (s - 1.0) + 1.0).max(0.0)
}

/// Task families with known optimal success under a message-dimension cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimFamily {
    /// Pair distinguishability on `n` inputs with a `d_c`-level message.
    PairDist { n: usize, d_c: usize },
    /// Equality problem on the odd cycle with `n` vertices.
    Cycle { n: usize },
    /// `(2, d)` RAC with a `d_c`-level message (upper bound).
    Rac2 { d: usize, d_c: usize },
}

/// Best classical success with a dimension-bounded message.
///
/// For pair distinguishability with a bit, the optimum splits the inputs into
/// halves: `1/2 + floor(N/2) ceil(N/2) / (N(N-1))`.
pub fn dim_bounded_success(family: DimFamily) -> Result<f64> {
    match family {
        DimFamily::PairDist { n, d_c: 2 } if n >= 2 => {
            let (lo, hi) = ((n / 2) as f64, n.div_ceil(2) as f64);
            Ok(0.5 + lo * hi / (n * (n - 1)) as f64)
        }
        DimFamily::Cycle { n } if n >= 3 && n % 2 == 1 => Ok(1.0 - 2.0 / (3.0 * n as f64)),
        DimFamily::Rac2 { d, d_c } if d >= 2 && d_c >= 1 => {
            Ok((0.5 * (1.0 + d_c as f64 / (d * d) as f64)).min(1.0))
        }
        other => Err(Error::UnsupportedFamily(format!("{other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete_graph, cycle_graph};
    use crate::task::{graph_equality_task, pair_distinguishability_task, rac_task};

    /// Exhaustive oracle: best success over all deterministic encodings into
    /// `k` messages (optimal decoding per message).
    fn brute_force_success(task: &TaskSpec, k: usize) -> f64 {
        let n = task.n_inputs();
        let total = k.pow(n as u32);
        (0..total)
            .map(|code| {
                let digits = base_digits(code, k, n);
                let enc = Encoding::deterministic(k, n, |x| digits[x]);
                classical_success_given_encoding(task, &enc).unwrap().success
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn distinguishability_examples() {
        let prior = [0.25; 4];
        assert_eq!(classical_distinguishability(&Encoding::identity(4), &prior).unwrap(), 1.0);
        let constant = Encoding::deterministic(1, 4, |_| 0);
        assert_eq!(classical_distinguishability(&constant, &prior).unwrap(), 0.25);
        let halves = Encoding::deterministic(2, 4, |x| x / 2);
        assert_eq!(classical_distinguishability(&halves, &prior).unwrap(), 0.5);
        assert!(classical_distinguishability(&halves, &[0.5; 2]).is_err());
    }

    #[test]
    fn success_given_encoding_examples() {
        let rac = rac_task(2, 2).unwrap();
        assert_eq!(classical_success_given_encoding(&rac, &Encoding::identity(4)).unwrap().success, 1.0);
        let constant = Encoding::deterministic(1, 4, |_| 0);
        let r = classical_success_given_encoding(&rac, &constant).unwrap();
        assert!((r.success - 0.5).abs() < 1e-15);
        assert_eq!(r.decoding, vec![vec![0, 0]]);
        let c5 = graph_equality_task(&cycle_graph(5).unwrap()).unwrap();
        let v = classical_success_given_encoding(&c5, &Encoding::identity(5)).unwrap().success;
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn message_counts() {
        assert_eq!(canonical_message_count(&rac_task(2, 2).unwrap()).unwrap(), 4);
        let c5 = graph_equality_task(&cycle_graph(5).unwrap()).unwrap();
        assert_eq!(canonical_message_count(&c5).unwrap(), 32);
        assert_eq!(canonical_message_count(&pair_distinguishability_task(3).unwrap()).unwrap(), 27);
        assert!(matches!(
            canonical_message_count(&pair_distinguishability_task(6).unwrap()),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn rac22_frontier_points() {
        let t = rac_task(2, 2).unwrap();
        for (p, s) in [(1.0, 1.0), (0.5, 0.75), (0.25, 0.5)] {
            let fp = classical_frontier(&t, p).unwrap();
            assert!((fp.lp_value - s).abs() < 1e-7, "p={p}: {}", fp.lp_value);
            assert!((fp.best_success - s).abs() < 1e-7);
            let d = classical_distinguishability(&fp.encoding, t.prior()).unwrap();
            assert!(d <= p + 1e-9);
        }
        assert!(matches!(classical_frontier(&t, 0.2), Err(Error::Infeasible(_))));
    }

    #[test]
    fn inverse_direction_matches() {
        let t = rac_task(2, 2).unwrap();
        let fp = classical_min_distinguishability(&t, 0.75).unwrap();
        assert!((fp.dist_cap - 0.5).abs() < 1e-6);
        assert!(fp.best_success >= 0.75 - 1e-7);
    }

    #[test]
    fn binary_min_form_agrees() {
        let t = graph_equality_task(&cycle_graph(5).unwrap()).unwrap();
        let enc = Encoding::new(2, 5, vec![0.3, 1.0, 0.0, 0.5, 0.2, 0.7, 0.0, 1.0, 0.5, 0.8]).unwrap();
        let direct = classical_success_given_encoding(&t, &enc).unwrap().success;
        let mut mins = 0.0;
        for m in 0..2 {
            for y in 0..5 {
                let a: f64 = (0..5).map(|x| t.coeff(x, y, 0) * enc.prob(m, x)).sum();
                let b: f64 = (0..5).map(|x| t.coeff(x, y, 1) * enc.prob(m, x)).sum();
                mins += a.min(b);
            }
        }
        assert!((direct - (1.0 - mins)).abs() < 1e-12);
    }

    #[test]
    fn closed_form_bounds() {
        assert_eq!(rac_bound(2, 0.75), 0.5);
        let s = 0.5 * (1.0 + 1.0 / 3f64.sqrt());
        assert!((rac_bound(2, s) - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(rac_bound(3, 2.0 / 3.0), 0.0);

        let c5 = cycle_graph(5).unwrap();
        assert!((graph_bound(&c5, 1.0).unwrap() - 0.5).abs() < 1e-12);
        let sin = (std::f64::consts::PI / 10.0).sin();
        let s = 1.0 - 2.0 / 3.0 * sin * sin;
        assert!((graph_bound(&c5, s).unwrap() - 0.5 * (1.0 - 2.0 * sin * sin)).abs() < 1e-12);
        assert!((graph_bound(&c5, s).unwrap() - 0.40451).abs() < 1e-5);
        assert!((graph_bound(&complete_graph(4), 1.0).unwrap() - 1.0).abs() < 1e-12);

        assert!((pairdist_bound(3, 0.933) - 0.866).abs() < 1e-12);
        assert!((pairdist_bound(5, 0.8847) - 0.5388).abs() < 1e-12);
        assert_eq!(pairdist_bound(2, 1.0), 1.0);
    }

    #[test]
    fn dim_bounded_values_match_brute_force() {
        for n in 2..=6 {
            let task = pair_distinguishability_task(n).unwrap();
            let closed = dim_bounded_success(DimFamily::PairDist { n, d_c: 2 }).unwrap();
            let brute = brute_force_success(&task, 2);
            assert!((closed - brute).abs() < 1e-12, "N={n}: {closed} vs {brute}");
        }
        assert!((dim_bounded_success(DimFamily::PairDist { n: 4, d_c: 2 }).unwrap() - 5.0 / 6.0).abs() < 1e-15);

        let c5 = dim_bounded_success(DimFamily::Cycle { n: 5 }).unwrap();
        assert!((c5 - 13.0 / 15.0).abs() < 1e-15);
        let task = graph_equality_task(&cycle_graph(5).unwrap()).unwrap();
        assert!((brute_force_success(&task, 2) - c5).abs() < 1e-12);

        assert_eq!(dim_bounded_success(DimFamily::Rac2 { d: 2, d_c: 2 }).unwrap(), 0.75);
        assert!((brute_force_success(&rac_task(2, 2).unwrap(), 2) - 0.75).abs() < 1e-12);
        assert!(brute_force_success(&rac_task(2, 3).unwrap(), 3)
            <= dim_bounded_success(DimFamily::Rac2 { d: 3, d_c: 3 }).unwrap() + 1e-12);

        assert!(matches!(
            dim_bounded_success(DimFamily::PairDist { n: 4, d_c: 3 }),
            Err(Error::UnsupportedFamily(_))
        ));
        assert!(dim_bounded_success(DimFamily::Cycle { n: 4 }).is_err());
    }
}
