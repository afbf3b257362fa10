//! One-way communication tasks as normalized coefficient tensors `c(x, y, z)`.
//!
//! The sender receives `x` in `0..n_inputs`, the receiver `y` in
//! `0..n_settings` and outputs `z` in `0..n_outcomes`. A behavior
//! `p(z|x,y)` is scored by `S = sum c(x,y,z) p(z|x,y)`.
//!
//! Indexing conventions: RAC strings are big-endian base-`d`, graph vertices
//! follow the graph's vertex order, pair settings are lexicographic in `(x, x')`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;

const NORMALIZATION_TOL: f64 = 1e-9;
/// Largest dense coefficient tensor the builders will allocate.
pub const MAX_TENSOR_ENTRIES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct TaskSpec {
    label: String,
    n_inputs: usize,
    n_settings: usize,
    n_outcomes: usize,
    prior: Vec<f64>,
    coeffs: Vec<f64>,
}

impl TaskSpec {
    /// Builds a task with uniform prior. With `renormalize` set, the tensor is
    /// scaled to unit mass; otherwise a total off by more than 1e-9 is rejected.
    pub fn new(
        label: impl Into<String>,
        n_inputs: usize,
        n_settings: usize,
        n_outcomes: usize,
        coeffs: Vec<f64>,
        renormalize: bool,
    ) -> Result<Self> {
        if n_inputs == 0 || n_settings == 0 || n_outcomes == 0 {
            return Err(Error::ShapeMismatch("alphabet sizes must be positive".into()));
        }
        let expected = n_inputs
            .checked_mul(n_settings)
            .and_then(|v| v.checked_mul(n_outcomes))
            .ok_or_else(|| Error::Overflow("tensor size".into()))?;
        if coeffs.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "coefficient tensor has {} entries, expected {expected}",
                coeffs.len()
            )));
        }
        for (i, &v) in coeffs.iter().enumerate() {
            if v < 0.0 || !v.is_finite() {
                let z = i % n_outcomes;
                let y = (i / n_outcomes) % n_settings;
                let x = i / (n_outcomes * n_settings);
                return Err(Error::NegativeCoefficient { x, y, z, value: v });
            }
        }
        let total: f64 = coeffs.iter().sum();
        let coeffs = if (total - 1.0).abs() > NORMALIZATION_TOL {
            if !renormalize || total <= 0.0 {
                return Err(Error::NotNormalized { total });
            }
            coeffs.into_iter().map(|v| v / total).collect()
        } else {
            coeffs
        };
        Ok(Self {
            label: label.into(),
            n_inputs,
            n_settings,
            n_outcomes,
            prior: vec![1.0 / n_inputs as f64; n_inputs],
            coeffs,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn n_inputs(&self) -> usize {
        self.n_inputs
    }
    pub fn n_settings(&self) -> usize {
        self.n_settings
    }
    pub fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }
    pub fn prior(&self) -> &[f64] {
        &self.prior
    }
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        (x * self.n_settings + y) * self.n_outcomes + z
    }

    #[inline]
    pub fn coeff(&self, x: usize, y: usize, z: usize) -> f64 {
        self.coeffs[self.index(x, y, z)]
    }

    pub fn total_mass(&self) -> f64 {
        self.coeffs.iter().sum()
    }

    /// Nonzero entries as `(x, y, z, value)`, 0-based, in storage order.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &v)| v != 0.0).map(move |(i, &v)| {
            let z = i % self.n_outcomes;
            let y = (i / self.n_outcomes) % self.n_settings;
            let x = i / (self.n_outcomes * self.n_settings);
            (x, y, z, v)
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&TaskDocument::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: TaskDocument = serde_json::from_str(s)?;
        doc.try_into()
    }
}

/// Generic constructor. Equivalent to [`TaskSpec::new`] with an empty label.
pub fn make_task(
    n_inputs: usize,
    n_settings: usize,
    n_outcomes: usize,
    coeffs: Vec<f64>,
    renormalize: bool,
) -> Result<TaskSpec> {
    TaskSpec::new("custom", n_inputs, n_settings, n_outcomes, coeffs, renormalize)
}

/// Digits of `x` in base `d`, most significant first.
pub fn base_digits(mut x: usize, d: usize, n: usize) -> Vec<usize> {
    let mut digits = vec![0; n];
    for slot in digits.iter_mut().rev() {
        *slot = x % d;
        x /= d;
    }
    digits
}

/// The `(n, d)` random access code: the receiver must output dit `y` of `x`.
pub fn rac_task(n: usize, d: usize) -> Result<TaskSpec> {
    if n == 0 || d < 2 {
        return Err(Error::InvalidArgument(format!("rac_task needs n >= 1, d >= 2 (got n={n}, d={d})")));
    }
    let n_inputs = (0..n)
        .try_fold(1usize, |acc, _| acc.checked_mul(d))
        .filter(|&v| v <= 1_000_000)
        .ok_or_else(|| Error::Overflow(format!("{d}^{n} exceeds 10^6 inputs")))?;
    if n_inputs * n * d > MAX_TENSOR_ENTRIES * 4 {
        return Err(Error::Overflow(format!("tensor for ({n},{d}) RAC too large")));
    }
    let w = 1.0 / (n as f64 * n_inputs as f64);
    let mut coeffs = vec![0.0; n_inputs * n * d];
    for x in 0..n_inputs {
        for (y, &digit) in base_digits(x, d, n).iter().enumerate() {
            coeffs[(x * n + y) * d + digit] = w;
        }
    }
    TaskSpec::new(format!("rac({n},{d})"), n_inputs, n, d, coeffs, true)
}

/// Equality problem on a graph: outcome 0 for `x == y`, outcome 1 for `x` adjacent to `y`.
pub fn graph_equality_task(g: &Graph) -> Result<TaskSpec> {
    let n = g.n_vertices();
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    if 2 * n * n > MAX_TENSOR_ENTRIES {
        return Err(Error::Overflow(format!("graph task with {n} vertices exceeds dense cap")));
    }
    let total_degree: usize = (0..n).map(|v| g.degree(v)).sum();
    let w = 1.0 / (total_degree + n) as f64;
    let mut coeffs = vec![0.0; n * n * 2];
    for y in 0..n {
        coeffs[(y * n + y) * 2] = w;
        for &x in g.neighbors(y) {
            coeffs[(x * n + y) * 2 + 1] = w;
        }
    }
    TaskSpec::new(format!("graph-equality({})", g.label()), n, n, 2, coeffs, true)
}

/// Unordered pairs `(a, b)` with `a < b`, lexicographic.
pub fn pair_list(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// Pair distinguishability: given a pair containing `x`, name `x`.
pub fn pair_distinguishability_task(n: usize) -> Result<TaskSpec> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("pair task needs N >= 2 (got {n})")));
    }
    let pairs = pair_list(n);
    let m = pairs.len();
    if n * m * n > MAX_TENSOR_ENTRIES {
        return Err(Error::Overflow(format!("pair task with N={n} exceeds dense cap")));
    }
    let w = 1.0 / (n * (n - 1)) as f64;
    let mut coeffs = vec![0.0; n * m * n];
    for (y, &(a, b)) in pairs.iter().enumerate() {
        coeffs[(a * m + y) * n + a] = w;
        coeffs[(b * m + y) * n + b] = w;
    }
    TaskSpec::new(format!("pair-distinguishability({n})"), n, m, n, coeffs, true)
}

/// Conditional distributions `p(z|x,y)`, same layout as the task tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    n_inputs: usize,
    n_settings: usize,
    n_outcomes: usize,
    probs: Vec<f64>,
}

impl Behavior {
    pub fn new(n_inputs: usize, n_settings: usize, n_outcomes: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != n_inputs * n_settings * n_outcomes {
            return Err(Error::ShapeMismatch(format!(
                "behavior has {} entries, expected {}",
                probs.len(),
                n_inputs * n_settings * n_outcomes
            )));
        }
        for (k, slice) in probs.chunks(n_outcomes).enumerate() {
            let total: f64 = slice.iter().sum();
            if slice.iter().any(|&p| p < -1e-12) || (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "p(.|x={},y={}) is not a distribution (sum {total})",
                    k / n_settings,
                    k % n_settings
                )));
            }
        }
        Ok(Self { n_inputs, n_settings, n_outcomes, probs })
    }

    /// `p(z|x,y) = 1/D` everywhere.
    pub fn uniform(n_inputs: usize, n_settings: usize, n_outcomes: usize) -> Self {
        Self {
            n_inputs,
            n_settings,
            n_outcomes,
            probs: vec![1.0 / n_outcomes as f64; n_inputs * n_settings * n_outcomes],
        }
    }

    /// Behavior from a function `f(x, y) -> z` chosen with certainty.
    pub fn deterministic(
        n_inputs: usize,
        n_settings: usize,
        n_outcomes: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let mut probs = vec![0.0; n_inputs * n_settings * n_outcomes];
        for x in 0..n_inputs {
            for y in 0..n_settings {
                probs[(x * n_settings + y) * n_outcomes + f(x, y)] = 1.0;
            }
        }
        Self { n_inputs, n_settings, n_outcomes, probs }
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.n_inputs, self.n_settings, self.n_outcomes)
    }

    pub fn prob(&self, x: usize, y: usize, z: usize) -> f64 {
        self.probs[(x * self.n_settings + y) * self.n_outcomes + z]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Convex combination `lambda * self + (1 - lambda) * other`.
    pub fn mix(&self, other: &Behavior, lambda: f64) -> Result<Behavior> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch("behaviors differ in shape".into()));
        }
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        Ok(Behavior { probs, ..self.clone() })
    }
}

pub fn evaluate_success(task: &TaskSpec, behavior: &Behavior) -> Result<f64> {
    if behavior.shape() != (task.n_inputs, task.n_settings, task.n_outcomes) {
        return Err(Error::ShapeMismatch(format!(
            "task is {:?}, behavior is {:?}",
            (task.n_inputs, task.n_settings, task.n_outcomes),
            behavior.shape()
        )));
    }
    Ok(task.coeffs.iter().zip(&behavior.probs).map(|(c, p)| c * p).sum())
}

#[derive(Debug, Serialize, Deserialize)]
struct TaskDocument {
    label: String,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "D")]
    d: usize,
    prior: Vec<f64>,
    /// `[x, y, z, value]`, 1-based indices.
    coeffs: Vec<(usize, usize, usize, f64)>,
}

impl From<&TaskSpec> for TaskDocument {
    fn from(t: &TaskSpec) -> Self {
        TaskDocument {
            label: t.label.clone(),
            n: t.n_inputs,
            m: t.n_settings,
            d: t.n_outcomes,
            prior: t.prior.clone(),
            coeffs: t.nonzeros().map(|(x, y, z, v)| (x + 1, y + 1, z + 1, v)).collect(),
        }
    }
}

impl TryFrom<TaskDocument> for TaskSpec {
    type Error = Error;

    fn try_from(doc: TaskDocument) -> Result<Self> {
        let (n, m, d) = (doc.n, doc.m, doc.d);
        if n == 0 || m == 0 || d == 0 || n * m * d > MAX_TENSOR_ENTRIES * 4 {
            return Err(Error::ShapeMismatch(format!("bad task shape ({n},{m},{d})")));
        }
        let mut coeffs = vec![0.0; n * m * d];
        for &(x, y, z, v) in &doc.coeffs {
            if x == 0 || y == 0 || z == 0 || x > n || y > m || z > d {
                return Err(Error::ShapeMismatch(format!("entry [{x},{y},{z}] out of range")));
            }
            coeffs[((x - 1) * m + (y - 1)) * d + (z - 1)] = v;
        }
        if doc.prior.len() != n {
            return Err(Error::ShapeMismatch("prior length differs from N".into()));
        }
        let prior_total: f64 = doc.prior.iter().sum();
        if doc.prior.iter().any(|&p| p < 0.0) || (prior_total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument("prior is not a probability vector".into()));
        }
        let mut task = TaskSpec::new(doc.label, n, m, d, coeffs, false)?;
        task.prior = doc.prior;
        Ok(task)
    }
}
