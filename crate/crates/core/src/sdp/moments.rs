//! Operator words over projective measurement letters.
//!
//! A letter `(y, z)` stands for `M_{z|y}` with `z < D - 1`; the last outcome
//! is `1 - sum` and never appears. Products reduce by projectivity:
//! `M_{z|y} M_{z|y} = M_{z|y}` and `M_{z|y} M_{z'|y} = 0` for `z != z'`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::task::TaskSpec;

/// Largest admissible number of monomials.
pub const MOMENT_CAP: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub y: u16,
    pub z: u16,
}

/// A reduced word (no two neighbouring letters share a setting).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// Reduced product `self * other`, or `None` when it vanishes.
    pub fn mul(&self, other: &Word) -> Option<Word> {
        reduce(self.0.iter().chain(&other.0).copied())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| format!("M({}|{})", l.z + 1, l.y + 1)).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Projective reduction of a letter sequence.
pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Option<Word> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        match out.last() {
            Some(prev) if prev.y == l.y => {
                if prev.z != l.z {
                    return None;
                }
            }
            _ => out.push(l),
        }
    }
    Some(Word(out))
}

/// Moment-matrix entry `(i, j)` refers to the reduced word `w_i^dagger w_j`,
/// which is looked up in a table of adjoint classes: each class `{u, u^dagger}`
/// gets one complex unknown (real when `u` is self-adjoint).
#[derive(Debug, Clone)]
pub struct MomentStructure {
    level: usize,
    n_settings: usize,
    n_outcomes: usize,
    monomials: Vec<Word>,
    /// Canonical representatives of the adjoint classes, in first-seen order.
    classes: Vec<Word>,
    class_of: HashMap<Word, (usize, bool)>,
    /// `(class, conjugated)` per upper-triangle entry, `None` for zero.
    entries: Vec<Option<(usize, bool)>>,
}

pub fn build_moment_structure(task: &TaskSpec, level: usize) -> Result<MomentStructure> {
    MomentStructure::new(task.n_settings(), task.n_outcomes(), level)
}

impl MomentStructure {
    pub fn new(n_settings: usize, n_outcomes: usize, level: usize) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("hierarchy level must be at least 1".into()));
        }
        let letters: Vec<Letter> = (0..n_settings)
            .flat_map(|y| (0..n_outcomes.saturating_sub(1)).map(move |z| Letter { y: y as u16, z: z as u16 }))
            .collect();
        let mut monomials = vec![Word::identity()];
        let mut layer = vec![Word::identity()];
        for _ in 0..level {
            let mut next = Vec::new();
            for w in &layer {
                for &l in &letters {
                    if w.0.last().is_some_and(|p| p.y == l.y) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                    if monomials.len() + next.len() > MOMENT_CAP {
                        return Err(Error::SizeExceeded { size: monomials.len() + next.len(), cap: MOMENT_CAP });
                    }
                }
            }
            monomials.extend(next.iter().cloned());
            layer = next;
        }

        let n = monomials.len();
        let adjoints: Vec<Word> = monomials.iter().map(Word::adjoint).collect();
        let mut classes = Vec::new();
        let mut class_of: HashMap<Word, (usize, bool)> = HashMap::new();
        let mut entries = Vec::with_capacity(n * (n + 1) / 2);
        for j in 0..n {
            for i in 0..=j {
                let Some(w) = adjoints[i].mul(&monomials[j]) else {
                    entries.push(None);
                    continue;
                };
                let slot = match class_of.get(&w) {
                    Some(&s) => s,
                    None => {
                        let adj = w.adjoint();
                        let (canon, other) = if w <= adj { (w.clone(), adj) } else { (adj, w.clone()) };
                        let id = classes.len();
                        classes.push(canon.clone());
                        class_of.insert(canon, (id, false));
                        if other != classes[id] {
                            class_of.insert(other, (id, true));
                        }
                        class_of[&w]
                    }
                };
                entries.push(Some(slot));
            }
        }
        Ok(Self { level, n_settings, n_outcomes, monomials, classes, class_of, entries })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn size(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Word] {
        &self.monomials
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_word(&self, id: usize) -> &Word {
        &self.classes[id]
    }

    pub fn class_is_real(&self, id: usize) -> bool {
        self.classes[id].is_self_adjoint()
    }

    /// Class of the reduced word `w_i^dagger w_j` and whether it is the
    /// adjoint of the representative; `None` when the product vanishes.
    pub fn entry(&self, i: usize, j: usize) -> Option<(usize, bool)> {
        if i <= j {
            self.entries[j * (j + 1) / 2 + i]
        } else {
            self.entries[i * (i + 1) / 2 + j].map(|(c, conj)| (c, !conj))
        }
    }

    /// Class holding `tr(tau M_{z|y})` for `z < D - 1`.
    pub fn probability_class(&self, y: usize, z: usize) -> Option<usize> {
        if y >= self.n_settings || z + 1 >= self.n_outcomes {
            return None;
        }
        let w = Word(vec![Letter { y: y as u16, z: z as u16 }]);
        self.class_of.get(&w).map(|&(c, _)| c)
    }

    pub fn monomial_labels(&self) -> Vec<String> {
        self.monomials.iter().map(ToString::to_string).collect()
    }
}
