//! Weyl group words over a diagram: action on weights, exact matrices on
//! simple-root coordinates, lengths, λ-minuscule words and heaps.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::axioms::is_dominant_minuscule_heap;
use crate::dynkin::{Color, DynkinDiagram};
use crate::poset::{ColoredPoset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("not a dominant minuscule heap")]
    NotAHeap,
    #[error("no dominant weight fits: {0}")]
    Infeasible(String),
    #[error("search budget exhausted after visiting {0} weights")]
    BudgetExceeded(usize),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// An integral weight, stored as its values `λ(h_a)` on the colors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Weight {
    pub coords: Vec<i64>,
}

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Self { coords }
    }

    pub fn zero(n: usize) -> Self {
        Self { coords: vec![0; n] }
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn get(&self, a: Color) -> i64 {
        self.coords[a.0]
    }

    /// `s_b` applied in place.
    fn reflect(&mut self, d: &DynkinDiagram, b: Color) {
        let k = self.coords[b.0];
        for c in d.colors() {
            self.coords[c.0] -= k * d.theta(b, c);
        }
    }

    /// Subtracts the simple root `α_b`, whose value on `h_c` is `θ_bc`.
    fn subtract_root(&mut self, d: &DynkinDiagram, b: Color) {
        for c in d.colors() {
            self.coords[c.0] -= d.theta(b, c);
        }
    }
}

/// `s_{b_k} ⋯ s_{b_1}`, stored as `[b_1, …, b_k]`: the first letter is
/// applied first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct WeylWord {
    pub letters: Vec<Color>,
}

impl WeylWord {
    pub fn new(letters: Vec<Color>) -> Self {
        Self { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn labels(&self, d: &DynkinDiagram) -> Vec<String> {
        self.letters.iter().map(|&c| d.label(c).to_string()).collect()
    }
}

/// Square integer matrix on simple-root coordinates; column `c` holds the
/// image of `α_c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylMatrix {
    n: usize,
    data: Vec<i64>,
}

impl WeylMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Self { n, data }
    }

    /// `s_b`: `α_c ↦ α_c − θ_cb α_b`.
    pub fn generator(d: &DynkinDiagram, b: Color) -> Self {
        let mut m = Self::identity(d.len());
        for c in d.colors() {
            m.data[b.0 * m.n + c.0] -= d.theta(c, b);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.data[row * self.n + col]
    }

    pub fn column(&self, col: usize) -> Vec<i64> {
        (0..self.n).map(|r| self.entry(r, col)).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.n;
        assert_eq!(n, rhs.n, "matrix dimensions differ");
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Self { n, data }
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).map(<[i64]>::to_vec).collect()
    }
}

pub fn act_on_weight(d: &DynkinDiagram, word: &WeylWord, wt: &Weight) -> Weight {
    let mut out = wt.clone();
    for &b in &word.letters {
        out.reflect(d, b);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MinusculeCheck {
    pub holds: bool,
    /// 1-based index of the first step whose running weight does not take
    /// the value 1 on the letter's coroot.
    pub failing_step: Option<usize>,
}

pub fn is_lambda_minuscule(d: &DynkinDiagram, word: &WeylWord, wt: &Weight) -> MinusculeCheck {
    let mut mu = wt.clone();
    for (j, &b) in word.letters.iter().enumerate() {
        if mu.get(b) != 1 {
            return MinusculeCheck {
                holds: false,
                failing_step: Some(j + 1),
            };
        }
        mu.subtract_root(d, b);
    }
    MinusculeCheck {
        holds: true,
        failing_step: None,
    }
}

pub fn word_matrix(d: &DynkinDiagram, word: &WeylWord) -> WeylMatrix {
    word.letters
        .iter()
        .fold(WeylMatrix::identity(d.len()), |acc, &b| WeylMatrix::generator(d, b).mul(&acc))
}

pub fn words_equal(d: &DynkinDiagram, w1: &WeylWord, w2: &WeylWord) -> bool {
    word_matrix(d, w1) == word_matrix(d, w2)
}

/// Length of the group element. A letter `b` with `w⁻¹(α_b)` negative is a
/// left descent; stripping it shortens `w` by one.
pub fn weyl_length(d: &DynkinDiagram, word: &WeylWord) -> usize {
    let gens: Vec<WeylMatrix> = d.colors().map(|b| WeylMatrix::generator(d, b)).collect();
    let mut inverse = word
        .letters
        .iter()
        .fold(WeylMatrix::identity(d.len()), |acc, &b| acc.mul(&gens[b.0]));
    let mut length = 0;
    loop {
        let descent = d.colors().find(|&b| {
            let col = inverse.column(b.0);
            col.iter().all(|&x| x <= 0) && col.iter().any(|&x| x != 0)
        });
        match descent {
            Some(b) => {
                inverse = inverse.mul(&gens[b.0]);
                length += 1;
            }
            None => return length,
        }
    }
}

/// One word per linear extension. Maximal elements are applied first: each
/// new letter adds a minimal element below the heap built so far.
pub fn heap_to_words(p: &ColoredPoset, cap: usize) -> Result<Vec<WeylWord>, WeylError> {
    if !is_dominant_minuscule_heap(p) {
        return Err(WeylError::NotAHeap);
    }
    Ok(p.linear_extensions(cap)?.iter().map(|ext| word_of_extension(p, ext)).collect())
}

fn word_of_extension(p: &ColoredPoset, ext: &[usize]) -> WeylWord {
    WeylWord::new(ext.iter().rev().map(|&x| p.color(x)).collect())
}

/// The least dominant λ making the word of the first linear extension
/// λ-minuscule. Step `j` forces `λ(h_{b_j}) = 1 + Σ_{i<j} θ_{b_i b_j}`;
/// colors never forced stay 0.
pub fn solve_lambda(p: &ColoredPoset) -> Result<Weight, WeylError> {
    let d = p.diagram();
    let ext = p.first_linear_extension();
    let word = word_of_extension(p, &ext);
    let mut forced: Vec<Option<i64>> = vec![None; d.len()];
    for (j, &b) in word.letters.iter().enumerate() {
        let value = 1 + word.letters[..j].iter().map(|&a| d.theta(a, b)).sum::<i64>();
        match forced[b.0] {
            Some(v) if v != value => {
                return Err(WeylError::Infeasible(format!(
                    "step {} needs λ(h_{}) = {value}, an earlier step needs {v}",
                    j + 1,
                    d.label(b)
                )))
            }
            _ => forced[b.0] = Some(value),
        }
    }
    let wt = Weight::new(forced.iter().map(|v| v.unwrap_or(0)).collect());
    if let Some(a) = d.colors().find(|&a| wt.get(a) < 0) {
        return Err(WeylError::Infeasible(format!(
            "λ(h_{}) would be {}, so λ is not dominant",
            d.label(a),
            wt.get(a)
        )));
    }
    Ok(wt)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DfsOutcome {
    pub max_length: usize,
    pub terminated: bool,
    /// Distinct partial words visited, identified by how often each simple
    /// root has been subtracted.
    pub visited: usize,
}

/// Searches every λ-minuscule word starting at `wt` for the longest.
/// Words reaching the same root-lattice point share a subtree.
pub fn minuscule_dfs(d: &DynkinDiagram, wt: &Weight, step_budget: usize) -> Result<DfsOutcome, WeylError> {
    struct Search<'a> {
        d: &'a DynkinDiagram,
        budget: usize,
        memo: HashMap<Vec<u32>, usize>,
    }
    impl Search<'_> {
        fn longest(&mut self, counts: &mut Vec<u32>, mu: &Weight) -> Result<usize, WeylError> {
            if let Some(&v) = self.memo.get(counts) {
                return Ok(v);
            }
            if self.memo.len() >= self.budget {
                return Err(WeylError::BudgetExceeded(self.memo.len()));
            }
            let mut best = 0;
            for b in self.d.colors() {
                if mu.get(b) != 1 {
                    continue;
                }
                let mut next = mu.clone();
                next.subtract_root(self.d, b);
                counts[b.0] += 1;
                let sub = self.longest(counts, &next);
                counts[b.0] -= 1;
                best = best.max(1 + sub?);
            }
            self.memo.insert(counts.clone(), best);
            Ok(best)
        }
    }
    let mut search = Search {
        d,
        budget: step_budget.max(1),
        memo: HashMap::new(),
    };
    let max_length = search.longest(&mut vec![0; d.len()], wt)?;
    Ok(DfsOutcome {
        max_length,
        terminated: true,
        visited: search.memo.len(),
    })
}
