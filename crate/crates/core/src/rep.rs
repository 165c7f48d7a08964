//! Operators on the vector space spanned by the splits of a finite colored
//! poset: raising operators, solved diagonal operators, and exact checks of
//! the relations an upper minuscule representation must satisfy.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::axioms::is_d_complete;
use crate::bitset::ElementSet;
use crate::dynkin::Color;
use crate::poset::{ColoredPoset, PosetError, Split};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("split count exceeds cap {0}")]
    CapExceeded(usize),
    #[error("operator dimensions do not match the split space")]
    DimensionMismatch,
    #[error("diagonal for color {color} is inconsistent: {reason}")]
    Inconsistent { color: String, reason: String },
    #[error("h_{color} takes value {value} on split {split}, below -1")]
    EigenvalueOutOfRange { split: usize, color: String, value: i64 },
    #[error("h_{color} on split {split} is {value}, but the filter {has} a minimal element of that color")]
    IffViolation {
        split: usize,
        color: String,
        value: i64,
        has: &'static str,
    },
}

impl From<PosetError> for RepError {
    fn from(e: PosetError) -> Self {
        match e {
            PosetError::CapExceeded(n) => RepError::CapExceeded(n),
            other => unreachable!("split enumeration only fails on the cap: {other}"),
        }
    }
}

/// Moving the minimal element `element` (of color `color`) from the filter
/// of split `from` to its ideal gives split `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Move {
    pub from: usize,
    pub color: Color,
    pub element: usize,
    pub to: usize,
}

#[derive(Clone, Debug)]
pub struct SplitSpace<'p> {
    poset: &'p ColoredPoset,
    splits: Vec<Split>,
    moves: Vec<Move>,
}

impl<'p> SplitSpace<'p> {
    pub fn new(p: &'p ColoredPoset, cap: usize) -> Result<Self, RepError> {
        let splits = p.splits(cap)?;
        let index: HashMap<&ElementSet, usize> = splits.iter().enumerate().map(|(i, s)| (&s.filter, i)).collect();
        let mut moves = Vec::new();
        for (from, s) in splits.iter().enumerate() {
            for x in p.minimal_in(&s.filter) {
                let mut smaller = s.filter.clone();
                smaller.remove(x);
                moves.push(Move {
                    from,
                    color: p.color(x),
                    element: x,
                    to: index[&smaller],
                });
            }
        }
        Ok(Self {
            poset: p,
            splits,
            moves,
        })
    }

    pub fn poset(&self) -> &ColoredPoset {
        self.poset
    }

    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn dim(&self) -> usize {
        self.splits.len()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    /// Whether the filter of split `s` has a minimal element of color `a`.
    pub fn has_minimal_of_color(&self, s: usize, a: Color) -> bool {
        self.moves_from(s).any(|m| m.color == a)
    }

    fn moves_from(&self, s: usize) -> impl Iterator<Item = &Move> {
        let start = self.moves.partition_point(|m| m.from < s);
        self.moves[start..].iter().take_while(move |m| m.from == s)
    }
}

/// Square integer matrix stored by columns: `cols[j]` is the image of basis
/// vector `j`, as sorted `(row, value)` pairs without zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    cols: Vec<BTreeMap<usize, i64>>,
}

impl SparseMatrix {
    pub fn zero(dim: usize) -> Self {
        Self {
            cols: vec![BTreeMap::new(); dim],
        }
    }

    pub fn diagonal(values: &[i64]) -> Self {
        let mut m = Self::zero(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.add(i, i, v);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> i64 {
        self.cols[col].get(&row).copied().unwrap_or(0)
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.cols[col].iter().map(|(&r, &v)| (r, v))
    }

    fn add(&mut self, row: usize, col: usize, v: i64) {
        if v == 0 {
            return;
        }
        let e = self.cols[col].entry(row).or_insert(0);
        *e += v;
        if *e == 0 {
            self.cols[col].remove(&row);
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.dim());
        for (j, col) in rhs.cols.iter().enumerate() {
            for (&k, &b) in col {
                for (&i, &a) in &self.cols[k] {
                    out.add(i, j, a * b);
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, -1)
    }

    fn combine(&self, rhs: &Self, factor: i64) -> Self {
        let mut out = self.clone();
        for (j, col) in rhs.cols.iter().enumerate() {
            for (&i, &v) in col {
                out.add(i, j, factor * v);
            }
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::zero(self.dim()).combine(self, k)
    }

    /// `[self, rhs]`.
    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Index of a column with a nonzero entry.
    pub fn nonzero_column(&self) -> Option<usize> {
        self.cols.iter().position(|c| !c.is_empty())
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_column().is_none()
    }

    pub fn max_column_support(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).max().unwrap_or(0)
    }
}

/// `X_a`: a unit entry for every color-`a` move.
pub fn raising_operator(s: &SplitSpace, a: Color) -> SparseMatrix {
    let mut m = SparseMatrix::zero(s.dim());
    for mv in s.moves.iter().filter(|m| m.color == a) {
        m.add(mv.to, mv.from, 1);
    }
    m
}

/// `values[b][split]` is the eigenvalue of `h_b` on that split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonals {
    pub values: Vec<Vec<i64>>,
}

impl Diagonals {
    pub fn operator(&self, b: Color) -> SparseMatrix {
        SparseMatrix::diagonal(&self.values[b.0])
    }
}

/// Solves for the eigenvalues forced by `h_b(F − x) − h_b(F) = θ_ab` along
/// every color-`a` move and `h_a(F) = −1` wherever `F` has a minimal
/// element of color `a`. The move graph is connected, so a solution is
/// unique when it exists.
pub fn solve_diagonals(s: &SplitSpace) -> Result<Diagonals, RepError> {
    let p = s.poset;
    let d = p.diagram();
    let n = s.dim();
    let mut adjacency: Vec<Vec<(usize, i64, usize)>> = vec![Vec::new(); n];
    for (i, mv) in s.moves.iter().enumerate() {
        adjacency[mv.from].push((mv.to, 1, i));
        adjacency[mv.to].push((mv.from, -1, i));
    }
    let mut values = Vec::with_capacity(d.len());
    for b in d.colors() {
        let label = d.label(b).to_string();
        // Potentials relative to split 0, then shifted onto the anchors.
        let mut phi: Vec<Option<i64>> = vec![None; n];
        phi[0] = Some(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let pu = phi[u].expect("queued splits are solved");
            for &(v, dir, mi) in &adjacency[u] {
                let step = d.theta(s.moves[mi].color, b);
                let pv = pu + dir * step;
                match phi[v] {
                    None => {
                        phi[v] = Some(pv);
                        queue.push_back(v);
                    }
                    Some(old) if old != pv => {
                        let mv = s.moves[mi];
                        return Err(RepError::Inconsistent {
                            color: label,
                            reason: format!(
                                "moving element {} from split {} to {} closes a cycle with nonzero total {}",
                                mv.element,
                                mv.from,
                                mv.to,
                                pv - old
                            ),
                        });
                    }
                    Some(_) => {}
                }
            }
        }
        let phi: Vec<i64> = phi.into_iter().map(|v| v.expect("move graph is connected")).collect();
        let mut offset: Option<(usize, i64)> = None;
        for sp in 0..n {
            if !s.has_minimal_of_color(sp, b) {
                continue;
            }
            let want = -1 - phi[sp];
            match offset {
                None => offset = Some((sp, want)),
                Some((first, o)) if o != want => {
                    return Err(RepError::Inconsistent {
                        color: label,
                        reason: format!(
                            "anchors at splits {first} and {sp} both need h = -1 but differ by {}",
                            phi[sp] - phi[first]
                        ),
                    });
                }
                Some(_) => {}
            }
        }
        let (_, o) = offset.ok_or_else(|| RepError::Inconsistent {
            color: label.clone(),
            reason: "no split has a minimal element of this color".into(),
        })?;
        let h: Vec<i64> = phi.iter().map(|v| v + o).collect();
        for (sp, &v) in h.iter().enumerate() {
            if v < -1 {
                return Err(RepError::EigenvalueOutOfRange {
                    split: sp,
                    color: label,
                    value: v,
                });
            }
            let has = s.has_minimal_of_color(sp, b);
            if (v == -1) != has {
                return Err(RepError::IffViolation {
                    split: sp,
                    color: label,
                    value: v,
                    has: if has { "has" } else { "has no" },
                });
            }
        }
        values.push(h);
    }
    Ok(Diagonals { values })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    /// One of `XX`, `HH`, `HX`, `X2`, `range`, `iff`.
    pub relation: String,
    pub colors: Vec<String>,
    pub holds: bool,
    /// A split whose basis vector exposes the failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Exact checks of every relation over `xs[a] = X_a` and `hs[b] = H_b`.
pub fn verify_relations(s: &SplitSpace, xs: &[SparseMatrix], hs: &[SparseMatrix]) -> Result<RelationReport, RepError> {
    let d = s.poset.diagram();
    let n = s.dim();
    if xs.len() != d.len() || hs.len() != d.len() || xs.iter().chain(hs).any(|m| m.dim() != n) {
        return Err(RepError::DimensionMismatch);
    }
    let label = |c: Color| d.label(c).to_string();
    let mut checks = Vec::new();
    let mut push = |relation: &str, colors: Vec<String>, witness: Option<usize>| {
        checks.push(RelationCheck {
            relation: relation.into(),
            colors,
            holds: witness.is_none(),
            witness,
        });
    };
    for a in d.colors() {
        for b in d.colors() {
            if a == b {
                continue;
            }
            let mut nested = xs[b.0].clone();
            for _ in 0..(1 - d.theta(b, a)) {
                nested = xs[a.0].commutator(&nested);
            }
            push("XX", vec![label(a), label(b)], nested.nonzero_column());
        }
    }
    for a in d.colors() {
        for b in d.colors() {
            push("HH", vec![label(b), label(a)], hs[b.0].commutator(&hs[a.0]).nonzero_column());
        }
    }
    for a in d.colors() {
        for b in d.colors() {
            let lhs = hs[b.0].commutator(&xs[a.0]);
            let rhs = xs[a.0].scale(d.theta(a, b));
            push("HX", vec![label(b), label(a)], lhs.sub(&rhs).nonzero_column());
        }
    }
    for a in d.colors() {
        push("X2", vec![label(a)], xs[a.0].mul(&xs[a.0]).nonzero_column());
    }
    for b in d.colors() {
        let off_diagonal = (0..n).find(|&j| hs[b.0].column(j).any(|(i, _)| i != j));
        let range = (0..n).find(|&j| hs[b.0].entry(j, j) < -1);
        push("range", vec![label(b)], off_diagonal.or(range));
        let iff = (0..n).find(|&j| (hs[b.0].entry(j, j) == -1) != s.has_minimal_of_color(j, b));
        push("iff", vec![label(b)], iff);
    }
    Ok(RelationReport { checks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepCertificate {
    pub carries: bool,
    /// Filter of each split as a membership bit string, element 0 first.
    pub splits: Vec<String>,
    /// Split index → color label → eigenvalue of `h`.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub eigenvalues: BTreeMap<usize, BTreeMap<String, i64>>,
    pub relations: Vec<RelationCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub is_d_complete: bool,
    pub agrees_with_classification: bool,
}

pub fn carries_upper_minuscule(p: &ColoredPoset, cap: usize) -> Result<RepCertificate, RepError> {
    let s = SplitSpace::new(p, cap)?;
    let d = p.diagram();
    let splits = s.splits.iter().map(|sp| sp.filter.to_bit_string()).collect();
    let xs: Vec<SparseMatrix> = d.colors().map(|a| raising_operator(&s, a)).collect();
    let d_complete = is_d_complete(p);
    let (carries, eigenvalues, relations, failure) = match solve_diagonals(&s) {
        Err(e) => (false, BTreeMap::new(), Vec::new(), Some(e.to_string())),
        Ok(diag) => {
            let hs: Vec<SparseMatrix> = d.colors().map(|b| diag.operator(b)).collect();
            let report = verify_relations(&s, &xs, &hs)?;
            let mut table: BTreeMap<usize, BTreeMap<String, i64>> = BTreeMap::new();
            for b in d.colors() {
                for (sp, &v) in diag.values[b.0].iter().enumerate() {
                    table.entry(sp).or_default().insert(d.label(b).to_string(), v);
                }
            }
            let failure = report.failures().next().map(|f| {
                format!(
                    "{} fails for colors {:?} on split {}",
                    f.relation,
                    f.colors,
                    f.witness.expect("failures carry a witness")
                )
            });
            (report.all_hold(), table, report.checks, failure)
        }
    };
    Ok(RepCertificate {
        carries,
        splits,
        eigenvalues,
        relations,
        failure,
        is_d_complete: d_complete,
        agrees_with_classification: carries == d_complete,
    })
}
